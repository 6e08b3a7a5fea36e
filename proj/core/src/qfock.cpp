#include "ncprob/qfock.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <string>

namespace ncprob {

namespace {

std::vector<double> q_power_table(double q, int max_exponent) {
  std::vector<double> pw(static_cast<std::size_t>(max_exponent) + 1);
  pw[0] = 1.0;
  for (int k = 1; k <= max_exponent; ++k) pw[k] = pw[k - 1] * q;
  return pw;
}

int count_inversions(const std::vector<int>& perm) {
  int inv = 0;
  for (std::size_t i = 0; i < perm.size(); ++i) {
    for (std::size_t j = i + 1; j < perm.size(); ++j) {
      if (perm[i] > perm[j]) ++inv;
    }
  }
  return inv;
}

}  // namespace

QFockBasis::QFockBasis(ModeWindow window, int depth, std::size_t capacity)
    : window_(window), depth_(depth) {
  if (depth < 0) throw InvalidParameter("depth must be non-negative");
  const std::size_t width = static_cast<std::size_t>(window_.width());
  level_offsets_.assign(static_cast<std::size_t>(depth) + 2, 0);
  std::size_t total = 0;
  std::size_t level_count = 1;
  for (int n = 0; n <= depth; ++n) {
    level_offsets_[n] = total;
    if (level_count > capacity || total > capacity - level_count) {
      throw CapacityExceeded("q-Fock basis over " + std::to_string(capacity) +
                             " entries at level " + std::to_string(n));
    }
    total += level_count;
    if (n < depth) {
      if (level_count > capacity / width + 1) {
        throw CapacityExceeded("q-Fock basis level count overflow");
      }
      level_count *= width;
    }
  }
  level_offsets_[depth + 1] = total;

  entries_.reserve(total);
  entries_.emplace_back();  // vacuum
  for (int n = 1; n <= depth; ++n) {
    ModeSeq seq(static_cast<std::size_t>(n), window_.lo);
    while (true) {
      entries_.push_back(seq);
      // Odometer with the last position fastest, giving lexicographic order.
      int pos = n - 1;
      while (pos >= 0) {
        if (seq[pos] < window_.hi) {
          ++seq[pos];
          std::fill(seq.begin() + pos + 1, seq.end(), window_.lo);
          break;
        }
        --pos;
      }
      if (pos < 0) break;
    }
  }
}

std::size_t QFockBasis::index_of(const ModeSeq& seq) const {
  const int n = static_cast<int>(seq.size());
  if (n > depth_) throw InvalidParameter("sequence longer than basis depth");
  std::size_t offset = 0;
  for (int k = 0; k < n; ++k) {
    if (!window_.contains(seq[k])) {
      throw ModeOutOfWindow("mode " + std::to_string(seq[k]) + " outside window [" +
                            std::to_string(window_.lo) + "," + std::to_string(window_.hi) +
                            "]");
    }
    offset = offset * static_cast<std::size_t>(window_.width()) +
             static_cast<std::size_t>(seq[k] - window_.lo);
  }
  return level_offsets_[n] + offset;
}

int QFockBasis::level_of(std::size_t index) const {
  for (int n = 0; n <= depth_; ++n) {
    if (index < level_offsets_[n + 1]) return n;
  }
  throw InvalidParameter("basis index out of range");
}

void validate_q(double q) {
  if (!(std::abs(q) <= 0.99)) {
    throw InvalidParameter("q must lie in [-0.99, 0.99]; q = +-1 is not represented");
  }
}

SparseOperator q_creator(const QFockBasis& basis, double q, int mode) {
  validate_q(q);
  if (!basis.window().contains(mode)) {
    throw ModeOutOfWindow("creator mode " + std::to_string(mode) + " outside window");
  }
  SparseOperator op(basis.size());
  ModeSeq target;
  for (std::size_t idx = 0; idx < basis.size(); ++idx) {
    const ModeSeq& w = basis.entries()[idx];
    if (static_cast<int>(w.size()) >= basis.depth()) continue;  // truncation
    target.assign(1, mode);
    target.insert(target.end(), w.begin(), w.end());
    op.add_at(basis.index_of(target), idx, 1.0);
  }
  return op;
}

SparseOperator q_annihilator(const QFockBasis& basis, double q, int mode) {
  validate_q(q);
  if (!basis.window().contains(mode)) {
    throw ModeOutOfWindow("annihilator mode " + std::to_string(mode) + " outside window");
  }
  const auto pw = q_power_table(q, basis.depth());
  SparseOperator op(basis.size());
  ModeSeq target;
  for (std::size_t idx = 0; idx < basis.size(); ++idx) {
    const ModeSeq& w = basis.entries()[idx];
    for (std::size_t k = 0; k < w.size(); ++k) {
      if (w[k] != mode) continue;
      target = w;
      target.erase(target.begin() + static_cast<std::ptrdiff_t>(k));
      op.add_at(basis.index_of(target), idx, pw[k]);
    }
  }
  return op;
}

RelationReport check_q_relation(const QFockBasis& basis, double q, int i, int j) {
  const SparseOperator a_i = q_annihilator(basis, q, i);
  const SparseOperator c_j = q_creator(basis, q, j);
  SparseOperator defect = a_i * c_j;
  defect -= cplx(q) * (c_j * a_i);
  if (i == j) defect -= SparseOperator::identity(basis.size());

  RelationReport report;
  std::vector<std::size_t> boundary;
  for (const auto& [rc, v] : defect.entries()) {
    const double mag = std::abs(v);
    if (basis.level_of(rc.second) <= basis.depth() - 1) {
      report.interior_defect = std::max(report.interior_defect, mag);
    } else {
      report.boundary_defect = std::max(report.boundary_defect, mag);
      boundary.push_back(rc.second);
    }
  }
  std::sort(boundary.begin(), boundary.end());
  boundary.erase(std::unique(boundary.begin(), boundary.end()), boundary.end());
  report.boundary_columns = std::move(boundary);
  return report;
}

QGram::QGram(const QFockBasis& basis, double q) : q_(q) {
  validate_q(q);
  if (basis.depth() > kMaxLevel) {
    throw CapacityExceeded("Gram permutation sum is capped at level " +
                           std::to_string(kMaxLevel));
  }
  block_of_.assign(basis.size(), 0);
  pos_in_block_.assign(basis.size(), 0);

  const auto pw = q_power_table(q, kMaxLevel * (kMaxLevel - 1) / 2 + 1);
  min_eigenvalue_ = std::numeric_limits<double>::infinity();

  for (int level = 0; level <= basis.depth(); ++level) {
    // Group the level by sorted mode multiset; entries with different
    // multisets never pair.
    std::map<ModeSeq, std::vector<std::size_t>> groups;
    for (std::size_t idx = basis.level_begin(level); idx < basis.level_end(level); ++idx) {
      ModeSeq key = basis.entries()[idx];
      std::sort(key.begin(), key.end());
      groups[key].push_back(idx);
    }
    for (auto& [key, members] : groups) {
      const std::size_t m = members.size();
      Block block;
      block.level = level;
      block.members = members;
      block.dense.assign(m * m, 0.0);

      std::vector<int> perm(static_cast<std::size_t>(level));
      std::iota(perm.begin(), perm.end(), 0);
      ModeSeq permuted(static_cast<std::size_t>(level));
      do {
        const double weight = pw[static_cast<std::size_t>(count_inversions(perm))];
        for (std::size_t s = 0; s < m; ++s) {
          const ModeSeq& w = basis.entries()[members[s]];
          for (int k = 0; k < level; ++k) permuted[k] = w[perm[k]];
          for (std::size_t t = 0; t < m; ++t) {
            if (permuted == basis.entries()[members[t]]) {
              block.dense[s * m + t] += weight;
            }
          }
        }
      } while (std::next_permutation(perm.begin(), perm.end()));

      Eigen::MatrixXd g(m, m);
      for (std::size_t s = 0; s < m; ++s) {
        for (std::size_t t = 0; t < m; ++t) g(s, t) = block.dense[s * m + t];
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g, Eigen::EigenvaluesOnly);
      min_eigenvalue_ = std::min(min_eigenvalue_, es.eigenvalues().minCoeff());
      if (min_eigenvalue_ <= kDegenerateTolerance) {
        throw GramDegenerate("Gram block at level " + std::to_string(level) +
                             " has min eigenvalue " + std::to_string(min_eigenvalue_));
      }

      Eigen::LLT<Eigen::MatrixXd> llt(g);
      if (llt.info() != Eigen::Success) {
        throw GramDegenerate("Cholesky failed at level " + std::to_string(level));
      }
      Eigen::MatrixXd lt = llt.matrixL().transpose();
      Eigen::MatrixXd inv_lh =
          lt.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(m, m));
      block.inv_chol_h.assign(m * m, 0.0);
      for (std::size_t s = 0; s < m; ++s) {
        for (std::size_t t = 0; t < m; ++t) block.inv_chol_h[s * m + t] = inv_lh(s, t);
      }

      const std::uint32_t block_id = static_cast<std::uint32_t>(blocks_.size());
      for (std::size_t s = 0; s < m; ++s) {
        block_of_[members[s]] = block_id;
        pos_in_block_[members[s]] = static_cast<std::uint32_t>(s);
      }
      blocks_.push_back(std::move(block));
    }
  }
}

SparseVec QGram::apply(const SparseVec& x) const {
  SparseVec out;
  for (const auto& [i, v] : x) {
    const Block& b = blocks_[block_of_[i]];
    const std::size_t col = pos_in_block_[i];
    const std::size_t m = b.members.size();
    for (std::size_t r = 0; r < m; ++r) {
      const double g = b.dense[r * m + col];
      if (g == 0.0) continue;
      cplx& slot = out[b.members[r]];
      slot += g * v;
      if (slot == cplx{}) out.erase(b.members[r]);
    }
  }
  return out;
}

cplx QGram::inner(const SparseVec& x, const SparseVec& y) const {
  return vec_inner(apply(x), y);
}

SparseOperator QGram::to_operator(const QFockBasis& basis) const {
  SparseOperator g(basis.size());
  for (const Block& b : blocks_) {
    const std::size_t m = b.members.size();
    for (std::size_t r = 0; r < m; ++r) {
      for (std::size_t c = 0; c < m; ++c) {
        if (b.dense[r * m + c] != 0.0) {
          g.add_at(b.members[r], b.members[c], b.dense[r * m + c]);
        }
      }
    }
  }
  return g;
}

std::vector<SparseVec> QGram::orthonormal_vectors(const QFockBasis& basis,
                                                  const ModeWindow& test_modes,
                                                  int max_level) const {
  std::vector<SparseVec> out;
  for (std::size_t idx = 0; idx < basis.size(); ++idx) {
    if (basis.level_of(idx) > max_level) continue;
    const ModeSeq& w = basis.entries()[idx];
    if (!std::all_of(w.begin(), w.end(),
                     [&](int mode) { return test_modes.contains(mode); })) {
      continue;
    }
    const Block& b = blocks_[block_of_[idx]];
    const std::size_t t = pos_in_block_[idx];
    const std::size_t m = b.members.size();
    SparseVec v;
    for (std::size_t s = 0; s < m; ++s) {
      const double coeff = b.inv_chol_h[s * m + t];
      if (coeff != 0.0) v[b.members[s]] = coeff;
    }
    out.push_back(std::move(v));
  }
  return out;
}

double check_q_adjointness(const QFockBasis& basis, const QGram& gram, int mode) {
  const SparseOperator a = q_annihilator(basis, gram.q(), mode);
  const SparseOperator c = q_creator(basis, gram.q(), mode);
  const SparseOperator g = gram.to_operator(basis);
  SparseOperator defect = g * a;
  defect -= c.adjoint() * g;
  const int interior = basis.depth() - 1;
  return defect.max_abs_where([&](std::size_t, std::size_t col) {
    return basis.level_of(col) <= interior;
  });
}

double check_q_adjointness(const QFockBasis& basis, double q, int mode) {
  QGram gram(basis, q);
  return check_q_adjointness(basis, gram, mode);
}

cplx vacuum_expectation(const SparseOperator& op) { return op.at(0, 0); }

namespace {

void check_support_in_window(const AlgebraPolynomial& p, const ModeWindow& window) {
  std::string offenders;
  for (int mode : support(p)) {
    if (!window.contains(mode)) {
      if (!offenders.empty()) offenders += ", ";
      offenders += std::to_string(mode);
    }
  }
  if (!offenders.empty()) {
    throw ModeOutOfWindow("modes outside window [" + std::to_string(window.lo) + "," +
                          std::to_string(window.hi) + "]: " + offenders);
  }
}

}  // namespace

SparseOperator materialize(const AlgebraPolynomial& p, const QFockBasis& basis, double q) {
  validate_q(q);
  check_support_in_window(p, basis.window());
  std::map<Letter, SparseOperator> letter_cache;
  auto letter_matrix = [&](const Letter& l) -> const SparseOperator& {
    auto it = letter_cache.find(l);
    if (it == letter_cache.end()) {
      SparseOperator m = l.kind == LetterKind::Creator ? q_creator(basis, q, l.mode)
                                                       : q_annihilator(basis, q, l.mode);
      it = letter_cache.emplace(l, std::move(m)).first;
    }
    return it->second;
  };

  SparseOperator result(basis.size());
  for (const auto& [word, coeff] : p.terms()) {
    if (word.empty()) {
      result += coeff * SparseOperator::identity(basis.size());
      continue;
    }
    SparseOperator m = letter_matrix(word.letters.front());
    for (std::size_t k = 1; k < word.letters.size(); ++k) {
      m = m * letter_matrix(word.letters[k]);
    }
    result += coeff * m;
  }
  return result;
}

SparseVec apply_polynomial(const AlgebraPolynomial& p, const QFockBasis& basis, double q,
                           const SparseVec& x) {
  validate_q(q);
  check_support_in_window(p, basis.window());
  const auto pw = q_power_table(q, basis.depth());

  auto apply_letter = [&](const Letter& l, const SparseVec& v) {
    SparseVec out;
    ModeSeq target;
    for (const auto& [idx, coeff] : v) {
      const ModeSeq& w = basis.entries()[idx];
      if (l.kind == LetterKind::Creator) {
        if (static_cast<int>(w.size()) >= basis.depth()) continue;
        target.assign(1, l.mode);
        target.insert(target.end(), w.begin(), w.end());
        out[basis.index_of(target)] += coeff;
      } else {
        for (std::size_t k = 0; k < w.size(); ++k) {
          if (w[k] != l.mode) continue;
          target = w;
          target.erase(target.begin() + static_cast<std::ptrdiff_t>(k));
          out[basis.index_of(target)] += pw[k] * coeff;
        }
      }
    }
    for (auto it = out.begin(); it != out.end();) {
      it = (it->second == cplx{}) ? out.erase(it) : std::next(it);
    }
    return out;
  };

  SparseVec result;
  for (const auto& [word, coeff] : p.terms()) {
    SparseVec v = x;
    for (auto it = word.letters.rbegin(); it != word.letters.rend(); ++it) {
      v = apply_letter(*it, v);
    }
    vec_axpy(result, coeff, v);
  }
  return result;
}

}  // namespace ncprob
