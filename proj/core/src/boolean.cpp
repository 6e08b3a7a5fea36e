#include "ncprob/boolean.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ncprob/io.hpp"

namespace ncprob {

std::size_t BooleanBasis::index_of_mode(int mode) const {
  if (!window_.contains(mode)) {
    throw ModeOutOfWindow("mode " + std::to_string(mode) + " outside window [" +
                          std::to_string(window_.lo) + "," + std::to_string(window_.hi) +
                          "]");
  }
  return static_cast<std::size_t>(mode - window_.lo) + 1;
}

SparseOperator b_creator(const BooleanBasis& basis, int mode) {
  SparseOperator op(basis.size());
  op.add_at(basis.index_of_mode(mode), BooleanBasis::vacuum_index(), 1.0);
  return op;
}

SparseOperator b_annihilator(const BooleanBasis& basis, int mode) {
  SparseOperator op(basis.size());
  op.add_at(BooleanBasis::vacuum_index(), basis.index_of_mode(mode), 1.0);
  return op;
}

SparseOperator boolean_matrix_unit(const BooleanBasis& basis, std::size_t row,
                                   std::size_t col) {
  SparseOperator op(basis.size());
  op.add_at(row, col, 1.0);
  return op;
}

SparseOperator materialize(const AlgebraPolynomial& p, const BooleanBasis& basis) {
  SparseOperator result(basis.size());
  for (const auto& [word, coeff] : p.terms()) {
    if (word.empty()) {
      result += coeff * SparseOperator::identity(basis.size());
      continue;
    }
    SparseOperator m = word.letters.front().kind == LetterKind::Creator
                           ? b_creator(basis, word.letters.front().mode)
                           : b_annihilator(basis, word.letters.front().mode);
    for (std::size_t k = 1; k < word.letters.size(); ++k) {
      const Letter& l = word.letters[k];
      m = m * (l.kind == LetterKind::Creator ? b_creator(basis, l.mode)
                                             : b_annihilator(basis, l.mode));
    }
    result += coeff * m;
  }
  return result;
}

std::pair<cplx, AlgebraPolynomial> split_identity(const AlgebraPolynomial& p) {
  cplx identity_coeff{};
  AlgebraPolynomial rest;
  for (const auto& [word, coeff] : p.terms()) {
    if (word.empty()) {
      identity_coeff = coeff;
    } else {
      rest.add_term(word, coeff);
    }
  }
  return {identity_coeff, std::move(rest)};
}

ConditionalExpectation boolean_expectation(const SparseOperator& compact_part,
                                           cplx identity_coeff) {
  return {compact_part.at(BooleanBasis::vacuum_index(), BooleanBasis::vacuum_index()),
          identity_coeff};
}

cplx expectation_vector_value(const ConditionalExpectation& e, const SparseVec& xi) {
  cplx vac{};
  auto it = xi.find(BooleanBasis::vacuum_index());
  if (it != xi.end()) vac = it->second;
  return e.vacuum_part * vac * std::conj(vac) + e.identity_part;
}

std::vector<double> e_mixing_experiment(const AlgebraPolynomial& word,
                                        const BooleanBasis& basis, const SparseVec& xi,
                                        int n_max) {
  if (n_max < 0) throw InvalidParameter("n_max must be non-negative");
  if (std::abs(vec_norm(xi) - 1.0) > 1e-12) {
    throw InvalidParameter("state vector must be normalized");
  }
  const auto modes = support(word);
  if (!modes.empty() && (*modes.rbegin() + n_max > basis.window().hi ||
                         *modes.begin() < basis.window().lo)) {
    throw WindowTooSmall("support shifted by n_max leaves the window; need hi >= " +
                         std::to_string(*modes.rbegin() + n_max));
  }
  const auto [identity_coeff, compact] = split_identity(word);
  const ConditionalExpectation e =
      boolean_expectation(materialize(compact, basis), identity_coeff);
  const cplx equilibrium = expectation_vector_value(e, xi);

  std::vector<double> deviations;
  deviations.reserve(static_cast<std::size_t>(n_max) + 1);
  for (int n = 0; n <= n_max; ++n) {
    const SparseOperator shifted =
        materialize(act(GroupElement::shift(n), word), basis);
    const cplx value = vec_inner(shifted.apply(xi), xi);
    deviations.push_back(std::abs(value - equilibrium));
  }
  return deviations;
}

cplx boolean_segment_value(double gamma, const BooleanBasis& basis,
                           const AlgebraPolynomial& p) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) {
    throw GammaOutOfRange("gamma must lie in [0, 1], got " + fmt_double(gamma));
  }
  const SparseOperator m = materialize(p, basis);
  const cplx vacuum = m.at(BooleanBasis::vacuum_index(), BooleanBasis::vacuum_index());
  cplx identity_coeff{};
  auto it = p.terms().find(AlgebraWord{});
  if (it != p.terms().end()) identity_coeff = it->second;
  return (1.0 - gamma) * vacuum + gamma * identity_coeff;
}

InvarianceReport boolean_state_invariance_check(double gamma, const BooleanBasis& basis,
                                                const std::vector<AlgebraPolynomial>& words,
                                                const std::vector<GroupElement>& elements) {
  InvarianceReport report;
  report.all_equal = true;
  for (std::size_t wi = 0; wi < words.size(); ++wi) {
    const cplx base = boolean_segment_value(gamma, basis, words[wi]);
    for (std::size_t gi = 0; gi < elements.size(); ++gi) {
      const AlgebraPolynomial moved = act(elements[gi], words[wi]);
      for (int mode : support(moved)) {
        if (!basis.window().contains(mode)) {
          throw WindowTooSmall("acted support leaves the window at mode " +
                               std::to_string(mode));
        }
      }
      const cplx value = boolean_segment_value(gamma, basis, moved);
      report.items.push_back({wi, gi, base, value});
      const double dev = std::abs(base - value);
      report.max_deviation = std::max(report.max_deviation, dev);
      if (dev != 0.0) report.all_equal = false;
    }
  }
  return report;
}

SparseOperator boolean_shift_matrix(const BooleanBasis& basis) {
  SparseOperator u(basis.size());
  u.add_at(BooleanBasis::vacuum_index(), BooleanBasis::vacuum_index(), 1.0);
  for (int i = basis.window().lo; i < basis.window().hi; ++i) {
    u.add_at(basis.index_of_mode(i + 1), basis.index_of_mode(i), 1.0);
  }
  return u;
}

SparseOperator relabel(const SparseOperator& op, const BooleanBasis& basis,
                       const GroupElement& g) {
  const ModeWindow& win = basis.window();
  auto map_index = [&](std::size_t idx) -> std::size_t {
    if (idx == BooleanBasis::vacuum_index()) return idx;
    const int mode = win.lo + static_cast<int>(idx) - 1;
    const int image = g(mode);
    if (!win.contains(image)) {
      throw WindowTooSmall("relabeled mode " + std::to_string(image) +
                           " leaves the window");
    }
    return basis.index_of_mode(image);
  };
  SparseOperator out(op.dim());
  for (const auto& [rc, v] : op.entries()) {
    out.add_at(map_index(rc.first), map_index(rc.second), v);
  }
  return out;
}

}  // namespace ncprob
