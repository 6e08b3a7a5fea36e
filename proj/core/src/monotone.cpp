#include "ncprob/monotone.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <string>

#include "ncprob/io.hpp"

namespace ncprob {

MonotoneBasis::MonotoneBasis(ModeWindow window, std::size_t capacity) : window_(window) {
  const int width = window_.width();
  if (width >= 63 || (std::size_t{1} << width) > capacity) {
    throw CapacityExceeded("monotone basis needs 2^" + std::to_string(width) +
                           " entries, over the budget of " + std::to_string(capacity));
  }
  const std::size_t total = std::size_t{1} << width;
  // Masks sorted by popcount then by value of the increasing sequence.
  std::vector<std::uint64_t> masks(total);
  for (std::size_t m = 0; m < total; ++m) masks[m] = m;
  std::stable_sort(masks.begin(), masks.end(), [](std::uint64_t a, std::uint64_t b) {
    const int pa = __builtin_popcountll(a), pb = __builtin_popcountll(b);
    if (pa != pb) return pa < pb;
    return a < b;  // low bit = low mode; smaller value = lexicographically smaller seq
  });
  entries_.reserve(total);
  index_by_mask_.assign(total, 0);
  for (std::size_t pos = 0; pos < total; ++pos) {
    ModeSeq seq;
    for (int b = 0; b < width; ++b) {
      if (masks[pos] >> b & 1) seq.push_back(window_.lo + b);
    }
    index_by_mask_[masks[pos]] = pos;
    entries_.push_back(std::move(seq));
  }
}

std::size_t MonotoneBasis::index_of(const ModeSeq& seq) const {
  std::uint64_t mask = 0;
  int prev = window_.lo - 1;
  for (int mode : seq) {
    if (!window_.contains(mode)) {
      throw ModeOutOfWindow("mode " + std::to_string(mode) + " outside window");
    }
    if (mode <= prev) throw InvalidParameter("sequence is not strictly increasing");
    prev = mode;
    mask |= std::uint64_t{1} << (mode - window_.lo);
  }
  return index_by_mask_[mask];
}

SparseOperator m_creator(const MonotoneBasis& basis, int mode) {
  if (!basis.window().contains(mode)) {
    throw ModeOutOfWindow("creator mode " + std::to_string(mode) + " outside window");
  }
  SparseOperator op(basis.size());
  ModeSeq target;
  for (std::size_t idx = 0; idx < basis.size(); ++idx) {
    const ModeSeq& w = basis.entries()[idx];
    if (!w.empty() && mode >= w.front()) continue;
    target.assign(1, mode);
    target.insert(target.end(), w.begin(), w.end());
    op.add_at(basis.index_of(target), idx, 1.0);
  }
  return op;
}

SparseOperator m_annihilator(const MonotoneBasis& basis, int mode) {
  if (!basis.window().contains(mode)) {
    throw ModeOutOfWindow("annihilator mode " + std::to_string(mode) + " outside window");
  }
  SparseOperator op(basis.size());
  for (std::size_t idx = 0; idx < basis.size(); ++idx) {
    const ModeSeq& w = basis.entries()[idx];
    if (w.empty() || w.front() != mode) continue;
    const ModeSeq target(w.begin() + 1, w.end());
    op.add_at(basis.index_of(target), idx, 1.0);
  }
  return op;
}

double MonotoneRelationReport::max_defect() const {
  return std::max(std::max(creator_pair_defect, annihilator_pair_defect),
                  std::max(mixed_defect, completeness_defect));
}

MonotoneRelationReport check_monotone_relations(const MonotoneBasis& basis) {
  const ModeWindow& win = basis.window();
  std::vector<SparseOperator> creators, annihilators;
  creators.reserve(win.width());
  annihilators.reserve(win.width());
  for (int i = win.lo; i <= win.hi; ++i) {
    creators.push_back(m_creator(basis, i));
    annihilators.push_back(m_annihilator(basis, i));
  }
  auto c = [&](int i) -> const SparseOperator& { return creators[i - win.lo]; };
  auto a = [&](int i) -> const SparseOperator& { return annihilators[i - win.lo]; };

  MonotoneRelationReport report;
  for (int i = win.lo; i <= win.hi; ++i) {
    for (int j = win.lo; j <= win.hi; ++j) {
      if (i >= j) {
        report.creator_pair_defect =
            std::max(report.creator_pair_defect, (c(i) * c(j)).max_abs());
        report.annihilator_pair_defect =
            std::max(report.annihilator_pair_defect, (a(j) * a(i)).max_abs());
      }
      if (i != j) {
        report.mixed_defect = std::max(report.mixed_defect, (a(i) * c(j)).max_abs());
      }
    }
  }
  for (int i = win.lo; i <= win.hi; ++i) {
    SparseOperator sum = a(i) * c(i);
    for (int k = win.lo; k <= i; ++k) sum += c(k) * a(k);
    sum -= SparseOperator::identity(basis.size());
    report.completeness_defect = std::max(report.completeness_defect, sum.max_abs());
  }
  return report;
}

namespace {

bool is_creator(const Letter& l) { return l.kind == LetterKind::Creator; }

// A redex position in a word; kills reduce the word to zero, absorptions
// erase the same-mode block a_k ad_k at [pos, pos+1].
struct Redex {
  std::size_t pos = 0;
  bool kills = false;
};

std::vector<Redex> collect_redexes(const std::vector<Letter>& w) {
  std::vector<Redex> redexes;
  for (std::size_t t = 0; t + 1 < w.size(); ++t) {
    const Letter& x = w[t];
    const Letter& y = w[t + 1];
    if (is_creator(x) && is_creator(y)) {
      if (x.mode >= y.mode) redexes.push_back({t, true});
    } else if (!is_creator(x) && !is_creator(y)) {
      if (y.mode >= x.mode) redexes.push_back({t, true});
    } else if (!is_creator(x) && is_creator(y)) {
      if (x.mode != y.mode) {
        redexes.push_back({t, true});
      } else {
        const int k = x.mode;
        bool absorbed = false;
        if (t > 0) {
          const Letter& left = w[t - 1];
          absorbed |= is_creator(left) ? left.mode >= k : left.mode > k;
        }
        if (t + 2 < w.size()) {
          const Letter& right = w[t + 2];
          absorbed |= is_creator(right) ? right.mode > k : right.mode >= k;
        }
        if (absorbed) redexes.push_back({t, false});
      }
    }
  }
  return redexes;
}

// Rewrites one word to nothing (zero), a lambda key or a pi key. The picker
// selects which of the currently available redexes fires.
template <typename Picker>
bool rewrite_word(std::vector<Letter> w, Picker&& pick, LambdaKey& lambda_out,
                  PiKey& pi_out, bool& is_pi) {
  while (true) {
    const auto redexes = collect_redexes(w);
    if (redexes.empty()) break;
    const Redex& r = redexes[pick(redexes.size())];
    if (r.kills) return false;
    w.erase(w.begin() + static_cast<std::ptrdiff_t>(r.pos),
            w.begin() + static_cast<std::ptrdiff_t>(r.pos) + 2);
  }

  // Classify the irreducible word. The rule set guarantees the shape
  // creators / optional middle block / annihilators; anything else is an
  // internal error.
  std::size_t i = 0;
  LambdaKey lk;
  while (i < w.size() && is_creator(w[i])) {
    if (!lk.creators.empty() && lk.creators.back() >= w[i].mode) {
      throw std::logic_error("irreducible word has unordered creators");
    }
    lk.creators.push_back(w[i].mode);
    ++i;
  }
  bool has_pi = false;
  int middle = 0;
  if (i + 1 < w.size() && !is_creator(w[i]) && is_creator(w[i + 1])) {
    if (w[i].mode != w[i + 1].mode) {
      throw std::logic_error("irreducible word has a mixed-mode middle block");
    }
    has_pi = true;
    middle = w[i].mode;
    i += 2;
  }
  while (i < w.size()) {
    if (is_creator(w[i])) throw std::logic_error("irreducible word has a trailing creator");
    if (!lk.annihilators.empty() && lk.annihilators.back() <= w[i].mode) {
      throw std::logic_error("irreducible word has unordered annihilators");
    }
    lk.annihilators.push_back(w[i].mode);
    ++i;
  }
  if (has_pi) {
    if (!lk.creators.empty() && lk.creators.back() >= middle) {
      throw std::logic_error("middle block not dominating its creators");
    }
    if (!lk.annihilators.empty() && lk.annihilators.front() >= middle) {
      throw std::logic_error("middle block not dominating its annihilators");
    }
    pi_out = PiKey{std::move(lk.creators), middle, std::move(lk.annihilators)};
    is_pi = true;
  } else {
    lambda_out = std::move(lk);
    is_pi = false;
  }
  return true;
}

template <typename Picker>
NormalForm normalize_impl(const AlgebraPolynomial& p, Picker&& pick) {
  NormalForm nf;
  for (const auto& [word, coeff] : p.terms()) {
    LambdaKey lk;
    PiKey pk;
    bool is_pi = false;
    if (!rewrite_word(word.letters, pick, lk, pk, is_pi)) continue;
    if (is_pi) {
      cplx& slot = nf.pi_terms[pk];
      slot += coeff;
      if (slot == cplx{}) nf.pi_terms.erase(pk);
    } else {
      cplx& slot = nf.lambda_terms[lk];
      slot += coeff;
      if (slot == cplx{}) nf.lambda_terms.erase(lk);
    }
  }
  return nf;
}

}  // namespace

NormalForm normalize(const AlgebraPolynomial& p) {
  return normalize_impl(p, [](std::size_t) { return std::size_t{0}; });
}

NormalForm normalize_randomized(const AlgebraPolynomial& p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return normalize_impl(p, [&rng](std::size_t n) { return rng() % n; });
}

AlgebraWord lambda_word(const LambdaKey& key) {
  std::vector<Letter> letters;
  letters.reserve(key.creators.size() + key.annihilators.size());
  for (int i : key.creators) letters.push_back(creator(i));
  for (int j : key.annihilators) letters.push_back(annihilator(j));
  return AlgebraWord{std::move(letters)};
}

AlgebraWord pi_word(const PiKey& key) {
  std::vector<Letter> letters;
  letters.reserve(key.creators.size() + key.annihilators.size() + 2);
  for (int i : key.creators) letters.push_back(creator(i));
  letters.push_back(annihilator(key.middle));
  letters.push_back(creator(key.middle));
  for (int j : key.annihilators) letters.push_back(annihilator(j));
  return AlgebraWord{std::move(letters)};
}

AlgebraPolynomial to_polynomial(const NormalForm& nf) {
  AlgebraPolynomial p;
  for (const auto& [key, coeff] : nf.lambda_terms) p.add_term(lambda_word(key), coeff);
  for (const auto& [key, coeff] : nf.pi_terms) p.add_term(pi_word(key), coeff);
  return p;
}

std::map<LambdaKey, cplx> flatten_to_lambda(const NormalForm& nf, ModeWindow window) {
  std::map<LambdaKey, cplx> out;
  auto add = [&out](LambdaKey key, cplx coeff) {
    auto [it, inserted] = out.try_emplace(std::move(key), coeff);
    if (!inserted) {
      it->second += coeff;
      if (it->second == cplx{}) out.erase(it);
    }
  };
  for (const auto& [key, coeff] : nf.lambda_terms) {
    for (int mode : key.creators) {
      if (!window.contains(mode)) throw WindowTooSmall("lambda creators exceed window");
    }
    for (int mode : key.annihilators) {
      if (!window.contains(mode)) throw WindowTooSmall("lambda annihilators exceed window");
    }
    add(key, coeff);
  }
  for (const auto& [key, coeff] : nf.pi_terms) {
    if (!window.contains(key.middle)) throw WindowTooSmall("pi middle mode exceeds window");
    for (int mode : key.creators) {
      if (!window.contains(mode)) throw WindowTooSmall("pi creators exceed window");
    }
    for (int mode : key.annihilators) {
      if (!window.contains(mode)) throw WindowTooSmall("pi annihilators exceed window");
    }
    // a_k ad_k = I - sum_{m in [lo, k]} ad_m a_m; the creator and annihilator
    // kill rules silently drop every m that fails to dominate the shell.
    add(LambdaKey{key.creators, key.annihilators}, coeff);
    int first = window.lo;
    if (!key.creators.empty()) first = std::max(first, key.creators.back() + 1);
    if (!key.annihilators.empty()) first = std::max(first, key.annihilators.front() + 1);
    for (int m = first; m <= key.middle; ++m) {
      LambdaKey expanded;
      expanded.creators = key.creators;
      expanded.creators.push_back(m);
      expanded.annihilators.assign(1, m);
      expanded.annihilators.insert(expanded.annihilators.end(), key.annihilators.begin(),
                                   key.annihilators.end());
      add(std::move(expanded), -coeff);
    }
  }
  return out;
}

SparseOperator materialize(const AlgebraPolynomial& p, const MonotoneBasis& basis) {
  for (int mode : support(p)) {
    if (!basis.window().contains(mode)) {
      throw ModeOutOfWindow("mode " + std::to_string(mode) + " outside window [" +
                            std::to_string(basis.window().lo) + "," +
                            std::to_string(basis.window().hi) + "]");
    }
  }
  std::map<Letter, SparseOperator> cache;
  auto letter_matrix = [&](const Letter& l) -> const SparseOperator& {
    auto it = cache.find(l);
    if (it == cache.end()) {
      SparseOperator m = is_creator(l) ? m_creator(basis, l.mode)
                                       : m_annihilator(basis, l.mode);
      it = cache.emplace(l, std::move(m)).first;
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

double normal_form_oracle_check(const AlgebraPolynomial& p, ModeWindow window) {
  const std::set<int> modes = support(p);
  if (!modes.empty()) {
    if (*modes.begin() - 1 < window.lo || *modes.rbegin() + 1 > window.hi) {
      throw WindowTooSmall("oracle window must cover the support with one spare index "
                           "on each side");
    }
  }
  MonotoneBasis basis(window);
  const SparseOperator direct = materialize(p, basis);
  const SparseOperator rewritten = materialize(to_polynomial(normalize(p)), basis);
  return max_abs_diff(direct, rewritten);
}

MonotoneState::MonotoneState(double gamma) : gamma_(gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) {
    throw GammaOutOfRange("gamma must lie in [0, 1], got " + fmt_double(gamma));
  }
}

cplx MonotoneState::operator()(const NormalForm& nf) const {
  // Vacuum value: the unit plus every bare middle block a_k ad_k, which fixes
  // the vacuum vector. The state at infinity sees the unit coefficient only.
  cplx unit_coeff{};
  auto unit_it = nf.lambda_terms.find(LambdaKey{});
  if (unit_it != nf.lambda_terms.end()) unit_coeff = unit_it->second;

  cplx vacuum = unit_coeff;
  for (const auto& [key, coeff] : nf.pi_terms) {
    if (key.creators.empty() && key.annihilators.empty()) vacuum += coeff;
  }
  return (1.0 - gamma_) * vacuum + gamma_ * unit_coeff;
}

StationarityReport monotone_stationarity_check(double gamma,
                                               const std::vector<AlgebraPolynomial>& words,
                                               const std::vector<int>& shift_powers) {
  const MonotoneState state(gamma);
  StationarityReport report;
  report.all_equal = true;
  for (std::size_t wi = 0; wi < words.size(); ++wi) {
    const cplx base = state(words[wi]);
    for (int power : shift_powers) {
      const cplx shifted = state(act(GroupElement::shift(power), words[wi]));
      report.items.push_back({wi, power, base, shifted});
      const double dev = std::abs(base - shifted);
      report.max_deviation = std::max(report.max_deviation, dev);
      if (dev != 0.0) report.all_equal = false;
    }
  }
  return report;
}

namespace {

std::string print_mode_list(const std::vector<int>& modes, const char* name) {
  std::string out;
  for (std::size_t i = 0; i < modes.size(); ++i) {
    if (i) out += " ";
    out += std::string(name) + "(" + std::to_string(modes[i]) + ")";
  }
  return out;
}

}  // namespace

std::string print_normal_form(const NormalForm& nf) {
  if (nf.is_zero()) return "0";
  std::string out;
  bool first = true;
  auto emit = [&](const std::string& body, cplx coeff) {
    cplx c = coeff;
    const bool neg = c.real() < 0.0 || (c.real() == 0.0 && c.imag() < 0.0);
    if (first) {
      if (neg) {
        out += "-";
        c = -c;
      }
    } else {
      out += neg ? " - " : " + ";
      if (neg) c = -c;
    }
    out += fmt_complex(c) + " * " + body;
    first = false;
  };
  for (const auto& [key, coeff] : nf.lambda_terms) {
    std::string body;
    if (key.creators.empty() && key.annihilators.empty()) {
      body = "1";
    } else {
      body = print_mode_list(key.creators, "ad");
      if (!body.empty() && !key.annihilators.empty()) body += " ";
      body += print_mode_list(key.annihilators, "a");
    }
    emit(body, coeff);
  }
  for (const auto& [key, coeff] : nf.pi_terms) {
    std::string body = print_mode_list(key.creators, "ad");
    if (!body.empty()) body += " ";
    body += "[a(" + std::to_string(key.middle) + ") ad(" + std::to_string(key.middle) + ")]";
    if (!key.annihilators.empty()) {
      body += " " + print_mode_list(key.annihilators, "a");
    }
    emit(body, coeff);
  }
  return out;
}

NormalForm parse_normal_form(const std::string& text) {
  // Brackets group the middle block; strip them and renormalize, then verify
  // that rewriting reproduces the declared keys exactly.
  std::string plain;
  plain.reserve(text.size());
  for (char ch : text) {
    if (ch != '[' && ch != ']') plain.push_back(ch);
  }
  const AlgebraPolynomial p = parse_polynomial(plain);
  NormalForm nf = normalize(p);
  if (to_polynomial(nf) != p) {
    throw ParseError("text is not in normal form");
  }
  return nf;
}

}  // namespace ncprob
