#include "ncprob/ergodics.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <string>

#include "ncprob/io.hpp"

namespace ncprob {

namespace {

/// Compensated (Kahan) accumulator; keeps scalar averages independent of
/// harmless regroupings to well below 1e-13.
struct KahanSum {
  cplx sum{};
  cplx carry{};

  void add(cplx v) {
    const cplx y = v - carry;
    const cplx t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

std::vector<int> sorted_distinct(const std::vector<int>& values, const char* what) {
  std::vector<int> out = values;
  std::sort(out.begin(), out.end());
  if (std::adjacent_find(out.begin(), out.end()) != out.end()) {
    throw InvalidParameter(std::string(what) + " must be distinct");
  }
  return out;
}

std::uint64_t factorial(std::size_t n) {
  std::uint64_t f = 1;
  for (std::size_t k = 2; k <= n; ++k) f *= k;
  return f;
}

}  // namespace

void ConvergenceSeries::append(double scale, double deviation) {
  if (!points_.empty() && scale <= points_.back().scale) {
    throw InvalidParameter("series scales must be strictly increasing");
  }
  points_.push_back({scale, deviation});
}

bool ConvergenceSeries::non_increasing_from(double scale) const {
  double previous = -1.0;
  bool seen = false;
  for (const Point& p : points_) {
    if (p.scale < scale) continue;
    if (seen && p.deviation > previous) return false;
    previous = p.deviation;
    seen = true;
  }
  return true;
}

double ConvergenceSeries::first_deviation() const {
  if (points_.empty()) throw InvalidParameter("empty series");
  return points_.front().deviation;
}

double ConvergenceSeries::last_deviation() const {
  if (points_.empty()) throw InvalidParameter("empty series");
  return points_.back().deviation;
}

std::string ConvergenceSeries::to_csv() const {
  std::string out = "scale,deviation,engine,q_or_lambda,seed\n";
  for (const Point& p : points_) {
    out += fmt_double(p.scale) + "," + fmt_double(p.deviation) + "," + engine_ + "," +
           fmt_double(parameter_) + "," + std::to_string(seed_) + "\n";
  }
  return out;
}

StateFunctional::StateFunctional(VectorState s) : body_(std::move(s)) {
  const auto& vs = std::get<VectorState>(body_);
  double norm = 0.0;
  if (const auto* qrep = std::get_if<QVectorRep>(&vs.rep)) {
    if (qrep->basis == nullptr) throw InvalidParameter("vector state needs a basis");
    norm = qrep->gram != nullptr
               ? std::sqrt(std::abs(qrep->gram->inner(vs.xi, vs.xi)))
               : vec_norm(vs.xi);
  } else {
    norm = vec_norm(vs.xi);
  }
  if (std::abs(norm - 1.0) > 1e-12) {
    throw InvalidParameter("vector state must be normalized in its declared inner "
                           "product; norm = " + fmt_double(norm));
  }
}

StateFunctional::StateFunctional(HaagerupStateTag s) : body_(s) {
  if (std::isnan(s.lambda) || s.lambda <= 0.0) {
    throw LambdaOutOfRange("lambda must lie in (0, +inf]");
  }
}

StateFunctional::StateFunctional(SegmentState s) : body_(s) {
  if (!(s.gamma >= 0.0 && s.gamma <= 1.0)) {
    throw GammaOutOfRange("gamma must lie in [0, 1]");
  }
  if (s.engine == SegmentState::Engine::Boolean && s.boolean_basis == nullptr) {
    throw InvalidParameter("Boolean segment state needs a basis");
  }
}

StateFunctional StateFunctional::q_vacuum(const QFockBasis& basis, double q) {
  VectorState vs;
  vs.rep = QVectorRep{&basis, q, nullptr};
  vs.xi = SparseVec{{0, 1.0}};
  return StateFunctional(std::move(vs));
}

cplx StateFunctional::operator()(const AlgebraPolynomial& p) const {
  if (const auto* vs = std::get_if<VectorState>(&body_)) {
    if (const auto* qrep = std::get_if<QVectorRep>(&vs->rep)) {
      const SparseVec image = apply_polynomial(p, *qrep->basis, qrep->q, vs->xi);
      return qrep->gram != nullptr ? qrep->gram->inner(image, vs->xi)
                                   : vec_inner(image, vs->xi);
    }
    if (const auto* brep = std::get_if<BooleanVectorRep>(&vs->rep)) {
      return vec_inner(materialize(p, *brep->basis).apply(vs->xi), vs->xi);
    }
    const auto& mrep = std::get<MonotoneVectorRep>(vs->rep);
    return vec_inner(materialize(p, *mrep.basis).apply(vs->xi), vs->xi);
  }
  if (const auto* seg = std::get_if<SegmentState>(&body_)) {
    if (seg->engine == SegmentState::Engine::Boolean) {
      return boolean_segment_value(seg->gamma, *seg->boolean_basis, p);
    }
    return MonotoneState(seg->gamma)(p);
  }
  throw InvalidParameter("Haagerup state evaluates group words, not letter words");
}

cplx StateFunctional::operator()(const GroupWord& w) const {
  if (const auto* h = std::get_if<HaagerupStateTag>(&body_)) {
    return haagerup(h->lambda, w);
  }
  throw InvalidParameter("only the Haagerup state evaluates group words");
}

cplx StateFunctional::operator()(const GroupAlgebraElement& x) const {
  if (const auto* h = std::get_if<HaagerupStateTag>(&body_)) {
    return haagerup(h->lambda, x);
  }
  throw InvalidParameter("only the Haagerup state evaluates group elements");
}

bool StateFunctional::is_haagerup() const {
  return std::holds_alternative<HaagerupStateTag>(body_);
}

std::string StateFunctional::engine_name() const {
  if (const auto* vs = std::get_if<VectorState>(&body_)) {
    if (std::holds_alternative<QVectorRep>(vs->rep)) return "q";
    if (std::holds_alternative<BooleanVectorRep>(vs->rep)) return "boolean";
    return "monotone";
  }
  if (const auto* seg = std::get_if<SegmentState>(&body_)) {
    return seg->engine == SegmentState::Engine::Boolean ? "boolean" : "monotone";
  }
  return "haagerup";
}

double StateFunctional::parameter() const {
  if (const auto* vs = std::get_if<VectorState>(&body_)) {
    if (const auto* qrep = std::get_if<QVectorRep>(&vs->rep)) return qrep->q;
    return 0.0;
  }
  if (const auto* seg = std::get_if<SegmentState>(&body_)) return seg->gamma;
  return std::get<HaagerupStateTag>(body_).lambda;
}

namespace {

void require_shift_room(const AlgebraPolynomial& p, const ModeWindow& window, int max_shift) {
  const std::set<int> modes = support(p);
  if (modes.empty()) return;
  if (*modes.begin() < window.lo || *modes.rbegin() + max_shift > window.hi) {
    throw WindowTooSmall("shifted supports need window [" +
                         std::to_string(std::min(*modes.begin(), window.lo)) + "," +
                         std::to_string(*modes.rbegin() + max_shift) + "]");
  }
}

}  // namespace

SparseOperator cesaro_shift_average(const AlgebraPolynomial& p, int n,
                                    const QFockBasis& basis, double q) {
  if (n <= 0) throw InvalidParameter("Cesaro average needs n >= 1");
  require_shift_room(p, basis.window(), n - 1);
  SparseOperator sum(basis.size());
  for (int k = 0; k < n; ++k) {
    sum += materialize(act(GroupElement::shift(k), p), basis, q);
  }
  sum *= cplx(1.0 / n);
  return sum;
}

SparseOperator cesaro_shift_average(const AlgebraPolynomial& p, int n,
                                    const BooleanBasis& basis) {
  if (n <= 0) throw InvalidParameter("Cesaro average needs n >= 1");
  require_shift_room(p, basis.window(), n - 1);
  SparseOperator sum(basis.size());
  for (int k = 0; k < n; ++k) {
    sum += materialize(act(GroupElement::shift(k), p), basis);
  }
  sum *= cplx(1.0 / n);
  return sum;
}

namespace {

double max_matrix_element(const SparseOperator& op, const QGram& gram,
                          const std::vector<SparseVec>& family) {
  double best = 0.0;
  for (const SparseVec& xi : family) {
    const SparseVec weighted = gram.apply(op.apply(xi));
    for (const SparseVec& eta : family) {
      best = std::max(best, std::abs(vec_inner(weighted, eta)));
    }
  }
  return best;
}

}  // namespace

ConvergenceSeries cesaro_deviation_series(const AlgebraPolynomial& p,
                                          const QFockBasis& basis, double q,
                                          const QGram& gram, const std::vector<int>& n_list,
                                          int test_depth, ModeWindow test_modes) {
  const cplx omega = [&] {
    SparseVec vac{{0, 1.0}};
    const SparseVec image = apply_polynomial(p, basis, q, vac);
    auto it = image.find(0);
    return it == image.end() ? cplx{} : it->second;
  }();
  const auto family = gram.orthonormal_vectors(basis, test_modes, test_depth);
  ConvergenceSeries series("q", q);
  for (int n : n_list) {
    SparseOperator d = cesaro_shift_average(p, n, basis, q);
    d -= omega * SparseOperator::identity(basis.size());
    series.append(static_cast<double>(n), max_matrix_element(d, gram, family));
  }
  return series;
}

ConvergenceSeries unique_mixing_probe(const AlgebraPolynomial& p, const QFockBasis& basis,
                                      double q, const QGram& gram,
                                      const std::vector<int>& n_list, int test_depth,
                                      ModeWindow test_modes) {
  if (n_list.empty()) throw InvalidParameter("empty scale list");
  require_shift_room(p, basis.window(), *std::max_element(n_list.begin(), n_list.end()));
  if (test_depth > basis.depth()) {
    throw InvalidParameter("test depth exceeds the basis depth");
  }
  const cplx omega = [&] {
    SparseVec vac{{0, 1.0}};
    const SparseVec image = apply_polynomial(p, basis, q, vac);
    auto it = image.find(0);
    return it == image.end() ? cplx{} : it->second;
  }();
  const auto family = gram.orthonormal_vectors(basis, test_modes, test_depth);

  ConvergenceSeries series("q", q);
  for (int n : n_list) {
    const AlgebraPolynomial shifted = act(GroupElement::shift(n), p);
    double best = 0.0;
    for (const SparseVec& xi : family) {
      SparseVec v = apply_polynomial(shifted, basis, q, xi);
      vec_axpy(v, -omega, xi);
      const SparseVec weighted = gram.apply(v);
      for (const SparseVec& eta : family) {
        best = std::max(best, std::abs(vec_inner(weighted, eta)));
      }
    }
    series.append(static_cast<double>(n), best);
  }
  return series;
}

namespace {

template <typename Term>
cplx exact_permutation_average(const std::vector<int>& index_set, Term&& term) {
  const std::vector<int> sorted = sorted_distinct(index_set, "index set");
  if (sorted.size() > 8) {
    throw FactorialBlowup("exact enumeration needs |I| <= 8, got " +
                          std::to_string(sorted.size()));
  }
  std::vector<int> images = sorted;
  KahanSum acc;
  std::uint64_t count = 0;
  do {
    std::map<int, int> mapping;
    for (std::size_t t = 0; t < sorted.size(); ++t) mapping[sorted[t]] = images[t];
    acc.add(term(GroupElement::permutation(std::move(mapping))));
    ++count;
  } while (std::next_permutation(images.begin(), images.end()));
  return acc.sum / static_cast<double>(count);
}

template <typename Term>
cplx sampled_permutation_average(const std::vector<int>& index_set, int count,
                                 std::uint64_t seed, Term&& term) {
  if (count <= 0) throw InvalidParameter("sample count must be positive");
  const std::vector<int> sorted = sorted_distinct(index_set, "index set");
  std::mt19937_64 rng(seed);
  std::vector<int> images = sorted;
  KahanSum acc;
  for (int s = 0; s < count; ++s) {
    // Fisher-Yates with the raw generator keeps the draw reproducible.
    for (std::size_t k = images.size(); k > 1; --k) {
      const std::size_t j = static_cast<std::size_t>(rng() % k);
      std::swap(images[k - 1], images[j]);
    }
    std::map<int, int> mapping;
    for (std::size_t t = 0; t < sorted.size(); ++t) mapping[sorted[t]] = images[t];
    acc.add(term(GroupElement::permutation(std::move(mapping))));
  }
  return acc.sum / static_cast<double>(count);
}

template <typename Term>
cplx dispatch_permutation_average(const std::vector<int>& index_set,
                                  const PermutationMode& mode, Term&& term) {
  if (std::holds_alternative<ExactEnumeration>(mode)) {
    return exact_permutation_average(index_set, term);
  }
  const auto& sampled = std::get<SampledPermutations>(mode);
  return sampled_permutation_average(index_set, sampled.count, sampled.seed, term);
}

}  // namespace

cplx permutation_average(const AlgebraPolynomial& u, const AlgebraPolynomial& v,
                         const AlgebraPolynomial& w, const StateFunctional& state,
                         const std::vector<int>& index_set, const PermutationMode& mode) {
  return dispatch_permutation_average(index_set, mode, [&](const GroupElement& g) {
    return state(multiply(multiply(u, act(g, v)), w));
  });
}

cplx permutation_average(const GroupWord& u, const GroupWord& v, const GroupWord& w,
                         const StateFunctional& state, const std::vector<int>& index_set,
                         const PermutationMode& mode) {
  return dispatch_permutation_average(index_set, mode, [&](const GroupElement& g) {
    return state(multiply(multiply(u, act(g, v)), w));
  });
}

namespace {

template <typename Value>
ConvergenceSeries shifted_cesaro_series(const StateFunctional& state,
                                        const std::vector<int>& n_list, Value&& value,
                                        cplx target) {
  ConvergenceSeries series(state.engine_name(), state.parameter());
  for (int n : n_list) {
    if (n <= 0) throw InvalidParameter("scales must be positive");
    KahanSum acc;
    for (int k = 0; k < n; ++k) acc.add(value(k));
    series.append(static_cast<double>(n),
                  std::abs(acc.sum / static_cast<double>(n) - target));
  }
  return series;
}

}  // namespace

ConvergenceSeries weak_clustering_probe_shift(const AlgebraPolynomial& a,
                                              const AlgebraPolynomial& b,
                                              const StateFunctional& state,
                                              const std::vector<int>& n_list) {
  const cplx target = state(a) * state(b);
  return shifted_cesaro_series(
      state, n_list,
      [&](int k) { return state(multiply(a, act(GroupElement::shift(k), b))); }, target);
}

ConvergenceSeries weak_clustering_probe_shift(const GroupWord& a, const GroupWord& b,
                                              const StateFunctional& state,
                                              const std::vector<int>& n_list) {
  const cplx target = state(a) * state(b);
  return shifted_cesaro_series(
      state, n_list,
      [&](int k) { return state(multiply(a, act(GroupElement::shift(k), b))); }, target);
}

ConvergenceSeries weak_clustering_probe_perm(const GroupWord& a, const GroupWord& b,
                                             const StateFunctional& state,
                                             const std::vector<std::vector<int>>& sets,
                                             const PermutationMode& mode) {
  const cplx target = state(a) * state(b);
  std::uint64_t seed = 0;
  if (const auto* sampled = std::get_if<SampledPermutations>(&mode)) seed = sampled->seed;
  ConvergenceSeries series(state.engine_name(), state.parameter(), seed);
  for (const auto& index_set : sets) {
    const cplx avg = permutation_average(a, b, GroupWord{}, state, index_set, mode);
    series.append(static_cast<double>(index_set.size()), std::abs(avg - target));
  }
  return series;
}

ConvergenceSeries equilibrium_probe_shift(const AlgebraPolynomial& a,
                                          const AlgebraPolynomial& b,
                                          const AlgebraPolynomial& c,
                                          const StateFunctional& state,
                                          const std::vector<int>& n_list) {
  const cplx target = state(multiply(a, c)) * state(b);
  return shifted_cesaro_series(
      state, n_list,
      [&](int k) {
        return state(multiply(multiply(a, act(GroupElement::shift(k), b)), c));
      },
      target);
}

ConvergenceSeries equilibrium_probe_perm(const GroupWord& a, const GroupWord& b,
                                         const GroupWord& c, const StateFunctional& state,
                                         const std::vector<std::vector<int>>& sets,
                                         const PermutationMode& mode) {
  const cplx target = state(multiply(a, c)) * state(b);
  std::uint64_t seed = 0;
  if (const auto* sampled = std::get_if<SampledPermutations>(&mode)) seed = sampled->seed;
  ConvergenceSeries series(state.engine_name(), state.parameter(), seed);
  for (const auto& index_set : sets) {
    const cplx avg = permutation_average(a, b, c, state, index_set, mode);
    series.append(static_cast<double>(index_set.size()), std::abs(avg - target));
  }
  return series;
}

SparseOperator boolean_permutation_average(const SparseOperator& op,
                                           const BooleanBasis& basis,
                                           const std::vector<int>& j_set) {
  const std::vector<int> sorted = sorted_distinct(j_set, "index set");
  if (sorted.size() > 8) {
    throw FactorialBlowup("exact enumeration needs |J| <= 8, got " +
                          std::to_string(sorted.size()));
  }
  for (int mode : sorted) {
    if (!basis.window().contains(mode)) {
      throw ModeOutOfWindow("index set leaves the window at " + std::to_string(mode));
    }
  }
  std::vector<int> images = sorted;
  SparseOperator sum(op.dim());
  std::uint64_t count = 0;
  do {
    std::map<int, int> mapping;
    for (std::size_t t = 0; t < sorted.size(); ++t) mapping[sorted[t]] = images[t];
    sum += relabel(op, basis, GroupElement::permutation(std::move(mapping)));
    ++count;
  } while (std::next_permutation(images.begin(), images.end()));
  sum *= cplx(1.0 / static_cast<double>(count));
  return sum;
}

StabilizerFractions stabilizer_fractions(int index_set_size, int fixed_set_size,
                                         int moved_set_size) {
  if (index_set_size < 0 || fixed_set_size < 0 || moved_set_size < 0) {
    throw InvalidParameter("set sizes must be non-negative");
  }
  if (fixed_set_size > index_set_size || moved_set_size > index_set_size) {
    throw InvalidParameter("subset sizes cannot exceed the index set size");
  }
  StabilizerFractions out;
  out.stabilizer_ratio = 1.0;
  for (int t = 0; t < fixed_set_size; ++t) {
    out.stabilizer_ratio /= static_cast<double>(index_set_size - t);
  }
  out.avoidance_ratio = 1.0;
  for (int t = 0; t < moved_set_size; ++t) {
    const double free_slots = static_cast<double>(index_set_size - fixed_set_size - t);
    if (free_slots <= 0.0) {
      out.avoidance_ratio = 0.0;
      break;
    }
    out.avoidance_ratio *= free_slots / static_cast<double>(index_set_size - t);
  }
  return out;
}

}  // namespace ncprob
