#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ncprob/algebra.hpp"
#include "ncprob/boolean.hpp"
#include "ncprob/freegroup.hpp"
#include "ncprob/monotone.hpp"
#include "ncprob/qfock.hpp"

namespace ncprob {

/// Empirical trace of a limit: (scale, deviation) points with strictly
/// increasing scales, tagged with the engine, its parameter and the seed.
/// All reported "norms" are max moduli of matrix elements over the declared
/// test-vector family, not operator norms.
class ConvergenceSeries {
 public:
  struct Point {
    double scale = 0.0;
    double deviation = 0.0;
  };

  ConvergenceSeries(std::string engine, double parameter, std::uint64_t seed = 0)
      : engine_(std::move(engine)), parameter_(parameter), seed_(seed) {}

  void append(double scale, double deviation);

  const std::vector<Point>& points() const { return points_; }
  const std::string& engine() const { return engine_; }
  double parameter() const { return parameter_; }
  std::uint64_t seed() const { return seed_; }

  bool non_increasing_from(double scale) const;
  double first_deviation() const;
  double last_deviation() const;

  /// CSV with header "scale,deviation,engine,q_or_lambda,seed".
  std::string to_csv() const;

 private:
  std::string engine_;
  double parameter_;
  std::uint64_t seed_;
  std::vector<Point> points_;
};

struct QVectorRep {
  const QFockBasis* basis = nullptr;
  double q = 0.0;
  const QGram* gram = nullptr;  // optional; plain pairing when absent
};
struct BooleanVectorRep {
  const BooleanBasis* basis = nullptr;
};
struct MonotoneVectorRep {
  const MonotoneBasis* basis = nullptr;
};

/// Vector state over one of the Fock engines; the Gram, when present,
/// weights the pairing (q engine). The vector must be normalized in the
/// declared inner product.
struct VectorState {
  std::variant<QVectorRep, BooleanVectorRep, MonotoneVectorRep> rep;
  SparseVec xi;
};

struct HaagerupStateTag {
  double lambda = 1.0;
};

/// (1-gamma) * vacuum + gamma * state-at-infinity on the Boolean or the
/// monotone engine.
struct SegmentState {
  enum class Engine { Boolean, Monotone };
  Engine engine = Engine::Boolean;
  double gamma = 0.0;
  const BooleanBasis* boolean_basis = nullptr;  // required for Engine::Boolean
};

class StateFunctional {
 public:
  StateFunctional(VectorState s);
  StateFunctional(HaagerupStateTag s);
  StateFunctional(SegmentState s);

  static StateFunctional q_vacuum(const QFockBasis& basis, double q);
  static StateFunctional haagerup_state(double lambda) {
    return StateFunctional(HaagerupStateTag{lambda});
  }

  cplx operator()(const AlgebraPolynomial& p) const;
  cplx operator()(const GroupWord& w) const;
  cplx operator()(const GroupAlgebraElement& x) const;

  bool is_haagerup() const;
  std::string engine_name() const;
  double parameter() const;

  const std::variant<VectorState, HaagerupStateTag, SegmentState>& body() const {
    return body_;
  }

 private:
  std::variant<VectorState, HaagerupStateTag, SegmentState> body_;
};

/// (1/n) sum_{k=0}^{n-1} materialize(shift^k p). Preconditions keep every
/// shifted support inside the window.
SparseOperator cesaro_shift_average(const AlgebraPolynomial& p, int n,
                                    const QFockBasis& basis, double q);
SparseOperator cesaro_shift_average(const AlgebraPolynomial& p, int n,
                                    const BooleanBasis& basis);

/// Deviation of the Cesaro average from omega_q(p) I, measured over
/// Gram-orthonormalized test vectors with modes in test_modes and length
/// <= test_depth.
ConvergenceSeries cesaro_deviation_series(const AlgebraPolynomial& p,
                                          const QFockBasis& basis, double q,
                                          const QGram& gram, const std::vector<int>& n_list,
                                          int test_depth, ModeWindow test_modes);

/// Matrix elements of shift^n(p) - omega_q(p) I over the same fixed family;
/// the shifted word escapes the family's modes, which is the finite-scale
/// shadow of mixing.
ConvergenceSeries unique_mixing_probe(const AlgebraPolynomial& p, const QFockBasis& basis,
                                      double q, const QGram& gram,
                                      const std::vector<int>& n_list, int test_depth,
                                      ModeWindow test_modes);

/// Permutation averaging modes: exact enumeration (|I| <= 8) or seeded
/// sampling with the mt19937_64 generator.
struct ExactEnumeration {};
struct SampledPermutations {
  int count = 0;
  std::uint64_t seed = 0;
};
using PermutationMode = std::variant<ExactEnumeration, SampledPermutations>;

cplx permutation_average(const AlgebraPolynomial& u, const AlgebraPolynomial& v,
                         const AlgebraPolynomial& w, const StateFunctional& state,
                         const std::vector<int>& index_set, const PermutationMode& mode);
cplx permutation_average(const GroupWord& u, const GroupWord& v, const GroupWord& w,
                         const StateFunctional& state, const std::vector<int>& index_set,
                         const PermutationMode& mode);

/// |avg phi(A alpha_g(B)) - phi(A) phi(B)| over Cesaro shift windows [0, n).
ConvergenceSeries weak_clustering_probe_shift(const AlgebraPolynomial& a,
                                              const AlgebraPolynomial& b,
                                              const StateFunctional& state,
                                              const std::vector<int>& n_list);
ConvergenceSeries weak_clustering_probe_shift(const GroupWord& a, const GroupWord& b,
                                              const StateFunctional& state,
                                              const std::vector<int>& n_list);
/// Same deviation over permutation groups of growing index sets.
ConvergenceSeries weak_clustering_probe_perm(const GroupWord& a, const GroupWord& b,
                                             const StateFunctional& state,
                                             const std::vector<std::vector<int>>& sets,
                                             const PermutationMode& mode);

/// |avg phi(A alpha_g(B) C) - phi(AC) phi(B)|.
ConvergenceSeries equilibrium_probe_shift(const AlgebraPolynomial& a,
                                          const AlgebraPolynomial& b,
                                          const AlgebraPolynomial& c,
                                          const StateFunctional& state,
                                          const std::vector<int>& n_list);
ConvergenceSeries equilibrium_probe_perm(const GroupWord& a, const GroupWord& b,
                                         const GroupWord& c, const StateFunctional& state,
                                         const std::vector<std::vector<int>>& sets,
                                         const PermutationMode& mode);

/// (1/|J|!) sum over the permutations of J of the relabeled matrix.
SparseOperator boolean_permutation_average(const SparseOperator& op,
                                           const BooleanBasis& basis,
                                           const std::vector<int>& j_set);

/// The two combinatorial ratios behind the permutation-averaging argument:
/// the pointwise stabilizer of an f-element set inside the permutations of
/// an n-element set carries fraction (n-f)!/n!, while the permutations
/// moving a fixed v-element set off that f-set carry a fraction tending to
/// one.
struct StabilizerFractions {
  double stabilizer_ratio = 0.0;
  double avoidance_ratio = 0.0;
};

StabilizerFractions stabilizer_fractions(int index_set_size, int fixed_set_size,
                                         int moved_set_size = 1);

}  // namespace ncprob
