#pragma once

#include <utility>
#include <vector>

#include "ncprob/algebra.hpp"
#include "ncprob/sparse.hpp"
#include "ncprob/window.hpp"

namespace ncprob {

/// Basis of the Boolean Fock space over a window: the vacuum symbol # at
/// position 0, then one slot per mode. Annihilators are the matrix units
/// eps(#, i), creators eps(i, #).
class BooleanBasis {
 public:
  explicit BooleanBasis(ModeWindow window) : window_(window) {}

  const ModeWindow& window() const { return window_; }
  std::size_t size() const { return static_cast<std::size_t>(window_.width()) + 1; }

  static constexpr std::size_t vacuum_index() { return 0; }
  std::size_t index_of_mode(int mode) const;

 private:
  ModeWindow window_;
};

SparseOperator b_creator(const BooleanBasis& basis, int mode);
SparseOperator b_annihilator(const BooleanBasis& basis, int mode);

/// Matrix unit eps(row, col) by basis position (position 0 is the vacuum).
SparseOperator boolean_matrix_unit(const BooleanBasis& basis, std::size_t row,
                                   std::size_t col);

SparseOperator materialize(const AlgebraPolynomial& p, const BooleanBasis& basis);

/// Splits off the identity component: returns (identity coefficient, rest).
std::pair<cplx, AlgebraPolynomial> split_identity(const AlgebraPolynomial& p);

/// Image of A + bI under the invariant conditional expectation: the pair
/// (<A e#, e#>, b), representing <A e#, e#> P# + b I.
struct ConditionalExpectation {
  cplx vacuum_part;
  cplx identity_part;

  friend bool operator==(const ConditionalExpectation&,
                         const ConditionalExpectation&) = default;
};

ConditionalExpectation boolean_expectation(const SparseOperator& compact_part,
                                           cplx identity_coeff);

/// Value of the expectation image under a vector state xi.
cplx expectation_vector_value(const ConditionalExpectation& e, const SparseVec& xi);

/// |phi_xi(shift^n(word)) - phi_xi(E(word))| for n = 0..n_max. The tail is
/// exactly zero once the shifted support has left the support of xi.
std::vector<double> e_mixing_experiment(const AlgebraPolynomial& word,
                                        const BooleanBasis& basis, const SparseVec& xi,
                                        int n_max);

/// Segment state (1-gamma) * vacuum + gamma * state-at-infinity. The state
/// at infinity reads the identity coefficient; every product of letters is
/// compact, so only the empty word contributes to it.
cplx boolean_segment_value(double gamma, const BooleanBasis& basis,
                           const AlgebraPolynomial& p);

struct InvarianceCheckItem {
  std::size_t word_index = 0;
  std::size_t element_index = 0;
  cplx base_value;
  cplx moved_value;
};

struct InvarianceReport {
  std::vector<InvarianceCheckItem> items;
  double max_deviation = 0.0;
  bool all_equal = false;
};

/// phi_gamma(act(g, w)) == phi_gamma(w) for shifts and permutations; acted
/// supports must stay inside the window.
InvarianceReport boolean_state_invariance_check(double gamma, const BooleanBasis& basis,
                                                const std::vector<AlgebraPolynomial>& words,
                                                const std::vector<GroupElement>& elements);

/// The one-step shift on the window: e# -> e#, e_i -> e_{i+1}, top mode -> 0.
SparseOperator boolean_shift_matrix(const BooleanBasis& basis);

/// Conjugates a matrix by an index relabeling; # stays put. Every relabeled
/// mode must stay inside the window.
SparseOperator relabel(const SparseOperator& op, const BooleanBasis& basis,
                       const GroupElement& g);

}  // namespace ncprob
