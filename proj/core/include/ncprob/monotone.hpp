#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ncprob/algebra.hpp"
#include "ncprob/sparse.hpp"
#include "ncprob/window.hpp"

namespace ncprob {

/// Basis of the monotone Fock space restricted to a window: all strictly
/// increasing mode sequences (2^width of them, the empty one is the vacuum),
/// ordered by length and then lexicographically. The window subspace is
/// invariant under every in-window creator and annihilator, so no relation
/// picks up truncation defects here.
class MonotoneBasis {
 public:
  static constexpr std::size_t kDefaultCapacity = std::size_t{1} << 22;

  explicit MonotoneBasis(ModeWindow window, std::size_t capacity = kDefaultCapacity);

  const ModeWindow& window() const { return window_; }
  std::size_t size() const { return entries_.size(); }
  const std::vector<ModeSeq>& entries() const { return entries_; }

  std::size_t index_of(const ModeSeq& increasing_seq) const;

 private:
  ModeWindow window_;
  std::vector<ModeSeq> entries_;
  std::vector<std::size_t> index_by_mask_;
};

/// Creator: prepends its mode below the current minimum, zero otherwise.
SparseOperator m_creator(const MonotoneBasis& basis, int mode);
/// Annihilator: strips a leading equal mode, zero otherwise.
SparseOperator m_annihilator(const MonotoneBasis& basis, int mode);

/// Exact relation checks on a window. All entries are integers, so every
/// defect below is either exactly 0 or a genuine violation:
///   ad_i ad_j = 0 and a_j a_i = 0 for i >= j,
///   a_i ad_j = 0 for i != j,
///   a_i ad_i + sum_{lo <= k <= i} ad_k a_k = I  (window-finite form).
struct MonotoneRelationReport {
  double creator_pair_defect = 0.0;
  double annihilator_pair_defect = 0.0;
  double mixed_defect = 0.0;
  double completeness_defect = 0.0;

  double max_defect() const;
};

MonotoneRelationReport check_monotone_relations(const MonotoneBasis& basis);

/// lambda-form word: creators strictly ascending, then annihilators strictly
/// descending. The empty key is the unit.
struct LambdaKey {
  std::vector<int> creators;
  std::vector<int> annihilators;

  friend auto operator<=>(const LambdaKey&, const LambdaKey&) = default;
};

/// pi-form word: a lambda shell around a middle block a_k ad_k whose mode
/// dominates both neighbours (last creator < k, first annihilator < k).
struct PiKey {
  std::vector<int> creators;
  int middle = 0;
  std::vector<int> annihilators;

  friend auto operator<=>(const PiKey&, const PiKey&) = default;
};

struct NormalForm {
  std::map<LambdaKey, cplx> lambda_terms;
  std::map<PiKey, cplx> pi_terms;

  bool is_zero() const { return lambda_terms.empty() && pi_terms.empty(); }
  friend bool operator==(const NormalForm&, const NormalForm&) = default;
};

/// Rewrites every word to zero, a lambda-form or a pi-form and collects the
/// results. The rule set:
///   (K1) adjacent ad_i ad_j with i >= j kills the word,
///   (K2) adjacent a_i a_j with j >= i kills the word,
///   (K3) adjacent a_i ad_j with i != j kills the word,
///   (ABS) an adjacent same-mode block a_k ad_k is erased when a neighbour
///         dominates it: creator on the left with mode >= k, annihilator on
///         the left with mode > k, annihilator on the right with mode >= k,
///         or creator on the right with mode > k.
/// Every rule shortens the word, so rewriting terminates; the middle block
/// of a_k ad_k is never expanded through the window-dependent completeness
/// relation, which keeps the normal form window-free.
NormalForm normalize(const AlgebraPolynomial& p);

/// Same rewriting relation, but the redex applied at each step is chosen by
/// a seeded generator. Used to exercise confluence.
NormalForm normalize_randomized(const AlgebraPolynomial& p, std::uint64_t seed);

AlgebraPolynomial to_polynomial(const NormalForm& nf);
AlgebraWord lambda_word(const LambdaKey& key);
AlgebraWord pi_word(const PiKey& key);

/// Expands every pi block through a_k ad_k = I - sum_{lo <= m <= k} ad_m a_m
/// and renormalizes. The result depends on the window through pi terms with
/// no creators and no annihilators; with both neighbours present it matches
/// the window-free reduction to lambda-forms.
std::map<LambdaKey, cplx> flatten_to_lambda(const NormalForm& nf, ModeWindow window);

SparseOperator materialize(const AlgebraPolynomial& p, const MonotoneBasis& basis);

/// Max-entry distance between the materializations of p and normalize(p) on
/// the given window, which must contain support(p) with one spare index on
/// each side.
double normal_form_oracle_check(const AlgebraPolynomial& p, ModeWindow window);

/// The stationary-state segment between the vacuum state (gamma = 0) and the
/// state at infinity (gamma = 1). Evaluation is symbolic: the vacuum sees
/// the unit and the bare a_k ad_k blocks, the state at infinity sees only
/// the unit coefficient.
class MonotoneState {
 public:
  explicit MonotoneState(double gamma);

  double gamma() const { return gamma_; }
  cplx operator()(const NormalForm& nf) const;
  cplx operator()(const AlgebraPolynomial& p) const { return (*this)(normalize(p)); }

 private:
  double gamma_;
};

inline MonotoneState monotone_state(double gamma) { return MonotoneState(gamma); }

struct StationarityCheckItem {
  std::size_t word_index = 0;
  int power = 0;
  cplx base_value;
  cplx shifted_value;
};

struct StationarityReport {
  std::vector<StationarityCheckItem> items;
  double max_deviation = 0.0;
  bool all_equal = false;
};

StationarityReport monotone_stationarity_check(double gamma,
                                               const std::vector<AlgebraPolynomial>& words,
                                               const std::vector<int>& shift_powers);

/// "ad(i1) ad(i2) [a(k) ad(k)] a(j1)" style text, one bracketed middle block
/// per pi term; round-trips through parse_normal_form.
std::string print_normal_form(const NormalForm& nf);
NormalForm parse_normal_form(const std::string& text);

}  // namespace ncprob
