#pragma once

#include <map>
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

/// Sample labels with a declared involution and unit. Base labels are fixed
/// per family; products inside one index slot are composite labels joined by
/// '*', e.g. "ad*a".
class SampleAlphabet {
 public:
  static SampleAlphabet fock();   // 1, a, ad, x (x self-adjoint)
  static SampleAlphabet group();  // 1, g, g^-1

  bool valid(const std::string& label) const;
  std::string star(const std::string& label) const;
  const std::vector<std::string>& base_labels() const { return base_; }

  static std::vector<std::string> split_composite(const std::string& label);
  static std::string join_composite(const std::vector<std::string>& parts);

 private:
  std::vector<std::string> base_;
  std::map<std::string, std::string> star_of_;
};

/// Index tuple plus equally long label tuple; contiguous indices differ.
struct MomentKey {
  std::vector<int> indices;
  std::vector<std::string> labels;

  friend auto operator<=>(const MomentKey&, const MomentKey&) = default;
};

void validate_key(const MomentKey& key, const SampleAlphabet& alphabet);

/// Reversed key with starred labels; p(key*) = conj(p(key)) on every
/// state-generated table.
MomentKey star_key(const MomentKey& key, const SampleAlphabet& alphabet);

/// Joint-moment table over a finite sample alphabet, either generated on
/// demand by an engine binding or backed by stored entries.
class MomentTable {
 public:
  struct QBinding {
    const QFockBasis* basis = nullptr;
    double q = 0.0;
  };
  struct BooleanBinding {
    const BooleanBasis* basis = nullptr;
    double gamma = 0.0;
  };
  struct MonotoneBinding {
    double gamma = 0.0;
  };
  struct HaagerupBinding {
    double lambda = 1.0;
  };
  using EngineBinding =
      std::variant<QBinding, BooleanBinding, MonotoneBinding, HaagerupBinding>;

  MomentTable(SampleAlphabet alphabet, EngineBinding binding);
  MomentTable(SampleAlphabet alphabet, std::map<MomentKey, cplx> entries);

  const SampleAlphabet& alphabet() const { return alphabet_; }
  bool engine_backed() const { return binding_.has_value(); }
  const std::map<MomentKey, cplx>& entries() const { return entries_; }
  std::string engine_name() const;

  /// Equality tolerance for symmetry verdicts: 0 where the arithmetic is
  /// exact (Boolean, monotone, Haagerup, stored entries), 1e-13 for the q
  /// engine whose sums may regroup under relabeling.
  double exact_tolerance() const;

  cplx evaluate(const MomentKey& key) const;

  /// CSV rows "indices;labels;re;im" in key order; round-trips.
  std::string to_csv() const;
  static MomentTable from_csv(SampleAlphabet alphabet, const std::string& text);

 private:
  SampleAlphabet alphabet_;
  std::optional<EngineBinding> binding_;
  std::map<MomentKey, cplx> entries_;
};

/// Gram matrix [p(star(half_i) . half_j)] over the given half words; colliding
/// junction indices fuse into one slot with the product label. Returns the
/// min eigenvalue of the Hermitian part.
double positivity_check(const MomentTable& table, const std::vector<MomentKey>& half_keys);

struct ConsistencyReport {
  cplx with_unit;
  cplx without_unit;
  bool equal = false;
  MomentKey reduced_key;
};

/// Drops the unit slot at the given position, fusing neighbours that become
/// adjacent with equal indices, and compares both evaluations.
ConsistencyReport consistency_check(const MomentTable& table, const MomentKey& key,
                                    std::size_t position);

struct SymmetryReport {
  double max_deviation = 0.0;
  bool passed = false;
};

SymmetryReport exchangeability_check(const MomentTable& table,
                                     const std::vector<MomentKey>& keys,
                                     const std::vector<GroupElement>& permutations);
SymmetryReport stationarity_check(const MomentTable& table,
                                  const std::vector<MomentKey>& keys,
                                  const std::vector<int>& shift_powers);

struct SymshReport {
  bool hypothesis_met = false;  // exchangeability on the generating family
  bool stationary = false;
  double exchange_deviation = 0.0;
  double shift_deviation = 0.0;
};

/// Exchangeability first; when it holds, stationarity must follow. The
/// permutation family is generated from the indices of the keys (adjacent
/// transpositions plus the full cycle).
SymshReport symsh_verification(const MomentTable& table, const std::vector<MomentKey>& keys,
                               const std::vector<int>& shift_powers);

}  // namespace ncprob
