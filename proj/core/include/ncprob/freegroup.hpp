#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "ncprob/algebra.hpp"

namespace ncprob {

/// One generator power g_i^{+-1}.
struct GroupLetter {
  int generator = 0;
  int exponent = 1;  // +1 or -1

  friend auto operator<=>(const GroupLetter&, const GroupLetter&) = default;
};

/// Reduced word over the free-group generators; the empty word is the
/// identity. Construct through reduce() so the invariant always holds.
struct GroupWord {
  std::vector<GroupLetter> letters;

  bool is_identity() const { return letters.empty(); }
  std::size_t length() const { return letters.size(); }

  friend auto operator<=>(const GroupWord&, const GroupWord&) = default;
};

/// Free reduction: cancels adjacent g g^{-1} pairs until none remain.
GroupWord reduce(std::vector<GroupLetter> letters);

GroupWord inverse(const GroupWord& w);
GroupWord multiply(const GroupWord& v, const GroupWord& w);
std::set<int> support(const GroupWord& w);

/// Relabels generator indices through g; reducedness and length are
/// preserved because the relabeling is injective.
GroupWord act(const GroupElement& g, const GroupWord& w);

/// Finite linear combination of reduced words.
class GroupAlgebraElement {
 public:
  using TermMap = std::map<GroupWord, cplx>;

  GroupAlgebraElement() = default;
  static GroupAlgebraElement from_word(GroupWord w, cplx coeff = 1.0);

  const TermMap& terms() const { return terms_; }
  void add_term(const GroupWord& w, cplx coeff);
  bool is_zero() const { return terms_.empty(); }

  friend bool operator==(const GroupAlgebraElement&, const GroupAlgebraElement&) = default;

 private:
  TermMap terms_;
};

/// exp(-lambda * |w|) for lambda in (0, inf); lambda = +inf denotes the
/// tracial limit (1 on the identity, 0 elsewhere), kept as a separate case
/// so no overflow arithmetic is involved.
double haagerup(double lambda, const GroupWord& w);
cplx haagerup(double lambda, const GroupAlgebraElement& x);

/// Both sides of phi(vw) = phi(v) phi(w). The verdict is decided on the
/// integer identity |reduce(vw)| == |v| + |w|, which disjoint supports force;
/// an overlap is reported as out-of-hypothesis rather than rejected.
struct ProductStateReport {
  double lhs = 0.0;
  double rhs = 0.0;
  bool equal = false;
  bool supports_disjoint = false;
};

ProductStateReport product_state_check(double lambda, const GroupWord& v,
                                       const GroupWord& w);

/// Both sides of phi(uvw) = phi(uw) phi(v); the equality is decided on
/// |reduce(uvw)| == |reduce(uw)| + |v|.
struct BlockSingletonReport {
  double lhs = 0.0;
  double rhs = 0.0;
  bool equal = false;
  bool supports_disjoint = false;
};

BlockSingletonReport block_singleton_check(double lambda, const GroupWord& u,
                                           const GroupWord& v, const GroupWord& w);

/// Min eigenvalue of the section Gram [phi(v_i^{-1} v_j)]; state positivity
/// keeps it above -1e-10.
double haagerup_positivity_probe(double lambda, const std::vector<GroupWord>& words);

/// phi(act(g, w)) == phi(w); relabeling never changes the reduced length.
bool haagerup_symmetry_check(double lambda, const GroupWord& w, const GroupElement& g);

/// Word syntax "g1 g2^-1 g1"; the identity prints as "e". Round-trips.
std::string print_group_word(const GroupWord& w);
GroupWord parse_group_word(const std::string& text);

}  // namespace ncprob
