#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "ncprob/algebra.hpp"
#include "ncprob/sparse.hpp"
#include "ncprob/window.hpp"

namespace ncprob {

/// Truncated full Fock basis over a mode window: all mode sequences of
/// length <= depth, ordered by length and then lexicographically by mode
/// value. Position 0 is the empty sequence (the vacuum).
class QFockBasis {
 public:
  static constexpr std::size_t kDefaultCapacity = std::size_t{1} << 22;

  QFockBasis(ModeWindow window, int depth, std::size_t capacity = kDefaultCapacity);

  const ModeWindow& window() const { return window_; }
  int depth() const { return depth_; }
  std::size_t size() const { return level_offsets_.back(); }
  const std::vector<ModeSeq>& entries() const { return entries_; }

  std::size_t index_of(const ModeSeq& seq) const;
  int level_of(std::size_t index) const;
  std::size_t level_begin(int level) const { return level_offsets_[level]; }
  std::size_t level_end(int level) const { return level_offsets_[level + 1]; }

 private:
  ModeWindow window_;
  int depth_;
  std::vector<std::size_t> level_offsets_;  // size depth+2, last entry = size()
  std::vector<ModeSeq> entries_;
};

/// Rejects deformation parameters outside [-0.99, 0.99]; the boundary values
/// q = +-1 belong to different algebras and are not represented here.
void validate_q(double q);

/// Creator at the given mode: prepend for sequences below the depth cutoff,
/// zero on top-level sequences (truncation).
SparseOperator q_creator(const QFockBasis& basis, double q, int mode);

/// Annihilator: removes each matching mode at position k with weight q^(k-1);
/// the vacuum maps to zero.
SparseOperator q_annihilator(const QFockBasis& basis, double q, int mode);

/// Defect of a_i ad_j - q ad_j a_i - delta_ij on the truncated basis. The
/// identity is exact on sequences of length <= depth-1; top-level columns
/// only fail because the creator truncates, and are reported separately.
struct RelationReport {
  double interior_defect = 0.0;
  double boundary_defect = 0.0;
  std::vector<std::size_t> boundary_columns;
};

RelationReport check_q_relation(const QFockBasis& basis, double q, int i, int j);

/// Deformed inner product, one Hermitian block per particle level. Entries
/// pair sequences with equal mode multisets only, so each level block is
/// block-diagonal over multisets and is stored that way. Built by the
/// brute-force sum over permutations, with a hard depth cap of 5.
class QGram {
 public:
  static constexpr int kMaxLevel = 5;
  static constexpr double kDegenerateTolerance = 1e-10;

  struct Block {
    int level = 0;
    std::vector<std::size_t> members;  // basis positions sharing one multiset
    std::vector<double> dense;         // row-major, members.size()^2 entries
    std::vector<double> inv_chol_h;    // upper-triangular L^{-H}, same layout
  };

  QGram(const QFockBasis& basis, double q);

  double q() const { return q_; }
  double min_eigenvalue() const { return min_eigenvalue_; }
  const std::vector<Block>& blocks() const { return blocks_; }

  /// Deformed pairing <x, y>_q = y^H G x.
  cplx inner(const SparseVec& x, const SparseVec& y) const;
  SparseVec apply(const SparseVec& x) const;

  /// The Gram as a sparse matrix on the full basis.
  SparseOperator to_operator(const QFockBasis& basis) const;

  /// One orthonormalized vector per block member, via the block Cholesky
  /// factor; vectors at different levels or multisets are already
  /// orthogonal. Restricted to sequences with modes inside test_modes and
  /// length <= max_level.
  std::vector<SparseVec> orthonormal_vectors(const QFockBasis& basis,
                                             const ModeWindow& test_modes,
                                             int max_level) const;

 private:
  double q_;
  double min_eigenvalue_;
  std::vector<Block> blocks_;
  std::vector<std::uint32_t> block_of_;     // basis index -> block id
  std::vector<std::uint32_t> pos_in_block_; // basis index -> row inside block
};

double check_q_adjointness(const QFockBasis& basis, const QGram& gram, int mode);
double check_q_adjointness(const QFockBasis& basis, double q, int mode);

/// The (vacuum, vacuum) matrix entry.
cplx vacuum_expectation(const SparseOperator& op);

/// Homomorphic image of a polynomial: letters map to creator/annihilator
/// matrices, words to matrix products, sums to sums.
SparseOperator materialize(const AlgebraPolynomial& p, const QFockBasis& basis, double q);

/// Applies the polynomial to a vector letter by letter, without forming the
/// operator matrix. Agrees with materialize(p).apply(x).
SparseVec apply_polynomial(const AlgebraPolynomial& p, const QFockBasis& basis, double q,
                           const SparseVec& x);

}  // namespace ncprob
