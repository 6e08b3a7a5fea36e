#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <utility>

namespace ncprob {

using cplx = std::complex<double>;

/// Sparse coefficient vector over a basis, keyed by basis position.
using SparseVec = std::map<std::size_t, cplx>;

cplx vec_inner(const SparseVec& x, const SparseVec& y);  // <x, y> = sum conj(y)*x
double vec_norm(const SparseVec& x);
void vec_axpy(SparseVec& out, cplx a, const SparseVec& x);

/// Complex sparse square matrix over an indexed basis. Entries whose modulus
/// is at or below the materialization tolerance (1e-15) are not stored.
class SparseOperator {
 public:
  static constexpr double kEntryTolerance = 1e-15;

  using EntryMap = std::map<std::pair<std::size_t, std::size_t>, cplx>;

  explicit SparseOperator(std::size_t dim) : dim_(dim) {}
  static SparseOperator identity(std::size_t dim);

  std::size_t dim() const { return dim_; }
  std::size_t nnz() const { return entries_.size(); }
  const EntryMap& entries() const { return entries_; }

  cplx at(std::size_t row, std::size_t col) const;
  void add_at(std::size_t row, std::size_t col, cplx v);

  SparseOperator& operator+=(const SparseOperator& other);
  SparseOperator& operator-=(const SparseOperator& other);
  SparseOperator& operator*=(cplx scale);

  friend SparseOperator operator+(SparseOperator a, const SparseOperator& b) {
    a += b;
    return a;
  }
  friend SparseOperator operator-(SparseOperator a, const SparseOperator& b) {
    a -= b;
    return a;
  }
  friend SparseOperator operator*(const SparseOperator& a, const SparseOperator& b);
  friend SparseOperator operator*(SparseOperator a, cplx scale) {
    a *= scale;
    return a;
  }
  friend SparseOperator operator*(cplx scale, SparseOperator a) {
    a *= scale;
    return a;
  }

  friend bool operator==(const SparseOperator&, const SparseOperator&) = default;

  SparseOperator adjoint() const;
  SparseVec apply(const SparseVec& x) const;

  double max_abs() const;
  /// Max modulus over entries whose (row, col) pair satisfies keep.
  double max_abs_where(const std::function<bool(std::size_t, std::size_t)>& keep) const;

  /// Coordinate text dump: one "row col re im" line per stored entry.
  std::string to_coordinate_text() const;

 private:
  std::size_t dim_;
  EntryMap entries_;
};

double max_abs_diff(const SparseOperator& a, const SparseOperator& b);

}  // namespace ncprob
