#include "ncprob/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ncprob/io.hpp"

namespace ncprob {

cplx vec_inner(const SparseVec& x, const SparseVec& y) {
  // Iterate the shorter map.
  const SparseVec& small = x.size() <= y.size() ? x : y;
  const SparseVec& large = x.size() <= y.size() ? y : x;
  cplx sum{};
  for (const auto& [i, v] : small) {
    auto it = large.find(i);
    if (it == large.end()) continue;
    const cplx xv = (&small == &x) ? v : it->second;
    const cplx yv = (&small == &x) ? it->second : v;
    sum += xv * std::conj(yv);
  }
  return sum;
}

double vec_norm(const SparseVec& x) {
  double s = 0.0;
  for (const auto& [i, v] : x) s += std::norm(v);
  return std::sqrt(s);
}

void vec_axpy(SparseVec& out, cplx a, const SparseVec& x) {
  if (a == cplx{}) return;
  for (const auto& [i, v] : x) {
    cplx& slot = out[i];
    slot += a * v;
    if (slot == cplx{}) out.erase(i);
  }
}

SparseOperator SparseOperator::identity(std::size_t dim) {
  SparseOperator id(dim);
  for (std::size_t i = 0; i < dim; ++i) id.entries_[{i, i}] = 1.0;
  return id;
}

cplx SparseOperator::at(std::size_t row, std::size_t col) const {
  auto it = entries_.find({row, col});
  return it == entries_.end() ? cplx{} : it->second;
}

void SparseOperator::add_at(std::size_t row, std::size_t col, cplx v) {
  if (row >= dim_ || col >= dim_) throw std::out_of_range("sparse entry outside basis");
  auto key = std::make_pair(row, col);
  auto [it, inserted] = entries_.try_emplace(key, v);
  if (!inserted) it->second += v;
  if (std::abs(it->second) <= kEntryTolerance) entries_.erase(it);
}

SparseOperator& SparseOperator::operator+=(const SparseOperator& other) {
  if (other.dim_ != dim_) throw std::invalid_argument("dimension mismatch");
  for (const auto& [rc, v] : other.entries_) add_at(rc.first, rc.second, v);
  return *this;
}

SparseOperator& SparseOperator::operator-=(const SparseOperator& other) {
  if (other.dim_ != dim_) throw std::invalid_argument("dimension mismatch");
  for (const auto& [rc, v] : other.entries_) add_at(rc.first, rc.second, -v);
  return *this;
}

SparseOperator& SparseOperator::operator*=(cplx scale) {
  if (scale == cplx{}) {
    entries_.clear();
    return *this;
  }
  for (auto it = entries_.begin(); it != entries_.end();) {
    it->second *= scale;
    it = (std::abs(it->second) <= kEntryTolerance) ? entries_.erase(it) : std::next(it);
  }
  return *this;
}

SparseOperator operator*(const SparseOperator& a, const SparseOperator& b) {
  if (a.dim_ != b.dim_) throw std::invalid_argument("dimension mismatch");
  SparseOperator c(a.dim_);
  // Entries are row-major ordered, so rows of b are contiguous ranges.
  for (const auto& [rc, va] : a.entries_) {
    const auto [i, j] = rc;
    auto it = b.entries_.lower_bound({j, 0});
    for (; it != b.entries_.end() && it->first.first == j; ++it) {
      c.add_at(i, it->first.second, va * it->second);
    }
  }
  return c;
}

SparseOperator SparseOperator::adjoint() const {
  SparseOperator out(dim_);
  for (const auto& [rc, v] : entries_) {
    out.entries_[{rc.second, rc.first}] = std::conj(v);
  }
  return out;
}

SparseVec SparseOperator::apply(const SparseVec& x) const {
  SparseVec out;
  for (const auto& [rc, v] : entries_) {
    auto it = x.find(rc.second);
    if (it == x.end()) continue;
    cplx& slot = out[rc.first];
    slot += v * it->second;
    if (slot == cplx{}) out.erase(rc.first);
  }
  return out;
}

double SparseOperator::max_abs() const {
  double m = 0.0;
  for (const auto& [rc, v] : entries_) m = std::max(m, std::abs(v));
  return m;
}

double SparseOperator::max_abs_where(
    const std::function<bool(std::size_t, std::size_t)>& keep) const {
  double m = 0.0;
  for (const auto& [rc, v] : entries_) {
    if (keep(rc.first, rc.second)) m = std::max(m, std::abs(v));
  }
  return m;
}

std::string SparseOperator::to_coordinate_text() const {
  std::string out;
  for (const auto& [rc, v] : entries_) {
    out += std::to_string(rc.first) + " " + std::to_string(rc.second) + " " +
           fmt_double(v.real()) + " " + fmt_double(v.imag()) + "\n";
  }
  return out;
}

double max_abs_diff(const SparseOperator& a, const SparseOperator& b) {
  SparseOperator d = a;
  d -= b;
  return d.max_abs();
}

}  // namespace ncprob
