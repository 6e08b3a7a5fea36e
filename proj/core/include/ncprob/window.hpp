#pragma once

#include <vector>

#include "ncprob/errors.hpp"

namespace ncprob {

/// A mode sequence indexing one Fock basis vector.
using ModeSeq = std::vector<int>;

/// Finite mode range [lo, hi] used to truncate the two-sided index set.
struct ModeWindow {
  int lo = 0;
  int hi = 0;

  ModeWindow() = default;
  ModeWindow(int lo_, int hi_) : lo(lo_), hi(hi_) {
    if (lo > hi) throw InvalidParameter("mode window requires lo <= hi");
  }

  int width() const { return hi - lo + 1; }
  bool contains(int mode) const { return lo <= mode && mode <= hi; }

  friend bool operator==(const ModeWindow&, const ModeWindow&) = default;
};

}  // namespace ncprob
