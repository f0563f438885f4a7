#include "bdiv/grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bdiv/error.hpp"

namespace bdiv {

Grid::Grid(int d, std::array<std::size_t, kMaxDim> n, std::array<double, kMaxDim> lo,
           std::array<double, kMaxDim> hi, std::array<bool, kMaxDim> periodic)
    : d_(d) {
  require(d >= 1 && d <= kMaxDim, "grid dimension must be 1, 2 or 3");
  size_ = 1;
  cell_volume_ = 1.0;
  for (int i = 0; i < d; ++i) {
    require(n[i] >= 2, "grid needs at least 2 cells per axis");
    require(std::isfinite(lo[i]) && std::isfinite(hi[i]) && hi[i] > lo[i],
            "grid bounds must be finite with hi > lo");
    n_[i] = n[i];
    lo_[i] = lo[i];
    hi_[i] = hi[i];
    periodic_[i] = periodic[i];
    h_[i] = (hi[i] - lo[i]) / static_cast<double>(n[i]);
    size_ *= n[i];
    cell_volume_ *= h_[i];
  }
  std::size_t s = 1;
  for (int i = d - 1; i >= 0; --i) {
    stride_[i] = s;
    s *= n_[i];
  }
}

Grid Grid::cube(int d, std::size_t n, double lo, double hi, bool periodic) {
  return Grid(d, {n, n, n}, {lo, lo, lo}, {hi, hi, hi}, {periodic, periodic, periodic});
}

bool Grid::all_periodic() const {
  for (int i = 0; i < d_; ++i)
    if (!periodic_[i]) return false;
  return true;
}

bool Grid::any_periodic() const {
  for (int i = 0; i < d_; ++i)
    if (periodic_[i]) return true;
  return false;
}

double Grid::min_h() const { return *std::min_element(h_.begin(), h_.begin() + d_); }

std::array<std::size_t, kMaxDim> Grid::unflatten(std::size_t k) const {
  std::array<std::size_t, kMaxDim> idx{0, 0, 0};
  for (int i = 0; i < d_; ++i) {
    idx[i] = k / stride_[i];
    k %= stride_[i];
  }
  return idx;
}

std::size_t Grid::flatten(const std::array<std::size_t, kMaxDim>& idx) const {
  std::size_t k = 0;
  for (int i = 0; i < d_; ++i) k += idx[i] * stride_[i];
  return k;
}

unsigned Grid::periodic_mask() const {
  unsigned m = 0;
  for (int i = 0; i < d_; ++i)
    if (periodic_[i]) m |= 1u << i;
  return m;
}

std::string Grid::describe() const {
  std::ostringstream os;
  os << d_ << "D [";
  for (int i = 0; i < d_; ++i) {
    if (i) os << " x ";
    os << n_[i];
  }
  os << "]";
  return os.str();
}

bool operator==(const Grid& a, const Grid& b) {
  if (a.d_ != b.d_) return false;
  for (int i = 0; i < a.d_; ++i) {
    if (a.n_[i] != b.n_[i] || a.lo_[i] != b.lo_[i] || a.hi_[i] != b.hi_[i] ||
        a.periodic_[i] != b.periodic_[i])
      return false;
  }
  return true;
}

}  // namespace bdiv
