#pragma once

#include <array>
#include <cstddef>
#include <string>

namespace bdiv {

inline constexpr int kMaxDim = 3;

/// Uniform rectangular lattice of cells. Values live at cell centers
/// lo + (i + 1/2) h along each axis; the last axis is stored fastest.
class Grid {
public:
  Grid() = default;

  /// Throws InvalidArgument unless 1 <= d <= 3, n_i >= 2 and hi_i > lo_i.
  Grid(int d, std::array<std::size_t, kMaxDim> n, std::array<double, kMaxDim> lo,
       std::array<double, kMaxDim> hi, std::array<bool, kMaxDim> periodic);

  /// Square/cubic box [lo, hi]^d with n cells per axis.
  static Grid cube(int d, std::size_t n, double lo, double hi, bool periodic);

  int dim() const { return d_; }
  std::size_t n(int axis) const { return n_[axis]; }
  double lo(int axis) const { return lo_[axis]; }
  double hi(int axis) const { return hi_[axis]; }
  double h(int axis) const { return h_[axis]; }
  bool periodic(int axis) const { return periodic_[axis]; }
  bool all_periodic() const;
  bool any_periodic() const;

  std::size_t size() const { return size_; }
  std::size_t stride(int axis) const { return stride_[axis]; }
  double cell_volume() const { return cell_volume_; }
  double min_h() const;

  double center(int axis, std::size_t i) const { return lo_[axis] + (static_cast<double>(i) + 0.5) * h_[axis]; }

  /// Multi-index of flat cell index `k`.
  std::array<std::size_t, kMaxDim> unflatten(std::size_t k) const;
  std::size_t flatten(const std::array<std::size_t, kMaxDim>& idx) const;

  /// Bitmask with bit i set when axis i is periodic (file header layout).
  unsigned periodic_mask() const;

  std::string describe() const;

  friend bool operator==(const Grid& a, const Grid& b);

private:
  int d_ = 0;
  std::array<std::size_t, kMaxDim> n_{1, 1, 1};
  std::array<double, kMaxDim> lo_{0, 0, 0};
  std::array<double, kMaxDim> hi_{1, 1, 1};
  std::array<double, kMaxDim> h_{1, 1, 1};
  std::array<bool, kMaxDim> periodic_{false, false, false};
  std::array<std::size_t, kMaxDim> stride_{1, 1, 1};
  std::size_t size_ = 0;
  double cell_volume_ = 0.0;
};

inline bool operator!=(const Grid& a, const Grid& b) { return !(a == b); }

}  // namespace bdiv
