#pragma once

// Raw-span difference kernels shared by the field operators and the
// iterative solvers (which work on flat buffers to avoid reallocations).

#include <span>

#include "bdiv/grid.hpp"

namespace bdiv::stencil {

/// Calls body(k, km) for every cell k with km the flat index of k - e_axis,
/// or km == npos when that neighbour lies below a non-periodic boundary.
inline constexpr std::size_t npos = static_cast<std::size_t>(-1);

template <class Body>
void for_each_lower_neighbour(const Grid& g, int axis, const Body& body) {
  const std::size_t n = g.n(axis);
  const std::size_t s = g.stride(axis);
  const std::size_t block = n * s;
  const bool wrap = g.periodic(axis);
  for (std::size_t base = 0; base < g.size(); base += block) {
    for (std::size_t j = 0; j < s; ++j) {
      const std::size_t k0 = base + j;
      body(k0, wrap ? k0 + (n - 1) * s : npos);
    }
    for (std::size_t i = 1; i < n; ++i) {
      const std::size_t row = base + i * s;
      for (std::size_t j = 0; j < s; ++j) body(row + j, row + j - s);
    }
  }
}

/// Same for the upper neighbour k + e_axis.
template <class Body>
void for_each_upper_neighbour(const Grid& g, int axis, const Body& body) {
  const std::size_t n = g.n(axis);
  const std::size_t s = g.stride(axis);
  const std::size_t block = n * s;
  const bool wrap = g.periodic(axis);
  for (std::size_t base = 0; base < g.size(); base += block) {
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const std::size_t row = base + i * s;
      for (std::size_t j = 0; j < s; ++j) body(row + j, row + j + s);
    }
    const std::size_t last = base + (n - 1) * s;
    for (std::size_t j = 0; j < s; ++j) body(last + j, wrap ? base + j : npos);
  }
}

/// out[k] += scale * (v[k] - v[k - e_axis]) / h_axis
inline void add_backward_difference(const Grid& g, int axis, std::span<const double> v,
                                    std::span<double> out, double scale = 1.0) {
  const double c = scale / g.h(axis);
  for_each_lower_neighbour(g, axis, [&](std::size_t k, std::size_t km) {
    out[k] += c * (v[k] - (km == npos ? 0.0 : v[km]));
  });
}

/// out[k] = (v[k + e_axis] - v[k]) / h_axis
inline void forward_difference(const Grid& g, int axis, std::span<const double> v,
                               std::span<double> out) {
  const double c = 1.0 / g.h(axis);
  for_each_upper_neighbour(g, axis, [&](std::size_t k, std::size_t kp) {
    out[k] = c * ((kp == npos ? 0.0 : v[kp]) - v[k]);
  });
}

}  // namespace bdiv::stencil
