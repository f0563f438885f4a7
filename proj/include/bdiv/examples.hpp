#pragma once

#include <cstdint>

#include "bdiv/field.hpp"

namespace bdiv::examples {

/// f = discrete Laplacian of v(x) = x_1 |log|x||^{1/3} exp(-1/(1-|x|^2)) on the
/// periodic square [-1,1]^2 with n x n cells, mean removed. v vanishes at the
/// origin and for |x| >= 1. Requires n >= 16.
ScalarField nirenberg_field(std::size_t n);

/// The sampled v itself (useful for plots and for checking the Laplacian).
ScalarField nirenberg_potential(std::size_t n);

struct BallDomain {
  double half_width = 3.0;
  bool periodic = false;
};

/// alpha * chi_{|x| <= R} on [-w, w]^2 with n x n cells; a cell is inside
/// when its center is. Requires 0 < R <= w and n >= 8.
ScalarField ball_field(double alpha, double R, std::size_t n, const BallDomain& domain = {});

struct TatarPair {
  ScalarField f;  ///< cell averages of x^{-1/p} on (0, 1)
  ScalarField g;  ///< sum_{k < levels} (-1)^k 2^{k/p} 1_{(2^{-k-1}, 2^{-k})}, sampled at centers
  double rho = 0.0;           ///< 2^{-1+1/p}
  double alpha_stated = 0.0;  ///< 1/(1+rho)
  double slope = 0.0;         ///< 1/(2(1+rho)), the exact one-sided slope at t = 2^{-k}
};

/// Requires p > 1, levels >= 4, n >= 2^{levels+2}.
TatarPair tatar_pair(double p, int levels, std::size_t n);

struct RandomLaw {
  enum class Kind { gaussian, spikes };
  Kind kind = Kind::gaussian;
  std::size_t spikes = 0;  ///< number of spikes (spikes law)
  double amplitude = 1.0;  ///< spike magnitudes lie in [0.75, 1] * amplitude

  static RandomLaw Gaussian() { return {}; }
  static RandomLaw Spikes(std::size_t k, double amplitude) { return {Kind::spikes, k, amplitude}; }
};

/// Seeded field on `grid`: unit normal values, or `spikes` random-sign
/// spikes on a zero background.
ScalarField random_field(std::uint64_t seed, const Grid& grid, const RandomLaw& law);

/// Same on the periodic unit square with n x n cells.
ScalarField random_field(std::uint64_t seed, std::size_t n, const RandomLaw& law);

}  // namespace bdiv::examples
