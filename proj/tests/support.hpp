#pragma once

#include <random>

#include "bdiv/field.hpp"

namespace testing {

inline bdiv::ScalarField uniform_field(const bdiv::Grid& g, std::uint64_t seed, double lo = -1.0, double hi = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(lo, hi);
  bdiv::ScalarField f(g);
  for (std::size_t k = 0; k < f.size(); ++k) f[k] = dist(rng);
  return f;
}

inline bdiv::VectorField uniform_vector(const bdiv::Grid& g, std::uint64_t seed) {
  std::vector<bdiv::ScalarField> c;
  for (int a = 0; a < g.dim(); ++a) c.push_back(uniform_field(g, seed * 31 + a));
  return bdiv::VectorField(std::move(c));
}

inline bdiv::Grid box(int d, std::size_t n, bool periodic = false) {
  return bdiv::Grid::cube(d, n, 0.0, 1.0, periodic);
}

}  // namespace testing
