#include "bdiv/examples.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "bdiv/error.hpp"
#include "bdiv/operators.hpp"

namespace bdiv::examples {

ScalarField nirenberg_potential(std::size_t n) {
  require(n >= 16, "nirenberg_field needs n >= 16");
  const Grid g = Grid::cube(2, n, -1.0, 1.0, true);
  return sample_function(g, [](std::span<const double> x) {
    const double r2 = x[0] * x[0] + x[1] * x[1];
    if (r2 == 0.0 || r2 >= 1.0) return 0.0;
    const double r = std::sqrt(r2);
    return x[0] * std::cbrt(std::abs(std::log(r))) * std::exp(-1.0 / (1.0 - r2));
  });
}

ScalarField nirenberg_field(std::size_t n) { return mean_zero(discrete_laplacian(nirenberg_potential(n))); }

ScalarField ball_field(double alpha, double R, std::size_t n, const BallDomain& domain) {
  require(n >= 8, "ball_field needs n >= 8");
  require(domain.half_width > 0.0, "domain half-width must be positive");
  require(R > 0.0 && R <= domain.half_width, "ball radius must lie in (0, half-width]");
  const Grid g = Grid::cube(2, n, -domain.half_width, domain.half_width, domain.periodic);
  return sample_function(g, [&](std::span<const double> x) {
    return std::hypot(x[0], x[1]) <= R ? alpha : 0.0;
  });
}

TatarPair tatar_pair(double p, int levels, std::size_t n) {
  require(p > 1.0, "tatar_pair needs p > 1");
  require(levels >= 4 && levels <= 60, "tatar_pair needs 4 <= levels <= 60");
  require(static_cast<double>(n) >= std::ldexp(1.0, levels + 2),
          "tatar_pair needs n >= 2^(levels+2) so the finest interval holds 4 cells");
  const Grid g(1, {n, 1, 1}, {0, 0, 0}, {1, 0, 0}, {false, false, false});
  const double h = g.h(0);
  const double e = 1.0 - 1.0 / p;

  TatarPair out{ScalarField(g), ScalarField(g), 0, 0, 0};
  for (std::size_t i = 0; i < n; ++i) {
    const double a = static_cast<double>(i) * h, b = a + h;
    out.f[i] = (std::pow(b, e) - std::pow(a, e)) / (e * h);
    const double x = g.center(0, i);
    for (int k = 0; k < levels; ++k)
      if (x > std::ldexp(1.0, -(k + 1)) && x < std::ldexp(1.0, -k)) {
        out.g[i] = ((k % 2) ? -1.0 : 1.0) * std::pow(2.0, k / p);
        break;
      }
  }
  out.rho = std::pow(2.0, -1.0 + 1.0 / p);
  out.alpha_stated = 1.0 / (1.0 + out.rho);
  out.slope = 0.5 / (1.0 + out.rho);
  return out;
}

ScalarField random_field(std::uint64_t seed, const Grid& grid, const RandomLaw& law) {
  std::mt19937_64 rng(seed);
  ScalarField f(grid);
  if (law.kind == RandomLaw::Kind::gaussian) {
    std::normal_distribution<double> normal(0.0, 1.0);
    for (double& v : f.values()) v = normal(rng);
    return f;
  }
  require(law.spikes <= grid.size(), "more spikes than cells");
  require(law.amplitude > 0.0, "spike amplitude must be positive");
  std::vector<std::size_t> cells(grid.size());
  std::iota(cells.begin(), cells.end(), std::size_t{0});
  std::uniform_real_distribution<double> mag(0.75, 1.0);
  // partial Fisher-Yates: the first `spikes` entries become the chosen cells
  for (std::size_t i = 0; i < law.spikes; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, cells.size() - 1);
    std::swap(cells[i], cells[pick(rng)]);
    const double sign = (rng() & 1u) ? 1.0 : -1.0;
    f[cells[i]] = sign * law.amplitude * mag(rng);
  }
  return f;
}

ScalarField random_field(std::uint64_t seed, std::size_t n, const RandomLaw& law) {
  return random_field(seed, Grid::cube(2, n, 0.0, 1.0, true), law);
}

}  // namespace bdiv::examples
