#include <doctest.h>

#include <cmath>
#include <numbers>

#include "bdiv/error.hpp"
#include "bdiv/examples.hpp"
#include "bdiv/field_io.hpp"
#include "bdiv/norms.hpp"
#include "bdiv/operators.hpp"

using namespace bdiv;
using namespace bdiv::examples;

namespace {

bool identical(const ScalarField& a, const ScalarField& b) { return encode_field(a) == encode_field(b); }

}  // namespace

TEST_CASE("nirenberg: potential matches a pointwise re-evaluation") {
  const auto v = nirenberg_potential(40);
  const Grid& g = v.grid();
  CHECK(g.all_periodic());
  CHECK(g.lo(0) == -1.0);
  CHECK(g.hi(1) == 1.0);
  for (std::size_t k = 0; k < v.size(); k += 37) {
    const auto idx = g.unflatten(k);
    const double x = g.center(0, idx[0]), y = g.center(1, idx[1]);
    const double r = std::sqrt(x * x + y * y);
    const double want = r < 1.0 ? x * std::pow(-std::log(r), 1.0 / 3.0) * std::exp(-1.0 / (1.0 - r * r)) : 0.0;
    CHECK(v[k] == doctest::Approx(want).epsilon(1e-13));
  }
}

TEST_CASE("nirenberg: odd in x1, mean zero, discrete Laplacian of the potential") {
  for (std::size_t n : {16, 50, 64}) {
    const auto f = nirenberg_field(n);
    const Grid& g = f.grid();
    const double scale = norms::lp_norm(f, norms::kInf);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        CHECK(std::abs(f[g.flatten({i, j, 0})] + f[g.flatten({n - 1 - i, j, 0})]) <= 1e-12 * scale);
    CHECK(std::abs(integral(f)) <= 1e-12 * scale);
    const auto lap = discrete_laplacian(nirenberg_potential(n));
    double diff = 0.0;
    for (std::size_t k = 0; k < f.size(); ++k) diff = std::max(diff, std::abs(f[k] - lap[k]));
    CHECK(diff <= 1e-12 * scale);
  }
  CHECK_THROWS_AS(nirenberg_field(8), InvalidArgument);
}

TEST_CASE("nirenberg: L2 norms form a Cauchy trend under refinement") {
  std::vector<double> norm;
  for (std::size_t n : {50, 100, 200, 400}) norm.push_back(norms::lp_norm(nirenberg_field(n), 2.0));
  for (std::size_t i = 2; i < norm.size(); ++i)
    CHECK(std::abs(norm[i] - norm[i - 1]) < std::abs(norm[i - 1] - norm[i - 2]));
}

TEST_CASE("ball: zero height, cell-count integral, face-count perimeter") {
  CHECK(norms::lp_norm(ball_field(0.0, 1.0, 32), norms::kInf) == 0.0);
  const double alpha = 3.0, R = 1.0;
  const auto f = ball_field(alpha, R, 96);
  const Grid& g = f.grid();
  std::size_t inside = 0;
  for (double v : f.values()) inside += v == alpha;
  const double h = g.h(0);
  CHECK(integral(f) == doctest::Approx(alpha * static_cast<double>(inside) * h * h));
  CHECK(std::abs(integral(f) - alpha * std::numbers::pi * R * R) <= alpha * 2.0 * std::numbers::pi * R * h);

  // anisotropic TV of the indicator = h * number of faces separating in from out
  const auto chi = ball_field(1.0, R, 96);
  std::size_t faces = 0;
  for (std::size_t i = 0; i < g.n(0); ++i)
    for (std::size_t j = 0; j < g.n(1); ++j) {
      const double c = chi[g.flatten({i, j, 0})];
      if (i + 1 < g.n(0)) faces += c != chi[g.flatten({i + 1, j, 0})];
      if (j + 1 < g.n(1)) faces += c != chi[g.flatten({i, j + 1, 0})];
    }
  CHECK(norms::tv_norm(chi, norms::TvVariant::anisotropic) == doctest::Approx(static_cast<double>(faces) * h));
  CHECK(norms::tv_norm(chi, norms::TvVariant::anisotropic) == doctest::Approx(8.0 * R).epsilon(0.05));

  CHECK_THROWS_AS(ball_field(1.0, 4.0, 32), InvalidArgument);
  CHECK_THROWS_AS(ball_field(1.0, 1.0, 4), InvalidArgument);
  CHECK(ball_field(1.0, 1.0, 16, BallDomain{2.0, true}).grid().all_periodic());
}

TEST_CASE("tatar: domination, interval integrals, constants") {
  const double p = 2.0;
  const int levels = 6;
  const std::size_t n = 1024;
  const auto t = tatar_pair(p, levels, n);
  for (std::size_t k = 0; k < n; ++k) CHECK(std::abs(t.g[k]) <= t.f[k]);

  const double h = t.f.grid().h(0);
  for (int k = 0; k < levels; ++k) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double x = t.f.grid().center(0, i);
      if (x > std::ldexp(1.0, -(k + 1)) && x < std::ldexp(1.0, -k)) s += t.g[i] * h;
    }
    // 2^{k/p} |I_k| = rho^k / 2
    CHECK(s == doctest::Approx(0.5 * std::pow(-t.rho, k)).epsilon(1e-12));
  }
  // cell averages of x^{-1/p} integrate exactly to p/(p-1)
  double mass = 0.0;
  for (double v : t.f.values()) mass += v * h;
  CHECK(mass == doctest::Approx(p / (p - 1.0)).epsilon(1e-12));

  CHECK(t.rho == doctest::Approx(std::pow(2.0, -0.5)));
  CHECK(t.alpha_stated == doctest::Approx(0.58579).epsilon(1e-5));
  CHECK(t.slope == doctest::Approx(0.5 * t.alpha_stated));
  CHECK_THROWS_AS(tatar_pair(2.0, 8, 512), InvalidArgument);
  CHECK_THROWS_AS(tatar_pair(1.0, 4, 64), InvalidArgument);
}

TEST_CASE("random fields: determinism, spikes, gaussian moments") {
  const auto a = random_field(5, 32, RandomLaw::Gaussian());
  CHECK(identical(a, random_field(5, 32, RandomLaw::Gaussian())));
  CHECK_FALSE(identical(a, random_field(6, 32, RandomLaw::Gaussian())));

  for (std::size_t k : {0, 1, 9, 40}) {
    const auto s = random_field(8, 16, RandomLaw::Spikes(k, 2.0));
    std::size_t above = 0, nonzero = 0;
    for (double v : s.values()) {
      above += std::abs(v) > 1.0;
      nonzero += v != 0.0;
      CHECK(std::abs(v) <= 2.0);
    }
    CHECK(above == k);
    CHECK(nonzero == k);
  }
  CHECK_THROWS_AS(random_field(1, 4, RandomLaw::Spikes(17, 1.0)), InvalidArgument);

  // sample moments of N normals within 5 sigma of (0, 1)
  const auto big = random_field(42, 128, RandomLaw::Gaussian());
  const double N = static_cast<double>(big.size());
  double m = 0.0, m2 = 0.0;
  for (double v : big.values()) {
    m += v;
    m2 += v * v;
  }
  m /= N;
  m2 /= N;
  CHECK(std::abs(m) <= 5.0 / std::sqrt(N));
  CHECK(std::abs(m2 - 1.0) <= 5.0 * std::sqrt(2.0 / N));
}
