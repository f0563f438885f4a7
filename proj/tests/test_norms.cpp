#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "bdiv/error.hpp"
#include "bdiv/norms.hpp"
#include "support.hpp"

using namespace bdiv;
using namespace bdiv::norms;
using testing::box;
using testing::uniform_field;

namespace {

// int_0^inf (t^{1/p} f*(t))^q dt/t with f* a step function, piece by piece.
double lorentz_oracle(const ScalarField& f, double p, double q) {
  std::vector<double> a;
  for (double x : f.values()) a.push_back(std::abs(x));
  std::sort(a.rbegin(), a.rend());
  const double c = f.grid().cell_volume();
  long double total = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const long double t0 = i * c, t1 = (i + 1) * c;
    total += std::pow((long double)a[i], q) * (p / q) * (std::pow(t1, q / p) - std::pow(t0, q / p));
  }
  return std::pow((double)total, 1.0 / q);
}

double weak_exhaustive(const ScalarField& f, double p) {
  const std::size_t n = f.size();
  const double c = f.grid().cell_volume();
  double best = 0.0;
  for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
    double s = 0.0;
    int cnt = 0;
    for (std::size_t k = 0; k < n; ++k)
      if (mask >> k & 1) {
        s += std::abs(f[k]);
        ++cnt;
      }
    best = std::max(best, std::pow(cnt * c, -(p - 1) / p) * s * c);
  }
  return best;
}

double morrey_oracle(const ScalarField& f) {
  const Grid& g = f.grid();
  const int d = g.dim();
  const double hmin = g.min_h();
  double diam2 = 0.0;
  for (int a = 0; a < d; ++a) diam2 += std::pow(g.hi(a) - g.lo(a), 2);
  double best = 0.0;
  for (std::size_t c = 0; c < g.size(); ++c)
    for (int j = 1; j * hmin <= std::sqrt(diam2) + hmin; ++j) {
      const double R = j * hmin;
      double mass = 0.0;
      for (std::size_t k = 0; k < g.size(); ++k) {
        double r2 = 0.0;
        for (int a = 0; a < d; ++a)
          r2 += std::pow(g.center(a, g.unflatten(k)[a]) - g.center(a, g.unflatten(c)[a]), 2);
        if (std::sqrt(r2) <= R * (1 + 1e-12)) mass += std::abs(f[k]);
      }
      best = std::max(best, std::pow(R, 1.0 - d) * mass * g.cell_volume());
    }
  return best;
}

// int_R TV(chi_{g > t}) dt, integrating the piecewise constant integrand exactly.
// The indicator is shifted by chi_{0 > t} so it also vanishes beyond the edges.
double coarea_oracle(const ScalarField& g) {
  std::vector<double> levels(g.values().begin(), g.values().end());
  levels.push_back(0.0);  // the value assumed beyond non-periodic edges
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < levels.size(); ++i) {
    const double t = 0.5 * (levels[i] + levels[i + 1]);
    ScalarField chi(g.grid());
    for (std::size_t k = 0; k < g.size(); ++k) chi[k] = (g[k] > t ? 1.0 : 0.0) - (0.0 > t ? 1.0 : 0.0);
    total += tv_norm(chi, TvVariant::anisotropic) * (levels[i + 1] - levels[i]);
  }
  return total;
}

}  // namespace

TEST_CASE("Lp norms") {
  const Grid g = box(2, 5);
  const auto f = uniform_field(g, 1);
  for (double p : {1.0, 1.5, 2.0, 3.0, 7.0}) {
    double s = 0.0;
    for (double x : f.values()) s += std::pow(std::abs(x), p);
    CHECK(lp_norm(f, p) == doctest::Approx(std::pow(s * g.cell_volume(), 1 / p)).epsilon(1e-13));
  }
  double m = 0.0;
  for (double x : f.values()) m = std::max(m, std::abs(x));
  CHECK(lp_norm(f, kInf) == m);
  CHECK(lp_norm(ScalarField(g), 2.0) == 0.0);
  CHECK_THROWS_AS(lp_norm(f, 0.5), InvalidArgument);
  ScalarField huge(g, 1e300);
  CHECK(std::isfinite(lp_norm(huge, 2.0)));
}

TEST_CASE("Lorentz norm against step-function quadrature") {
  const auto f = uniform_field(box(2, 7), 2);
  for (double p : {1.0, 1.5, 2.0, 4.0})
    for (double q : {1.0, 2.0, 3.0}) CHECK(lorentz_norm(f, p, q) == doctest::Approx(lorentz_oracle(f, p, q)).epsilon(1e-10));
  CHECK_THROWS_AS(lorentz_norm(f, 2.0, kInf), InvalidArgument);
  CHECK_THROWS_AS(lorentz_norm(f, kInf, 2.0), InvalidArgument);
}

TEST_CASE("Lorentz (p,p) equals Lp") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto f = uniform_field(box(2, 16), seed);
    for (double p : {1.0, 1.5, 2.0, 3.0})
      CHECK(std::abs(lorentz_norm(f, p, p) - lp_norm(f, p)) <= 1e-12 * lp_norm(f, p));
  }
}

TEST_CASE("weak set norm equals exhaustive subset search") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto f = uniform_field(box(2, 4), seed + 40);
    for (double p : {1.5, 2.0, 3.0}) CHECK(weak_lp_setnorm(f, p) == doctest::Approx(weak_exhaustive(f, p)).epsilon(1e-13));
  }
  CHECK_THROWS_AS(weak_lp_setnorm(uniform_field(box(1, 4), 1), 1.0), InvalidArgument);
  const auto one = weak_lp_setnorm_detail(ScalarField(box(1, 8), 2.0), 2.0);
  CHECK(one.cells == 8);
}

TEST_CASE("weak L2 set norm is dominated by L2") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto f = uniform_field(box(2, 12), seed);
    CHECK(weak_lp_setnorm(f, 2.0) <= lp_norm(f, 2.0) * (1 + 1e-14));
  }
}

TEST_CASE("Morrey norm against brute force over balls") {
  for (int d = 1; d <= 3; ++d) {
    const Grid g(d, {5, 4, 3}, {0, 0, 0}, {1, 0.8, 0.9}, {false, false, false});
    const auto f = uniform_field(g, 50 + d);
    CHECK(morrey_norm(f) == doctest::Approx(morrey_oracle(f)).epsilon(1e-12));
  }
}

TEST_CASE("total variation") {
  const Grid per = box(2, 8, true);
  CHECK(tv_norm(ScalarField(per, 2.0), TvVariant::isotropic) == 0.0);
  const auto g = uniform_field(box(2, 9), 4);
  const double iso = tv_norm(g, TvVariant::isotropic);
  const double an = tv_norm(g, TvVariant::anisotropic);
  CHECK(iso <= an);
  CHECK(an <= std::sqrt(2.0) * iso * (1 + 1e-14));
  CHECK(tv_norm(3.0 * g, TvVariant::isotropic) == doctest::Approx(3.0 * iso));

  // characteristic function of a 2x3 block inside a 6x6 box of side 1
  ScalarField chi(box(2, 6));
  for (std::size_t i = 1; i < 3; ++i)
    for (std::size_t j = 2; j < 5; ++j) chi[i * 6 + j] = 1.0;
  CHECK(tv_norm(chi, TvVariant::anisotropic) == doctest::Approx(2.0 * (2 + 3) / 6.0));
}

TEST_CASE("coarea identity for anisotropic TV") {
  for (bool periodic : {false, true}) {
    auto g = uniform_field(box(2, 6, periodic), 77);
    for (double& x : g.values()) x = std::round(x * 8) / 8;
    CHECK(tv_norm(g, TvVariant::anisotropic) == doctest::Approx(coarea_oracle(g)).epsilon(1e-13));
  }
}

TEST_CASE("Frechet derivative matches finite differences") {
  const auto v = uniform_field(box(2, 5), 8);
  const auto w = uniform_field(box(2, 5), 9);
  for (double p : {1.0, 2.0, 3.0}) {
    const auto D = frechet_derivative(v, p);
    double dir = 0.0;
    for (std::size_t k = 0; k < v.size(); ++k) dir += D[k] * w[k] * v.grid().cell_volume();
    const double eps = 1e-6;
    const double fd = (std::pow(lp_norm(v + eps * w, 2), p) - std::pow(lp_norm(v - eps * w, 2), p)) / (2 * eps);
    CHECK(dir == doctest::Approx(fd).epsilon(1e-7));
  }
  CHECK_THROWS_AS(frechet_derivative(ScalarField(box(1, 4)), 2.0), InvalidArgument);
}

TEST_CASE("evaluate dispatches") {
  const auto f = uniform_field(box(2, 6), 10);
  CHECK(evaluate(f, NormKind::Lp(3)) == lp_norm(f, 3));
  CHECK(evaluate(f, NormKind::Linf()) == lp_norm(f, kInf));
  CHECK(evaluate(f, NormKind::WeakLpSet(2)) == weak_lp_setnorm(f, 2));
  CHECK(NormKind::Lorentz(2, 1).label() != NormKind::Lp(2).label());
}
