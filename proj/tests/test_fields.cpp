#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>

#include "bdiv/error.hpp"
#include "bdiv/field_io.hpp"
#include "bdiv/operators.hpp"
#include "bdiv/reduce.hpp"
#include "support.hpp"

using namespace bdiv;
using testing::box;
using testing::uniform_field;
using testing::uniform_vector;

TEST_CASE("grid validation") {
  CHECK_THROWS_AS(Grid::cube(0, 4, 0, 1, false), InvalidArgument);
  CHECK_THROWS_AS(Grid::cube(4, 4, 0, 1, false), InvalidArgument);
  CHECK_THROWS_AS(Grid::cube(2, 1, 0, 1, false), InvalidArgument);
  CHECK_THROWS_AS(Grid::cube(2, 4, 1, 1, false), InvalidArgument);
  Grid g(2, {4, 8, 1}, {0, -1, 0}, {2, 1, 0}, {true, false, false});
  CHECK(g.size() == 32);
  CHECK(g.stride(0) == 8);
  CHECK(g.stride(1) == 1);
  CHECK(g.h(0) == doctest::Approx(0.5));
  CHECK(g.h(1) == doctest::Approx(0.25));
  CHECK(g.periodic_mask() == 1u);
  CHECK(g.center(1, 0) == doctest::Approx(-0.875));
  for (std::size_t k = 0; k < g.size(); ++k) CHECK(g.flatten(g.unflatten(k)) == k);
}

TEST_CASE("divergence matches a hand-written 2-D stencil") {
  for (bool periodic : {false, true}) {
    Grid g(2, {5, 7, 1}, {0, 0, 0}, {1, 2, 0}, {periodic, periodic, false});
    const auto v = uniform_vector(g, 3);
    const auto div = discrete_divergence(v);
    for (std::size_t i = 0; i < 5; ++i)
      for (std::size_t j = 0; j < 7; ++j) {
        const std::size_t k = i * 7 + j;
        double below_x = 0.0, below_y = 0.0;
        if (i > 0) below_x = v[0][k - 7];
        else if (periodic) below_x = v[0][4 * 7 + j];
        if (j > 0) below_y = v[1][k - 1];
        else if (periodic) below_y = v[1][i * 7 + 6];
        const double expect = (v[0][k] - below_x) / g.h(0) + (v[1][k] - below_y) / g.h(1);
        CHECK(div[k] == doctest::Approx(expect).epsilon(1e-13));
      }
  }
}

TEST_CASE("forward gradient is minus the adjoint of divergence") {
  for (int d = 1; d <= 3; ++d)
    for (bool periodic : {false, true}) {
      const Grid g = box(d, d == 3 ? 5 : 9, periodic);
      const auto v = uniform_vector(g, 10 + d);
      const auto u = uniform_field(g, 20 + d);
      const double lhs = inner(discrete_divergence(v), u);
      const double rhs = -inner(v, forward_gradient(u));
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
}

TEST_CASE("laplacian of a constant vanishes on a torus") {
  const Grid g = box(2, 6, true);
  const auto lap = discrete_laplacian(ScalarField(g, 3.5));
  for (double x : lap.values()) CHECK(std::abs(x) < 1e-12);
}

TEST_CASE("cumulative primitive is a prefix sum and inverts the divergence") {
  const Grid g(2, {6, 4, 1}, {0, 0, 0}, {3, 1, 0}, {false, false, false});
  const auto f = uniform_field(g, 7);
  for (int axis = 0; axis < 2; ++axis) {
    const auto u = cumulative_primitive(f, axis);
    for (std::size_t k = 0; k < g.size(); ++k) {
      auto idx = g.unflatten(k);
      double s = 0.0;
      for (std::size_t m = 0; m <= idx[axis]; ++m) {
        auto j = idx;
        j[axis] = m;
        s += f[g.flatten(j)];
      }
      CHECK(u[k] == doctest::Approx(s * g.h(axis)).epsilon(1e-13));
    }
    std::vector<ScalarField> comps(2, ScalarField(g));
    comps[axis] = u;
    const auto div = discrete_divergence(VectorField(comps));
    for (std::size_t k = 0; k < g.size(); ++k) CHECK(div[k] == doctest::Approx(f[k]).epsilon(1e-12));
  }
  CHECK_THROWS_AS(cumulative_primitive(uniform_field(box(2, 4, true), 1), 0), InvalidArgument);
}

TEST_CASE("sampling, integral and mean removal") {
  const Grid g(2, {4, 4, 1}, {-1, -1, 0}, {1, 1, 0}, {true, true, false});
  const auto f = sample_function(g, [](std::span<const double> x) { return x[0] + 2.0 * x[1] + 1.0; });
  CHECK(f[0] == doctest::Approx(-0.75 - 1.5 + 1.0));
  CHECK(integral(f) == doctest::Approx(4.0));
  CHECK(std::abs(integral(mean_zero(f))) < 1e-14);
}

TEST_CASE("pairwise sums agree with long double accumulation") {
  const auto f = uniform_field(box(1, 10007), 5, -1e3, 1e3);
  long double ref = 0;
  for (double x : f.values()) ref += x;
  CHECK(pairwise_sum(f.values()) == doctest::Approx(static_cast<double>(ref)).epsilon(1e-14));
}

TEST_CASE("field file round trip is bit exact") {
  Grid g(3, {2, 3, 4}, {-1, 0, 0.5}, {1, 3, 2.5}, {true, false, true});
  const auto f = uniform_field(g, 99);
  const auto bytes = encode_field(f);
  REQUIRE(bytes.size() == 5 + 1 + 3 * 4 + 6 * 8 + 1 + 24 * 8);
  CHECK(std::memcmp(bytes.data(), "BDIV1", 5) == 0);
  CHECK(bytes[5] == 3);
  CHECK(bytes[6] == 2);
  CHECK(bytes[7] == 0);
  CHECK(bytes[10] == 3);
  CHECK(bytes[5 + 1 + 12 + 48] == 0b101);
  double lo0 = 0;
  std::memcpy(&lo0, bytes.data() + 18, 8);
  CHECK(lo0 == -1.0);
  double hi0 = 0;
  std::memcpy(&hi0, bytes.data() + 18 + 24, 8);
  CHECK(hi0 == 1.0);

  const auto back = decode_field(bytes);
  CHECK(back.grid() == g);
  CHECK(std::memcmp(back.values().data(), f.values().data(), 24 * 8) == 0);
  CHECK(encode_field(back) == bytes);

  const auto path = std::filesystem::temp_directory_path() / "bdiv_roundtrip.bdf";
  write_field(f, path.string());
  CHECK(encode_field(read_field(path.string())) == bytes);
  std::filesystem::remove(path);
}

TEST_CASE("malformed field files are rejected") {
  const auto bytes = encode_field(uniform_field(box(2, 3), 1));
  auto bad = bytes;
  bad[0] = 'X';
  CHECK_THROWS_AS(decode_field(bad), IoError);
  CHECK_THROWS_AS(decode_field({bytes.begin(), bytes.end() - 1}), IoError);
  CHECK_THROWS_AS(decode_field({bytes.begin(), bytes.begin() + 8}), IoError);
  auto extra = bytes;
  extra.push_back(0);
  CHECK_THROWS_AS(decode_field(extra), IoError);
  auto mask = bytes;
  mask[5 + 1 + 8 + 32] = 0b100;
  CHECK_THROWS_AS(decode_field(mask), IoError);
  auto nan = bytes;
  const double q = std::nan("");
  std::memcpy(nan.data() + nan.size() - 8, &q, 8);
  CHECK_THROWS_AS(decode_field(nan), IoError);
  CHECK_THROWS_AS(read_field("/nonexistent/dir/x.bdf"), IoError);
}
