#include "bdiv/operators.hpp"

#include <vector>

#include "bdiv/error.hpp"
#include "bdiv/reduce.hpp"
#include "stencil.hpp"

namespace bdiv {

ScalarField discrete_divergence(const VectorField& v) {
  const Grid& g = v.grid();
  ScalarField out(g);
  for (int a = 0; a < v.dim(); ++a) {
    require(v[a].grid() == g, "vector components live on different grids");
    stencil::add_backward_difference(g, a, v[a].values(), out.values());
  }
  return out;
}

VectorField forward_gradient(const ScalarField& f) {
  VectorField out(f.grid());
  for (int a = 0; a < f.grid().dim(); ++a) stencil::forward_difference(f.grid(), a, f.values(), out[a].values());
  return out;
}

ScalarField discrete_laplacian(const ScalarField& g) { return discrete_divergence(forward_gradient(g)); }

ScalarField cumulative_primitive(const ScalarField& f, int axis) {
  const Grid& g = f.grid();
  require(axis >= 0 && axis < g.dim(), "axis out of range");
  require(!g.periodic(axis), "cumulative primitive is undefined along a periodic axis");
  ScalarField out(g);
  const double h = g.h(axis);
  stencil::for_each_lower_neighbour(g, axis, [&](std::size_t k, std::size_t km) {
    out[k] = (km == stencil::npos ? 0.0 : out[km]) + h * f[k];
  });
  return out;
}

ScalarField sample_function(const Grid& grid, const PointFunction& fn) {
  ScalarField out(grid);
  std::vector<double> x(grid.dim());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const auto idx = grid.unflatten(k);
    for (int a = 0; a < grid.dim(); ++a) x[a] = grid.center(a, idx[a]);
    out[k] = fn(x);
  }
  return out;
}

double integral(const ScalarField& f) { return pairwise_sum(f.values()) * f.grid().cell_volume(); }

ScalarField mean_zero(const ScalarField& f) {
  const double mean = pairwise_sum(f.values()) / static_cast<double>(f.size());
  ScalarField out(f);
  for (double& v : out.values()) v -= mean;
  return out;
}

double inner(const ScalarField& a, const ScalarField& b) {
  require(a.grid() == b.grid(), "fields live on different grids");
  return pairwise_dot(a.values(), b.values()) * a.grid().cell_volume();
}

double inner(const VectorField& a, const VectorField& b) {
  require(a.grid() == b.grid(), "vector fields live on different grids");
  double s = 0.0;
  for (int i = 0; i < a.dim(); ++i) s += inner(a[i], b[i]);
  return s;
}

}  // namespace bdiv
