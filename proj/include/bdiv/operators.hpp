#pragma once

#include <functional>
#include <span>

#include "bdiv/field.hpp"

namespace bdiv {

/// Backward-difference divergence: sum_i (v_i[x] - v_i[x - e_i]) / h_i.
/// Periodic axes wrap; on other axes v_i is zero below the first cell.
ScalarField discrete_divergence(const VectorField& v);

/// Forward-difference gradient: (g[x + e_i] - g[x]) / h_i, with g taken as
/// zero beyond the last cell on non-periodic axes. Minus the adjoint of
/// discrete_divergence on every grid.
VectorField forward_gradient(const ScalarField& g);

/// Second-order five/seven point Laplacian, div(grad g).
ScalarField discrete_laplacian(const ScalarField& g);

/// u[k] = h_axis * sum_{m <= k} f[m] along `axis` (running sum from the
/// lower boundary). Throws on periodic axes.
ScalarField cumulative_primitive(const ScalarField& f, int axis);

using PointFunction = std::function<double(std::span<const double>)>;

/// Evaluates `fn` at every cell center.
ScalarField sample_function(const Grid& grid, const PointFunction& fn);

/// Volume-weighted integral of f.
double integral(const ScalarField& f);

/// Subtracts the volume-weighted mean.
ScalarField mean_zero(const ScalarField& f);

/// Volume-weighted L2 inner product.
double inner(const ScalarField& a, const ScalarField& b);
double inner(const VectorField& a, const VectorField& b);

}  // namespace bdiv
