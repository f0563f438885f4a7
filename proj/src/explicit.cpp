#include "bdiv/explicit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "bdiv/error.hpp"
#include "bdiv/norms.hpp"
#include "bdiv/operators.hpp"
#include "bdiv/reduce.hpp"

namespace bdiv::split {
namespace {

/// First cell of every line along `axis`, in row-major order of the
/// remaining coordinates.
std::vector<std::size_t> line_starts(const Grid& g, int axis) {
  std::vector<std::size_t> starts;
  starts.reserve(g.size() / g.n(axis));
  for (std::size_t k = 0; k < g.size(); ++k)
    if (g.unflatten(k)[axis] == 0) starts.push_back(k);
  return starts;
}

double line_abs_integral(const ScalarField& f, int axis, std::size_t start) {
  const Grid& g = f.grid();
  const std::size_t s = g.stride(axis);
  return pairwise_accumulate(0, g.n(axis), [&](std::size_t i) { return std::abs(f[start + i * s]); }) * g.h(axis);
}

void require_box(const ScalarField& f) {
  for (int a = 0; a < f.grid().dim(); ++a)
    require(!f.grid().periodic(a), "explicit constructions need a non-periodic box (primitives are taken from the lower boundary)");
}

SplitResult assemble(const ScalarField& f, std::vector<ScalarField> parts, std::vector<RegionMask> masks,
                     double bound) {
  SplitResult res;
  const Grid& g = f.grid();
  std::vector<ScalarField> comps;
  for (int a = 0; a < g.dim(); ++a) {
    comps.push_back(cumulative_primitive(parts[a], a));
    const auto starts = line_starts(g, a);
    for (std::size_t line = 0; line < starts.size(); ++line)
      res.certificates.push_back({a, line, line_abs_integral(parts[a], a, starts[line]), bound});
  }
  res.u = VectorField(std::move(comps));
  res.parts = std::move(parts);
  res.masks = std::move(masks);
  return res;
}

struct RowColumnNorms {
  std::vector<double> V;  // per x (axis 0): (sum_y f^2 h_1)^{1/2}
  std::vector<double> H;  // per y (axis 1): (sum_x f^2 h_0)^{1/2}
};

RowColumnNorms row_column_norms(const ScalarField& f) {
  const Grid& g = f.grid();
  const std::size_t nx = g.n(0), ny = g.n(1);
  RowColumnNorms rc{std::vector<double>(nx), std::vector<double>(ny)};
  for (std::size_t i = 0; i < nx; ++i)
    rc.V[i] = std::sqrt(pairwise_accumulate(0, ny, [&](std::size_t j) {
      const double v = f[i * ny + j];
      return v * v;
    }) * g.h(1));
  for (std::size_t j = 0; j < ny; ++j)
    rc.H[j] = std::sqrt(pairwise_accumulate(0, nx, [&](std::size_t i) {
      const double v = f[i * ny + j];
      return v * v;
    }) * g.h(0));
  return rc;
}

void require_2d(const ScalarField& f) {
  require(f.grid().dim() == 2, "this construction is two-dimensional");
  require_box(f);
}

// Marks owner[k] = axis for the cells of the slice {base + sum_a idx_a stride_a : a in axes}
// following the threshold-and-recurse construction. `work` holds the values
// still unassigned; cells handed to an axis are zeroed in it.
void assign_slice(const Grid& g, std::vector<double>& work, std::size_t base, const std::vector<int>& axes,
                  std::vector<int>& owner) {
  const int m = static_cast<int>(axes.size());
  std::vector<std::size_t> cells{base};
  double slice_vol = 1.0;
  for (int a : axes) {
    std::vector<std::size_t> next;
    next.reserve(cells.size() * g.n(a));
    for (std::size_t c : cells)
      for (std::size_t i = 0; i < g.n(a); ++i) next.push_back(c + i * g.stride(a));
    cells = std::move(next);
    slice_vol *= g.h(a);
  }

  double scale = 0.0;
  for (std::size_t c : cells) scale = std::max(scale, std::abs(work[c]));
  if (scale == 0.0) return;
  const double norm = scale * std::pow(pairwise_accumulate(0, cells.size(), [&](std::size_t i) {
                                         return std::pow(std::abs(work[cells[i]]) / scale, m);
                                       }) * slice_vol,
                                       1.0 / m);

  if (m == 1) {
    for (std::size_t c : cells)
      if (work[c] != 0.0) {
        owner[c] = axes[0];
        work[c] = 0.0;
      }
    return;
  }

  const int first = axes[0];
  const std::vector<int> rest(axes.begin() + 1, axes.end());
  const std::size_t n1 = g.n(first);
  const std::size_t s1 = g.stride(first);
  // cells are ordered with `first` outermost: cells[i * lines + y]
  const std::size_t lines = cells.size() / n1;
  for (std::size_t y = 0; y < lines; ++y) {
    const double tpow = pairwise_accumulate(0, n1, [&](std::size_t i) {
      return std::pow(std::abs(work[cells[i * lines + y]]) / norm, m);
    }) * g.h(first);
    if (tpow <= 0.0) continue;
    const double t = std::pow(tpow, 1.0 / (m - 1));
    for (std::size_t i = 0; i < n1; ++i) {
      const std::size_t c = cells[i * lines + y];
      if (std::abs(work[c]) / norm >= t) {
        owner[c] = first;
        work[c] = 0.0;
      }
    }
  }
  for (std::size_t i = 0; i < n1; ++i) assign_slice(g, work, base + i * s1, rest, owner);
}

}  // namespace

double SplitResult::worst_certificate_ratio() const {
  double worst = 0.0;
  for (const auto& c : certificates) {
    if (c.bound > 0.0)
      worst = std::max(worst, c.value / c.bound);
    else if (c.value > 0.0)
      return std::numeric_limits<double>::infinity();
  }
  return worst;
}

double line_energy(const ScalarField& f, int axis, std::size_t index) {
  const Grid& g = f.grid();
  require(g.dim() == 2, "line energies are defined on 2-D grids");
  require(axis == 0 || axis == 1, "axis out of range");
  const int other = 1 - axis;
  require(index < g.n(other), "line index out of range");
  return line_abs_integral(f, axis, index * g.stride(other));
}

SplitResult split_onestep_2d(const ScalarField& f) {
  require_2d(f);
  const Grid& g = f.grid();
  const auto rc = row_column_norms(f);
  const std::size_t ny = g.n(1);
  ScalarField f1(g), f2(g);
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double V = rc.V[k / ny], H = rc.H[k % ny];
    const double s = H + V;
    if (s == 0.0) continue;
    f1[k] = (V / s) * f[k];
    f2[k] = (H / s) * f[k];
  }
  return assemble(f, {std::move(f1), std::move(f2)}, {}, norms::lp_norm(f, 2.0));
}

SplitResult split_disjoint_2d(const ScalarField& f) {
  require_2d(f);
  const Grid& g = f.grid();
  const auto rc = row_column_norms(f);
  const std::size_t ny = g.n(1);
  ScalarField f1(g), f2(g);
  RegionMask m1(g), m2(g);
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (f[k] == 0.0) continue;
    if (rc.H[k % ny] <= rc.V[k / ny]) {
      f1[k] = f[k];
      m1.set(k, true);
    } else {
      f2[k] = f[k];
      m2.set(k, true);
    }
  }
  return assemble(f, {std::move(f1), std::move(f2)}, {std::move(m1), std::move(m2)}, norms::lp_norm(f, 2.0));
}

SplitResult split_inductive_nd(const ScalarField& f) {
  const Grid& g = f.grid();
  const int d = g.dim();
  require(d >= 1 && d <= 3, "inductive construction supports d = 1, 2, 3");
  require_box(f);
  std::vector<double> work(f.values().begin(), f.values().end());
  std::vector<int> owner(g.size(), -1);
  std::vector<int> axes(d);
  for (int a = 0; a < d; ++a) axes[a] = a;
  assign_slice(g, work, 0, axes, owner);

  std::vector<ScalarField> parts(d, ScalarField(g));
  std::vector<RegionMask> masks(d, RegionMask(g));
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (owner[k] < 0) continue;
    parts[owner[k]][k] = f[k];
    masks[owner[k]].set(k, true);
  }
  return assemble(f, std::move(parts), std::move(masks), norms::lp_norm(f, d));
}

std::pair<SplitResult, StripDecompositionTrace> decompose_weak_l2(const ScalarField& f, double tau, int max_iter) {
  require_2d(f);
  require(tau > 1.0, "strip decomposition needs tau > 1");
  require(max_iter >= 1, "max_iter must be positive");
  const Grid& g = f.grid();
  const std::size_t nx = g.n(0), ny = g.n(1);
  const double h0 = g.h(0), h1 = g.h(1);
  const double s = norms::weak_lp_setnorm(f, 2.0);

  StripDecompositionTrace trace;
  std::vector<int> owner(g.size(), -1);
  std::vector<char> row_active(ny, 1), col_active(nx, 1);
  auto active_count = [](const std::vector<char>& v) {
    return static_cast<std::size_t>(std::count(v.begin(), v.end(), char{1}));
  };

  if (s > 0.0) {
    for (int pass = 0; pass < max_iter; ++pass) {
      const std::size_t rows = active_count(row_active), cols = active_count(col_active);
      if (rows == 0 || cols == 0) break;
      StripPass rec;
      rec.residual_measure = static_cast<double>(rows * cols) * g.cell_volume();
      rec.tau = tau;

      // energies of f restricted to the current residual set, with f scaled to unit norm
      std::vector<double> EH(ny, 0.0), EV(nx, 0.0);
      for (std::size_t j = 0; j < ny; ++j) {
        if (!row_active[j]) continue;
        EH[j] = pairwise_accumulate(0, nx, [&](std::size_t i) {
          return col_active[i] ? std::abs(f[i * ny + j]) / s : 0.0;
        }) * h0;
      }
      for (std::size_t i = 0; i < nx; ++i) {
        if (!col_active[i]) continue;
        EV[i] = pairwise_accumulate(0, ny, [&](std::size_t j) {
          return row_active[j] ? std::abs(f[i * ny + j]) / s : 0.0;
        }) * h1;
      }
      std::vector<char> in_A(ny, 0), in_B(nx, 0);
      for (std::size_t j = 0; j < ny; ++j) in_A[j] = row_active[j] && EH[j] <= tau;
      for (std::size_t i = 0; i < nx; ++i) in_B[i] = col_active[i] && EV[i] <= tau;

      for (std::size_t i = 0; i < nx; ++i) {
        if (!col_active[i]) continue;
        for (std::size_t j = 0; j < ny; ++j) {
          if (!row_active[j]) continue;
          const std::size_t k = i * ny + j;
          if (in_A[j])
            owner[k] = 0;
          else if (in_B[i])
            owner[k] = 1;
        }
      }
      for (std::size_t j = 0; j < ny; ++j)
        if (in_A[j]) row_active[j] = 0;
      for (std::size_t i = 0; i < nx; ++i)
        if (in_B[i]) col_active[i] = 0;
      rec.rows_kept = active_count(row_active);
      rec.cols_kept = active_count(col_active);
      trace.passes.push_back(rec);
    }
  }
  const std::size_t rows = active_count(row_active), cols = active_count(col_active);
  trace.final_measure = s > 0.0 ? static_cast<double>(rows * cols) * g.cell_volume() : 0.0;

  ScalarField f1(g), f2(g);
  RegionMask m1(g), m2(g);
  bool complete = true;
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (f[k] == 0.0) continue;
    if (owner[k] == 0) {
      f1[k] = f[k];
      m1.set(k, true);
    } else if (owner[k] == 1) {
      f2[k] = f[k];
      m2.set(k, true);
    } else {
      complete = false;
    }
  }
  auto res = assemble(f, {std::move(f1), std::move(f2)}, {std::move(m1), std::move(m2)}, tau * s);
  res.complete = complete;
  return {std::move(res), std::move(trace)};
}

}  // namespace bdiv::split
