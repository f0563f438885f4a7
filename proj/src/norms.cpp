#include "bdiv/norms.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <vector>

#include "bdiv/error.hpp"
#include "bdiv/reduce.hpp"
#include "stencil.hpp"

namespace bdiv::norms {
namespace {

std::vector<double> sorted_magnitudes(const ScalarField& f) {
  std::vector<double> a(f.size());
  for (std::size_t k = 0; k < f.size(); ++k) a[k] = std::abs(f[k]);
  std::sort(a.begin(), a.end(), std::greater<>());
  return a;
}

}  // namespace

std::string NormKind::label() const {
  std::ostringstream os;
  switch (tag) {
    case Tag::lp: os << "L" << p; break;
    case Tag::lorentz: os << "L(" << p << "," << q << ")"; break;
    case Tag::weak_lp_set: os << "weakL" << p; break;
    case Tag::morrey: os << "Morrey"; break;
    case Tag::tv: os << (variant == TvVariant::isotropic ? "TV_iso" : "TV_aniso"); break;
    case Tag::linf: os << "Linf"; break;
  }
  return os.str();
}

double lp_norm(const ScalarField& f, double p) {
  require(p >= 1.0, "Lp norm needs p >= 1");
  const auto v = f.values();
  if (std::isinf(p)) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
  }
  double scale = 0.0;
  for (double x : v) scale = std::max(scale, std::abs(x));
  if (scale == 0.0) return 0.0;
  const double s = pairwise_accumulate(0, v.size(), [&](std::size_t k) {
    return p == 2.0 ? (v[k] / scale) * (v[k] / scale) : std::pow(std::abs(v[k]) / scale, p);
  });
  return scale * std::pow(s * f.grid().cell_volume(), 1.0 / p);
}

double lorentz_norm(const ScalarField& f, double p, double q) {
  require(p >= 1.0 && std::isfinite(p), "Lorentz norm needs 1 <= p < inf");
  require(q >= 1.0, "Lorentz norm needs q >= 1");
  require(std::isfinite(q), "Lorentz norm with q = inf: use weak_lp_setnorm");
  const auto a = sorted_magnitudes(f);
  if (a.empty() || a.front() == 0.0) return 0.0;
  const double top = a.front();
  const double c = f.grid().cell_volume();
  const double s = q / p;
  // piece k (1-based) covers t in ((k-1)c, kc]; its weight is
  // (p/q) c^s (k^s - (k-1)^s), evaluated without cancellation.
  const double total = pairwise_accumulate(0, a.size(), [&](std::size_t i) {
    if (a[i] == 0.0) return 0.0;
    const double k = static_cast<double>(i + 1);
    const double diff = (i == 0) ? 1.0 : std::pow(k - 1.0, s) * std::expm1(s * std::log1p(1.0 / (k - 1.0)));
    return std::pow(a[i] / top, q) * diff;
  });
  return top * std::pow((p / q) * std::pow(c, s) * total, 1.0 / q);
}

WeakLpResult weak_lp_setnorm_detail(const ScalarField& f, double p) {
  require(p > 1.0, "weak-Lp set norm needs p > 1");
  const auto a = sorted_magnitudes(f);
  const double c = f.grid().cell_volume();
  const double expo = -(p - 1.0) / p;
  WeakLpResult best;
  double running = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0.0) break;  // adding zeros only grows |E|
    running += a[i];
    const double val = std::pow(static_cast<double>(i + 1) * c, expo) * running * c;
    if (val > best.value) best = {val, i + 1};
  }
  return best;
}

double weak_lp_setnorm(const ScalarField& f, double p) { return weak_lp_setnorm_detail(f, p).value; }

double morrey_norm(const ScalarField& f) {
  const Grid& g = f.grid();
  const int d = g.dim();
  const double hmin = g.min_h();

  struct Offset {
    double dist;
    std::array<long, kMaxDim> off;
  };
  std::vector<Offset> offsets;
  std::array<long, kMaxDim> lim{0, 0, 0};
  for (int a = 0; a < d; ++a) lim[a] = static_cast<long>(g.n(a)) - 1;
  for (long i = -lim[0]; i <= lim[0]; ++i)
    for (long j = -lim[1]; j <= lim[1]; ++j)
      for (long k = -lim[2]; k <= lim[2]; ++k) {
        const std::array<long, kMaxDim> o{i, j, k};
        double r2 = 0.0;
        for (int a = 0; a < d; ++a) r2 += std::pow(static_cast<double>(o[a]) * g.h(a), 2);
        offsets.push_back({std::sqrt(r2), o});
      }
  std::stable_sort(offsets.begin(), offsets.end(), [](const Offset& x, const Offset& y) { return x.dist < y.dist; });

  const double rmax = offsets.back().dist;
  const auto jmax = static_cast<std::size_t>(std::ceil(rmax / hmin));
  const double c = g.cell_volume();
  double best = 0.0;
  for (std::size_t center = 0; center < g.size(); ++center) {
    const auto ci = g.unflatten(center);
    double mass = 0.0;
    std::size_t pos = 0;
    for (std::size_t j = 1; j <= jmax; ++j) {
      const double R = static_cast<double>(j) * hmin;
      while (pos < offsets.size() && offsets[pos].dist <= R * (1.0 + 1e-12)) {
        std::array<std::size_t, kMaxDim> idx{0, 0, 0};
        bool inside = true;
        for (int a = 0; a < d; ++a) {
          const long v = static_cast<long>(ci[a]) + offsets[pos].off[a];
          if (v < 0 || v >= static_cast<long>(g.n(a))) {
            inside = false;
            break;
          }
          idx[a] = static_cast<std::size_t>(v);
        }
        if (inside) mass += std::abs(f[g.flatten(idx)]);
        ++pos;
      }
      best = std::max(best, std::pow(R, 1.0 - d) * mass * c);
    }
  }
  return best;
}

double tv_norm(const ScalarField& g, TvVariant variant) {
  const Grid& grid = g.grid();
  const int d = grid.dim();
  std::vector<std::vector<double>> diffs(d, std::vector<double>(grid.size()));
  for (int a = 0; a < d; ++a) stencil::forward_difference(grid, a, g.values(), diffs[a]);
  const double s = pairwise_accumulate(0, grid.size(), [&](std::size_t k) {
    if (variant == TvVariant::anisotropic) {
      double acc = 0.0;
      for (int a = 0; a < d; ++a) acc += std::abs(diffs[a][k]);
      return acc;
    }
    double acc = 0.0;
    for (int a = 0; a < d; ++a) acc += diffs[a][k] * diffs[a][k];
    return std::sqrt(acc);
  });
  return s * grid.cell_volume();
}

ScalarField frechet_derivative(const ScalarField& v, double p) {
  require(p >= 1.0, "Frechet derivative needs p >= 1");
  const double n = lp_norm(v, 2.0);
  require(n > 0.0, "the L2 norm is not differentiable at v = 0");
  ScalarField out(v);
  out *= p * std::pow(n, p - 2.0);
  return out;
}

double evaluate(const ScalarField& f, const NormKind& kind) {
  switch (kind.tag) {
    case NormKind::Tag::lp: return lp_norm(f, kind.p);
    case NormKind::Tag::lorentz: return lorentz_norm(f, kind.p, kind.q);
    case NormKind::Tag::weak_lp_set: return weak_lp_setnorm(f, kind.p);
    case NormKind::Tag::morrey: return morrey_norm(f);
    case NormKind::Tag::tv: return tv_norm(f, kind.variant);
    case NormKind::Tag::linf: return lp_norm(f, kInf);
  }
  return 0.0;
}

}  // namespace bdiv::norms
