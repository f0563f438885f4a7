#include <cmath>

#include "bdiv/error.hpp"
#include "bdiv/norms.hpp"
#include "bdiv/operators.hpp"
#include "bdiv/variational.hpp"

namespace bdiv::variational {
namespace {

double max_abs_diff(const ScalarField& a, const ScalarField& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

struct LevelLoop {
  const ScalarField& f;
  const HierarchyConfig& cfg;
  HierarchyResult out;

  LevelLoop(const ScalarField& data, const HierarchyConfig& c) : f(data), cfg(c) {
    out.u = VectorField(f.grid());
    out.residual = f;
    out.trace.f_norm = norms::lp_norm(f, 2.0);
  }

  /// One level at `lambda`; returns ||r_j|| / ||r_{j-1}||.
  double step(int level, double lambda, int p) {
    VariationalConfig vc = cfg.inner;
    vc.lambda = lambda;
    vc.p = p;
    const double prev = norms::lp_norm(out.residual, 2.0);
    auto res = minimize_flambda(out.residual, vc);
    out.u += res.u;
    out.residual -= discrete_divergence(res.u);
    HierarchyLevel rec;
    rec.level = level;
    rec.lambda = lambda;
    rec.u_inf = res.u.max_magnitude();
    rec.r_norm = norms::lp_norm(out.residual, 2.0);
    rec.cumulative_inf = out.u.max_magnitude();
    rec.ratio = prev > 0.0 ? rec.r_norm / prev : 0.0;
    rec.converged = res.report.converged;
    out.trace.levels.push_back(rec);
    return rec.ratio;
  }

  bool done() const {
    return out.trace.levels.empty() ? out.trace.f_norm == 0.0
                                    : out.trace.levels.back().r_norm <= cfg.stop_residual * out.trace.f_norm;
  }
};

void validate(const HierarchyConfig& cfg) {
  require(cfg.max_levels >= 1, "max_levels must be at least 1");
  require(cfg.stop_residual >= 0.0, "stop_residual must be non-negative");
}

}  // namespace

TwoStepResult two_step(const ScalarField& f, const VariationalConfig& inner) {
  require(f.grid().all_periodic(), "two_step needs a periodic grid");
  TwoStepResult out;
  const double fn = norms::lp_norm(f, 2.0);
  const double mean = integral(f) / (f.grid().cell_volume() * static_cast<double>(f.size()));
  require(std::abs(mean) <= 1e-12 * norms::lp_norm(f, norms::kInf), "two_step needs mean-zero data");
  if (fn == 0.0) {
    out.u = VectorField(f.grid());
    out.first.trivial = out.first.converged = true;
    return out;
  }
  VariationalConfig vc = inner;
  vc.lambda = 1.0 / fn;
  vc.p = 2;
  auto first = minimize_flambda(f, vc);
  out.u = first.u;
  out.u += helmholtz_solve(first.residual);
  out.first = first.report;
  out.ratio = out.u.max_magnitude() / fn;
  out.div_residual = max_abs_diff(discrete_divergence(out.u), f);
  return out;
}

double estimate_eta(const ScalarField& f, const VariationalConfig& inner) {
  const double fn = norms::lp_norm(f, 2.0);
  require(fn > 0.0, "cannot estimate eta for zero data");
  VariationalConfig vc = inner;
  vc.lambda = 1.0 / fn;
  vc.p = 2;
  const auto probe = minimize_flambda(f, vc);
  const double tv = norms::tv_norm(probe.residual, norms::TvVariant::isotropic);
  require(tv > 0.0, "probe residual has zero variation");
  // safety factor 2 on ||r|| / |phi_2(r)|_TV = ||r|| / (2 TV(r))
  return 2.0 * probe.report.r_norm / (2.0 * tv);
}

HierarchyResult hierarchical_p2(const ScalarField& f, const HierarchyConfig& cfg) {
  validate(cfg);
  LevelLoop loop(f, cfg);
  auto& tr = loop.out.trace;
  if (tr.f_norm == 0.0) return loop.out;

  tr.eta = cfg.eta;
  if (tr.eta <= 0.0) {
    tr.eta = estimate_eta(f, cfg.inner);
    tr.eta_estimated = true;
  }
  tr.lambda1 = cfg.lambda1.value_or(2.0 * tr.eta / tr.f_norm);
  require(tr.lambda1 > 0.0, "lambda_1 must be positive");

  int slow = 0;
  for (int j = 1; j <= cfg.max_levels; ++j) {
    const double ratio = loop.step(j, std::ldexp(tr.lambda1, j - 1), 2);
    if (loop.done()) {
      tr.reached_stop = true;
      break;
    }
    slow = ratio > 0.95 ? slow + 1 : 0;
    if (slow >= 3) {
      tr.stagnated = true;
      break;
    }
  }
  return loop.out;
}

HierarchyResult hierarchical_p1(const ScalarField& f, const HierarchyConfig& cfg) {
  validate(cfg);
  require(cfg.gamma_assumed > 0.0, "hierarchical_p1 needs gamma_assumed > 0");
  const double lambda = cfg.lambda1.value_or(2.0 * cfg.gamma_assumed);
  require(lambda > cfg.gamma_assumed, "hierarchical_p1 needs lambda > gamma_assumed");
  LevelLoop loop(f, cfg);
  auto& tr = loop.out.trace;
  tr.lambda1 = lambda;
  if (tr.f_norm == 0.0) return loop.out;

  int bad = 0;
  for (int j = 1; j <= cfg.max_levels; ++j) {
    const double ratio = loop.step(j, lambda, 1);
    if (loop.done()) {
      tr.reached_stop = true;
      break;
    }
    bad = ratio >= 1.0 ? bad + 1 : 0;
    if (bad >= 3) {
      tr.stagnated = true;
      break;
    }
  }
  return loop.out;
}

}  // namespace bdiv::variational
