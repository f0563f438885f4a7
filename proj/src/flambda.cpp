#include <algorithm>
#include <cmath>
#include <limits>

#include "bdiv/error.hpp"
#include "bdiv/norms.hpp"
#include "bdiv/operators.hpp"
#include "bdiv/reduce.hpp"
#include "bdiv/variational.hpp"
#include "stencil.hpp"

namespace bdiv::variational {
namespace {

/// Accelerated projected gradient for
///   min { 1/2 ||f - div u||^2 : |u(x)|_2 <= M at every cell },
/// the dual of ROF denoising with weight M. Buffers are flat, component a
/// of the vector field at offset a * N.
class BallConstrainedFit {
public:
  BallConstrainedFit(const Grid& g, std::span<const double> f)
      : g_(g), d_(g.dim()), n_(g.size()), f_(f.begin(), f.end()), u_(d_ * n_, 0.0), u_prev_(d_ * n_),
        y_(d_ * n_), grad_(d_ * n_), r_(n_) {
    double L = 0.0;
    for (int a = 0; a < d_; ++a) L += 4.0 / (g.h(a) * g.h(a));
    step_ = 1.0 / L;
  }

  /// Rescales the current iterate to radius M (warm start).
  void rescale(double from, double to) {
    if (from <= 0.0) {
      std::fill(u_.begin(), u_.end(), 0.0);
      return;
    }
    const double c = to / from;
    for (double& x : u_) x *= c;
  }

  /// Runs until the duality gap drops to gap_rel * M * TV, the residual
  /// norm drops to r_exact (an exact solve), or `budget` iterations are
  /// used. Returns the iterations spent.
  /// The gap is measured against max(TV(r), tv_const + tv_per_r * ||r||), the
  /// variation the outer search aims for, so radii far from the target stop early.
  long solve(double M, double gap_rel, double tv_const, double tv_per_r, double r_exact, long budget,
             int check_every) {
    M_ = M;
    project(u_);
    std::copy(u_.begin(), u_.end(), y_.begin());
    std::copy(u_.begin(), u_.end(), u_prev_.begin());
    double t = 1.0;
    long it = 0;
    converged_ = false;
    for (;;) {
      if (it % check_every == 0) {
        evaluate(u_);
        const double tol = gap_rel * M_ * std::max(tv_, tv_const + tv_per_r * r_norm_);
        if (gap_ <= tol || r_norm_ <= r_exact) {
          converged_ = true;
          return it;
        }
        if (it >= budget) return it;
      }
      // gradient step from y
      residual(y_);
      gradient();
      std::swap(u_prev_, u_);
      for (std::size_t k = 0; k < u_.size(); ++k) u_[k] = y_[k] - step_ * grad_[k];
      project(u_);
      // gradient-based restart, then momentum
      double test = 0.0;
      for (std::size_t k = 0; k < u_.size(); ++k) test += (y_[k] - u_[k]) * (u_[k] - u_prev_[k]);
      if (test > 0.0) {
        t = 1.0;
        std::copy(u_.begin(), u_.end(), y_.begin());
      } else {
        const double tn = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
        const double beta = (t - 1.0) / tn;
        for (std::size_t k = 0; k < u_.size(); ++k) y_[k] = u_[k] + beta * (u_[k] - u_prev_[k]);
        t = tn;
      }
      ++it;
    }
  }

  bool converged() const { return converged_; }
  double tv() const { return tv_; }
  double gap() const { return gap_; }
  double r_norm() const { return r_norm_; }
  /// <r, div u> with volume weights.
  double pairing() const { return M_ * tv_ - gap_; }
  const std::vector<double>& u() const { return u_; }
  double u_inf() const {
    double m = 0.0;
    for (std::size_t k = 0; k < n_; ++k) {
      double m2 = 0.0;
      for (int a = 0; a < d_; ++a) m2 += u_[a * n_ + k] * u_[a * n_ + k];
      m = std::max(m, m2);
    }
    return std::sqrt(m);
  }

private:
  void residual(const std::vector<double>& v) {
    std::copy(f_.begin(), f_.end(), r_.begin());
    for (int a = 0; a < d_; ++a)
      stencil::add_backward_difference(g_, a, std::span<const double>(v.data() + a * n_, n_), r_, -1.0);
  }

  void gradient() {
    for (int a = 0; a < d_; ++a)
      stencil::forward_difference(g_, a, r_, std::span<double>(grad_.data() + a * n_, n_));
  }

  void project(std::vector<double>& v) const {
    const double M2 = M_ * M_;
    for (std::size_t k = 0; k < n_; ++k) {
      double m2 = 0.0;
      for (int a = 0; a < d_; ++a) m2 += v[a * n_ + k] * v[a * n_ + k];
      if (m2 > M2) {
        const double s = M_ / std::sqrt(m2);
        for (int a = 0; a < d_; ++a) v[a * n_ + k] *= s;
      }
    }
  }

  // r, TV(r), gap = M TV(r) + <grad r, u>, all volume weighted
  void evaluate(const std::vector<double>& v) {
    residual(v);
    gradient();
    const double vol = g_.cell_volume();
    tv_ = vol * pairwise_accumulate(0, n_, [&](std::size_t k) {
      double m2 = 0.0;
      for (int a = 0; a < d_; ++a) m2 += grad_[a * n_ + k] * grad_[a * n_ + k];
      return std::sqrt(m2);
    });
    const double gu = vol * pairwise_dot(grad_, v);
    gap_ = std::max(0.0, M_ * tv_ + gu);
    r_norm_ = std::sqrt(vol * pairwise_dot(r_, r_));
  }

  Grid g_;
  int d_;
  std::size_t n_;
  std::vector<double> f_, u_, u_prev_, y_, grad_, r_;
  double step_ = 0.0;
  double M_ = 0.0;
  double tv_ = 0.0, gap_ = 0.0, r_norm_ = 0.0;
  bool converged_ = false;
};

VectorField unflatten_vector(const Grid& g, const std::vector<double>& flat, double scale) {
  VectorField u(g);
  const std::size_t n = g.size();
  for (int a = 0; a < g.dim(); ++a)
    for (std::size_t k = 0; k < n; ++k) u[a][k] = scale * flat[a * n + k];
  return u;
}

struct Probe {
  double M = 0.0;
  double cert = 0.0;  // |phi_p(r_M)|_TV * lambda, 1 at the optimum
  double objective = 0.0;
  bool inner_converged = false;
  std::vector<double> u;
};

void validate(const VariationalConfig& cfg) {
  require(cfg.lambda > 0.0 && std::isfinite(cfg.lambda), "lambda must be positive");
  require(cfg.p == 1 || cfg.p == 2, "only p = 1 and p = 2 are supported");
  require(cfg.max_iters > 0, "max_iters must be positive");
  require(cfg.tol_objective > 0.0 && cfg.tol_residual > 0.0 && cfg.inner_gap > 0.0, "tolerances must be positive");
  require(cfg.check_every > 0, "check_every must be positive");
}

void finish_report(const ScalarField& f, const VectorField& u, const ScalarField& r, const VariationalConfig& cfg,
                   SolverReport& rep) {
  rep.lambda = cfg.lambda;
  rep.p = cfg.p;
  rep.u_inf = u.max_magnitude();
  rep.r_norm = norms::lp_norm(r, 2.0);
  const double f_norm = norms::lp_norm(f, 2.0);
  rep.trivial_objective = cfg.lambda * std::pow(f_norm, cfg.p);
  rep.objective = rep.u_inf + cfg.lambda * std::pow(rep.r_norm, cfg.p);
  const double tv = norms::tv_norm(r, norms::TvVariant::isotropic);
  if (cfg.p == 2)
    rep.tv_certificate = 2.0 * tv;
  else
    rep.tv_certificate = rep.r_norm > 0.0 ? tv / rep.r_norm : 0.0;
  const double denom = rep.u_inf * tv;
  rep.extremality = denom > 0.0 ? inner(discrete_divergence(u), r) / denom : 1.0;
}

}  // namespace

FlambdaResult minimize_flambda(const ScalarField& f, const VariationalConfig& cfg) {
  validate(cfg);
  const Grid& g = f.grid();
  FlambdaResult out{VectorField(g), f, {}};
  SolverReport& rep = out.report;

  const double c = norms::lp_norm(f, 2.0);
  if (c == 0.0) {
    rep.trivial = rep.converged = true;
    finish_report(f, out.u, out.residual, cfg, rep);
    return out;
  }
  // minimize(c f~, lambda) = c minimize(f~, lambda c^{p-1}) with ||f~|| = 1
  ScalarField fs = (1.0 / c) * f;
  const double lam = cfg.p == 2 ? cfg.lambda * c : cfg.lambda;
  const double tv0 = norms::tv_norm(fs, norms::TvVariant::isotropic);
  const double cert0 = cfg.p == 2 ? 2.0 * lam * tv0 : lam * tv0;
  if (cert0 <= 1.0) {
    rep.trivial = rep.converged = true;
    rep.objective_history.push_back(cfg.lambda * std::pow(c, cfg.p));
    finish_report(f, out.u, out.residual, cfg, rep);
    return out;
  }

  BallConstrainedFit fit(g, fs.values());
  const double exact_tol = cfg.tol_residual;
  auto objective_of = [&](double M, double rn) { return M + lam * (cfg.p == 2 ? rn * rn : rn); };

  // bracket on the radius: g = cert - 1 is non-increasing in M, positive at 0,
  // and J(M) >= M with J(0) = lam puts the optimum below lam
  double lo = 0.0, g_lo = cert0 - 1.0;
  double hi = lam, g_hi = -1.0;
  bool hi_known = false;
  int last_side = 0;  // +1 hi moved, -1 lo moved (for the Illinois weighting)
  std::vector<double> widths;
  double prev_lo_M = -1.0, prev_lo_g = 0.0;

  Probe best_feasible;  // smallest evaluated M with cert <= 1
  bool have_feasible = false;
  Probe best_objective;
  bool have_any = false;
  double running_best = cfg.lambda * std::pow(c, cfg.p);

  // the ROF scale ||f||^2 / (2 TV f) (p = 2) or ||f|| / TV f (p = 1) is a good first radius
  double M = std::min(0.5 * hi, cfg.p == 2 ? 0.5 / tv0 : 1.0 / tv0);
  double prev_M = 0.0;
  long used = 0;
  bool outer_done = false;
  const double tv_const = cfg.p == 2 ? 0.5 / lam : 0.0;
  const double tv_per_r = cfg.p == 2 ? 0.0 : 1.0 / lam;

  for (int outer = 0; outer < 80 && used < cfg.max_iters; ++outer) {
    fit.rescale(prev_M, M);
    used += fit.solve(M, cfg.inner_gap, tv_const, tv_per_r, exact_tol, cfg.max_iters - used, cfg.check_every);
    prev_M = M;
    ++rep.outer_iterations;

    const double rn = fit.r_norm();
    double cert = 0.0;
    if (cfg.p == 2)
      cert = 2.0 * lam * fit.tv();
    else
      cert = rn <= exact_tol ? 0.0 : lam * fit.tv() / rn;
    const double J = objective_of(fit.u_inf(), rn);
    running_best = std::min(running_best, c * J);  // J scales linearly with c
    if (!have_any || J < best_objective.objective) {
      best_objective = {M, cert, J, fit.converged(), fit.u()};
      have_any = true;
    }
    rep.objective_history.push_back(running_best);

    const double gM = cert - 1.0;
    if (gM <= 0.0) {
      if (!have_feasible || M < best_feasible.M) {
        best_feasible = {M, cert, J, fit.converged(), fit.u()};
        have_feasible = true;
      }
      if (gM >= -cfg.tol_objective && fit.converged()) {
        outer_done = true;
        break;
      }
      if (last_side == 1) g_lo *= 0.5;
      hi = M;
      g_hi = gM;
      hi_known = true;
      last_side = 1;
    } else {
      if (last_side == -1) g_hi *= 0.5;
      prev_lo_M = lo;
      prev_lo_g = g_lo;
      lo = M;
      g_lo = gM;
      last_side = -1;
    }
    if (hi - lo <= 1e-7 * hi) {
      outer_done = hi_known;
      break;
    }

    // candidates: linear secant through the last two low points (g is close to
    // linear just below the optimum), regula falsi on the bracket, growth by cert
    double next = std::numeric_limits<double>::quiet_NaN();
    if (prev_lo_M > 0.0 && prev_lo_g > g_lo) next = lo + g_lo * (lo - prev_lo_M) / (prev_lo_g - g_lo);
    if (!(next > lo && next < hi)) next = hi_known ? lo + (hi - lo) * g_lo / (g_lo - g_hi) : M * cert;
    if (!hi_known) next = std::min(next, 4.0 * lo);
    widths.push_back(hi - lo);
    const std::size_t w = widths.size();
    if (hi_known && w >= 3 && widths[w - 1] > 0.5 * widths[w - 3])
      next = lo > 0.0 ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
    const double margin = 0.01 * (hi - lo);
    if (!std::isfinite(next)) next = 0.5 * (lo + hi);
    M = std::clamp(next, lo + margin, hi - margin);
  }

  rep.iterations = used;
  const Probe* pick = have_feasible ? &best_feasible : (have_any ? &best_objective : nullptr);
  if (pick != nullptr) {
    out.u = unflatten_vector(g, pick->u, c);
    out.residual = f - discrete_divergence(out.u);
  }
  rep.converged = outer_done && pick == &best_feasible && pick->inner_converged;
  finish_report(f, out.u, out.residual, cfg, rep);
  if (rep.objective > rep.trivial_objective) {
    out.u = VectorField(g);
    out.residual = f;
    rep.converged = false;
    finish_report(f, out.u, out.residual, cfg, rep);
  }
  return out;
}

}  // namespace bdiv::variational
