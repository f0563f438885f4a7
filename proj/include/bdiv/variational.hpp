#pragma once

#include <optional>
#include <vector>

#include "bdiv/field.hpp"

namespace bdiv::variational {

enum class Symbol { discrete, continuum };

struct HelmholtzOptions {
  /// discrete: divide by the symbol of div(grad) so div u = f holds exactly.
  /// continuum: -i k / |k|^2 with the Nyquist modes dropped.
  Symbol symbol = Symbol::discrete;
  /// Reject data whose mean is not zero instead of dropping the k = 0 mode.
  bool strict_mean = false;
};

/// Gradient of the periodic Poisson potential of f. Needs an all-periodic grid.
VectorField helmholtz_solve(const ScalarField& f, const HelmholtzOptions& opts = {});

/// Settings for argmin_u ||u||_inf + lambda ||f - div u||_2^p, p in {1, 2}.
struct VariationalConfig {
  double lambda = 1.0;
  int p = 2;
  /// Budget of inner (projected gradient) iterations over the whole solve.
  long max_iters = 2'000'000;
  /// Outer search stops once the optimality defect |1 - |phi_p(r)|_TV * lambda| is below this.
  double tol_objective = 5e-3;
  /// Residuals with ||r|| <= tol_residual ||f|| count as an exact solve (p = 1).
  double tol_residual = 1e-9;
  /// Inner solves stop at duality gap <= inner_gap * M * TV(r).
  double inner_gap = 1e-3;
  /// Inner iterations between duality-gap checks.
  int check_every = 10;
};

struct SolverReport {
  long iterations = 0;        ///< inner iterations
  int outer_iterations = 0;   ///< evaluated radii M
  double lambda = 0.0;
  int p = 2;
  double objective = 0.0;     ///< ||u||_inf + lambda ||r||^p
  double trivial_objective = 0.0;  ///< lambda ||f||^p
  double u_inf = 0.0;
  double r_norm = 0.0;
  double tv_certificate = 0.0;  ///< |phi_p(r)|_TV: 2 TV(r) for p = 2, TV(r)/||r|| for p = 1
  double extremality = 1.0;     ///< <div u, r> / (||u||_inf TV(r)), 1 when either factor vanishes
  bool trivial = false;         ///< below the threshold, u = 0
  bool converged = false;
  std::vector<double> objective_history;  ///< best objective after each outer step
};

struct FlambdaResult {
  VectorField u;
  ScalarField residual;
  SolverReport report;
};

/// Requires adjoint div/grad: periodic axes wrap, others use zero flux below
/// the first cell and zero data beyond the last.
FlambdaResult minimize_flambda(const ScalarField& f, const VariationalConfig& cfg);

struct TwoStepResult {
  VectorField u;
  SolverReport first;  ///< the lambda = 1/||f|| minimization
  double ratio = 0.0;  ///< ||u||_inf / ||f||_2
  double div_residual = 0.0;  ///< max |div u - f|
};

/// u = u_1 + helmholtz(r_1) with u_1 the p = 2 minimizer at lambda = 1/||f||_2.
TwoStepResult two_step(const ScalarField& f, const VariationalConfig& inner = {});

enum class HierarchyMode { p2_geometric, p1_contraction };

struct HierarchyConfig {
  HierarchyMode mode = HierarchyMode::p2_geometric;
  /// p2: closure constant; <= 0 requests the probe estimate.
  double eta = 0.0;
  /// p2: overrides lambda_1 = 2 eta / ||f||. p1: the fixed lambda (default 2 gamma_assumed).
  std::optional<double> lambda1;
  double gamma_assumed = 0.0;
  int max_levels = 20;
  /// Stop once ||r_j|| <= stop_residual ||f||.
  double stop_residual = 1e-3;
  VariationalConfig inner;
};

struct HierarchyLevel {
  int level = 0;
  double lambda = 0.0;
  double u_inf = 0.0;
  double r_norm = 0.0;
  double cumulative_inf = 0.0;  ///< ||sum_{k<=j} u_k||_inf
  double ratio = 0.0;           ///< ||r_j|| / ||r_{j-1}||
  bool converged = false;
};

struct HierarchyTrace {
  std::vector<HierarchyLevel> levels;
  double f_norm = 0.0;
  double eta = 0.0;  ///< the eta actually used (p2)
  double lambda1 = 0.0;
  bool eta_estimated = false;
  bool reached_stop = false;
  bool stagnated = false;  ///< p2: ratio > 0.95 three times running; p1: ratio >= 1 three times running
};

struct HierarchyResult {
  VectorField u;
  ScalarField residual;
  HierarchyTrace trace;
};

/// Probe estimate ||r|| / |phi_2(r)|_TV at lambda = 1/||f||, times 2.
double estimate_eta(const ScalarField& f, const VariationalConfig& inner = {});

HierarchyResult hierarchical_p2(const ScalarField& f, const HierarchyConfig& cfg);
HierarchyResult hierarchical_p1(const ScalarField& f, const HierarchyConfig& cfg);

}  // namespace bdiv::variational
