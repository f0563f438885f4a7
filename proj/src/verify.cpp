#include "verify.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <map>

#include "bdiv/error.hpp"
#include "bdiv/examples.hpp"
#include "bdiv/field_io.hpp"
#include "bdiv/norms.hpp"
#include "bdiv/operators.hpp"

namespace bdiv::service {
namespace {

namespace ex = bdiv::examples;
namespace var = bdiv::variational;
using norms::NormKind;
using norms::TvVariant;

ScalarField gaussian(std::uint64_t seed, const Grid& g) { return ex::random_field(seed, g, ex::RandomLaw::Gaussian()); }

VectorField gaussian_vector(std::uint64_t seed, const Grid& g) {
  std::vector<ScalarField> c;
  for (int a = 0; a < g.dim(); ++a) c.push_back(gaussian(seed * 7 + a, g));
  return VectorField(std::move(c));
}

double max_abs_diff(const ScalarField& a, const ScalarField& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

double rel(double err, double scale) { return scale > 0.0 ? err / scale : err; }

Check le(const std::string& name, double value, double limit) { return {name, value, limit, value <= limit}; }

std::vector<NormKind> all_kinds() {
  return {NormKind::Lp(1),           NormKind::Lp(2),         NormKind::Lp(3),           NormKind::Linf(),
          NormKind::Lorentz(2, 1),   NormKind::Lorentz(3, 2), NormKind::WeakLpSet(2),    NormKind::WeakLpSet(3),
          NormKind::Morrey(),        NormKind::TV(TvVariant::isotropic), NormKind::TV(TvVariant::anisotropic)};
}

// ---------------------------------------------------------------- fields

void fields_suite(std::vector<Check>& out) {
  double adj = 0.0;
  for (int d = 1; d <= 3; ++d)
    for (bool per : {true, false}) {
      const Grid g = Grid::cube(d, d == 3 ? 6 : 9, 0.0, 1.0, per);
      const auto s = gaussian(100 + d, g);
      const auto v = gaussian_vector(200 + d, g);
      const auto dv = discrete_divergence(v);
      const double a = inner(s, dv), b = inner(forward_gradient(s), v);
      adj = std::max(adj, rel(std::abs(a + b), norms::lp_norm(s, 2) * norms::lp_norm(dv, 2)));
    }
  out.push_back(le("fields.adjointness", adj, 1e-12));

  double inv = 0.0;
  const Grid box = Grid::cube(2, 32, -1.0, 1.0, false);
  const auto f = gaussian(300, box);
  for (int axis = 0; axis < 2; ++axis) {
    VectorField u(box);
    u[axis] = cumulative_primitive(f, axis);
    inv = std::max(inv, rel(max_abs_diff(discrete_divergence(u), f), norms::lp_norm(f, norms::kInf)));
  }
  out.push_back(le("fields.exact_inversion", inv, 1e-12));

  const auto back = decode_field(encode_field(f));
  std::size_t mismatched = back.grid() == f.grid() ? 0 : 1;
  for (std::size_t k = 0; k < f.size(); ++k)
    if (std::bit_cast<std::uint64_t>(back[k]) != std::bit_cast<std::uint64_t>(f[k])) ++mismatched;
  out.push_back(le("fields.io_roundtrip_bit_exact", static_cast<double>(mismatched), 0.0));

  const auto m = mean_zero(f);
  out.push_back(le("fields.mean_zero", std::abs(integral(m)), 1e-12 * norms::lp_norm(f, norms::kInf)));
}

// ---------------------------------------------------------------- norms

void norms_suite(std::vector<Check>& out) {
  const Grid g = Grid::cube(2, 8, 0.0, 1.0, false);
  const auto f = gaussian(400, g);
  const double c = -3.7;
  ScalarField cf = c * f;
  double homog = 0.0;
  for (const auto& k : all_kinds()) {
    const double a = norms::evaluate(cf, k), b = std::abs(c) * norms::evaluate(f, k);
    homog = std::max(homog, rel(std::abs(a - b), b));
  }
  out.push_back(le("norms.homogeneity", homog, 1e-12));

  // |f| <= |g| pointwise; TV is not monotone in this sense and is left out
  const auto w = ex::random_field(401, g, ex::RandomLaw::Gaussian());
  ScalarField big(f);
  for (std::size_t k = 0; k < f.size(); ++k) big[k] = f[k] * (1.0 + std::abs(w[k]));
  double mono = 0.0;
  for (const auto& k : all_kinds()) {
    if (k.tag == NormKind::Tag::tv) continue;
    mono = std::max(mono, norms::evaluate(f, k) / norms::evaluate(big, k));
  }
  out.push_back(le("norms.monotonicity", mono, 1.0 + 1e-12));

  double weak = 0.0;
  for (double p : {1.5, 2.0, 3.0}) weak = std::max(weak, norms::weak_lp_setnorm(f, p) / norms::lp_norm(f, p));
  out.push_back(le("norms.weak_le_strong", weak, 1.0 + 1e-12));

  double lor = 0.0;
  for (double p : {1.0, 2.0, 3.5}) {
    const double a = norms::lorentz_norm(f, p, p), b = norms::lp_norm(f, p);
    lor = std::max(lor, rel(std::abs(a - b), b));
  }
  out.push_back(le("norms.lorentz_pp_equals_lp", lor, 1e-12));

  // unit spacing keeps every term an integer, so the identity is exact
  double coarea = 0.0;
  for (bool per : {false, true}) {
    const Grid gi = Grid::cube(2, 10, 0.0, 10.0, per);
    auto h = gaussian(402 + per, gi);
    for (double& x : h.values()) x = std::round(2.0 * x);
    std::vector<double> levels(h.values().begin(), h.values().end());
    levels.push_back(0.0);
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < levels.size(); ++i) {
      const double t = levels[i];
      ScalarField chi(gi);
      for (std::size_t k = 0; k < h.size(); ++k) chi[k] = (h[k] > t ? 1.0 : 0.0) - (0.0 > t ? 1.0 : 0.0);
      sum += norms::tv_norm(chi, TvVariant::anisotropic) * (levels[i + 1] - levels[i]);
    }
    coarea = std::max(coarea, std::abs(sum - norms::tv_norm(h, TvVariant::anisotropic)));
  }
  out.push_back(le("norms.coarea_exact", coarea, 0.0));
}

// ---------------------------------------------------------------- explicit

void explicit_suite(std::vector<Check>& out) {
  double div_err = 0.0, cert = 0.0, sum_err = 0.0;
  auto account = [&](const ScalarField& f, const split::SplitResult& r) {
    const double s = norms::lp_norm(f, norms::kInf);
    ScalarField total(f.grid());
    for (const auto& p : r.parts) total += p;
    sum_err = std::max(sum_err, rel(max_abs_diff(total, f), s));
    div_err = std::max(div_err, rel(max_abs_diff(discrete_divergence(r.u), f), s));
    cert = std::max(cert, r.worst_certificate_ratio());
  };
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const auto f = gaussian(500 + seed, Grid::cube(2, 4 + 12 * seed, -1.0, 1.0, false));
    account(f, split::split_onestep_2d(f));
    account(f, split::split_disjoint_2d(f));
  }
  const auto f3 = gaussian(510, Grid::cube(3, 8, 0.0, 1.0, false));
  account(f3, split::split_inductive_nd(f3));
  out.push_back(le("explicit.div_u_equals_f", div_err, 1e-10));
  out.push_back(le("explicit.parts_sum_to_f", sum_err, 1e-12));
  out.push_back(le("explicit.line_certificates", cert, 1.0 + 1e-10));

  const auto sp = ex::random_field(520, Grid::cube(2, 64, -1.0, 1.0, false), ex::RandomLaw::Spikes(12, 50.0));
  auto [res, trace] = split::decompose_weak_l2(sp, 2.0);
  double decay = 0.0;
  const double m0 = trace.passes.empty() ? 0.0 : trace.passes.front().residual_measure;
  for (std::size_t k = 0; k < trace.passes.size(); ++k)
    decay = std::max(decay, trace.passes[k].residual_measure / (m0 * std::pow(0.25, static_cast<double>(k))));
  out.push_back(le("explicit.strip_measure_decay", decay, 1.0 + 1e-12));
  out.push_back(le("explicit.strip_certificates", res.worst_certificate_ratio(), 1.0 + 1e-10));
  out.push_back(le("explicit.strip_complete", res.complete ? 0.0 : 1.0, 0.0));

  const auto f = gaussian(530, Grid::cube(2, 10, -1.0, 1.0, false));
  const auto a = split::split_onestep_2d(f), b = split::split_onestep_2d(3.0 * f);
  double eq = 0.0;
  for (int i = 0; i < 2; ++i) eq = std::max(eq, rel(max_abs_diff(b.u[i], 3.0 * a.u[i]), 3.0 * a.u.max_component()));
  out.push_back(le("explicit.scaling_equivariance", eq, 1e-12));
}

// ---------------------------------------------------------------- variational

void variational_suite(std::vector<Check>& out) {
  const Grid g = Grid::cube(2, 16, 0.0, 1.0, true);
  const auto f = mean_zero(gaussian(600, g));
  const auto uh = var::helmholtz_solve(f);
  out.push_back(le("variational.helmholtz_roundtrip",
                   rel(max_abs_diff(discrete_divergence(uh), f), norms::lp_norm(f, norms::kInf)), 1e-10));

  const double tv = norms::tv_norm(f, TvVariant::isotropic);
  var::VariationalConfig cfg;
  cfg.lambda = 0.5 / (2.0 * tv);
  const auto triv = var::minimize_flambda(f, cfg);
  out.push_back(le("variational.trivial_minimizer", triv.u.max_magnitude(), 0.0));

  double feasible = 0.0, certificate = 0.0, identity = 0.0;
  for (double scale : {2.0, 20.0}) {
    cfg.lambda = scale / (2.0 * tv);
    const auto r = var::minimize_flambda(f, cfg);
    feasible = std::max(feasible, r.report.objective / r.report.trivial_objective);
    certificate = std::max(certificate, 2.0 * cfg.lambda * norms::tv_norm(r.residual, TvVariant::isotropic));
    const double obj = r.u.max_magnitude() + cfg.lambda * std::pow(norms::lp_norm(r.residual, 2), 2);
    identity = std::max(identity, rel(std::abs(obj - r.report.objective), obj));
  }
  out.push_back(le("variational.objective_feasible", feasible, 1.0));
  out.push_back(le("variational.objective_identity", identity, 1e-10));
  out.push_back(le("variational.residual_tv_certificate", certificate, 1.02));

  var::HierarchyConfig hc;
  hc.max_levels = 4;
  const auto h = var::hierarchical_p2(f, hc);
  ScalarField recon = discrete_divergence(h.u) + h.residual;
  out.push_back(le("variational.telescoping", rel(max_abs_diff(recon, f), norms::lp_norm(f, norms::kInf)), 1e-10));

  const auto ts = var::two_step(f);
  out.push_back(le("variational.two_step_div", rel(ts.div_residual, norms::lp_norm(f, norms::kInf)), 1e-10));
}

// ---------------------------------------------------------------- examples

void examples_suite(std::vector<Check>& out) {
  auto identical = [](const ScalarField& a, const ScalarField& b) {
    return a.grid() == b.grid() && encode_field(a) == encode_field(b);
  };
  std::size_t differ = 0;
  differ += !identical(ex::nirenberg_field(32), ex::nirenberg_field(32));
  differ += !identical(ex::ball_field(2.0, 1.0, 32), ex::ball_field(2.0, 1.0, 32));
  differ += !identical(ex::random_field(7, 16, ex::RandomLaw::Gaussian()), ex::random_field(7, 16, ex::RandomLaw::Gaussian()));
  const auto t1 = ex::tatar_pair(2.0, 4, 64), t2 = ex::tatar_pair(2.0, 4, 64);
  differ += !identical(t1.f, t2.f) + !identical(t1.g, t2.g);
  out.push_back(le("examples.deterministic", static_cast<double>(differ), 0.0));

  const auto nf = ex::nirenberg_field(32);
  const Grid& g = nf.grid();
  double odd = 0.0;
  for (std::size_t i = 0; i < g.n(0); ++i)
    for (std::size_t j = 0; j < g.n(1); ++j)
      odd = std::max(odd, std::abs(nf[g.flatten({i, j, 0})] + nf[g.flatten({g.n(0) - 1 - i, j, 0})]));
  const double scale = norms::lp_norm(nf, norms::kInf);
  out.push_back(le("examples.nirenberg_odd", rel(odd, scale), 1e-12));
  out.push_back(le("examples.nirenberg_mean", std::abs(integral(nf)), 1e-12 * scale));

  double dom = 0.0;
  for (std::size_t k = 0; k < t1.f.size(); ++k) dom = std::max(dom, std::abs(t1.g[k]) - t1.f[k]);
  out.push_back(le("examples.tatar_dominated", dom, 0.0));

  const auto sp = ex::random_field(9, 32, ex::RandomLaw::Spikes(17, 4.0));
  std::size_t above = 0;
  for (double v : sp.values()) above += std::abs(v) > 2.0;
  out.push_back(le("examples.spike_count", std::abs(static_cast<double>(above) - 17.0), 0.0));
}

// ---------------------------------------------------------------- inputs

void input_checks(const std::string& path, std::vector<Check>& out) {
  const std::string tag = "input[" + path + "]";
  ScalarField f;
  try {
    f = read_field(path);
  } catch (const std::exception&) {
    out.push_back({tag + ".file_decodes", 1.0, 0.0, false});
    return;
  }
  out.push_back(le(tag + ".file_decodes", 0.0, 0.0));
  const auto back = decode_field(encode_field(f));
  out.push_back(le(tag + ".roundtrip_bit_exact", encode_field(back) == encode_field(f) ? 0.0 : 1.0, 0.0));
  double homog = 0.0;
  for (const auto& k : {NormKind::Lp(2), NormKind::Linf(), NormKind::WeakLpSet(2), NormKind::TV(TvVariant::isotropic)}) {
    const double a = norms::evaluate(2.5 * f, k), b = 2.5 * norms::evaluate(f, k);
    homog = std::max(homog, rel(std::abs(a - b), b));
  }
  out.push_back(le(tag + ".norm_homogeneity", homog, 1e-12));
  if (f.grid().dim() == 2 && !f.grid().any_periodic()) {
    const auto r = split::split_onestep_2d(f);
    out.push_back(le(tag + ".onestep_certificates", r.worst_certificate_ratio(), 1.0 + 1e-10));
  }
}

const std::map<std::string, std::function<void(std::vector<Check>&)>>& suites() {
  static const std::map<std::string, std::function<void(std::vector<Check>&)>> m{
      {"fields", fields_suite},
      {"norms", norms_suite},
      {"explicit", explicit_suite},
      {"variational", variational_suite},
      {"examples", examples_suite}};
  return m;
}

}  // namespace

bool is_suite(const std::string& name) { return name == "all" || suites().count(name) > 0; }

std::vector<Check> run_verify(const std::string& suite, const std::vector<std::string>& inputs) {
  require(is_suite(suite), "unknown suite '" + suite + "'");
  std::vector<Check> out;
  for (const auto& [name, fn] : suites())
    if (suite == "all" || suite == name) fn(out);
  for (const auto& p : inputs) input_checks(p, out);
  return out;
}

}  // namespace bdiv::service
