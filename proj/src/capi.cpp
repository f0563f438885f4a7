#include "bdiv.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <regex>
#include <string>

#include "bdiv/error.hpp"
#include "bdiv/examples.hpp"
#include "bdiv/field_io.hpp"
#include "bdiv/norms.hpp"
#include "bdiv/operators.hpp"
#include "solve.hpp"
#include "verify.hpp"

#ifndef BDIV_VERSION_STRING
#define BDIV_VERSION_STRING "0.0.0"
#endif

struct bdiv_field {
  bdiv::ScalarField f;
};
struct bdiv_vector {
  bdiv::VectorField v;
};
struct bdiv_solution {
  bdiv::service::Solution s;
};

namespace {

thread_local std::string g_last_error;

bdiv_status fail(bdiv_status code, const std::string& msg) {
  g_last_error = msg;
  return code;
}

template <class Body>
bdiv_status guarded(const Body& body) {
  try {
    body();
    return BDIV_OK;
  } catch (const bdiv::InvalidArgument& e) {
    return fail(BDIV_ERR_INVALID, e.what());
  } catch (const bdiv::IoError& e) {
    return fail(BDIV_ERR_IO, e.what());
  } catch (const std::bad_alloc&) {
    return fail(BDIV_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(BDIV_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(BDIV_ERR_INTERNAL, "unknown error");
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

bdiv_field* wrap(bdiv::ScalarField f) { return new bdiv_field{std::move(f)}; }

bdiv::norms::NormKind parse_norm(const std::string& s) {
  using bdiv::norms::NormKind;
  using bdiv::norms::TvVariant;
  static const std::regex lp(R"(L([0-9.]+))"), lorentz(R"(L\(([0-9.]+),([0-9.]+)\))"), weak(R"(weakL([0-9.]+))");
  std::smatch m;
  auto num = [](const std::string& t) {
    std::size_t used = 0;
    const double v = std::stod(t, &used);
    bdiv::require(used == t.size(), "bad number '" + t + "' in norm name");
    return v;
  };
  if (s == "Linf") return NormKind::Linf();
  if (s == "Morrey") return NormKind::Morrey();
  if (s == "TV_iso") return NormKind::TV(TvVariant::isotropic);
  if (s == "TV_aniso") return NormKind::TV(TvVariant::anisotropic);
  if (std::regex_match(s, m, lp)) return NormKind::Lp(num(m[1]));
  if (std::regex_match(s, m, lorentz)) return NormKind::Lorentz(num(m[1]), num(m[2]));
  if (std::regex_match(s, m, weak)) return NormKind::WeakLpSet(num(m[1]));
  throw bdiv::InvalidArgument("unknown norm '" + s + "'");
}

bdiv::examples::RandomLaw make_law(bdiv_law law, size_t spikes, double amplitude) {
  if (law == BDIV_LAW_GAUSSIAN) return bdiv::examples::RandomLaw::Gaussian();
  bdiv::require(law == BDIV_LAW_SPIKES, "unknown random law");
  return bdiv::examples::RandomLaw::Spikes(spikes, amplitude);
}

}  // namespace

#define BDIV_NEED(ptr)                                            \
  do {                                                            \
    if (!(ptr)) return fail(BDIV_ERR_NULL, #ptr " is NULL");      \
  } while (0)

extern "C" {

const char* bdiv_version(void) { return BDIV_VERSION_STRING; }
const char* bdiv_last_error(void) { return g_last_error.c_str(); }
void bdiv_string_free(char* s) { std::free(s); }

bdiv_status bdiv_field_create(int d, const size_t* n, const double* lo, const double* hi, const int* periodic,
                              bdiv_field** out) {
  BDIV_NEED(n);
  BDIV_NEED(lo);
  BDIV_NEED(hi);
  BDIV_NEED(periodic);
  BDIV_NEED(out);
  return guarded([&] {
    bdiv::require(d >= 1 && d <= bdiv::kMaxDim, "dimension must be 1, 2 or 3");
    std::array<std::size_t, bdiv::kMaxDim> nn{1, 1, 1};
    std::array<double, bdiv::kMaxDim> l{0, 0, 0}, h{1, 1, 1};
    std::array<bool, bdiv::kMaxDim> p{false, false, false};
    for (int a = 0; a < d; ++a) {
      nn[a] = n[a];
      l[a] = lo[a];
      h[a] = hi[a];
      p[a] = periodic[a] != 0;
    }
    *out = wrap(bdiv::ScalarField(bdiv::Grid(d, nn, l, h, p)));
  });
}

bdiv_status bdiv_field_clone(const bdiv_field* f, bdiv_field** out) {
  BDIV_NEED(f);
  BDIV_NEED(out);
  return guarded([&] { *out = wrap(f->f); });
}

void bdiv_field_free(bdiv_field* f) { delete f; }

bdiv_status bdiv_field_read(const char* path, bdiv_field** out) {
  BDIV_NEED(path);
  BDIV_NEED(out);
  return guarded([&] { *out = wrap(bdiv::read_field(path)); });
}

bdiv_status bdiv_field_write(const bdiv_field* f, const char* path) {
  BDIV_NEED(f);
  BDIV_NEED(path);
  return guarded([&] { bdiv::write_field(f->f, path); });
}

int bdiv_field_dim(const bdiv_field* f) { return f ? f->f.grid().dim() : 0; }
size_t bdiv_field_size(const bdiv_field* f) { return f ? f->f.size() : 0; }

bdiv_status bdiv_field_grid(const bdiv_field* f, size_t* n, double* lo, double* hi, int* periodic) {
  BDIV_NEED(f);
  const auto& g = f->f.grid();
  for (int a = 0; a < g.dim(); ++a) {
    if (n) n[a] = g.n(a);
    if (lo) lo[a] = g.lo(a);
    if (hi) hi[a] = g.hi(a);
    if (periodic) periodic[a] = g.periodic(a) ? 1 : 0;
  }
  return BDIV_OK;
}

double* bdiv_field_data(bdiv_field* f) { return f ? f->f.values().data() : nullptr; }
const double* bdiv_field_cdata(const bdiv_field* f) { return f ? f->f.values().data() : nullptr; }

bdiv_status bdiv_field_mean_zero(const bdiv_field* f, bdiv_field** out) {
  BDIV_NEED(f);
  BDIV_NEED(out);
  return guarded([&] { *out = wrap(bdiv::mean_zero(f->f)); });
}

bdiv_status bdiv_field_integral(const bdiv_field* f, double* out) {
  BDIV_NEED(f);
  BDIV_NEED(out);
  return guarded([&] { *out = bdiv::integral(f->f); });
}

void bdiv_vector_free(bdiv_vector* v) { delete v; }
int bdiv_vector_dim(const bdiv_vector* v) { return v ? v->v.dim() : 0; }

bdiv_status bdiv_vector_component(const bdiv_vector* v, int i, bdiv_field** out) {
  BDIV_NEED(v);
  BDIV_NEED(out);
  return guarded([&] {
    bdiv::require(i >= 0 && i < v->v.dim(), "component index out of range");
    *out = wrap(v->v[i]);
  });
}

bdiv_status bdiv_vector_divergence(const bdiv_vector* v, bdiv_field** out) {
  BDIV_NEED(v);
  BDIV_NEED(out);
  return guarded([&] { *out = wrap(bdiv::discrete_divergence(v->v)); });
}

double bdiv_vector_max_magnitude(const bdiv_vector* v) { return v ? v->v.max_magnitude() : 0.0; }

double bdiv_vector_max_abs(const bdiv_vector* v, int component) {
  if (!v || component < 0 || component >= v->v.dim()) return 0.0;
  return v->v.max_abs(component);
}

bdiv_status bdiv_gen_nirenberg(size_t n, bdiv_field** out) {
  BDIV_NEED(out);
  return guarded([&] { *out = wrap(bdiv::examples::nirenberg_field(n)); });
}

bdiv_status bdiv_gen_ball(double alpha, double radius, size_t n, double half_width, int periodic, bdiv_field** out) {
  BDIV_NEED(out);
  return guarded([&] {
    *out = wrap(bdiv::examples::ball_field(alpha, radius, n, bdiv::examples::BallDomain{half_width, periodic != 0}));
  });
}

bdiv_status bdiv_gen_tatar(double p, int levels, size_t n, bdiv_field** f, bdiv_field** g) {
  BDIV_NEED(f);
  BDIV_NEED(g);
  return guarded([&] {
    auto pair = bdiv::examples::tatar_pair(p, levels, n);
    *f = wrap(std::move(pair.f));
    *g = wrap(std::move(pair.g));
  });
}

bdiv_status bdiv_gen_random(uint64_t seed, size_t n, bdiv_law law, size_t spikes, double amplitude, bdiv_field** out) {
  BDIV_NEED(out);
  return guarded([&] { *out = wrap(bdiv::examples::random_field(seed, n, make_law(law, spikes, amplitude))); });
}

bdiv_status bdiv_gen_random_like(uint64_t seed, const bdiv_field* like, bdiv_law law, size_t spikes, double amplitude,
                                 bdiv_field** out) {
  BDIV_NEED(like);
  BDIV_NEED(out);
  return guarded(
      [&] { *out = wrap(bdiv::examples::random_field(seed, like->f.grid(), make_law(law, spikes, amplitude))); });
}

bdiv_status bdiv_norm(const bdiv_field* f, const char* kind, double* out) {
  BDIV_NEED(f);
  BDIV_NEED(kind);
  BDIV_NEED(out);
  return guarded([&] { *out = bdiv::norms::evaluate(f->f, parse_norm(kind)); });
}

void bdiv_solve_options_init(bdiv_solve_options* opts) {
  if (!opts) return;
  const bdiv::service::SolveRequest req;
  opts->method = "onestep2d";
  opts->tau = req.tau;
  opts->max_iter = req.max_iter;
  opts->lambda = 0.0;
  opts->p = req.p;
  opts->eta = req.eta;
  opts->gamma = req.gamma;
  opts->levels = req.levels;
  opts->stop_residual = req.stop_residual;
  opts->continuum = 0;
  opts->strict_mean = 0;
  opts->max_iters = req.inner.max_iters;
  opts->tol_objective = req.inner.tol_objective;
  opts->inner_gap = req.inner.inner_gap;
}

bdiv_status bdiv_solve(const bdiv_field* f, const bdiv_solve_options* opts, bdiv_solution** out) {
  BDIV_NEED(f);
  BDIV_NEED(opts);
  BDIV_NEED(opts->method);
  BDIV_NEED(out);
  return guarded([&] {
    bdiv::service::SolveRequest req;
    req.method = opts->method;
    req.tau = opts->tau;
    req.max_iter = opts->max_iter;
    if (opts->lambda > 0.0) req.lambda = opts->lambda;
    req.p = opts->p;
    req.eta = opts->eta;
    req.gamma = opts->gamma;
    req.levels = opts->levels;
    req.stop_residual = opts->stop_residual;
    req.continuum = opts->continuum != 0;
    req.strict_mean = opts->strict_mean != 0;
    req.inner.max_iters = opts->max_iters;
    req.inner.tol_objective = opts->tol_objective;
    req.inner.inner_gap = opts->inner_gap;
    *out = new bdiv_solution{bdiv::service::solve(f->f, req)};
  });
}

void bdiv_solution_free(bdiv_solution* s) { delete s; }

bdiv_status bdiv_solution_u(const bdiv_solution* s, bdiv_vector** out) {
  BDIV_NEED(s);
  BDIV_NEED(out);
  return guarded([&] { *out = new bdiv_vector{s->s.u}; });
}

bdiv_status bdiv_solution_residual(const bdiv_solution* s, bdiv_field** out) {
  BDIV_NEED(s);
  BDIV_NEED(out);
  return guarded([&] { *out = wrap(s->s.residual); });
}

int bdiv_solution_part_count(const bdiv_solution* s) { return s ? static_cast<int>(s->s.parts.size()) : 0; }

bdiv_status bdiv_solution_part(const bdiv_solution* s, int i, bdiv_field** out) {
  BDIV_NEED(s);
  BDIV_NEED(out);
  return guarded([&] {
    bdiv::require(i >= 0 && i < static_cast<int>(s->s.parts.size()), "part index out of range");
    *out = wrap(s->s.parts[i]);
  });
}

int bdiv_solution_converged(const bdiv_solution* s) { return s && s->s.converged ? 1 : 0; }
int bdiv_solution_verified(const bdiv_solution* s) { return s && s->s.verified() ? 1 : 0; }

bdiv_status bdiv_solution_report_json(const bdiv_solution* s, char** out) {
  BDIV_NEED(s);
  BDIV_NEED(out);
  return guarded([&] { *out = dup_string(s->s.report.dump(2)); });
}

bdiv_status bdiv_solution_certificates_csv(const bdiv_solution* s, char** out) {
  BDIV_NEED(s);
  BDIV_NEED(out);
  return guarded([&] { *out = dup_string(bdiv::service::certificates_csv(s->s.certificates)); });
}

bdiv_status bdiv_solution_trace_csv(const bdiv_solution* s, char** out) {
  BDIV_NEED(s);
  BDIV_NEED(out);
  return guarded([&] { *out = dup_string(s->s.trace_csv); });
}

bdiv_status bdiv_verify(const char* suite, const char* const* inputs, size_t n_inputs, int* passed, char** json) {
  BDIV_NEED(suite);
  BDIV_NEED(passed);
  BDIV_NEED(json);
  if (n_inputs > 0) BDIV_NEED(inputs);
  return guarded([&] {
    std::vector<std::string> paths(inputs, inputs + n_inputs);
    const auto checks = bdiv::service::run_verify(suite, paths);
    bool ok = true;
    for (const auto& c : checks) ok = ok && c.pass;
    bdiv::service::Json report{{"suite", suite}, {"passed", ok}, {"checks", bdiv::service::to_json(checks)}};
    *passed = ok ? 1 : 0;
    *json = dup_string(report.dump(2));
  });
}

}  // extern "C"
