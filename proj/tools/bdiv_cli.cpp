// bdiv command line: gen, solve, norms, bench, verify.
//
// Exit codes: 0 success, 1 internal error, 2 usage or bad input,
// 3 solver non-convergence, 4 invariant violation.

#include <openssl/evp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bdiv.h"

namespace {

using Json = nlohmann::ordered_json;

enum Exit { kOk = 0, kInternal = 1, kUsage = 2, kNotConverged = 3, kInvariant = 4 };

struct CliError {
  int code;
  std::string message;
};

void check(bdiv_status st) {
  if (st == BDIV_OK) return;
  throw CliError{st == BDIV_ERR_INTERNAL ? kInternal : kUsage, bdiv_last_error()};
}

struct FieldDeleter {
  void operator()(bdiv_field* f) const { bdiv_field_free(f); }
};
struct VectorDeleter {
  void operator()(bdiv_vector* v) const { bdiv_vector_free(v); }
};
struct SolutionDeleter {
  void operator()(bdiv_solution* s) const { bdiv_solution_free(s); }
};
using Field = std::unique_ptr<bdiv_field, FieldDeleter>;
using Vector = std::unique_ptr<bdiv_vector, VectorDeleter>;
using Solution = std::unique_ptr<bdiv_solution, SolutionDeleter>;

std::string take(char* s) {
  std::string out = s ? s : "";
  bdiv_string_free(s);
  return out;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliError{kUsage, "cannot open " + path};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw CliError{kUsage, "cannot write " + path};
  out << text;
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw CliError{kInternal, "SHA-256 failed"};
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned i = 0; i < len; ++i) {
    out.push_back(hex[md[i] >> 4]);
    out.push_back(hex[md[i] & 15]);
  }
  return out;
}

/// Command line, config, digests of every file read or written, wall time.
class Manifest {
public:
  Manifest(int argc, char** argv) : start_(std::chrono::steady_clock::now()) {
    for (int i = 0; i < argc; ++i) argv_.push_back(argv[i]);
  }
  void input(const std::string& path) { inputs_.push_back(entry(path)); }
  void output(const std::string& path) { outputs_.push_back(entry(path)); }
  Json& config() { return config_; }

  void write(const std::string& path) const {
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    Json m{{"artifact_version", bdiv_version()}, {"command_line", argv_}, {"config", config_},
           {"inputs", inputs_},                  {"outputs", outputs_},   {"wall_time_s", wall}};
    spit(path, m.dump(2) + "\n");
  }

private:
  static Json entry(const std::string& path) {
    const auto bytes = slurp(path);
    return Json{{"path", path}, {"bytes", bytes.size()}, {"sha256", sha256_hex(bytes)}};
  }
  std::chrono::steady_clock::time_point start_;
  std::vector<std::string> argv_;
  Json config_ = Json::object();
  Json inputs_ = Json::array();
  Json outputs_ = Json::array();
};

Field read_field(const std::string& path) {
  bdiv_field* f = nullptr;
  check(bdiv_field_read(path.c_str(), &f));
  return Field(f);
}

void write_field(const bdiv_field* f, const std::string& path, Manifest& man) {
  check(bdiv_field_write(f, path.c_str()));
  man.output(path);
}

// ------------------------------------------------------------------ gen

struct GenArgs {
  std::string kind;
  std::size_t n = 64;
  std::string out;
  std::string out_g;
  double alpha = 1.0;
  double radius = 1.0;
  double half_width = 3.0;
  bool periodic = false;
  double p = 2.0;
  int levels = 8;
  std::uint64_t seed = 0;
  std::string law = "gaussian";
  std::size_t spikes = 10;
  double amplitude = 1.0;
  bool mean_zero = false;
};

std::string default_g_path(const std::string& out) {
  const auto dot = out.rfind('.');
  const auto slash = out.rfind('/');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return out + "_g";
  return out.substr(0, dot) + "_g" + out.substr(dot);
}

int cmd_gen(const GenArgs& a, Manifest& man) {
  man.config() = {{"command", "gen"}, {"kind", a.kind}, {"n", a.n}};
  bdiv_field* f = nullptr;
  if (a.kind == "nirenberg") {
    check(bdiv_gen_nirenberg(a.n, &f));
  } else if (a.kind == "ball") {
    man.config().update({{"alpha", a.alpha}, {"radius", a.radius}, {"half_width", a.half_width}, {"periodic", a.periodic}});
    check(bdiv_gen_ball(a.alpha, a.radius, a.n, a.half_width, a.periodic ? 1 : 0, &f));
  } else if (a.kind == "random") {
    man.config().update({{"seed", a.seed}, {"law", a.law}, {"spikes", a.spikes}, {"amplitude", a.amplitude}});
    if (a.law != "gaussian" && a.law != "spikes") throw CliError{kUsage, "unknown law '" + a.law + "'"};
    check(bdiv_gen_random(a.seed, a.n, a.law == "spikes" ? BDIV_LAW_SPIKES : BDIV_LAW_GAUSSIAN, a.spikes, a.amplitude,
                          &f));
  } else if (a.kind == "tatar") {
    man.config().update({{"p", a.p}, {"levels", a.levels}});
    bdiv_field* g = nullptr;
    check(bdiv_gen_tatar(a.p, a.levels, a.n, &f, &g));
    Field gf(g);
    write_field(gf.get(), a.out_g.empty() ? default_g_path(a.out) : a.out_g, man);
  } else {
    throw CliError{kUsage, "unknown kind '" + a.kind + "' (nirenberg, ball, tatar, random)"};
  }
  Field ff(f);
  if (a.mean_zero) {
    man.config()["mean_zero"] = true;
    bdiv_field* m = nullptr;
    check(bdiv_field_mean_zero(ff.get(), &m));
    ff.reset(m);
  }
  write_field(ff.get(), a.out, man);
  return kOk;
}

// ------------------------------------------------------------------ solve

struct SolveArgs {
  std::string method;
  std::string in;
  std::string prefix;
  bdiv_solve_options opts{};
  double lambda = 0.0;
};

int cmd_solve(SolveArgs& a, Manifest& man) {
  a.opts.method = a.method.c_str();
  a.opts.lambda = a.lambda;
  man.config() = {{"command", "solve"},        {"method", a.method},         {"tau", a.opts.tau},
                  {"max_iter", a.opts.max_iter}, {"lambda", a.opts.lambda},  {"p", a.opts.p},
                  {"eta", a.opts.eta},          {"gamma", a.opts.gamma},       {"levels", a.opts.levels},
                  {"stop_residual", a.opts.stop_residual}, {"continuum", a.opts.continuum != 0},
                  {"strict_mean", a.opts.strict_mean != 0}, {"max_iters", a.opts.max_iters},
                  {"tol_objective", a.opts.tol_objective}, {"inner_gap", a.opts.inner_gap}};
  auto f = read_field(a.in);
  man.input(a.in);

  bdiv_solution* raw = nullptr;
  check(bdiv_solve(f.get(), &a.opts, &raw));
  Solution sol(raw);

  bdiv_vector* uraw = nullptr;
  check(bdiv_solution_u(sol.get(), &uraw));
  Vector u(uraw);
  for (int i = 0; i < bdiv_vector_dim(u.get()); ++i) {
    bdiv_field* c = nullptr;
    check(bdiv_vector_component(u.get(), i, &c));
    Field cf(c);
    write_field(cf.get(), a.prefix + "_u" + std::to_string(i + 1) + ".bdiv", man);
  }
  bdiv_field* r = nullptr;
  check(bdiv_solution_residual(sol.get(), &r));
  Field rf(r);
  write_field(rf.get(), a.prefix + "_r.bdiv", man);
  for (int i = 0; i < bdiv_solution_part_count(sol.get()); ++i) {
    bdiv_field* p = nullptr;
    check(bdiv_solution_part(sol.get(), i, &p));
    Field pf(p);
    write_field(pf.get(), a.prefix + "_f" + std::to_string(i + 1) + ".bdiv", man);
  }

  char* s = nullptr;
  check(bdiv_solution_report_json(sol.get(), &s));
  const std::string report = take(s) + "\n";
  spit(a.prefix + "_report.json", report);
  man.output(a.prefix + "_report.json");
  check(bdiv_solution_certificates_csv(sol.get(), &s));
  spit(a.prefix + "_certificates.csv", take(s));
  man.output(a.prefix + "_certificates.csv");
  check(bdiv_solution_trace_csv(sol.get(), &s));
  const std::string trace = take(s);
  if (!trace.empty()) {
    spit(a.prefix + "_trace.csv", trace);
    man.output(a.prefix + "_trace.csv");
  }
  man.write(a.prefix + "_manifest.json");
  std::cout << report;

  if (!bdiv_solution_converged(sol.get())) {
    std::cerr << "solver did not converge\n";
    return kNotConverged;
  }
  if (!bdiv_solution_verified(sol.get())) {
    std::cerr << "verification block failed\n";
    return kInvariant;
  }
  return kOk;
}

// ------------------------------------------------------------------ norms

std::vector<std::string> default_norms(const bdiv_field* f) {
  const int d = bdiv_field_dim(f);
  const std::string ds = std::to_string(d);
  std::vector<std::string> k{"L1", "L2"};
  if (d == 3) k.push_back("L3");
  k.push_back("Linf");
  k.push_back("L(" + ds + ",1)");
  k.push_back("weakL2");
  if (d == 3) k.push_back("weakL3");
  // the ball search is quadratic in the cell count
  if (bdiv_field_size(f) <= 16384) k.push_back("Morrey");
  k.push_back("TV_iso");
  k.push_back("TV_aniso");
  return k;
}

int cmd_norms(const std::string& in, std::vector<std::string> kinds, Manifest& man) {
  man.config() = {{"command", "norms"}, {"kinds", kinds}};
  auto f = read_field(in);
  man.input(in);
  if (kinds.empty()) kinds = default_norms(f.get());
  Json arr = Json::array();
  for (const auto& k : kinds) {
    double v = 0.0;
    check(bdiv_norm(f.get(), k.c_str(), &v));
    arr.push_back({{"norm_kind", k}, {"value", v}});
  }
  std::cout << Json{{"file", in}, {"norms", arr}}.dump(2) << "\n";
  return kOk;
}

// ------------------------------------------------------------------ bench

struct BenchRow {
  double helmholtz = 0.0;
  double twostep = 0.0;
};

/// u = argmin F_lambda + helmholtz(residual) with lambda = scale / ||f||.
double scaled_two_step(const bdiv_field* f, double fnorm, double scale) {
  bdiv_solve_options o;
  bdiv_solve_options_init(&o);
  o.method = "flambda";
  o.lambda = scale / fnorm;
  o.p = 2;
  bdiv_solution* raw = nullptr;
  check(bdiv_solve(f, &o, &raw));
  Solution first(raw);
  if (!bdiv_solution_converged(first.get())) throw CliError{kNotConverged, "first step did not converge"};
  bdiv_field* r = nullptr;
  check(bdiv_solution_residual(first.get(), &r));
  Field rf(r);
  o.method = "helmholtz";
  check(bdiv_solve(rf.get(), &o, &raw));
  Solution second(raw);
  bdiv_vector *u1 = nullptr, *u2 = nullptr;
  check(bdiv_solution_u(first.get(), &u1));
  Vector v1(u1);
  check(bdiv_solution_u(second.get(), &u2));
  Vector v2(u2);
  double best = 0.0;
  std::vector<Field> a, b;
  for (int i = 0; i < bdiv_vector_dim(v1.get()); ++i) {
    bdiv_field *c1 = nullptr, *c2 = nullptr;
    check(bdiv_vector_component(v1.get(), i, &c1));
    a.emplace_back(c1);
    check(bdiv_vector_component(v2.get(), i, &c2));
    b.emplace_back(c2);
  }
  const std::size_t n = bdiv_field_size(f);
  for (std::size_t k = 0; k < n; ++k) {
    double m2 = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double x = bdiv_field_cdata(a[i].get())[k] + bdiv_field_cdata(b[i].get())[k];
      m2 += x * x;
    }
    best = std::max(best, std::sqrt(m2));
  }
  return best / fnorm;
}

BenchRow bench_row(std::size_t N, double lambda_scale) {
  bdiv_field* raw = nullptr;
  check(bdiv_gen_nirenberg(N, &raw));
  Field f(raw);
  double fn = 0.0;
  check(bdiv_norm(f.get(), "L2", &fn));
  auto ratio_of = [&](const char* method) {
    bdiv_solve_options o;
    bdiv_solve_options_init(&o);
    o.method = method;
    bdiv_solution* s = nullptr;
    check(bdiv_solve(f.get(), &o, &s));
    Solution sol(s);
    if (!bdiv_solution_converged(sol.get())) throw CliError{kNotConverged, std::string(method) + " did not converge"};
    if (!bdiv_solution_verified(sol.get())) throw CliError{kInvariant, std::string(method) + " failed verification"};
    bdiv_vector* u = nullptr;
    check(bdiv_solution_u(sol.get(), &u));
    Vector v(u);
    return bdiv_vector_max_magnitude(v.get()) / fn;
  };
  BenchRow row;
  row.helmholtz = ratio_of("helmholtz");
  row.twostep = lambda_scale == 1.0 ? ratio_of("twostep") : scaled_two_step(f.get(), fn, lambda_scale);
  return row;
}

std::vector<std::size_t> parse_grids(const std::string& arg) {
  std::vector<std::size_t> out;
  std::stringstream ss(arg);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size()) throw CliError{kUsage, "bad grid size '" + item + "'"};
    out.push_back(v);
  }
  return out;
}

int cmd_bench(const std::string& table, const std::vector<std::size_t>& grids, double lambda_scale,
              const std::string& out, Manifest& man) {
  if (table != "table1") throw CliError{kUsage, "unknown benchmark '" + table + "' (table1)"};
  for (auto N : grids)
    if (N != 50 && N != 100 && N != 200 && N != 400 && N != 800)
      throw CliError{kUsage, "grid sizes must be among 50, 100, 200, 400, 800"};
  if (!(lambda_scale > 0.0)) throw CliError{kUsage, "--lambda-scale must be positive"};
  man.config() = {{"command", "bench"}, {"table", table}, {"grids", grids}, {"lambda_scale", lambda_scale}};

  std::ostringstream csv;
  csv.precision(10);
  csv << "N,helmholtz_ratio,twostep_ratio,runtime,error\n";
  if (out.empty()) {
    std::cout << csv.str();
    csv.str("");
  }
  bool any_error = false;
  for (auto N : grids) {
    const auto t0 = std::chrono::steady_clock::now();
    std::string error;
    BenchRow row;
    try {
      row = bench_row(N, lambda_scale);
    } catch (const CliError& e) {
      error = e.message;
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    any_error = any_error || !error.empty();
    for (char& c : error)
      if (c == ',' || c == '\n') c = ';';
    csv << N << ',';
    if (error.empty())
      csv << row.helmholtz << ',' << row.twostep;
    else
      csv << ',';
    csv << ',' << secs << ',' << error << '\n';
    if (out.empty()) {
      std::cout << csv.str();
      csv.str("");
    }
    std::cout.flush();
  }
  if (!out.empty()) {
    spit(out, csv.str());
    man.output(out);
  }
  return any_error ? kNotConverged : kOk;
}

// ------------------------------------------------------------------ verify

int cmd_verify(const std::string& suite, const std::vector<std::string>& inputs, const std::string& out,
               Manifest& man) {
  man.config() = {{"command", "verify"}, {"suite", suite}};
  std::vector<const char*> ptrs;
  for (const auto& p : inputs) ptrs.push_back(p.c_str());
  int passed = 0;
  char* json = nullptr;
  check(bdiv_verify(suite.c_str(), ptrs.data(), ptrs.size(), &passed, &json));
  const auto text = take(json);
  const auto report = Json::parse(text);
  for (const auto& c : report["checks"])
    std::cerr << (c["pass"].get<bool>() ? "PASS " : "FAIL ") << c["name"].get<std::string>() << "  value "
              << c["value"].dump() << "  limit " << c["limit"].dump() << "\n";
  if (!out.empty()) {
    spit(out, text + "\n");
    man.output(out);
  } else {
    std::cout << text << "\n";
  }
  return passed ? kOk : kInvariant;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bdiv: bounded solutions of div u = f on grids"};
  app.set_version_flag("--version", std::string(bdiv_version()));
  app.require_subcommand(1);
  app.fallthrough();
  std::string manifest_path;
  app.add_option("--manifest", manifest_path, "write a run manifest (digests, config, wall time) to this path");

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "generate an example field");
  g->add_option("--kind", gen.kind, "nirenberg | ball | tatar | random")->required();
  g->add_option("--n", gen.n, "cells per axis");
  g->add_option("--out", gen.out, "output field file")->required();
  g->add_option("--out-g", gen.out_g, "tatar: file for the direction g (default <out>_g)");
  g->add_option("--alpha", gen.alpha, "ball: height");
  g->add_option("--radius", gen.radius, "ball: radius");
  g->add_option("--half-width", gen.half_width, "ball: domain [-w, w]^2");
  g->add_flag("--periodic", gen.periodic, "ball: periodic domain");
  g->add_option("--p", gen.p, "tatar: exponent");
  g->add_option("--levels", gen.levels, "tatar: dyadic levels");
  g->add_option("--seed", gen.seed, "random: seed");
  g->add_option("--law", gen.law, "random: gaussian | spikes");
  g->add_option("--spikes", gen.spikes, "random: number of spikes");
  g->add_option("--amplitude", gen.amplitude, "random: spike amplitude");
  g->add_flag("--mean-zero", gen.mean_zero, "subtract the mean before writing");

  SolveArgs solve;
  bdiv_solve_options_init(&solve.opts);
  auto* s = app.add_subcommand("solve", "construct u with div u = f (or the variational approximation)");
  s->add_option("--method", solve.method,
                "onestep2d | disjoint2d | inductive | weakl2 | helmholtz | flambda | twostep | hier-p2 | hier-p1")
      ->required();
  s->add_option("--in", solve.in, "input field file")->required();
  s->add_option("--out-prefix", solve.prefix, "prefix for output files")->required();
  s->add_option("--tau", solve.opts.tau, "weakl2 threshold (> 1)");
  s->add_option("--max-iter", solve.opts.max_iter, "weakl2 pass limit");
  s->add_option("--lambda", solve.lambda, "flambda: lambda; hier-p2: lambda_1; hier-p1: fixed lambda");
  s->add_option("--p", solve.opts.p, "flambda exponent (1 or 2)");
  s->add_option("--eta", solve.opts.eta, "hier-p2 closure constant (default: probe estimate)");
  s->add_option("--gamma", solve.opts.gamma, "hier-p1 assumed constant");
  s->add_option("--levels", solve.opts.levels, "hierarchy max levels");
  s->add_option("--stop-residual", solve.opts.stop_residual, "hierarchy relative stop residual");
  s->add_flag("--continuum", solve.opts.continuum, "helmholtz: continuum symbol");
  s->add_flag("--strict-mean", solve.opts.strict_mean, "helmholtz: reject nonzero-mean data");
  s->add_option("--max-iters", solve.opts.max_iters, "inner iteration budget");
  s->add_option("--tol-objective", solve.opts.tol_objective, "outer optimality tolerance");
  s->add_option("--inner-gap", solve.opts.inner_gap, "relative duality gap of inner solves");

  std::string norms_in;
  std::vector<std::string> norm_kinds;
  auto* n = app.add_subcommand("norms", "print norms of a field as JSON");
  n->add_option("--in", norms_in, "input field file")->required();
  n->add_option("--kind", norm_kinds, "L<p> | Linf | L(<p>,<q>) | weakL<p> | Morrey | TV_iso | TV_aniso (repeatable)");

  std::string bench_table = "table1";
  std::string grids_arg = "50,100,200";
  double lambda_scale = 1.0;
  std::string bench_out;
  auto* b = app.add_subcommand("bench", "benchmark tables as CSV");
  b->add_option("table", bench_table, "table1");
  b->add_option("--grids", grids_arg, "comma-separated grid sizes N (subset of 50,100,200,400,800); empty for none");
  b->add_option("--lambda-scale", lambda_scale, "two-step diagnostic: lambda = scale / ||f||");
  b->add_option("--out", bench_out, "write CSV here instead of stdout");

  std::string suite = "all";
  std::vector<std::string> verify_inputs;
  std::string verify_out;
  auto* v = app.add_subcommand("verify", "run invariant suites; nonzero exit on failure");
  v->add_option("suite", suite, "fields | norms | explicit | variational | examples | all");
  v->add_option("--input", verify_inputs, "field files to check (repeatable)");
  v->add_option("--out", verify_out, "write the JSON report here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  Manifest man(argc, argv);
  int rc = kOk;
  try {
    if (*g) rc = cmd_gen(gen, man);
    else if (*s) rc = cmd_solve(solve, man);
    else if (*n) rc = cmd_norms(norms_in, norm_kinds, man);
    else if (*b) rc = cmd_bench(bench_table, parse_grids(grids_arg), lambda_scale, bench_out, man);
    else if (*v) rc = cmd_verify(suite, verify_inputs, verify_out, man);
    if (!manifest_path.empty()) man.write(manifest_path);
  } catch (const CliError& e) {
    std::cerr << "error: " << e.message << "\n";
    return e.code;
  }
  return rc;
}
