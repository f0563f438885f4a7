#include <doctest.h>

#include <openssl/evp.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "bdiv/examples.hpp"
#include "bdiv/field_io.hpp"
#include "bdiv/operators.hpp"

namespace fs = std::filesystem;
using Json = nlohmann::json;

namespace {

const fs::path& workdir() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / ("bdiv_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string in_dir(const std::string& name) { return (workdir() / name).string(); }

/// Runs the CLI with `args`, stdout to `name`.out, stderr to `name`.err; returns the exit code.
int run(const std::string& args, const std::string& name = "last") {
  const std::string cmd = std::string(BDIV_CLI) + " " + args + " > " + in_dir(name + ".out") + " 2> " +
                          in_dir(name + ".err");
  const int st = std::system(cmd.c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string sha256(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr);
  std::ostringstream os;
  for (unsigned i = 0; i < len; ++i) os << std::hex << ((md[i] >> 4) & 15) << (md[i] & 15);
  return os.str();
}

}  // namespace

TEST_CASE("gen: regeneration oracle and byte-identical reruns") {
  const auto a = in_dir("ball_a.bdiv"), b = in_dir("ball_b.bdiv");
  REQUIRE(run("gen --kind ball --alpha 3 --radius 1 --n 48 --out " + a) == 0);
  REQUIRE(run("gen --kind ball --alpha 3 --radius 1 --n 48 --out " + b) == 0);
  CHECK(slurp(a) == slurp(b));
  const auto f = bdiv::read_field(a);
  CHECK(bdiv::integral(f) == bdiv::integral(bdiv::examples::ball_field(3.0, 1.0, 48)));

  CHECK(run("gen --kind tatar --p 2 --levels 4 --n 64 --out " + in_dir("t.bdiv")) == 0);
  CHECK(fs::exists(in_dir("t_g.bdiv")));
  CHECK(run("gen --kind random --law spikes --spikes 3 --n 16 --mean-zero --out " + in_dir("s.bdiv")) == 0);
  CHECK(std::abs(bdiv::integral(bdiv::read_field(in_dir("s.bdiv")))) < 1e-14);
}

TEST_CASE("gen: usage errors") {
  CHECK(run("gen --kind bogus --out " + in_dir("x.bdiv")) == 2);
  CHECK(run("gen --kind ball --n 4 --out " + in_dir("x.bdiv")) == 2);
  CHECK(run("gen --out " + in_dir("x.bdiv")) == 2);
  CHECK(run("") == 2);
}

TEST_CASE("solve: explicit construction writes fields, report, certificates, manifest") {
  const auto f = in_dir("solve_in.bdiv");
  REQUIRE(run("gen --kind ball --alpha 2 --n 32 --half-width 2 --out " + f) == 0);
  const auto prefix = in_dir("one");
  REQUIRE(run("solve --method onestep2d --in " + f + " --out-prefix " + prefix, "solve1") == 0);
  const auto report = Json::parse(slurp(prefix + "_report.json"));
  CHECK(report["verification"]["passed"] == true);
  for (const auto& c : report["verification"]["checks"])
    if (c["name"] == "div_u_equals_f") CHECK(c["value"].get<double>() <= 1e-10);
  CHECK(slurp(prefix + "_certificates.csv").rfind("axis,index,value,bound\n", 0) == 0);

  const auto u1 = bdiv::read_field(prefix + "_u1.bdiv"), u2 = bdiv::read_field(prefix + "_u2.bdiv");
  const auto div = bdiv::discrete_divergence(bdiv::VectorField({u1, u2}));
  const auto data = bdiv::read_field(f);
  double err = 0.0;
  for (std::size_t k = 0; k < div.size(); ++k) err = std::max(err, std::abs(div[k] - data[k]));
  CHECK(err < 1e-12);

  const auto man = Json::parse(slurp(prefix + "_manifest.json"));
  CHECK(man["inputs"][0]["sha256"] == sha256(slurp(f)));
  bool found = false;
  for (const auto& o : man["outputs"])
    if (o["path"] == prefix + "_report.json") found = o["sha256"] == sha256(slurp(prefix + "_report.json"));
  CHECK(found);

  // determinism: identical reruns give identical bytes
  const auto again = in_dir("one_again");
  REQUIRE(run("solve --method onestep2d --in " + f + " --out-prefix " + again) == 0);
  CHECK(slurp(prefix + "_report.json") == slurp(again + "_report.json"));
  CHECK(slurp(prefix + "_u1.bdiv") == slurp(again + "_u1.bdiv"));
}

TEST_CASE("solve: zero field gives zero outputs") {
  const auto f = in_dir("zero.bdiv");
  bdiv::write_field(bdiv::ScalarField(bdiv::Grid::cube(2, 8, 0.0, 1.0, false)), f);
  REQUIRE(run("solve --method disjoint2d --in " + f + " --out-prefix " + in_dir("z")) == 0);
  for (const char* part : {"_u1.bdiv", "_u2.bdiv", "_r.bdiv", "_f1.bdiv", "_f2.bdiv"}) {
    const auto out = bdiv::read_field(in_dir("z") + part);
    for (double v : out.values()) CHECK(v == 0.0);
  }
}

TEST_CASE("solve: variational methods and exit codes") {
  const auto f = in_dir("rz.bdiv");
  REQUIRE(run("gen --kind random --n 16 --seed 2 --mean-zero --out " + f) == 0);
  CHECK(run("solve --method twostep --in " + f + " --out-prefix " + in_dir("ts")) == 0);
  CHECK(Json::parse(slurp(in_dir("ts_report.json")))["ratio"].get<double>() > 0.0);
  CHECK(run("solve --method hier-p2 --in " + f + " --stop-residual 1e-2 --out-prefix " + in_dir("h2")) == 0);
  CHECK(slurp(in_dir("h2_trace.csv")).rfind("level,lambda,u_inf,r_norm,cumulative_inf,ratio,converged\n", 0) == 0);
  CHECK(run("solve --method flambda --lambda 5 --in " + f + " --out-prefix " + in_dir("fl")) == 0);

  // lambda below the trivial threshold: residual never shrinks, flagged as non-convergence
  CHECK(run("solve --method hier-p1 --gamma 0.001 --lambda 0.002 --in " + f + " --out-prefix " + in_dir("p1")) == 3);
  CHECK(run("solve --method nope --in " + f + " --out-prefix " + in_dir("x")) == 2);
  CHECK(run("solve --method flambda --in " + f + " --out-prefix " + in_dir("x")) == 2);  // lambda missing

  const auto raw = in_dir("r.bdiv");
  REQUIRE(run("gen --kind random --n 16 --seed 2 --out " + raw) == 0);
  CHECK(run("solve --method twostep --in " + raw + " --out-prefix " + in_dir("x")) == 2);  // nonzero mean
  CHECK(run("solve --method onestep2d --in " + in_dir("missing.bdiv") + " --out-prefix " + in_dir("x")) == 2);
}

TEST_CASE("norms: JSON pairs") {
  const auto f = in_dir("n.bdiv");
  REQUIRE(run("gen --kind ball --alpha 1 --n 16 --out " + f) == 0);
  REQUIRE(run("norms --in " + f + " --kind L2 --kind weakL2 --kind TV_aniso", "norms") == 0);
  const auto j = Json::parse(slurp(in_dir("norms.out")));
  REQUIRE(j["norms"].size() == 3);
  CHECK(j["norms"][0]["norm_kind"] == "L2");
  CHECK(j["norms"][1]["value"].get<double>() > 0.0);
  CHECK(run("norms --in " + f + " --kind L0.5") == 2);
  REQUIRE(run("norms --in " + f, "norms_all") == 0);
  CHECK(Json::parse(slurp(in_dir("norms_all.out")))["norms"].size() >= 7);
}

TEST_CASE("bench: empty grid list and validation") {
  REQUIRE(run("bench table1 --grids \"\"", "bench") == 0);
  CHECK(slurp(in_dir("bench.out")) == "N,helmholtz_ratio,twostep_ratio,runtime,error\n");
  CHECK(run("bench table1 --grids 64") == 2);
  CHECK(run("bench table9 --grids 50") == 2);
}

TEST_CASE("verify: suites, filter, corrupted input") {
  REQUIRE(run("verify fields --out " + in_dir("v.json")) == 0);
  const auto j = Json::parse(slurp(in_dir("v.json")));
  CHECK(j["passed"] == true);
  for (const auto& c : j["checks"]) CHECK(c["name"].get<std::string>().rfind("fields.", 0) == 0);

  const auto good = in_dir("good.bdiv"), bad = in_dir("bad.bdiv");
  REQUIRE(run("gen --kind ball --n 16 --out " + good) == 0);
  const auto bytes = slurp(good);
  std::ofstream(bad, std::ios::binary) << bytes.substr(0, bytes.size() / 2);
  CHECK(run("verify examples --input " + good + " --input " + bad, "corrupt") == 4);
  CHECK(slurp(in_dir("corrupt.err")).find("FAIL input[" + bad + "].file_decodes") != std::string::npos);
  CHECK(run("verify nonsense") == 2);
}
