#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <nlohmann/json.hpp>

#include <complex>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "fockalg/serialization.hpp"
#include "fockalg/verify.hpp"

using namespace fockalg;
using cd = std::complex<double>;
namespace fs = std::filesystem;

namespace {

struct RunResult {
  int code = -1;
  std::string out;
  std::string err;
};

fs::path scratch_dir() {
  static const fs::path dir = [] {
    auto p = fs::temp_directory_path() /
             ("fockalg_cli_" + std::to_string(static_cast<unsigned long>(::getpid())));
    fs::create_directories(p);
    return p;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunResult run_cli(const std::string& args) {
  static int counter = 0;
  const auto base = scratch_dir() / ("run" + std::to_string(counter++));
  const auto out = base.string() + ".out";
  const auto err = base.string() + ".err";
  const std::string cmd = std::string(FOCKALG_BIN) + " " + args + " >" + out + " 2>" + err;
  const int rc = std::system(cmd.c_str());
  RunResult r;
  REQUIRE(rc != -1);
  REQUIRE(WIFEXITED(rc));
  r.code = WEXITSTATUS(rc);
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

std::string write_config(const std::string& name, const nlohmann::json& j) {
  const auto path = (scratch_dir() / name).string();
  save_json_file(j, path);
  return path;
}

}  // namespace

TEST_CASE("usage and argument errors") {
  CHECK(run_cli("--help").code == 0);
  CHECK(run_cli("--help").out.find("subconv") != std::string::npos);
  CHECK(run_cli("").code == 2);            // a subcommand is required
  CHECK(run_cli("frobnicate").code == 2);  // unknown subcommand
}

TEST_CASE("subconv verdict tracks the truncation level") {
  // The default family stabilizes only at deep truncation: expected
  // essential behaviour is visible at cap 64 but not yet at cap 8.
  const auto deep = run_cli("subconv --cap 64");
  CHECK(deep.code == 0);
  CHECK(deep.out.find("\"plateau\": true") != std::string::npos);
  CHECK(deep.out.find("\"match\": true") != std::string::npos);

  const auto shallow = run_cli("subconv");
  CHECK(shallow.code == 1);
  CHECK(shallow.out.find("\"plateau\": false") != std::string::npos);
}

TEST_CASE("subconv classifies the flat control and a delta series") {
  nlohmann::json flat;
  flat["cone"] = to_json(ConeSeries::geometric(1.0, 64));
  flat["cap"] = 64;
  const auto flat_path = write_config("flat.json", flat);
  CHECK(run_cli("subconv --config " + flat_path).code == 1);

  flat["subconv_expect"] = "non-essential";
  const auto flat2_path = write_config("flat2.json", flat);
  const auto flat2 = run_cli("subconv --config " + flat2_path);
  CHECK(flat2.code == 0);
  CHECK(flat2.out.find("\"c_max\": 65.0") != std::string::npos);

  nlohmann::json delta;
  delta["cone"] = to_json(ConeSeries::custom({1.0, 0.0, 0.0, 0.0}));
  delta["cap"] = 0;
  const auto delta_path = write_config("delta.json", delta);
  CHECK(run_cli("subconv --config " + delta_path).code == 0);
}

TEST_CASE("malformed configuration fails with the usage exit code") {
  const auto bad = scratch_dir() / "broken.json";
  {
    std::ofstream h(bad);
    h << "{\"dims\": 2,";
  }
  const auto r = run_cli("subconv --config " + bad.string());
  CHECK(r.code == 2);
  CHECK(r.err.find("error:") != std::string::npos);

  nlohmann::json wrong;
  wrong["subconv_expect"] = "sometimes";
  const auto wrong_path = write_config("wrong_expect.json", wrong);
  CHECK(run_cli("subconv --config " + wrong_path).code == 2);

  CHECK(run_cli("verify --config " + (scratch_dir() / "absent.json").string()).code == 2);
}

TEST_CASE("verify runs a deterministic suite and writes stable reports") {
  nlohmann::json cfg;
  cfg["dims"] = 2;
  cfg["cap"] = 6;
  cfg["suite"] = "ccr";
  const auto cfg_path = write_config("ccr.json", cfg);

  const auto out1 = (scratch_dir() / "rep1").string();
  const auto out2 = (scratch_dir() / "rep2").string();
  const auto first = run_cli("verify --config " + cfg_path + " --out " + out1);
  CHECK(first.code == 0);
  CHECK(first.out.find("ccr") != std::string::npos);

  const auto csv1 = fs::path(out1) / "ccr.csv";
  REQUIRE(fs::exists(csv1));
  const auto body = slurp(csv1);
  CHECK(body.rfind("quantity,analytic,estimate,std_error,M,seed,pass", 0) == 0);
  CHECK(body.find("ccr.defect") != std::string::npos);
  CHECK(body.find(",1\n") != std::string::npos);  // at least one passing row

  const auto summary1 = fs::path(out1) / "summary.json";
  REQUIRE(fs::exists(summary1));
  const auto parsed = nlohmann::json::parse(slurp(summary1));
  CHECK(parsed.at("all_pass").get<bool>());

  // Byte-identical on a second run: everything in this suite is seeded.
  const auto second = run_cli("verify --config " + cfg_path + " --out " + out2);
  CHECK(second.code == 0);
  CHECK(slurp(csv1) == slurp(fs::path(out2) / "ccr.csv"));
  CHECK(slurp(summary1) == slurp(fs::path(out2) / "summary.json"));

  CHECK(run_cli("verify --config " + cfg_path + " --suite nonsense").code == 2);
}

TEST_CASE("verify reports statistical failure through the exit code") {
  nlohmann::json cfg;
  cfg["dims"] = 2;
  cfg["suite"] = "moments";
  cfg["mc_samples"] = 20000;
  cfg["seeds"] = {1};
  cfg["sigma_band"] = 1e-6;  // no estimator clears a band this tight
  const auto cfg_path = write_config("tight.json", cfg);
  const auto r = run_cli("verify --config " + cfg_path + " --out " +
                         (scratch_dir() / "tight_rep").string());
  CHECK(r.code == 1);
}

TEST_CASE("eval prints the value with its kernel-side bound") {
  const auto ctx = SpaceContext::make(Spectrum({0.8, 0.5}), ConeSeries::tau_p(1.0, 0.5, 8), 2, 8);
  const auto f = FockElement::from_terms(ctx, {{MultiIndex({2, 1}), cd(0.5, 0.0)},
                                               {MultiIndex(), cd(2.0, 0.0)}});
  const auto elem = (scratch_dir() / "elem.json").string();
  save_json_file(to_json(f), elem);

  const HVector inside{{cd(0.2, 0.1), cd(-0.15, 0.05)}};
  const auto pt = (scratch_dir() / "pt.json").string();
  save_json_file(to_json(inside), pt);

  const auto r = run_cli("eval --element " + elem + " --point " + pt);
  CHECK(r.code == 0);
  const auto out = nlohmann::json::parse(r.out);
  const cd got(out.at("value").at("re").get<double>(), out.at("value").at("im").get<double>());
  const cd want = evaluate(f, inside);
  CHECK(std::abs(got - want) <= 1e-15 * (1.0 + std::abs(want)));
  CHECK(std::abs(got) <= out.at("bound").get<double>() * (1.0 + 1e-12));

  const HVector outside{{cd(1.0, 0.2), cd(0.0, 0.0)}};
  const auto far = (scratch_dir() / "far.json").string();
  save_json_file(to_json(outside), far);
  const auto rejected = run_cli("eval --element " + elem + " --point " + far);
  CHECK(rejected.code == 2);
  CHECK(rejected.err.find("error:") != std::string::npos);

  CHECK(run_cli("eval --element " + elem).code == 2);  // missing --point
}
