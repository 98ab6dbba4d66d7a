#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>

#include "nlslab/experiments.hpp"

using namespace nlslab;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "nlslab_lab_cli" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream is(path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

void spit(const fs::path& path, const std::string& text) { std::ofstream(path) << text; }

// Exit status of the CLI with stdout and stderr captured to files in dir.
int cli(const std::string& args, const fs::path& dir) {
  const std::string cmd = std::string(NLSLAB_CLI) + " " + args + " >" + (dir / "stdout.txt").string() + " 2>" +
                          (dir / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string validation_error(const json& config) {
  try {
    validate_config(config);
  } catch (const std::invalid_argument& e) {
    return e.what();
  }
  return "";
}

const char* kSmoothing = R"({"version": 1, "kind": "picard-smoothing", "seed": 3,
  "params": {"s0": -0.45, "p": 2, "s": 0, "b": 0.55, "N_list": [4, 8, 16]}})";

}  // namespace

TEST_SUITE("lab_cli") {
  TEST_CASE("list and describe") {
    const auto kinds = list_experiments();
    CHECK(kinds == std::vector<std::string>{"solve", "picard-smoothing", "supsum", "bilinear", "region", "scaling"});
    for (const auto& k : kinds) CHECK_FALSE(describe(k).empty());
    CHECK_THROWS_AS(describe("nosuch"), std::invalid_argument);
  }

  TEST_CASE("parse errors carry line and column") {
    try {
      parse_config("{\n  \"version\": 1,\n  \"kind\": ]\n}");
      FAIL("expected a parse error");
    } catch (const ConfigParseError& e) {
      CHECK(e.line == 3);
      CHECK(e.column == 11);
      CHECK(std::string(e.what()).find("line 3, column 11") != std::string::npos);
    }
  }

  TEST_CASE("validation names the violated precondition") {
    CHECK(validation_error(json::parse(R"({"kind": "region"})")) == "missing key \"version\"");
    CHECK(validation_error(json::parse(R"({"version": 2, "kind": "region"})")).find("version") != std::string::npos);
    CHECK(validation_error(json::parse(R"({"version": 1})")) == "missing key \"kind\"");
    CHECK(validation_error(json::parse(R"({"version": 1, "kind": "nosuch"})")) == "unknown experiment kind \"nosuch\"");
    CHECK(validation_error(json::parse(R"({"version": 1, "kind": "region", "seed": 0.5, "params": {"s0": 0, "p": 2}})")) ==
          "seed must be an integer");
    CHECK(validation_error(json::parse(
              R"({"version": 1, "kind": "picard-smoothing", "params": {"s0": -0.45, "p": 2, "s": 0.2, "N_list": [8]}})")) ==
          "picard-smoothing: s < -1 + 2/p violated");
    CHECK(validation_error(json::parse(R"({"version": 1, "kind": "supsum", "params": {"gamma": 0.5}})")) ==
          "supsum: gamma > 1/2 violated");
    CHECK(validation_error(json::parse(R"({"version": 1, "kind": "scaling", "params": {"s0": 0, "p": 2, "lambdas": [1, 2, 2]}})")) ==
          "scaling: at least 4 distinct lambdas required");
    CHECK(validation_error(json::parse(R"({"version": 1, "kind": "solve", "params": {"T": 1}})")) ==
          "solve: missing parameter \"data\"");
    CHECK(validation_error(json::parse(
              R"({"version": 1, "kind": "solve", "params": {"T": 1, "data": {"modes": [[1, 1e-3, 0]]}},
                  "discretization": {"T_max": 3}})")) == "solve: T_max = 2T violated");
    CHECK(validation_error(json::parse(kSmoothing)).empty());
  }

  TEST_CASE("region experiment") {
    const auto r = run_experiment(json::parse(R"({"version": 1, "kind": "region", "params": {"s0": 0, "p": 2}})"));
    const json& reg = r.document.at("results").at("regions")[0];
    CHECK(reg.at("admissible") == true);
    CHECK(reg.at("s_interval")[0].get<double>() == doctest::Approx(-2.0 / 3.0).epsilon(1e-12));
    CHECK(reg.at("s_interval")[1].get<double>() == 0.0);
    CHECK(r.document.at("schema") == "nlslab.region.v1");
  }

  TEST_CASE("solve experiment converges on small data") {
    const auto r = run_experiment(json::parse(
        R"({"version": 1, "kind": "solve", "params": {"T": 1, "data": {"modes": [[1, 1e-3, 0]]}},
            "discretization": {"N": 4, "M": 257}})"));
    CHECK(r.document.at("verdicts").at("converged") == true);
    CHECK(r.document.at("results").at("residual_history").is_array());
    REQUIRE(r.tables.size() == 1);
    CHECK(r.tables[0].rows.size() == r.document.at("results").at("residual_history").size());
  }

  TEST_CASE("reports are deterministic and echo the config") {
    const json config = json::parse(kSmoothing);
    const auto a = run_experiment(config);
    const auto b = run_experiment(config);
    CHECK(numeric_content(a.document).dump() == numeric_content(b.document).dump());
    CHECK(a.document.contains("timing"));
    CHECK_FALSE(numeric_content(a.document).contains("timing"));
    CHECK(a.document.at("config") == config);
    CHECK(a.document.at("input_hash") == fnv1a_hex(config.dump()));

    const auto dir = scratch("determinism");
    const auto path = write_report(a, dir / "api");
    const json written = json::parse(slurp(path));
    CHECK(written.at("config") == config);
    CHECK(numeric_content(written) == numeric_content(a.document));
    const std::string csv = slurp(dir / "api" / "ratios.csv");
    CHECK(csv.rfind("# schema: nlslab.picard-smoothing.v1\nN,ratio,", 0) == 0);

    spit(dir / "config.json", kSmoothing);
    REQUIRE(cli("run " + (dir / "config.json").string() + " --out " + (dir / "one").string(), dir) == 0);
    REQUIRE(cli("run " + (dir / "config.json").string() + " --out " + (dir / "two").string() + " --workers 1", dir) == 0);
    const json one = json::parse(slurp(dir / "one" / "report.json"));
    const json two = json::parse(slurp(dir / "two" / "report.json"));
    CHECK(numeric_content(one).dump() == numeric_content(two).dump());
    CHECK(numeric_content(one).dump() == numeric_content(a.document).dump());
    CHECK(slurp(dir / "one" / "ratios.csv") == slurp(dir / "two" / "ratios.csv"));
  }

  TEST_CASE("plot scripts") {
    const auto dir = scratch("plots");
    const auto smoothing = write_report(run_experiment(json::parse(kSmoothing)), dir / "smoothing");
    const auto p1 = emit_plots(smoothing);
    REQUIRE(p1.scripts.size() == 1);
    CHECK(p1.warnings.empty());
    const std::string gp = slurp(p1.scripts[0]);
    CHECK(gp.find("plot 'ratios.csv' skip 2 using 1:2") != std::string::npos);
    CHECK(gp.find("contrast_ratio") != std::string::npos);

    const auto quad = write_report(
        run_experiment(json::parse(R"({"version": 1, "kind": "supsum",
          "params": {"lemma": "quadratic", "gamma": 1, "y_grid": [0, 0.5], "z_grid": [-1, 0, 1], "truncation": 256}})")),
        dir / "quadratic");
    const auto p2 = emit_plots(quad);
    REQUIRE(p2.scripts.size() == 1);
    CHECK(slurp(p2.scripts[0]).find("splot") != std::string::npos);

    // region tables carry no figure
    const auto region = write_report(
        run_experiment(json::parse(R"({"version": 1, "kind": "region", "params": {"s0": 0, "p": 2}})")), dir / "region");
    const auto p3 = emit_plots(region);
    CHECK(p3.scripts.empty());
    CHECK(p3.warnings.size() == 1);
  }

  TEST_CASE("CLI exit codes") {
    const auto dir = scratch("exit");
    CHECK(cli("list", dir) == 0);
    CHECK(slurp(dir / "stdout.txt").find("picard-smoothing") != std::string::npos);
    CHECK(cli("describe nosuch", dir) != 0);

    spit(dir / "broken.json", "{\n  \"version\": 1,\n  \"kind\": ]\n}");
    CHECK(cli("run " + (dir / "broken.json").string() + " --out " + (dir / "x").string(), dir) != 0);
    CHECK(slurp(dir / "stderr.txt").find("line 3, column 11") != std::string::npos);

    spit(dir / "invalid.json", R"({"version": 1, "kind": "supsum", "params": {"gamma": 0.4}})");
    CHECK(cli("run " + (dir / "invalid.json").string() + " --out " + (dir / "x").string(), dir) != 0);
    CHECK(slurp(dir / "stderr.txt").find("gamma > 1/2") != std::string::npos);

    // a regular file where the output directory should be
    spit(dir / "region.json", R"({"version": 1, "kind": "region", "params": {"s0": 0, "p": 2}})");
    spit(dir / "blocker", "");
    CHECK(cli("run " + (dir / "region.json").string() + " --out " + (dir / "blocker" / "out").string(), dir) != 0);

    // a negative finding is a result, not an error
    spit(dir / "scaling.json",
         R"({"version": 1, "kind": "scaling", "params": {"s0": -0.4, "p": 3, "lambdas": [1, 2, 4, 8], "family": "random"},
             "discretization": {"N": 8}})");
    CHECK(cli("run " + (dir / "scaling.json").string() + " --out " + (dir / "s").string(), dir) == 0);
    CHECK(json::parse(slurp(dir / "s" / "report.json")).at("verdicts").at("slope_within_0.05") == false);

    CHECK(cli("plots " + (dir / "missing" / "report.json").string(), dir) != 0);
    CHECK(cli("run " + (dir / "region.json").string() + " --workers 0", dir) != 0);
  }
}
