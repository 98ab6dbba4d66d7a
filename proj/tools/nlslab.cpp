// nlslab: run experiment configs, emit plot scripts, self-documentation.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "nlslab/experiments.hpp"
#include "nlslab/parallel.hpp"

namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int cmd_run(const std::string& config_path, const std::string& out_flag, std::size_t workers) {
  if (workers > 0) nlslab::set_worker_count(workers);

  nlslab::json config;
  try {
    config = nlslab::parse_config(read_file(config_path));
  } catch (const nlslab::ConfigParseError& e) {
    std::cerr << config_path << ": parse error at " << e.what() << "\n";
    return 2;
  }

  fs::path out = "nlslab-out";
  if (!out_flag.empty()) {
    out = out_flag;
  } else if (config.is_object() && config.contains("output")) {
    if (!config["output"].is_string()) throw std::invalid_argument("output must be a string path");
    out = config["output"].get<std::string>();
  }

  auto report = nlslab::run_experiment(config);
  const auto path = nlslab::write_report(report, out);
  std::cout << path.string() << "\n";
  return 0;
}

int cmd_plots(const std::string& report_path) {
  if (!fs::exists(report_path)) {
    std::cerr << "error: missing report " << report_path << "\n";
    return 1;
  }
  auto result = nlslab::emit_plots(report_path);
  for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
  for (const auto& s : result.scripts) std::cout << s.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical laboratory for the quadratic NLS on the torus"};
  app.set_version_flag("--version", nlslab::kToolVersion);
  app.require_subcommand(1);

  std::string config_path, out_dir;
  std::size_t workers = 0;
  auto* run = app.add_subcommand("run", "Run an experiment config and write report.json plus CSVs");
  run->add_option("config", config_path, "Experiment config (JSON)")->required();
  run->add_option("--out", out_dir, "Output directory (overrides the config's \"output\")");
  run->add_option("--workers", workers, "Worker threads (default: NLSLAB_WORKERS, else 1)")
      ->check(CLI::PositiveNumber);

  std::string report_path;
  auto* plots = app.add_subcommand("plots", "Write gnuplot scripts next to a report");
  plots->add_option("report", report_path, "report.json")->required();

  std::string kind;
  auto* desc = app.add_subcommand("describe", "Describe an experiment kind");
  desc->add_option("kind", kind, "Experiment kind")->required();

  auto* list = app.add_subcommand("list", "List experiment kinds");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(config_path, out_dir, workers);
    if (*plots) return cmd_plots(report_path);
    if (*desc) {
      std::cout << nlslab::describe(kind) << "\n";
      return 0;
    }
    if (*list) {
      for (const auto& k : nlslab::list_experiments()) std::cout << k << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
