// sptvqe command-line runner.
//
//   sptvqe run <config.json> [--jobs N] [--output DIR] [--timing]
//   sptvqe describe <experiment>
//
// Exit codes: 0 success, 2 config error, 3 compute error, 4 I/O error.
// The output directory resolves as --output, then config.output_dir, then
// $SPTVQE_OUTPUT_DIR, then "results".

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "sptvqe/errors.hpp"
#include "sptvqe/experiments.hpp"

namespace fs = std::filesystem;
namespace ex = sptvqe::experiments;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitCompute = 3;
constexpr int kExitIo = 4;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << content;
  if (!out.flush()) throw IoError("failed writing " + path.string());
}

ex::ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw sptvqe::ConfigError("cannot read config file " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw sptvqe::ConfigError(std::string("malformed JSON: ") + e.what());
  }
  return ex::parse_config(j);
}

fs::path resolve_output(const std::string& flag, const ex::ExperimentConfig& c) {
  if (!flag.empty()) return flag;
  if (!c.output_dir.empty()) return c.output_dir;
  if (const char* env = std::getenv("SPTVQE_OUTPUT_DIR"); env && *env) return env;
  return "results";
}

void write_outputs(const fs::path& dir, const ex::ExperimentConfig& config,
                   const ex::ExperimentOutput& output) {
  std::error_code ec;
  fs::create_directories(dir / "traces", ec);
  if (ec) throw IoError("cannot create " + (dir / "traces").string() + ": " + ec.message());

  std::string csv = ex::csv_header() + "\n";
  for (const auto& r : output.rows) csv += ex::csv_line(r) + "\n";
  write_file(dir / "results.csv", csv);

  nlohmann::ordered_json doc;
  doc["config"] = ex::to_json(config);
  doc["rows"] = ex::rows_json(output.rows);
  write_file(dir / "results.json", doc.dump(2) + "\n");

  for (const auto& t : output.traces) {
    write_file(dir / "traces" / (t.name + ".csv"), ex::trace_csv(t.trace));
  }
}

int cmd_run(const std::string& config_path, int jobs, const std::string& output_flag, bool timing) {
  ex::ExperimentConfig config;
  try {
    config = load_config(config_path);
  } catch (const sptvqe::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
  const fs::path dir = resolve_output(output_flag, config);
  ex::ExperimentOutput output;
  try {
    output = ex::run_experiment(config, {jobs, timing});
  } catch (const std::exception& e) {
    std::cerr << "compute error: " << e.what() << "\n";
    return kExitCompute;
  }
  try {
    write_outputs(dir, config, output);
  } catch (const std::exception& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kExitIo;
  }
  std::cout << output.rows.size() << " rows, " << output.traces.size() << " traces -> "
            << dir.string() << "\n";
  return 0;
}

int cmd_describe(const std::string& name) {
  try {
    std::cout << ex::describe(ex::parse_experiment(name));
  } catch (const sptvqe::ConfigError& e) {
    std::cerr << e.what() << "\nknown experiments:";
    for (auto id : ex::all_experiments()) std::cerr << " " << ex::to_string(id);
    std::cerr << "\n";
    return kExitConfig;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Statevector VQE for the alternating Heisenberg chain"};
  app.require_subcommand(1);

  std::string config_path;
  std::string output_dir;
  int jobs = 1;
  bool timing = false;
  auto* run = app.add_subcommand("run", "Run the experiment described by a JSON config");
  run->add_option("config", config_path, "Path to the JSON config")->required();
  run->add_option("--jobs,-j", jobs, "Sweep points evaluated concurrently")
      ->check(CLI::Range(1, 256));
  run->add_option("--output,-o", output_dir, "Output directory");
  run->add_flag("--timing", timing, "Fill the seconds column (breaks byte-identical reruns)");

  std::string experiment;
  auto* desc = app.add_subcommand("describe", "Print what an experiment computes");
  desc->add_option("experiment", experiment, "Experiment id, e.g. VQE_SWEEP")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }
  if (*run) return cmd_run(config_path, jobs, output_dir, timing);
  return cmd_describe(experiment);
}
