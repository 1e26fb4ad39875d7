#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "sptvqe/ansatz.hpp"
#include "sptvqe/emulator.hpp"
#include "sptvqe/optimizer.hpp"
#include "sptvqe/spectra.hpp"

namespace sptvqe::experiments {

enum class ExperimentId {
  EdSweep,
  VqeSweep,
  StringOrder,
  EdgeModes,
  EntSpectrum,
  DepthStudy,
  Expressibility,
  So4Compare,
  EmulatedRun,
};

std::string_view to_string(ExperimentId id);
/// Throws ConfigError for unknown names.
ExperimentId parse_experiment(std::string_view name);
const std::vector<ExperimentId>& all_experiments();

struct EmulatorConfig {
  NoiseModel noise{NoiseKind::Bitflip, 0.01};
  int shots = 8192;
  int reps = 10;
};

struct SweepConfig {
  std::vector<double> Jp;
  std::vector<int> D;
  std::vector<int> L;
};

struct EdConfig {
  int n_states = 8;
  std::vector<double> sectors{0.0, 1.0, -1.0, 2.0, -2.0};
};

struct ExperimentConfig {
  ExperimentId experiment = ExperimentId::EdSweep;
  HamiltonianSpec model{8, 1.0, 0.1, Boundary::Open};
  AnsatzSpec ansatz{8, InitKind::S, 1, Family::Eswap};
  OptimizerConfig optimizer;
  EmulatorConfig emulator;
  SweepConfig sweep;
  EdConfig ed;
  std::string output_dir;
  std::uint64_t seed = 1;
};

/// Strict parse: unknown keys, wrong types and out-of-range values throw
/// ConfigError. Missing keys take the documented defaults, and empty sweep
/// lists resolve to per-experiment defaults.
ExperimentConfig parse_config(const nlohmann::json& j);
/// Fully resolved configuration, the same shape parse_config accepts.
nlohmann::ordered_json to_json(const ExperimentConfig& c);

struct ResultRow {
  std::string experiment;
  int L = 0;
  std::optional<double> Jp;
  std::optional<int> D;
  std::string init;
  std::string metric;
  double value = 0.0;
  std::optional<double> std_error;
  std::optional<double> seconds;
};

struct NamedTrace {
  std::string name;
  OptimizationTrace trace;
};

struct ExperimentOutput {
  std::vector<ResultRow> rows;
  std::vector<NamedTrace> traces;
};

struct RunOptions {
  int jobs = 1;
  bool timing = false;
};

/// Runs every sweep point; rows come back in sweep order regardless of jobs.
ExperimentOutput run_experiment(const ExperimentConfig& config, const RunOptions& options = {});

/// Human-readable recipe of one experiment.
std::string describe(ExperimentId id);

/// Shortest round-trip decimal form of a double.
std::string format_number(double v);
std::string csv_header();
std::string csv_line(const ResultRow& row);
std::string trace_csv(const OptimizationTrace& trace);
nlohmann::ordered_json rows_json(const std::vector<ResultRow>& rows);

}  // namespace sptvqe::experiments
