#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "opindyn/model.hpp"

namespace opindyn {

enum class Measure { exit_probability, consensus_time, equilibrium };
enum class SweepAxis { n, alpha, k, gamma0, gamma1 };

std::string_view to_string(Measure m);
std::string_view to_string(SweepAxis a);
Measure parse_measure(std::string_view name);
SweepAxis parse_axis(std::string_view name);

/// A declarative sweep: base parameters, one swept axis, what to measure.
///
/// JSON layout (all keys optional except model, measure and sweep):
///   { "preset": "...", "description": "...", "model": "voter", "measure": "exit_probability",
///     "params": { "n": 100, "q0": 1, "q1": 0.5, "alpha": 0.2, "k": 1,
///                 "gamma0": 0.2, "gamma1": 0.2, "x0": 0.5 },
///     "sweep": { "axis": "n", "values": [10, 20, 40] },
///     "runs": 10000, "seed": 1, "out": "table.csv" }
struct ExperimentConfig {
  std::string preset;
  std::string description;
  ModelKind model = ModelKind::voter;
  Measure measure = Measure::exit_probability;

  int n = 100;
  double q0 = 1.0;
  double q1 = 1.0;
  double alpha = 0.5;
  int k = 1;
  double gamma0 = 0.0;
  double gamma1 = 0.0;
  double x0 = 0.5;

  SweepAxis axis = SweepAxis::n;
  std::vector<double> values;
  std::size_t runs = 1000;
  std::uint64_t seed = 1;
  std::string out;

  nlohmann::ordered_json to_json() const;
  static ExperimentConfig from_json(const nlohmann::json& j);

  /// Parameters of one sweep cell.
  ModelParams params_at(double axis_value) const;
  /// Throws ValidationError describing the first problem found.
  void validate() const;
};

/// Stable 64-bit FNV-1a hash of the canonical JSON form, as 16 hex digits.
std::string config_hash(const ExperimentConfig& config);

/// Named parameter sets reproducing the figures of the biased-agent study.
std::vector<std::string> preset_names();
ExperimentConfig preset(std::string_view name);

/// Columns of doubles plus a provenance block; NaN cells print empty.
struct ResultTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  nlohmann::ordered_json provenance;

  /// CSV with a leading '#'-prefixed single-line JSON provenance header.
  std::string to_csv() const;
};

/// Provenance block shared by every emitted table.
nlohmann::ordered_json make_provenance(std::string_view command, const nlohmann::ordered_json& config,
                                       std::uint64_t seed);

/// Reads the config embedded in the provenance line of a CSV produced by to_csv().
ExperimentConfig config_from_csv(std::string_view csv);

/// One row per sweep cell; deterministic in the config (including its seed).
ResultTable run_experiment(const ExperimentConfig& config, int threads = 0);

}  // namespace opindyn
