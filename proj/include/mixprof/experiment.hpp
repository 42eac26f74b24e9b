#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mixprof/attacks.hpp"
#include "mixprof/metrics.hpp"
#include "mixprof/model.hpp"

namespace mixprof {

enum class SweepVariable { Friends, Rounds, Threshold, Users, Skew };

std::string to_string(SweepVariable v);
std::optional<SweepVariable> sweep_from_string(std::string_view name);

/// A full experiment: one swept parameter, a list of attacks, repeated
/// simulations. Every (sweep value, repetition) cell draws from its own
/// derived stream (stream_id = value_index * repetitions + repetition), so
/// cells are independent and individually reproducible.
struct ExperimentSpec {
  MixConfig base;  // base.seed is the experiment base seed
  SweepVariable sweep = SweepVariable::Friends;
  std::vector<double> values;
  std::vector<AttackKind> attacks;
  int repetitions = 1;
  std::string output;  // path prefix; writes <output>.csv and <output>.json

  /// Ground truth: "ring" or a CSV profile matrix path.
  std::string profile = "ring";
  int friends = 0;  // ring width when the sweep is not over friends
  bool self_send = true;
  double frequency_skew = 1.0;  // geometric decay; 1 = uniform
  int jobs = 1;
};

/// Parses the key = value spec format (schema mixprof-experiment/1).
/// Unknown keys and malformed values are reported with their line number.
ExperimentSpec parse_experiment_spec(std::istream& in, const std::string& name);
ExperimentSpec parse_experiment_spec(const std::filesystem::path& path);

struct RepetitionRow {
  AttackKind attack{};
  double sweep_value = 0.0;
  int repetition = 0;
  std::uint64_t stream_id = 0;
  double average_mse = 0.0;
  int n_defined = 0;
};

/// Aggregate for one (attack, sweep value) cell. theory_avg_mse is filled
/// for the attacks with an asymptotic predictor (sda2, lsda); it depends on
/// ground truth only, never on seeds.
struct CellSummary {
  AttackKind attack{};
  double sweep_value = 0.0;
  std::optional<BoxStats> stats;  // absent when every repetition failed
  std::optional<double> theory_avg_mse;
  int n_repetitions_ok = 0;
};

struct ExperimentResult {
  std::vector<RepetitionRow> rows;
  std::vector<CellSummary> cells;
  /// Per-repetition failures (lsda singularity, all-undefined estimates),
  /// recorded instead of aborting the sweep.
  std::vector<std::string> failures;
  std::filesystem::path csv_path;
  std::filesystem::path json_path;
};

/// Runs the sweep and writes <output>.csv (one row per attack/value/
/// repetition) and <output>.json (spec echo, box stats, theory overlays,
/// failures). Output is a pure function of the spec; --jobs only changes
/// scheduling, never results or file bytes.
ExperimentResult run_experiment(const ExperimentSpec& spec);

}  // namespace mixprof
