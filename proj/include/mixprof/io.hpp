#pragma once

#include <filesystem>
#include <string>
#include <utility>

#include "mixprof/model.hpp"
#include "mixprof/theory.hpp"

namespace mixprof::io {

/// Canonical double formatting ("%.17g"): value-exact round trips and
/// byte-identical reruns.
std::string format_double(double value);

enum class Format { Csv, Json };
std::optional<Format> format_from_string(std::string_view name);

/// Trace files carry the observation pair plus the scenario header
/// (n_users, threshold, rounds, seed). CSV holds one round per row,
/// x counts then y counts; JSON stores column-major per-user arrays.
/// Integer counts round-trip bit-exactly through either format.
void save_trace(const std::filesystem::path& path, const MixConfig& config,
                const ObservationPair& obs, Format format);
std::pair<MixConfig, ObservationPair> load_trace(const std::filesystem::path& path,
                                                 Format format);

/// Plain real matrix (profiles, one recipient row per line).
void save_matrix_csv(const std::filesystem::path& path, const Matrix& m);
Matrix load_matrix_csv(const std::filesystem::path& path);

/// Estimates keep the attack name, seed, undefined users and (for lsda) the
/// condition number in the header. Undefined columns are NaN in CSV and
/// null in JSON.
void save_estimates(const std::filesystem::path& path, const EstimatedProfiles& est,
                    std::uint64_t seed, Format format);

void save_theory_report(const std::filesystem::path& path, const TheoryReport& report,
                        Format format);

}  // namespace mixprof::io
