// Copyright 2026 The FCQW Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file
 * Config-driven experiment runner. One JSON document describes one
 * experiment; run_experiment writes a result directory with
 *
 *   manifest.json  resolved config, its git blob hash, per-file hashes
 *   sites.csv      per-step site distributions
 *   summary.csv    IPR and peak amplitude per step and W
 *   qasm/          the circuits that were simulated
 *   checks.json    built-in pass/fail checks for the experiment kind
 *
 * plus kind-specific tables (spectra, level statistics, sweeps).
 */
#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fcqw/circuit.hpp"
#include "fcqw/floquet.hpp"
#include "fcqw/noise.hpp"

namespace fcqw {

enum class ExperimentKind {
  chiral_propagation,
  chiral_robustness,
  nonchiral_localization,
  disorder_spectra,
  amplitude_scaling,
};

std::string_view to_string(ExperimentKind kind);

enum class ProfileKind { box, uniform, custom };

/// Sites are 1-based in configs and reports; start_site 1 is qubit 0.
struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::chiral_propagation;
  std::size_t L = 8;
  std::vector<std::size_t> steps;  ///< walk kinds
  std::vector<double> times;       ///< nonchiral_localization
  std::vector<double> W;
  ProfileKind profile = ProfileKind::box;
  std::vector<double> custom_u;
  std::size_t barrier_width = 2;
  std::size_t start_site = 1;
  std::size_t trotter_n = 2;
  double J = 1.0;
  bool periodic = false;
  TrotterOrdering ordering = TrotterOrdering::pairwise;
  std::optional<NoiseSpec> noise;
  std::size_t shots = 7000;
  std::uint64_t seed = 0;
  std::size_t realizations = 100;
  DisorderDistribution distribution = DisorderDistribution::uniform_symmetric;
  double dt = 1.0;  ///< non-chiral Floquet period for disorder_spectra
  SweepAxis axis = SweepAxis::steps_at_fixed_L;
  std::vector<std::size_t> range;
  std::filesystem::path output_dir;
};

/// Parses and validates a config document, filling kind-specific defaults.
/// Unknown keys and invalid values raise one ValidationError naming all of
/// them; malformed JSON raises FormatError.
ExperimentConfig parse_config(std::string_view json_text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Canonical JSON of the resolved config (sorted keys, no whitespace).
std::string resolved_config_json(const ExperimentConfig& cfg);

/// Git blob object id: SHA-1 of "blob <size>\0" + content, lowercase hex.
std::string git_blob_hash(std::string_view content);

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct RunSummary {
  std::filesystem::path output_dir;
  std::vector<CheckResult> checks;

  bool all_pass() const;
};

/// Runs the experiment and writes its result directory. Throws IoError
/// if output_dir cannot be created or written.
RunSummary run_experiment(const ExperimentConfig& cfg);

/// Writes only the QASM files the experiment would simulate; returns paths.
std::vector<std::filesystem::path> emit_qasm_files(const ExperimentConfig& cfg);

/// Re-reads checks.json and re-hashes the files listed in manifest.json.
/// A hash mismatch is reported as a failed check named "manifest:<file>".
RunSummary check_result_dir(const std::filesystem::path& dir);

/**
 * Reader for the subset emit_qasm3 produces: OPENQASM 3 header, optional
 * stdgates include, one qubit register, and h / rz(angle) / cx / swap
 * statements. `sdg q; h q; s q;` on one qubit reads back as HY. Comments
 * are ignored except a leading `// circuit: <label>`. Anything else
 * raises ParseError with its line number.
 */
Circuit parse_qasm_minimal(std::string_view text);

}  // namespace fcqw
