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
 * Monte-Carlo emulation of a noisy device with stochastic Pauli errors.
 *
 * Each shot evolves its own trajectory: after every gate, with probability
 * p_cnot (CNOT) or p_1q (single-qubit gates), a uniformly chosen
 * non-identity Pauli hits the gate's qubits. The final state is sampled
 * once and every measured bit flips independently with p_readout. SWAPs
 * are lowered to three CNOTs first, so each physical CNOT carries its own
 * error.
 */
#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "fcqw/circuit.hpp"
#include "fcqw/statevec.hpp"

namespace fcqw {

struct NoiseSpec {
  double p_cnot = 7e-3;
  double p_1q = 3e-4;
  double p_readout = 1e-2;
  std::uint64_t seed = 0;

  static NoiseSpec noiseless(std::uint64_t seed = 0) { return {0.0, 0.0, 0.0, seed}; }

  /// Throws ArgumentError when a probability lies outside [0, 1].
  void validate() const;
  bool is_noiseless() const { return p_cnot == 0.0 && p_1q == 0.0 && p_readout == 0.0; }
};

struct ShotResult {
  std::map<std::string, std::size_t> counts;  ///< bitstring -> occurrences
  std::size_t shots = 0;

  std::size_t count(const std::string& bits) const;

  /// {"shots": N, "counts": {"bitstring": count, ...}}, keys sorted.
  std::string to_json() const;
  /// Inverse of to_json; throws FormatError on a malformed document or
  /// counts that do not sum to shots.
  static ShotResult from_json(const std::string& text);
};

/**
 * Runs `shots` noisy trajectories from `initial`. With no gate noise the
 * state is evolved once and sampled with sample_bitstrings(state, shots,
 * seed). Otherwise shot s draws from the stream stream_seed(seed, s), so
 * counts do not depend on the worker count.
 */
ShotResult run_noisy(const Circuit& circuit, const StateVector& initial,
                     const NoiseSpec& spec, std::size_t shots);

enum class SweepAxis { steps_at_fixed_L, size_with_t_equals_L };

struct SweepOptions {
  std::size_t L = 8;  ///< lattice size for steps_at_fixed_L
  std::size_t shots = 2000;
};

struct SweepPoint {
  double x = 0.0;
  double peak = 0.0;      ///< post-processed probability at the ballistic site
  double raw_peak = 0.0;  ///< fraction of shots that read the ideal one-hot string
  double sigma = 0.0;     ///< binomial standard error of `peak`
};

/**
 * Clean chiral walk (W = 0) from site 0 under `spec`, one point per x in
 * `range`: x is the step count at fixed L, or the size L with t = L.
 * Point x uses the noise seed stream_seed(spec.seed, x). Sorted by x.
 */
std::vector<SweepPoint> amplitude_decay_sweep(SweepAxis axis, const NoiseSpec& spec,
                                              std::span<const std::size_t> range,
                                              const SweepOptions& options = {});

}  // namespace fcqw
