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
 * Builders for the two circuit families: the Floquet chiral walk (onsite
 * RZ layer followed by a nearest-neighbour SWAP ladder) and the trotterized
 * XY chain, plus OpenQASM 3 emission.
 */
#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "fcqw/statevec.hpp"

namespace fcqw {

class Circuit {
 public:
  explicit Circuit(std::size_t num_qubits, std::string label = {});

  std::size_t num_qubits() const noexcept { return num_qubits_; }
  const std::vector<GateInstruction>& instructions() const noexcept {
    return instructions_;
  }
  const std::string& label() const noexcept { return label_; }
  std::size_t size() const noexcept { return instructions_.size(); }
  bool empty() const noexcept { return instructions_.empty(); }

  /// Validates the gate against num_qubits().
  Circuit& append(const GateInstruction& gate);
  Circuit& append(const Circuit& other);
  Circuit& set_label(std::string label);

  /// Gate sequences are equal; labels are not compared.
  bool operator==(const Circuit& other) const;

 private:
  std::size_t num_qubits_;
  std::vector<GateInstruction> instructions_;
  std::string label_;
};

/// Runs every instruction on `state` in order.
void run(const Circuit& circuit, StateVector& state);

/// Replaces each SWAP by its three-CNOT decomposition.
Circuit lower_swaps(const Circuit& circuit);

/// Occupation pattern u_i and strength W. The onsite layer rotates site i
/// by RZ(2 W u_i).
struct PotentialProfile {
  std::vector<double> u;
  double W = 0.0;

  std::size_t size() const noexcept { return u.size(); }

  static PotentialProfile uniform(std::size_t L, double W);
  static PotentialProfile zero(std::size_t L) { return {std::vector<double>(L, 0.0), 0.0}; }
  /// Square barrier on the `width` sites either side of `start` (periodic
  /// wrap). For L=8, start=0 this is u = (0,1,1,0,0,0,1,1).
  static PotentialProfile box(std::size_t L, std::size_t start, double W,
                              std::size_t width = 2);

  PotentialProfile scaled(double strength) const { return {u, strength}; }
};

enum class Chirality { right, left };

/// L-1 nearest-neighbour SWAPs composing to a one-site cyclic shift:
/// right moves site i to i+1 mod L, left moves it to i-1 mod L.
Circuit build_hopping_ladder(std::size_t L, Chirality chirality = Chirality::right);

Circuit build_onsite_layer(const PotentialProfile& profile);

/// One walk step: onsite layer, then the hopping ladder.
Circuit build_fcqw_step(std::size_t L, const PotentialProfile& profile,
                        Chirality chirality = Chirality::right);

/// `steps` consecutive walk steps.
Circuit build_fcqw(std::size_t L, const PotentialProfile& profile,
                   std::size_t steps, Chirality chirality = Chirality::right);

/**
 * Order of the hopping blocks inside one Trotter repetition.
 *  - pairwise: for each bond, the XX block then the YY block. XX and YY on
 *    one bond commute, so each bond contributes exp(iJdt(XX+YY)) and every
 *    repetition conserves particle number.
 *  - layered: every XX block, then every YY block. Blocks on adjacent bonds
 *    do not commute and the circuit leaks out of fixed particle number.
 */
enum class TrotterOrdering { pairwise, layered };

struct TrotterConfig {
  double J = 1.0;
  double t = 0.0;
  std::size_t n = 1;
  bool periodic = false;
  TrotterOrdering ordering = TrotterOrdering::pairwise;
};

/**
 * First-order Trotter circuit for
 *   H = sum_i -J (X_i X_{i+1} + Y_i Y_{i+1}) + W u_i Z_i
 * evolved by exp(-iHt). Per repetition (dt = t/n): the hopping blocks
 * H.H CNOT RZ(-2J dt) CNOT H.H and HY.HY CNOT RZ(-2J dt) CNOT HY.HY, then
 * RZ(2 W u_i dt) on every site. Z|1> = -|1>, so occupied sites sit at
 * -2 W u_i relative to empty ones, up to a global phase.
 */
Circuit build_xy_trotter(std::size_t L, const PotentialProfile& profile,
                         const TrotterConfig& cfg);

/**
 * OpenQASM 3 text: version line, stdgates include, one `qubit[L] q;`
 * register, one gate per line with h/rz/cx/swap. HY appears as its exact
 * decomposition `sdg; h; s;` preceded by a `// hy` marker comment.
 */
std::string emit_qasm3(const Circuit& circuit);

}  // namespace fcqw
