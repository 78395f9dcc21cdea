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
 * Dense statevector of an L-qubit register and the gates used by the walk
 * and chain circuits.
 *
 * Basis convention: qubit q is bit q of the basis index (qubit 0 is the
 * least significant bit), and bit value 1 means "site q occupied".
 * Bitstrings are written with qubit 0 as the leftmost character, so the
 * text of a basis state reads site by site.
 */
#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace fcqw {

using Complex = std::complex<double>;

/// Largest register the dense simulator accepts.
inline constexpr std::size_t kMaxQubits = 24;

enum class GateKind { H, HY, RZ, CNOT, SWAP };

std::string_view to_string(GateKind kind);
std::size_t arity(GateKind kind);

/**
 * One gate of a circuit. For CNOT, qubits[0] is the control and qubits[1]
 * the target. theta is set exactly for RZ.
 *
 * HY is the y-basis Hadamard (1/sqrt2)[[1,-i],[i,-1]]: it is an involution
 * and maps Z to Y under conjugation.
 */
struct GateInstruction {
  GateKind kind = GateKind::H;
  std::array<std::size_t, 2> qubits{};
  std::optional<double> theta;

  static GateInstruction h(std::size_t q) { return {GateKind::H, {q, 0}, {}}; }
  static GateInstruction hy(std::size_t q) { return {GateKind::HY, {q, 0}, {}}; }
  static GateInstruction rz(std::size_t q, double angle) {
    return {GateKind::RZ, {q, 0}, angle};
  }
  static GateInstruction cnot(std::size_t control, std::size_t target) {
    return {GateKind::CNOT, {control, target}, {}};
  }
  static GateInstruction swap(std::size_t a, std::size_t b) {
    return {GateKind::SWAP, {a, b}, {}};
  }

  std::span<const std::size_t> targets() const {
    return {qubits.data(), arity(kind)};
  }

  bool operator==(const GateInstruction& other) const;
};

/// Throws IndexError for a qubit >= num_qubits, ArgumentError for repeated
/// targets or a theta that is missing (RZ) or present (other kinds).
void validate(const GateInstruction& gate, std::size_t num_qubits);

/// Dense matrix of the gate on its own targets: 2x2, or 4x4 with local
/// index bit(qubits[0]) + 2*bit(qubits[1]).
Eigen::MatrixXcd gate_matrix(const GateInstruction& gate);

enum class Pauli { I, X, Y, Z };

class StateVector {
 public:
  /// |0...0> on num_qubits qubits, 1 <= num_qubits <= kMaxQubits.
  explicit StateVector(std::size_t num_qubits);

  static StateVector basis(std::size_t num_qubits, std::uint64_t index);
  /// Takes ownership of 2^num_qubits amplitudes of unit norm (1e-12).
  static StateVector from_amplitudes(std::size_t num_qubits,
                                     std::vector<Complex> amplitudes);

  std::size_t num_qubits() const noexcept { return num_qubits_; }
  std::size_t dim() const noexcept { return amplitudes_.size(); }
  std::span<const Complex> amplitudes() const noexcept { return amplitudes_; }
  Complex amplitude(std::uint64_t index) const;

  double norm_squared() const;
  std::vector<double> probabilities() const;

  void apply(const GateInstruction& gate);
  void apply_pauli(std::size_t qubit, Pauli p);

 private:
  std::size_t num_qubits_;
  std::vector<Complex> amplitudes_;
};

StateVector apply_gate(StateVector state, const GateInstruction& gate);

/// CNOT(i,j), CNOT(j,i), CNOT(i,j): a SWAP of i and j.
std::array<GateInstruction, 3> swap_as_cnots(std::size_t i, std::size_t j);

/// Basis index of the state with only `site` occupied.
inline std::uint64_t one_hot_index(std::size_t site) {
  return std::uint64_t{1} << site;
}

StateVector one_hot_state(std::size_t num_qubits, std::size_t site);

/// i.i.d. basis-index draws from |amplitude|^2, reproducible per seed.
std::vector<std::uint64_t> sample_bitstrings(const StateVector& state,
                                             std::size_t shots,
                                             std::uint64_t seed);

/// Text of a basis index: character q is the occupation of qubit q.
std::string format_bitstring(std::uint64_t bits, std::size_t num_qubits);
std::uint64_t parse_bitstring(std::string_view text);

}  // namespace fcqw
