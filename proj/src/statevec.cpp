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

#include "fcqw/statevec.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fcqw/errors.hpp"
#include "fcqw/random.hpp"

namespace fcqw {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr Complex kI{0.0, 1.0};

void check_qubit_count(std::size_t n) {
  if (n < 1 || n > kMaxQubits) {
    throw ArgumentError("qubit count " + std::to_string(n) + " outside [1, " +
                        std::to_string(kMaxQubits) + "]");
  }
}

}  // namespace

std::string_view to_string(GateKind kind) {
  switch (kind) {
    case GateKind::H: return "H";
    case GateKind::HY: return "HY";
    case GateKind::RZ: return "RZ";
    case GateKind::CNOT: return "CNOT";
    case GateKind::SWAP: return "SWAP";
  }
  return "?";
}

std::size_t arity(GateKind kind) {
  return (kind == GateKind::CNOT || kind == GateKind::SWAP) ? 2 : 1;
}

bool GateInstruction::operator==(const GateInstruction& other) const {
  if (kind != other.kind || theta != other.theta) return false;
  const auto a = targets();
  const auto b = other.targets();
  return std::equal(a.begin(), a.end(), b.begin(), b.end());
}

void validate(const GateInstruction& gate, std::size_t num_qubits) {
  for (std::size_t q : gate.targets()) {
    if (q >= num_qubits) {
      throw IndexError(std::string(to_string(gate.kind)) + " target qubit " +
                       std::to_string(q) + " out of range for " +
                       std::to_string(num_qubits) + " qubits");
    }
  }
  if (arity(gate.kind) == 2 && gate.qubits[0] == gate.qubits[1]) {
    throw ArgumentError(std::string(to_string(gate.kind)) +
                        " targets must be distinct");
  }
  const bool wants_theta = gate.kind == GateKind::RZ;
  if (wants_theta && !gate.theta) throw ArgumentError("RZ requires theta");
  if (!wants_theta && gate.theta) {
    throw ArgumentError(std::string(to_string(gate.kind)) +
                        " takes no angle");
  }
  if (gate.theta && !std::isfinite(*gate.theta)) {
    throw ArgumentError("RZ angle must be finite");
  }
}

Eigen::MatrixXcd gate_matrix(const GateInstruction& gate) {
  switch (gate.kind) {
    case GateKind::H: {
      Eigen::MatrixXcd m(2, 2);
      m << kInvSqrt2, kInvSqrt2, kInvSqrt2, -kInvSqrt2;
      return m;
    }
    case GateKind::HY: {
      Eigen::MatrixXcd m(2, 2);
      m << kInvSqrt2, -kI * kInvSqrt2, kI * kInvSqrt2, -kInvSqrt2;
      return m;
    }
    case GateKind::RZ: {
      if (!gate.theta) throw ArgumentError("RZ requires theta");
      const double half = *gate.theta / 2.0;
      Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(2, 2);
      m(0, 0) = std::polar(1.0, -half);
      m(1, 1) = std::polar(1.0, half);
      return m;
    }
    case GateKind::CNOT: {
      // Control is local bit 0, target local bit 1.
      Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(4, 4);
      m(0, 0) = 1.0;
      m(3, 1) = 1.0;
      m(2, 2) = 1.0;
      m(1, 3) = 1.0;
      return m;
    }
    case GateKind::SWAP: {
      Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(4, 4);
      m(0, 0) = 1.0;
      m(2, 1) = 1.0;
      m(1, 2) = 1.0;
      m(3, 3) = 1.0;
      return m;
    }
  }
  throw ArgumentError("unknown gate kind");
}

StateVector::StateVector(std::size_t num_qubits) : num_qubits_(num_qubits) {
  check_qubit_count(num_qubits);
  amplitudes_.assign(std::size_t{1} << num_qubits, Complex{});
  amplitudes_[0] = 1.0;
}

StateVector StateVector::basis(std::size_t num_qubits, std::uint64_t index) {
  StateVector s(num_qubits);
  if (index >= s.dim()) {
    throw IndexError("basis index " + std::to_string(index) +
                     " out of range for " + std::to_string(num_qubits) +
                     " qubits");
  }
  s.amplitudes_[0] = 0.0;
  s.amplitudes_[index] = 1.0;
  return s;
}

StateVector StateVector::from_amplitudes(std::size_t num_qubits,
                                         std::vector<Complex> amplitudes) {
  StateVector s(num_qubits);
  if (amplitudes.size() != s.dim()) {
    throw ArgumentError("expected " + std::to_string(s.dim()) +
                        " amplitudes, got " + std::to_string(amplitudes.size()));
  }
  s.amplitudes_ = std::move(amplitudes);
  if (std::abs(s.norm_squared() - 1.0) > 1e-12) {
    throw ArgumentError("amplitudes are not normalized");
  }
  return s;
}

Complex StateVector::amplitude(std::uint64_t index) const {
  if (index >= dim()) throw IndexError("basis index out of range");
  return amplitudes_[index];
}

double StateVector::norm_squared() const {
  double total = 0.0;
  for (const Complex& a : amplitudes_) total += std::norm(a);
  return total;
}

std::vector<double> StateVector::probabilities() const {
  std::vector<double> p(dim());
  std::transform(amplitudes_.begin(), amplitudes_.end(), p.begin(),
                 [](const Complex& a) { return std::norm(a); });
  return p;
}

void StateVector::apply(const GateInstruction& gate) {
  validate(gate, num_qubits_);
  const std::size_t n = dim();
  auto* amp = amplitudes_.data();
  switch (gate.kind) {
    case GateKind::H:
    case GateKind::HY: {
      const std::size_t mask = std::size_t{1} << gate.qubits[0];
      const bool y = gate.kind == GateKind::HY;
      for (std::size_t i = 0; i < n; ++i) {
        if (i & mask) continue;
        const Complex a = amp[i];
        const Complex b = amp[i | mask];
        if (y) {
          amp[i] = (a - kI * b) * kInvSqrt2;
          amp[i | mask] = (kI * a - b) * kInvSqrt2;
        } else {
          amp[i] = (a + b) * kInvSqrt2;
          amp[i | mask] = (a - b) * kInvSqrt2;
        }
      }
      break;
    }
    case GateKind::RZ: {
      const std::size_t mask = std::size_t{1} << gate.qubits[0];
      const Complex lo = std::polar(1.0, -*gate.theta / 2.0);
      const Complex hi = std::polar(1.0, *gate.theta / 2.0);
      for (std::size_t i = 0; i < n; ++i) amp[i] *= (i & mask) ? hi : lo;
      break;
    }
    case GateKind::CNOT: {
      const std::size_t c = std::size_t{1} << gate.qubits[0];
      const std::size_t t = std::size_t{1} << gate.qubits[1];
      for (std::size_t i = 0; i < n; ++i) {
        if ((i & c) && !(i & t)) std::swap(amp[i], amp[i | t]);
      }
      break;
    }
    case GateKind::SWAP: {
      const std::size_t a = std::size_t{1} << gate.qubits[0];
      const std::size_t b = std::size_t{1} << gate.qubits[1];
      for (std::size_t i = 0; i < n; ++i) {
        if ((i & a) && !(i & b)) std::swap(amp[i], amp[(i ^ a) | b]);
      }
      break;
    }
  }
}

void StateVector::apply_pauli(std::size_t qubit, Pauli p) {
  if (qubit >= num_qubits_) throw IndexError("Pauli target out of range");
  const std::size_t mask = std::size_t{1} << qubit;
  const std::size_t n = dim();
  auto* amp = amplitudes_.data();
  switch (p) {
    case Pauli::I:
      break;
    case Pauli::X:
      for (std::size_t i = 0; i < n; ++i) {
        if (!(i & mask)) std::swap(amp[i], amp[i | mask]);
      }
      break;
    case Pauli::Y:
      for (std::size_t i = 0; i < n; ++i) {
        if (i & mask) continue;
        const Complex a = amp[i];
        amp[i] = -kI * amp[i | mask];
        amp[i | mask] = kI * a;
      }
      break;
    case Pauli::Z:
      for (std::size_t i = 0; i < n; ++i) {
        if (i & mask) amp[i] = -amp[i];
      }
      break;
  }
}

StateVector apply_gate(StateVector state, const GateInstruction& gate) {
  state.apply(gate);
  return state;
}

std::array<GateInstruction, 3> swap_as_cnots(std::size_t i, std::size_t j) {
  if (i == j) throw ArgumentError("swap_as_cnots needs two distinct qubits");
  return {GateInstruction::cnot(i, j), GateInstruction::cnot(j, i),
          GateInstruction::cnot(i, j)};
}

StateVector one_hot_state(std::size_t num_qubits, std::size_t site) {
  if (site >= num_qubits) {
    throw IndexError("site " + std::to_string(site) + " out of range for " +
                     std::to_string(num_qubits) + " qubits");
  }
  return StateVector::basis(num_qubits, one_hot_index(site));
}

std::vector<std::uint64_t> sample_bitstrings(const StateVector& state,
                                             std::size_t shots,
                                             std::uint64_t seed) {
  if (shots == 0) throw ArgumentError("shots must be at least 1");
  std::vector<double> cumulative = state.probabilities();
  std::partial_sum(cumulative.begin(), cumulative.end(), cumulative.begin());
  const double total = cumulative.back();
  Rng rng(seed);
  std::vector<std::uint64_t> out(shots);
  for (auto& sample : out) {
    const double r = uniform01(rng) * total;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), r);
    // Skip zero-probability entries that share the cumulative value.
    sample = static_cast<std::uint64_t>(
        std::min<std::ptrdiff_t>(it - cumulative.begin(),
                                 static_cast<std::ptrdiff_t>(cumulative.size()) - 1));
  }
  return out;
}

std::string format_bitstring(std::uint64_t bits, std::size_t num_qubits) {
  std::string s(num_qubits, '0');
  for (std::size_t q = 0; q < num_qubits; ++q) {
    if ((bits >> q) & 1U) s[q] = '1';
  }
  return s;
}

std::uint64_t parse_bitstring(std::string_view text) {
  if (text.empty() || text.size() > 64) {
    throw FormatError("bitstring length must be in [1, 64]");
  }
  std::uint64_t bits = 0;
  for (std::size_t q = 0; q < text.size(); ++q) {
    if (text[q] == '1') {
      bits |= std::uint64_t{1} << q;
    } else if (text[q] != '0') {
      throw FormatError("bitstring '" + std::string(text) +
                        "' contains a character other than 0/1");
    }
  }
  return bits;
}

}  // namespace fcqw
