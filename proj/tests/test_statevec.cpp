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

#include <gtest/gtest.h>

#include <bit>
#include <cmath>
#include <numbers>
#include <random>

#include "fcqw/circuit.hpp"
#include "fcqw/errors.hpp"
#include "fcqw/statevec.hpp"
#include "oracles.hpp"

namespace fcqw {
namespace {

using std::numbers::pi;
const Complex I{0.0, 1.0};

StateVector random_state(std::size_t L, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::vector<Complex> a(std::size_t{1} << L);
  double n = 0.0;
  for (auto& x : a) {
    x = {g(rng), g(rng)};
    n += std::norm(x);
  }
  for (auto& x : a) x /= std::sqrt(n);
  return StateVector::from_amplitudes(L, std::move(a));
}

TEST(StateVector, StartsInAllZeroState) {
  StateVector s(3);
  EXPECT_EQ(s.dim(), 8u);
  EXPECT_EQ(s.amplitude(0), Complex(1.0));
  EXPECT_DOUBLE_EQ(s.norm_squared(), 1.0);
}

TEST(StateVector, RejectsBadWidthAndAmplitudes) {
  EXPECT_THROW(StateVector(0), ArgumentError);
  EXPECT_THROW(StateVector(kMaxQubits + 1), ArgumentError);
  EXPECT_THROW(StateVector::from_amplitudes(2, {1.0, 0.0}), ArgumentError);
  EXPECT_THROW(StateVector::from_amplitudes(1, {1.0, 1.0}), ArgumentError);
  EXPECT_THROW(StateVector::basis(2, 4), IndexError);
}

TEST(ApplyGate, RzPiOnOccupiedQubitGivesPlusIPhase) {
  const StateVector out = apply_gate(StateVector::basis(1, 1), GateInstruction::rz(0, pi));
  EXPECT_NEAR(std::abs(out.amplitude(1) - std::exp(I * (pi / 2))), 0.0, 1e-15);
  EXPECT_EQ(out.amplitude(0), Complex(0.0));
}

TEST(ApplyGate, SwapMovesTheExcitation) {
  // "01": qubit 1 occupied, index 2.
  const StateVector in = StateVector::basis(2, parse_bitstring("01"));
  const StateVector out = apply_gate(in, GateInstruction::swap(0, 1));
  EXPECT_EQ(out.amplitude(parse_bitstring("10")), Complex(1.0));
}

TEST(ApplyGate, SwapIsAnInvolution) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const StateVector s = random_state(2, rng);
    StateVector t = s;
    t.apply(GateInstruction::swap(0, 1));
    t.apply(GateInstruction::swap(0, 1));
    for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(std::abs(t.amplitude(i) - s.amplitude(i)), 0.0, 1e-12);
  }
}

TEST(ApplyGate, MatchesDenseOracleForEveryKind) {
  std::mt19937_64 rng(11);
  const std::size_t L = 4;
  const std::vector<GateInstruction> gates = {
      GateInstruction::h(2),       GateInstruction::hy(1),      GateInstruction::rz(3, 0.37),
      GateInstruction::cnot(3, 0), GateInstruction::cnot(0, 2), GateInstruction::swap(1, 3)};
  for (const auto& g : gates) {
    const StateVector s = random_state(L, rng);
    const StateVector out = apply_gate(s, g);
    Eigen::VectorXcd v(16);
    for (std::size_t i = 0; i < 16; ++i) v(static_cast<Eigen::Index>(i)) = s.amplitude(i);
    const Eigen::VectorXcd expect = oracle::full_gate(g, L) * v;
    for (std::size_t i = 0; i < 16; ++i) {
      EXPECT_NEAR(std::abs(out.amplitude(i) - expect(static_cast<Eigen::Index>(i))), 0.0, 1e-14)
          << to_string(g.kind);
    }
  }
}

TEST(Validate, RejectsOutOfRangeDuplicateAndThetaMisuse) {
  StateVector s(2);
  EXPECT_THROW(s.apply(GateInstruction::h(2)), IndexError);
  EXPECT_THROW(s.apply(GateInstruction::cnot(1, 1)), ArgumentError);
  EXPECT_THROW(s.apply(GateInstruction{GateKind::RZ, {0, 0}, {}}), ArgumentError);
  EXPECT_THROW(s.apply(GateInstruction{GateKind::H, {0, 0}, 1.0}), ArgumentError);
  EXPECT_THROW(s.apply(GateInstruction::rz(0, std::nan(""))), ArgumentError);
}

TEST(SwapAsCnots, DecomposesIntoThreeAlternatingCnots) {
  const auto seq = swap_as_cnots(0, 1);
  EXPECT_EQ(seq[0], GateInstruction::cnot(0, 1));
  EXPECT_EQ(seq[1], GateInstruction::cnot(1, 0));
  EXPECT_EQ(seq[2], GateInstruction::cnot(0, 1));
  EXPECT_THROW(swap_as_cnots(2, 2), ArgumentError);
}

TEST(SwapAsCnots, ComposedActionAndMatrixEqualSwap) {
  StateVector s = StateVector::basis(2, parse_bitstring("10"));
  Eigen::MatrixXcd product = Eigen::MatrixXcd::Identity(4, 4);
  for (const auto& g : swap_as_cnots(0, 1)) {
    s.apply(g);
    product = oracle::full_gate(g, 2) * product;
  }
  EXPECT_EQ(s.amplitude(parse_bitstring("01")), Complex(1.0));
  EXPECT_EQ(oracle::max_abs(product - oracle::full_gate(GateInstruction::swap(0, 1), 2)), 0.0);
  // The library's SWAP matrix is symmetric in its targets, so it agrees too.
  EXPECT_EQ(oracle::max_abs(product - gate_matrix(GateInstruction::swap(0, 1))), 0.0);
}

TEST(OneHot, SiteZeroIsTheLeadingCharacter) {
  const StateVector s = one_hot_state(4, 0);
  EXPECT_EQ(s.amplitude(parse_bitstring("1000")), Complex(1.0));
  EXPECT_EQ(format_bitstring(one_hot_index(0), 8), "10000000");
  EXPECT_THROW(one_hot_state(4, 4), IndexError);
}

TEST(Bitstrings, FormatParseRoundTrip) {
  for (std::uint64_t x : {0ULL, 1ULL, 5ULL, 200ULL}) EXPECT_EQ(parse_bitstring(format_bitstring(x, 8)), x);
  EXPECT_THROW(parse_bitstring(""), FormatError);
  EXPECT_THROW(parse_bitstring("10a"), FormatError);
}

TEST(Sampling, DeterministicStateGivesOneOutcome) {
  const StateVector s = StateVector::basis(2, parse_bitstring("10"));
  const auto draws = sample_bitstrings(s, 100, 3);
  ASSERT_EQ(draws.size(), 100u);
  for (auto d : draws) EXPECT_EQ(format_bitstring(d, 2), "10");
  EXPECT_THROW(sample_bitstrings(s, 0, 1), ArgumentError);
}

TEST(Sampling, UniformQubitIsFairWithinThreeSigma) {
  const StateVector plus = apply_gate(StateVector(1), GateInstruction::h(0));
  const auto draws = sample_bitstrings(plus, 10000, 42);
  double ones = 0.0;
  for (auto d : draws) ones += static_cast<double>(d);
  EXPECT_NEAR(ones / 10000.0, 0.5, 0.02);
}

TEST(Sampling, SameSeedSameMultiset) {
  std::mt19937_64 rng(5);
  const StateVector s = random_state(3, rng);
  EXPECT_EQ(sample_bitstrings(s, 500, 9), sample_bitstrings(s, 500, 9));
  EXPECT_NE(sample_bitstrings(s, 500, 9), sample_bitstrings(s, 500, 10));
}

TEST(Properties, NormDriftOverThousandRandomGates) {
  std::mt19937_64 rng(1);
  StateVector s = random_state(5, rng);
  const Circuit c = oracle::random_circuit(5, 1000, rng);
  run(c, s);
  EXPECT_LT(std::abs(s.norm_squared() - 1.0), 1e-10);
}

TEST(Properties, EveryGateMatrixIsUnitary) {
  for (const auto& g : {GateInstruction::h(0), GateInstruction::hy(0), GateInstruction::rz(0, 1.3),
                        GateInstruction::cnot(0, 1), GateInstruction::swap(0, 1)}) {
    const Eigen::MatrixXcd U = gate_matrix(g);
    const auto n = U.rows();
    EXPECT_LT(oracle::max_abs(U.adjoint() * U - Eigen::MatrixXcd::Identity(n, n)), 1e-14);
  }
}

TEST(Properties, HyConjugatesZToYAndSquaresToIdentity) {
  const Eigen::MatrixXcd hy = gate_matrix(GateInstruction::hy(0));
  Eigen::MatrixXcd Z(2, 2), Y(2, 2);
  Z << 1.0, 0.0, 0.0, -1.0;
  Y << 0.0, -I, I, 0.0;
  EXPECT_LT(oracle::max_abs(hy * Z * hy - Y), 1e-15);
  EXPECT_LT(oracle::max_abs(hy * hy - Eigen::MatrixXcd::Identity(2, 2)), 1e-15);
}

TEST(Properties, SwapPreservesHammingWeight) {
  for (std::uint64_t x = 0; x < 16; ++x) {
    const StateVector out = apply_gate(StateVector::basis(4, x), GateInstruction::swap(1, 3));
    for (std::uint64_t y = 0; y < 16; ++y) {
      if (std::abs(out.amplitude(y)) > 0.0) EXPECT_EQ(std::popcount(x), std::popcount(y));
    }
  }
}

TEST(Pauli, MatchesDefinitions) {
  StateVector s = StateVector::basis(2, 0);
  s.apply_pauli(1, Pauli::X);
  EXPECT_EQ(s.amplitude(2), Complex(1.0));
  s.apply_pauli(1, Pauli::Y);  // Y|1> = -i|0>
  EXPECT_NEAR(std::abs(s.amplitude(0) - (-I)), 0.0, 1e-15);
  s.apply_pauli(0, Pauli::X);
  s.apply_pauli(0, Pauli::Z);  // Z|1> = -|1>
  EXPECT_NEAR(std::abs(s.amplitude(1) - I), 0.0, 1e-15);
  EXPECT_THROW(s.apply_pauli(2, Pauli::Z), IndexError);
}

}  // namespace
}  // namespace fcqw
