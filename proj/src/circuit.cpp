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

#include "fcqw/circuit.hpp"

#include <algorithm>

#include "fcqw/errors.hpp"

namespace fcqw {

Circuit::Circuit(std::size_t num_qubits, std::string label)
    : num_qubits_(num_qubits), label_(std::move(label)) {
  if (num_qubits < 1 || num_qubits > kMaxQubits) {
    throw ArgumentError("circuit width " + std::to_string(num_qubits) +
                        " outside [1, " + std::to_string(kMaxQubits) + "]");
  }
}

Circuit& Circuit::append(const GateInstruction& gate) {
  validate(gate, num_qubits_);
  instructions_.push_back(gate);
  return *this;
}

Circuit& Circuit::append(const Circuit& other) {
  if (other.num_qubits_ != num_qubits_) {
    throw ArgumentError("cannot concatenate circuits of different width");
  }
  instructions_.insert(instructions_.end(), other.instructions_.begin(),
                       other.instructions_.end());
  return *this;
}

Circuit& Circuit::set_label(std::string label) {
  label_ = std::move(label);
  return *this;
}

bool Circuit::operator==(const Circuit& other) const {
  return num_qubits_ == other.num_qubits_ &&
         instructions_ == other.instructions_;
}

void run(const Circuit& circuit, StateVector& state) {
  if (state.num_qubits() != circuit.num_qubits()) {
    throw ArgumentError("state width does not match circuit width");
  }
  for (const auto& g : circuit.instructions()) state.apply(g);
}

Circuit lower_swaps(const Circuit& circuit) {
  Circuit out(circuit.num_qubits(), circuit.label());
  for (const auto& g : circuit.instructions()) {
    if (g.kind == GateKind::SWAP) {
      for (const auto& c : swap_as_cnots(g.qubits[0], g.qubits[1])) out.append(c);
    } else {
      out.append(g);
    }
  }
  return out;
}

PotentialProfile PotentialProfile::uniform(std::size_t L, double W) {
  return {std::vector<double>(L, 1.0), W};
}

PotentialProfile PotentialProfile::box(std::size_t L, std::size_t start,
                                       double W, std::size_t width) {
  if (start >= L) throw IndexError("box start site out of range");
  if (2 * width + 1 > L) {
    throw ArgumentError("box of half-width " + std::to_string(width) +
                        " does not fit in " + std::to_string(L) + " sites");
  }
  PotentialProfile p{std::vector<double>(L, 0.0), W};
  for (std::size_t d = 1; d <= width; ++d) {
    p.u[(start + d) % L] = 1.0;
    p.u[(start + L - d) % L] = 1.0;
  }
  return p;
}

Circuit build_hopping_ladder(std::size_t L, Chirality chirality) {
  if (L < 2) throw ArgumentError("hopping ladder needs L >= 2");
  Circuit c(L, chirality == Chirality::right ? "hopping_right" : "hopping_left");
  if (chirality == Chirality::right) {
    for (std::size_t i = L - 1; i-- > 0;) c.append(GateInstruction::swap(i, i + 1));
  } else {
    for (std::size_t i = 0; i + 1 < L; ++i) c.append(GateInstruction::swap(i, i + 1));
  }
  return c;
}

Circuit build_onsite_layer(const PotentialProfile& profile) {
  if (profile.u.empty()) throw ArgumentError("empty potential profile");
  Circuit c(profile.size(), "onsite");
  for (std::size_t i = 0; i < profile.size(); ++i) {
    c.append(GateInstruction::rz(i, 2.0 * profile.W * profile.u[i]));
  }
  return c;
}

Circuit build_fcqw_step(std::size_t L, const PotentialProfile& profile,
                        Chirality chirality) {
  if (profile.size() != L) {
    throw ArgumentError("profile has " + std::to_string(profile.size()) +
                        " sites, lattice has " + std::to_string(L));
  }
  Circuit c = build_onsite_layer(profile);
  c.append(build_hopping_ladder(L, chirality));
  c.set_label("fcqw_step");
  return c;
}

Circuit build_fcqw(std::size_t L, const PotentialProfile& profile,
                   std::size_t steps, Chirality chirality) {
  const Circuit step = build_fcqw_step(L, profile, chirality);
  Circuit c(L, "fcqw_t" + std::to_string(steps));
  for (std::size_t t = 0; t < steps; ++t) c.append(step);
  return c;
}

namespace {

void append_xx_block(Circuit& c, std::size_t a, std::size_t b, double angle) {
  c.append(GateInstruction::h(a)).append(GateInstruction::h(b));
  c.append(GateInstruction::cnot(a, b));
  c.append(GateInstruction::rz(b, angle));
  c.append(GateInstruction::cnot(a, b));
  c.append(GateInstruction::h(a)).append(GateInstruction::h(b));
}

void append_yy_block(Circuit& c, std::size_t a, std::size_t b, double angle) {
  c.append(GateInstruction::hy(a)).append(GateInstruction::hy(b));
  c.append(GateInstruction::cnot(a, b));
  c.append(GateInstruction::rz(b, angle));
  c.append(GateInstruction::cnot(a, b));
  c.append(GateInstruction::hy(a)).append(GateInstruction::hy(b));
}

}  // namespace

Circuit build_xy_trotter(std::size_t L, const PotentialProfile& profile,
                         const TrotterConfig& cfg) {
  if (L < 2) throw ArgumentError("XY chain needs L >= 2");
  if (cfg.n < 1) throw ArgumentError("Trotter repetition count n must be >= 1");
  if (!(cfg.t >= 0.0)) throw ArgumentError("evolution time must be >= 0");
  if (profile.size() != L) {
    throw ArgumentError("profile has " + std::to_string(profile.size()) +
                        " sites, chain has " + std::to_string(L));
  }
  if (cfg.periodic && L < 3) {
    throw ArgumentError("periodic XY chain needs L >= 3");
  }

  std::vector<std::pair<std::size_t, std::size_t>> bonds;
  for (std::size_t i = 0; i + 1 < L; ++i) bonds.emplace_back(i, i + 1);
  if (cfg.periodic) bonds.emplace_back(L - 1, 0);

  const double dt = cfg.t / static_cast<double>(cfg.n);
  const double hop_angle = -2.0 * cfg.J * dt;
  Circuit c(L, "xy_trotter");
  for (std::size_t rep = 0; rep < cfg.n; ++rep) {
    if (cfg.ordering == TrotterOrdering::pairwise) {
      for (auto [a, b] : bonds) {
        append_xx_block(c, a, b, hop_angle);
        append_yy_block(c, a, b, hop_angle);
      }
    } else {
      for (auto [a, b] : bonds) append_xx_block(c, a, b, hop_angle);
      for (auto [a, b] : bonds) append_yy_block(c, a, b, hop_angle);
    }
    for (std::size_t i = 0; i < L; ++i) {
      c.append(GateInstruction::rz(i, 2.0 * profile.W * profile.u[i] * dt));
    }
  }
  return c;
}

}  // namespace fcqw
