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

#include "fcqw/noise.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"

#include "fcqw/errors.hpp"
#include "fcqw/observables.hpp"
#include "fcqw/parallel.hpp"
#include "fcqw/random.hpp"

namespace fcqw {

namespace {

constexpr Pauli kPaulis[4] = {Pauli::I, Pauli::X, Pauli::Y, Pauli::Z};

void inject_error(StateVector& state, const GateInstruction& gate, Rng& rng) {
  if (arity(gate.kind) == 1) {
    state.apply_pauli(gate.qubits[0], kPaulis[1 + uniform_index(rng, 3)]);
    return;
  }
  const std::uint64_t r = 1 + uniform_index(rng, 15);
  state.apply_pauli(gate.qubits[0], kPaulis[r % 4]);
  state.apply_pauli(gate.qubits[1], kPaulis[r / 4]);
}

std::uint64_t sample_once(const StateVector& state, Rng& rng) {
  const double r = uniform01(rng) * state.norm_squared();
  double acc = 0.0;
  const auto amps = state.amplitudes();
  for (std::size_t i = 0; i < amps.size(); ++i) {
    acc += std::norm(amps[i]);
    if (r < acc) return i;
  }
  // Rounding left r at the top of the range; return the last populated index.
  for (std::size_t i = amps.size(); i-- > 0;) {
    if (std::norm(amps[i]) > 0.0) return i;
  }
  return 0;
}

std::uint64_t readout(std::uint64_t bits, std::size_t num_qubits, double p, Rng& rng) {
  if (p == 0.0) return bits;
  for (std::size_t q = 0; q < num_qubits; ++q) {
    if (uniform01(rng) < p) bits ^= std::uint64_t{1} << q;
  }
  return bits;
}

void check_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw ArgumentError(std::string(name) + " must lie in [0, 1]");
  }
}

}  // namespace

void NoiseSpec::validate() const {
  check_probability(p_cnot, "p_cnot");
  check_probability(p_1q, "p_1q");
  check_probability(p_readout, "p_readout");
}

std::size_t ShotResult::count(const std::string& bits) const {
  auto it = counts.find(bits);
  return it == counts.end() ? 0 : it->second;
}

std::string ShotResult::to_json() const {
  nlohmann::ordered_json doc;
  doc["shots"] = shots;
  doc["counts"] = nlohmann::ordered_json::object();
  for (const auto& [bits, n] : counts) doc["counts"][bits] = n;
  return doc.dump();
}

ShotResult ShotResult::from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("shot result is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("shots") || !doc.contains("counts") ||
      !doc["shots"].is_number_unsigned() || !doc["counts"].is_object()) {
    throw FormatError("shot result needs unsigned \"shots\" and object \"counts\"");
  }
  ShotResult r;
  r.shots = doc["shots"].get<std::size_t>();
  std::size_t total = 0;
  for (const auto& [bits, n] : doc["counts"].items()) {
    if (!n.is_number_unsigned()) throw FormatError("count for '" + bits + "' is not unsigned");
    parse_bitstring(bits);
    r.counts[bits] = n.get<std::size_t>();
    total += r.counts[bits];
  }
  if (total != r.shots) throw FormatError("counts do not sum to shots");
  return r;
}

ShotResult run_noisy(const Circuit& circuit, const StateVector& initial,
                     const NoiseSpec& spec, std::size_t shots) {
  spec.validate();
  if (shots == 0) throw ArgumentError("shots must be at least 1");
  if (initial.num_qubits() != circuit.num_qubits()) {
    throw ArgumentError("initial state width does not match circuit width");
  }
  const Circuit lowered = lower_swaps(circuit);
  const std::size_t L = circuit.num_qubits();
  std::vector<std::uint64_t> outcomes(shots);

  if (spec.p_cnot == 0.0 && spec.p_1q == 0.0) {
    StateVector state = initial;
    run(lowered, state);
    outcomes = sample_bitstrings(state, shots, spec.seed);
    if (spec.p_readout > 0.0) {
      for (std::size_t s = 0; s < shots; ++s) {
        Rng rng(stream_seed(spec.seed, s));
        outcomes[s] = readout(outcomes[s], L, spec.p_readout, rng);
      }
    }
  } else {
    parallel_for(shots, [&](std::size_t s) {
      Rng rng(stream_seed(spec.seed, s));
      StateVector state = initial;
      for (const auto& g : lowered.instructions()) {
        state.apply(g);
        const double p = g.kind == GateKind::CNOT ? spec.p_cnot : spec.p_1q;
        if (p > 0.0 && uniform01(rng) < p) inject_error(state, g, rng);
      }
      outcomes[s] = readout(sample_once(state, rng), L, spec.p_readout, rng);
    });
  }

  ShotResult result;
  result.shots = shots;
  for (std::uint64_t bits : outcomes) ++result.counts[format_bitstring(bits, L)];
  return result;
}

std::vector<SweepPoint> amplitude_decay_sweep(SweepAxis axis, const NoiseSpec& spec,
                                              std::span<const std::size_t> range,
                                              const SweepOptions& options) {
  if (range.empty()) throw ArgumentError("sweep range is empty");
  std::vector<std::size_t> xs(range.begin(), range.end());
  std::sort(xs.begin(), xs.end());

  std::vector<SweepPoint> out;
  out.reserve(xs.size());
  for (std::size_t x : xs) {
    const std::size_t L = axis == SweepAxis::steps_at_fixed_L ? options.L : x;
    const std::size_t t = x;
    if (L < 2) throw ArgumentError("sweep lattice size must be >= 2");
    const Circuit circuit = build_fcqw(L, PotentialProfile::zero(L), t);
    NoiseSpec point_spec = spec;
    point_spec.seed = stream_seed(spec.seed, x);
    const ShotResult shots = run_noisy(circuit, one_hot_state(L, 0), point_spec, options.shots);

    const std::size_t site = t % L;
    const SiteDistribution pp = post_process(site_density_counts(shots, L));
    SweepPoint pt;
    pt.x = static_cast<double>(x);
    pt.peak = peak_amplitude(pp, site);
    pt.raw_peak = exact_string_fraction(shots, L, site);
    pt.sigma = std::sqrt(pt.peak * (1.0 - pt.peak) / static_cast<double>(options.shots));
    out.push_back(pt);
  }
  return out;
}

}  // namespace fcqw
