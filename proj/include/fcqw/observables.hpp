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
 * Site densities, particle-number post-processing, IPR and the ballistic
 * peak amplitude, computed from exact states or shot counts.
 */
#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fcqw/noise.hpp"
#include "fcqw/statevec.hpp"

namespace fcqw {

/// Per-site occupations p_i = <N_i>. Raw densities from noisy shots sum to
/// the mean particle number, which need not be 1.
struct SiteDistribution {
  std::vector<double> p;
  bool normalized = false;

  std::size_t size() const noexcept { return p.size(); }
  double total() const;
};

/// p_i = sum over basis states with bit i set of |amplitude|^2.
SiteDistribution site_density_exact(const StateVector& state);

/// |psi_i|^2 of a single-particle amplitude vector, flagged normalized.
SiteDistribution site_density_single_particle(std::span<const Complex> amplitudes);

/// P_i = p_i / sum_j p_j. Throws DegenerateInputError when the sum is 0.
SiteDistribution post_process(const SiteDistribution& raw);

/// p_i = (sum over strings s of bit_i(s) * counts[s]) / shots.
/// Throws FormatError if a bitstring's length differs from L.
SiteDistribution site_density_counts(const ShotResult& result, std::size_t L);

/// Fraction of shots that read exactly the one-hot string of `site`, i.e.
/// counts restricted to the right sector and not renormalized.
double exact_string_fraction(const ShotResult& result, std::size_t L, std::size_t site);

/// sum_i P_i^2 of a normalized distribution; ContractViolation otherwise.
double ipr(const SiteDistribution& d);

/// sum_i p_i^2 of any density, without the normalization contract.
double raw_ipr(const SiteDistribution& d);

/// P at the expected ballistic site. IndexError if out of range.
double peak_amplitude(const SiteDistribution& d, std::size_t expected_site);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

/// Ordinary least squares y = slope x + intercept with coefficient of
/// determination. Needs >= 2 points with distinct x.
LinearFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace fcqw
