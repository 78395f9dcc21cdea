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

#include "fcqw/observables.hpp"

#include <cmath>
#include <numeric>

#include "fcqw/errors.hpp"

namespace fcqw {

double SiteDistribution::total() const { return std::accumulate(p.begin(), p.end(), 0.0); }

SiteDistribution site_density_exact(const StateVector& state) {
  const std::size_t L = state.num_qubits();
  SiteDistribution d{std::vector<double>(L, 0.0), false};
  const auto amps = state.amplitudes();
  for (std::size_t b = 0; b < amps.size(); ++b) {
    const double w = std::norm(amps[b]);
    if (w == 0.0) continue;
    for (std::size_t i = 0; i < L; ++i) {
      if ((b >> i) & 1U) d.p[i] += w;
    }
  }
  return d;
}

SiteDistribution site_density_single_particle(std::span<const Complex> amplitudes) {
  SiteDistribution d{std::vector<double>(amplitudes.size()), false};
  for (std::size_t i = 0; i < amplitudes.size(); ++i) d.p[i] = std::norm(amplitudes[i]);
  if (std::abs(d.total() - 1.0) > 1e-9) {
    throw ContractViolation("single-particle amplitudes are not normalized");
  }
  d.normalized = true;
  return d;
}

SiteDistribution post_process(const SiteDistribution& raw) {
  const double total = raw.total();
  if (!(total > 0.0)) throw DegenerateInputError("site density has no weight to normalize");
  SiteDistribution out{raw.p, true};
  for (double& x : out.p) x /= total;
  return out;
}

SiteDistribution site_density_counts(const ShotResult& result, std::size_t L) {
  if (result.shots == 0) throw DegenerateInputError("shot result holds no shots");
  SiteDistribution d{std::vector<double>(L, 0.0), false};
  for (const auto& [bits, n] : result.counts) {
    if (bits.size() != L) {
      throw FormatError("bitstring '" + bits + "' has length " + std::to_string(bits.size()) +
                        ", expected " + std::to_string(L));
    }
    for (std::size_t i = 0; i < L; ++i) {
      if (bits[i] == '1') {
        d.p[i] += static_cast<double>(n);
      } else if (bits[i] != '0') {
        throw FormatError("bitstring '" + bits + "' contains a character other than 0/1");
      }
    }
  }
  for (double& x : d.p) x /= static_cast<double>(result.shots);
  return d;
}

double exact_string_fraction(const ShotResult& result, std::size_t L, std::size_t site) {
  if (site >= L) throw IndexError("site out of range");
  if (result.shots == 0) throw DegenerateInputError("shot result holds no shots");
  return static_cast<double>(result.count(format_bitstring(one_hot_index(site), L))) /
         static_cast<double>(result.shots);
}

double ipr(const SiteDistribution& d) {
  if (!d.normalized || std::abs(d.total() - 1.0) > 1e-9) {
    throw ContractViolation("IPR needs a normalized site distribution");
  }
  return raw_ipr(d);
}

double raw_ipr(const SiteDistribution& d) {
  double acc = 0.0;
  for (double x : d.p) acc += x * x;
  return acc;
}

double peak_amplitude(const SiteDistribution& d, std::size_t expected_site) {
  if (expected_site >= d.size()) {
    throw IndexError("expected site " + std::to_string(expected_site) + " out of range");
  }
  return d.p[expected_site];
}

LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw ArgumentError("line fit needs two equal-length series of >= 2 points");
  }
  const auto n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw ArgumentError("line fit needs distinct x values");
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r2 = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return f;
}

}  // namespace fcqw
