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
 * One-excitation sector analysis. Both circuit families conserve particle
 * number, so a circuit on L qubits acts on single-particle states as an
 * L x L unitary: column i is the image of the state with only site i
 * occupied.
 */
#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "fcqw/circuit.hpp"

namespace fcqw {

class SingleParticleOperator {
 public:
  /// Throws ContractViolation unless `matrix` is square and
  /// max|U^dagger U - I| < tolerance.
  explicit SingleParticleOperator(Eigen::MatrixXcd matrix,
                                  double tolerance = 1e-10);

  std::size_t dim() const noexcept { return static_cast<std::size_t>(matrix_.rows()); }
  const Eigen::MatrixXcd& matrix() const noexcept { return matrix_; }

  SingleParticleOperator power(std::size_t t) const;
  SingleParticleOperator operator*(const SingleParticleOperator& rhs) const;

 private:
  Eigen::MatrixXcd matrix_;
};

double unitarity_defect(const Eigen::MatrixXcd& m);

/**
 * Single-particle matrix of a number-conserving circuit, computed without
 * the 2^L register: runs of gates on at most two qubits are fused into
 * blocks that must each conserve number, and every block acts on the
 * one-excitation sector as a 2x2 rotation plus a phase on the remaining
 * sites. Falls back to reduce_by_statevector when a block does not
 * conserve number on its own.
 */
SingleParticleOperator reduce_to_single_particle(const Circuit& circuit);

/// Reference reduction: simulates every one-hot input on the full
/// register and checks that no amplitude leaves the one-excitation sector.
SingleParticleOperator reduce_by_statevector(const Circuit& circuit);

/// Phase e^{i phi_j} that the onsite layer gives the state with only site
/// j occupied: phi_j = W (2 u_j - sum_k u_k).
std::vector<double> onsite_site_phases(const PotentialProfile& profile);

/**
 * Bloch symbol of the uniform chiral walk. With plane waves
 * |k> = L^{-1/2} sum_j e^{-ikj} |j>, the right shift has eigenvalue e^{ik};
 * a uniform onsite phase phi0 multiplies it by e^{i phi0}.
 */
Complex momentum_operator(double k, double uniform_phase,
                          Chirality chirality = Chirality::right);

/// fn(k_j) for k_j = 2 pi j / nk, j = 0..nk-1.
std::vector<Eigen::MatrixXcd> sample_momentum_family(
    std::size_t nk, const std::function<Eigen::MatrixXcd(double)>& fn);

std::vector<Eigen::MatrixXcd> chiral_momentum_family(
    std::size_t nk, double uniform_phase = 0.0,
    Chirality chirality = Chirality::right);

/// exp(-i dt eps(k)) of the uniform XY chain, eps(k) = -4 J cos k + onsite.
std::vector<Eigen::MatrixXcd> xy_momentum_family(std::size_t nk, double J,
                                                 double dt, double onsite = 0.0);

struct WindingNumber {
  int value = 0;
  double raw = 0.0;  ///< (1/2pi) sum of arg det increments before rounding
};

/**
 * Winding of a closed loop of unitaries sampled on a uniform grid:
 * w = (1/2pi) sum_j arg det(U_{j+1} U_j^dagger), indices mod N.
 * Throws ArgumentError for fewer than 8 samples or mismatched shapes,
 * ContractViolation for a non-unitary sample, and ResolutionError when an
 * increment comes within 0.1 of +-pi or the sum misses an integer by more
 * than 1e-6.
 */
WindingNumber winding_number(std::span<const Eigen::MatrixXcd> samples);

struct QuasiEnergySpectrum {
  std::vector<double> eigenphases;  ///< ascending, in [0, 2pi)
  Eigen::MatrixXcd eigenvectors;    ///< column n belongs to eigenphases[n]
};

QuasiEnergySpectrum quasi_energy_spectrum(const SingleParticleOperator& U);

struct LevelSpacingStats {
  double mean_spacing = 0.0;
  double spacing_variance = 0.0;
  double min_spacing = 0.0;
};

/// Statistics of the L circular nearest-neighbour eigenphase gaps.
LevelSpacingStats level_spacing_stats(const QuasiEnergySpectrum& spectrum);

/// Eigenphases of a shift times diag(e^{i phi_j}): the L roots of
/// lambda^L = e^{i sum phi}, i.e. (sum phi + 2 pi n)/L mod 2pi, sorted.
std::vector<double> chiral_eigenphases(std::span<const double> site_phases);

/// What to do with an eigenvalue at -1, where the principal log is
/// ambiguous: reject raises BranchCutError, take_upper assigns phase +pi.
enum class BranchCut { reject, take_upper };

/// Hermitian H with U = exp(iH), eigenphases on the principal branch
/// (-pi, pi]. Phases within 1e-9 of +-pi are handled per `policy`.
Eigen::MatrixXcd effective_hamiltonian(const SingleParticleOperator& U,
                                       BranchCut policy = BranchCut::reject);

/// One-excitation matrix of the qubit XY Hamiltonian: -2J on each bond,
/// W (sum u - 2 u_i) on the diagonal.
Eigen::MatrixXcd xy_single_particle_hamiltonian(std::size_t L,
                                                const PotentialProfile& profile,
                                                double J, bool periodic = false);

/// exp(-i H t) of a Hermitian matrix by eigendecomposition.
SingleParticleOperator hermitian_propagator(const Eigen::MatrixXcd& H, double t);

enum class DisorderDistribution { uniform_symmetric, box_profile };

struct DisorderEnsemble {
  std::size_t realizations = 1;
  double W = 0.0;
  DisorderDistribution distribution = DisorderDistribution::uniform_symmetric;
  std::uint64_t seed = 0;
};

/// Profile of one realization. uniform_symmetric draws u_i uniform in
/// [-1, 1] so onsite strengths W u_i are uniform in [-W, W]; box_profile
/// is the deterministic barrier around site 0.
PotentialProfile disorder_profile(const DisorderEnsemble& ensemble,
                                  std::size_t L, std::size_t realization);

/// CSV with header `index,eigenphase` ...
void write_spectrum_csv(std::ostream& out, const QuasiEnergySpectrum& spectrum);
/// ... and one row per matrix row, columns c<j>_re,c<j>_im.
void write_matrix_csv(std::ostream& out, const Eigen::MatrixXcd& m);

}  // namespace fcqw
