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

#include "fcqw/floquet.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <ostream>

#include <Eigen/Eigenvalues>

#include "fcqw/errors.hpp"
#include "fcqw/format.hpp"
#include "fcqw/random.hpp"

namespace fcqw {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kSectorTolerance = 1e-12;
// Above this width the statevector fallback is too slow to be useful.
constexpr std::size_t kFallbackMaxQubits = 16;

/// Maps to [0, 2pi); values within 1e-12 below 2pi fold to 0.
double wrap_phase(double phase) {
  double p = std::fmod(phase, kTwoPi);
  if (p < 0.0) p += kTwoPi;
  if (kTwoPi - p < 1e-12) p = 0.0;
  return p;
}

int popcount(std::size_t x) { return __builtin_popcountll(x); }

/// Embeds a matrix acting on `sub` (local bit k <-> sub[k]) into the basis
/// of `support` (local bit k <-> support[k]); sub must be a subset.
Eigen::MatrixXcd embed(const Eigen::MatrixXcd& m,
                       std::span<const std::size_t> sub,
                       std::span<const std::size_t> support) {
  const std::size_t dim = std::size_t{1} << support.size();
  std::vector<std::size_t> pos(sub.size());
  std::size_t sub_mask = 0;
  for (std::size_t k = 0; k < sub.size(); ++k) {
    pos[k] = static_cast<std::size_t>(
        std::find(support.begin(), support.end(), sub[k]) - support.begin());
    sub_mask |= std::size_t{1} << pos[k];
  }
  auto local = [&](std::size_t idx) {
    std::size_t out = 0;
    for (std::size_t k = 0; k < pos.size(); ++k) out |= ((idx >> pos[k]) & 1U) << k;
    return out;
  };
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      if ((i & ~sub_mask) != (j & ~sub_mask)) continue;
      out(i, j) = m(local(i), local(j));
    }
  }
  return out;
}

bool conserves_number(const Eigen::MatrixXcd& block) {
  for (Eigen::Index i = 0; i < block.rows(); ++i) {
    for (Eigen::Index j = 0; j < block.cols(); ++j) {
      if (popcount(i) != popcount(j) && std::abs(block(i, j)) > kSectorTolerance) {
        return false;
      }
    }
  }
  return true;
}

/// Accumulates fused gate blocks into the single-particle matrix.
class BlockReducer {
 public:
  explicit BlockReducer(std::size_t L) : M_(Eigen::MatrixXcd::Identity(L, L)) {}

  /// False once a fused block fails to conserve number.
  bool push(const GateInstruction& gate) {
    const auto gate_qubits = gate.targets();
    std::vector<std::size_t> merged = support_;
    for (std::size_t q : gate_qubits) {
      if (std::find(merged.begin(), merged.end(), q) == merged.end()) merged.push_back(q);
    }
    const Eigen::MatrixXcd g = gate_matrix(gate);
    if (support_.empty()) {
      support_.assign(gate_qubits.begin(), gate_qubits.end());
      block_ = g;
      return true;
    }
    if (merged.size() <= 2) {
      Eigen::MatrixXcd candidate = embed(g, gate_qubits, merged) * embed(block_, support_, merged);
      // A conserving block is always safe to commit; commit it rather than
      // grow it into one that is not.
      if (!conserves_number(candidate) && conserves_number(block_)) {
        flush();
        support_.assign(gate_qubits.begin(), gate_qubits.end());
        block_ = g;
        return true;
      }
      support_ = std::move(merged);
      block_ = std::move(candidate);
      return true;
    }
    if (!flush()) return false;
    support_.assign(gate_qubits.begin(), gate_qubits.end());
    block_ = g;
    return true;
  }

  bool flush() {
    if (support_.empty()) return true;
    if (!conserves_number(block_)) return false;
    if (support_.size() == 1) {
      const std::size_t a = support_[0];
      const Eigen::RowVectorXcd ra = M_.row(a);
      M_ *= block_(0, 0);
      M_.row(a) = block_(1, 1) * ra;
    } else {
      const std::size_t a = support_[0];
      const std::size_t b = support_[1];
      const Eigen::RowVectorXcd ra = M_.row(a);
      const Eigen::RowVectorXcd rb = M_.row(b);
      M_ *= block_(0, 0);
      M_.row(a) = block_(1, 1) * ra + block_(1, 2) * rb;
      M_.row(b) = block_(2, 1) * ra + block_(2, 2) * rb;
    }
    support_.clear();
    return true;
  }

  const Eigen::MatrixXcd& matrix() const { return M_; }

 private:
  Eigen::MatrixXcd M_;
  std::vector<std::size_t> support_;
  Eigen::MatrixXcd block_;
};

}  // namespace

double unitarity_defect(const Eigen::MatrixXcd& m) {
  const Eigen::MatrixXcd d =
      m.adjoint() * m - Eigen::MatrixXcd::Identity(m.rows(), m.cols());
  return d.cwiseAbs().maxCoeff();
}

SingleParticleOperator::SingleParticleOperator(Eigen::MatrixXcd matrix,
                                               double tolerance)
    : matrix_(std::move(matrix)) {
  if (matrix_.rows() == 0 || matrix_.rows() != matrix_.cols()) {
    throw ContractViolation("single-particle operator must be square and non-empty");
  }
  const double defect = unitarity_defect(matrix_);
  if (!(defect < tolerance)) {
    throw ContractViolation("operator is not unitary: max|U^dag U - I| = " +
                            format_double(defect));
  }
}

SingleParticleOperator SingleParticleOperator::power(std::size_t t) const {
  Eigen::MatrixXcd result = Eigen::MatrixXcd::Identity(matrix_.rows(), matrix_.cols());
  Eigen::MatrixXcd base = matrix_;
  while (t > 0) {
    if (t & 1U) result = base * result;
    base = base * base;
    t >>= 1U;
  }
  return SingleParticleOperator(std::move(result), 1e-9);
}

SingleParticleOperator SingleParticleOperator::operator*(
    const SingleParticleOperator& rhs) const {
  if (rhs.dim() != dim()) throw ArgumentError("operator dimensions differ");
  return SingleParticleOperator(matrix_ * rhs.matrix_, 1e-9);
}

SingleParticleOperator reduce_to_single_particle(const Circuit& circuit) {
  BlockReducer reducer(circuit.num_qubits());
  bool ok = true;
  for (const auto& g : circuit.instructions()) {
    if (!reducer.push(g)) {
      ok = false;
      break;
    }
  }
  if (ok && reducer.flush()) return SingleParticleOperator(reducer.matrix());
  if (circuit.num_qubits() <= kFallbackMaxQubits) return reduce_by_statevector(circuit);
  throw ContractViolation(
      "circuit does not conserve particle number block by block and is too wide "
      "for the statevector check");
}

SingleParticleOperator reduce_by_statevector(const Circuit& circuit) {
  const std::size_t L = circuit.num_qubits();
  Eigen::MatrixXcd M(L, L);
  for (std::size_t i = 0; i < L; ++i) {
    StateVector s = one_hot_state(L, i);
    run(circuit, s);
    double inside = 0.0;
    for (std::size_t j = 0; j < L; ++j) {
      M(j, i) = s.amplitude(one_hot_index(j));
      inside += std::norm(M(j, i));
    }
    const double leak = s.norm_squared() - inside;
    if (leak > 1e-10) {
      throw ContractViolation("circuit does not conserve particle number: site " +
                              std::to_string(i) + " leaks probability " +
                              format_double(leak));
    }
  }
  return SingleParticleOperator(std::move(M));
}

std::vector<double> onsite_site_phases(const PotentialProfile& profile) {
  const double total = std::accumulate(profile.u.begin(), profile.u.end(), 0.0);
  std::vector<double> phases(profile.size());
  for (std::size_t j = 0; j < profile.size(); ++j) {
    phases[j] = profile.W * (2.0 * profile.u[j] - total);
  }
  return phases;
}

Complex momentum_operator(double k, double uniform_phase, Chirality chirality) {
  const double band = chirality == Chirality::right ? k : -k;
  return std::polar(1.0, band + uniform_phase);
}

std::vector<Eigen::MatrixXcd> sample_momentum_family(
    std::size_t nk, const std::function<Eigen::MatrixXcd(double)>& fn) {
  std::vector<Eigen::MatrixXcd> out;
  out.reserve(nk);
  for (std::size_t j = 0; j < nk; ++j) {
    out.push_back(fn(kTwoPi * static_cast<double>(j) / static_cast<double>(nk)));
  }
  return out;
}

std::vector<Eigen::MatrixXcd> chiral_momentum_family(std::size_t nk,
                                                     double uniform_phase,
                                                     Chirality chirality) {
  return sample_momentum_family(nk, [&](double k) {
    Eigen::MatrixXcd m(1, 1);
    m(0, 0) = momentum_operator(k, uniform_phase, chirality);
    return m;
  });
}

std::vector<Eigen::MatrixXcd> xy_momentum_family(std::size_t nk, double J,
                                                 double dt, double onsite) {
  return sample_momentum_family(nk, [&](double k) {
    Eigen::MatrixXcd m(1, 1);
    m(0, 0) = std::polar(1.0, -dt * (-4.0 * J * std::cos(k) + onsite));
    return m;
  });
}

WindingNumber winding_number(std::span<const Eigen::MatrixXcd> samples) {
  if (samples.size() < 8) {
    throw ArgumentError("winding number needs at least 8 momentum samples, got " +
                        std::to_string(samples.size()));
  }
  const auto rows = samples.front().rows();
  for (const auto& u : samples) {
    if (u.rows() != rows || u.cols() != rows) {
      throw ArgumentError("momentum samples must be square and of equal size");
    }
    const double defect = unitarity_defect(u);
    if (!(defect < 1e-10)) {
      throw ContractViolation("non-unitary momentum sample: max|U^dag U - I| = " +
                              format_double(defect));
    }
  }
  double total = 0.0;
  for (std::size_t j = 0; j < samples.size(); ++j) {
    const auto& next = samples[(j + 1) % samples.size()];
    const Complex d = (next * samples[j].adjoint()).determinant();
    const double step = std::arg(d);
    if (std::abs(step) >= std::numbers::pi - 0.1) {
      throw ResolutionError("phase increment " + format_double(step) + " at sample " +
                            std::to_string(j) +
                            " is too close to the branch; use a finer k grid");
    }
    total += step;
  }
  const double raw = total / kTwoPi;
  const double rounded = std::round(raw);
  if (std::abs(raw - rounded) > 1e-6) {
    throw ResolutionError("winding sum " + format_double(raw) +
                          " is not within 1e-6 of an integer");
  }
  return {static_cast<int>(rounded), raw};
}

QuasiEnergySpectrum quasi_energy_spectrum(const SingleParticleOperator& U) {
  const Eigen::ComplexSchur<Eigen::MatrixXcd> schur(U.matrix());
  const Eigen::MatrixXcd& T = schur.matrixT();
  const Eigen::MatrixXcd& Q = schur.matrixU();
  const auto n = static_cast<std::size_t>(T.rows());

  struct Entry {
    double phase;
    Eigen::VectorXcd vec;
  };
  std::vector<Entry> entries;
  entries.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Eigen::VectorXcd v = Q.col(static_cast<Eigen::Index>(i));
    // Gauge: the first largest-magnitude component is real and positive.
    Eigen::Index pivot = 0;
    const double peak = v.cwiseAbs().maxCoeff();
    while (std::abs(v(pivot)) < peak - 1e-12) ++pivot;
    v *= std::conj(v(pivot)) / std::abs(v(pivot));
    entries.push_back({wrap_phase(std::arg(T(i, i))), std::move(v)});
  }
  std::stable_sort(entries.begin(), entries.end(),
                   [](const Entry& a, const Entry& b) { return a.phase < b.phase; });
  auto lex_less = [](const Entry& a, const Entry& b) {
    for (Eigen::Index k = 0; k < a.vec.size(); ++k) {
      if (a.vec(k).real() != b.vec(k).real()) return a.vec(k).real() < b.vec(k).real();
      if (a.vec(k).imag() != b.vec(k).imag()) return a.vec(k).imag() < b.vec(k).imag();
    }
    return false;
  };
  for (std::size_t begin = 0; begin < n;) {
    std::size_t end = begin + 1;
    while (end < n && entries[end].phase - entries[end - 1].phase < 1e-12) ++end;
    std::sort(entries.begin() + static_cast<std::ptrdiff_t>(begin),
              entries.begin() + static_cast<std::ptrdiff_t>(end), lex_less);
    begin = end;
  }

  QuasiEnergySpectrum out;
  out.eigenphases.reserve(n);
  out.eigenvectors.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    out.eigenphases.push_back(entries[i].phase);
    out.eigenvectors.col(static_cast<Eigen::Index>(i)) = entries[i].vec;
  }
  return out;
}

LevelSpacingStats level_spacing_stats(const QuasiEnergySpectrum& spectrum) {
  const auto& phases = spectrum.eigenphases;
  const std::size_t n = phases.size();
  if (n < 2) throw ArgumentError("level statistics need at least 2 levels");
  std::vector<double> gaps(n);
  for (std::size_t i = 0; i + 1 < n; ++i) gaps[i] = phases[i + 1] - phases[i];
  gaps[n - 1] = phases[0] + kTwoPi - phases[n - 1];

  LevelSpacingStats stats;
  stats.mean_spacing = std::accumulate(gaps.begin(), gaps.end(), 0.0) / static_cast<double>(n);
  double var = 0.0;
  for (double g : gaps) var += (g - stats.mean_spacing) * (g - stats.mean_spacing);
  stats.spacing_variance = var / static_cast<double>(n);
  stats.min_spacing = *std::min_element(gaps.begin(), gaps.end());
  return stats;
}

std::vector<double> chiral_eigenphases(std::span<const double> site_phases) {
  const double total = std::accumulate(site_phases.begin(), site_phases.end(), 0.0);
  const auto L = static_cast<double>(site_phases.size());
  std::vector<double> out;
  out.reserve(site_phases.size());
  for (std::size_t n = 0; n < site_phases.size(); ++n) {
    out.push_back(wrap_phase((total + kTwoPi * static_cast<double>(n)) / L));
  }
  std::sort(out.begin(), out.end());
  return out;
}

Eigen::MatrixXcd effective_hamiltonian(const SingleParticleOperator& U,
                                       BranchCut policy) {
  const Eigen::ComplexSchur<Eigen::MatrixXcd> schur(U.matrix());
  const Eigen::MatrixXcd& T = schur.matrixT();
  const Eigen::MatrixXcd& Q = schur.matrixU();
  Eigen::VectorXcd phases(T.rows());
  for (Eigen::Index i = 0; i < T.rows(); ++i) {
    double theta = std::arg(T(i, i));
    if (std::numbers::pi - std::abs(theta) < 1e-9) {
      if (policy == BranchCut::reject) {
        throw BranchCutError("eigenphase " + format_double(theta) +
                                 " lies on the branch cut of the principal log",
                             theta);
      }
      theta = std::numbers::pi;
    }
    phases(i) = theta;
  }
  Eigen::MatrixXcd H = Q * phases.asDiagonal() * Q.adjoint();
  return 0.5 * (H + H.adjoint());
}

Eigen::MatrixXcd xy_single_particle_hamiltonian(std::size_t L,
                                                const PotentialProfile& profile,
                                                double J, bool periodic) {
  if (L < 2) throw ArgumentError("XY chain needs L >= 2");
  if (profile.size() != L) throw ArgumentError("profile length differs from L");
  if (periodic && L < 3) throw ArgumentError("periodic XY chain needs L >= 3");
  Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(L, L);
  for (std::size_t i = 0; i + 1 < L; ++i) {
    H(i, i + 1) = -2.0 * J;
    H(i + 1, i) = -2.0 * J;
  }
  if (periodic) {
    H(0, L - 1) = -2.0 * J;
    H(L - 1, 0) = -2.0 * J;
  }
  const double total = std::accumulate(profile.u.begin(), profile.u.end(), 0.0);
  for (std::size_t i = 0; i < L; ++i) H(i, i) = profile.W * (total - 2.0 * profile.u[i]);
  return H;
}

SingleParticleOperator hermitian_propagator(const Eigen::MatrixXcd& H, double t) {
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(H);
  if (eig.info() != Eigen::Success) throw ArgumentError("eigensolver failed");
  Eigen::VectorXcd phases(H.rows());
  for (Eigen::Index i = 0; i < H.rows(); ++i) {
    phases(i) = std::polar(1.0, -eig.eigenvalues()(i) * t);
  }
  return SingleParticleOperator(eig.eigenvectors() * phases.asDiagonal() *
                                eig.eigenvectors().adjoint());
}

PotentialProfile disorder_profile(const DisorderEnsemble& ensemble, std::size_t L,
                                  std::size_t realization) {
  if (ensemble.realizations < 1) throw ArgumentError("ensemble needs >= 1 realization");
  if (realization >= ensemble.realizations) throw IndexError("realization index out of range");
  if (ensemble.distribution == DisorderDistribution::box_profile) {
    return PotentialProfile::box(L, 0, ensemble.W);
  }
  Rng rng(stream_seed(ensemble.seed, realization));
  PotentialProfile p{std::vector<double>(L), ensemble.W};
  for (double& u : p.u) u = 2.0 * uniform01(rng) - 1.0;
  return p;
}

void write_spectrum_csv(std::ostream& out, const QuasiEnergySpectrum& spectrum) {
  out << "index,eigenphase\n";
  for (std::size_t i = 0; i < spectrum.eigenphases.size(); ++i) {
    out << i << ',' << format_double(spectrum.eigenphases[i]) << '\n';
  }
}

void write_matrix_csv(std::ostream& out, const Eigen::MatrixXcd& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    if (j) out << ',';
    out << 'c' << j << "_re,c" << j << "_im";
  }
  out << '\n';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << format_double(m(i, j).real()) << ',' << format_double(m(i, j).imag());
    }
    out << '\n';
  }
}

}  // namespace fcqw
