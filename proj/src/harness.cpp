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

#include "fcqw/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include <openssl/evp.h>

#include "json.hpp"

#include "fcqw/errors.hpp"
#include "fcqw/format.hpp"
#include "fcqw/observables.hpp"
#include "fcqw/parallel.hpp"
#include "fcqw/random.hpp"

namespace fcqw {

using nlohmann::json;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
// Largest lattice simulated as a full register in noiseless runs.
constexpr std::size_t kStatevectorMaxQubits = 16;
constexpr std::size_t kSpectraMaxSites = 512;

// ---------------------------------------------------------------------------
// Config parsing

const std::map<std::string, ExperimentKind> kKinds = {
    {"chiral_propagation", ExperimentKind::chiral_propagation},
    {"chiral_robustness", ExperimentKind::chiral_robustness},
    {"nonchiral_localization", ExperimentKind::nonchiral_localization},
    {"disorder_spectra", ExperimentKind::disorder_spectra},
    {"amplitude_scaling", ExperimentKind::amplitude_scaling},
};

std::set<std::string> allowed_keys(ExperimentKind kind) {
  std::set<std::string> keys = {"kind", "L", "seed", "output_dir"};
  auto add = [&](std::initializer_list<const char*> more) { keys.insert(more.begin(), more.end()); };
  switch (kind) {
    case ExperimentKind::chiral_propagation:
    case ExperimentKind::chiral_robustness:
      add({"steps", "W", "profile", "u", "barrier_width", "start_site", "noise", "shots"});
      break;
    case ExperimentKind::nonchiral_localization:
      add({"times", "W", "profile", "u", "barrier_width", "start_site", "trotter_n", "J",
           "periodic", "trotter_ordering", "noise", "shots"});
      break;
    case ExperimentKind::disorder_spectra:
      add({"W", "realizations", "distribution", "dt", "J", "periodic"});
      break;
    case ExperimentKind::amplitude_scaling:
      add({"axis", "range", "noise", "shots"});
      break;
  }
  return keys;
}

bool is_chiral(ExperimentKind k) {
  return k == ExperimentKind::chiral_propagation || k == ExperimentKind::chiral_robustness;
}

class ConfigReader {
 public:
  ConfigReader(const json& doc, std::vector<std::string>& errors) : doc_(doc), errors_(errors) {}

  bool has(const char* key) const { return doc_.contains(key); }

  template <class T>
  void unsigned_field(const char* key, T& out) {
    if (!has(key)) return;
    const json& v = doc_[key];
    if (!v.is_number_unsigned()) return fail(key, "must be a non-negative integer");
    out = v.get<T>();
  }

  void real_field(const char* key, double& out) {
    if (!has(key)) return;
    const json& v = doc_[key];
    if (!v.is_number() || !std::isfinite(v.get<double>())) return fail(key, "must be a finite number");
    out = v.get<double>();
  }

  void bool_field(const char* key, bool& out) {
    if (!has(key)) return;
    if (!doc_[key].is_boolean()) return fail(key, "must be true or false");
    out = doc_[key].get<bool>();
  }

  void string_field(const char* key, std::string& out) {
    if (!has(key)) return;
    if (!doc_[key].is_string()) return fail(key, "must be a string");
    out = doc_[key].get<std::string>();
  }

  void real_list(const char* key, std::vector<double>& out, bool scalar_ok) {
    if (!has(key)) return;
    const json& v = doc_[key];
    if (scalar_ok && v.is_number()) {
      out = {v.get<double>()};
    } else if (v.is_array() && !v.empty() &&
               std::all_of(v.begin(), v.end(), [](const json& e) { return e.is_number(); })) {
      out = v.get<std::vector<double>>();
    } else {
      return fail(key, scalar_ok ? "must be a number or a non-empty array of numbers"
                                 : "must be a non-empty array of numbers");
    }
    if (!std::all_of(out.begin(), out.end(), [](double x) { return std::isfinite(x); })) {
      fail(key, "entries must be finite");
    }
  }

  void unsigned_list(const char* key, std::vector<std::size_t>& out) {
    if (!has(key)) return;
    const json& v = doc_[key];
    if (!v.is_array() || v.empty() ||
        !std::all_of(v.begin(), v.end(), [](const json& e) { return e.is_number_unsigned(); })) {
      return fail(key, "must be a non-empty array of non-negative integers");
    }
    out = v.get<std::vector<std::size_t>>();
  }

  void fail(const std::string& key, const std::string& why) { errors_.push_back(key + ": " + why); }

 private:
  const json& doc_;
  std::vector<std::string>& errors_;
};

void parse_noise(const json& v, std::uint64_t default_seed, ExperimentConfig& cfg,
                 std::vector<std::string>& errors) {
  if (v.is_null()) {
    cfg.noise.reset();
    return;
  }
  if (!v.is_object()) {
    errors.push_back("noise: must be an object or null");
    return;
  }
  NoiseSpec spec;
  spec.seed = default_seed;
  std::vector<std::string> sub;
  ConfigReader r(v, sub);
  for (const auto& [key, _] : v.items()) {
    if (key != "p_cnot" && key != "p_1q" && key != "p_readout" && key != "seed") {
      sub.push_back(key + ": unknown key");
    }
  }
  r.real_field("p_cnot", spec.p_cnot);
  r.real_field("p_1q", spec.p_1q);
  r.real_field("p_readout", spec.p_readout);
  r.unsigned_field("seed", spec.seed);
  for (auto [name, p] : {std::pair{"p_cnot", spec.p_cnot}, std::pair{"p_1q", spec.p_1q},
                         std::pair{"p_readout", spec.p_readout}}) {
    if (!(p >= 0.0 && p <= 1.0)) sub.push_back(std::string(name) + ": must lie in [0, 1]");
  }
  for (auto& e : sub) errors.push_back("noise." + e);
  cfg.noise = spec;
}

void apply_defaults(ExperimentConfig& cfg) {
  switch (cfg.kind) {
    case ExperimentKind::chiral_propagation:
      cfg.L = 8;
      cfg.steps = {2, 5, 8};
      cfg.W = {0.0};
      cfg.start_site = 1;
      break;
    case ExperimentKind::chiral_robustness:
      cfg.L = 8;
      cfg.steps = {2, 5, 8};
      cfg.W = {0.0, 1.0, 2.0, 3.0, 4.0};
      cfg.start_site = 1;
      break;
    case ExperimentKind::nonchiral_localization:
      cfg.L = 8;
      cfg.times = {0.1, 0.48, 0.86, 1.24, 1.62, 2.0};
      cfg.W = {0.0, 3.0, 6.0};
      cfg.start_site = 4;
      cfg.trotter_n = 2;
      break;
    case ExperimentKind::disorder_spectra:
      cfg.L = 20;
      cfg.W = {4.0};
      break;
    case ExperimentKind::amplitude_scaling:
      cfg.L = 8;
      cfg.shots = 2000;
      break;
  }
}

std::string profile_name(ProfileKind p) {
  switch (p) {
    case ProfileKind::box: return "box";
    case ProfileKind::uniform: return "uniform";
    case ProfileKind::custom: return "custom";
  }
  return "?";
}

std::string axis_name(SweepAxis a) {
  return a == SweepAxis::steps_at_fixed_L ? "steps_at_fixed_L" : "size_with_t_equals_L";
}

std::string distribution_name(DisorderDistribution d) {
  return d == DisorderDistribution::uniform_symmetric ? "uniform_symmetric" : "box_profile";
}

std::string ordering_name(TrotterOrdering o) {
  return o == TrotterOrdering::pairwise ? "pairwise" : "layered";
}

// ---------------------------------------------------------------------------
// Output

class ResultWriter {
 public:
  explicit ResultWriter(std::filesystem::path dir) : dir_(std::move(dir)) {}

  void write(const std::string& rel, const std::string& content) {
    const auto path = dir_ / rel;
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create " + path.parent_path().string() + ": " + ec.message());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << content;
    out.close();
    if (!out) throw IoError("failed writing " + path.string());
    hashes_[rel] = git_blob_hash(content);
    paths_.push_back(path);
  }

  const std::map<std::string, std::string>& hashes() const { return hashes_; }
  const std::vector<std::filesystem::path>& paths() const { return paths_; }

 private:
  std::filesystem::path dir_;
  std::map<std::string, std::string> hashes_;
  std::vector<std::filesystem::path> paths_;
};

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string fmt(double x) { return format_double(x); }

PotentialProfile profile_for(const ExperimentConfig& cfg, double W) {
  switch (cfg.profile) {
    case ProfileKind::box:
      return PotentialProfile::box(cfg.L, cfg.start_site - 1, W, cfg.barrier_width);
    case ProfileKind::uniform:
      return PotentialProfile::uniform(cfg.L, W);
    case ProfileKind::custom:
      return {cfg.custom_u, W};
  }
  return PotentialProfile::zero(cfg.L);
}

TrotterConfig trotter_for(const ExperimentConfig& cfg, double t) {
  return {cfg.J, t, cfg.trotter_n, cfg.periodic, cfg.ordering};
}

std::vector<std::pair<std::string, Circuit>> planned_circuits(const ExperimentConfig& cfg) {
  std::vector<std::pair<std::string, Circuit>> out;
  switch (cfg.kind) {
    case ExperimentKind::chiral_propagation:
    case ExperimentKind::chiral_robustness:
      for (double W : cfg.W) {
        out.emplace_back("qasm/fcqw_step_W" + fmt(W) + ".qasm",
                         build_fcqw_step(cfg.L, profile_for(cfg, W)));
      }
      break;
    case ExperimentKind::nonchiral_localization:
      for (double W : cfg.W) {
        for (double t : cfg.times) {
          Circuit c = build_xy_trotter(cfg.L, profile_for(cfg, W), trotter_for(cfg, t));
          c.set_label("xy_trotter_W" + fmt(W) + "_t" + fmt(t));
          out.emplace_back("qasm/xy_trotter_W" + fmt(W) + "_t" + fmt(t) + ".qasm", std::move(c));
        }
      }
      break;
    case ExperimentKind::disorder_spectra:
      out.emplace_back("qasm/fcqw_step_clean.qasm",
                       build_fcqw_step(cfg.L, PotentialProfile::zero(cfg.L)));
      break;
    case ExperimentKind::amplitude_scaling: {
      std::set<std::size_t> sizes;
      if (cfg.axis == SweepAxis::steps_at_fixed_L) {
        sizes.insert(cfg.L);
      } else {
        sizes.insert(cfg.range.begin(), cfg.range.end());
      }
      for (std::size_t L : sizes) {
        out.emplace_back("qasm/fcqw_step_L" + std::to_string(L) + ".qasm",
                         build_fcqw_step(L, PotentialProfile::zero(L)));
      }
      break;
    }
  }
  return out;
}

void add_check(std::vector<CheckResult>& checks, std::string name, bool pass, std::string detail) {
  checks.push_back({std::move(name), pass, std::move(detail)});
}

std::size_t circular_distance(std::size_t a, std::size_t b, std::size_t L) {
  const std::size_t d = a > b ? a - b : b - a;
  return std::min(d, L - d);
}

// ---------------------------------------------------------------------------
// Experiments

struct WalkRow {
  double W;
  std::size_t step;
  SiteDistribution pp;
  SiteDistribution raw;
  double ipr;
  double peak;
  double ipr_raw;
  double peak_raw;
};

std::vector<CheckResult> run_chiral(const ExperimentConfig& cfg, ResultWriter& out) {
  const std::size_t L = cfg.L;
  const std::size_t start = cfg.start_site - 1;
  std::vector<WalkRow> rows;

  for (std::size_t wi = 0; wi < cfg.W.size(); ++wi) {
    const double W = cfg.W[wi];
    const PotentialProfile profile = profile_for(cfg, W);
    const Circuit step = build_fcqw_step(L, profile);

    if (!cfg.noise) {
      std::vector<std::size_t> sorted = cfg.steps;
      std::sort(sorted.begin(), sorted.end());
      std::map<std::size_t, SiteDistribution> at;
      if (L <= kStatevectorMaxQubits) {
        StateVector state = one_hot_state(L, start);
        std::size_t t = 0;
        for (std::size_t target : sorted) {
          for (; t < target; ++t) run(step, state);
          at[target] = post_process(site_density_exact(state));
        }
      } else {
        const SingleParticleOperator U = reduce_to_single_particle(step);
        Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(L));
        psi(static_cast<Eigen::Index>(start)) = 1.0;
        std::size_t t = 0;
        for (std::size_t target : sorted) {
          for (; t < target; ++t) psi = U.matrix() * psi;
          at[target] = site_density_single_particle({psi.data(), L});
        }
      }
      for (std::size_t t : cfg.steps) {
        const SiteDistribution& d = at.at(t);
        const double value = ipr(d);
        const double peak = peak_amplitude(d, (start + t) % L);
        rows.push_back({W, t, d, d, value, peak, value, peak});
      }
      continue;
    }

    for (std::size_t t : cfg.steps) {
      NoiseSpec spec = *cfg.noise;
      spec.seed = stream_seed(cfg.noise->seed, wi * 1000003ULL + t);
      const ShotResult shots = run_noisy(build_fcqw(L, profile, t), one_hot_state(L, start), spec,
                                         cfg.shots);
      out.write("counts/W" + fmt(W) + "_t" + std::to_string(t) + ".json", shots.to_json() + "\n");
      const SiteDistribution raw = site_density_counts(shots, L);
      const SiteDistribution pp = post_process(raw);
      const std::size_t site = (start + t) % L;
      rows.push_back({W, t, pp, raw, ipr(pp), peak_amplitude(pp, site), raw_ipr(raw),
                      exact_string_fraction(shots, L, site)});
    }
  }

  std::ostringstream sites, summary;
  sites << "W,step,site,probability,raw_density\n";
  summary << "W,step,ipr,peak_amplitude,ipr_raw,peak_raw\n";
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < L; ++i) {
      sites << fmt(r.W) << ',' << r.step << ',' << i + 1 << ',' << fmt(r.pp.p[i]) << ','
            << fmt(r.raw.p[i]) << '\n';
    }
    summary << fmt(r.W) << ',' << r.step << ',' << fmt(r.ipr) << ',' << fmt(r.peak) << ','
            << fmt(r.ipr_raw) << ',' << fmt(r.peak_raw) << '\n';
  }
  out.write("sites.csv", sites.str());
  out.write("summary.csv", summary.str());

  std::vector<CheckResult> checks;
  if (!cfg.noise) {
    double worst = 0.0;
    for (const auto& r : rows) worst = std::max(worst, std::abs(r.peak - 1.0));
    add_check(checks, "ballistic_propagation", worst < 1e-12,
              "max |P(start+t) - 1| = " + fmt(worst) + " (tolerance 1e-12)");
    if (cfg.kind == ExperimentKind::chiral_robustness) {
      double worst_ipr = 0.0;
      for (const auto& r : rows) worst_ipr = std::max(worst_ipr, std::abs(r.ipr - 1.0));
      add_check(checks, "ipr_constant", worst_ipr < 1e-12,
                "max |IPR - 1| = " + fmt(worst_ipr) + " (tolerance 1e-12)");
    }
  } else {
    bool ok = true;
    std::string detail = "post-processed peak > raw one-hot fraction at every step t > 0";
    for (const auto& r : rows) {
      if (r.step > 0 && !(r.peak > r.peak_raw)) {
        ok = false;
        detail += "; fails at W=" + fmt(r.W) + " t=" + std::to_string(r.step);
      }
    }
    add_check(checks, "post_processing_benefit", ok, detail);
  }
  if (cfg.kind == ExperimentKind::chiral_robustness) {
    double worst_ipr = 0.0, worst_peak = 0.0;
    for (const auto& r : rows) {
      const auto ref = std::find_if(rows.begin(), rows.end(), [&](const WalkRow& o) {
        return o.W == 0.0 && o.step == r.step;
      });
      worst_ipr = std::max(worst_ipr, std::abs(r.ipr - ref->ipr) / ref->ipr);
      if (ref->peak > 0.0) worst_peak = std::max(worst_peak, std::abs(r.peak - ref->peak) / ref->peak);
    }
    add_check(checks, "ipr_relative_difference", worst_ipr < 0.10,
              "max |IPR(W) - IPR(0)| / IPR(0) = " + fmt(worst_ipr) + " (threshold 0.10)");
    add_check(checks, "peak_relative_difference", worst_peak < 0.10,
              "max |peak(W) - peak(0)| / peak(0) = " + fmt(worst_peak) + " (threshold 0.10)");
  }
  return checks;
}

std::vector<CheckResult> run_nonchiral(const ExperimentConfig& cfg, ResultWriter& out) {
  const std::size_t L = cfg.L;
  const std::size_t start = cfg.start_site - 1;
  struct Row {
    double W, t;
    std::string method;
    SiteDistribution d;
    double ipr, peak, leakage;
  };
  std::vector<Row> rows;
  auto leakage = [&](const SiteDistribution& d) {
    double acc = 0.0;
    for (std::size_t i = 0; i < L; ++i) {
      const std::size_t dist =
          cfg.periodic ? circular_distance(i, start, L) : (i > start ? i - start : start - i);
      if (dist > cfg.barrier_width) acc += d.p[i];
    }
    return acc;
  };
  auto push = [&](double W, double t, std::string method, SiteDistribution d) {
    const double value = ipr(d);
    const double peak = peak_amplitude(d, start);
    const double leak = leakage(d);
    rows.push_back({W, t, std::move(method), std::move(d), value, peak, leak});
  };

  std::size_t circuit_index = 0;
  for (double W : cfg.W) {
    const PotentialProfile profile = profile_for(cfg, W);
    const Eigen::MatrixXcd H = xy_single_particle_hamiltonian(L, profile, cfg.J, cfg.periodic);
    for (double t : cfg.times) {
      const SingleParticleOperator exact = hermitian_propagator(H, t);
      const Eigen::VectorXcd psi = exact.matrix().col(static_cast<Eigen::Index>(start));
      push(W, t, "exact", site_density_single_particle({psi.data(), L}));

      const Circuit circuit = build_xy_trotter(L, profile, trotter_for(cfg, t));
      if (cfg.noise) {
        NoiseSpec spec = *cfg.noise;
        spec.seed = stream_seed(cfg.noise->seed, circuit_index);
        const ShotResult shots = run_noisy(circuit, one_hot_state(L, start), spec, cfg.shots);
        out.write("counts/W" + fmt(W) + "_t" + fmt(t) + ".json", shots.to_json() + "\n");
        push(W, t, "trotter", post_process(site_density_counts(shots, L)));
      } else if (cfg.ordering == TrotterOrdering::pairwise) {
        const SingleParticleOperator U = reduce_to_single_particle(circuit);
        const Eigen::VectorXcd phi = U.matrix().col(static_cast<Eigen::Index>(start));
        push(W, t, "trotter", site_density_single_particle({phi.data(), L}));
      } else {
        StateVector state = one_hot_state(L, start);
        run(circuit, state);
        push(W, t, "trotter", post_process(site_density_exact(state)));
      }
      ++circuit_index;
    }
  }

  std::ostringstream sites, summary;
  sites << "W,time,method,site,probability\n";
  summary << "W,time,method,ipr,peak_amplitude,barrier_leakage\n";
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < L; ++i) {
      sites << fmt(r.W) << ',' << fmt(r.t) << ',' << r.method << ',' << i + 1 << ','
            << fmt(r.d.p[i]) << '\n';
    }
    summary << fmt(r.W) << ',' << fmt(r.t) << ',' << r.method << ',' << fmt(r.ipr) << ','
            << fmt(r.peak) << ',' << fmt(r.leakage) << '\n';
  }
  out.write("sites.csv", sites.str());
  out.write("summary.csv", summary.str());

  const double w_max = *std::max_element(cfg.W.begin(), cfg.W.end());
  const double t_last = *std::max_element(cfg.times.begin(), cfg.times.end());
  auto find = [&](double W, double t) {
    return std::find_if(rows.begin(), rows.end(), [&](const Row& r) {
      return r.method == "exact" && r.W == W && r.t == t;
    });
  };
  std::vector<CheckResult> checks;
  const double ratio = find(w_max, t_last)->ipr / find(0.0, t_last)->ipr;
  add_check(checks, "localization_ipr_ratio", ratio >= 2.0,
            "exact IPR(t=" + fmt(t_last) + ", W=" + fmt(w_max) + ") / IPR(W=0) = " + fmt(ratio) +
                " (threshold 2)");
  double worst_leak = 0.0;
  for (const auto& r : rows) {
    if (r.method == "exact" && r.W == w_max) worst_leak = std::max(worst_leak, r.leakage);
  }
  add_check(checks, "barrier_confinement", worst_leak < 0.2,
            "max exact probability beyond the barrier at W=" + fmt(w_max) + ": " +
                fmt(worst_leak) + " (threshold 0.2)");
  return checks;
}

std::vector<CheckResult> run_spectra(const ExperimentConfig& cfg, ResultWriter& out) {
  const std::size_t L = cfg.L;
  struct Realization {
    QuasiEnergySpectrum chiral, nonchiral;
    LevelSpacingStats chiral_stats, nonchiral_stats;
    double shift = 0.0;
    double shift_error = 0.0;
  };

  std::ostringstream spectra, levels, shifts, summary;
  spectra << "W,realization,model,index,eigenphase\n";
  levels << "W,realization,model,mean_spacing,spacing_variance,min_spacing\n";
  shifts << "W,realization,global_shift,max_deviation\n";
  summary << "W,model,mean_spacing_variance,max_spacing_variance\n";

  double worst_chiral_var = 0.0, worst_shift = 0.0;
  bool levels_respond = true;
  std::string respond_detail;

  for (double W : cfg.W) {
    const DisorderEnsemble ens{cfg.realizations, W, cfg.distribution, cfg.seed};
    std::vector<Realization> results(cfg.realizations);
    parallel_for(cfg.realizations, [&](std::size_t r) {
      const PotentialProfile profile = disorder_profile(ens, L, r);
      Realization& res = results[r];
      const SingleParticleOperator U = reduce_to_single_particle(build_fcqw_step(L, profile));
      res.chiral = quasi_energy_spectrum(U);
      res.chiral_stats = level_spacing_stats(res.chiral);
      const std::vector<double> phases = onsite_site_phases(profile);
      double total = 0.0;
      for (double p : phases) total += p;
      res.shift = total / static_cast<double>(L);
      const std::vector<double> predicted = chiral_eigenphases(phases);
      for (std::size_t n = 0; n < L; ++n) {
        const double d = std::abs(std::remainder(res.chiral.eigenphases[n] - predicted[n], kTwoPi));
        res.shift_error = std::max(res.shift_error, d);
      }
      const Eigen::MatrixXcd H = xy_single_particle_hamiltonian(L, profile, cfg.J, cfg.periodic);
      res.nonchiral = quasi_energy_spectrum(hermitian_propagator(H, cfg.dt));
      res.nonchiral_stats = level_spacing_stats(res.nonchiral);
    });

    double chiral_sum = 0.0, chiral_max = 0.0, non_sum = 0.0, non_max = 0.0;
    for (std::size_t r = 0; r < results.size(); ++r) {
      const Realization& res = results[r];
      for (const auto& [model, spec, stats] :
           {std::tuple{"chiral", &res.chiral, &res.chiral_stats},
            std::tuple{"nonchiral", &res.nonchiral, &res.nonchiral_stats}}) {
        for (std::size_t n = 0; n < spec->eigenphases.size(); ++n) {
          spectra << fmt(W) << ',' << r << ',' << model << ',' << n << ','
                  << fmt(spec->eigenphases[n]) << '\n';
        }
        levels << fmt(W) << ',' << r << ',' << model << ',' << fmt(stats->mean_spacing) << ','
               << fmt(stats->spacing_variance) << ',' << fmt(stats->min_spacing) << '\n';
      }
      shifts << fmt(W) << ',' << r << ',' << fmt(res.shift) << ',' << fmt(res.shift_error) << '\n';
      chiral_sum += res.chiral_stats.spacing_variance;
      chiral_max = std::max(chiral_max, res.chiral_stats.spacing_variance);
      non_sum += res.nonchiral_stats.spacing_variance;
      non_max = std::max(non_max, res.nonchiral_stats.spacing_variance);
      worst_shift = std::max(worst_shift, res.shift_error);
    }
    const auto count = static_cast<double>(results.size());
    summary << fmt(W) << ",chiral," << fmt(chiral_sum / count) << ',' << fmt(chiral_max) << '\n';
    summary << fmt(W) << ",nonchiral," << fmt(non_sum / count) << ',' << fmt(non_max) << '\n';
    worst_chiral_var = std::max(worst_chiral_var, chiral_max);
    if (W != 0.0 && !(non_sum / count > chiral_max)) {
      levels_respond = false;
      respond_detail += " fails at W=" + fmt(W) + ";";
    }
  }

  // Clean-lattice topology: winding numbers and the effective Hamiltonian.
  const auto chiral_family = chiral_momentum_family(256);
  const auto xy_family = xy_momentum_family(256, cfg.J, cfg.dt);
  const WindingNumber w_chiral = winding_number(chiral_family);
  const WindingNumber w_xy = winding_number(xy_family);
  std::ostringstream winding;
  winding << "model,winding,raw\n";
  winding << "chiral," << w_chiral.value << ',' << fmt(w_chiral.raw) << '\n';
  winding << "nonchiral," << w_xy.value << ',' << fmt(w_xy.raw) << '\n';

  const SingleParticleOperator clean =
      reduce_to_single_particle(build_fcqw_step(L, PotentialProfile::zero(L)));
  const Eigen::MatrixXcd hf = effective_hamiltonian(clean, BranchCut::take_upper);
  std::ostringstream hf_csv;
  write_matrix_csv(hf_csv, hf);

  out.write("spectra.csv", spectra.str());
  out.write("levels.csv", levels.str());
  out.write("shifts.csv", shifts.str());
  out.write("summary.csv", summary.str());
  out.write("winding.csv", winding.str());
  out.write("hf_clean.csv", hf_csv.str());

  std::vector<CheckResult> checks;
  add_check(checks, "chiral_spacing_uniform", worst_chiral_var < 1e-18,
            "max chiral spacing variance " + fmt(worst_chiral_var) + " (threshold 1e-18)");
  add_check(checks, "chiral_shift_law", worst_shift < 1e-9,
            "max deviation from (sum phi + 2 pi n)/L: " + fmt(worst_shift) + " (tolerance 1e-9)");
  add_check(checks, "nonchiral_levels_respond", levels_respond,
            "mean non-chiral spacing variance exceeds every chiral one at each W > 0" +
                respond_detail);
  add_check(checks, "winding_chiral", w_chiral.value == 1,
            "w = " + std::to_string(w_chiral.value) + " (raw " + fmt(w_chiral.raw) + ")");
  add_check(checks, "winding_nonchiral", w_xy.value == 0,
            "w = " + std::to_string(w_xy.value) + " (raw " + fmt(w_xy.raw) + ")");
  return checks;
}

std::vector<CheckResult> run_scaling(const ExperimentConfig& cfg, ResultWriter& out) {
  const NoiseSpec spec = cfg.noise.value_or(NoiseSpec::noiseless(cfg.seed));
  const auto points = amplitude_decay_sweep(cfg.axis, spec, cfg.range, {cfg.L, cfg.shots});

  std::ostringstream sweep, summary;
  sweep << "x,peak_amplitude,raw_peak,sigma\n";
  for (const auto& p : points) {
    sweep << fmt(p.x) << ',' << fmt(p.peak) << ',' << fmt(p.raw_peak) << ',' << fmt(p.sigma) << '\n';
  }
  out.write("sweep.csv", sweep.str());

  std::vector<CheckResult> checks;
  if (spec.is_noiseless()) {
    double worst = 0.0;
    for (const auto& p : points) worst = std::max(worst, std::abs(p.peak - 1.0));
    add_check(checks, "ideal_amplitude", worst < 1e-12, "max |peak - 1| = " + fmt(worst));
    summary << "regressor,slope,intercept,r2\n";
    out.write("summary.csv", summary.str());
    return checks;
  }

  std::vector<double> x, x2, logp;
  for (const auto& p : points) {
    x.push_back(p.x);
    x2.push_back(p.x * p.x);
    logp.push_back(std::log(std::max(p.peak, 1e-300)));
  }
  summary << "regressor,slope,intercept,r2\n";
  const std::string xname = cfg.axis == SweepAxis::steps_at_fixed_L ? "t" : "L";
  const LinearFit lin = fit_line(x, logp);
  summary << xname << ',' << fmt(lin.slope) << ',' << fmt(lin.intercept) << ',' << fmt(lin.r2) << '\n';
  if (cfg.axis == SweepAxis::steps_at_fixed_L) {
    bool monotone = true;
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
      const double slack = 2.0 * std::hypot(points[i].sigma, points[i + 1].sigma);
      if (points[i + 1].peak > points[i].peak + slack) monotone = false;
    }
    add_check(checks, "monotone_decay", monotone,
              "peak amplitude non-increasing in t within 2 sigma");
    if (points.size() >= 3) {
      add_check(checks, "log_linear_in_t", lin.r2 >= 0.9,
                "R^2 of log(peak) vs t = " + fmt(lin.r2) + " (threshold 0.9)");
    }
  } else {
    const LinearFit quad = fit_line(x2, logp);
    summary << "L^2," << fmt(quad.slope) << ',' << fmt(quad.intercept) << ',' << fmt(quad.r2) << '\n';
    if (points.size() >= 3) {
      add_check(checks, "quadratic_size_scaling", quad.r2 > lin.r2,
                "R^2 vs L^2 = " + fmt(quad.r2) + ", vs L = " + fmt(lin.r2));
    }
  }
  out.write("summary.csv", summary.str());
  return checks;
}

json checks_to_json(const std::vector<CheckResult>& checks) {
  json arr = json::array();
  bool all = true;
  for (const auto& c : checks) {
    arr.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    all = all && c.pass;
  }
  return {{"all_pass", all}, {"checks", arr}};
}

}  // namespace

std::string_view to_string(ExperimentKind kind) {
  for (const auto& [name, k] : kKinds) {
    if (k == kind) return name;
  }
  return "?";
}

bool RunSummary::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

ExperimentConfig parse_config(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw FormatError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw FormatError("config must be a JSON object");

  std::vector<std::string> errors;
  ExperimentConfig cfg;
  if (!doc.contains("kind") || !doc["kind"].is_string() ||
      !kKinds.contains(doc["kind"].get<std::string>())) {
    std::string names;
    for (const auto& [name, _] : kKinds) names += (names.empty() ? "" : ", ") + name;
    throw ValidationError({"kind: required, one of " + names});
  }
  cfg.kind = kKinds.at(doc["kind"].get<std::string>());
  apply_defaults(cfg);

  const auto allowed = allowed_keys(cfg.kind);
  for (const auto& [key, _] : doc.items()) {
    if (!allowed.contains(key)) {
      errors.push_back(key + ": unknown key for kind " + std::string(to_string(cfg.kind)));
    }
  }

  ConfigReader r(doc, errors);
  r.unsigned_field("L", cfg.L);
  r.unsigned_field("seed", cfg.seed);
  std::string out_dir;
  r.string_field("output_dir", out_dir);
  if (!doc.contains("output_dir")) errors.push_back("output_dir: required");
  cfg.output_dir = out_dir;

  if (allowed.contains("steps")) r.unsigned_list("steps", cfg.steps);
  if (allowed.contains("times")) r.real_list("times", cfg.times, false);
  if (allowed.contains("W")) r.real_list("W", cfg.W, true);
  if (allowed.contains("barrier_width")) r.unsigned_field("barrier_width", cfg.barrier_width);
  if (allowed.contains("start_site")) r.unsigned_field("start_site", cfg.start_site);
  if (allowed.contains("trotter_n")) r.unsigned_field("trotter_n", cfg.trotter_n);
  if (allowed.contains("J")) r.real_field("J", cfg.J);
  if (allowed.contains("periodic")) r.bool_field("periodic", cfg.periodic);
  if (allowed.contains("shots")) r.unsigned_field("shots", cfg.shots);
  if (allowed.contains("realizations")) r.unsigned_field("realizations", cfg.realizations);
  if (allowed.contains("dt")) r.real_field("dt", cfg.dt);
  if (allowed.contains("range")) r.unsigned_list("range", cfg.range);
  if (allowed.contains("noise") && doc.contains("noise")) {
    parse_noise(doc["noise"], cfg.seed, cfg, errors);
  }

  if (allowed.contains("profile") && doc.contains("profile")) {
    std::string p;
    r.string_field("profile", p);
    if (p == "box") {
      cfg.profile = ProfileKind::box;
    } else if (p == "uniform") {
      cfg.profile = ProfileKind::uniform;
    } else if (p == "custom") {
      cfg.profile = ProfileKind::custom;
    } else {
      errors.push_back("profile: must be box, uniform or custom");
    }
  }
  if (allowed.contains("u")) {
    r.real_list("u", cfg.custom_u, false);
    if (cfg.profile == ProfileKind::custom && !doc.contains("u")) {
      errors.push_back("u: required when profile is custom");
    }
    if (cfg.profile != ProfileKind::custom && doc.contains("u")) {
      errors.push_back("u: only valid with profile custom");
    }
  }
  if (allowed.contains("trotter_ordering") && doc.contains("trotter_ordering")) {
    std::string o;
    r.string_field("trotter_ordering", o);
    if (o == "pairwise") {
      cfg.ordering = TrotterOrdering::pairwise;
    } else if (o == "layered") {
      cfg.ordering = TrotterOrdering::layered;
    } else {
      errors.push_back("trotter_ordering: must be pairwise or layered");
    }
  }
  if (allowed.contains("distribution") && doc.contains("distribution")) {
    std::string d;
    r.string_field("distribution", d);
    if (d == "uniform_symmetric") {
      cfg.distribution = DisorderDistribution::uniform_symmetric;
    } else if (d == "box_profile") {
      cfg.distribution = DisorderDistribution::box_profile;
    } else {
      errors.push_back("distribution: must be uniform_symmetric or box_profile");
    }
  }
  if (allowed.contains("axis") && doc.contains("axis")) {
    std::string a;
    r.string_field("axis", a);
    if (a == "steps_at_fixed_L") {
      cfg.axis = SweepAxis::steps_at_fixed_L;
    } else if (a == "size_with_t_equals_L") {
      cfg.axis = SweepAxis::size_with_t_equals_L;
    } else {
      errors.push_back("axis: must be steps_at_fixed_L or size_with_t_equals_L");
    }
  }
  if (cfg.kind == ExperimentKind::amplitude_scaling && cfg.range.empty()) {
    if (cfg.axis == SweepAxis::steps_at_fixed_L) {
      cfg.range = {1, 2, 3, 4, 5, 6, 7, 8};
    } else {
      cfg.range = {4, 6, 8, 10};
    }
  }

  // Semantic checks.
  const std::size_t max_L =
      cfg.kind == ExperimentKind::disorder_spectra ? kSpectraMaxSites : kMaxQubits;
  if (cfg.L < 2 || cfg.L > max_L) {
    errors.push_back("L: must lie in [2, " + std::to_string(max_L) + "]");
  }
  const bool uses_profile = is_chiral(cfg.kind) || cfg.kind == ExperimentKind::nonchiral_localization;
  if (uses_profile) {
    if (cfg.start_site < 1 || cfg.start_site > cfg.L) {
      errors.push_back("start_site: must lie in [1, L]");
    }
    if (cfg.profile == ProfileKind::box && 2 * cfg.barrier_width + 1 > cfg.L) {
      errors.push_back("barrier_width: box does not fit in L sites");
    }
    if (cfg.profile == ProfileKind::custom && cfg.custom_u.size() != cfg.L) {
      errors.push_back("u: must have exactly L entries");
    }
    if (cfg.shots < 1) errors.push_back("shots: must be >= 1");
  }
  if ((cfg.kind == ExperimentKind::chiral_robustness ||
       cfg.kind == ExperimentKind::nonchiral_localization) &&
      std::find(cfg.W.begin(), cfg.W.end(), 0.0) == cfg.W.end()) {
    errors.push_back("W: must include the clean reference W = 0");
  }
  if (cfg.kind == ExperimentKind::nonchiral_localization) {
    if (cfg.trotter_n < 1) errors.push_back("trotter_n: must be >= 1");
    if (std::any_of(cfg.times.begin(), cfg.times.end(), [](double t) { return t < 0.0; })) {
      errors.push_back("times: must be >= 0");
    }
    if (cfg.periodic && cfg.L < 3) errors.push_back("periodic: needs L >= 3");
    if (cfg.ordering == TrotterOrdering::layered && !cfg.noise && cfg.L > kStatevectorMaxQubits) {
      errors.push_back("trotter_ordering: layered circuits above L = 16 are not simulated");
    }
  }
  if (cfg.kind == ExperimentKind::disorder_spectra) {
    if (cfg.realizations < 1) errors.push_back("realizations: must be >= 1");
    if (cfg.periodic && cfg.L < 3) errors.push_back("periodic: needs L >= 3");
  }
  if (cfg.kind == ExperimentKind::amplitude_scaling) {
    if (cfg.shots < 1) errors.push_back("shots: must be >= 1");
    if (cfg.axis == SweepAxis::size_with_t_equals_L &&
        std::any_of(cfg.range.begin(), cfg.range.end(),
                    [](std::size_t L) { return L < 2 || L > kMaxQubits; })) {
      errors.push_back("range: sizes must lie in [2, " + std::to_string(kMaxQubits) + "]");
    }
  }
  if (!errors.empty()) throw ValidationError(std::move(errors));
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  return parse_config(read_file(path));
}

std::string resolved_config_json(const ExperimentConfig& cfg) {
  json j;
  j["kind"] = std::string(to_string(cfg.kind));
  j["L"] = cfg.L;
  j["seed"] = cfg.seed;
  j["output_dir"] = cfg.output_dir.generic_string();
  const auto noise_json = [&]() -> json {
    if (!cfg.noise) return nullptr;
    return {{"p_cnot", cfg.noise->p_cnot}, {"p_1q", cfg.noise->p_1q},
            {"p_readout", cfg.noise->p_readout}, {"seed", cfg.noise->seed}};
  };
  switch (cfg.kind) {
    case ExperimentKind::chiral_propagation:
    case ExperimentKind::chiral_robustness:
    case ExperimentKind::nonchiral_localization:
      if (is_chiral(cfg.kind)) {
        j["steps"] = cfg.steps;
      } else {
        j["times"] = cfg.times;
        j["trotter_n"] = cfg.trotter_n;
        j["J"] = cfg.J;
        j["periodic"] = cfg.periodic;
        j["trotter_ordering"] = ordering_name(cfg.ordering);
      }
      j["W"] = cfg.W;
      j["profile"] = profile_name(cfg.profile);
      if (cfg.profile == ProfileKind::custom) j["u"] = cfg.custom_u;
      if (cfg.profile == ProfileKind::box) j["barrier_width"] = cfg.barrier_width;
      j["start_site"] = cfg.start_site;
      j["noise"] = noise_json();
      j["shots"] = cfg.shots;
      break;
    case ExperimentKind::disorder_spectra:
      j["W"] = cfg.W;
      j["realizations"] = cfg.realizations;
      j["distribution"] = distribution_name(cfg.distribution);
      j["dt"] = cfg.dt;
      j["J"] = cfg.J;
      j["periodic"] = cfg.periodic;
      break;
    case ExperimentKind::amplitude_scaling:
      j["axis"] = axis_name(cfg.axis);
      j["range"] = cfg.range;
      j["noise"] = noise_json();
      j["shots"] = cfg.shots;
      break;
  }
  return j.dump();
}

std::string git_blob_hash(std::string_view content) {
  std::string blob = "blob " + std::to_string(content.size());
  blob.push_back('\0');
  blob.append(content);
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(blob.data(), blob.size(), md, &len, EVP_sha1(), nullptr) != 1) {
    throw Error("SHA-1 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) {
    hex.push_back(kHex[md[i] >> 4]);
    hex.push_back(kHex[md[i] & 0xF]);
  }
  return hex;
}

RunSummary run_experiment(const ExperimentConfig& cfg) {
  if (cfg.output_dir.empty()) throw IoError("output_dir is empty");
  std::error_code ec;
  std::filesystem::create_directories(cfg.output_dir, ec);
  if (ec || !std::filesystem::is_directory(cfg.output_dir)) {
    throw IoError("cannot create output directory " + cfg.output_dir.string() +
                  (ec ? ": " + ec.message() : ""));
  }
  ResultWriter out(cfg.output_dir);
  for (const auto& [name, circuit] : planned_circuits(cfg)) out.write(name, emit_qasm3(circuit));

  std::vector<CheckResult> checks;
  switch (cfg.kind) {
    case ExperimentKind::chiral_propagation:
    case ExperimentKind::chiral_robustness:
      checks = run_chiral(cfg, out);
      break;
    case ExperimentKind::nonchiral_localization:
      checks = run_nonchiral(cfg, out);
      break;
    case ExperimentKind::disorder_spectra:
      checks = run_spectra(cfg, out);
      break;
    case ExperimentKind::amplitude_scaling:
      checks = run_scaling(cfg, out);
      break;
  }
  out.write("checks.json", checks_to_json(checks).dump(2) + "\n");

  const std::string resolved = resolved_config_json(cfg);
  json manifest;
  manifest["config"] = json::parse(resolved);
  manifest["config_hash"] = git_blob_hash(resolved);
  manifest["files"] = out.hashes();
  if (cfg.kind == ExperimentKind::nonchiral_localization) {
    manifest["notes"]["time_sampling"] =
        "measurement times as listed in config.times; default is six uniform points 0.1..2.0";
  }
  if (cfg.noise) {
    manifest["notes"]["noise_seeds"] =
        "each (W, step) circuit uses its own stream derived from noise.seed";
  }
  ResultWriter meta(cfg.output_dir);
  meta.write("manifest.json", manifest.dump(2) + "\n");
  return {cfg.output_dir, std::move(checks)};
}

std::vector<std::filesystem::path> emit_qasm_files(const ExperimentConfig& cfg) {
  if (cfg.output_dir.empty()) throw IoError("output_dir is empty");
  ResultWriter out(cfg.output_dir);
  for (const auto& [name, circuit] : planned_circuits(cfg)) out.write(name, emit_qasm3(circuit));
  return out.paths();
}

RunSummary check_result_dir(const std::filesystem::path& dir) {
  RunSummary summary{dir, {}};
  json manifest, checks;
  try {
    manifest = json::parse(read_file(dir / "manifest.json"));
    checks = json::parse(read_file(dir / "checks.json"));
  } catch (const json::exception& e) {
    throw FormatError(std::string("result directory holds malformed JSON: ") + e.what());
  }
  if (!manifest.contains("files") || !manifest["files"].is_object() ||
      !checks.contains("checks") || !checks["checks"].is_array()) {
    throw FormatError("manifest.json or checks.json lacks its expected fields");
  }
  for (const auto& [rel, hash] : manifest["files"].items()) {
    std::string actual;
    try {
      actual = git_blob_hash(read_file(dir / rel));
    } catch (const IoError&) {
      actual = "missing";
    }
    if (actual != hash.get<std::string>()) {
      add_check(summary.checks, "manifest:" + rel, false,
                "expected " + hash.get<std::string>() + ", found " + actual);
    }
  }
  for (const auto& c : checks["checks"]) {
    summary.checks.push_back({c.value("name", std::string{}), c.value("pass", false),
                              c.value("detail", std::string{})});
  }
  return summary;
}

}  // namespace fcqw
