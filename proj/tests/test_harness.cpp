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

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "fcqw/circuit.hpp"
#include "fcqw/errors.hpp"
#include "fcqw/harness.hpp"
#include "json.hpp"

namespace fcqw {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("fcqw_harness_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(slurp(p));
  for (std::string line; std::getline(in, line);) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    for (std::string cell; std::getline(ls, cell, ',');) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

ExperimentConfig config_for(const std::string& kind, const fs::path& out, const std::string& extra = "") {
  return parse_config(R"({"kind":")" + kind + R"(","output_dir":")" + out.generic_string() + "\"" + extra + "}");
}

std::vector<std::string> validation_fields(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ValidationError& e) {
    return e.fields();
  }
  return {};
}

bool mentions(const std::vector<std::string>& fields, const std::string& key) {
  for (const auto& f : fields) {
    if (f.rfind(key + ":", 0) == 0) return true;
  }
  return false;
}

TEST(Config, KindDefaultsMirrorTheReferenceProtocols) {
  const auto chiral = config_for("chiral_propagation", "x");
  EXPECT_EQ(chiral.L, 8u);
  EXPECT_EQ(chiral.steps, (std::vector<std::size_t>{2, 5, 8}));
  EXPECT_EQ(chiral.start_site, 1u);
  EXPECT_EQ(chiral.shots, 7000u);
  EXPECT_FALSE(chiral.noise.has_value());

  const auto loc = config_for("nonchiral_localization", "x");
  EXPECT_EQ(loc.times, (std::vector<double>{0.1, 0.48, 0.86, 1.24, 1.62, 2.0}));
  EXPECT_EQ(loc.W, (std::vector<double>{0, 3, 6}));
  EXPECT_EQ(loc.start_site, 4u);
  EXPECT_EQ(loc.trotter_n, 2u);
  EXPECT_FALSE(loc.periodic);

  const auto spectra = config_for("disorder_spectra", "x");
  EXPECT_EQ(spectra.L, 20u);
  EXPECT_EQ(spectra.realizations, 100u);

  const auto sweep = config_for("amplitude_scaling", "x", R"(,"axis":"size_with_t_equals_L")");
  EXPECT_EQ(sweep.range, (std::vector<std::size_t>{4, 6, 8, 10}));
  EXPECT_EQ(sweep.shots, 2000u);
}

TEST(Config, NoiseBlockFillsDefaultsAndInheritsSeed) {
  const auto cfg = config_for("chiral_propagation", "x", R"(,"seed":9,"noise":{"p_cnot":0.01})");
  ASSERT_TRUE(cfg.noise.has_value());
  EXPECT_EQ(cfg.noise->p_cnot, 0.01);
  EXPECT_EQ(cfg.noise->p_1q, 3e-4);
  EXPECT_EQ(cfg.noise->p_readout, 1e-2);
  EXPECT_EQ(cfg.noise->seed, 9u);
  EXPECT_FALSE(config_for("chiral_propagation", "x", R"(,"noise":null)").noise.has_value());
}

TEST(Config, RejectsUnknownAndMisplacedKeysTogether) {
  const auto fields = validation_fields(
      R"({"kind":"chiral_propagation","output_dir":"x","times":[1],"colour":"red","L":30,"noise":{"p_cnot":2,"extra":1}})");
  EXPECT_TRUE(mentions(fields, "times"));
  EXPECT_TRUE(mentions(fields, "colour"));
  EXPECT_TRUE(mentions(fields, "L"));
  EXPECT_TRUE(mentions(fields, "noise.p_cnot"));
  EXPECT_TRUE(mentions(fields, "noise.extra"));
}

TEST(Config, NamedFieldErrors) {
  EXPECT_TRUE(mentions(validation_fields(R"({"kind":"chiral_propagation"})"), "output_dir"));
  EXPECT_TRUE(mentions(validation_fields(R"({"kind":"warp","output_dir":"x"})"), "kind"));
  EXPECT_TRUE(mentions(validation_fields(R"({"output_dir":"x"})"), "kind"));
  EXPECT_TRUE(mentions(validation_fields(R"({"kind":"chiral_robustness","output_dir":"x","W":[1,2]})"), "W"));
  EXPECT_TRUE(mentions(validation_fields(R"({"kind":"chiral_propagation","output_dir":"x","start_site":0})"), "start_site"));
  EXPECT_TRUE(mentions(validation_fields(R"({"kind":"chiral_propagation","output_dir":"x","profile":"custom"})"), "u"));
  EXPECT_TRUE(mentions(validation_fields(R"({"kind":"chiral_propagation","output_dir":"x","profile":"custom","u":[1,2]})"), "u"));
  EXPECT_TRUE(mentions(validation_fields(R"({"kind":"chiral_propagation","output_dir":"x","steps":[-1]})"), "steps"));
  EXPECT_TRUE(mentions(validation_fields(R"({"kind":"nonchiral_localization","output_dir":"x","trotter_n":0})"), "trotter_n"));
  EXPECT_TRUE(mentions(validation_fields(R"({"kind":"nonchiral_localization","output_dir":"x","trotter_ordering":"random"})"), "trotter_ordering"));
  EXPECT_TRUE(mentions(validation_fields(R"({"kind":"disorder_spectra","output_dir":"x","realizations":0})"), "realizations"));
  EXPECT_TRUE(mentions(validation_fields(R"({"kind":"amplitude_scaling","output_dir":"x","axis":"diag"})"), "axis"));
  EXPECT_TRUE(mentions(validation_fields(R"({"kind":"chiral_propagation","output_dir":"x","L":4,"barrier_width":2})"), "barrier_width"));
}

TEST(Config, MalformedJsonIsAFormatError) {
  EXPECT_THROW(parse_config("{\"kind\":"), FormatError);
  EXPECT_THROW(parse_config("[1,2]"), FormatError);
  try {
    parse_config(R"({"kind":"chiral_propagation","output_dir":"x","bogus":1})");
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("bogus"), std::string::npos);
  }
}

TEST(Config, ShippedConfigsParse) {
  std::size_t n = 0;
  for (const auto& entry : fs::directory_iterator(FCQW_CONFIG_DIR)) {
    if (entry.path().extension() != ".json") continue;
    EXPECT_NO_THROW(load_config(entry.path())) << entry.path();
    ++n;
  }
  EXPECT_GE(n, 5u);
}

TEST(Config, ResolvedJsonIsCanonicalAndRoundTrips) {
  const auto cfg = config_for("nonchiral_localization", "out", R"(,"J":0.5,"noise":{"seed":3})");
  const std::string resolved = resolved_config_json(cfg);
  const json j = json::parse(resolved);
  EXPECT_EQ(j["trotter_ordering"], "pairwise");
  EXPECT_EQ(j["noise"]["seed"], 3);
  EXPECT_EQ(resolved.find(' '), std::string::npos);
  EXPECT_EQ(resolved_config_json(parse_config(resolved)), resolved);
}

TEST(GitBlobHash, MatchesGitObjectIds) {
  EXPECT_EQ(git_blob_hash(""), "e69de29bb2d1d6434b8b29ae775ad8c2e48c5391");
  EXPECT_EQ(git_blob_hash("hello\n"), "ce013625030ba8dba906f756967f9e9ca394464a");
}

TEST(QasmReader, RoundTripsBothCircuitFamilies) {
  for (const Circuit& c : {build_fcqw_step(8, PotentialProfile::box(8, 0, 3.3)),
                           build_xy_trotter(4, PotentialProfile::box(4, 1, 1.1, 1), {0.9, 1.7, 2, true}),
                           build_xy_trotter(3, PotentialProfile::zero(3), {1.0, 0.3, 1, false, TrotterOrdering::layered})}) {
    const Circuit back = parse_qasm_minimal(emit_qasm3(c));
    EXPECT_EQ(back, c);
    EXPECT_EQ(back.label(), c.label());
  }
}

TEST(QasmReader, TwoSiteHoppingBlockIsFourteenInstructions) {
  const Circuit c = build_xy_trotter(2, PotentialProfile::zero(2), {1.0, 1.0, 1});
  Circuit blocks(2);
  for (std::size_t i = 0; i < 14; ++i) blocks.append(c.instructions()[i]);
  const Circuit back = parse_qasm_minimal(emit_qasm3(blocks));
  ASSERT_EQ(back.size(), 14u);
  EXPECT_EQ(back, blocks);
}

TEST(QasmReader, ReportsTheOffendingLine) {
  const std::string text = "OPENQASM 3.0;\ninclude \"stdgates.inc\";\nqubit[2] q;\nh q[0];\nswp q[0];\n";
  try {
    parse_qasm_minimal(text);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 5u);
    EXPECT_NE(std::string(e.what()).find("line 5"), std::string::npos);
  }
  const auto line_of = [](const std::string& t) -> std::size_t {
    try {
      parse_qasm_minimal(t);
    } catch (const ParseError& e) {
      return e.line();
    }
    return 0;
  };
  const std::string head = "OPENQASM 3.0;\nqubit[2] q;\n";
  EXPECT_EQ(line_of(head + "h q[2];\n"), 3u);
  EXPECT_EQ(line_of(head + "cx q[0];\n"), 3u);
  EXPECT_EQ(line_of(head + "s q[0];\n"), 3u);
  EXPECT_EQ(line_of(head + "sdg q[0];\nh q[1];\ns q[0];\n"), 4u);
  EXPECT_EQ(line_of(head + "rz(pi) q[0];\n"), 3u);
  EXPECT_EQ(line_of("qubit[2] q;\n"), 1u);
  EXPECT_EQ(line_of(head + "qubit[3] r;\n"), 3u);
}

TEST(RunExperiment, ChiralPropagationPeaksAtBallisticSites) {
  const fs::path out = scratch("prop");
  const RunSummary summary = run_experiment(config_for("chiral_propagation", out));
  EXPECT_TRUE(summary.all_pass());
  const auto rows = read_csv(out / "sites.csv");
  ASSERT_EQ(rows[0], (std::vector<std::string>{"W", "step", "site", "probability", "raw_density"}));
  std::size_t ones = 0;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const std::size_t step = std::stoul(rows[r][1]), site = std::stoul(rows[r][2]);
    const double p = std::stod(rows[r][3]);
    if (site == 1 + step % 8) {
      EXPECT_NEAR(p, 1.0, 1e-12);
      ++ones;
    } else {
      EXPECT_NEAR(p, 0.0, 1e-12);
    }
  }
  EXPECT_EQ(ones, 3u);
  for (const char* f : {"manifest.json", "summary.csv", "checks.json", "qasm/fcqw_step_W0.qasm"}) {
    EXPECT_TRUE(fs::exists(out / f)) << f;
  }
  const json manifest = json::parse(slurp(out / "manifest.json"));
  EXPECT_EQ(manifest["config_hash"], git_blob_hash(manifest["config"].dump()));
  EXPECT_EQ(manifest["files"]["sites.csv"], git_blob_hash(slurp(out / "sites.csv")));
}

TEST(RunExperiment, RobustnessIprColumnIsOne) {
  const fs::path out = scratch("robust");
  EXPECT_TRUE(run_experiment(config_for("chiral_robustness", out)).all_pass());
  const auto rows = read_csv(out / "summary.csv");
  ASSERT_EQ(rows.size(), 1u + 5 * 3);
  for (std::size_t r = 1; r < rows.size(); ++r) EXPECT_NEAR(std::stod(rows[r][2]), 1.0, 1e-12);
}

TEST(RunExperiment, NonChiralLocalizationRatio) {
  const fs::path out = scratch("loc");
  const RunSummary s = run_experiment(config_for("nonchiral_localization", out));
  EXPECT_TRUE(s.all_pass());
  double w0 = 0.0, w6 = 0.0;
  for (const auto& row : read_csv(out / "summary.csv")) {
    if (row[1] != "2" || row[2] != "exact") continue;
    if (row[0] == "0") w0 = std::stod(row[3]);
    if (row[0] == "6") w6 = std::stod(row[3]);
  }
  EXPECT_GT(w6, 2.0 * w0);
  EXPECT_TRUE(json::parse(slurp(out / "manifest.json"))["notes"].contains("time_sampling"));
}

TEST(RunExperiment, IdenticalConfigGivesByteIdenticalOutputs) {
  const fs::path a = scratch("repro_a"), b = scratch("repro_b");
  const std::string extra = R"(,"steps":[3,6],"W":[0,2],"noise":{"seed":5},"shots":400)";
  run_experiment(config_for("chiral_robustness", a, extra));
  run_experiment(config_for("chiral_robustness", b, extra));
  for (const char* f : {"sites.csv", "summary.csv", "checks.json"}) EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
}

TEST(RunExperiment, SmallRunsOfTheRemainingKinds) {
  const fs::path spectra = scratch("spectra");
  const RunSummary s = run_experiment(config_for("disorder_spectra", spectra, R"(,"L":8,"realizations":5)"));
  EXPECT_TRUE(s.all_pass());
  EXPECT_EQ(read_csv(spectra / "spectra.csv").size(), 1u + 5 * 8 * 2);
  EXPECT_TRUE(fs::exists(spectra / "hf_clean.csv"));

  const fs::path sweep = scratch("sweep");
  const RunSummary w = run_experiment(config_for("amplitude_scaling", sweep, R"(,"range":[1,2,3],"shots":300)"));
  EXPECT_TRUE(w.all_pass());
  EXPECT_EQ(read_csv(sweep / "sweep.csv").size(), 4u);
}

TEST(RunExperiment, UnwritableOutputIsAnIoError) {
  const fs::path dir = scratch("blocked");
  fs::create_directories(dir);
  std::ofstream(dir / "file") << "x";
  EXPECT_THROW(run_experiment(config_for("chiral_propagation", dir / "file" / "sub")), IoError);
}

TEST(CheckResultDir, DetectsTamperedFiles) {
  const fs::path out = scratch("tamper");
  run_experiment(config_for("chiral_propagation", out));
  EXPECT_TRUE(check_result_dir(out).all_pass());
  std::ofstream(out / "summary.csv", std::ios::app) << "0,0,0,0,0,0\n";
  const RunSummary s = check_result_dir(out);
  EXPECT_FALSE(s.all_pass());
  bool flagged = false;
  for (const auto& c : s.checks) flagged = flagged || (c.name == "manifest:summary.csv" && !c.pass);
  EXPECT_TRUE(flagged);
  EXPECT_THROW(check_result_dir(scratch("missing")), IoError);
}

TEST(EmitQasm, WritesOneFilePerSimulatedCircuit) {
  const fs::path out = scratch("emit");
  const auto paths = emit_qasm_files(config_for("nonchiral_localization", out));
  EXPECT_EQ(paths.size(), 18u);
  for (const auto& p : paths) EXPECT_NO_THROW(parse_qasm_minimal(slurp(p)));
}

int run_cli(const std::string& args) {
  const int status = std::system((std::string(FCQW_CLI_PATH) + " " + args + " > /dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(Cli, ExitCodesFollowTheChecks) {
  const fs::path dir = scratch("cli");
  fs::create_directories(dir);
  const fs::path good = dir / "good.json", bad = dir / "bad.json", failing = dir / "failing.json";
  std::ofstream(good) << R"({"kind":"chiral_propagation","output_dir":")" << (dir / "good").generic_string() << "\"}";
  std::ofstream(bad) << R"({"kind":"chiral_propagation","output_dir":"x","nope":1})";
  // A barrier of strength 0.01 cannot localize, so the ratio check fails.
  std::ofstream(failing) << R"({"kind":"nonchiral_localization","W":[0,0.01],"output_dir":")"
                         << (dir / "failing").generic_string() << "\"}";
  EXPECT_EQ(run_cli("run " + good.string()), 0);
  EXPECT_EQ(run_cli("check " + (dir / "good").string()), 0);
  EXPECT_EQ(run_cli("emit-qasm " + good.string() + " -o " + (dir / "emitted").string()), 0);
  EXPECT_TRUE(fs::exists(dir / "emitted" / "qasm" / "fcqw_step_W0.qasm"));
  EXPECT_EQ(run_cli("run " + bad.string()), 2);
  EXPECT_EQ(run_cli("run " + failing.string()), 1);
  EXPECT_NE(run_cli("bogus"), 0);
}

}  // namespace
}  // namespace fcqw
