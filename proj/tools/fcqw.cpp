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

// Command-line front end: run an experiment config, emit its circuits as
// OpenQASM 3, or re-check a result directory.

#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "fcqw/errors.hpp"
#include "fcqw/harness.hpp"

namespace {

int report(const fcqw::RunSummary& summary) {
  for (const auto& c : summary.checks) {
    std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << "  " << c.detail << '\n';
  }
  const bool ok = summary.all_pass();
  std::cout << (ok ? "all checks passed" : "some checks failed") << " ("
            << summary.output_dir.string() << ")\n";
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Chiral and non-chiral quantum walk experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::string output_override;
  std::string result_dir;

  auto* run = app.add_subcommand("run", "Run an experiment and write its result directory");
  run->add_option("config", config_path, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
  run->add_option("-o,--output", output_override, "Override output_dir from the config");

  auto* emit = app.add_subcommand("emit-qasm", "Write the experiment's circuits as OpenQASM 3");
  emit->add_option("config", config_path, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
  emit->add_option("-o,--output", output_override, "Override output_dir from the config");

  auto* check = app.add_subcommand("check", "Verify file hashes and built-in checks of a result directory");
  check->add_option("dir", result_dir, "Result directory")->required()->check(CLI::ExistingDirectory);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*check) return report(fcqw::check_result_dir(result_dir));

    fcqw::ExperimentConfig cfg = fcqw::load_config(config_path);
    if (!output_override.empty()) cfg.output_dir = output_override;
    if (*run) return report(fcqw::run_experiment(cfg));

    for (const auto& path : fcqw::emit_qasm_files(cfg)) std::cout << path.string() << '\n';
    return 0;
  } catch (const fcqw::ValidationError& e) {
    std::cerr << e.what() << '\n';
    return 2;
  } catch (const fcqw::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
