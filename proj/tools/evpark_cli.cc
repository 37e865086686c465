// Copyright 2026 The evpark Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Batch runner. Exit status: 0 when every row converged, 1 when some did not,
// 2 for configuration or usage errors.

#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "evpark/csv.h"
#include "evpark/scenario.h"
#include "evpark/sweep.h"

namespace {

constexpr int kNotConverged = 1;
constexpr int kConfigFailure = 2;

struct Flags {
  std::string config;
  std::string output;
  std::string regime;
  bool oracle = false;
  bool profile = false;
  bool unsupported_theory = false;
};

evpark::Scenario Load(const Flags& flags) {
  evpark::Scenario scenario = evpark::LoadScenarioFile(flags.config);
  if (!flags.regime.empty()) {
    // CLI11 has already checked the name.
    scenario.pricing = {*evpark::ParsePricingRegime(flags.regime)};
  }
  if (!flags.output.empty()) scenario.output = flags.output;
  return scenario;
}

void Write(const evpark::Table& table, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << evpark::FormatCsv(table);
  } else {
    evpark::EmitCsv(table, path);
  }
}

template <typename Rows>
int Finish(const Rows& rows, const std::string& path) {
  Write(evpark::ToTable(rows), path);
  int failed = 0;
  for (const auto& row : rows) failed += row.converged() ? 0 : 1;
  if (failed > 0) {
    std::cerr << failed << " of " << rows.size()
              << " rows did not converge\n";
    return kNotConverged;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parking and EV charging equilibrium runs"};
  app.require_subcommand(1);
  Flags flags;

  auto add_common = [&](CLI::App* command) {
    command->add_option("--config", flags.config, "Scenario file")
        ->required()
        ->check(CLI::ExistingFile);
    command->add_option("--output", flags.output,
                        "CSV destination; '-' or absent for stdout");
  };

  CLI::App* mandate = app.add_subcommand(
      "sweep-mandate", "Equilibria across mandate levels");
  CLI::App* delta = app.add_subcommand(
      "sweep-delta", "Policy cells across endowment splits");
  CLI::App* mono = app.add_subcommand(
      "monopolist", "Capacity choice under uncertain EV demand");
  CLI::App* validate =
      app.add_subcommand("validate", "Check a scenario file and exit");
  for (CLI::App* command : {mandate, delta, mono}) add_common(command);
  validate->add_option("--config", flags.config, "Scenario file")->required();

  for (CLI::App* command : {mandate, delta}) {
    command
        ->add_option("--regime", flags.regime,
                     "Pricing regime, replacing the configured list")
        ->check(CLI::IsMember(
            {"two-price", "optimal-single", "naive-single"}));
    command->add_flag("--oracle", flags.oracle,
                      "Run unilateral deviation scans on every row");
    command->add_flag(
        "--unsupported-theory", flags.unsupported_theory,
        "Allow optimal capacity under optimal single pricing");
  }
  mono->add_flag("--oracle", flags.oracle,
                 "Grid cross-check (always performed; kept for symmetry)");
  mono->add_flag("--profile", flags.profile,
                 "Add profit rows for every feasible case on a 1e-3 grid");

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate->parsed()) {
      const evpark::Scenario scenario = evpark::LoadScenarioFile(flags.config);
      for (const std::string& warning : scenario.warnings) {
        std::cerr << "warning: " << warning << "\n";
      }
      std::cout << "ok\n";
      return 0;
    }
    const evpark::Scenario scenario = Load(flags);
    for (const std::string& warning : scenario.warnings) {
      std::cerr << "warning: " << warning << "\n";
    }
    evpark::SweepOptions options;
    options.oracle = flags.oracle;
    options.allow_unsupported_theory = flags.unsupported_theory;
    if (mandate->parsed()) {
      return Finish(evpark::RunMandateSweep(scenario, options),
                    scenario.output);
    }
    if (delta->parsed()) {
      return Finish(evpark::RunDeltaSweep(scenario, options),
                    scenario.output);
    }
    return Finish(evpark::RunMonopolistSuite(scenario, flags.profile),
                  scenario.output);
  } catch (const evpark::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigFailure;
  }
}
