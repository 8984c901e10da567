// Copyright 2026 The qoedist Authors. All Rights Reserved.
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

// qoedist: evaluate QoE rating distributions from scenario files.
//
//   qoedist run <config> [--output-dir DIR]
//   qoedist sweep <config> --param qos.std --values 1:10:1
//   qoedist validate <config>
//
// Exit codes: 0 success, 1 usage, 2 schema, 3 data, 4 numerical. Failures
// print one JSON error record on stderr.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "qoedist/error.h"
#include "qoedist/scenario.h"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitSchema = 2;
constexpr int kExitData = 3;
constexpr int kExitNumerical = 4;

int ExitCode(qoedist::ErrorKind kind) {
  switch (kind) {
    case qoedist::ErrorKind::kSchema:
      return kExitSchema;
    case qoedist::ErrorKind::kData:
      return kExitData;
    case qoedist::ErrorKind::kDomain:
    case qoedist::ErrorKind::kNumerical:
      return kExitNumerical;
  }
  return kExitNumerical;
}

void ReportError(const std::string& kind, const std::string& message,
                 const std::string& pointer) {
  nlohmann::json record = {
      {"error", {{"kind", kind}, {"message", message}, {"pointer", pointer}}}};
  std::cerr << record.dump() << "\n";
}

std::filesystem::path DefaultOutputDir() {
  if (const char* env = std::getenv("QOEDIST_OUTPUT_DIR"); env && *env) {
    return env;
  }
  return "qoedist-out";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distribution of QoE ratings across a user population"};
  app.set_version_flag("--version", std::string(qoedist::kToolName) + " " +
                                        qoedist::kToolVersion);
  app.require_subcommand(1);

  std::string config;
  std::string output_dir;
  std::string mode;
  std::optional<double> tolerance;
  bool normalize = false;
  std::string param;
  std::string values;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("config", config, "Scenario file (JSON)")->required();
    cmd->add_flag("--normalize", normalize,
                  "Rescale input PMFs whose mass is off by more than 1e-6");
    cmd->add_option("--mode", mode, "Output mode")
        ->check(CLI::IsMember({"discrete", "continuous", "both"}));
    cmd->add_option("--tolerance", tolerance,
                    "Absolute quadrature tolerance")
        ->check(CLI::PositiveNumber);
  };

  CLI::App* run = app.add_subcommand("run", "Evaluate one scenario");
  add_common(run);
  run->add_option("--output-dir", output_dir,
                  "Output directory (default $QOEDIST_OUTPUT_DIR or ./qoedist-out)");

  CLI::App* sweep =
      app.add_subcommand("sweep", "Evaluate a scenario over a parameter grid");
  add_common(sweep);
  sweep->add_option("--output-dir", output_dir, "Output directory");
  sweep->add_option("--param", param, "Dotted path or JSON pointer")->required();
  sweep->add_option("--values", values, "List a,b,c or range start:stop[:step]")
      ->required();

  CLI::App* validate = app.add_subcommand("validate", "Check a scenario file");
  add_common(validate);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  qoedist::RunOptions options;
  options.normalize = normalize;
  if (mode == "discrete") options.mode = qoedist::OutputMode::kDiscrete;
  if (mode == "continuous") options.mode = qoedist::OutputMode::kContinuous;
  if (mode == "both") options.mode = qoedist::OutputMode::kBoth;
  options.absolute_tolerance = tolerance;
  const std::filesystem::path out =
      output_dir.empty() ? DefaultOutputDir() : std::filesystem::path(output_dir);

  try {
    if (run->parsed()) {
      for (const auto& path : qoedist::RunScenario(config, out, options)) {
        std::cout << path.string() << "\n";
      }
    } else if (sweep->parsed()) {
      const std::vector<double> grid = qoedist::ParseSweepValues(values);
      std::cout << qoedist::RunSweep(config, param, grid, out, options).string()
                << "\n";
    } else if (validate->parsed()) {
      qoedist::Scenario::FromFile(config, options);
      std::cout << "ok\n";
    }
  } catch (const qoedist::Error& e) {
    ReportError(qoedist::ErrorKindName(e.kind()), e.what(), e.pointer());
    return ExitCode(e.kind());
  } catch (const std::exception& e) {
    ReportError("numerical", e.what(), "");
    return kExitNumerical;
  }
  return 0;
}
