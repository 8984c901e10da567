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

// Declarative runs: a JSON scenario file names the rating scale, the
// conditional rating model, the MOS mapping, the QoS source and output
// options. See README.md for the schema.

#ifndef QOEDIST_SCENARIO_H_
#define QOEDIST_SCENARIO_H_

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qoedist/core.h"
#include "qoedist/mos_mappings.h"
#include "qoedist/qos_distributions.h"
#include "qoedist/rating_models.h"
#include "qoedist/system_qoe.h"

namespace qoedist {

inline constexpr const char* kToolName = "qoedist";
inline constexpr const char* kToolVersion = QOEDIST_VERSION;

// Command-line overrides applied on top of the scenario file.
struct RunOptions {
  bool normalize = false;
  std::optional<OutputMode> mode;
  std::optional<double> absolute_tolerance;
};

struct ScenarioReport {
  MixResult mix;
  QoeMetrics discrete_metrics;
  std::optional<QoeMetrics> continuous_metrics;
  // E[f(X)] when a mapping is known, and |E[Q] - E[f(X)]|.
  std::optional<Expectation> expected_mos;
  std::optional<double> fundamental_gap;
};

// A validated, fully resolved scenario.
class Scenario {
 public:
  // Schema problems throw Error(kSchema) with a JSON pointer; unreadable or
  // invalid data files throw Error(kData).
  static Scenario FromFile(const std::filesystem::path& config_path,
                           const RunOptions& options = {});
  // `base_dir` resolves relative data-file paths.
  static Scenario FromJson(std::string_view json_text,
                           const std::filesystem::path& base_dir,
                           const RunOptions& options = {});

  const RatingScale& scale() const { return scale_; }
  const std::shared_ptr<const ConditionalRatingModel>& rating_model() const {
    return rating_model_;
  }
  const std::shared_ptr<const MosMapping>& mapping() const { return mapping_; }
  const QosDistribution& qos() const { return qos_; }
  const QuadratureSpec& quadrature() const { return quadrature_; }
  OutputMode mode() const { return mode_; }
  const std::vector<double>& quantile_levels() const { return quantiles_; }
  double cdf_step() const { return cdf_step_; }
  const std::string& config_hash() const { return config_hash_; }
  // Resolved parameters as canonical JSON text.
  const std::string& provenance_json() const { return provenance_json_; }

  // Throws Error(kNumerical) when mixing or metric extraction fails.
  ScenarioReport Evaluate() const;

 private:
  Scenario(RatingScale scale, QosDistribution qos)
      : scale_(scale), qos_(std::move(qos)) {}
  friend class ScenarioBuilder;

  RatingScale scale_;
  std::shared_ptr<const ConditionalRatingModel> rating_model_;
  std::shared_ptr<const MosMapping> mapping_;
  QosDistribution qos_;
  QuadratureSpec quadrature_;
  OutputMode mode_ = OutputMode::kDiscrete;
  std::vector<double> quantiles_;
  double cdf_step_ = 0.05;
  std::string config_hash_;
  std::string provenance_json_;
};

// Writes qoe_pmf.csv, metrics.json and (continuous modes) qoe_cdf.csv into
// `output_dir`. Returns the written paths in that order.
std::vector<std::filesystem::path> WriteScenarioOutputs(
    const Scenario& scenario, const ScenarioReport& report,
    const std::filesystem::path& output_dir);

// Evaluates and writes a scenario file.
std::vector<std::filesystem::path> RunScenario(
    const std::filesystem::path& config_path,
    const std::filesystem::path& output_dir, const RunOptions& options = {});

// "2,4,8" or an inclusive range "start:stop:step". Throws Error(kSchema).
std::vector<double> ParseSweepValues(std::string_view text);

struct SweepRow {
  double value;
  ScenarioReport report;
};

// Re-evaluates the scenario with one scalar field (dotted path such as
// "qos.lognormal.std", or a JSON pointer) set to each value in turn.
std::vector<SweepRow> EvaluateSweep(const std::filesystem::path& config_path,
                                    std::string_view parameter,
                                    const std::vector<double>& values,
                                    const RunOptions& options = {});

// Runs the sweep and writes sweep.csv into `output_dir`.
std::filesystem::path RunSweep(const std::filesystem::path& config_path,
                               std::string_view parameter,
                               const std::vector<double>& values,
                               const std::filesystem::path& output_dir,
                               const RunOptions& options = {});

}  // namespace qoedist

#endif  // QOEDIST_SCENARIO_H_
