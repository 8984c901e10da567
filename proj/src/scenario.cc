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

#include "qoedist/scenario.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <utility>

#include "json.hpp"
#include "qoedist/tabular.h"

namespace qoedist {

namespace {

using nlohmann::json;

[[noreturn]] void SchemaError(const std::string& message,
                              const std::string& pointer) {
  throw Error(ErrorKind::kSchema, message, pointer.empty() ? "/" : pointer);
}

std::string Child(const std::string& pointer, std::string_view key) {
  return pointer + "/" + std::string(key);
}

// Converts domain errors raised while building a component into schema
// errors that point at the offending config node.
template <typename Build>
auto AtPointer(const std::string& pointer, Build&& build) {
  try {
    return build();
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::kDomain) throw;
    SchemaError(e.what(), pointer);
  }
}

void CheckKeys(const json& node, std::initializer_list<std::string_view> allowed,
               const std::string& pointer) {
  if (!node.is_object()) SchemaError("expected an object", pointer);
  for (const auto& [key, value] : node.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      SchemaError("unknown field '" + key + "'", Child(pointer, key));
    }
  }
}

const json* Find(const json& node, std::string_view key) {
  const auto it = node.find(std::string(key));
  return it == node.end() ? nullptr : &*it;
}

double NumberAt(const json& value, const std::string& pointer) {
  if (!value.is_number()) SchemaError("must be a number", pointer);
  const double v = value.get<double>();
  if (!std::isfinite(v)) SchemaError("must be finite", pointer);
  return v;
}

double RequireNumber(const json& node, std::string_view key,
                     const std::string& pointer) {
  const json* value = Find(node, key);
  if (!value) {
    SchemaError("missing required field '" + std::string(key) + "'",
                Child(pointer, key));
  }
  return NumberAt(*value, Child(pointer, key));
}

std::optional<double> OptionalNumber(const json& node, std::string_view key,
                                     const std::string& pointer) {
  const json* value = Find(node, key);
  if (!value) return std::nullopt;
  return NumberAt(*value, Child(pointer, key));
}

int IntegerAt(const json& value, const std::string& pointer) {
  const double v = NumberAt(value, pointer);
  if (v != std::floor(v) || std::fabs(v) > 1e9) {
    SchemaError("must be an integer", pointer);
  }
  return static_cast<int>(v);
}

bool OptionalBool(const json& node, std::string_view key,
                  const std::string& pointer, bool fallback) {
  const json* value = Find(node, key);
  if (!value) return fallback;
  if (!value->is_boolean()) SchemaError("must be true or false", Child(pointer, key));
  return value->get<bool>();
}

std::string RequireString(const json& node, std::string_view key,
                          const std::string& pointer) {
  const json* value = Find(node, key);
  if (!value) {
    SchemaError("missing required field '" + std::string(key) + "'",
                Child(pointer, key));
  }
  if (!value->is_string() || value->get<std::string>().empty()) {
    SchemaError("must be a non-empty string", Child(pointer, key));
  }
  return value->get<std::string>();
}

std::vector<double> NumberArray(const json& value, const std::string& pointer) {
  if (!value.is_array() || value.empty()) {
    SchemaError("must be a non-empty array of numbers", pointer);
  }
  std::vector<double> out;
  for (std::size_t i = 0; i < value.size(); ++i) {
    out.push_back(NumberAt(value[i], pointer + "/" + std::to_string(i)));
  }
  return out;
}

// The single key of a one-of object such as {"lognormal": {...}}.
std::pair<std::string, const json*> OneOf(
    const json& node, std::initializer_list<std::string_view> kinds,
    const std::string& pointer) {
  if (!node.is_object()) SchemaError("expected an object", pointer);
  CheckKeys(node, kinds, pointer);
  if (node.size() != 1) {
    std::string names;
    for (std::string_view k : kinds) names += (names.empty() ? "" : ", ") + std::string(k);
    SchemaError("expected exactly one of: " + names, pointer);
  }
  const auto it = node.begin();
  return {it.key(), &it.value()};
}

// Rounds to the 12 significant digits used in every output.
double Rounded(double v) { return std::strtod(FormatNumber(v).c_str(), nullptr); }

const char* ModeName(OutputMode mode) {
  switch (mode) {
    case OutputMode::kDiscrete:
      return "discrete";
    case OutputMode::kContinuous:
      return "continuous";
    case OutputMode::kBoth:
      return "both";
  }
  return "discrete";
}

std::optional<OutputMode> ParseMode(std::string_view name) {
  if (name == "discrete") return OutputMode::kDiscrete;
  if (name == "continuous") return OutputMode::kContinuous;
  if (name == "both") return OutputMode::kBoth;
  return std::nullopt;
}

json ParseJson(std::string_view text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::kSchema,
                std::string("config is not valid JSON: ") + e.what(), source);
  }
}

}  // namespace

class ScenarioBuilder {
 public:
  ScenarioBuilder(const json& config, std::filesystem::path base_dir,
                  const RunOptions& options)
      : config_(config), base_dir_(std::move(base_dir)), options_(options) {}

  Scenario Build() {
    CheckKeys(config_,
              {"scale", "rating_model", "mapping", "qos", "quadrature", "output"},
              "");
    const RatingScale scale = BuildScale();
    QuadratureSpec quadrature = BuildQuadrature();
    QosDistribution qos = BuildQos();
    Scenario scenario(scale, std::move(qos));
    scenario.quadrature_ = quadrature;
    BuildOutput(scenario);
    BuildModel(scenario);

    if (scenario.rating_model_->dimension() != scenario.qos_.dimension()) {
      SchemaError("rating model expects " +
                      std::to_string(scenario.rating_model_->dimension()) +
                      "-dimensional conditions but the QoS source has " +
                      std::to_string(scenario.qos_.dimension()),
                  "/qos");
    }
    if (scenario.rating_model_->Name() == "empirical" &&
        scenario.qos_.is_continuous()) {
      SchemaError("empirical rating models need a discrete QoS source", "/qos");
    }

    provenance_["options"] = {{"normalize", options_.normalize}};
    scenario.config_hash_ = Fnv1aHex(config_.dump());
    scenario.provenance_json_ = provenance_.dump();
    return scenario;
  }

 private:
  std::filesystem::path Resolve(const std::string& file) const {
    const std::filesystem::path p(file);
    return p.is_absolute() ? p : base_dir_ / p;
  }

  // Records the content hash of an input file for provenance.
  void NoteInput(const std::string& file) {
    provenance_["inputs"][file] = Fnv1aHex(ReadFileBytes(Resolve(file)));
  }

  RatingScale BuildScale() {
    const json* node = Find(config_, "scale");
    if (!node) {
      const RatingScale scale = RatingScale::FivePoint();
      RecordScale(scale);
      return scale;
    }
    const std::string ptr = "/scale";
    CheckKeys(*node, {"low", "high", "gob", "pow"}, ptr);
    auto integer = [&](std::string_view key) {
      const json* v = Find(*node, key);
      if (!v) {
        SchemaError("missing required field '" + std::string(key) + "'",
                    Child(ptr, key));
      }
      return IntegerAt(*v, Child(ptr, key));
    };
    const RatingScale scale = AtPointer(ptr, [&] {
      return RatingScale(integer("low"), integer("high"), integer("gob"),
                         integer("pow"));
    });
    RecordScale(scale);
    return scale;
  }

  void RecordScale(const RatingScale& s) {
    scale_ = s;
    provenance_["scale"] = {{"low", s.low()},
                            {"high", s.high()},
                            {"gob", s.gob_threshold()},
                            {"pow", s.pow_threshold()}};
  }

  QuadratureSpec BuildQuadrature() {
    QuadratureSpec spec;
    const std::string ptr = "/quadrature";
    if (const json* node = Find(config_, "quadrature")) {
      CheckKeys(*node,
                {"absolute_tolerance", "relative_tolerance", "max_subdivisions",
                 "truncation_mass"},
                ptr);
      if (auto v = OptionalNumber(*node, "absolute_tolerance", ptr)) {
        spec.absolute_tolerance = *v;
      }
      if (auto v = OptionalNumber(*node, "relative_tolerance", ptr)) {
        spec.relative_tolerance = *v;
      }
      if (const json* v = Find(*node, "max_subdivisions")) {
        spec.max_subdivisions = IntegerAt(*v, Child(ptr, "max_subdivisions"));
      }
      if (auto v = OptionalNumber(*node, "truncation_mass", ptr)) {
        spec.truncation_mass = *v;
      }
    }
    if (options_.absolute_tolerance) {
      spec.absolute_tolerance = *options_.absolute_tolerance;
    }
    AtPointer(ptr, [&] {
      spec.Validate();
      return 0;
    });
    provenance_["quadrature"] = {
        {"absolute_tolerance", spec.absolute_tolerance},
        {"relative_tolerance", spec.relative_tolerance},
        {"max_subdivisions", spec.max_subdivisions},
        {"truncation_mass", spec.truncation_mass}};
    return spec;
  }

  void BuildOutput(Scenario& scenario) {
    const std::string ptr = "/output";
    scenario.quantiles_ = DefaultQuantileLevels();
    if (const json* node = Find(config_, "output")) {
      CheckKeys(*node, {"mode", "quantiles", "cdf_step"}, ptr);
      if (const json* mode = Find(*node, "mode")) {
        const auto parsed =
            mode->is_string() ? ParseMode(mode->get<std::string>()) : std::nullopt;
        if (!parsed) {
          SchemaError("must be one of: discrete, continuous, both",
                      Child(ptr, "mode"));
        }
        scenario.mode_ = *parsed;
      }
      if (const json* q = Find(*node, "quantiles")) {
        scenario.quantiles_ = NumberArray(*q, Child(ptr, "quantiles"));
        for (double level : scenario.quantiles_) {
          if (!(level > 0.0 && level <= 1.0)) {
            SchemaError("quantile levels must lie in (0, 1]",
                        Child(ptr, "quantiles"));
          }
        }
      }
      if (auto step = OptionalNumber(*node, "cdf_step", ptr)) {
        if (!(*step > 0.0 && *step <= scale_->span())) {
          SchemaError("cdf_step must be positive and at most H - L",
                      Child(ptr, "cdf_step"));
        }
        scenario.cdf_step_ = *step;
      }
    }
    if (options_.mode) scenario.mode_ = *options_.mode;
  }

  std::shared_ptr<const MosMapping> BuildMapping(const json& node,
                                                 const std::string& ptr) {
    const auto [kind, body] = OneOf(node, {"iqx", "video_stall", "table"}, ptr);
    const std::string p = Child(ptr, kind);
    json record;
    std::shared_ptr<const MosMapping> mapping;
    if (kind == "iqx") {
      CheckKeys(*body, {"n", "beta", "floor"}, p);
      const double n = OptionalNumber(*body, "n", p).value_or(scale_->span());
      const double beta = RequireNumber(*body, "beta", p);
      const double floor =
          OptionalNumber(*body, "floor", p).value_or(scale_->low());
      mapping = AtPointer(p, [&] {
        return std::make_shared<const IqxMapping>(n, beta, floor);
      });
      record = {{"n", n}, {"beta", beta}, {"floor", floor}};
    } else if (kind == "video_stall") {
      CheckKeys(*body,
                {"d", "amplitude", "duration_coeff", "count_coeff", "offset"}, p);
      VideoStallMapping::Coefficients k;
      const double d = RequireNumber(*body, "d", p);
      k.amplitude = OptionalNumber(*body, "amplitude", p).value_or(k.amplitude);
      k.duration_coeff =
          OptionalNumber(*body, "duration_coeff", p).value_or(k.duration_coeff);
      k.count_coeff =
          OptionalNumber(*body, "count_coeff", p).value_or(k.count_coeff);
      k.offset = OptionalNumber(*body, "offset", p).value_or(k.offset);
      mapping = AtPointer(p, [&] {
        return std::make_shared<const VideoStallMapping>(d, k);
      });
      record = {{"d", d},
                {"amplitude", k.amplitude},
                {"duration_coeff", k.duration_coeff},
                {"count_coeff", k.count_coeff},
                {"offset", k.offset}};
    } else {
      CheckKeys(*body, {"file"}, p);
      const std::string file = RequireString(*body, "file", p);
      mapping = std::make_shared<const TableMapping>(
          LoadTableMappingFile(Resolve(file), *scale_));
      NoteInput(file);
      record = {{"file", file}};
    }
    provenance_["mapping"] = {{kind, record}};
    return mapping;
  }

  void BuildModel(Scenario& scenario) {
    const json* node = Find(config_, "rating_model");
    if (!node) SchemaError("missing required field 'rating_model'", "/rating_model");
    const std::string ptr = "/rating_model";
    const auto [kind, body] =
        OneOf(*node, {"beta_approx", "binomial", "empirical"}, ptr);
    const std::string p = Child(ptr, kind);

    const json* top_mapping = Find(config_, "mapping");
    if (top_mapping) scenario.mapping_ = BuildMapping(*top_mapping, "/mapping");

    if (kind == "beta_approx") {
      CheckKeys(*body, {"theta", "mapping"}, p);
      const double theta_value = RequireNumber(*body, "theta", p);
      const SosParameter theta =
          AtPointer(Child(p, "theta"), [&] { return SosParameter(theta_value); });
      if (const json* nested = Find(*body, "mapping")) {
        if (top_mapping) {
          SchemaError("mapping given twice (top level and beta_approx)",
                      Child(p, "mapping"));
        }
        scenario.mapping_ = BuildMapping(*nested, Child(p, "mapping"));
      }
      if (!scenario.mapping_) {
        SchemaError("beta_approx needs a MOS mapping", "/mapping");
      }
      scenario.rating_model_ = std::make_shared<const BetaApproxModel>(
          BetaRatingModel(*scale_, theta), scenario.mapping_);
      provenance_["rating_model"] = {{kind, {{"theta", theta_value}}}};
    } else if (kind == "binomial") {
      CheckKeys(*body, {"beta"}, p);
      const double beta = RequireNumber(*body, "beta", p);
      scenario.rating_model_ = AtPointer(p, [&] {
        return std::make_shared<const BinomialRatingModel>(*scale_, beta);
      });
      provenance_["rating_model"] = {{kind, {{"beta", beta}, {"n", scale_->span()}}}};
      if (!scenario.mapping_) {
        // The binomial conditional mean is the IQX curve n e^{-beta x} + L.
        scenario.mapping_ =
            std::make_shared<const IqxMapping>(scale_->span(), beta, scale_->low());
        provenance_["mapping"] = {{"iqx",
                                   {{"n", scale_->span()},
                                    {"beta", beta},
                                    {"floor", scale_->low()},
                                    {"implied_by", "binomial"}}}};
      }
    } else {
      CheckKeys(*body, {"file", "quantum"}, p);
      const std::string file = RequireString(*body, "file", p);
      const double quantum =
          OptionalNumber(*body, "quantum", p).value_or(kDefaultConditionQuantum);
      if (!(quantum > 0.0 && quantum < 1.0)) {
        SchemaError("quantum must lie in (0, 1)", Child(p, "quantum"));
      }
      scenario.rating_model_ = std::make_shared<const EmpiricalConditionalModel>(
          LoadRatingsFile(Resolve(file), *scale_, quantum));
      NoteInput(file);
      provenance_["rating_model"] = {{kind, {{"file", file}, {"quantum", quantum}}}};
    }
  }

  QosDistribution BuildQos() {
    const json* node = Find(config_, "qos");
    if (!node) SchemaError("missing required field 'qos'", "/qos");
    const std::string ptr = "/qos";
    const auto [kind, body] =
        OneOf(*node, {"lognormal", "histogram", "samples", "pdf_table"}, ptr);
    const std::string p = Child(ptr, kind);

    if (kind == "lognormal") {
      CheckKeys(*body, {"mean", "std", "mu", "sigma"}, p);
      const bool by_moments = Find(*body, "mean") || Find(*body, "std");
      const bool by_params = Find(*body, "mu") || Find(*body, "sigma");
      if (by_moments == by_params) {
        SchemaError("give either {mean, std} or {mu, sigma}", p);
      }
      if (by_moments) {
        const double mean = RequireNumber(*body, "mean", p);
        const double std = RequireNumber(*body, "std", p);
        const LognormalParams params =
            AtPointer(p, [&] { return LognormalFromMoments(mean, std); });
        provenance_["qos"] = {{kind,
                               {{"mean", mean},
                                {"std", std},
                                {"mu", params.mu},
                                {"sigma", params.sigma},
                                {"degenerate", params.degenerate()}}}};
        return LognormalQosFromMoments(mean, std);
      }
      const double mu = RequireNumber(*body, "mu", p);
      const double sigma = RequireNumber(*body, "sigma", p);
      auto dist = AtPointer(
          p, [&] { return std::make_shared<const LognormalQos>(mu, sigma); });
      provenance_["qos"] = {{kind,
                             {{"mu", mu},
                              {"sigma", sigma},
                              {"mean", dist->Mean()},
                              {"std", dist->Std()}}}};
      return QosDistribution(dist);
    }

    if (kind == "histogram") {
      CheckKeys(*body, {"file", "normalize", "merge_duplicates", "bin_widths"}, p);
      JointPmfOptions options;
      const std::string file = RequireString(*body, "file", p);
      options.normalize =
          OptionalBool(*body, "normalize", p, false) || options_.normalize;
      options.merge_duplicates = OptionalBool(*body, "merge_duplicates", p, false);
      if (const json* w = Find(*body, "bin_widths")) {
        options.bin_widths = NumberArray(*w, Child(p, "bin_widths"));
      }
      LoadedJointPmf loaded = LoadHistogramFile(Resolve(file), options);
      NoteInput(file);
      provenance_["qos"] = {{kind,
                             {{"file", file},
                              {"atoms", loaded.pmf.size()},
                              {"dimension", loaded.pmf.dimension()},
                              {"normalized", options.normalize},
                              {"deficit", Rounded(loaded.deficit)}}}};
      return QosDistribution(std::move(loaded.pmf));
    }

    if (kind == "samples") {
      CheckKeys(*body, {"file", "bin_widths"}, p);
      const std::string file = RequireString(*body, "file", p);
      const json* w = Find(*body, "bin_widths");
      if (!w) {
        SchemaError("missing required field 'bin_widths'", Child(p, "bin_widths"));
      }
      const std::vector<double> widths = NumberArray(*w, Child(p, "bin_widths"));
      EmpiricalJointPmf pmf = LoadSamplesFile(Resolve(file), widths);
      NoteInput(file);
      provenance_["qos"] = {{kind,
                             {{"file", file},
                              {"atoms", pmf.size()},
                              {"dimension", pmf.dimension()},
                              {"bin_widths", widths}}}};
      return QosDistribution(std::move(pmf));
    }

    CheckKeys(*body, {"file"}, p);
    const std::string file = RequireString(*body, "file", p);
    auto dist = std::make_shared<const TabulatedPdfQos>(
        LoadPdfTableFile(Resolve(file)));
    NoteInput(file);
    provenance_["qos"] = {{kind, {{"file", file}}}};
    return QosDistribution(dist);
  }

  const json& config_;
  std::filesystem::path base_dir_;
  RunOptions options_;
  std::optional<RatingScale> scale_;
  json provenance_ = json::object();
};

Scenario Scenario::FromJson(std::string_view json_text,
                            const std::filesystem::path& base_dir,
                            const RunOptions& options) {
  const json config = ParseJson(json_text, "/");
  return ScenarioBuilder(config, base_dir, options).Build();
}

Scenario Scenario::FromFile(const std::filesystem::path& config_path,
                            const RunOptions& options) {
  std::string text;
  try {
    text = ReadFileBytes(config_path);
  } catch (const Error& e) {
    throw Error(ErrorKind::kSchema, e.what(), config_path.string());
  }
  return FromJson(text, config_path.parent_path(), options);
}

ScenarioReport Scenario::Evaluate() const {
  try {
    SystemQoeRequest request{rating_model_, qos_, quadrature_, mode_};
    MixResult mix = Mix(request);
    ScenarioReport report{std::move(mix), {}, std::nullopt, std::nullopt,
                          std::nullopt};
    report.discrete_metrics = MetricsFromDistribution(
        report.mix.distribution, MetricsMode::kDiscrete, quantiles_, quadrature_);
    if (mode_ != OutputMode::kDiscrete) {
      report.continuous_metrics =
          MetricsFromDistribution(report.mix.distribution,
                                  MetricsMode::kContinuous, quantiles_,
                                  quadrature_);
    }
    if (mapping_) {
      report.expected_mos = ExpectedQoeViaMos(*mapping_, qos_, quadrature_);
      report.fundamental_gap =
          std::fabs(report.discrete_metrics.mean - report.expected_mos->value);
    }
    return report;
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kNumerical) throw;
    throw Error(ErrorKind::kNumerical,
                std::string("evaluation failed: ") + e.what(), e.pointer());
  }
}

namespace {

json MetricsJson(const QoeMetrics& m) {
  json quantiles = json::object();
  for (const auto& [level, value] : m.quantiles) {
    quantiles[FormatNumber(level)] = Rounded(value);
  }
  return {{"mean", Rounded(m.mean)},
          {"std", Rounded(m.std)},
          {"gob", Rounded(m.gob)},
          {"pow", Rounded(m.pow)},
          {"quantiles", quantiles}};
}

// Applies the 12-digit output rounding to every float in a JSON tree.
void RoundFloats(json& node) {
  if (node.is_number_float()) {
    node = Rounded(node.get<double>());
  } else if (node.is_structured()) {
    for (json& child : node) RoundFloats(child);
  }
}

std::string Banner(const std::string& hash) {
  return std::string("# ") + kToolName + " " + kToolVersion +
         "\n# config_hash fnv1a64:" + hash + "\n";
}

void WriteText(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::kData, "cannot write output file", path.string());
  out << text;
  if (!out) throw Error(ErrorKind::kData, "cannot write output file", path.string());
}

void EnsureDirectory(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw Error(ErrorKind::kData, "cannot create output directory: " + ec.message(),
                dir.string());
  }
}

std::vector<double> CdfGrid(const RatingScale& scale, double step) {
  const int count =
      static_cast<int>(std::floor(scale.span() / step + 1e-9));
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(count) + 2);
  for (int i = 0; i <= count; ++i) grid.push_back(scale.low() + i * step);
  if (grid.back() < scale.high() - 1e-12) grid.push_back(scale.high());
  grid.back() = std::min<double>(grid.back(), scale.high());
  return grid;
}

}  // namespace

std::vector<std::filesystem::path> WriteScenarioOutputs(
    const Scenario& scenario, const ScenarioReport& report,
    const std::filesystem::path& output_dir) {
  EnsureDirectory(output_dir);
  const QoeDistribution& dist = report.mix.distribution;
  const RatingScale& scale = dist.scale();
  const std::string banner = Banner(scenario.config_hash());
  std::vector<std::filesystem::path> written;

  std::string pmf = banner + "level,probability,cdf\n";
  const std::vector<double> cdf = dist.CdfValues();
  for (int i = scale.low(); i <= scale.high(); ++i) {
    pmf += std::to_string(i) + "," + FormatNumber(dist.Probability(i)) + "," +
           FormatNumber(cdf[scale.IndexOf(i)]) + "\n";
  }
  written.push_back(output_dir / "qoe_pmf.csv");
  WriteText(written.back(), pmf);

  json metrics = {
      {"tool", kToolName},
      {"version", kToolVersion},
      {"config_hash", "fnv1a64:" + scenario.config_hash()},
      {"mode", ModeName(scenario.mode())},
      {"metrics", {{"discrete", MetricsJson(report.discrete_metrics)}}},
  };
  if (report.continuous_metrics) {
    metrics["metrics"]["continuous"] = MetricsJson(*report.continuous_metrics);
  }
  if (report.expected_mos) {
    metrics["expected_mos"] = Rounded(report.expected_mos->value);
    metrics["fundamental_gap"] = Rounded(*report.fundamental_gap);
  }
  json provenance = json::parse(scenario.provenance_json());
  provenance["quadrature"]["error_estimate"] =
      Rounded(report.mix.diagnostics.quadrature_error);
  provenance["quadrature"]["truncation_point"] =
      Rounded(report.mix.diagnostics.truncation_point);
  provenance["quadrature"]["normalization_deficit"] =
      Rounded(report.mix.diagnostics.normalization_deficit);
  if (report.expected_mos) {
    provenance["quadrature"]["expected_mos_error"] =
        Rounded(report.expected_mos->error_estimate);
  }
  metrics["provenance"] = provenance;
  RoundFloats(metrics);
  written.push_back(output_dir / "metrics.json");
  WriteText(written.back(), metrics.dump(2) + "\n");

  if (scenario.mode() != OutputMode::kDiscrete) {
    std::string table = banner + "rating,cdf\n";
    for (double y : CdfGrid(scale, scenario.cdf_step())) {
      table += FormatNumber(y) + "," + FormatNumber(dist.ContinuousCdf(y)) + "\n";
    }
    written.push_back(output_dir / "qoe_cdf.csv");
    WriteText(written.back(), table);
  }
  return written;
}

std::vector<std::filesystem::path> RunScenario(
    const std::filesystem::path& config_path,
    const std::filesystem::path& output_dir, const RunOptions& options) {
  const Scenario scenario = Scenario::FromFile(config_path, options);
  const ScenarioReport report = scenario.Evaluate();
  return WriteScenarioOutputs(scenario, report, output_dir);
}

std::vector<double> ParseSweepValues(std::string_view text) {
  auto number = [&](std::string_view s) {
    const std::string field(s);
    char* end = nullptr;
    const double v = std::strtod(field.c_str(), &end);
    if (field.empty() || end != field.c_str() + field.size() || !std::isfinite(v)) {
      throw Error(ErrorKind::kSchema, "invalid sweep value '" + field + "'",
                  "--values");
    }
    return v;
  };
  std::vector<double> values;
  if (text.find(':') != std::string_view::npos) {
    std::vector<double> parts;
    std::size_t start = 0;
    while (true) {
      const std::size_t pos = text.find(':', start);
      parts.push_back(number(text.substr(start, pos - start)));
      if (pos == std::string_view::npos) break;
      start = pos + 1;
    }
    if (parts.size() < 2 || parts.size() > 3) {
      throw Error(ErrorKind::kSchema, "ranges are written start:stop[:step]",
                  "--values");
    }
    const double step = parts.size() == 3 ? parts[2] : 1.0;
    if (!(step > 0.0) || parts[1] < parts[0]) {
      throw Error(ErrorKind::kSchema, "range needs stop >= start and step > 0",
                  "--values");
    }
    const double count = std::floor((parts[1] - parts[0]) / step + 1e-9);
    if (count > 1e5) {
      throw Error(ErrorKind::kSchema, "sweep range is too long", "--values");
    }
    for (int i = 0; i <= static_cast<int>(count); ++i) {
      values.push_back(Rounded(parts[0] + i * step));
    }
    return values;
  }
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(',', start);
    std::string_view field = text.substr(start, pos - start);
    while (!field.empty() && field.front() == ' ') field.remove_prefix(1);
    while (!field.empty() && field.back() == ' ') field.remove_suffix(1);
    values.push_back(number(field));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return values;
}

namespace {

// Dotted paths may skip the kind key of a one-of node, so "qos.std" reaches
// /qos/lognormal/std and "rating_model.theta" reaches
// /rating_model/beta_approx/theta. Paths starting with '/' are JSON pointers.
json::json_pointer SweepPointer(std::string_view parameter, const json& config) {
  const std::string given(parameter);
  auto invalid = [&](const std::string& why) {
    return Error(ErrorKind::kSchema, "invalid sweep path: " + why,
                 given.empty() ? "--param" : given);
  };
  if (given.empty()) throw invalid("empty");
  json::json_pointer pointer;
  if (given.front() == '/') {
    try {
      pointer = json::json_pointer(given);
    } catch (const json::exception&) {
      throw invalid("malformed JSON pointer");
    }
  } else {
    const json* node = &config;
    std::size_t start = 0;
    while (true) {
      const std::size_t pos = given.find('.', start);
      const std::string key = given.substr(start, pos - start);
      if (key.empty() || !node->is_object()) throw invalid("no such field");
      if (!node->contains(key)) {
        if (node->size() != 1 || !node->begin()->is_object() ||
            !node->begin()->contains(key)) {
          throw invalid("no such field");
        }
        pointer /= node->begin().key();
        node = &*node->begin();
      }
      pointer /= key;
      node = &(*node)[key];
      if (pos == std::string::npos) break;
      start = pos + 1;
    }
  }
  if (!config.contains(pointer) || !config.at(pointer).is_number()) {
    throw invalid("it must address an existing numeric field");
  }
  return pointer;
}

}  // namespace

std::vector<SweepRow> EvaluateSweep(const std::filesystem::path& config_path,
                                    std::string_view parameter,
                                    const std::vector<double>& values,
                                    const RunOptions& options) {
  std::string text;
  try {
    text = ReadFileBytes(config_path);
  } catch (const Error& e) {
    throw Error(ErrorKind::kSchema, e.what(), config_path.string());
  }
  const json config = ParseJson(text, config_path.string());
  const json::json_pointer pointer = SweepPointer(parameter, config);
  if (values.empty()) {
    throw Error(ErrorKind::kSchema, "sweep needs at least one value", "--values");
  }
  std::vector<SweepRow> rows;
  rows.reserve(values.size());
  for (double value : values) {
    json point = config;
    point[pointer] = value;
    const Scenario scenario =
        ScenarioBuilder(point, config_path.parent_path(), options).Build();
    rows.push_back({value, scenario.Evaluate()});
  }
  return rows;
}

std::filesystem::path RunSweep(const std::filesystem::path& config_path,
                               std::string_view parameter,
                               const std::vector<double>& values,
                               const std::filesystem::path& output_dir,
                               const RunOptions& options) {
  const std::vector<SweepRow> rows =
      EvaluateSweep(config_path, parameter, values, options);
  const Scenario base = Scenario::FromFile(config_path, options);
  const RatingScale& scale = base.scale();

  std::string out = Banner(base.config_hash());
  out += "# sweep " + std::string(parameter) + "\n";
  out += std::string(parameter);
  for (int i = scale.low(); i <= scale.high(); ++i) {
    out += ",cdf_" + std::to_string(i);
  }
  out += ",mean,std,gob,pow";
  const bool continuous = base.mode() != OutputMode::kDiscrete;
  if (continuous) out += ",mean_continuous,std_continuous,gob_continuous,pow_continuous";
  const bool expected = static_cast<bool>(base.mapping());
  if (expected) out += ",expected_mos";
  out += "\n";

  for (const SweepRow& row : rows) {
    const ScenarioReport& r = row.report;
    out += FormatNumber(row.value);
    for (double c : r.mix.distribution.CdfValues()) out += "," + FormatNumber(c);
    const QoeMetrics& m = r.discrete_metrics;
    out += "," + FormatNumber(m.mean) + "," + FormatNumber(m.std) + "," +
           FormatNumber(m.gob) + "," + FormatNumber(m.pow);
    if (continuous) {
      const QoeMetrics& c = *r.continuous_metrics;
      out += "," + FormatNumber(c.mean) + "," + FormatNumber(c.std) + "," +
             FormatNumber(c.gob) + "," + FormatNumber(c.pow);
    }
    if (expected) out += "," + FormatNumber(r.expected_mos->value);
    out += "\n";
  }
  EnsureDirectory(output_dir);
  const std::filesystem::path path = output_dir / "sweep.csv";
  WriteText(path, out);
  return path;
}

}  // namespace qoedist
