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

#include "qoedist/system_qoe.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace qoedist {

namespace {

void RequireModel(const SystemQoeRequest& request) {
  if (!request.rating_model) {
    throw DomainError("system QoE request has no rating model");
  }
  if (request.rating_model->dimension() != request.qos.dimension()) {
    throw DomainError(
        "rating model expects " +
        std::to_string(request.rating_model->dimension()) +
        "-dimensional conditions but the QoS distribution has dimension " +
        std::to_string(request.qos.dimension()));
  }
}

bool WantsContinuous(OutputMode mode) { return mode != OutputMode::kDiscrete; }

// Integration grid for a continuous QoS distribution: the support, cut at
// the (1 - truncation_mass) quantile when unbounded, with interior break
// points at a few quantiles so the density peak sits on panel boundaries.
std::vector<double> IntegrationPoints(const ContinuousQos& qos,
                                      const QuadratureSpec& spec) {
  const Support support = qos.support();
  const double lower = support.lower;
  const double upper = std::isfinite(support.upper)
                           ? support.upper
                           : qos.Quantile(1.0 - spec.truncation_mass);
  std::vector<double> points = {lower, upper};
  for (double p : {0.001, 0.01, 0.1, 0.25, 0.5, 0.75, 0.9, 0.99, 0.999}) {
    const double x = qos.Quantile(p);
    if (x > lower && x < upper) points.push_back(x);
  }
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  return points;
}

QuadratureResult IntegrateAgainstDensity(const RealFunction& g,
                                         const ContinuousQos& qos,
                                         std::span<const double> points,
                                         const QuadratureSpec& spec) {
  return IntegrateOver([&](double x) { return g(x) * qos.Pdf(x); }, points,
                       spec);
}

std::vector<double> Finalize(std::vector<double> raw, MixDiagnostics& diag) {
  for (double& p : raw) p = std::max(0.0, p);
  NormalizedPmf normalized = ValidatePmf(raw);
  diag.normalization_deficit = normalized.deficit;
  return std::move(normalized.probabilities);
}

}  // namespace

MixResult MixContinuous(const SystemQoeRequest& request) {
  RequireModel(request);
  if (!request.qos.is_continuous()) {
    throw DomainError("MixContinuous needs a continuous QoS distribution");
  }
  request.quadrature.Validate();
  const auto model = request.rating_model;
  const auto qos = request.qos.continuous_ptr();
  const RatingScale& scale = model->scale();
  const std::vector<double> points =
      IntegrationPoints(*qos, request.quadrature);

  MixDiagnostics diag;
  diag.truncation_point = points.back();
  std::vector<double> raw;
  raw.reserve(static_cast<std::size_t>(scale.levels()));
  for (int level = scale.low(); level <= scale.high(); ++level) {
    const std::size_t index = scale.IndexOf(level);
    const QuadratureResult r = IntegrateAgainstDensity(
        [&](double x) { return model->LevelPmf(QosCondition{x})[index]; },
        *qos, points, request.quadrature);
    raw.push_back(r.value);
    diag.quadrature_error += r.error_estimate;
    diag.terms += static_cast<std::size_t>(r.evaluations);
  }
  CompensatedSum mass;
  for (double p : raw) mass.Add(p);
  const double total_mass = mass.Total();
  std::vector<double> pmf = Finalize(std::move(raw), diag);

  RatingCdf cdf;
  if (WantsContinuous(request.output_mode)) {
    const QuadratureSpec spec = request.quadrature;
    cdf = [model, qos, points, spec, total_mass](double y) {
      const QuadratureResult r = IntegrateAgainstDensity(
          [&](double x) { return model->ContinuousCdf(y, QosCondition{x}); },
          *qos, points, spec);
      return std::clamp(r.value / total_mass, 0.0, 1.0);
    };
  }
  return {QoeDistribution(scale, std::move(pmf), std::move(cdf)), diag};
}

MixResult MixDiscrete(const SystemQoeRequest& request) {
  RequireModel(request);
  if (request.qos.is_continuous()) {
    throw DomainError("MixDiscrete needs a discrete QoS distribution");
  }
  const auto model = request.rating_model;
  const RatingScale& scale = model->scale();
  const EmpiricalJointPmf& pmf = request.qos.discrete();
  if (pmf.size() == 0) throw DomainError("QoS PMF is empty");

  std::vector<CompensatedSum> sums(static_cast<std::size_t>(scale.levels()));
  for (const QosAtom& atom : pmf.atoms()) {
    const std::vector<double> conditional = model->LevelPmf(atom.condition);
    for (std::size_t i = 0; i < sums.size(); ++i) {
      sums[i].Add(atom.probability * conditional[i]);
    }
  }
  std::vector<double> raw;
  raw.reserve(sums.size());
  for (const CompensatedSum& s : sums) raw.push_back(s.Total());

  MixDiagnostics diag;
  diag.terms = pmf.size();
  std::vector<double> mixed = Finalize(std::move(raw), diag);

  RatingCdf cdf;
  if (WantsContinuous(request.output_mode)) {
    auto atoms = std::make_shared<const std::vector<QosAtom>>(
        pmf.atoms().begin(), pmf.atoms().end());
    cdf = [model, atoms](double y) {
      CompensatedSum sum;
      for (const QosAtom& atom : *atoms) {
        sum.Add(atom.probability * model->ContinuousCdf(y, atom.condition));
      }
      return std::clamp(sum.Total(), 0.0, 1.0);
    };
  }
  return {QoeDistribution(scale, std::move(mixed), std::move(cdf)), diag};
}

MixResult Mix(const SystemQoeRequest& request) {
  return request.qos.is_continuous() ? MixContinuous(request)
                                     : MixDiscrete(request);
}

namespace {

Expectation ExpectOver(const std::function<double(const QosCondition&)>& g,
                       std::size_t dimension, const QosDistribution& qos,
                       const QuadratureSpec& quadrature) {
  if (dimension != qos.dimension()) {
    throw DomainError("function dimension " + std::to_string(dimension) +
                      " does not match QoS dimension " +
                      std::to_string(qos.dimension()));
  }
  if (qos.is_continuous()) {
    quadrature.Validate();
    const ContinuousQos& density = qos.continuous();
    const std::vector<double> points = IntegrationPoints(density, quadrature);
    const QuadratureResult r = IntegrateAgainstDensity(
        [&](double x) { return g(QosCondition{x}); }, density, points,
        quadrature);
    return {r.value, r.error_estimate + quadrature.truncation_mass};
  }
  CompensatedSum sum;
  for (const QosAtom& atom : qos.discrete().atoms()) {
    sum.Add(atom.probability * g(atom.condition));
  }
  return {sum.Total(), 0.0};
}

}  // namespace

Expectation ExpectedQoeViaMos(const MosMapping& mapping,
                              const QosDistribution& qos,
                              const QuadratureSpec& quadrature) {
  return ExpectOver([&](const QosCondition& x) { return mapping.Mos(x); },
                    mapping.dimension(), qos, quadrature);
}

double GobMapping(const QosCondition& x, const ConditionalRatingModel& model) {
  const RatingScale& scale = model.scale();
  const std::vector<double> pmf = model.LevelPmf(x);
  CompensatedSum sum;
  for (int i = scale.gob_threshold(); i <= scale.high(); ++i) {
    sum.Add(pmf[scale.IndexOf(i)]);
  }
  return std::clamp(sum.Total(), 0.0, 1.0);
}

Expectation ExpectedGob(const ConditionalRatingModel& model,
                        const QosDistribution& qos,
                        const QuadratureSpec& quadrature) {
  return ExpectOver(
      [&](const QosCondition& x) { return GobMapping(x, model); },
      model.dimension(), qos, quadrature);
}

}  // namespace qoedist
