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

#include "qoedist/core.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <string>
#include <utility>

namespace qoedist {

namespace {

constexpr double kPmfTolerance = 1e-9;
constexpr double kQuantileTolerance = 1e-8;

double Sum(std::span<const double> values) {
  CompensatedSum sum;
  for (double v : values) sum.Add(v);
  return sum.Total();
}

}  // namespace

const char* ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kDomain:
      return "domain";
    case ErrorKind::kSchema:
      return "schema";
    case ErrorKind::kData:
      return "data";
    case ErrorKind::kNumerical:
      return "numerical";
  }
  return "unknown";
}

RatingScale::RatingScale(int low, int high, int good, int poor)
    : low_(low), high_(high), good_(good), poor_(poor) {
  if (high <= low) {
    throw DomainError("rating scale needs high > low");
  }
  if (!(low <= poor && poor < good && good <= high)) {
    throw DomainError("rating scale thresholds must satisfy low <= poor < "
                      "good <= high");
  }
}

std::size_t RatingScale::IndexOf(int level) const {
  if (!IsLevel(level)) {
    throw DomainError("rating " + std::to_string(level) +
                      " is not a level of the scale");
  }
  return static_cast<std::size_t>(level - low_);
}

QosCondition::QosCondition(std::vector<double> coordinates)
    : coordinates_(std::move(coordinates)) {
  if (coordinates_.empty()) {
    throw DomainError("QoS condition needs at least one coordinate");
  }
  for (double c : coordinates_) {
    if (!std::isfinite(c)) {
      throw DomainError("QoS condition coordinates must be finite");
    }
  }
}

QosCondition QosCondition::Quantized(double relative) const {
  if (!(relative > 0.0 && relative < 1.0)) {
    throw DomainError("condition quantum must lie in (0, 1)");
  }
  // Round to a fixed number of significant digits and parse back, so equal
  // keys are bit-identical regardless of which side of a decade they came
  // from.
  const int digits = static_cast<int>(std::ceil(-std::log10(relative)));
  std::vector<double> snapped;
  snapped.reserve(coordinates_.size());
  char buffer[64];
  for (double c : coordinates_) {
    std::snprintf(buffer, sizeof(buffer), "%.*e", digits, c);
    double v = std::strtod(buffer, nullptr);
    if (v == 0.0) v = 0.0;  // drop the sign of negative zero
    snapped.push_back(v);
  }
  return QosCondition(std::move(snapped));
}

NormalizedPmf ValidatePmf(std::span<const double> weights) {
  if (weights.empty()) throw DomainError("PMF has no entries");
  for (double w : weights) {
    if (!std::isfinite(w)) throw DomainError("PMF weight is not finite");
    if (w < 0.0) throw DomainError("PMF weight is negative");
  }
  const double total = Sum(weights);
  if (!(total > 0.0)) throw DomainError("PMF weights are all zero");

  NormalizedPmf out;
  out.deficit = 1.0 - total;
  out.probabilities.reserve(weights.size());
  for (double w : weights) out.probabilities.push_back(w / total);
  // Push the rounding residue into the largest entry so the compensated sum
  // is exactly one.
  const double residue = 1.0 - Sum(out.probabilities);
  auto largest =
      std::max_element(out.probabilities.begin(), out.probabilities.end());
  *largest = std::clamp(*largest + residue, 0.0, 1.0);
  return out;
}

NormalizedPmf AcceptPmf(std::span<const double> weights, bool normalize,
                        double tolerance) {
  NormalizedPmf out = ValidatePmf(weights);
  if (!normalize && std::fabs(out.deficit) > tolerance) {
    char buffer[128];
    std::snprintf(buffer, sizeof(buffer),
                  "probabilities sum to %.12g, which is further than %g from "
                  "1 (enable normalization to rescale)",
                  1.0 - out.deficit, tolerance);
    throw DomainError(buffer);
  }
  return out;
}

QoeDistribution::QoeDistribution(RatingScale scale, std::vector<double> pmf,
                                 RatingCdf continuous_cdf)
    : scale_(scale),
      pmf_(std::move(pmf)),
      continuous_cdf_(std::move(continuous_cdf)) {
  if (pmf_.size() != static_cast<std::size_t>(scale_.levels())) {
    throw DomainError("QoE PMF needs one entry per scale level");
  }
  for (double p : pmf_) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw DomainError("QoE PMF entries must lie in [0, 1]");
    }
  }
  if (std::fabs(Sum(pmf_) - 1.0) > kPmfTolerance) {
    throw DomainError("QoE PMF does not sum to one");
  }
}

QoeDistribution QoeDistribution::PointMass(const RatingScale& scale,
                                           int level) {
  std::vector<double> pmf(static_cast<std::size_t>(scale.levels()), 0.0);
  pmf[scale.IndexOf(level)] = 1.0;
  const double at = level;
  return QoeDistribution(scale, std::move(pmf),
                         [at](double y) { return y >= at ? 1.0 : 0.0; });
}

double QoeDistribution::Cdf(int level) const {
  if (level < scale_.low()) return 0.0;
  if (level >= scale_.high()) return 1.0;
  CompensatedSum sum;
  for (int i = scale_.low(); i <= level; ++i) sum.Add(Probability(i));
  return std::min(1.0, sum.Total());
}

std::vector<double> QoeDistribution::CdfValues() const {
  std::vector<double> out;
  out.reserve(pmf_.size());
  for (int i = scale_.low(); i <= scale_.high(); ++i) out.push_back(Cdf(i));
  return out;
}

double QoeDistribution::ContinuousCdf(double y) const {
  if (!continuous_cdf_) {
    throw DomainError("distribution has no continuous CDF attached");
  }
  if (y < scale_.low()) return 0.0;
  if (y >= scale_.high()) return 1.0;
  return std::clamp(continuous_cdf_(y), 0.0, 1.0);
}

namespace {

QoeMetrics DiscreteMetrics(const QoeDistribution& dist,
                           std::span<const double> levels) {
  const RatingScale& scale = dist.scale();
  QoeMetrics m;
  CompensatedSum mean;
  CompensatedSum gob;
  CompensatedSum pow;
  for (int i = scale.low(); i <= scale.high(); ++i) {
    const double p = dist.Probability(i);
    mean.Add(i * p);
    if (i >= scale.gob_threshold()) gob.Add(p);
    if (i <= scale.pow_threshold()) pow.Add(p);
  }
  m.mean = std::clamp(mean.Total(), double(scale.low()), double(scale.high()));
  CompensatedSum second;
  for (int i = scale.low(); i <= scale.high(); ++i) {
    second.Add((i - m.mean) * (i - m.mean) * dist.Probability(i));
  }
  m.std = std::sqrt(std::max(0.0, second.Total()));
  m.gob = std::clamp(gob.Total(), 0.0, 1.0);
  m.pow = std::clamp(pow.Total(), 0.0, 1.0);
  const std::vector<double> cdf = dist.CdfValues();
  for (double level : levels) {
    int value = scale.high();
    for (std::size_t i = 0; i < cdf.size(); ++i) {
      if (cdf[i] >= level - 1e-12) {
        value = scale.LevelAt(i);
        break;
      }
    }
    m.quantiles[level] = value;
  }
  return m;
}

QoeMetrics ContinuousMetrics(const QoeDistribution& dist,
                             std::span<const double> levels,
                             const QuadratureSpec& quadrature) {
  const RatingScale& scale = dist.scale();
  const double low = scale.low();
  const double high = scale.high();
  auto cdf = [&dist](double y) { return dist.ContinuousCdf(y); };

  // Half-level break points keep steps at levels and bin edges on panel
  // boundaries.
  std::vector<double> points;
  for (double y = low; y < high; y += 0.5) points.push_back(y);
  points.push_back(high);

  const double tail_area =
      IntegrateOver([&](double y) { return 1.0 - cdf(y); }, points, quadrature)
          .value;
  const double tail_moment =
      IntegrateOver([&](double y) { return 2.0 * y * (1.0 - cdf(y)); }, points,
                    quadrature)
          .value;

  QoeMetrics m;
  m.mean = std::clamp(low + tail_area, low, high);
  const double second = low * low + tail_moment;
  m.std = std::sqrt(std::max(0.0, second - m.mean * m.mean));
  const double k = scale.gob_threshold();
  m.gob = std::clamp(
      1.0 - cdf(std::nextafter(k, -std::numeric_limits<double>::infinity())),
      0.0, 1.0);
  m.pow = std::clamp(cdf(scale.pow_threshold()), 0.0, 1.0);

  for (double level : levels) {
    double value;
    if (cdf(low) >= level) {
      value = low;
    } else {
      double lo = low;
      double hi = high;
      while (hi - lo > kQuantileTolerance) {
        const double mid = 0.5 * (lo + hi);
        if (cdf(mid) >= level) {
          hi = mid;
        } else {
          lo = mid;
        }
      }
      value = hi;
    }
    m.quantiles[level] = value;
  }
  return m;
}

}  // namespace

QoeMetrics MetricsFromDistribution(const QoeDistribution& dist,
                                   MetricsMode mode,
                                   std::span<const double> quantile_levels,
                                   const QuadratureSpec& quadrature) {
  for (double level : quantile_levels) {
    if (!(level > 0.0 && level <= 1.0)) {
      throw DomainError("quantile levels must lie in (0, 1]");
    }
  }
  if (mode == MetricsMode::kDiscrete) {
    return DiscreteMetrics(dist, quantile_levels);
  }
  if (!dist.has_continuous_cdf()) {
    throw DomainError("continuous metrics need a continuous CDF");
  }
  return ContinuousMetrics(dist, quantile_levels, quadrature);
}

}  // namespace qoedist
