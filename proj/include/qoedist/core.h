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

#ifndef QOEDIST_CORE_H_
#define QOEDIST_CORE_H_

#include <compare>
#include <cstddef>
#include <functional>
#include <map>
#include <span>
#include <vector>

#include "qoedist/error.h"
#include "qoedist/special_functions.h"

namespace qoedist {

// Bounded, integer-spaced opinion scale [low; high] with the "good" and
// "poor" thresholds used for GoB = P(Q >= good) and PoW = P(Q <= poor).
class RatingScale {
 public:
  // Throws DomainError unless high > low and low <= poor < good <= high.
  RatingScale(int low, int high, int good, int poor);

  // The 5-point ACR scale with GoB threshold 4 and PoW threshold 2.
  static RatingScale FivePoint() { return RatingScale(1, 5, 4, 2); }

  int low() const { return low_; }
  int high() const { return high_; }
  int levels() const { return high_ - low_ + 1; }
  // Number of steps above the floor, H - L.
  int span() const { return high_ - low_; }
  int gob_threshold() const { return good_; }
  int pow_threshold() const { return poor_; }

  bool Contains(double rating) const { return rating >= low_ && rating <= high_; }
  bool IsLevel(int rating) const { return rating >= low_ && rating <= high_; }
  std::size_t IndexOf(int level) const;
  int LevelAt(std::size_t index) const { return low_ + static_cast<int>(index); }

  friend bool operator==(const RatingScale&, const RatingScale&) = default;

 private:
  int low_;
  int high_;
  int good_;
  int poor_;
};

// A point in QoS space, e.g. a waiting time or (stall count, stall seconds).
class QosCondition {
 public:
  // Throws DomainError on an empty or non-finite coordinate list.
  explicit QosCondition(std::vector<double> coordinates);
  QosCondition(std::initializer_list<double> coordinates)
      : QosCondition(std::vector<double>(coordinates)) {}

  std::size_t dimension() const { return coordinates_.size(); }
  double operator[](std::size_t i) const { return coordinates_[i]; }
  std::span<const double> coordinates() const { return coordinates_; }

  // Copy with every coordinate snapped to a grid whose pitch is `relative`
  // times the coordinate's decade. Used as a lookup key for binned data.
  QosCondition Quantized(double relative) const;

  friend auto operator<=>(const QosCondition&, const QosCondition&) = default;
  friend bool operator==(const QosCondition&, const QosCondition&) = default;

 private:
  std::vector<double> coordinates_;
};

// Default lookup quantum for condition keys.
inline constexpr double kDefaultConditionQuantum = 1e-9;

struct NormalizedPmf {
  std::vector<double> probabilities;
  // 1 - (sum of the input weights); positive when mass was missing.
  double deficit = 0.0;
};

// Scales nonnegative finite weights to unit mass. Throws DomainError on a
// negative or non-finite weight or when every weight is zero.
NormalizedPmf ValidatePmf(std::span<const double> weights);

// Ingestion policy: weights whose sum is within `tolerance` of 1 are accepted
// (and then scaled exactly), others are rejected unless `normalize` is set.
NormalizedPmf AcceptPmf(std::span<const double> weights, bool normalize,
                        double tolerance = 1e-6);

using RatingCdf = std::function<double(double)>;

// System-level rating distribution: a PMF over the scale levels, plus an
// optional CDF over the continuous range [L; H].
class QoeDistribution {
 public:
  // Throws DomainError unless pmf has one entry per level, entries lie in
  // [0, 1] and the total is within 1e-9 of one.
  QoeDistribution(RatingScale scale, std::vector<double> pmf,
                  RatingCdf continuous_cdf = nullptr);

  static QoeDistribution PointMass(const RatingScale& scale, int level);

  const RatingScale& scale() const { return scale_; }
  std::span<const double> pmf() const { return pmf_; }
  double Probability(int level) const { return pmf_[scale_.IndexOf(level)]; }
  // P(Q <= level) on the discrete variable.
  double Cdf(int level) const;
  std::vector<double> CdfValues() const;

  bool has_continuous_cdf() const { return static_cast<bool>(continuous_cdf_); }
  // Throws DomainError when no continuous CDF is attached.
  double ContinuousCdf(double y) const;

 private:
  RatingScale scale_;
  std::vector<double> pmf_;
  RatingCdf continuous_cdf_;
};

enum class MetricsMode { kDiscrete, kContinuous };

struct QoeMetrics {
  double mean = 0.0;
  double std = 0.0;
  double gob = 0.0;
  double pow = 0.0;
  std::map<double, double> quantiles;
};

// Default quantile levels reported by the CLI.
inline const std::vector<double>& DefaultQuantileLevels() {
  static const std::vector<double> levels = {0.05, 0.25, 0.5, 0.75, 0.95};
  return levels;
}

// Mean, standard deviation, GoB, PoW and quantiles.
//
// Discrete mode sums over the PMF. Continuous mode works on the attached CDF
// F: E[Q] = L + int_L^H (1 - F), GoB = 1 - F(k-) (the left limit, which is
// 1 - F(k) for an atomless CDF), PoW = F(j), and quantiles are the smallest y
// with F(y) >= p, found by bisection to 1e-8 in y.
QoeMetrics MetricsFromDistribution(
    const QoeDistribution& dist, MetricsMode mode,
    std::span<const double> quantile_levels = DefaultQuantileLevels(),
    const QuadratureSpec& quadrature = {});

}  // namespace qoedist

#endif  // QOEDIST_CORE_H_
