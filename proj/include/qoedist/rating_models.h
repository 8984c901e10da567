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

// Conditional rating distributions Q|x: what the population of users would
// rate when every one of them experiences the same QoS condition x.

#ifndef QOEDIST_RATING_MODELS_H_
#define QOEDIST_RATING_MODELS_H_

#include <cstddef>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "qoedist/core.h"
#include "qoedist/mos_mappings.h"

namespace qoedist {

// User-diversity parameter of the SOS relation s^2 = theta (H - m)(m - L).
class SosParameter {
 public:
  // Throws DomainError unless 0 < theta < 1.
  explicit SosParameter(double theta);
  double value() const { return theta_; }

 private:
  double theta_;
};

// Standard deviation of opinion scores at MOS m. Zero exactly at the scale
// boundaries. Throws DomainError for m outside [L, H].
double SosStd(double mos, SosParameter theta, const RatingScale& scale);

struct BetaParameters {
  double a;
  double b;
};

// The SOS relation forces zero variance at m = L and m = H, so the
// conditional distribution there is a point mass rather than a Beta.
struct BoundaryMass {
  int rating;
};

using BetaShape = std::variant<BetaParameters, BoundaryMass>;

// Moment-matched Beta shape on [0, 1] for MOS m:
//   a = (1 - theta)(m - L) / (theta (H - L))
//   b = (1 - theta)(H - m) / (theta (H - L))
// so that L + (H - L) Beta(a, b) has mean m and variance theta (H-m)(m-L).
// Returns BoundaryMass for m == L or m == H; throws DomainError outside.
BetaShape BetaParams(double mos, SosParameter theta, const RatingScale& scale);

// Maps a continuous rating CDF on [L, H] to the scale levels by rounding to
// the nearest level and bounding to the scale. Interior bins are
// [i - 0.5, i + 0.5) (mass sitting exactly on an edge goes up) and the end
// bins absorb the tails. Throws DomainError if `cdf` is not a valid CDF.
std::vector<double> Discretize(const RatingCdf& cdf, const RatingScale& scale);

// Scaled-Beta conditional model with fixed scale and SOS parameter.
class BetaRatingModel {
 public:
  BetaRatingModel(RatingScale scale, SosParameter theta)
      : scale_(scale), theta_(theta) {}

  const RatingScale& scale() const { return scale_; }
  SosParameter theta() const { return theta_; }

  // P(Q|x <= y) for a condition whose MOS is `mos`.
  double Cdf(double y, double mos) const;
  // Discretized PMF over the scale levels.
  std::vector<double> LevelPmf(double mos) const;

 private:
  RatingScale scale_;
  SosParameter theta_;
};

// Free-function form of BetaRatingModel::Cdf.
double BetaRatingCdf(double y, double mos, const BetaRatingModel& model);

// Common interface for everything the mixer can combine with a QoS
// distribution.
class ConditionalRatingModel {
 public:
  virtual ~ConditionalRatingModel() = default;

  virtual const RatingScale& scale() const = 0;
  virtual std::size_t dimension() const = 0;
  virtual std::string Name() const = 0;

  // P(Q = i | x) for every level i, in scale order.
  virtual std::vector<double> LevelPmf(const QosCondition& x) const = 0;

  // True when Q|x lives on the continuous range [L, H].
  virtual bool has_continuous_cdf() const { return false; }
  // P(Q|x <= y). The default is the step CDF of LevelPmf.
  virtual double ContinuousCdf(double y, const QosCondition& x) const;
};

// Beta approximation driven by a MOS mapping: m = f(x), then Beta(a, b).
// MOS values outside the scale are rejected, not clamped.
class BetaApproxModel final : public ConditionalRatingModel {
 public:
  BetaApproxModel(BetaRatingModel model,
                  std::shared_ptr<const MosMapping> mapping);

  const BetaRatingModel& beta_model() const { return model_; }
  const MosMapping& mapping() const { return *mapping_; }
  double MosAt(const QosCondition& x) const;

  const RatingScale& scale() const override { return model_.scale(); }
  std::size_t dimension() const override { return mapping_->dimension(); }
  std::string Name() const override { return "beta_approx"; }
  std::vector<double> LevelPmf(const QosCondition& x) const override;
  bool has_continuous_cdf() const override { return true; }
  double ContinuousCdf(double y, const QosCondition& x) const override;

 private:
  BetaRatingModel model_;
  std::shared_ptr<const MosMapping> mapping_;
};

// Web QoE model Q|x ~ Binom(n, p) + L with p = exp(-beta x), n = H - L.
class BinomialRatingModel final : public ConditionalRatingModel {
 public:
  BinomialRatingModel(RatingScale scale, double beta);

  double beta() const { return beta_; }
  double SuccessProbability(double waiting_seconds) const;
  // Throws DomainError for negative waiting times.
  std::vector<double> Pmf(double waiting_seconds) const;

  const RatingScale& scale() const override { return scale_; }
  std::size_t dimension() const override { return 1; }
  std::string Name() const override { return "binomial"; }
  std::vector<double> LevelPmf(const QosCondition& x) const override;

 private:
  RatingScale scale_;
  double beta_;
};

std::vector<double> BinomialRatingPmf(double waiting_seconds,
                                      const BinomialRatingModel& model);

// theta = 1/n makes the Beta variance match the binomial one,
// theta (H - m)(m - L) = n p (1 - p). Throws DomainError when n = 1.
SosParameter ThetaForBinomial(const RatingScale& scale);

// Relative frequencies of raw ratings collected under one condition.
std::vector<double> EmpiricalConditionalPmf(std::span<const int> ratings,
                                            const RatingScale& scale);

// Per-condition empirical rating PMFs. Conditions are matched after
// quantization to `quantum` relative precision.
class EmpiricalConditionalModel final : public ConditionalRatingModel {
 public:
  struct Record {
    QosCondition condition;
    int rating;
  };

  EmpiricalConditionalModel(RatingScale scale,
                            std::map<QosCondition, std::vector<double>> pmfs,
                            double quantum = kDefaultConditionQuantum);

  // Groups raw (condition, rating) records by condition.
  static EmpiricalConditionalModel FromRatings(
      const RatingScale& scale, std::span<const Record> records,
      double quantum = kDefaultConditionQuantum);

  const std::map<QosCondition, std::vector<double>>& pmfs() const {
    return pmfs_;
  }

  const RatingScale& scale() const override { return scale_; }
  std::size_t dimension() const override { return dimension_; }
  std::string Name() const override { return "empirical"; }
  // Throws DomainError when no ratings exist for the condition.
  std::vector<double> LevelPmf(const QosCondition& x) const override;

 private:
  RatingScale scale_;
  std::map<QosCondition, std::vector<double>> pmfs_;
  double quantum_;
  std::size_t dimension_ = 0;
};

}  // namespace qoedist

#endif  // QOEDIST_RATING_MODELS_H_
