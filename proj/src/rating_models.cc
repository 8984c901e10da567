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

#include "qoedist/rating_models.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "qoedist/special_functions.h"

namespace qoedist {

namespace {

constexpr double kCdfSlack = 1e-12;
constexpr double kCdfTopTolerance = 1e-9;

void RequireMosOnScale(double mos, const RatingScale& scale) {
  if (!std::isfinite(mos) || !scale.Contains(mos)) {
    throw DomainError("MOS " + std::to_string(mos) + " lies outside [" +
                      std::to_string(scale.low()) + ", " +
                      std::to_string(scale.high()) + "]");
  }
}

double LeftLimit(const RatingCdf& cdf, double y) {
  return cdf(std::nextafter(y, -std::numeric_limits<double>::infinity()));
}

}  // namespace

SosParameter::SosParameter(double theta) : theta_(theta) {
  if (!(theta > 0.0 && theta < 1.0)) {
    throw DomainError("SOS parameter theta must lie in (0, 1), got " +
                      std::to_string(theta));
  }
}

double SosStd(double mos, SosParameter theta, const RatingScale& scale) {
  RequireMosOnScale(mos, scale);
  const double variance =
      theta.value() * (scale.high() - mos) * (mos - scale.low());
  return std::sqrt(std::max(0.0, variance));
}

BetaShape BetaParams(double mos, SosParameter theta, const RatingScale& scale) {
  RequireMosOnScale(mos, scale);
  if (mos == scale.low()) return BoundaryMass{scale.low()};
  if (mos == scale.high()) return BoundaryMass{scale.high()};
  const double t = theta.value();
  const double width = scale.span();
  return BetaParameters{(1.0 - t) * (mos - scale.low()) / (t * width),
                        (1.0 - t) * (scale.high() - mos) / (t * width)};
}

std::vector<double> Discretize(const RatingCdf& cdf, const RatingScale& scale) {
  const int low = scale.low();
  const int high = scale.high();

  // Left limits at the bin edges low + 0.5, ..., high - 0.5.
  std::vector<double> edges;
  edges.reserve(static_cast<std::size_t>(scale.span()));
  double previous = 0.0;
  for (int i = low; i < high; ++i) {
    const double value = LeftLimit(cdf, i + 0.5);
    if (!(value >= -kCdfSlack && value <= 1.0 + kCdfSlack)) {
      throw DomainError("rating CDF value outside [0, 1]");
    }
    if (value < previous - kCdfSlack) {
      throw DomainError("rating CDF is decreasing");
    }
    previous = std::max(previous, std::clamp(value, 0.0, 1.0));
    edges.push_back(previous);
  }
  const double top = cdf(high);
  if (!(std::fabs(top - 1.0) <= kCdfTopTolerance)) {
    throw DomainError("rating CDF does not reach one at the top of the scale");
  }
  if (cdf(low) < -kCdfSlack) throw DomainError("rating CDF is negative");

  std::vector<double> pmf;
  pmf.reserve(static_cast<std::size_t>(scale.levels()));
  double below = 0.0;
  for (double edge : edges) {
    pmf.push_back(edge - below);
    below = edge;
  }
  pmf.push_back(1.0 - below);
  return pmf;
}

double BetaRatingModel::Cdf(double y, double mos) const {
  if (!(y >= scale_.low() && y <= scale_.high())) {
    throw DomainError("rating " + std::to_string(y) + " lies outside the scale");
  }
  const BetaShape shape = BetaParams(mos, theta_, scale_);
  if (const auto* mass = std::get_if<BoundaryMass>(&shape)) {
    return y >= mass->rating ? 1.0 : 0.0;
  }
  const auto& [a, b] = std::get<BetaParameters>(shape);
  const double z = (y - scale_.low()) / static_cast<double>(scale_.span());
  return RegIncBeta(std::clamp(z, 0.0, 1.0), a, b);
}

std::vector<double> BetaRatingModel::LevelPmf(double mos) const {
  const BetaShape shape = BetaParams(mos, theta_, scale_);
  if (const auto* mass = std::get_if<BoundaryMass>(&shape)) {
    std::vector<double> pmf(static_cast<std::size_t>(scale_.levels()), 0.0);
    pmf[scale_.IndexOf(mass->rating)] = 1.0;
    return pmf;
  }
  return Discretize([&](double y) { return Cdf(y, mos); }, scale_);
}

double BetaRatingCdf(double y, double mos, const BetaRatingModel& model) {
  return model.Cdf(y, mos);
}

double ConditionalRatingModel::ContinuousCdf(double y,
                                             const QosCondition& x) const {
  const RatingScale& s = scale();
  if (y < s.low()) return 0.0;
  const std::vector<double> pmf = LevelPmf(x);
  CompensatedSum sum;
  for (int i = s.low(); i <= s.high() && i <= y; ++i) sum.Add(pmf[s.IndexOf(i)]);
  return std::min(1.0, sum.Total());
}

BetaApproxModel::BetaApproxModel(BetaRatingModel model,
                                 std::shared_ptr<const MosMapping> mapping)
    : model_(model), mapping_(std::move(mapping)) {
  if (!mapping_) throw DomainError("Beta approximation needs a MOS mapping");
}

double BetaApproxModel::MosAt(const QosCondition& x) const {
  const double mos = mapping_->Mos(x);
  RequireMosOnScale(mos, model_.scale());
  return mos;
}

std::vector<double> BetaApproxModel::LevelPmf(const QosCondition& x) const {
  return model_.LevelPmf(MosAt(x));
}

double BetaApproxModel::ContinuousCdf(double y, const QosCondition& x) const {
  const RatingScale& s = scale();
  if (y < s.low()) return 0.0;
  if (y >= s.high()) return 1.0;
  return model_.Cdf(y, MosAt(x));
}

BinomialRatingModel::BinomialRatingModel(RatingScale scale, double beta)
    : scale_(scale), beta_(beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw DomainError("binomial rating model needs beta > 0");
  }
  if (scale.span() > 60) {
    throw DomainError("binomial rating model supports at most 61 levels");
  }
}

double BinomialRatingModel::SuccessProbability(double waiting_seconds) const {
  if (!(waiting_seconds >= 0.0)) {
    throw DomainError("waiting time must be nonnegative");
  }
  return std::exp(-beta_ * waiting_seconds);
}

std::vector<double> BinomialRatingModel::Pmf(double waiting_seconds) const {
  const double p = SuccessProbability(waiting_seconds);
  const double q = -std::expm1(-beta_ * waiting_seconds);
  const int n = scale_.span();
  std::vector<double> pmf;
  pmf.reserve(static_cast<std::size_t>(n + 1));
  for (int k = 0; k <= n; ++k) {
    pmf.push_back(static_cast<double>(BinomialCoefficient(n, k)) *
                  std::pow(p, k) * std::pow(q, n - k));
  }
  return pmf;
}

std::vector<double> BinomialRatingModel::LevelPmf(const QosCondition& x) const {
  if (x.dimension() != 1) {
    throw DomainError("binomial rating model expects a 1-dimensional condition");
  }
  return Pmf(x[0]);
}

std::vector<double> BinomialRatingPmf(double waiting_seconds,
                                      const BinomialRatingModel& model) {
  return model.Pmf(waiting_seconds);
}

SosParameter ThetaForBinomial(const RatingScale& scale) {
  return SosParameter(1.0 / scale.span());
}

std::vector<double> EmpiricalConditionalPmf(std::span<const int> ratings,
                                            const RatingScale& scale) {
  if (ratings.empty()) throw DomainError("no ratings given");
  std::vector<double> counts(static_cast<std::size_t>(scale.levels()), 0.0);
  for (int r : ratings) counts[scale.IndexOf(r)] += 1.0;
  for (double& c : counts) c /= static_cast<double>(ratings.size());
  return counts;
}

EmpiricalConditionalModel::EmpiricalConditionalModel(
    RatingScale scale, std::map<QosCondition, std::vector<double>> pmfs,
    double quantum)
    : scale_(scale), quantum_(quantum) {
  if (pmfs.empty()) {
    throw DomainError("empirical rating model needs at least one condition");
  }
  for (auto& [condition, pmf] : pmfs) {
    if (dimension_ == 0) dimension_ = condition.dimension();
    if (condition.dimension() != dimension_) {
      throw DomainError("empirical rating conditions differ in dimension");
    }
    if (pmf.size() != static_cast<std::size_t>(scale.levels())) {
      throw DomainError("empirical rating PMF needs one entry per level");
    }
    std::vector<double> normalized = AcceptPmf(pmf, false).probabilities;
    const auto [it, inserted] =
        pmfs_.emplace(condition.Quantized(quantum_), std::move(normalized));
    if (!inserted) {
      throw DomainError("duplicate condition in empirical rating model");
    }
  }
}

EmpiricalConditionalModel EmpiricalConditionalModel::FromRatings(
    const RatingScale& scale, std::span<const Record> records, double quantum) {
  std::map<QosCondition, std::vector<int>> grouped;
  for (const Record& r : records) {
    grouped[r.condition.Quantized(quantum)].push_back(r.rating);
  }
  std::map<QosCondition, std::vector<double>> pmfs;
  for (const auto& [condition, ratings] : grouped) {
    pmfs.emplace(condition, EmpiricalConditionalPmf(ratings, scale));
  }
  return EmpiricalConditionalModel(scale, std::move(pmfs), quantum);
}

std::vector<double> EmpiricalConditionalModel::LevelPmf(
    const QosCondition& x) const {
  if (x.dimension() != dimension_) {
    throw DomainError("condition dimension does not match the empirical model");
  }
  const auto it = pmfs_.find(x.Quantized(quantum_));
  if (it == pmfs_.end()) {
    std::string where;
    for (double c : x.coordinates()) {
      where += (where.empty() ? "" : ", ") + std::to_string(c);
    }
    throw DomainError("no empirical ratings for condition (" + where + ")");
  }
  return it->second;
}

}  // namespace qoedist
