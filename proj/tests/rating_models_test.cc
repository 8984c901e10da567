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

#include <cmath>
#include <memory>
#include <numeric>
#include <random>
#include <variant>
#include <vector>

#include "gtest/gtest.h"
#include "qoedist/error.h"
#include "qoedist/mos_mappings.h"
#include "qoedist/special_functions.h"

namespace qoedist {

namespace {

const RatingScale kScale = RatingScale::FivePoint();

double Sum(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0);
}

TEST(SosParameter, OpenUnitInterval) {
  EXPECT_THROW(SosParameter(0.0), Error);
  EXPECT_THROW(SosParameter(1.0), Error);
  EXPECT_THROW(SosParameter(std::nan("")), Error);
  EXPECT_EQ(SosParameter(0.3).value(), 0.3);
}

TEST(SosStd, SquareRelation) {
  EXPECT_NEAR(SosStd(3.0, SosParameter(0.25), kScale), 1.0, 1e-15);
  EXPECT_NEAR(SosStd(2.0, SosParameter(0.3), kScale), std::sqrt(0.9), 1e-15);
  EXPECT_EQ(SosStd(5.0, SosParameter(0.3), kScale), 0.0);
  EXPECT_THROW(SosStd(5.5, SosParameter(0.3), kScale), Error);
}

TEST(BetaParams, ShapesAndBoundaries) {
  const BetaShape shape = BetaParams(3.0, SosParameter(0.25), kScale);
  const auto& p = std::get<BetaParameters>(shape);
  EXPECT_NEAR(p.a, 1.5, 1e-15);
  EXPECT_NEAR(p.b, 1.5, 1e-15);

  const BetaShape asym = BetaParams(2.2, SosParameter(0.3), kScale);
  const auto& q = std::get<BetaParameters>(asym);
  EXPECT_NEAR(q.a + q.b, 0.7 / 0.3, 1e-14);
  EXPECT_NEAR(q.a / (q.a + q.b), (2.2 - 1.0) / 4.0, 1e-15);

  EXPECT_EQ(std::get<BoundaryMass>(BetaParams(1.0, SosParameter(0.3), kScale)).rating, 1);
  EXPECT_EQ(std::get<BoundaryMass>(BetaParams(5.0, SosParameter(0.3), kScale)).rating, 5);
  EXPECT_THROW(BetaParams(0.9, SosParameter(0.3), kScale), Error);
}

TEST(BetaRatingModel, SpotCheckAgainstClosedForm) {
  // m = 3, theta = 1/4 gives Beta(3/2, 3/2); reference values computed with
  // 40-digit arithmetic.
  const BetaRatingModel model(kScale, SosParameter(0.25));
  const std::vector<double> expected = {
      0.072146806407193739, 0.27037201482995254, 0.31496235752570744,
      0.27037201482995254, 0.072146806407193739};
  const std::vector<double> pmf = model.LevelPmf(3.0);
  ASSERT_EQ(pmf.size(), 5u);
  for (std::size_t i = 0; i < 5; ++i) EXPECT_NEAR(pmf[i], expected[i], 1e-13);
}

TEST(BetaRatingModel, AsymmetricReference) {
  const BetaRatingModel model(kScale, SosParameter(0.3));
  const std::vector<double> expected = {
      0.32921561332043462, 0.33000366579107119, 0.20391100646774112,
      0.11539894301024284, 0.021470771410510228};
  const std::vector<double> pmf = model.LevelPmf(2.2);
  for (std::size_t i = 0; i < 5; ++i) EXPECT_NEAR(pmf[i], expected[i], 1e-13);
}

TEST(BetaRatingModel, CdfShape) {
  const BetaRatingModel model(kScale, SosParameter(0.3));
  EXPECT_EQ(model.Cdf(1.0, 3.3), 0.0);
  EXPECT_EQ(model.Cdf(5.0, 3.3), 1.0);
  EXPECT_THROW(model.Cdf(0.0, 3.3), Error);
  EXPECT_THROW(model.Cdf(3.0, 5.2), Error);

  const BetaRatingModel quarter(kScale, SosParameter(0.25));
  EXPECT_NEAR(quarter.Cdf(3.0, 3.0), 0.5, 1e-15);
  // I_{0.625}(3/2, 3/2) from the arcsine closed form with u = 1/4.
  const double u = 0.25;
  EXPECT_NEAR(quarter.Cdf(3.5, 3.0),
              (u * std::sqrt(1.0 - u * u) + std::asin(u) + std::acos(-1.0) / 2.0) /
                  std::acos(-1.0),
              1e-14);
  double previous = 0.0;
  for (double y = 1.0; y <= 5.0; y += 0.01) {
    const double f = model.Cdf(y, 3.3);
    EXPECT_GE(f, previous);
    previous = f;
  }
  EXPECT_NEAR(BetaRatingCdf(2.7, 3.3, model), model.Cdf(2.7, 3.3), 0.0);
}

TEST(BetaRatingModel, BoundaryMosIsPointMass) {
  const BetaRatingModel model(kScale, SosParameter(0.3));
  EXPECT_EQ(model.LevelPmf(5.0), (std::vector<double>{0, 0, 0, 0, 1}));
  EXPECT_EQ(model.LevelPmf(1.0), (std::vector<double>{1, 0, 0, 0, 0}));
  EXPECT_EQ(model.Cdf(4.999, 5.0), 0.0);
  EXPECT_EQ(model.Cdf(1.0, 1.0), 1.0);
}

TEST(BetaRatingModel, MomentsMatchSos) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> mos(1.05, 4.95);
  std::uniform_real_distribution<double> theta(0.05, 0.9);
  for (int i = 0; i < 20; ++i) {
    const double m = mos(rng);
    const double t = theta(rng);
    const BetaRatingModel model(kScale, SosParameter(t));
    // E[Q] = L + int (1 - F), E[Q^2] = L^2 + int 2y (1 - F).
    const QuadratureSpec spec{.absolute_tolerance = 1e-13,
                              .relative_tolerance = 1e-12};
    const double mean =
        1.0 + Integrate([&](double y) { return 1.0 - model.Cdf(y, m); }, 1.0,
                        5.0, spec)
                  .value;
    const double second =
        1.0 + Integrate([&](double y) { return 2.0 * y * (1.0 - model.Cdf(y, m)); },
                        1.0, 5.0, spec)
                  .value;
    EXPECT_NEAR(mean, m, 1e-9);
    EXPECT_NEAR(second - mean * mean, t * (5.0 - m) * (m - 1.0), 1e-9);
  }
}

TEST(Discretize, EdgesAndTails) {
  // Uniform CDF on [1, 5].
  const std::vector<double> pmf =
      Discretize([](double y) { return std::clamp((y - 1.0) / 4.0, 0.0, 1.0); }, kScale);
  EXPECT_NEAR(pmf[0], 0.125, 1e-15);
  EXPECT_NEAR(pmf[2], 0.25, 1e-15);
  EXPECT_NEAR(pmf[4], 0.125, 1e-15);
  // Mass exactly on the edge 2.5 belongs to level 3.
  const std::vector<double> edge =
      Discretize([](double y) { return y < 2.5 ? 0.0 : 1.0; }, kScale);
  EXPECT_EQ(edge, (std::vector<double>{0, 0, 1, 0, 0}));
  EXPECT_THROW(Discretize([](double y) { return y < 3 ? 0.6 : 0.5; }, kScale), Error);
}

TEST(Binomial, PmfAndMoments) {
  const BinomialRatingModel model(kScale, 0.25);
  EXPECT_EQ(model.Pmf(0.0), (std::vector<double>{0, 0, 0, 0, 1}));
  for (double x : {0.5, 2.0, 4.0, 13.0}) {
    const double p = std::exp(-0.25 * x);
    const std::vector<double> pmf = BinomialRatingPmf(x, model);
    EXPECT_NEAR(Sum(pmf), 1.0, 1e-15);
    double mean = 0.0;
    double second = 0.0;
    for (int k = 0; k <= 4; ++k) {
      const double direct = static_cast<double>(BinomialCoefficient(4, k)) *
                            std::pow(p, k) * std::pow(1.0 - p, 4 - k);
      EXPECT_NEAR(pmf[k], direct, 1e-15);
      mean += (k + 1) * pmf[k];
      second += (k + 1) * (k + 1) * pmf[k];
    }
    const double m = IqxMapping(4.0, 0.25)(x);
    EXPECT_NEAR(mean, m, 1e-14);
    // Variance follows the SOS relation with theta = 1/n.
    EXPECT_NEAR(second - mean * mean, 0.25 * (5.0 - m) * (m - 1.0), 1e-13);
  }
  EXPECT_THROW(model.Pmf(-1.0), Error);
  EXPECT_THROW(BinomialRatingModel(kScale, 0.0), Error);
}

TEST(Binomial, LongWaitIsFloor) {
  const BinomialRatingModel model(kScale, 0.25);
  const std::vector<double> pmf = model.Pmf(400.0);
  EXPECT_NEAR(pmf[0], 1.0, 1e-40);
  EXPECT_GT(pmf[1], 0.0);
}

TEST(Binomial, ThetaForScale) {
  EXPECT_EQ(ThetaForBinomial(kScale).value(), 0.25);
  EXPECT_NEAR(ThetaForBinomial(RatingScale(0, 10, 7, 3)).value(), 0.1, 1e-16);
  EXPECT_THROW(ThetaForBinomial(RatingScale(1, 2, 2, 1)), Error);
}

TEST(BetaApproxModel, UsesMapping) {
  auto mapping = std::make_shared<const VideoStallMapping>(
      60.0, VideoStallMapping::Coefficients{});
  const BetaApproxModel model(BetaRatingModel(kScale, SosParameter(0.3)), mapping);
  EXPECT_EQ(model.dimension(), 2u);
  EXPECT_TRUE(model.has_continuous_cdf());
  const QosCondition x({1.0, 2.0});
  const double m = model.MosAt(x);
  EXPECT_NEAR(m, (*mapping)(1, 2.0), 0.0);
  EXPECT_EQ(model.LevelPmf(x), model.beta_model().LevelPmf(m));
  EXPECT_EQ(model.ContinuousCdf(3.1, x), model.beta_model().Cdf(3.1, m));
  EXPECT_EQ(model.LevelPmf(QosCondition({0.0, 0.0})),
            (std::vector<double>{0, 0, 0, 0, 1}));
}

TEST(BetaApproxModel, RejectsMosOutsideScale) {
  auto mapping = std::make_shared<const IqxMapping>(5.0, 0.25, 1.0);
  const BetaApproxModel model(BetaRatingModel(kScale, SosParameter(0.3)), mapping);
  EXPECT_THROW(model.LevelPmf(QosCondition({0.0})), Error);
}

TEST(Empirical, RelativeFrequencies) {
  const std::vector<int> ratings = {5, 4, 4, 3, 5, 5, 1, 4};
  const std::vector<double> pmf = EmpiricalConditionalPmf(ratings, kScale);
  EXPECT_EQ(pmf, (std::vector<double>{0.125, 0.0, 0.125, 0.375, 0.375}));
  EXPECT_THROW(EmpiricalConditionalPmf(std::vector<int>{6}, kScale), Error);
  EXPECT_THROW(EmpiricalConditionalPmf(std::vector<int>{}, kScale), Error);
}

TEST(Empirical, ModelLookup) {
  const std::vector<EmpiricalConditionalModel::Record> records = {
      {QosCondition({1.0}), 4}, {QosCondition({1.0}), 5},
      {QosCondition({2.0}), 2}, {QosCondition({1.0 + 1e-14}), 4}};
  const EmpiricalConditionalModel model =
      EmpiricalConditionalModel::FromRatings(kScale, records);
  EXPECT_EQ(model.pmfs().size(), 2u);
  const std::vector<double> at1 = model.LevelPmf(QosCondition({1.0}));
  EXPECT_NEAR(at1[3], 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(at1[4], 1.0 / 3.0, 1e-15);
  EXPECT_EQ(model.LevelPmf(QosCondition({2.0}))[1], 1.0);
  EXPECT_THROW(model.LevelPmf(QosCondition({3.0})), Error);
  // The default continuous CDF is the step function of the PMF.
  EXPECT_NEAR(model.ContinuousCdf(4.5, QosCondition({1.0})), 2.0 / 3.0, 1e-15);
  EXPECT_EQ(model.ContinuousCdf(3.99, QosCondition({1.0})), 0.0);
}

}  // namespace

}  // namespace qoedist
