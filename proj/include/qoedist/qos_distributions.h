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

#ifndef QOEDIST_QOS_DISTRIBUTIONS_H_
#define QOEDIST_QOS_DISTRIBUTIONS_H_

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qoedist/core.h"

namespace qoedist {

struct Support {
  double lower;
  double upper;  // may be +inf
};

// Anything with a density, a quantile function and a support can be mixed.
class ContinuousQos {
 public:
  virtual ~ContinuousQos() = default;
  virtual double Pdf(double x) const = 0;
  virtual double Quantile(double p) const = 0;
  virtual Support support() const = 0;
  virtual std::string Name() const = 0;
};

class LognormalQos final : public ContinuousQos {
 public:
  // Throws DomainError unless mu is finite and sigma > 0.
  LognormalQos(double mu, double sigma);

  double mu() const { return mu_; }
  double sigma() const { return sigma_; }
  double Mean() const;
  double Std() const;

  // Throws DomainError for x <= 0.
  double Pdf(double x) const override;
  // exp(mu + sigma * Phi^-1(p)); throws DomainError unless 0 < p < 1.
  double Quantile(double p) const override;
  Support support() const override;
  std::string Name() const override { return "lognormal"; }

 private:
  double mu_;
  double sigma_;
};

// Log-scale parameters matched to a mean and standard deviation:
//   sigma^2 = ln(1 + std^2 / mean^2),  mu = ln(mean) - sigma^2 / 2.
struct LognormalParams {
  double mu;
  double sigma;

  // Below this sigma the density is treated as a point mass at the mean.
  static constexpr double kDegenerateSigma = 1e-8;
  bool degenerate() const { return sigma < kDegenerateSigma; }
};

// Throws DomainError unless mean > 0 and std > 0.
LognormalParams LognormalFromMoments(double mean, double std);

double LognormalPdf(double x, const LognormalQos& q);
double LognormalQuantile(double p, const LognormalQos& q);

// Piecewise-linear density through (x, density) nodes, rescaled to unit mass.
class TabulatedPdfQos final : public ContinuousQos {
 public:
  // Throws DomainError on fewer than two nodes, non-increasing x, negative or
  // non-finite densities, or zero total mass.
  explicit TabulatedPdfQos(std::vector<std::pair<double, double>> nodes);

  const std::vector<std::pair<double, double>>& nodes() const { return nodes_; }

  double Pdf(double x) const override;
  double Quantile(double p) const override;
  Support support() const override;
  std::string Name() const override { return "pdf_table"; }

 private:
  std::vector<std::pair<double, double>> nodes_;
  std::vector<double> cumulative_;
};

struct QosAtom {
  QosCondition condition;
  double probability;
};

// Finite-support, possibly multi-dimensional QoS PMF, kept sorted by
// condition.
class EmpiricalJointPmf {
 public:
  // Throws DomainError on empty input, ragged dimensions, negative
  // probabilities, a total further than 1e-6 from one, duplicate conditions
  // (after quantization) or bin widths of the wrong length.
  EmpiricalJointPmf(std::vector<QosAtom> atoms,
                    std::vector<double> bin_widths = {},
                    double quantum = kDefaultConditionQuantum);

  static EmpiricalJointPmf PointMass(const QosCondition& condition);

  std::span<const QosAtom> atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  std::size_t dimension() const { return dimension_; }
  const std::vector<double>& bin_widths() const { return bin_widths_; }

 private:
  std::vector<QosAtom> atoms_;
  std::size_t dimension_ = 0;
  std::vector<double> bin_widths_;
};

struct JointPmfRow {
  std::vector<double> coordinates;
  double probability;
};

struct JointPmfOptions {
  bool normalize = false;
  bool merge_duplicates = false;
  double tolerance = 1e-6;
  double quantum = kDefaultConditionQuantum;
  std::vector<double> bin_widths;
};

struct LoadedJointPmf {
  EmpiricalJointPmf pmf;
  // 1 - (sum of the probabilities as read).
  double deficit;
};

// Builds a validated PMF from tabular rows. Duplicates are summed when
// merge_duplicates is set and rejected otherwise.
LoadedJointPmf LoadJointPmf(std::span<const JointPmfRow> rows,
                            const JointPmfOptions& options = {});

// Histogram of raw samples on the grid floor(x / width) * width.
EmpiricalJointPmf PmfFromSamples(std::span<const QosCondition> samples,
                                 std::span<const double> bin_widths);

// A system QoS distribution: continuous (1-D) or discrete (any dimension).
class QosDistribution {
 public:
  QosDistribution(std::shared_ptr<const ContinuousQos> continuous);
  QosDistribution(EmpiricalJointPmf discrete);

  bool is_continuous() const { return continuous_ != nullptr; }
  std::size_t dimension() const;
  const ContinuousQos& continuous() const;
  const EmpiricalJointPmf& discrete() const;
  std::shared_ptr<const ContinuousQos> continuous_ptr() const {
    return continuous_;
  }

 private:
  std::shared_ptr<const ContinuousQos> continuous_;
  std::optional<EmpiricalJointPmf> discrete_;
};

// Lognormal waiting-time distribution from its first two moments; a point
// mass at `mean` when the fitted sigma is degenerate.
QosDistribution LognormalQosFromMoments(double mean, double std);

}  // namespace qoedist

#endif  // QOEDIST_QOS_DISTRIBUTIONS_H_
