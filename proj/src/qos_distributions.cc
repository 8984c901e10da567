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

#include "qoedist/qos_distributions.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <string>

#include "qoedist/special_functions.h"

namespace qoedist {

namespace {

// Floors coordinates to bins; the slack absorbs representation error such as
// 0.3 / 0.1 = 2.9999999999999996.
constexpr double kBinSlack = 1e-9;

}  // namespace

LognormalQos::LognormalQos(double mu, double sigma) : mu_(mu), sigma_(sigma) {
  if (!std::isfinite(mu)) throw DomainError("lognormal mu must be finite");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw DomainError("lognormal sigma must be positive");
  }
}

double LognormalQos::Mean() const {
  return std::exp(mu_ + 0.5 * sigma_ * sigma_);
}

double LognormalQos::Std() const {
  return Mean() * std::sqrt(std::expm1(sigma_ * sigma_));
}

double LognormalQos::Pdf(double x) const {
  if (!(x > 0.0)) {
    throw DomainError("lognormal density is defined for x > 0 only");
  }
  if (std::isinf(x)) return 0.0;
  const double z = (std::log(x) - mu_) / sigma_;
  return std::exp(-0.5 * z * z) /
         (x * sigma_ * std::sqrt(2.0 * std::numbers::pi));
}

double LognormalQos::Quantile(double p) const {
  return std::exp(mu_ + sigma_ * NormalQuantile(p));
}

Support LognormalQos::support() const {
  return {0.0, std::numeric_limits<double>::infinity()};
}

LognormalParams LognormalFromMoments(double mean, double std) {
  if (!(mean > 0.0) || !std::isfinite(mean)) {
    throw DomainError("lognormal mean must be positive");
  }
  if (!(std > 0.0) || !std::isfinite(std)) {
    throw DomainError("lognormal standard deviation must be positive");
  }
  const double ratio = std / mean;
  const double variance = std::log1p(ratio * ratio);
  return {std::log(mean) - 0.5 * variance, std::sqrt(variance)};
}

double LognormalPdf(double x, const LognormalQos& q) { return q.Pdf(x); }

double LognormalQuantile(double p, const LognormalQos& q) {
  return q.Quantile(p);
}

TabulatedPdfQos::TabulatedPdfQos(std::vector<std::pair<double, double>> nodes)
    : nodes_(std::move(nodes)) {
  if (nodes_.size() < 2) {
    throw DomainError("tabulated density needs at least two nodes");
  }
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const auto& [x, d] = nodes_[i];
    if (!std::isfinite(x) || !std::isfinite(d) || d < 0.0) {
      throw DomainError("tabulated density nodes must be finite and >= 0");
    }
    if (i > 0 && !(x > nodes_[i - 1].first)) {
      throw DomainError("tabulated density x values must be increasing");
    }
  }
  // Trapezoids are exact for a piecewise-linear density.
  cumulative_.push_back(0.0);
  CompensatedSum total;
  for (std::size_t i = 1; i < nodes_.size(); ++i) {
    total.Add(0.5 * (nodes_[i].second + nodes_[i - 1].second) *
              (nodes_[i].first - nodes_[i - 1].first));
    cumulative_.push_back(total.Total());
  }
  const double mass = cumulative_.back();
  if (!(mass > 0.0)) throw DomainError("tabulated density has zero mass");
  for (auto& node : nodes_) node.second /= mass;
  for (double& c : cumulative_) c /= mass;
  cumulative_.back() = 1.0;
}

double TabulatedPdfQos::Pdf(double x) const {
  if (x < nodes_.front().first || x > nodes_.back().first) return 0.0;
  auto upper = std::lower_bound(
      nodes_.begin(), nodes_.end(), x,
      [](const std::pair<double, double>& n, double v) { return n.first < v; });
  if (upper->first == x) return upper->second;
  const auto lower = std::prev(upper);
  const double t = (x - lower->first) / (upper->first - lower->first);
  return lower->second + t * (upper->second - lower->second);
}

double TabulatedPdfQos::Quantile(double p) const {
  if (!(p > 0.0 && p < 1.0)) {
    throw DomainError("quantile level must lie in (0, 1)");
  }
  const auto it = std::lower_bound(cumulative_.begin(), cumulative_.end(), p);
  const std::size_t i = static_cast<std::size_t>(
      std::max<std::ptrdiff_t>(1, it - cumulative_.begin()));
  const auto& [x0, d0] = nodes_[i - 1];
  const auto& [x1, d1] = nodes_[i];
  const double slope = (d1 - d0) / (x1 - x0);
  const double target = p - cumulative_[i - 1];
  // Solve d0 t + slope t^2 / 2 = target in the cancellation-free form.
  const double root = std::sqrt(std::max(0.0, d0 * d0 + 2.0 * slope * target));
  const double denominator = d0 + root;
  const double t = denominator > 0.0 ? 2.0 * target / denominator : 0.0;
  return std::clamp(x0 + t, x0, x1);
}

Support TabulatedPdfQos::support() const {
  return {nodes_.front().first, nodes_.back().first};
}

EmpiricalJointPmf::EmpiricalJointPmf(std::vector<QosAtom> atoms,
                                     std::vector<double> bin_widths,
                                     double quantum)
    : bin_widths_(std::move(bin_widths)) {
  if (atoms.empty()) throw DomainError("QoS PMF has no atoms");
  dimension_ = atoms.front().condition.dimension();
  // Keyed by the quantized condition; atoms keep their exact coordinates.
  std::map<QosCondition, QosAtom> merged;
  CompensatedSum total;
  for (const QosAtom& atom : atoms) {
    if (atom.condition.dimension() != dimension_) {
      throw DomainError("QoS PMF atoms differ in dimension");
    }
    if (!(atom.probability >= 0.0) || !std::isfinite(atom.probability)) {
      throw DomainError("QoS PMF probabilities must be finite and >= 0");
    }
    const auto [it, inserted] =
        merged.emplace(atom.condition.Quantized(quantum), atom);
    if (!inserted) throw DomainError("duplicate condition in QoS PMF");
    total.Add(atom.probability);
  }
  if (std::fabs(total.Total() - 1.0) > 1e-6) {
    throw DomainError("QoS PMF probabilities do not sum to one");
  }
  if (!bin_widths_.empty() && bin_widths_.size() != dimension_) {
    throw DomainError("need one bin width per QoS dimension");
  }
  for (double w : bin_widths_) {
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw DomainError("bin widths must be positive");
    }
  }
  atoms_.reserve(merged.size());
  for (auto& [key, atom] : merged) atoms_.push_back(std::move(atom));
}

EmpiricalJointPmf EmpiricalJointPmf::PointMass(const QosCondition& condition) {
  return EmpiricalJointPmf({{condition, 1.0}});
}

LoadedJointPmf LoadJointPmf(std::span<const JointPmfRow> rows,
                            const JointPmfOptions& options) {
  if (rows.empty()) throw DomainError("QoS PMF table has no rows");
  const std::size_t dimension = rows.front().coordinates.size();
  std::map<QosCondition, QosAtom> merged;
  for (const JointPmfRow& row : rows) {
    if (row.coordinates.size() != dimension) {
      throw DomainError("QoS PMF rows have inconsistent dimensions");
    }
    if (!std::isfinite(row.probability)) {
      throw DomainError("QoS PMF probability is not finite");
    }
    if (row.probability < 0.0) {
      throw DomainError("QoS PMF probability is negative");
    }
    const QosCondition condition(row.coordinates);
    const auto [it, inserted] = merged.emplace(
        condition.Quantized(options.quantum), QosAtom{condition, row.probability});
    if (!inserted) {
      if (!options.merge_duplicates) {
        throw DomainError("duplicate QoS condition in PMF table");
      }
      it->second.probability += row.probability;
    }
  }
  std::vector<double> weights;
  weights.reserve(merged.size());
  for (const auto& [key, atom] : merged) weights.push_back(atom.probability);
  const NormalizedPmf normalized =
      AcceptPmf(weights, options.normalize, options.tolerance);

  std::vector<QosAtom> atoms;
  atoms.reserve(merged.size());
  std::size_t i = 0;
  for (const auto& [key, atom] : merged) {
    atoms.push_back({atom.condition, normalized.probabilities[i++]});
  }
  return {EmpiricalJointPmf(std::move(atoms), options.bin_widths,
                            options.quantum),
          normalized.deficit};
}

EmpiricalJointPmf PmfFromSamples(std::span<const QosCondition> samples,
                                 std::span<const double> bin_widths) {
  if (samples.empty()) throw DomainError("no QoS samples given");
  const std::size_t dimension = samples.front().dimension();
  if (bin_widths.size() != dimension) {
    throw DomainError("need one bin width per QoS dimension");
  }
  for (double w : bin_widths) {
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw DomainError("bin widths must be positive");
    }
  }
  std::map<QosCondition, std::size_t> counts;
  for (const QosCondition& s : samples) {
    if (s.dimension() != dimension) {
      throw DomainError("QoS samples have inconsistent dimensions");
    }
    std::vector<double> binned(dimension);
    for (std::size_t d = 0; d < dimension; ++d) {
      binned[d] = std::floor(s[d] / bin_widths[d] + kBinSlack) * bin_widths[d];
    }
    ++counts[QosCondition(std::move(binned)).Quantized(kDefaultConditionQuantum)];
  }
  std::vector<QosAtom> atoms;
  atoms.reserve(counts.size());
  const double n = static_cast<double>(samples.size());
  for (const auto& [condition, count] : counts) {
    atoms.push_back({condition, static_cast<double>(count) / n});
  }
  return EmpiricalJointPmf(
      std::move(atoms),
      std::vector<double>(bin_widths.begin(), bin_widths.end()));
}

QosDistribution::QosDistribution(std::shared_ptr<const ContinuousQos> continuous)
    : continuous_(std::move(continuous)) {
  if (!continuous_) throw DomainError("continuous QoS distribution is null");
}

QosDistribution::QosDistribution(EmpiricalJointPmf discrete)
    : discrete_(std::move(discrete)) {}

std::size_t QosDistribution::dimension() const {
  return continuous_ ? 1 : discrete_->dimension();
}

const ContinuousQos& QosDistribution::continuous() const {
  if (!continuous_) throw DomainError("QoS distribution is discrete");
  return *continuous_;
}

const EmpiricalJointPmf& QosDistribution::discrete() const {
  if (!discrete_) throw DomainError("QoS distribution is continuous");
  return *discrete_;
}

QosDistribution LognormalQosFromMoments(double mean, double std) {
  const LognormalParams params = LognormalFromMoments(mean, std);
  if (params.degenerate()) {
    return QosDistribution(EmpiricalJointPmf::PointMass(QosCondition{mean}));
  }
  return QosDistribution(
      std::make_shared<const LognormalQos>(params.mu, params.sigma));
}

}  // namespace qoedist
