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

// System-level QoE: the conditional rating model Q|x combined with the QoS
// distribution of X,
//
//   P(Q = i) = int P(Q = i | x) h(x) dx       (continuous X)
//   P(Q = i) = sum_x P(Q = i | x) h(x)        (discrete X)
//
// and likewise for the CDF P(Q <= y) on the continuous rating range.

#ifndef QOEDIST_SYSTEM_QOE_H_
#define QOEDIST_SYSTEM_QOE_H_

#include <cstddef>
#include <memory>

#include "qoedist/core.h"
#include "qoedist/mos_mappings.h"
#include "qoedist/qos_distributions.h"
#include "qoedist/rating_models.h"
#include "qoedist/special_functions.h"

namespace qoedist {

enum class OutputMode { kDiscrete, kContinuous, kBoth };

struct SystemQoeRequest {
  std::shared_ptr<const ConditionalRatingModel> rating_model;
  QosDistribution qos;
  QuadratureSpec quadrature = {};
  // kContinuous and kBoth attach the mixed CDF over [L, H] to the result.
  OutputMode output_mode = OutputMode::kDiscrete;
};

struct MixDiagnostics {
  // 1 - (total mixed mass before the final rescaling). For continuous QoS
  // this is essentially the truncated tail mass.
  double normalization_deficit = 0.0;
  // Sum of the per-level quadrature error estimates (0 for discrete QoS).
  double quadrature_error = 0.0;
  // Upper integration limit actually used (0 for discrete QoS).
  double truncation_point = 0.0;
  std::size_t terms = 0;
};

struct MixResult {
  QoeDistribution distribution;
  MixDiagnostics diagnostics;
};

// Per-level adaptive quadrature over the (truncated) support of a 1-D
// continuous QoS distribution. Throws DomainError on a dimension mismatch and
// NumericalError when a quadrature fails.
MixResult MixContinuous(const SystemQoeRequest& request);

// Weighted sum over the atoms of a discrete QoS PMF, compensated and in atom
// order.
MixResult MixDiscrete(const SystemQoeRequest& request);

// Dispatches on the QoS distribution type.
MixResult Mix(const SystemQoeRequest& request);

struct Expectation {
  double value;
  double error_estimate;
};

// E[f(X)] by quadrature (continuous X) or summation (discrete X). For a model
// whose conditional mean is f(x), this equals E[Q].
Expectation ExpectedQoeViaMos(const MosMapping& mapping,
                              const QosDistribution& qos,
                              const QuadratureSpec& quadrature = {});

// g(x) = P(Q|x >= k) on the discrete rating variable. For Beta models this is
// 1 - F(k - 0.5 | x), the GoB of the discretized conditional distribution.
double GobMapping(const QosCondition& x, const ConditionalRatingModel& model);

// E[g(X)]: GoB of the system obtained without building the full distribution.
Expectation ExpectedGob(const ConditionalRatingModel& model,
                        const QosDistribution& qos,
                        const QuadratureSpec& quadrature = {});

}  // namespace qoedist

#endif  // QOEDIST_SYSTEM_QOE_H_
