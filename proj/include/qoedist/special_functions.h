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

#ifndef QOEDIST_SPECIAL_FUNCTIONS_H_
#define QOEDIST_SPECIAL_FUNCTIONS_H_

#include <cstdint>
#include <functional>
#include <span>

namespace qoedist {

// Natural log of the gamma function for z > 0. Lanczos series (g = 7, nine
// coefficients) with the reflection formula below z = 0.5.
double LogGamma(double z);

// ln B(a, b) = lnG(a) + lnG(b) - lnG(a + b).
double LogBeta(double a, double b);

// Regularized incomplete beta function I_x(a, b).
//
// Evaluated with the modified Lentz continued fraction, switching to
// 1 - I_{1-x}(b, a) when x > (a + 1) / (a + b + 2). Throws DomainError for
// x outside [0, 1] or non-positive shape parameters, and NumericalError when
// the fraction does not settle within 300 iterations.
double RegIncBeta(double x, double a, double b);

// Exact binomial coefficient for n <= 60.
std::uint64_t BinomialCoefficient(int n, int k);

// Standard normal CDF and its inverse.
double NormalCdf(double z);
double NormalQuantile(double p);

struct QuadratureSpec {
  double absolute_tolerance = 1e-11;
  double relative_tolerance = 1e-10;
  int max_subdivisions = 2000;
  // Tail mass discarded when an infinite upper limit is truncated.
  double truncation_mass = 1e-10;

  // Throws DomainError unless tolerances > 0, max_subdivisions >= 1 and
  // truncation_mass is in (0, 1e-6].
  void Validate() const;
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int subdivisions = 0;
  int evaluations = 0;
};

using RealFunction = std::function<double(double)>;

// Adaptive Gauss-Kronrod (7/15) integration on a finite interval. The
// interval with the largest error estimate is bisected until the total error
// is within max(absolute, relative * |value|).
QuadratureResult Integrate(const RealFunction& f, double lower, double upper,
                           const QuadratureSpec& spec = {});

// Same, but the interval is pre-split at the given interior points, which is
// how callers hand over peaks or kinks of the integrand. `points` must be
// sorted and contain at least the two end points.
QuadratureResult IntegrateOver(const RealFunction& f,
                               std::span<const double> points,
                               const QuadratureSpec& spec = {});

// Integral over [lower, +inf).
//
// With `tail_mass` (a complementary CDF of the weight the integrand carries),
// the domain is cut at the first point of the sequence lower + 1, 2, 4, ...
// where tail_mass < spec.truncation_mass. Without it, the integrator walks
// geometrically growing panels until a panel contributes less than
// truncation_mass.
QuadratureResult IntegrateToInfinity(const RealFunction& f, double lower,
                                     const RealFunction& tail_mass,
                                     const QuadratureSpec& spec = {});

// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void Add(double value);
  double Total() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

}  // namespace qoedist

#endif  // QOEDIST_SPECIAL_FUNCTIONS_H_
