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

#include "qoedist/special_functions.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "qoedist/error.h"

namespace qoedist {

namespace {

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczosCoefficients = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

constexpr int kMaxFractionIterations = 300;
constexpr double kFractionEpsilon = 1e-15;
constexpr double kTiny = 1e-300;

// Modified Lentz evaluation of the continued fraction for I_x(a, b).
double BetaContinuedFraction(double x, double a, double b) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxFractionIterations; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double step = d * c;
    h *= step;
    if (std::fabs(step - 1.0) < kFractionEpsilon) return h;
  }
  throw NumericalError("incomplete beta continued fraction did not converge "
                       "for a=" + std::to_string(a) + " b=" + std::to_string(b),
                       h, std::numeric_limits<double>::infinity());
}

// Kronrod 15-point abscissae and weights; the odd entries (1, 3, 5) together
// with the centre are the embedded 7-point Gauss rule.
constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double lower;
  double upper;
  double value;
  double error;
};

double Sample(const RealFunction& f, double x) {
  const double y = f(x);
  if (!std::isfinite(y)) {
    throw NumericalError("integrand is not finite at x=" + std::to_string(x),
                         std::numeric_limits<double>::quiet_NaN(),
                         std::numeric_limits<double>::infinity());
  }
  return y;
}

Panel KronrodPanel(const RealFunction& f, double lower, double upper) {
  const double centre = 0.5 * (lower + upper);
  const double half = 0.5 * (upper - lower);
  const double fc = Sample(f, centre);
  double kronrod = fc * kKronrodWeights[7];
  double gauss = fc * kGaussWeights[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kKronrodNodes[j];
    const double sum = Sample(f, centre - dx) + Sample(f, centre + dx);
    kronrod += kKronrodWeights[j] * sum;
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * sum;
  }
  return {lower, upper, kronrod * half, std::fabs((kronrod - gauss) * half)};
}

}  // namespace

double LogGamma(double z) {
  if (!std::isfinite(z) || z <= 0.0) {
    throw DomainError("LogGamma requires a finite positive argument, got " +
                      std::to_string(z));
  }
  if (z < 0.5) {
    // Reflection: G(z) G(1 - z) = pi / sin(pi z).
    return std::log(std::numbers::pi / std::sin(std::numbers::pi * z)) -
           LogGamma(1.0 - z);
  }
  const double zm1 = z - 1.0;
  double series = kLanczosCoefficients[0];
  for (std::size_t i = 1; i < kLanczosCoefficients.size(); ++i) {
    series += kLanczosCoefficients[i] / (zm1 + static_cast<double>(i));
  }
  const double t = zm1 + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (zm1 + 0.5) * std::log(t) -
         t + std::log(series);
}

double LogBeta(double a, double b) {
  return LogGamma(a) + LogGamma(b) - LogGamma(a + b);
}

double RegIncBeta(double x, double a, double b) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw DomainError("RegIncBeta requires 0 <= x <= 1, got " +
                      std::to_string(x));
  }
  if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
    throw DomainError("RegIncBeta requires positive finite shapes");
  }
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double log_front =
      a * std::log(x) + b * std::log1p(-x) - LogBeta(a, b);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return std::exp(log_front) * BetaContinuedFraction(x, a, b) / a;
  }
  return 1.0 - std::exp(log_front) * BetaContinuedFraction(1.0 - x, b, a) / b;
}

std::uint64_t BinomialCoefficient(int n, int k) {
  if (n < 0 || k < 0 || k > n) {
    throw DomainError("BinomialCoefficient requires 0 <= k <= n");
  }
  if (n > 60) throw DomainError("BinomialCoefficient is exact only for n <= 60");
  k = std::min(k, n - k);
  unsigned __int128 c = 1;
  for (int i = 0; i < k; ++i) {
    c = c * static_cast<unsigned>(n - i) / static_cast<unsigned>(i + 1);
  }
  return static_cast<std::uint64_t>(c);
}

double NormalCdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double NormalQuantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw DomainError("NormalQuantile requires 0 < p < 1, got " +
                      std::to_string(p));
  }
  // Acklam's rational approximation followed by one Halley step.
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double kLowBreak = 0.02425;
  double z;
  if (p < kLowBreak) {
    const double q = std::sqrt(-2.0 * std::log(p));
    z = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - kLowBreak) {
    const double q = p - 0.5;
    const double r = q * q;
    z = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) *
        q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log1p(-p));
    z = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  // Refine against whichever tail keeps the residual well conditioned.
  const double e = p < 0.5 ? NormalCdf(z) - p
                           : (1.0 - p) - 0.5 * std::erfc(z / std::numbers::sqrt2);
  const double u = e * std::sqrt(2.0 * std::numbers::pi) *
                   std::exp(0.5 * z * z);
  return z - u / (1.0 + 0.5 * z * u);
}

void QuadratureSpec::Validate() const {
  if (!(absolute_tolerance > 0.0) || !(relative_tolerance > 0.0)) {
    throw DomainError("quadrature tolerances must be positive");
  }
  if (max_subdivisions < 1) {
    throw DomainError("quadrature max_subdivisions must be at least 1");
  }
  if (!(truncation_mass > 0.0 && truncation_mass <= 1e-6)) {
    throw DomainError("quadrature truncation_mass must lie in (0, 1e-6]");
  }
}

QuadratureResult IntegrateOver(const RealFunction& f,
                               std::span<const double> points,
                               const QuadratureSpec& spec) {
  spec.Validate();
  if (points.size() < 2) {
    throw DomainError("IntegrateOver needs at least two points");
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!std::isfinite(points[i])) {
      throw DomainError("integration limits must be finite");
    }
    if (i > 0 && points[i] < points[i - 1]) {
      throw DomainError("integration break points must be sorted");
    }
  }

  std::vector<Panel> panels;
  QuadratureResult result;
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (points[i] == points[i - 1]) continue;
    panels.push_back(KronrodPanel(f, points[i - 1], points[i]));
    result.evaluations += 15;
  }
  if (panels.empty()) return result;

  auto totals = [&panels]() {
    CompensatedSum value;
    CompensatedSum error;
    for (const Panel& p : panels) {
      value.Add(p.value);
      error.Add(p.error);
    }
    return std::pair{value.Total(), error.Total()};
  };

  auto [value, error] = totals();
  while (error > std::max(spec.absolute_tolerance,
                          spec.relative_tolerance * std::fabs(value))) {
    if (result.subdivisions >= spec.max_subdivisions) {
      throw NumericalError(
          "quadrature did not converge within " +
              std::to_string(spec.max_subdivisions) + " subdivisions",
          value, error);
    }
    // Bisect the worst panel. A linear scan keeps the subdivision order (and
    // therefore the result) independent of heap implementation details.
    std::size_t worst = 0;
    for (std::size_t i = 1; i < panels.size(); ++i) {
      if (panels[i].error > panels[worst].error) worst = i;
    }
    const Panel parent = panels[worst];
    const double mid = 0.5 * (parent.lower + parent.upper);
    if (!(mid > parent.lower && mid < parent.upper)) {
      throw NumericalError("quadrature interval cannot be refined further",
                           value, error);
    }
    panels[worst] = KronrodPanel(f, parent.lower, mid);
    panels.push_back(KronrodPanel(f, mid, parent.upper));
    result.evaluations += 30;
    ++result.subdivisions;
    std::tie(value, error) = totals();
  }
  result.value = value;
  result.error_estimate = error;
  return result;
}

QuadratureResult Integrate(const RealFunction& f, double lower, double upper,
                           const QuadratureSpec& spec) {
  if (upper < lower) {
    QuadratureResult flipped = Integrate(f, upper, lower, spec);
    flipped.value = -flipped.value;
    return flipped;
  }
  const std::array<double, 2> points = {lower, upper};
  return IntegrateOver(f, points, spec);
}

QuadratureResult IntegrateToInfinity(const RealFunction& f, double lower,
                                     const RealFunction& tail_mass,
                                     const QuadratureSpec& spec) {
  spec.Validate();
  if (!std::isfinite(lower)) {
    throw DomainError("IntegrateToInfinity needs a finite lower limit");
  }
  constexpr int kMaxDoublings = 1000;
  if (tail_mass) {
    double width = 1.0;
    int doublings = 0;
    while (tail_mass(lower + width) >= spec.truncation_mass) {
      width *= 2.0;
      if (++doublings > kMaxDoublings || !std::isfinite(lower + width)) {
        throw NumericalError("could not find a truncation point", 0.0,
                             std::numeric_limits<double>::infinity());
      }
    }
    QuadratureResult r = Integrate(f, lower, lower + width, spec);
    r.error_estimate += spec.truncation_mass;
    return r;
  }

  // Geometric panels [lower + w - 1, lower + 2w - 1) for w = 1, 2, 4, ...;
  // stop after two consecutive panels below the truncation mass.
  QuadratureResult total;
  CompensatedSum value;
  double start = lower;
  double width = 1.0;
  int quiet_panels = 0;
  for (int i = 0; i < kMaxDoublings; ++i) {
    const QuadratureResult panel = Integrate(f, start, start + width, spec);
    value.Add(panel.value);
    total.error_estimate += panel.error_estimate;
    total.subdivisions += panel.subdivisions;
    total.evaluations += panel.evaluations;
    quiet_panels =
        std::fabs(panel.value) < spec.truncation_mass ? quiet_panels + 1 : 0;
    if (quiet_panels >= 2) {
      total.value = value.Total();
      total.error_estimate += spec.truncation_mass;
      return total;
    }
    start += width;
    width *= 2.0;
    if (!std::isfinite(start + width)) break;
  }
  throw NumericalError("integrand tail did not decay", value.Total(),
                       std::numeric_limits<double>::infinity());
}

void CompensatedSum::Add(double value) {
  const double t = sum_ + value;
  if (std::fabs(sum_) >= std::fabs(value)) {
    compensation_ += (sum_ - t) + value;
  } else {
    compensation_ += (value - t) + sum_;
  }
  sum_ = t;
}

}  // namespace qoedist
