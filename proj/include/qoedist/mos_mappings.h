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

#ifndef QOEDIST_MOS_MAPPINGS_H_
#define QOEDIST_MOS_MAPPINGS_H_

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "qoedist/core.h"

namespace qoedist {

// QoS condition -> MOS. Implementations declare the condition dimension they
// expect; Mos() throws DomainError on a mismatch or an invalid condition.
class MosMapping {
 public:
  virtual ~MosMapping() = default;
  virtual std::size_t dimension() const = 0;
  virtual double Mos(const QosCondition& condition) const = 0;
  virtual std::string Name() const = 0;
};

// Exponential IQX mapping f(x) = n * exp(-beta * x) + floor for a waiting
// time x in seconds.
class IqxMapping final : public MosMapping {
 public:
  IqxMapping(double levels_above_floor, double beta, double floor = 1.0);

  double levels_above_floor() const { return levels_above_floor_; }
  double beta() const { return beta_; }
  double floor() const { return floor_; }

  double operator()(double waiting_seconds) const;

  std::size_t dimension() const override { return 1; }
  double Mos(const QosCondition& condition) const override;
  std::string Name() const override { return "iqx"; }

 private:
  double levels_above_floor_;
  double beta_;
  double floor_;
};

// Stalling model for non-adaptive HTTP video:
//   f(stalls, t) = amplitude * exp(-duration_coeff * t / d
//                                  - count_coeff * stalls / d) + offset
// with t the total stall time and d the video length, both in seconds.
class VideoStallMapping final : public MosMapping {
 public:
  struct Coefficients {
    double amplitude = 3.5;
    double duration_coeff = 4.5;
    double count_coeff = 5.7;
    double offset = 1.5;
  };

  explicit VideoStallMapping(double video_seconds)
      : VideoStallMapping(video_seconds, Coefficients{}) {}
  VideoStallMapping(double video_seconds, Coefficients coefficients);

  double video_seconds() const { return video_seconds_; }
  const Coefficients& coefficients() const { return coefficients_; }

  double operator()(int stall_count, double stall_seconds) const;

  // Condition layout: (stall_count, stall_seconds). The count must be a
  // nonnegative whole number.
  std::size_t dimension() const override { return 2; }
  double Mos(const QosCondition& condition) const override;
  std::string Name() const override { return "video_stall"; }

 private:
  double video_seconds_;
  Coefficients coefficients_;
};

// Piecewise-linear 1-D mapping through (qos, mos) breakpoints. No
// extrapolation outside the first and last breakpoint.
class TableMapping final : public MosMapping {
 public:
  using Breakpoint = std::pair<double, double>;

  // Throws DomainError unless there are at least two breakpoints, QoS values
  // are strictly increasing and every MOS lies on `scale`.
  TableMapping(std::vector<Breakpoint> breakpoints, const RatingScale& scale);

  const std::vector<Breakpoint>& breakpoints() const { return breakpoints_; }

  double operator()(double qos) const;

  std::size_t dimension() const override { return 1; }
  double Mos(const QosCondition& condition) const override;
  std::string Name() const override { return "table"; }

 private:
  std::vector<Breakpoint> breakpoints_;
};

}  // namespace qoedist

#endif  // QOEDIST_MOS_MAPPINGS_H_
