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

#include "qoedist/mos_mappings.h"

#include <algorithm>
#include <cmath>
#include <string>

namespace qoedist {

namespace {

void RequireDimension(const MosMapping& mapping, const QosCondition& c) {
  if (c.dimension() != mapping.dimension()) {
    throw DomainError(mapping.Name() + " mapping expects a " +
                      std::to_string(mapping.dimension()) +
                      "-dimensional condition, got " +
                      std::to_string(c.dimension()));
  }
}

}  // namespace

IqxMapping::IqxMapping(double levels_above_floor, double beta, double floor)
    : levels_above_floor_(levels_above_floor), beta_(beta), floor_(floor) {
  if (!(levels_above_floor > 0.0) || !std::isfinite(levels_above_floor)) {
    throw DomainError("IQX mapping needs n > 0");
  }
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw DomainError("IQX mapping needs beta > 0");
  }
  if (!std::isfinite(floor)) throw DomainError("IQX floor must be finite");
}

double IqxMapping::operator()(double waiting_seconds) const {
  if (!(waiting_seconds >= 0.0)) {
    throw DomainError("IQX mapping needs a nonnegative waiting time");
  }
  return levels_above_floor_ * std::exp(-beta_ * waiting_seconds) + floor_;
}

double IqxMapping::Mos(const QosCondition& condition) const {
  RequireDimension(*this, condition);
  return (*this)(condition[0]);
}

VideoStallMapping::VideoStallMapping(double video_seconds,
                                     Coefficients coefficients)
    : video_seconds_(video_seconds), coefficients_(coefficients) {
  if (!(video_seconds > 0.0) || !std::isfinite(video_seconds)) {
    throw DomainError("video duration must be positive");
  }
  for (double c : {coefficients.amplitude, coefficients.duration_coeff,
                   coefficients.count_coeff, coefficients.offset}) {
    if (!(c > 0.0) || !std::isfinite(c)) {
      throw DomainError("video stall mapping coefficients must be positive");
    }
  }
}

double VideoStallMapping::operator()(int stall_count,
                                     double stall_seconds) const {
  if (stall_count < 0) throw DomainError("stall count must be nonnegative");
  if (!(stall_seconds >= 0.0)) {
    throw DomainError("stall duration must be nonnegative");
  }
  const Coefficients& k = coefficients_;
  return k.amplitude * std::exp(-k.duration_coeff * stall_seconds /
                                    video_seconds_ -
                                k.count_coeff * stall_count / video_seconds_) +
         k.offset;
}

double VideoStallMapping::Mos(const QosCondition& condition) const {
  RequireDimension(*this, condition);
  const double count = condition[0];
  if (count != std::floor(count)) {
    throw DomainError("stall count must be a whole number");
  }
  if (count < 0.0) throw DomainError("stall count must be nonnegative");
  if (count > 1e9) throw DomainError("stall count out of range");
  return (*this)(static_cast<int>(count), condition[1]);
}

TableMapping::TableMapping(std::vector<Breakpoint> breakpoints,
                           const RatingScale& scale)
    : breakpoints_(std::move(breakpoints)) {
  if (breakpoints_.size() < 2) {
    throw DomainError("table mapping needs at least two breakpoints");
  }
  for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
    const auto& [qos, mos] = breakpoints_[i];
    if (!std::isfinite(qos) || !std::isfinite(mos)) {
      throw DomainError("table mapping breakpoints must be finite");
    }
    if (i > 0 && !(qos > breakpoints_[i - 1].first)) {
      throw DomainError("table mapping QoS values must be strictly increasing");
    }
    if (!scale.Contains(mos)) {
      throw DomainError("table mapping MOS " + std::to_string(mos) +
                        " lies outside the rating scale");
    }
  }
}

double TableMapping::operator()(double qos) const {
  if (!(qos >= breakpoints_.front().first && qos <= breakpoints_.back().first)) {
    throw DomainError("QoS value " + std::to_string(qos) +
                      " lies outside the table mapping range");
  }
  auto upper = std::lower_bound(
      breakpoints_.begin(), breakpoints_.end(), qos,
      [](const Breakpoint& b, double x) { return b.first < x; });
  if (upper->first == qos) return upper->second;
  const auto lower = std::prev(upper);
  const double t = (qos - lower->first) / (upper->first - lower->first);
  return lower->second + t * (upper->second - lower->second);
}

double TableMapping::Mos(const QosCondition& condition) const {
  RequireDimension(*this, condition);
  return (*this)(condition[0]);
}

}  // namespace qoedist
