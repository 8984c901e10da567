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

// Delimiter-separated numeric tables: a header row naming the columns, then
// one record per line. Blank lines and lines starting with '#' are skipped.
// The delimiter (',', ';' or tab) is taken from the header row.

#ifndef QOEDIST_TABULAR_H_
#define QOEDIST_TABULAR_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "qoedist/core.h"
#include "qoedist/mos_mappings.h"
#include "qoedist/qos_distributions.h"
#include "qoedist/rating_models.h"

namespace qoedist {

struct NumericTable {
  std::string source;
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  std::vector<int> line_numbers;
};

// Errors carry ErrorKind::kData and a "source:line" pointer.
NumericTable ParseTable(std::string_view text, const std::string& source);
NumericTable ReadTable(const std::filesystem::path& path);

// Raw bytes of a file; throws a kData Error when unreadable.
std::string ReadFileBytes(const std::filesystem::path& path);

// 64-bit FNV-1a, rendered as 16 hex digits.
std::string Fnv1aHex(std::string_view bytes);

// "%.12g" formatting used for every emitted number.
std::string FormatNumber(double value);

// Histogram file: coordinate columns, then a `probability` column, e.g.
// `stalls,stall_seconds,probability`.
LoadedJointPmf LoadHistogramFile(const std::filesystem::path& path,
                                 const JointPmfOptions& options);

// Sample file: coordinate columns only, one measurement per row.
EmpiricalJointPmf LoadSamplesFile(const std::filesystem::path& path,
                                  const std::vector<double>& bin_widths);

// Raw ratings: coordinate columns, then a `rating` column.
EmpiricalConditionalModel LoadRatingsFile(const std::filesystem::path& path,
                                          const RatingScale& scale,
                                          double quantum);

// Two columns: QoS value, MOS.
TableMapping LoadTableMappingFile(const std::filesystem::path& path,
                                  const RatingScale& scale);

// Two columns: QoS value, density.
TabulatedPdfQos LoadPdfTableFile(const std::filesystem::path& path);

}  // namespace qoedist

#endif  // QOEDIST_TABULAR_H_
