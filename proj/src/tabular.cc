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

#include "qoedist/tabular.h"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <utility>

namespace qoedist {

namespace {

std::string Trim(std::string_view s) {
  std::size_t begin = 0;
  std::size_t end = s.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) {
    ++begin;
  }
  while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) {
    --end;
  }
  return std::string(s.substr(begin, end - begin));
}

std::string Lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::vector<std::string> Split(std::string_view line, char delimiter) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(delimiter, start);
    fields.push_back(Trim(line.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return fields;
}

Error DataError(const std::string& message, const std::string& where) {
  return Error(ErrorKind::kData, message, where);
}

std::string Where(const NumericTable& table, std::size_t row) {
  return table.source + ":" + std::to_string(table.line_numbers[row]);
}

// Runs `build`, re-labelling domain errors as data errors against `source`.
template <typename Build>
auto AsDataError(const std::string& source, Build&& build) {
  try {
    return build();
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::kDomain) throw;
    throw DataError(e.what(), source);
  }
}

void RequireColumns(const NumericTable& table, std::size_t count,
                    const std::string& what) {
  if (table.header.size() != count) {
    throw DataError(what + " needs exactly " + std::to_string(count) +
                        " columns",
                    table.source + ":header");
  }
}

}  // namespace

NumericTable ParseTable(std::string_view text, const std::string& source) {
  NumericTable table;
  table.source = source;
  char delimiter = ',';
  int line_number = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = text.substr(start, end - start);
    start = end + 1;
    ++line_number;
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    const std::string line = Trim(raw);
    if (line.empty() || line.front() == '#') {
      if (end == text.size()) break;
      continue;
    }
    if (table.header.empty()) {
      for (char c : {'\t', ';', ','}) {
        if (line.find(c) != std::string::npos) {
          delimiter = c;
          break;
        }
      }
      for (std::string& name : Split(line, delimiter)) {
        if (name.empty()) {
          throw DataError("empty column name in header",
                          source + ":" + std::to_string(line_number));
        }
        table.header.push_back(Lower(std::move(name)));
      }
    } else {
      const std::vector<std::string> fields = Split(line, delimiter);
      const std::string where = source + ":" + std::to_string(line_number);
      if (fields.size() != table.header.size()) {
        throw DataError("expected " + std::to_string(table.header.size()) +
                            " fields, found " + std::to_string(fields.size()),
                        where);
      }
      std::vector<double> values;
      values.reserve(fields.size());
      for (const std::string& field : fields) {
        char* parse_end = nullptr;
        errno = 0;
        const double v = std::strtod(field.c_str(), &parse_end);
        if (field.empty() || parse_end != field.c_str() + field.size() ||
            errno == ERANGE || !std::isfinite(v)) {
          throw DataError("not a finite number: '" + field + "'", where);
        }
        values.push_back(v);
      }
      table.rows.push_back(std::move(values));
      table.line_numbers.push_back(line_number);
    }
    if (end == text.size()) break;
  }
  if (table.header.empty()) throw DataError("table has no header row", source);
  if (table.rows.empty()) throw DataError("table has no data rows", source);
  return table;
}

std::string ReadFileBytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file", path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw DataError("cannot read file", path.string());
  return std::move(buffer).str();
}

NumericTable ReadTable(const std::filesystem::path& path) {
  return ParseTable(ReadFileBytes(path), path.string());
}

std::string Fnv1aHex(std::string_view bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  char out[17];
  std::snprintf(out, sizeof(out), "%016llx",
                static_cast<unsigned long long>(hash));
  return out;
}

std::string FormatNumber(double value) {
  if (value == 0.0) value = 0.0;  // no "-0"
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.12g", value);
  return buffer;
}

LoadedJointPmf LoadHistogramFile(const std::filesystem::path& path,
                                 const JointPmfOptions& options) {
  const NumericTable table = ReadTable(path);
  if (table.header.size() < 2 || table.header.back() != "probability") {
    throw DataError("histogram needs coordinate columns and a final "
                    "'probability' column",
                    table.source + ":header");
  }
  std::vector<JointPmfRow> rows;
  rows.reserve(table.rows.size());
  for (const std::vector<double>& r : table.rows) {
    rows.push_back({std::vector<double>(r.begin(), r.end() - 1), r.back()});
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].probability < 0.0) {
      throw DataError("negative probability", Where(table, i));
    }
  }
  return AsDataError(table.source, [&] { return LoadJointPmf(rows, options); });
}

EmpiricalJointPmf LoadSamplesFile(const std::filesystem::path& path,
                                  const std::vector<double>& bin_widths) {
  const NumericTable table = ReadTable(path);
  if (std::find(table.header.begin(), table.header.end(), "probability") !=
      table.header.end()) {
    throw DataError("sample files must not carry a 'probability' column",
                    table.source + ":header");
  }
  return AsDataError(table.source, [&] {
    std::vector<QosCondition> samples;
    samples.reserve(table.rows.size());
    for (const std::vector<double>& r : table.rows) samples.emplace_back(r);
    return PmfFromSamples(samples, bin_widths);
  });
}

EmpiricalConditionalModel LoadRatingsFile(const std::filesystem::path& path,
                                          const RatingScale& scale,
                                          double quantum) {
  const NumericTable table = ReadTable(path);
  if (table.header.size() < 2 || table.header.back() != "rating") {
    throw DataError("ratings file needs coordinate columns and a final "
                    "'rating' column",
                    table.source + ":header");
  }
  std::vector<EmpiricalConditionalModel::Record> records;
  records.reserve(table.rows.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const std::vector<double>& r = table.rows[i];
    const double rating = r.back();
    if (rating != std::floor(rating) || !scale.Contains(rating)) {
      throw DataError("rating is not a level of the scale", Where(table, i));
    }
    records.push_back({QosCondition(std::vector<double>(r.begin(), r.end() - 1)),
                       static_cast<int>(rating)});
  }
  return AsDataError(table.source, [&] {
    return EmpiricalConditionalModel::FromRatings(scale, records, quantum);
  });
}

TableMapping LoadTableMappingFile(const std::filesystem::path& path,
                                  const RatingScale& scale) {
  const NumericTable table = ReadTable(path);
  RequireColumns(table, 2, "mapping table");
  std::vector<TableMapping::Breakpoint> breakpoints;
  for (const std::vector<double>& r : table.rows) {
    breakpoints.emplace_back(r[0], r[1]);
  }
  return AsDataError(table.source,
                     [&] { return TableMapping(std::move(breakpoints), scale); });
}

TabulatedPdfQos LoadPdfTableFile(const std::filesystem::path& path) {
  const NumericTable table = ReadTable(path);
  RequireColumns(table, 2, "density table");
  std::vector<std::pair<double, double>> nodes;
  for (const std::vector<double>& r : table.rows) nodes.emplace_back(r[0], r[1]);
  return AsDataError(table.source,
                     [&] { return TabulatedPdfQos(std::move(nodes)); });
}

}  // namespace qoedist
