// Copyright 2026 The Smartmarket Authors
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

#ifndef SMARTMARKET_SMART_METER_H_
#define SMARTMARKET_SMART_METER_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace smartmarket {

inline constexpr std::int64_t kPeriodSeconds = 1800;

// Half-hourly loads of several meters on one common time index.
struct SmartMeterTable {
  std::vector<std::string> ids;
  // Seconds since the Unix epoch, strictly increasing by kPeriodSeconds.
  std::vector<std::int64_t> timestamps;
  // loads[c][t]: kWh of meter ids[c] in period timestamps[t].
  std::vector<std::vector<double>> loads;

  std::size_t periods() const { return timestamps.size(); }
  // Row of `id`; throws DataError when absent.
  const std::vector<double>& Series(std::string_view id) const;
};

// "YYYY-MM-DD HH:MM[:SS]" or with a 'T' separator, UTC. Returns false when
// the text does not parse.
bool ParseTimestamp(std::string_view text, std::int64_t* seconds);
// "YYYY-MM-DD HH:MM:SS".
std::string FormatTimestamp(std::int64_t seconds);

// Reads CSV with header id,timestamp,kwh. Rows may come in any order. Every
// problem (unparseable row, duplicate key, gap or off-cadence stamp, meters
// on different time ranges, no rows) is collected and thrown as one
// DataError.
SmartMeterTable ReadSmartMeterCsv(std::istream& in);
SmartMeterTable IngestCsv(const std::filesystem::path& path);

void WriteSmartMeterCsv(const SmartMeterTable& table, std::ostream& out);
void WriteSmartMeterCsv(const SmartMeterTable& table, const std::filesystem::path& path);

// Chronological train/validation/test fractions.
struct SplitSpec {
  double train = 0.70;
  double validation = 0.10;
  double test = 0.20;
};

// Half-open index ranges [0, train_end), [train_end, validation_end),
// [validation_end, size).
struct SplitIndices {
  std::size_t train_end = 0;
  std::size_t validation_end = 0;
  std::size_t size = 0;
};

// Throws DomainError when fractions are negative, do not sum to 1 or leave
// a split empty.
SplitIndices ChronologicalSplit(std::size_t size, const SplitSpec& spec = {});

// reference * sum(target[0, window)) / sum(reference[0, window)). Throws
// DomainError for mismatched lengths, an empty window or a zero reference sum.
std::vector<double> RescaleReference(std::span<const double> reference,
                                     std::span<const double> target,
                                     std::size_t window);

}  // namespace smartmarket

#endif  // SMARTMARKET_SMART_METER_H_
