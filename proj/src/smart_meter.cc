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

#include "smartmarket/smart_meter.h"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>

#include "smartmarket/csv.h"
#include "smartmarket/errors.h"

namespace smartmarket {

namespace {

constexpr std::size_t kMaxGapsReported = 20;

bool ParseInt(std::string_view text, int* value) {
  if (text.empty()) return false;
  int v = 0;
  for (char c : text) {
    if (c < '0' || c > '9') return false;
    v = v * 10 + (c - '0');
  }
  *value = v;
  return true;
}

bool ParseDouble(const std::string& text, double* value) {
  if (text.empty()) return false;
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end != text.c_str() + text.size() || !std::isfinite(v)) return false;
  *value = v;
  return true;
}

std::string Lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

}  // namespace

const std::vector<double>& SmartMeterTable::Series(std::string_view id) const {
  for (std::size_t c = 0; c < ids.size(); ++c) {
    if (ids[c] == id) return loads[c];
  }
  throw DataError({"no meter with id '" + std::string(id) + "'"});
}

bool ParseTimestamp(std::string_view text, std::int64_t* seconds) {
  // YYYY-MM-DD?HH:MM[:SS]
  if (text.size() != 16 && text.size() != 19) return false;
  if (text[4] != '-' || text[7] != '-' || (text[10] != ' ' && text[10] != 'T') ||
      text[13] != ':') {
    return false;
  }
  int y, mo, d, h, mi, s = 0;
  if (!ParseInt(text.substr(0, 4), &y) || !ParseInt(text.substr(5, 2), &mo) ||
      !ParseInt(text.substr(8, 2), &d) || !ParseInt(text.substr(11, 2), &h) ||
      !ParseInt(text.substr(14, 2), &mi)) {
    return false;
  }
  if (text.size() == 19 && (text[16] != ':' || !ParseInt(text.substr(17, 2), &s))) {
    return false;
  }
  using namespace std::chrono;
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)},
                           day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || h > 23 || mi > 59 || s > 59) return false;
  *seconds = duration_cast<std::chrono::seconds>(sys_days{ymd}.time_since_epoch()).count() +
             h * 3600 + mi * 60 + s;
  return true;
}

std::string FormatTimestamp(std::int64_t seconds) {
  using namespace std::chrono;
  const std::int64_t day_count = (seconds >= 0 ? seconds : seconds - 86399) / 86400;
  const std::int64_t rest = seconds - day_count * 86400;
  const year_month_day ymd{sys_days{days{day_count}}};
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%04d-%02u-%02u %02d:%02d:%02d",
                static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                static_cast<unsigned>(ymd.day()), static_cast<int>(rest / 3600),
                static_cast<int>(rest % 3600 / 60), static_cast<int>(rest % 60));
  return buffer;
}

SmartMeterTable ReadSmartMeterCsv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw DataError({"no rows"});
  const std::vector<std::string> header = SplitCsvLine(line);
  if (header.size() != 3 || Lower(header[0]) != "id" ||
      Lower(header[1]) != "timestamp" || Lower(header[2]) != "kwh") {
    throw DataError({"header must be id,timestamp,kwh"});
  }
  std::vector<std::string> errors;
  std::map<std::string, std::map<std::int64_t, double>> readings;
  std::size_t line_number = 1;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    ++rows;
    const std::string where = "line " + std::to_string(line_number);
    const std::vector<std::string> cells = SplitCsvLine(line);
    if (cells.size() != 3) {
      errors.push_back(where + ": expected 3 fields, found " + std::to_string(cells.size()));
      continue;
    }
    std::int64_t stamp;
    if (!ParseTimestamp(cells[1], &stamp)) {
      errors.push_back(where + ": unparseable timestamp '" + cells[1] + "'");
      continue;
    }
    double kwh;
    if (!ParseDouble(cells[2], &kwh)) {
      errors.push_back(where + ": unparseable load '" + cells[2] + "'");
      continue;
    }
    if (cells[0].empty()) {
      errors.push_back(where + ": empty meter id");
      continue;
    }
    if (stamp % kPeriodSeconds != 0) {
      errors.push_back(where + ": timestamp " + cells[1] + " is not on the half-hour grid");
      continue;
    }
    auto [it, inserted] = readings[cells[0]].emplace(stamp, kwh);
    if (!inserted) {
      errors.push_back(where + ": duplicate reading for meter " + cells[0] + " at " +
                       FormatTimestamp(stamp));
    }
  }
  if (rows == 0) throw DataError({"no rows"});

  std::int64_t first = 0, last = 0;
  bool have_range = false;
  for (const auto& [id, series] : readings) {
    if (series.empty()) continue;
    std::size_t gaps = 0;
    std::int64_t previous = series.begin()->first;
    for (auto it = std::next(series.begin()); it != series.end(); ++it) {
      for (std::int64_t t = previous + kPeriodSeconds; t < it->first; t += kPeriodSeconds) {
        if (gaps++ < kMaxGapsReported) {
          errors.push_back("meter " + id + ": missing reading at " + FormatTimestamp(t));
        }
      }
      previous = it->first;
    }
    if (gaps > kMaxGapsReported) {
      errors.push_back("meter " + id + ": " + std::to_string(gaps - kMaxGapsReported) +
                       " further missing readings");
    }
    const std::int64_t lo = series.begin()->first;
    const std::int64_t hi = series.rbegin()->first;
    if (!have_range) {
      first = lo;
      last = hi;
      have_range = true;
    } else if (lo != first || hi != last) {
      errors.push_back("meter " + id + " covers " + FormatTimestamp(lo) + " to " +
                       FormatTimestamp(hi) + ", expected " + FormatTimestamp(first) +
                       " to " + FormatTimestamp(last));
    }
  }
  if (!errors.empty()) throw DataError(std::move(errors));

  SmartMeterTable table;
  for (std::int64_t t = first; t <= last; t += kPeriodSeconds) table.timestamps.push_back(t);
  for (const auto& [id, series] : readings) {
    table.ids.push_back(id);
    std::vector<double> loads;
    loads.reserve(series.size());
    for (const auto& [stamp, kwh] : series) loads.push_back(kwh);
    table.loads.push_back(std::move(loads));
  }
  return table;
}

SmartMeterTable IngestCsv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError({"cannot open " + path.string()});
  return ReadSmartMeterCsv(in);
}

void WriteSmartMeterCsv(const SmartMeterTable& table, std::ostream& out) {
  out << "id,timestamp,kwh\n";
  for (std::size_t c = 0; c < table.ids.size(); ++c) {
    for (std::size_t t = 0; t < table.timestamps.size(); ++t) {
      out << table.ids[c] << ',' << FormatTimestamp(table.timestamps[t]) << ','
          << FormatNumber(table.loads[c][t]) << '\n';
    }
  }
}

void WriteSmartMeterCsv(const SmartMeterTable& table, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError({"cannot open " + path.string() + " for writing"});
  WriteSmartMeterCsv(table, out);
  if (!out) throw DataError({"write to " + path.string() + " failed"});
}

SplitIndices ChronologicalSplit(std::size_t size, const SplitSpec& spec) {
  if (spec.train < 0.0 || spec.validation < 0.0 || spec.test < 0.0 ||
      std::abs(spec.train + spec.validation + spec.test - 1.0) > 1e-9) {
    throw DomainError("split fractions must be nonnegative and sum to 1");
  }
  SplitIndices out;
  out.size = size;
  out.train_end = static_cast<std::size_t>(std::floor(spec.train * size + 1e-9));
  out.validation_end =
      static_cast<std::size_t>(std::floor((spec.train + spec.validation) * size + 1e-9));
  if (out.train_end == 0 || out.validation_end == out.train_end || out.validation_end >= size) {
    throw DomainError("series of length " + std::to_string(size) +
                      " leaves an empty split");
  }
  return out;
}

std::vector<double> RescaleReference(std::span<const double> reference,
                                     std::span<const double> target,
                                     std::size_t window) {
  if (reference.size() != target.size()) {
    throw DomainError("reference and target series differ in length");
  }
  if (window == 0 || window > reference.size()) {
    throw DomainError("rescaling window must be within the series");
  }
  const double ref_sum = std::accumulate(reference.begin(), reference.begin() + window, 0.0);
  const double target_sum = std::accumulate(target.begin(), target.begin() + window, 0.0);
  if (ref_sum == 0.0) throw DomainError("reference series sums to zero");
  const double scale = target_sum / ref_sum;
  std::vector<double> out(reference.begin(), reference.end());
  for (double& v : out) v *= scale;
  return out;
}

}  // namespace smartmarket
