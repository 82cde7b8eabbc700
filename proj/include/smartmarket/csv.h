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

#ifndef SMARTMARKET_CSV_H_
#define SMARTMARKET_CSV_H_

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace smartmarket {

// Shortest round-trippable rendering used for every numeric CSV cell.
std::string FormatNumber(double value);

// Comma-separated writer. Cells are written verbatim; callers keep them free
// of commas and quotes.
class CsvWriter {
 public:
  // Throws DataError when the file cannot be opened.
  explicit CsvWriter(const std::filesystem::path& path);

  void Row(const std::vector<std::string>& cells);
  void Row(std::initializer_list<std::string_view> cells);

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

// Splits one CSV line on commas and trims surrounding whitespace.
std::vector<std::string> SplitCsvLine(std::string_view line);

}  // namespace smartmarket

#endif  // SMARTMARKET_CSV_H_
