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

#include "smartmarket/errors.h"

#include <utility>

namespace smartmarket {

namespace {

std::string Summarize(const std::vector<std::string>& items) {
  if (items.empty()) return "invalid data";
  std::string out = items.front();
  if (items.size() > 1) {
    out += " (and " + std::to_string(items.size() - 1) + " more)";
  }
  return out;
}

}  // namespace

DataError::DataError(std::vector<std::string> items)
    : std::runtime_error(Summarize(items)), items_(std::move(items)) {}

}  // namespace smartmarket
