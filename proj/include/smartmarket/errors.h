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

#ifndef SMARTMARKET_ERRORS_H_
#define SMARTMARKET_ERRORS_H_

#include <stdexcept>
#include <string>
#include <vector>

namespace smartmarket {

// Violated mathematical precondition (bad prices, empty support, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Missing or malformed configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input data failed validation. Carries one message per offending item so
// ingestion can report everything at once.
class DataError : public std::runtime_error {
 public:
  explicit DataError(std::vector<std::string> items);
  const std::vector<std::string>& items() const { return items_; }

 private:
  std::vector<std::string> items_;
};

// A computation produced NaN/inf or failed to converge.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace smartmarket

#endif  // SMARTMARKET_ERRORS_H_
