//
// Copyright 2026 The Privacy HCR Authors
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
//

#ifndef PRIVACY_HCR_ERRORS_H_
#define PRIVACY_HCR_ERRORS_H_

#include <stdexcept>
#include <string>

namespace privacy_hcr {

// Malformed input: bad dimensions, unparsable files, out-of-range indices.
// The command line front end maps this to exit code 2.
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

// A well-formed request outside the mathematical domain of an operation,
// e.g. a bound with zero noise variance. Mapped to exit code 3.
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

}  // namespace privacy_hcr

#endif  // PRIVACY_HCR_ERRORS_H_
