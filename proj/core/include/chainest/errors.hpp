// Copyright 2026 The chainest Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CHAINEST_ERRORS_HPP
#define CHAINEST_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace chainest {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid arguments, designs, or configuration (CLI exit code 1).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Malformed or unusable input data (CLI exit code 2).
class DataError : public Error {
 public:
  using Error::Error;
};

/// Numeric guard tripped: combinatorial explosion, rejection ceiling,
/// degenerate denominators (CLI exit code 3).
class GuardError : public Error {
 public:
  using Error::Error;
};

}  // namespace chainest

#endif  // CHAINEST_ERRORS_HPP
