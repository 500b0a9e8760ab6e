// Copyright 2026 The efnet Authors
//
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

#ifndef EFNET_ERROR_HPP_
#define EFNET_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace efnet {

// Failure categories. Each one maps onto a distinct process exit code in the
// command-line tool.
enum class ErrorKind {
  kUsage,    // bad arguments or configuration
  kData,     // unreadable, malformed or schema-violating input
  kNumeric,  // training diverged or produced non-finite values
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class UsageError : public Error {
 public:
  explicit UsageError(const std::string& message)
      : Error(ErrorKind::kUsage, message) {}
};

class DataError : public Error {
 public:
  explicit DataError(const std::string& message)
      : Error(ErrorKind::kData, message) {}
};

class NumericError : public Error {
 public:
  explicit NumericError(const std::string& message)
      : Error(ErrorKind::kNumeric, message) {}
};

// Stable machine-readable code, e.g. "E_DATA".
std::string_view error_code(ErrorKind kind) noexcept;

// Process exit code: 2 usage, 3 data, 4 numeric.
int exit_code(ErrorKind kind) noexcept;

}  // namespace efnet

#endif  // EFNET_ERROR_HPP_
