// Copyright 2026 The fairbonus Authors.
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

#ifndef FAIRBONUS_ERROR_HPP_
#define FAIRBONUS_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace fairbonus {

// Process exit codes shared by every CLI command.
enum class ExitCode : int {
  kOk = 0,
  kConfig = 2,
  kData = 3,
  kInfeasible = 4,
};

class Error : public std::runtime_error {
 public:
  Error(ExitCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ExitCode code() const noexcept { return code_; }

 private:
  ExitCode code_;
};

// Bad configuration: unknown attribute, invalid parameter, malformed config.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what)
      : Error(ExitCode::kConfig, what) {}
};

// Bad input data: non-numeric cell, out-of-range value, non-finite score.
class DataError : public Error {
 public:
  explicit DataError(const std::string& what) : Error(ExitCode::kData, what) {}
};

// A constraint set or search space that cannot be satisfied.
class InfeasibleError : public Error {
 public:
  explicit InfeasibleError(const std::string& what)
      : Error(ExitCode::kInfeasible, what) {}
};

}  // namespace fairbonus

#endif  // FAIRBONUS_ERROR_HPP_
