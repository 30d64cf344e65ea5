// Copyright 2026 The sfsync Authors
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

#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sfsync {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Matrix shapes do not line up.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Scenario / edge-list / bundle text could not be parsed. line() is 1-based,
// 0 when the problem is not tied to a line.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

// A structural assumption on agents, exosystem or graph is violated.
class AssumptionError : public Error {
 public:
  explicit AssumptionError(std::vector<std::string> diagnostics)
      : Error(join(diagnostics)), diagnostics_(std::move(diagnostics)) {}
  const std::vector<std::string>& diagnostics() const noexcept {
    return diagnostics_;
  }

 private:
  static std::string join(const std::vector<std::string>& d) {
    std::string out;
    for (const auto& s : d) {
      if (!out.empty()) out += "; ";
      out += s;
    }
    return out;
  }
  std::vector<std::string> diagnostics_;
};

// Input lies outside the supported class (p > 1, unstabilizable zero dynamics).
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

// Rosenbrock pencil is rank deficient for every finite lambda.
class DegenerateSystemError : public Error {
 public:
  using Error::Error;
};

// Pole placement / gain synthesis failed.
class DesignError : public Error {
 public:
  using Error::Error;
};

// Simulation produced a non-finite or runaway state.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, double time)
      : Error(what), time_(time) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

}  // namespace sfsync
