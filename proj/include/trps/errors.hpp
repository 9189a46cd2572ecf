// Copyright 2026 The trps Authors
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

#pragma once

#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace trps {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One violated constraint of a prediction matrix.
struct Violation {
  enum class Kind { dimension_mismatch, column_sum, row_sum, out_of_range, not_a_number };

  Kind kind;
  std::size_t row = 0;  // 0-based; unused for column_sum
  std::size_t col = 0;  // 0-based; unused for row_sum
  double observed = 0.0;
  double expected = 0.0;

  std::string describe() const {
    std::ostringstream os;
    os.precision(12);
    switch (kind) {
      case Kind::dimension_mismatch:
        os << "dimension mismatch: expected " << expected << " got " << observed;
        break;
      case Kind::column_sum:
        os << "column " << col + 1 << " sums to " << observed << ", expected " << expected;
        break;
      case Kind::row_sum:
        os << "row " << row + 1 << " sums to " << observed << ", expected " << expected;
        break;
      case Kind::out_of_range:
        os << "entry (" << row + 1 << "," << col + 1 << ") = " << observed << " outside [0,1]";
        break;
      case Kind::not_a_number:
        os << "entry (" << row + 1 << "," << col + 1 << ") is NaN";
        break;
    }
    return os.str();
  }
};

inline const char* to_string(Violation::Kind kind) {
  switch (kind) {
    case Violation::Kind::dimension_mismatch: return "dimension_mismatch";
    case Violation::Kind::column_sum: return "column_sum";
    case Violation::Kind::row_sum: return "row_sum";
    case Violation::Kind::out_of_range: return "out_of_range";
    case Violation::Kind::not_a_number: return "not_a_number";
  }
  return "unknown";
}

/// Raised when a prediction matrix breaks one or more invariants. Carries
/// every violation found, not just the first.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<Violation> violations)
      : Error(summarize(violations)), violations_(std::move(violations)) {}

  const std::vector<Violation>& violations() const noexcept { return violations_; }

  bool has(Violation::Kind kind) const {
    for (const auto& v : violations_) {
      if (v.kind == kind) return true;
    }
    return false;
  }

 private:
  static std::string summarize(const std::vector<Violation>& vs) {
    std::string msg = "invalid prediction matrix (" + std::to_string(vs.size()) + " violation";
    msg += vs.size() == 1 ? ")" : "s)";
    for (const auto& v : vs) msg += "\n  " + v.describe();
    return msg;
  }

  std::vector<Violation> violations_;
};

/// Prediction and outcome (or two predictions) do not describe the same
/// tournament: rank structures differ or team label sets differ.
class AlignmentError : public Error {
 public:
  explicit AlignmentError(const std::string& what) : Error(what) {}

  AlignmentError(std::vector<std::string> only_left, std::vector<std::string> only_right)
      : Error(summarize(only_left, only_right)),
        only_left_(std::move(only_left)),
        only_right_(std::move(only_right)) {}

  /// Labels present only in the first (prediction) argument.
  const std::vector<std::string>& only_left() const noexcept { return only_left_; }
  /// Labels present only in the second (outcome) argument.
  const std::vector<std::string>& only_right() const noexcept { return only_right_; }

 private:
  static std::string summarize(const std::vector<std::string>& a,
                               const std::vector<std::string>& b) {
    std::string msg = "team labels differ;";
    msg += " only in prediction: {";
    for (std::size_t i = 0; i < a.size(); ++i) msg += (i ? ", " : "") + a[i];
    msg += "}; only in outcome: {";
    for (std::size_t i = 0; i < b.size(); ++i) msg += (i ? ", " : "") + b[i];
    msg += "}";
    return msg;
  }

  std::vector<std::string> only_left_;
  std::vector<std::string> only_right_;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// An outcome that does not fit its rank structure (unknown label, wrong
/// category counts, duplicate or missing teams).
class InvalidOutcome : public Error {
 public:
  using Error::Error;
};

class SolverError : public Error {
 public:
  using Error::Error;
};

}  // namespace trps
