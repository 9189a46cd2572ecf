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

#include <cmath>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "trps/rank_structure.hpp"

namespace trps {

/// Per-category weights for the weighted TRPS: one weight per category except
/// the last, non-negative, summing to R - 1.
class RankWeights {
 public:
  static constexpr double kSumTolerance = 1e-9;

  explicit RankWeights(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) throw std::invalid_argument("rank weights need at least one value");
    double sum = 0.0;
    for (double w : values_) {
      if (!(w >= 0.0) || !std::isfinite(w)) {
        throw std::invalid_argument("rank weights must be finite and non-negative");
      }
      sum += w;
    }
    const double expected = double(values_.size());
    if (std::abs(sum - expected) > kSumTolerance) {
      throw std::invalid_argument("rank weights sum to " + std::to_string(sum) + ", expected " +
                                  std::to_string(expected));
    }
  }

  /// All ones: reduces the weighted score to the plain one.
  static RankWeights uniform(std::size_t categories) {
    return RankWeights(std::vector<double>(categories - 1, 1.0));
  }

  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t r) const { return values_[r]; }
  const std::vector<double>& values() const noexcept { return values_; }

 private:
  std::vector<double> values_;
};

/// Rescales relative weights so they sum to their count (R - 1).
inline RankWeights normalize_relative_weights(const std::vector<double>& relative) {
  double sum = 0.0;
  for (double w : relative) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw std::invalid_argument("relative weights must be finite and non-negative");
    }
    sum += w;
  }
  if (!(sum > 0.0)) throw std::invalid_argument("relative weights are all zero");
  const double scale = double(relative.size()) / sum;
  std::vector<double> out(relative.size());
  for (std::size_t i = 0; i < relative.size(); ++i) out[i] = relative[i] * scale;
  return RankWeights(std::move(out));
}

/// NCAA-style doubling: the worst category weighs 1 and each better one
/// doubles. Returns the R - 1 weights of all categories but the last.
inline std::vector<double> doubling_relative_weights(const RankStructure& structure) {
  const std::size_t R = structure.categories();
  std::vector<double> out(R - 1);
  for (std::size_t r = 0; r + 1 < R; ++r) out[r] = std::ldexp(1.0, int(R - 1 - r));
  return out;
}

/// Equal weight per category instead of per team: 1 / capacity(r) for all
/// categories but the last.
inline std::vector<double> inverse_capacity_relative_weights(const RankStructure& structure) {
  const std::size_t R = structure.categories();
  std::vector<double> out(R - 1);
  for (std::size_t r = 0; r + 1 < R; ++r) out[r] = 1.0 / double(structure.capacity(r));
  return out;
}

/// Weights for the category-weighted log loss, one per category including
/// the last. Non-negative; no normalization.
class CategoryLogLossWeights {
 public:
  explicit CategoryLogLossWeights(std::vector<double> values) : values_(std::move(values)) {
    for (double w : values_) {
      if (!(w >= 0.0) || !std::isfinite(w)) {
        throw std::invalid_argument("log-loss weights must be finite and non-negative");
      }
    }
  }

  static CategoryLogLossWeights uniform(std::size_t categories) {
    return CategoryLogLossWeights(std::vector<double>(categories, 1.0));
  }

  /// Weights announced for the 2018 World Cup prediction competition.
  static CategoryLogLossWeights world_cup_2018() {
    return CategoryLogLossWeights({1.0, 1.0, 0.5, 0.5, 0.25, 0.125, 0.0625});
  }

  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t r) const { return values_[r]; }
  const std::vector<double>& values() const noexcept { return values_; }

 private:
  std::vector<double> values_;
};

}  // namespace trps
