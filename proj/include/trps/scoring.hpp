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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "trps/errors.hpp"
#include "trps/prediction.hpp"
#include "trps/rank_structure.hpp"
#include "trps/weights.hpp"

namespace trps {

/// Rank probability score of one forecast over R ordered outcomes:
/// mean over the first R - 1 cumulative probabilities of the squared
/// difference to the observed step function. `observed` is 0-based.
inline double rps_single(std::span<const double> forecast, std::size_t observed) {
  const std::size_t R = forecast.size();
  if (R < 2) throw std::invalid_argument("rps needs at least two outcomes");
  if (observed >= R) throw std::invalid_argument("observed outcome out of range");
  double cum = 0.0;
  double sum = 0.0;
  for (std::size_t r = 0; r + 1 < R; ++r) {
    cum += forecast[r];
    const double o = r >= observed ? 1.0 : 0.0;
    sum += (o - cum) * (o - cum);
  }
  return sum / double(R - 1);
}

namespace detail {

inline void require_same_structure(const RankStructure& a, const RankStructure& b) {
  if (!a.same_shape(b)) {
    throw AlignmentError("prediction and outcome have different rank structures");
  }
}

/// sum_t sum_{r<R} w_r (O_rt - X_rt)^2 over cumulative matrices, with the
/// prediction columns looked up through `perm` (outcome team -> prediction column).
template <typename WeightFn>
double weighted_squared_distance(const CumulativeMatrix& obs, const CumulativeMatrix& pred,
                                 const std::vector<std::size_t>& perm, WeightFn weight) {
  const std::size_t R = obs.rows();
  const std::size_t T = obs.cols();
  double total = 0.0;
  for (std::size_t t = 0; t < T; ++t) {
    const std::size_t c = perm[t];
    double team = 0.0;
    for (std::size_t r = 0; r + 1 < R; ++r) {
      const double d = obs(r, t) - pred(r, c);
      team += weight(r) * d * d;
    }
    total += team;
  }
  return total;
}

}  // namespace detail

/// Tournament rank probability score: mean over teams of the per-team RPS
/// computed on the tournament's rank categories. 0 for a certain and correct
/// prediction, at most 1. Teams are matched by label.
inline double trps(const Outcome& outcome, const PredictionMatrix& prediction) {
  detail::require_same_structure(prediction.structure(), outcome.structure());
  const auto perm = align_labels(prediction.labels(), outcome.labels());
  const auto obs = outcome_cumulative(outcome);
  const auto pred = cumulative(prediction);
  const double R = double(obs.rows());
  const double T = double(obs.cols());
  return detail::weighted_squared_distance(obs, pred, perm, [](std::size_t) { return 1.0; }) /
         (T * (R - 1.0));
}

/// Weighted TRPS. Weights sum to R - 1, so unit weights give trps().
inline double wtrps(const Outcome& outcome, const PredictionMatrix& prediction,
                    const RankWeights& weights) {
  detail::require_same_structure(prediction.structure(), outcome.structure());
  const std::size_t R = outcome.structure().categories();
  if (weights.size() != R - 1) {
    throw std::invalid_argument("expected " + std::to_string(R - 1) + " rank weights, got " +
                                std::to_string(weights.size()));
  }
  const auto perm = align_labels(prediction.labels(), outcome.labels());
  const auto obs = outcome_cumulative(outcome);
  const auto pred = cumulative(prediction);
  const double T = double(obs.cols());
  return detail::weighted_squared_distance(obs, pred, perm,
                                           [&](std::size_t r) { return weights[r]; }) /
         (T * double(R - 1));
}

/// TRPS of the flat prediction. Identical for every outcome, so the canonical
/// one (teams finishing in label order) is used.
inline double flat_trps(const RankStructure& structure) {
  std::vector<std::size_t> cats(structure.teams());
  for (std::size_t p = 0; p < cats.size(); ++p) cats[p] = structure.category_of_position(p);
  return trps(Outcome(structure, std::move(cats)), flat_prediction(structure));
}

inline constexpr double kDefaultLogLossFloor = 1e-10;

struct LogLossResult {
  double value = 0.0;
  /// Observed-category probabilities that fell below the floor.
  std::size_t clamped = 0;
};

/// Category-weighted log loss (natural log) of the probability each team was
/// given for the category it actually reached. Probabilities below `floor`
/// are raised to `floor`.
inline LogLossResult log_loss(const Outcome& outcome, const PredictionMatrix& prediction,
                              const CategoryLogLossWeights& weights,
                              double floor = kDefaultLogLossFloor) {
  detail::require_same_structure(prediction.structure(), outcome.structure());
  const std::size_t R = outcome.structure().categories();
  if (weights.size() != R) {
    throw std::invalid_argument("expected " + std::to_string(R) + " log-loss weights, got " +
                                std::to_string(weights.size()));
  }
  if (!(floor > 0.0) || floor > 1.0) throw std::invalid_argument("log-loss floor must lie in (0, 1]");
  const auto perm = align_labels(prediction.labels(), outcome.labels());
  LogLossResult result;
  double total = 0.0;
  for (std::size_t t = 0; t < outcome.teams(); ++t) {
    const std::size_t r = outcome.category(t);
    double p = prediction(r, perm[t]);
    if (p < floor) {
      p = floor;
      ++result.clamped;
    }
    total += weights[r] * std::log(p);
  }
  result.value = -total / double(outcome.teams());
  return result;
}

}  // namespace trps
