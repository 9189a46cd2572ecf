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
#include <cstddef>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "trps/matrix.hpp"
#include "trps/prediction.hpp"
#include "trps/sim/bradley_terry.hpp"
#include "trps/sim/rng.hpp"
#include "trps/sim/tournament.hpp"

namespace trps::sim {

/// Empirical rank frequencies over `samples` tournaments played with the true
/// strengths. For knockouts a fixed `bracket` may be given; otherwise every
/// sample draws its own random bracket.
inline PredictionMatrix true_strength_prediction(
    const TeamStrengths& strengths, const TournamentFormat& format, std::size_t samples, Rng& rng,
    std::optional<std::span<const std::size_t>> bracket = std::nullopt) {
  if (samples < 1) throw std::invalid_argument("need at least one inner sample");
  if (format.teams() != strengths.size()) throw std::invalid_argument("team count mismatch");
  if (bracket && (format.kind() != FormatKind::knockout || bracket->size() != strengths.size())) {
    throw std::invalid_argument("bracket only applies to a knockout of the same size");
  }
  const RankStructure structure = format.rank_structure();
  const std::size_t T = strengths.size();
  const WinTable table(strengths);

  std::vector<std::size_t> counts(structure.categories() * T, 0);
  std::vector<std::size_t> category(T);
  std::vector<std::size_t> alive;
  std::vector<std::size_t> own_bracket;
  detail::RoundRobinScratch scratch;
  for (std::size_t s = 0; s < samples; ++s) {
    if (format.kind() == FormatKind::knockout) {
      std::span<const std::size_t> b;
      if (bracket) {
        b = *bracket;
      } else {
        own_bracket = random_bracket(T, rng);
        b = own_bracket;
      }
      detail::knockout_categories(table, b, rng, category, alive);
    } else {
      detail::round_robin_categories(table, format.round_robin_legs(), rng, category, scratch);
    }
    for (std::size_t t = 0; t < T; ++t) ++counts[category[t] * T + t];
  }

  Matrix m(structure.categories(), T);
  const double inv = 1.0 / double(samples);
  for (std::size_t r = 0; r < structure.categories(); ++r) {
    for (std::size_t t = 0; t < T; ++t) m(r, t) = double(counts[r * T + t]) * inv;
  }
  return validate_prediction(std::move(m), structure);
}

/// Certain prediction from the strength order: the k-th strongest team gets
/// the category holding overall position k. Equal strengths are ordered by
/// team index.
inline PredictionMatrix confident_prediction(const TeamStrengths& strengths,
                                             const RankStructure& structure) {
  const std::size_t T = strengths.size();
  if (structure.teams() != T) throw std::invalid_argument("team count mismatch");
  std::vector<std::size_t> order(T);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return strengths[a] > strengths[b]; });
  Matrix m(structure.categories(), T);
  for (std::size_t k = 0; k < T; ++k) m(structure.category_of_position(k), order[k]) = 1.0;
  return validate_prediction(std::move(m), structure);
}

}  // namespace trps::sim
