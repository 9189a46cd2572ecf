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
#include <random>
#include <string>
#include <vector>

#include "trps/trps.hpp"

namespace trps::testing {

inline std::string data_path(const std::string& name) { return std::string(TRPS_DATA_DIR) + "/" + name; }
inline std::string fixture_path(const std::string& name) {
  return std::string(TRPS_TEST_FIXTURES) + "/" + name;
}

/// Outcome with teams assigned to categories by a random permutation.
inline Outcome random_outcome(const RankStructure& s, std::mt19937_64& gen) {
  std::vector<std::size_t> pos(s.teams());
  std::iota(pos.begin(), pos.end(), std::size_t{0});
  std::shuffle(pos.begin(), pos.end(), gen);
  std::vector<std::size_t> cats(s.teams());
  for (std::size_t t = 0; t < cats.size(); ++t) cats[t] = s.category_of_position(pos[t]);
  return Outcome(s, std::move(cats));
}

/// Random valid prediction: convex combination of `parts` outcome indicator
/// matrices, so row and column sums hold by construction.
inline PredictionMatrix random_prediction(const RankStructure& s, std::mt19937_64& gen,
                                          std::size_t parts = 4) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::vector<double> lambda(parts);
  for (double& l : lambda) l = u(gen);
  const double sum = std::accumulate(lambda.begin(), lambda.end(), 0.0);
  Matrix m(s.categories(), s.teams());
  for (std::size_t k = 0; k < parts; ++k) {
    const auto o = random_outcome(s, gen);
    for (std::size_t t = 0; t < s.teams(); ++t) m(o.category(t), t) += lambda[k] / sum;
  }
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t t = 0; t < m.cols(); ++t) m(r, t) = std::min(m(r, t), 1.0);
  }
  return validate_prediction(std::move(m), s);
}

/// Random structure with `teams` teams and at least two categories.
inline RankStructure random_structure(std::size_t teams, std::mt19937_64& gen) {
  std::vector<std::size_t> caps;
  std::size_t left = teams;
  while (left > 0) {
    std::uniform_int_distribution<std::size_t> d(1, left);
    std::size_t c = d(gen);
    if (caps.empty() && c == teams) c = teams - 1;
    caps.push_back(c);
    left -= c;
  }
  return RankStructure::from_capacities(caps);
}

}  // namespace trps::testing
