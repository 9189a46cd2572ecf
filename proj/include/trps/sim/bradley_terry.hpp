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
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include "trps/sim/rng.hpp"

namespace trps::sim {

/// Positive Bradley-Terry team strengths, indexed by team.
class TeamStrengths {
 public:
  explicit TeamStrengths(std::vector<double> beta) : beta_(std::move(beta)) {
    if (beta_.empty()) throw std::invalid_argument("no team strengths");
    for (double b : beta_) {
      if (!(b > 0.0) || !std::isfinite(b)) {
        throw std::invalid_argument("team strengths must be finite and strictly positive");
      }
    }
  }

  std::size_t size() const noexcept { return beta_.size(); }
  double operator[](std::size_t t) const { return beta_[t]; }
  const std::vector<double>& values() const noexcept { return beta_; }

 private:
  std::vector<double> beta_;
};

/// Probability that a team of strength `a` beats one of strength `b`.
inline double bt_win_prob(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("strengths must be strictly positive");
  return a / (a + b);
}

/// T independent log-normal strengths exp(sigma * Z) with median 1.
inline TeamStrengths sample_strengths(std::size_t teams, double sigma, Rng& rng) {
  if (teams < 2) throw std::invalid_argument("need at least two teams");
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw std::invalid_argument("sigma must be >= 0");
  std::normal_distribution<double> z(0.0, 1.0);
  std::vector<double> beta(teams);
  for (double& b : beta) b = std::exp(sigma * z(rng));
  return TeamStrengths(std::move(beta));
}

}  // namespace trps::sim
