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
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "trps/rank_structure.hpp"
#include "trps/sim/bradley_terry.hpp"
#include "trps/sim/rng.hpp"

namespace trps::sim {

enum class FormatKind { knockout, single_round_robin, double_round_robin };

inline const char* to_string(FormatKind kind) {
  switch (kind) {
    case FormatKind::knockout: return "knockout";
    case FormatKind::single_round_robin: return "single_round_robin";
    case FormatKind::double_round_robin: return "double_round_robin";
  }
  return "unknown";
}

inline FormatKind parse_format_kind(const std::string& s) {
  if (s == "knockout" || s == "ko") return FormatKind::knockout;
  if (s == "single_round_robin" || s == "single-round-robin" || s == "srr") {
    return FormatKind::single_round_robin;
  }
  if (s == "double_round_robin" || s == "double-round-robin" || s == "drr") {
    return FormatKind::double_round_robin;
  }
  throw std::invalid_argument("unknown tournament format '" + s + "'");
}

inline bool is_power_of_two(std::size_t n) { return n >= 2 && (n & (n - 1)) == 0; }

class TournamentFormat {
 public:
  TournamentFormat(FormatKind kind, std::size_t teams) : kind_(kind), teams_(teams) {
    if (teams_ < 2) throw std::invalid_argument("a tournament needs at least two teams");
    if (kind_ == FormatKind::knockout && !is_power_of_two(teams_)) {
      throw std::invalid_argument("knockout needs a power-of-two team count, got " +
                                  std::to_string(teams_));
    }
  }

  FormatKind kind() const noexcept { return kind_; }
  std::size_t teams() const noexcept { return teams_; }

  /// Knockout rounds N with T = 2^N.
  std::size_t knockout_rounds() const {
    std::size_t n = 0;
    while ((std::size_t{1} << n) < teams_) ++n;
    return n;
  }

  /// Times each pair meets in a round robin.
  std::size_t round_robin_legs() const { return kind_ == FormatKind::double_round_robin ? 2 : 1; }

  /// Knockouts observe (winner, runner-up, semifinal losers, ...); round
  /// robins give a full ranking.
  RankStructure rank_structure() const {
    return kind_ == FormatKind::knockout ? RankStructure::knockout(knockout_rounds())
                                         : RankStructure::full_ranking(teams_);
  }

 private:
  FormatKind kind_;
  std::size_t teams_;
};

/// Pairwise win thresholds for fast Bernoulli draws: team a beats team b when
/// rng() < threshold(a, b).
class WinTable {
 public:
  explicit WinTable(const TeamStrengths& strengths) : n_(strengths.size()), thr_(n_ * n_, 0) {
    for (std::size_t a = 0; a < n_; ++a) {
      for (std::size_t b = 0; b < n_; ++b) {
        if (a != b) thr_[a * n_ + b] = bernoulli_threshold(bt_win_prob(strengths[a], strengths[b]));
      }
    }
  }

  std::size_t teams() const noexcept { return n_; }
  bool beats(std::size_t a, std::size_t b, Rng& rng) const { return rng() < thr_[a * n_ + b]; }

 private:
  std::size_t n_;
  std::vector<std::uint64_t> thr_;
};

/// Uniformly random bracket: slot i holds team bracket[i]; round one pairs
/// slots (0,1), (2,3), ...
inline std::vector<std::size_t> random_bracket(std::size_t teams, Rng& rng) {
  std::vector<std::size_t> bracket(teams);
  std::iota(bracket.begin(), bracket.end(), std::size_t{0});
  std::shuffle(bracket.begin(), bracket.end(), rng);
  return bracket;
}

namespace detail {

/// Writes each team's category into `category`. Loser of round n (1-based)
/// of N lands in category N - n + 1; the champion in category 0.
inline void knockout_categories(const WinTable& table, std::span<const std::size_t> bracket,
                                Rng& rng, std::span<std::size_t> category,
                                std::vector<std::size_t>& alive) {
  alive.assign(bracket.begin(), bracket.end());
  std::size_t remaining = alive.size();
  std::size_t loser_category = 0;
  for (std::size_t n = remaining; n > 1; n >>= 1) ++loser_category;
  while (remaining > 1) {
    for (std::size_t i = 0; i < remaining / 2; ++i) {
      const std::size_t a = alive[2 * i];
      const std::size_t b = alive[2 * i + 1];
      const bool a_wins = table.beats(a, b, rng);
      category[a_wins ? b : a] = loser_category;
      alive[i] = a_wins ? a : b;
    }
    remaining /= 2;
    --loser_category;
  }
  category[alive[0]] = 0;
}

struct RoundRobinScratch {
  std::vector<std::uint32_t> points;
  std::vector<std::uint64_t> tiebreak;
  std::vector<std::size_t> order;
};

/// One point per win, no draws. Equal points are ordered by a uniformly
/// random key, giving a uniformly random order within each tied group.
inline void round_robin_categories(const WinTable& table, std::size_t legs, Rng& rng,
                                   std::span<std::size_t> category, RoundRobinScratch& s) {
  const std::size_t T = table.teams();
  s.points.assign(T, 0);
  for (std::size_t leg = 0; leg < legs; ++leg) {
    for (std::size_t a = 0; a < T; ++a) {
      for (std::size_t b = a + 1; b < T; ++b) {
        ++s.points[table.beats(a, b, rng) ? a : b];
      }
    }
  }
  s.tiebreak.resize(T);
  for (auto& k : s.tiebreak) k = rng();
  s.order.resize(T);
  std::iota(s.order.begin(), s.order.end(), std::size_t{0});
  std::sort(s.order.begin(), s.order.end(), [&](std::size_t x, std::size_t y) {
    if (s.points[x] != s.points[y]) return s.points[x] > s.points[y];
    if (s.tiebreak[x] != s.tiebreak[y]) return s.tiebreak[x] < s.tiebreak[y];
    return x < y;
  });
  for (std::size_t p = 0; p < T; ++p) category[s.order[p]] = p;
}

}  // namespace detail

/// Plays a knockout over a fixed bracket.
inline Outcome play_knockout(const TeamStrengths& strengths, std::span<const std::size_t> bracket,
                             Rng& rng) {
  const TournamentFormat format(FormatKind::knockout, strengths.size());
  if (bracket.size() != strengths.size()) throw std::invalid_argument("bracket size mismatch");
  std::vector<std::size_t> category(strengths.size());
  std::vector<std::size_t> alive;
  detail::knockout_categories(WinTable(strengths), bracket, rng, category, alive);
  return Outcome(format.rank_structure(), std::move(category));
}

/// Plays a knockout over a freshly drawn random bracket.
inline Outcome play_knockout(const TeamStrengths& strengths, Rng& rng) {
  if (!is_power_of_two(strengths.size())) {
    throw std::invalid_argument("knockout needs a power-of-two team count");
  }
  const auto bracket = random_bracket(strengths.size(), rng);
  return play_knockout(strengths, bracket, rng);
}

/// Full-ranking outcome of a single (legs = 1) or double (legs = 2) round robin.
inline Outcome play_round_robin(const TeamStrengths& strengths, std::size_t legs, Rng& rng) {
  if (legs != 1 && legs != 2) throw std::invalid_argument("round robin legs must be 1 or 2");
  if (strengths.size() < 2) throw std::invalid_argument("a tournament needs at least two teams");
  std::vector<std::size_t> category(strengths.size());
  detail::RoundRobinScratch scratch;
  detail::round_robin_categories(WinTable(strengths), legs, rng, category, scratch);
  return Outcome(RankStructure::full_ranking(strengths.size()), std::move(category));
}

inline Outcome play(const TournamentFormat& format, const TeamStrengths& strengths, Rng& rng) {
  if (format.teams() != strengths.size()) throw std::invalid_argument("team count mismatch");
  if (format.kind() == FormatKind::knockout) return play_knockout(strengths, rng);
  return play_round_robin(strengths, format.round_robin_legs(), rng);
}

}  // namespace trps::sim
