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
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <vector>

#include "trps/prediction.hpp"
#include "trps/scoring.hpp"
#include "trps/sim/bradley_terry.hpp"
#include "trps/sim/predictions.hpp"
#include "trps/sim/rng.hpp"
#include "trps/sim/tournament.hpp"

namespace trps::sim {

inline constexpr std::size_t kDeskReplicates = 1000;
inline constexpr std::size_t kDeskInnerSamples = 2000;
inline constexpr std::size_t kFullReplicates = 10000;
inline constexpr std::size_t kFullInnerSamples = 10000;

struct SimulationConfig {
  TournamentFormat format{FormatKind::knockout, 8};
  double sigma = 1.0;
  std::size_t replicates = kDeskReplicates;
  std::size_t inner_samples = kDeskInnerSamples;
  std::uint64_t seed = 0;
  /// 0 picks std::thread::hardware_concurrency(). Results do not depend on it.
  unsigned workers = 0;

  void validate() const {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw std::invalid_argument("sigma must be positive");
    if (replicates < 1) throw std::invalid_argument("replicates must be >= 1");
    if (inner_samples < 1) throw std::invalid_argument("inner samples must be >= 1");
  }
};

/// Scores of the three generic predictions against one simulated tournament.
struct ReplicateScores {
  double true_strength = 0.0;
  double flat = 0.0;
  double confident = 0.0;
};

struct ExperimentRow {
  FormatKind kind = FormatKind::knockout;
  std::size_t teams = 0;
  double sigma = 0.0;
  std::size_t replicates = 0;
  std::size_t inner_samples = 0;

  double tsp_mean = 0.0;
  double tsp_sd = 0.0;
  double flat = 0.0;
  double cp_mean = 0.0;
  double cp_sd = 0.0;
  double p_tsp_lt_fp = 0.0;
  double p_tsp_lt_cp = 0.0;
};

/// One replicate, fully determined by (config.seed, index): draw strengths,
/// draw a knockout bracket if needed, build the true-strength prediction from
/// `inner_samples` tournaments, then play one fresh tournament on the same
/// bracket and score all three predictions against it.
inline ReplicateScores run_replicate(const SimulationConfig& config, std::size_t index) {
  Rng rng = Rng::substream(config.seed, index);
  const auto& format = config.format;
  const TeamStrengths strengths = sample_strengths(format.teams(), config.sigma, rng);
  const RankStructure structure = format.rank_structure();

  std::vector<std::size_t> bracket;
  std::optional<std::span<const std::size_t>> bracket_view;
  if (format.kind() == FormatKind::knockout) {
    bracket = random_bracket(format.teams(), rng);
    bracket_view = std::span<const std::size_t>(bracket);
  }
  const PredictionMatrix tsp =
      true_strength_prediction(strengths, format, config.inner_samples, rng, bracket_view);
  const Outcome actual = format.kind() == FormatKind::knockout
                             ? play_knockout(strengths, bracket, rng)
                             : play_round_robin(strengths, format.round_robin_legs(), rng);

  ReplicateScores s;
  s.true_strength = trps(actual, tsp);
  s.flat = trps(actual, flat_prediction(structure));
  s.confident = trps(actual, confident_prediction(strengths, structure));
  return s;
}

/// Runs replicates [0, n) on `workers` threads. Output is indexed by replicate.
inline std::vector<ReplicateScores> run_replicates(const SimulationConfig& config) {
  config.validate();
  std::vector<ReplicateScores> out(config.replicates);
  unsigned workers = config.workers ? config.workers : std::thread::hardware_concurrency();
  workers = std::max(1u, std::min<unsigned>(workers, unsigned(config.replicates)));

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    try {
      for (std::size_t i = next++; i < config.replicates; i = next++) out[i] = run_replicate(config, i);
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next = config.replicates;
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

/// Aggregates replicate scores in index order; sample SDs use n - 1.
inline ExperimentRow summarize(const SimulationConfig& config,
                               const std::vector<ReplicateScores>& scores) {
  ExperimentRow row;
  row.kind = config.format.kind();
  row.teams = config.format.teams();
  row.sigma = config.sigma;
  row.replicates = scores.size();
  row.inner_samples = config.inner_samples;
  row.flat = flat_trps(config.format.rank_structure());

  const double n = double(scores.size());
  double tsp_sum = 0.0, cp_sum = 0.0;
  std::size_t lt_fp = 0, lt_cp = 0;
  for (const auto& s : scores) {
    tsp_sum += s.true_strength;
    cp_sum += s.confident;
    if (s.true_strength < s.flat) ++lt_fp;
    if (s.true_strength < s.confident) ++lt_cp;
  }
  row.tsp_mean = tsp_sum / n;
  row.cp_mean = cp_sum / n;
  double tsp_ss = 0.0, cp_ss = 0.0;
  for (const auto& s : scores) {
    tsp_ss += (s.true_strength - row.tsp_mean) * (s.true_strength - row.tsp_mean);
    cp_ss += (s.confident - row.cp_mean) * (s.confident - row.cp_mean);
  }
  row.tsp_sd = scores.size() > 1 ? std::sqrt(tsp_ss / (n - 1.0)) : 0.0;
  row.cp_sd = scores.size() > 1 ? std::sqrt(cp_ss / (n - 1.0)) : 0.0;
  row.p_tsp_lt_fp = double(lt_fp) / n;
  row.p_tsp_lt_cp = double(lt_cp) / n;
  return row;
}

inline ExperimentRow run_experiment(const SimulationConfig& config) {
  return summarize(config, run_replicates(config));
}

/// The 27 (format, teams, sigma) combinations of the reference simulation grid.
struct GridCell {
  FormatKind kind;
  std::size_t teams;
  double sigma;
};

inline std::vector<GridCell> simulation_grid() {
  std::vector<GridCell> cells;
  for (FormatKind kind : {FormatKind::knockout, FormatKind::single_round_robin,
                          FormatKind::double_round_robin}) {
    for (double sigma : {1.0, 2.0, 3.0}) {
      for (std::size_t teams : {8, 16, 32}) cells.push_back({kind, teams, sigma});
    }
  }
  return cells;
}

enum class CurveKind { full_ranking, top_two_then_rest, knockout_doubling };

inline RankStructure curve_structure(CurveKind kind, std::size_t teams) {
  switch (kind) {
    case CurveKind::full_ranking:
      return RankStructure::full_ranking(teams);
    case CurveKind::top_two_then_rest:
      return RankStructure::top_two(teams);
    case CurveKind::knockout_doubling:
      if (!is_power_of_two(teams)) {
        throw std::invalid_argument("knockout curve needs power-of-two team counts");
      }
      return TournamentFormat(FormatKind::knockout, teams).rank_structure();
  }
  throw std::invalid_argument("unknown curve kind");
}

struct FlatCurvePoint {
  std::size_t teams;
  double trps;
};

/// Exact flat-prediction TRPS for each team count.
inline std::vector<FlatCurvePoint> flat_curve(CurveKind kind, const std::vector<std::size_t>& team_counts) {
  std::vector<FlatCurvePoint> out;
  out.reserve(team_counts.size());
  for (std::size_t t : team_counts) out.push_back({t, flat_trps(curve_structure(kind, t))});
  return out;
}

/// Every team count up to `max_teams` the curve kind admits.
inline std::vector<std::size_t> curve_team_counts(CurveKind kind, std::size_t max_teams) {
  std::vector<std::size_t> out;
  switch (kind) {
    case CurveKind::full_ranking:
      for (std::size_t t = 2; t <= max_teams; ++t) out.push_back(t);
      break;
    case CurveKind::top_two_then_rest:
      for (std::size_t t = 3; t <= max_teams; ++t) out.push_back(t);
      break;
    case CurveKind::knockout_doubling:
      for (std::size_t t = 2; t <= max_teams; t *= 2) out.push_back(t);
      break;
  }
  return out;
}

}  // namespace trps::sim
