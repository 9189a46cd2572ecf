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

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "trps/trps.hpp"

namespace trps::sim {
namespace {

TEST(BradleyTerry, WinProbability) {
  EXPECT_DOUBLE_EQ(bt_win_prob(1, 1), 0.5);
  EXPECT_DOUBLE_EQ(bt_win_prob(3, 1), 0.75);
  for (double x : {0.01, 1.0, 37.5}) EXPECT_NEAR(bt_win_prob(x, 4 * x), 0.2, 1e-15);
  EXPECT_DOUBLE_EQ(bt_win_prob(2.5, 0.7) + bt_win_prob(0.7, 2.5), 1.0);
  EXPECT_THROW(bt_win_prob(0, 1), std::invalid_argument);
  EXPECT_THROW(bt_win_prob(1, -1), std::invalid_argument);
}

TEST(BradleyTerry, StrengthsMustBePositive) {
  EXPECT_THROW(TeamStrengths({1.0, 0.0}), std::invalid_argument);
  EXPECT_THROW(TeamStrengths({1.0, INFINITY}), std::invalid_argument);
}

TEST(SampleStrengths, LogSdMatchesSigma) {
  Rng rng(42);
  const double sigma = 1.7;
  const auto beta = sample_strengths(100000, sigma, rng);
  double sum = 0.0, sq = 0.0;
  for (double b : beta.values()) {
    ASSERT_GT(b, 0.0);
    sum += std::log(b);
    sq += std::log(b) * std::log(b);
  }
  const double n = double(beta.size());
  const double mean = sum / n;
  const double sd = std::sqrt((sq - n * mean * mean) / (n - 1));
  EXPECT_NEAR(sd, sigma, 0.01 * sigma);
  EXPECT_NEAR(mean, 0.0, 0.02);
}

TEST(SampleStrengths, ZeroSigmaGivesUnitStrengths) {
  Rng rng(1);
  const auto strengths = sample_strengths(10, 0.0, rng);
  for (double b : strengths.values()) EXPECT_EQ(b, 1.0);
  EXPECT_THROW(sample_strengths(1, 1.0, rng), std::invalid_argument);
  EXPECT_THROW(sample_strengths(4, -1.0, rng), std::invalid_argument);
}

TEST(Rng, SubstreamsReproducibleAndDistinct) {
  Rng a(5, 3), b(5, 3), c(5, 4), d(6, 3);
  const auto x = a();
  EXPECT_EQ(x, b());
  EXPECT_NE(x, c());
  EXPECT_NE(x, d());
  Rng u(9);
  for (int i = 0; i < 1000; ++i) {
    const double v = u.uniform();
    ASSERT_GE(v, 0.0);
    ASSERT_LT(v, 1.0);
  }
}

TEST(Format, Validation) {
  EXPECT_THROW(TournamentFormat(FormatKind::knockout, 12), std::invalid_argument);
  EXPECT_THROW(TournamentFormat(FormatKind::single_round_robin, 1), std::invalid_argument);
  EXPECT_EQ(TournamentFormat(FormatKind::knockout, 16).knockout_rounds(), 4u);
  EXPECT_EQ(TournamentFormat(FormatKind::knockout, 16).rank_structure().capacities(),
            (std::vector<std::size_t>{1, 1, 2, 4, 8}));
  EXPECT_EQ(TournamentFormat(FormatKind::double_round_robin, 6).rank_structure().categories(), 6u);
  EXPECT_EQ(parse_format_kind("knockout"), FormatKind::knockout);
  EXPECT_EQ(parse_format_kind("srr"), FormatKind::single_round_robin);
  EXPECT_THROW(parse_format_kind("swiss"), std::invalid_argument);
}

TEST(Knockout, CategorySizesEveryReplicate) {
  Rng rng(3);
  const auto beta = sample_strengths(16, 1.0, rng);
  for (int i = 0; i < 200; ++i) {
    const auto o = play_knockout(beta, rng);
    std::vector<std::size_t> count(5, 0);
    for (std::size_t c : o.categories()) ++count[c];
    ASSERT_EQ(count, (std::vector<std::size_t>{1, 1, 2, 4, 8}));
  }
  EXPECT_THROW(play_knockout(TeamStrengths({1, 1, 1}), rng), std::invalid_argument);
}

TEST(Knockout, BracketDeterminesOpponents) {
  // Teams 0 and 1 are near-certain winners; a bracket pairing them in round
  // one sends one of them out first.
  const TeamStrengths beta({1e12, 1e12, 1.0, 1.0});
  Rng rng(8);
  const std::vector<std::size_t> together{0, 1, 2, 3};
  const std::vector<std::size_t> apart{0, 2, 1, 3};
  for (int i = 0; i < 100; ++i) {
    const auto o = play_knockout(beta, together, rng);
    EXPECT_EQ(std::min(o.category(0), o.category(1)), 0u);
    EXPECT_EQ(std::max(o.category(0), o.category(1)), 2u);
    const auto p = play_knockout(beta, apart, rng);
    EXPECT_EQ(p.category(0) + p.category(1), 1u);
  }
}

TEST(Knockout, DominantTeamWins) {
  Rng rng(4);
  const TeamStrengths beta({1e15, 1.0});
  for (int i = 0; i < 1000; ++i) EXPECT_EQ(play_knockout(beta, rng).category(0), 0u);
}

TEST(RoundRobin, PointsAndFullRanking) {
  Rng rng(12);
  const auto beta = sample_strengths(7, 1.0, rng);
  const WinTable table(beta);
  detail::RoundRobinScratch scratch;
  std::vector<std::size_t> cat(7);
  for (std::size_t legs : {1u, 2u}) {
    for (int i = 0; i < 50; ++i) {
      detail::round_robin_categories(table, legs, rng, cat, scratch);
      const auto total = std::accumulate(scratch.points.begin(), scratch.points.end(), std::size_t{0});
      ASSERT_EQ(total, legs * 7 * 6 / 2);
      std::vector<std::size_t> sorted = cat;
      std::sort(sorted.begin(), sorted.end());
      for (std::size_t p = 0; p < 7; ++p) ASSERT_EQ(sorted[p], p);
      for (std::size_t a = 0; a < 7; ++a) {
        for (std::size_t b = 0; b < 7; ++b) {
          if (cat[a] < cat[b]) ASSERT_GE(scratch.points[a], scratch.points[b]);
        }
      }
    }
  }
  EXPECT_THROW(play_round_robin(beta, 3, rng), std::invalid_argument);
}

TEST(RoundRobin, StrongestTeamFirst) {
  Rng rng(21);
  const TeamStrengths beta({1e9, 1, 1, 1, 1, 1});
  int first = 0;
  for (int i = 0; i < 10000; ++i) first += play_round_robin(beta, 1, rng).category(0) == 0;
  EXPECT_GE(first / 10000.0, 0.999);
}

TEST(RoundRobin, EqualTeamsSplitEvenly) {
  Rng rng(22);
  const TeamStrengths beta({2.0, 2.0});
  int first = 0;
  for (int i = 0; i < 10000; ++i) first += play_round_robin(beta, 1, rng).category(0) == 0;
  EXPECT_NEAR(first / 10000.0, 0.5, 0.02);
}

// Equal points must be resolved uniformly: three equal teams in a double
// round robin often tie, and each ends first a third of the time.
TEST(RoundRobin, TieBreakUniform) {
  Rng rng(23);
  const TeamStrengths beta({1.0, 1.0, 1.0});
  std::vector<int> first(3, 0);
  const int n = 30000;
  for (int i = 0; i < n; ++i) {
    const auto o = play_round_robin(beta, 2, rng);
    for (std::size_t t = 0; t < 3; ++t) first[t] += o.category(t) == 0;
  }
  for (int f : first) EXPECT_NEAR(f / double(n), 1.0 / 3.0, 0.015);
}

TEST(TrueStrengthPrediction, ValidAndConvergesToFlat) {
  Rng rng(31);
  const TeamStrengths equal(std::vector<double>(8, 1.0));
  for (auto kind : {FormatKind::knockout, FormatKind::single_round_robin}) {
    const TournamentFormat format(kind, 8);
    const std::size_t S = 20000;
    const auto x = true_strength_prediction(equal, format, S, rng);
    const auto flat = flat_prediction(format.rank_structure());
    for (std::size_t r = 0; r < x.categories(); ++r) {
      for (std::size_t t = 0; t < x.teams(); ++t) {
        const double p = flat(r, t);
        EXPECT_LE(std::abs(x(r, t) - p), 4.5 * std::sqrt(p * (1 - p) / double(S)) + 1e-12);
      }
    }
  }
}

TEST(TrueStrengthPrediction, SingleSampleIsAnOutcome) {
  Rng rng(32);
  const auto beta = sample_strengths(8, 2.0, rng);
  for (auto kind : {FormatKind::knockout, FormatKind::double_round_robin}) {
    const auto x = true_strength_prediction(beta, TournamentFormat(kind, 8), 1, rng);
    for (std::size_t t = 0; t < 8; ++t) {
      int ones = 0;
      for (std::size_t r = 0; r < x.categories(); ++r) {
        ASSERT_TRUE(x(r, t) == 0.0 || x(r, t) == 1.0);
        ones += x(r, t) == 1.0;
      }
      EXPECT_EQ(ones, 1);
    }
  }
}

TEST(TrueStrengthPrediction, FixedBracketMatchesDirectPlay) {
  const TeamStrengths beta({4, 3, 2, 1});
  const std::vector<std::size_t> bracket{0, 3, 1, 2};
  Rng a(77), b(77);
  const auto x = true_strength_prediction(beta, TournamentFormat(FormatKind::knockout, 4), 1, a,
                                          std::span<const std::size_t>(bracket));
  const auto o = play_knockout(beta, bracket, b);
  for (std::size_t t = 0; t < 4; ++t) EXPECT_EQ(x(o.category(t), t), 1.0);
}

TEST(ConfidentPrediction, ExampleOnePattern) {
  const auto s = RankStructure::from_capacities({1, 1, 2});
  const auto x = confident_prediction(TeamStrengths({4, 3, 2, 1}), s);
  EXPECT_EQ(x.probs(), (Matrix{{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 1}}));
  const auto y = confident_prediction(TeamStrengths({1, 2, 3, 4}), s);
  EXPECT_EQ(y.probs(), (Matrix{{0, 0, 0, 1}, {0, 0, 1, 0}, {1, 1, 0, 0}}));
  const auto tied = confident_prediction(TeamStrengths({1, 1, 1, 1}), s);
  EXPECT_EQ(tied(0, 0), 1.0);
  EXPECT_EQ(tied(1, 1), 1.0);
}

SimulationConfig small_config(FormatKind kind, std::size_t teams, double sigma) {
  SimulationConfig c;
  c.format = TournamentFormat(kind, teams);
  c.sigma = sigma;
  c.replicates = 60;
  c.inner_samples = 200;
  c.seed = 2024;
  c.workers = 1;
  return c;
}

TEST(Experiment, ReproducibleAndWorkerIndependent) {
  auto c = small_config(FormatKind::knockout, 8, 1.0);
  const auto a = run_replicates(c);
  const auto b = run_replicates(c);
  c.workers = 4;
  const auto p = run_replicates(c);
  ASSERT_EQ(a.size(), p.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].true_strength, b[i].true_strength);
    EXPECT_EQ(a[i].true_strength, p[i].true_strength);
    EXPECT_EQ(a[i].confident, p[i].confident);
    EXPECT_EQ(a[i].flat, p[i].flat);
  }
  c.seed = 2025;
  EXPECT_NE(run_replicates(c)[0].true_strength, a[0].true_strength);
}

TEST(Experiment, RowFieldsConsistent) {
  const auto c = small_config(FormatKind::single_round_robin, 8, 2.0);
  const auto scores = run_replicates(c);
  const auto row = summarize(c, scores);
  EXPECT_EQ(row.replicates, 60u);
  EXPECT_NEAR(row.flat, flat_trps(RankStructure::full_ranking(8)), 1e-15);
  for (const auto& s : scores) EXPECT_NEAR(s.flat, row.flat, 1e-12);
  EXPECT_GE(row.tsp_sd, 0.0);
  EXPECT_GE(row.cp_sd, 0.0);
  EXPECT_GE(row.p_tsp_lt_fp, 0.0);
  EXPECT_LE(row.p_tsp_lt_fp, 1.0);
  EXPECT_GE(row.p_tsp_lt_cp, 0.0);
  EXPECT_LE(row.p_tsp_lt_cp, 1.0);
  EXPECT_LT(row.tsp_mean, row.flat);
}

TEST(Experiment, SummarizeUsesStrictInequalityAndSampleSd) {
  const auto c = small_config(FormatKind::knockout, 4, 1.0);
  const std::vector<ReplicateScores> scores{{0.1, 0.1, 0.2}, {0.3, 0.2, 0.3}, {0.2, 0.3, 0.1}};
  const auto row = summarize(c, scores);
  EXPECT_NEAR(row.tsp_mean, 0.2, 1e-15);
  EXPECT_NEAR(row.tsp_sd, 0.1, 1e-15);
  EXPECT_NEAR(row.p_tsp_lt_fp, 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(row.p_tsp_lt_cp, 1.0 / 3.0, 1e-15);
}

TEST(Experiment, EqualStrengthLimitMatchesFlat) {
  auto c = small_config(FormatKind::knockout, 8, 1e-9);
  c.replicates = 400;
  c.inner_samples = 2000;
  const auto scores = run_replicates(c);
  const auto row = summarize(c, scores);
  double diff_sum = 0.0, diff_sq = 0.0;
  for (const auto& s : scores) {
    const double d = s.true_strength - s.flat;
    diff_sum += d;
    diff_sq += d * d;
  }
  const double n = double(scores.size());
  const double mean = diff_sum / n;
  const double se = std::sqrt((diff_sq / n - mean * mean) / (n - 1));
  // The inner-sample noise adds a small positive bias of order 1/S.
  EXPECT_LE(std::abs(mean), 3.0 * se + 0.002);
  EXPECT_NEAR(row.tsp_mean, row.flat, 0.01);
}

TEST(Experiment, SigmaMonotonicity) {
  for (auto kind : {FormatKind::knockout, FormatKind::single_round_robin}) {
    double prev_mean = 1.0, prev_se = 0.0;
    for (double sigma : {1.0, 2.0, 3.0}) {
      auto c = small_config(kind, 8, sigma);
      c.replicates = 300;
      c.inner_samples = 300;
      const auto row = run_experiment(c);
      const double se = row.tsp_sd / std::sqrt(double(row.replicates));
      EXPECT_LT(row.tsp_mean, prev_mean - 2.0 * std::hypot(se, prev_se)) << to_string(kind) << sigma;
      prev_mean = row.tsp_mean;
      prev_se = se;
    }
  }
}

TEST(Experiment, ConfigValidation) {
  auto c = small_config(FormatKind::knockout, 8, 1.0);
  c.sigma = 0.0;
  EXPECT_THROW(run_experiment(c), std::invalid_argument);
  c.sigma = 1.0;
  c.replicates = 0;
  EXPECT_THROW(run_experiment(c), std::invalid_argument);
}

TEST(Grid, TwentySevenCells) {
  const auto g = simulation_grid();
  ASSERT_EQ(g.size(), 27u);
  EXPECT_EQ(g.front().kind, FormatKind::knockout);
  EXPECT_EQ(g.front().teams, 8u);
  EXPECT_EQ(g.back().kind, FormatKind::double_round_robin);
  EXPECT_EQ(g.back().teams, 32u);
  EXPECT_EQ(g.back().sigma, 3.0);
}

TEST(FlatCurve, ClosedForms) {
  const auto full = flat_curve(CurveKind::full_ranking, {4, 8});
  EXPECT_NEAR(full[0].trps, 5.0 / 24.0, 1e-9);
  EXPECT_NEAR(full[1].trps, 0.1875, 1e-9);
  const auto ko = flat_curve(CurveKind::knockout_doubling, {8, 16, 32});
  EXPECT_NEAR(ko[0].trps, 35.0 / 192.0, 1e-9);
  EXPECT_NEAR(ko[1].trps, 0.1513671875, 1e-9);
  EXPECT_NEAR(ko[2].trps, 0.1271484375, 1e-9);
  EXPECT_NEAR(flat_curve(CurveKind::top_two_then_rest, {8})[0].trps, 0.1484375, 1e-9);
  EXPECT_THROW(flat_curve(CurveKind::knockout_doubling, {12}), std::invalid_argument);
}

TEST(FlatCurve, FullRankingDecreasesTowardSixth) {
  const auto pts = flat_curve(CurveKind::full_ranking, curve_team_counts(CurveKind::full_ranking, 256));
  for (std::size_t i = 1; i < pts.size(); ++i) {
    EXPECT_LT(pts[i].trps, pts[i - 1].trps);
    EXPECT_GT(pts[i].trps, 1.0 / 6.0);
  }
  EXPECT_NEAR(pts.back().trps, 1.0 / 6.0, 0.005);
  EXPECT_EQ(curve_team_counts(CurveKind::knockout_doubling, 64),
            (std::vector<std::size_t>{2, 4, 8, 16, 32, 64}));
}

}  // namespace
}  // namespace trps::sim
