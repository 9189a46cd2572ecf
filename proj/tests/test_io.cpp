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
#include <random>

#include "test_util.hpp"
#include "trps/io/csv.hpp"
#include "trps/io/report.hpp"
#include "trps/trps.hpp"

namespace trps::io {
namespace {

using trps::testing::data_path;
using trps::testing::fixture_path;

TEST(PredictionCsv, ReadsExampleOne) {
  const auto x = read_prediction_file(data_path("example1_x2.csv"));
  EXPECT_EQ(x.structure().capacities(), (std::vector<std::size_t>{1, 1, 2}));
  EXPECT_EQ(x.structure().label(2), "3rd-4th");
  EXPECT_EQ(x.labels(), (std::vector<std::string>{"team1", "team2", "team3", "team4"}));
  EXPECT_EQ(x(1, 1), 0.5);
}

TEST(PredictionCsv, RoundTripWithinTolerance) {
  std::mt19937_64 gen(99);
  for (int i = 0; i < 10; ++i) {
    const auto s = trps::testing::random_structure(2 + i, gen);
    const auto x = trps::testing::random_prediction(s, gen);
    const auto y = parse_prediction_csv(write_prediction_csv(x));
    EXPECT_TRUE(y.structure() == x.structure());
    EXPECT_EQ(y.labels(), x.labels());
    for (std::size_t r = 0; r < x.categories(); ++r) {
      for (std::size_t t = 0; t < x.teams(); ++t) EXPECT_NEAR(y(r, t), x(r, t), 1e-12);
    }
  }
}

TEST(PredictionCsv, QuotedLabelsCommentsAndBom) {
  const std::string text =
      "\xEF\xBB\xBF# comment\n"
      "rank_label,capacity,\"Korea, Republic\",Japan\n"
      "\n"
      "win,1,0.25,0.75\r\n"
      "lose,1,0.75,0.25\n";
  const auto x = parse_prediction_csv(text);
  EXPECT_EQ(x.labels()[0], "Korea, Republic");
  const auto again = parse_prediction_csv(write_prediction_csv(x));
  EXPECT_EQ(again.labels()[0], "Korea, Republic");
}

TEST(PredictionCsv, Malformed) {
  EXPECT_THROW(read_prediction_file(fixture_path("malformed.csv")), ParseError);
  EXPECT_THROW(parse_prediction_csv(""), ParseError);
  EXPECT_THROW(parse_prediction_csv("team,capacity,a,b\nx,1,1,0\ny,1,0,1\n"), ParseError);
  EXPECT_THROW(parse_prediction_csv("rank_label,capacity,a,b\nx,1,1\ny,1,0,1\n"), ParseError);
  EXPECT_THROW(parse_prediction_csv("rank_label,capacity,a,b\nx,1,1,0\n"), ParseError);
  EXPECT_THROW(parse_prediction_csv("rank_label,capacity,a,a\nx,1,1,0\ny,1,0,1\n"), ParseError);
  EXPECT_THROW(parse_prediction_csv("rank_label,capacity,a,b\nx,1,\"1,0\n"), ParseError);
  try {
    parse_prediction_csv("rank_label,capacity,a,b\nx,1,1,0\ny,-1,0,1\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  EXPECT_THROW(read_prediction_file("/nonexistent/file.csv"), IoError);
}

TEST(PredictionCsv, ScaledColumnNeedsRenormalize) {
  const auto path = fixture_path("worldcup2018_flat_col1_098.csv");
  EXPECT_THROW(read_prediction_file(path), ValidationError);
  EXPECT_THROW(read_prediction_file(path, {.tolerance = 1e-3}), ValidationError);
  const auto x = read_prediction_file(path, {.tolerance = 1e-3, .renormalize = true});
  EXPECT_NEAR(x(0, 0), 1.0 / 32, 1e-15);
}

TEST(OutcomeCsv, ReadsWorldCup) {
  const auto s = RankStructure::world_cup_2018();
  const auto o = read_outcome_file(data_path("worldcup2018_outcome.csv"), read_prediction_file(data_path("worldcup2018_flat.csv")).structure());
  EXPECT_EQ(o.teams(), 32u);
  EXPECT_EQ(o.category_of("France"), 0u);
  EXPECT_EQ(o.category_of("Croatia"), 1u);
  EXPECT_EQ(o.category_of("Belgium"), 2u);
  EXPECT_EQ(o.category_of("England"), 3u);
  EXPECT_EQ(o.category_of("Germany"), 6u);
  EXPECT_TRUE(o.structure().same_shape(s));
}

TEST(OutcomeCsv, HeaderOptionalAndErrors) {
  const auto s = RankStructure::from_capacities({1, 1});
  EXPECT_EQ(parse_outcome_csv("a,1\nb,2\n", s).category_of("b"), 1u);
  EXPECT_THROW(parse_outcome_csv("team,rank_label\na,1\nb,3\n", s), InvalidOutcome);
  EXPECT_THROW(parse_outcome_csv("a,1\nb,1\n", s), InvalidOutcome);
  EXPECT_THROW(parse_outcome_csv("a,1\na,2\n", s), InvalidOutcome);
  EXPECT_THROW(parse_outcome_csv("a,1,x\nb,2\n", s), ParseError);
  EXPECT_THROW(parse_outcome_csv("", s), ParseError);
}

TEST(OutcomeCsv, RoundTrip) {
  const auto s = RankStructure::from_capacities({1, 1, 2});
  const Outcome o(s, {"x", "y, z", "w", "v"}, {2, 0, 1, 2});
  const auto back = parse_outcome_csv(write_outcome_csv(o), s);
  EXPECT_EQ(back.labels(), o.labels());
  EXPECT_EQ(back.categories(), o.categories());
}

TEST(NumberList, WeightsFile) {
  EXPECT_EQ(read_number_list(data_path("worldcup2018_weights.txt")),
            (std::vector<double>{1, 1, 0.5, 0.5, 0.25, 0.125, 0.0625}));
  EXPECT_EQ(parse_number_list("1 2\n3,4"), (std::vector<double>{1, 2, 3, 4}));
  EXPECT_THROW(parse_number_list("# nothing\n"), ParseError);
  EXPECT_THROW(parse_number_list("1 two"), ParseError);
}

TEST(ScoringFromFiles, TableTwoFlatRow) {
  const auto x = read_prediction_file(data_path("worldcup2018_flat.csv"));
  const auto o = read_outcome_file(data_path("worldcup2018_outcome.csv"), x.structure());
  EXPECT_NEAR(trps(o, x), 0.120117, 1e-6);
  const auto ll = log_loss(o, x, CategoryLogLossWeights(read_number_list(data_path("worldcup2018_weights.txt"))));
  EXPECT_NEAR(ll.value, 0.454878, 1e-6);
}

TEST(ScoringFromFiles, ExampleTwo) {
  const auto x = read_prediction_file(data_path("example2_x3.csv"));
  const auto o = read_outcome_file(data_path("example2_outcome_1234.csv"), x.structure());
  EXPECT_NEAR(trps(o, x), 0.020833, 1e-6);
}

TEST(ScoringFromFiles, MisalignedTeams) {
  const auto x = read_prediction_file(fixture_path("example1_x1_misaligned.csv"));
  const auto o = read_outcome_file(data_path("example1_outcome.csv"), x.structure());
  try {
    trps(o, x);
    FAIL();
  } catch (const AlignmentError& e) {
    EXPECT_EQ(e.only_left(), std::vector<std::string>{"teamX"});
    EXPECT_EQ(e.only_right(), std::vector<std::string>{"team4"});
  }
}

TEST(Report, ExperimentJson) {
  sim::ExperimentRow row;
  row.teams = 8;
  row.sigma = 1.0;
  row.tsp_mean = 0.13;
  const auto j = experiment_report(7, 10, 20, {row});
  EXPECT_EQ(j["seed"], 7);
  EXPECT_EQ(j["rows"].size(), 1u);
  EXPECT_EQ(j["rows"][0]["teams"], 8);
  EXPECT_EQ(j["rows"][0]["format"], "knockout");
}

TEST(Report, EnsembleJson) {
  ensemble::FitResult fit{ensemble::EnsembleWeights({0.25, 0.75}), 0.1, 4, true};
  const auto j = to_json({"a", "b"}, fit);
  EXPECT_EQ(j["models"][1], "b");
  EXPECT_EQ(j["weights"][1], 0.75);
}

}  // namespace
}  // namespace trps::io
