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

// trps: score tournament predictions, simulate tournaments, fit ensembles.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "trps/io/csv.hpp"
#include "trps/io/report.hpp"
#include "trps/trps.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace trps;

namespace {

struct Common {
  bool json_out = false;
  double tolerance = kStrictTolerance;
  bool renormalize = false;

  ValidationOptions validation() const { return {tolerance, renormalize}; }
};

std::uint64_t default_seed() {
  if (const char* env = std::getenv("TRPS_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw std::invalid_argument(std::string("TRPS_SEED is not an unsigned integer: ") + env);
    }
  }
  return 1;
}

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
  } else {
    io::write_file(out_path, text);
  }
}

// ---------------------------------------------------------------- validate

int cmd_validate(const std::string& path, const Common& common) {
  auto raw = io::parse_prediction_csv_raw(io::read_file(path));
  const RankStructure structure = raw.structure;
  const std::size_t teams = raw.team_labels.size();
  try {
    validate_prediction(std::move(raw.probs), structure, std::move(raw.team_labels),
                        common.validation());
  } catch (const ValidationError& e) {
    if (common.json_out) {
      json j{{"file", path}, {"valid", false}, {"violations", json::array()}};
      for (const auto& v : e.violations()) {
        j["violations"].push_back({{"kind", to_string(v.kind)},
                                   {"row", v.row + 1},
                                   {"column", v.col + 1},
                                   {"observed", v.observed},
                                   {"expected", v.expected},
                                   {"message", v.describe()}});
      }
      std::cout << j.dump(2) << "\n";
    } else {
      std::cout << path << ": invalid\n";
      for (const auto& v : e.violations()) std::cout << "  " << v.describe() << "\n";
    }
    return io::kExitValidation;
  }
  if (common.json_out) {
    std::cout << json{{"file", path},
                      {"valid", true},
                      {"categories", structure.categories()},
                      {"teams", teams},
                      {"renormalized", common.renormalize}}
                     .dump(2)
              << "\n";
  } else {
    std::cout << path << ": valid (" << structure.categories() << " categories, " << teams
              << " teams)\n";
  }
  return io::kExitOk;
}

// ------------------------------------------------------------------- score

std::vector<double> weight_spec_values(const std::string& spec, const RankStructure& s,
                                       bool include_last) {
  const std::size_t R = s.categories();
  if (spec == "doubling") {
    if (!include_last) return doubling_relative_weights(s);
    std::vector<double> w(R);
    for (std::size_t r = 0; r < R; ++r) w[r] = double(std::uint64_t{1} << (R - 1 - r));
    return w;
  }
  if (spec == "inverse-capacity") {
    if (!include_last) return inverse_capacity_relative_weights(s);
    std::vector<double> w(R);
    for (std::size_t r = 0; r < R; ++r) w[r] = 1.0 / double(s.capacity(r));
    return w;
  }
  if (spec.rfind("file:", 0) == 0) {
    auto w = io::read_number_list(spec.substr(5));
    // A per-category list also serves the weighted TRPS, which has no weight
    // for the last category.
    if (!include_last && w.size() == R) w.pop_back();
    const std::size_t want = include_last ? R : R - 1;
    if (w.size() != want) {
      throw std::invalid_argument("weight file has " + std::to_string(w.size()) +
                                  " values, expected " + std::to_string(want));
    }
    return w;
  }
  throw std::invalid_argument("unknown weights '" + spec +
                              "' (use doubling, inverse-capacity or file:<path>)");
}

int cmd_score(const std::string& metric, const std::string& pred_path,
              const std::string& outcome_path, const std::string& weights_spec, double floor,
              const Common& common) {
  const auto prediction = io::read_prediction_file(pred_path, common.validation());
  const auto outcome = io::read_outcome_file(outcome_path, prediction.structure());
  json record{{"metric", metric}, {"prediction", pred_path}, {"outcome", outcome_path}};
  double value = 0.0;
  if (metric == "trps") {
    value = trps::trps(outcome, prediction);
  } else if (metric == "wtrps") {
    if (weights_spec.empty()) throw std::invalid_argument("wtrps needs --weights");
    const auto w = normalize_relative_weights(
        weight_spec_values(weights_spec, prediction.structure(), false));
    value = wtrps(outcome, prediction, w);
    record["weights"] = w.values();
  } else if (metric == "logloss") {
    const auto w = weights_spec.empty()
                       ? CategoryLogLossWeights::uniform(prediction.categories())
                       : CategoryLogLossWeights(
                             weight_spec_values(weights_spec, prediction.structure(), true));
    const auto ll = log_loss(outcome, prediction, w, floor);
    value = ll.value;
    record["weights"] = w.values();
    record["floor"] = floor;
    record["clamped"] = ll.clamped;
  } else {
    throw std::invalid_argument("unknown metric '" + metric + "'");
  }
  record["value"] = value;
  if (common.json_out) {
    std::cout << record.dump(2) << "\n";
  } else {
    std::cout << metric << " " << fixed6(value) << "\n";
    if (record.contains("clamped") && record["clamped"].get<std::size_t>() > 0) {
      std::cout << "clamped " << record["clamped"].get<std::size_t>() << " probabilities below "
                << floor << "\n";
    }
  }
  return io::kExitOk;
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  std::string format = "knockout";
  std::size_t teams = 8;
  double sigma = 1.0;
  std::size_t replicates = sim::kDeskReplicates;
  std::size_t inner = sim::kDeskInnerSamples;
  std::optional<std::uint64_t> seed;
  bool full_scale = false;
  bool grid = false;
  unsigned workers = 0;
  std::string out;
};

int cmd_simulate(const SimulateArgs& a, const Common& common) {
  const std::uint64_t seed = a.seed ? *a.seed : default_seed();
  const std::size_t replicates = a.full_scale ? sim::kFullReplicates : a.replicates;
  const std::size_t inner = a.full_scale ? sim::kFullInnerSamples : a.inner;

  std::vector<sim::GridCell> cells;
  if (a.grid) {
    cells = sim::simulation_grid();
  } else {
    cells.push_back({sim::parse_format_kind(a.format), a.teams, a.sigma});
  }
  std::vector<sim::ExperimentRow> rows;
  if (!common.json_out) {
    std::cerr << "seed " << seed << ", " << replicates << " replicates x " << inner
              << " inner samples\n";
  }
  for (const auto& cell : cells) {
    sim::SimulationConfig config{sim::TournamentFormat(cell.kind, cell.teams), cell.sigma,
                                 replicates, inner, seed, a.workers};
    rows.push_back(sim::run_experiment(config));
    if (!common.json_out && a.out.empty()) {
      const auto& r = rows.back();
      std::printf("%-18s %3zu %4.1f  TSP %.3f +- %.3f  Flat %.3f  CP %.3f +- %.3f  "
                  "P(TSP<FP) %.2f  P(TSP<CP) %.2f\n",
                  sim::to_string(r.kind), r.teams, r.sigma, r.tsp_mean, r.tsp_sd, r.flat,
                  r.cp_mean, r.cp_sd, r.p_tsp_lt_fp, r.p_tsp_lt_cp);
      std::fflush(stdout);
    }
  }
  const auto report = io::experiment_report(seed, replicates, inner, rows);
  if (common.json_out || !a.out.empty()) emit(a.out, report.dump(2) + "\n");
  return io::kExitOk;
}

// -------------------------------------------------------------- flat-curve

int cmd_flat_curve(const std::string& kind_name, std::size_t max_teams, const Common& common) {
  sim::CurveKind kind;
  if (kind_name == "full") {
    kind = sim::CurveKind::full_ranking;
  } else if (kind_name == "top-two") {
    kind = sim::CurveKind::top_two_then_rest;
  } else if (kind_name == "knockout") {
    kind = sim::CurveKind::knockout_doubling;
  } else {
    throw std::invalid_argument("unknown curve kind '" + kind_name + "'");
  }
  const auto points = sim::flat_curve(kind, sim::curve_team_counts(kind, max_teams));
  if (common.json_out) {
    json j = json::array();
    for (const auto& p : points) j.push_back({{"teams", p.teams}, {"trps", p.trps}});
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "teams,trps\n";
    for (const auto& p : points) std::cout << p.teams << "," << io::detail::format_double(p.trps) << "\n";
  }
  return io::kExitOk;
}

// -------------------------------------------------------------------- flat

int cmd_flat(const std::string& structure_path, const std::string& teams_from, const std::string& out) {
  const auto recs = io::detail::records(io::read_file(structure_path));
  std::vector<RankCategory> cats;
  for (std::size_t i = 0; i < recs.size(); ++i) {
    const auto& f = recs[i].fields;
    if (i == 0 && f.size() == 2 && f[0] == "rank_label" && f[1] == "capacity") continue;
    if (f.size() != 2) throw ParseError("expected 'rank_label,capacity'", recs[i].line);
    cats.push_back({f[0], io::detail::parse_count(f[1], recs[i].line)});
  }
  RankStructure structure = [&] {
    try {
      return RankStructure(std::move(cats));
    } catch (const std::invalid_argument& e) {
      throw ParseError(std::string("bad rank structure: ") + e.what());
    }
  }();
  std::vector<std::string> teams;
  if (teams_from.empty()) {
    teams = default_team_labels(structure.teams());
  } else {
    teams = io::read_outcome_file(teams_from, structure).labels();
  }
  emit(out, io::write_prediction_csv(flat_prediction(structure, teams)));
  return io::kExitOk;
}

// ---------------------------------------------------------------- ensemble

std::vector<fs::path> model_files(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw io::IoError("not a directory: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".csv") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw io::IoError("no .csv predictions in " + dir.string());
  return files;
}

std::vector<std::string> stems(const std::vector<fs::path>& files) {
  std::vector<std::string> out;
  for (const auto& f : files) out.push_back(f.stem().string());
  return out;
}

int cmd_ensemble_fit(const std::vector<std::string>& histories_spec, const std::string& out,
                     const Common& common) {
  std::vector<ensemble::TournamentHistory> histories;
  std::vector<std::string> models;
  for (const auto& spec : histories_spec) {
    const auto colon = spec.find(':');
    if (colon == std::string::npos) {
      throw std::invalid_argument("--history expects OUTCOME.csv:PREDICTION_DIR, got '" + spec + "'");
    }
    const auto files = model_files(spec.substr(colon + 1));
    const auto names = stems(files);
    if (models.empty()) {
      models = names;
    } else if (names != models) {
      throw AlignmentError("model files in " + spec.substr(colon + 1) +
                           " differ from the first history's models");
    }
    std::vector<PredictionMatrix> preds;
    for (const auto& f : files) preds.push_back(io::read_prediction_file(f.string(), common.validation()));
    auto outcome = io::read_outcome_file(spec.substr(0, colon), preds.front().structure());
    histories.emplace_back(std::move(outcome), std::move(preds));
  }
  if (histories.empty()) throw std::invalid_argument("need at least one --history");
  const auto fit = ensemble::fit_weights(histories);
  emit(out, io::to_json(models, fit).dump(2) + "\n");
  if (!out.empty() && out != "-") {
    std::cout << "objective " << fixed6(fit.objective) << "\n";
  }
  return io::kExitOk;
}

int cmd_ensemble_predict(const std::string& weights_path, const std::string& dir,
                         const std::string& out, const Common& common) {
  json j;
  try {
    j = json::parse(io::read_file(weights_path));
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("weights file: ") + e.what());
  }
  if (!j.contains("models") || !j.contains("weights")) {
    throw ParseError("weights file needs 'models' and 'weights'");
  }
  const auto models = j["models"].get<std::vector<std::string>>();
  const auto omega = ensemble::EnsembleWeights(j["weights"].get<std::vector<double>>());
  std::vector<PredictionMatrix> preds;
  for (const auto& m : models) {
    const fs::path p = fs::path(dir) / (m + ".csv");
    if (!fs::exists(p)) throw AlignmentError("missing prediction for model '" + m + "' in " + dir);
    preds.push_back(io::read_prediction_file(p.string(), common.validation()));
  }
  emit(out, io::write_prediction_csv(ensemble::combine(preds, omega)));
  return io::kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tournament rank probability scores, tournament simulation and ensemble weights"};
  app.require_subcommand(1);
  Common common;
  auto add_common = [&](CLI::App* sub, bool tolerance) {
    sub->add_flag("--json", common.json_out, "Machine-readable JSON output");
    if (tolerance) {
      sub->add_option("--tolerance", common.tolerance, "Row/column sum tolerance")
          ->check(CLI::PositiveNumber);
      sub->add_flag("--renormalize", common.renormalize,
                    "Rescale columns to sum to 1 before checking row sums");
    }
  };

  std::string pred_path, outcome_path, metric = "trps", weights_spec;
  double floor = kDefaultLogLossFloor;

  auto* validate = app.add_subcommand("validate", "Check a prediction file");
  validate->add_option("prediction", pred_path, "Prediction CSV")->required();
  add_common(validate, true);

  auto* score = app.add_subcommand("score", "Score a prediction against an outcome");
  score->add_option("--metric", metric, "trps | wtrps | logloss")
      ->check(CLI::IsMember({"trps", "wtrps", "logloss"}));
  score->add_option("prediction", pred_path, "Prediction CSV")->required();
  score->add_option("outcome", outcome_path, "Outcome CSV")->required();
  score->add_option("--weights", weights_spec, "doubling | inverse-capacity | file:<path>");
  score->add_option("--floor", floor, "Log-loss probability floor")->check(CLI::PositiveNumber);
  add_common(score, true);

  SimulateArgs sim_args;
  auto* simulate = app.add_subcommand("simulate", "Bradley-Terry tournament simulation study");
  simulate->add_option("--format", sim_args.format,
                       "knockout | single_round_robin | double_round_robin");
  simulate->add_option("--teams", sim_args.teams, "Number of teams");
  simulate->add_option("--sigma", sim_args.sigma, "Log-normal shape of team strengths")
      ->check(CLI::PositiveNumber);
  simulate->add_option("--replicates", sim_args.replicates, "Simulated tournaments")
      ->check(CLI::PositiveNumber);
  simulate->add_option("--inner-samples", sim_args.inner,
                       "Tournaments behind each true-strength prediction")
      ->check(CLI::PositiveNumber);
  simulate->add_option("--seed", sim_args.seed, "RNG seed (default: $TRPS_SEED or 1)");
  simulate->add_flag("--full-scale", sim_args.full_scale, "10000 replicates x 10000 inner samples");
  simulate->add_flag("--grid", sim_args.grid, "Run all 27 format/teams/sigma combinations");
  simulate->add_option("--workers", sim_args.workers, "Worker threads (0 = all cores)");
  simulate->add_option("-o,--output", sim_args.out, "Write the JSON report here");
  add_common(simulate, false);

  std::string curve_kind = "full";
  std::size_t max_teams = 64;
  auto* curve = app.add_subcommand("flat-curve", "Flat-prediction TRPS by team count (CSV)");
  curve->add_option("--kind", curve_kind, "full | top-two | knockout")
      ->check(CLI::IsMember({"full", "top-two", "knockout"}));
  curve->add_option("--max-teams", max_teams, "Largest team count")->check(CLI::Range(2, 4096));
  add_common(curve, false);

  std::string structure_path, teams_from, out_path;
  auto* flat = app.add_subcommand("flat", "Write the flat prediction for a rank structure");
  flat->add_option("--structure", structure_path, "CSV of rank_label,capacity")->required();
  flat->add_option("--teams-from", teams_from, "Outcome CSV supplying team labels");
  flat->add_option("-o,--output", out_path, "Output prediction CSV");

  auto* ens = app.add_subcommand("ensemble", "Fit or apply ensemble weights");
  ens->require_subcommand(1);
  std::vector<std::string> histories;
  auto* fit = ens->add_subcommand("fit", "Fit weights minimizing average TRPS");
  fit->add_option("--history", histories, "OUTCOME.csv:PREDICTION_DIR (repeatable)")->required();
  fit->add_option("-o,--output", out_path, "Weights JSON");
  add_common(fit, true);
  std::string weights_path, pred_dir;
  auto* predict = ens->add_subcommand("predict", "Combine predictions with fitted weights");
  predict->add_option("--weights", weights_path, "Weights JSON from 'ensemble fit'")->required();
  predict->add_option("--predictions", pred_dir, "Directory of <model>.csv predictions")->required();
  predict->add_option("-o,--output", out_path, "Combined prediction CSV");
  add_common(predict, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? io::kExitOk : io::kExitUsage;
  }

  try {
    if (*validate) return cmd_validate(pred_path, common);
    if (*score) return cmd_score(metric, pred_path, outcome_path, weights_spec, floor, common);
    if (*simulate) return cmd_simulate(sim_args, common);
    if (*curve) return cmd_flat_curve(curve_kind, max_teams, common);
    if (*flat) return cmd_flat(structure_path, teams_from, out_path);
    if (*fit) return cmd_ensemble_fit(histories, out_path, common);
    if (*predict) return cmd_ensemble_predict(weights_path, pred_dir, out_path, common);
  } catch (const io::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return io::kExitIo;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return io::kExitParse;
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return io::kExitValidation;
  } catch (const InvalidOutcome& e) {
    std::cerr << "invalid outcome: " << e.what() << "\n";
    return io::kExitValidation;
  } catch (const AlignmentError& e) {
    std::cerr << "alignment error: " << e.what() << "\n";
    return io::kExitAlignment;
  } catch (const SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return io::kExitSolver;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return io::kExitUsage;
  }
  return io::kExitUsage;
}
