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

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "trps/ensemble/ensemble.hpp"
#include "trps/sim/experiment.hpp"

namespace trps::io {

using nlohmann::json;

/// Process exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitIo = 2,
  kExitParse = 3,
  kExitValidation = 4,
  kExitAlignment = 5,
  kExitSolver = 6,
};

inline json to_json(const sim::ExperimentRow& row) {
  return {
      {"format", sim::to_string(row.kind)},
      {"teams", row.teams},
      {"sigma", row.sigma},
      {"replicates", row.replicates},
      {"inner_samples", row.inner_samples},
      {"tsp_mean", row.tsp_mean},
      {"tsp_sd", row.tsp_sd},
      {"flat", row.flat},
      {"cp_mean", row.cp_mean},
      {"cp_sd", row.cp_sd},
      {"p_tsp_lt_fp", row.p_tsp_lt_fp},
      {"p_tsp_lt_cp", row.p_tsp_lt_cp},
  };
}

/// Self-describing experiment report; `seed` reproduces every row.
inline json experiment_report(std::uint64_t seed, std::size_t replicates, std::size_t inner_samples,
                              const std::vector<sim::ExperimentRow>& rows) {
  json r;
  r["kind"] = "trps_experiment";
  r["version"] = 1;
  r["seed"] = seed;
  r["replicates"] = replicates;
  r["inner_samples"] = inner_samples;
  r["strengths"] = "lognormal(0, sigma)";
  r["knockout_bracket"] = "uniform random per replicate";
  r["rows"] = json::array();
  for (const auto& row : rows) r["rows"].push_back(to_json(row));
  return r;
}

inline json to_json(const std::vector<std::string>& models, const ensemble::FitResult& fit) {
  return {
      {"kind", "trps_ensemble_weights"},
      {"models", models},
      {"weights", fit.weights.values()},
      {"objective", fit.objective},
      {"iterations", fit.iterations},
  };
}

}  // namespace trps::io
