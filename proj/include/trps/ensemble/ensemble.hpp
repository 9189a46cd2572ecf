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
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "trps/errors.hpp"
#include "trps/matrix.hpp"
#include "trps/prediction.hpp"
#include "trps/rank_structure.hpp"
#include "trps/scoring.hpp"

namespace trps::ensemble {

/// Convex model weights: non-negative, summing to 1.
class EnsembleWeights {
 public:
  static constexpr double kSumTolerance = 1e-9;

  explicit EnsembleWeights(std::vector<double> omega) : omega_(std::move(omega)) {
    if (omega_.empty()) throw std::invalid_argument("ensemble needs at least one weight");
    double sum = 0.0;
    for (double w : omega_) {
      if (!(w >= 0.0) || !std::isfinite(w)) {
        throw std::invalid_argument("ensemble weights must be finite and non-negative");
      }
      sum += w;
    }
    if (std::abs(sum - 1.0) > kSumTolerance) {
      throw std::invalid_argument("ensemble weights sum to " + std::to_string(sum) + ", expected 1");
    }
  }

  static EnsembleWeights uniform(std::size_t k) {
    return EnsembleWeights(std::vector<double>(k, 1.0 / double(k)));
  }

  static EnsembleWeights vertex(std::size_t k, std::size_t i) {
    std::vector<double> w(k, 0.0);
    w.at(i) = 1.0;
    return EnsembleWeights(std::move(w));
  }

  std::size_t size() const noexcept { return omega_.size(); }
  double operator[](std::size_t k) const { return omega_[k]; }
  const std::vector<double>& values() const noexcept { return omega_; }

 private:
  std::vector<double> omega_;
};

/// Entrywise convex combination of aligned predictions. Columns follow the
/// first prediction's labels; the others are matched by label.
inline PredictionMatrix combine(const std::vector<PredictionMatrix>& predictions,
                                const EnsembleWeights& omega) {
  if (predictions.empty()) throw std::invalid_argument("nothing to combine");
  if (predictions.size() != omega.size()) {
    throw std::invalid_argument("got " + std::to_string(predictions.size()) + " predictions but " +
                                std::to_string(omega.size()) + " weights");
  }
  const PredictionMatrix& first = predictions.front();
  const std::size_t R = first.categories();
  const std::size_t T = first.teams();
  Matrix m(R, T);
  double tolerance = kStrictTolerance;
  for (std::size_t k = 0; k < predictions.size(); ++k) {
    const auto& x = predictions[k];
    if (!x.structure().same_shape(first.structure())) {
      throw AlignmentError("ensemble members have different rank structures");
    }
    const auto perm = align_labels(x.labels(), first.labels());
    tolerance = std::max(tolerance, x.tolerance());
    const double w = omega[k];
    if (w == 0.0) continue;
    for (std::size_t r = 0; r < R; ++r) {
      for (std::size_t t = 0; t < T; ++t) m(r, t) += w * x(r, perm[t]);
    }
  }
  for (std::size_t r = 0; r < R; ++r) {
    for (std::size_t t = 0; t < T; ++t) m(r, t) = std::clamp(m(r, t), 0.0, 1.0);
  }
  return validate_prediction(std::move(m), first.structure(), first.labels(),
                             {.tolerance = tolerance});
}

/// One past tournament: its outcome and the K model predictions made for it.
class TournamentHistory {
 public:
  TournamentHistory(Outcome outcome, std::vector<PredictionMatrix> predictions)
      : outcome_(std::move(outcome)), predictions_(std::move(predictions)) {
    if (predictions_.empty()) throw std::invalid_argument("history needs at least one model");
    for (auto& x : predictions_) {
      if (!x.structure().same_shape(outcome_.structure())) {
        throw AlignmentError("prediction and outcome have different rank structures");
      }
      if (x.labels() != outcome_.labels()) x = x.reordered(outcome_.labels());
    }
  }

  const Outcome& outcome() const noexcept { return outcome_; }
  const std::vector<PredictionMatrix>& predictions() const noexcept { return predictions_; }
  std::size_t models() const noexcept { return predictions_.size(); }

 private:
  Outcome outcome_;
  std::vector<PredictionMatrix> predictions_;  // columns in outcome label order
};

inline std::size_t common_model_count(const std::vector<TournamentHistory>& histories) {
  if (histories.empty()) throw std::invalid_argument("no tournament histories");
  const std::size_t K = histories.front().models();
  for (const auto& h : histories) {
    if (h.models() != K) {
      throw std::invalid_argument("tournaments disagree on the number of models (" +
                                  std::to_string(K) + " vs " + std::to_string(h.models()) + ")");
    }
  }
  return K;
}

/// Mean TRPS over the histories of the combined prediction, evaluated
/// directly through combine() and trps().
inline double average_trps(const std::vector<TournamentHistory>& histories,
                           const EnsembleWeights& omega) {
  common_model_count(histories);
  double total = 0.0;
  for (const auto& h : histories) total += trps(h.outcome(), combine(h.predictions(), omega));
  return total / double(histories.size());
}

/// The average TRPS written as a quadratic in the weights,
///   f(w) = w' Q w - 2 b' w + c,
/// where Q_kl and b_k are averaged inner products of the cumulative
/// residual terms over teams and the first R - 1 categories.
struct QuadraticObjective {
  std::vector<double> Q;  // K x K, row-major, symmetric positive semidefinite
  std::vector<double> b;
  double c = 0.0;
  std::size_t K = 0;

  static QuadraticObjective build(const std::vector<TournamentHistory>& histories) {
    QuadraticObjective f;
    f.K = common_model_count(histories);
    const std::size_t K = f.K;
    f.Q.assign(K * K, 0.0);
    f.b.assign(K, 0.0);
    const double J = double(histories.size());
    for (const auto& h : histories) {
      const auto obs = outcome_cumulative(h.outcome());
      std::vector<CumulativeMatrix> cum;
      cum.reserve(K);
      for (const auto& x : h.predictions()) cum.push_back(cumulative(x));
      const std::size_t R = obs.rows();
      const std::size_t T = obs.cols();
      const double scale = 1.0 / (J * double(T) * double(R - 1));
      for (std::size_t k = 0; k < K; ++k) {
        for (std::size_t l = k; l < K; ++l) {
          double s = 0.0;
          for (std::size_t r = 0; r + 1 < R; ++r) {
            for (std::size_t t = 0; t < T; ++t) s += cum[k](r, t) * cum[l](r, t);
          }
          f.Q[k * K + l] += s * scale;
          if (l != k) f.Q[l * K + k] += s * scale;
        }
        double s = 0.0;
        for (std::size_t r = 0; r + 1 < R; ++r) {
          for (std::size_t t = 0; t < T; ++t) s += cum[k](r, t) * obs(r, t);
        }
        f.b[k] += s * scale;
      }
      double s = 0.0;
      for (std::size_t r = 0; r + 1 < R; ++r) {
        for (std::size_t t = 0; t < T; ++t) s += obs(r, t) * obs(r, t);
      }
      f.c += s * scale;
    }
    return f;
  }

  double value(const std::vector<double>& w) const {
    double v = c;
    for (std::size_t k = 0; k < K; ++k) {
      double qw = 0.0;
      for (std::size_t l = 0; l < K; ++l) qw += Q[k * K + l] * w[l];
      v += w[k] * qw - 2.0 * b[k] * w[k];
    }
    return v;
  }

  std::vector<double> gradient(const std::vector<double>& w) const {
    std::vector<double> g(K);
    for (std::size_t k = 0; k < K; ++k) {
      double qw = 0.0;
      for (std::size_t l = 0; l < K; ++l) qw += Q[k * K + l] * w[l];
      g[k] = 2.0 * (qw - b[k]);
    }
    return g;
  }

  /// d' Q d
  double curvature(const std::vector<double>& d) const {
    double v = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
      for (std::size_t l = 0; l < K; ++l) v += d[k] * Q[k * K + l] * d[l];
    }
    return v;
  }
};

/// Euclidean projection onto the probability simplex (sort-and-threshold).
inline std::vector<double> project_to_simplex(const std::vector<double>& v) {
  std::vector<double> u(v);
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumsum = 0.0;
  double theta = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    cumsum += u[i];
    const double t = (cumsum - 1.0) / double(i + 1);
    if (u[i] - t > 0.0) theta = t;
  }
  std::vector<double> w(v.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    w[i] = std::max(v[i] - theta, 0.0);
    sum += w[i];
  }
  for (double& x : w) x /= sum;
  return w;
}

struct FitOptions {
  /// Stop once an iteration lowers the objective by less than this.
  double tolerance = 1e-10;
  std::size_t max_iterations = 100000;
};

struct FitResult {
  EnsembleWeights weights;
  double objective;
  std::size_t iterations = 0;
  bool converged = false;
};

/// Weights on the simplex minimizing the average TRPS over `histories`.
///
/// Projected gradient descent from uniform weights: each iteration projects a
/// 1/L gradient step onto the simplex and then does an exact line search along
/// the resulting feasible direction (the objective is quadratic). When the
/// minimizer is not unique the one reached from the uniform start is returned.
inline FitResult fit_weights(const std::vector<TournamentHistory>& histories,
                             const FitOptions& options = {}) {
  const auto f = QuadraticObjective::build(histories);
  const std::size_t K = f.K;
  std::vector<double> w(K, 1.0 / double(K));
  double value = f.value(w);
  if (K == 1) return {EnsembleWeights(w), value, 0, true};

  // Lipschitz constant of the gradient, 2 * lambda_max(Q) <= 2 * max row sum.
  double lipschitz = 0.0;
  for (std::size_t k = 0; k < K; ++k) {
    double row = 0.0;
    for (std::size_t l = 0; l < K; ++l) row += std::abs(f.Q[k * K + l]);
    lipschitz = std::max(lipschitz, 2.0 * row);
  }
  if (!(lipschitz > 0.0)) return {EnsembleWeights(w), value, 0, true};

  FitResult result{EnsembleWeights(w), value, 0, false};
  std::vector<double> step(K), d(K);
  for (std::size_t it = 1; it <= options.max_iterations; ++it) {
    const auto g = f.gradient(w);
    for (std::size_t k = 0; k < K; ++k) step[k] = w[k] - g[k] / lipschitz;
    const auto target = project_to_simplex(step);
    double slope = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
      d[k] = target[k] - w[k];
      slope += g[k] * d[k];
    }
    double residual = 0.0;
    for (double x : d) residual = std::max(residual, std::abs(x));
    result.iterations = it;
    if (residual <= options.tolerance || !(slope < 0.0)) {
      result.converged = true;
      break;
    }
    // Exact line search over the feasible part of the ray w + t d.
    double t_max = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < K; ++k) {
      if (d[k] < 0.0) t_max = std::min(t_max, -w[k] / d[k]);
    }
    const double curv = f.curvature(d);
    const double t = curv > 0.0 ? std::min(t_max, -slope / (2.0 * curv)) : t_max;
    std::vector<double> next(K);
    for (std::size_t k = 0; k < K; ++k) next[k] = std::max(w[k] + t * d[k], 0.0);
    const double sum = std::accumulate(next.begin(), next.end(), 0.0);
    for (double& x : next) x /= sum;
    const double next_value = f.value(next);
    if (!(next_value < value)) {
      result.converged = true;
      break;
    }
    w = std::move(next);
    value = next_value;
  }
  if (!result.converged) {
    throw SolverError("ensemble weight fit did not converge in " +
                      std::to_string(options.max_iterations) + " iterations");
  }
  result.weights = EnsembleWeights(w);
  result.objective = average_trps(histories, result.weights);
  return result;
}

/// Exhaustive search over the simplex grid with spacing `step` (1/step must
/// be an integer up to rounding). Objective evaluated directly per grid point.
/// Ties keep the first point in lexicographic enumeration order.
inline FitResult grid_oracle(const std::vector<TournamentHistory>& histories, double step) {
  const std::size_t K = common_model_count(histories);
  if (K > 3) throw std::invalid_argument("grid oracle supports at most 3 models");
  if (!(step > 0.0) || step > 1.0) throw std::invalid_argument("grid step must lie in (0, 1]");
  const auto n = static_cast<std::size_t>(std::llround(1.0 / step));

  // Residual pieces per history, columns aligned to the outcome.
  struct Pieces {
    CumulativeMatrix obs;
    std::vector<CumulativeMatrix> cum;
    double scale;
  };
  std::vector<Pieces> pieces;
  for (const auto& h : histories) {
    std::vector<CumulativeMatrix> cum;
    for (const auto& x : h.predictions()) cum.push_back(cumulative(x));
    const auto obs = outcome_cumulative(h.outcome());
    const double scale = 1.0 / (double(obs.cols()) * double(obs.rows() - 1));
    pieces.push_back({obs, std::move(cum), scale});
  }
  auto objective = [&](const std::vector<double>& w) {
    double total = 0.0;
    for (const auto& p : pieces) {
      double s = 0.0;
      for (std::size_t r = 0; r + 1 < p.obs.rows(); ++r) {
        for (std::size_t t = 0; t < p.obs.cols(); ++t) {
          double x = 0.0;
          for (std::size_t k = 0; k < K; ++k) x += w[k] * p.cum[k](r, t);
          const double e = p.obs(r, t) - x;
          s += e * e;
        }
      }
      total += s * p.scale;
    }
    return total / double(pieces.size());
  };

  std::vector<double> best;
  double best_value = std::numeric_limits<double>::infinity();
  auto consider = [&](std::vector<double> w) {
    const double v = objective(w);
    if (v < best_value) {
      best_value = v;
      best = std::move(w);
    }
  };
  const double h = 1.0 / double(n);
  if (K == 1) {
    consider({1.0});
  } else if (K == 2) {
    for (std::size_t i = 0; i <= n; ++i) consider({double(i) * h, double(n - i) * h});
  } else {
    for (std::size_t i = 0; i <= n; ++i) {
      for (std::size_t j = 0; i + j <= n; ++j) {
        consider({double(i) * h, double(j) * h, double(n - i - j) * h});
      }
    }
  }
  return {EnsembleWeights(best), best_value, 0, true};
}

}  // namespace trps::ensemble
