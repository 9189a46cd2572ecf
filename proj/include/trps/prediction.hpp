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
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "trps/errors.hpp"
#include "trps/matrix.hpp"
#include "trps/rank_structure.hpp"

namespace trps {

inline constexpr double kStrictTolerance = 1e-9;

struct ValidationOptions {
  /// Absolute tolerance on column sums (== 1) and row sums (== capacity).
  double tolerance = kStrictTolerance;
  /// Rescale every column to sum to exactly 1 before the row-sum check.
  /// Columns summing to 0 cannot be rescaled and are still reported.
  bool renormalize = false;
};

class PredictionMatrix;

PredictionMatrix validate_prediction(Matrix probs, const RankStructure& structure,
                                     std::vector<std::string> team_labels,
                                     const ValidationOptions& options = {});

/// R x T matrix of rank probabilities: entry (r, t) is the probability that
/// team t finishes in category r. Only obtainable through validate_prediction,
/// so an instance always satisfies the column, row and range invariants.
class PredictionMatrix {
 public:
  const RankStructure& structure() const noexcept { return structure_; }
  const Matrix& probs() const noexcept { return probs_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  std::size_t categories() const noexcept { return probs_.rows(); }
  std::size_t teams() const noexcept { return probs_.cols(); }
  double operator()(std::size_t r, std::size_t t) const { return probs_(r, t); }
  /// Tolerance this matrix was validated at; derived matrices inherit it.
  double tolerance() const noexcept { return tolerance_; }

  /// Same matrix with columns reordered to follow `order` (a permutation of labels()).
  PredictionMatrix reordered(const std::vector<std::string>& order) const {
    const auto perm = align_labels(labels_, order);
    Matrix m(categories(), teams());
    for (std::size_t r = 0; r < categories(); ++r) {
      for (std::size_t t = 0; t < teams(); ++t) m(r, t) = probs_(r, perm[t]);
    }
    return PredictionMatrix(structure_, std::move(m), order, tolerance_);
  }

 private:
  PredictionMatrix(RankStructure s, Matrix p, std::vector<std::string> l, double tol)
      : structure_(std::move(s)), probs_(std::move(p)), labels_(std::move(l)), tolerance_(tol) {}

  friend PredictionMatrix validate_prediction(Matrix, const RankStructure&,
                                              std::vector<std::string>,
                                              const ValidationOptions&);

  RankStructure structure_;
  Matrix probs_;
  std::vector<std::string> labels_;
  double tolerance_ = kStrictTolerance;
};

/// Every violated constraint of `probs` against `structure`. Empty means valid.
inline std::vector<Violation> find_violations(const Matrix& probs, const RankStructure& structure,
                                              double tolerance = kStrictTolerance) {
  std::vector<Violation> out;
  const std::size_t R = structure.categories();
  const std::size_t T = structure.teams();
  if (probs.rows() != R) {
    out.push_back({Violation::Kind::dimension_mismatch, 0, 0, double(probs.rows()), double(R)});
  }
  if (probs.cols() != T) {
    out.push_back({Violation::Kind::dimension_mismatch, 0, 0, double(probs.cols()), double(T)});
  }
  if (!out.empty()) return out;

  bool has_nan = false;
  for (std::size_t r = 0; r < R; ++r) {
    for (std::size_t t = 0; t < T; ++t) {
      const double x = probs(r, t);
      if (std::isnan(x)) {
        out.push_back({Violation::Kind::not_a_number, r, t, x, 0.0});
        has_nan = true;
      } else if (x < 0.0 || x > 1.0) {
        out.push_back({Violation::Kind::out_of_range, r, t, x, 0.0});
      }
    }
  }
  // Sums involving NaN carry no information beyond the NaN itself.
  if (has_nan) return out;

  for (std::size_t t = 0; t < T; ++t) {
    double s = 0.0;
    for (std::size_t r = 0; r < R; ++r) s += probs(r, t);
    if (std::abs(s - 1.0) > tolerance) out.push_back({Violation::Kind::column_sum, 0, t, s, 1.0});
  }
  for (std::size_t r = 0; r < R; ++r) {
    double s = 0.0;
    for (std::size_t t = 0; t < T; ++t) s += probs(r, t);
    const double cap = double(structure.capacity(r));
    if (std::abs(s - cap) > tolerance) out.push_back({Violation::Kind::row_sum, r, 0, s, cap});
  }
  return out;
}

/// Validates (and optionally column-renormalizes) a raw matrix. Throws
/// ValidationError listing every violation, or std::invalid_argument for bad labels.
inline PredictionMatrix validate_prediction(Matrix probs, const RankStructure& structure,
                                            std::vector<std::string> team_labels,
                                            const ValidationOptions& options) {
  if (team_labels.size() != structure.teams()) {
    throw ValidationError({{Violation::Kind::dimension_mismatch, 0, 0, double(team_labels.size()),
                            double(structure.teams())}});
  }
  require_distinct_labels(team_labels);

  if (options.renormalize && probs.rows() == structure.categories() &&
      probs.cols() == structure.teams()) {
    for (std::size_t t = 0; t < probs.cols(); ++t) {
      double s = 0.0;
      for (std::size_t r = 0; r < probs.rows(); ++r) s += probs(r, t);
      if (s > 0.0 && std::isfinite(s)) {
        for (std::size_t r = 0; r < probs.rows(); ++r) probs(r, t) /= s;
      }
    }
  }
  auto violations = find_violations(probs, structure, options.tolerance);
  if (!violations.empty()) throw ValidationError(std::move(violations));
  return PredictionMatrix(structure, std::move(probs), std::move(team_labels), options.tolerance);
}

inline PredictionMatrix validate_prediction(Matrix probs, const RankStructure& structure,
                                            const ValidationOptions& options = {}) {
  return validate_prediction(std::move(probs), structure, default_team_labels(structure.teams()),
                             options);
}

/// Column-wise running sums of a prediction or the step functions of an
/// outcome: entry (r, t) is the probability that team t finishes in category
/// r or better. Last row is 1.
class CumulativeMatrix {
 public:
  std::size_t rows() const noexcept { return m_.rows(); }
  std::size_t cols() const noexcept { return m_.cols(); }
  double operator()(std::size_t r, std::size_t t) const { return m_(r, t); }
  const Matrix& matrix() const noexcept { return m_; }

 private:
  explicit CumulativeMatrix(Matrix m) : m_(std::move(m)) {}
  friend CumulativeMatrix cumulative(const PredictionMatrix&);
  friend CumulativeMatrix outcome_cumulative(const Outcome&);

  Matrix m_;
};

inline CumulativeMatrix cumulative(const PredictionMatrix& x) {
  const std::size_t R = x.categories();
  const std::size_t T = x.teams();
  Matrix m(R, T);
  for (std::size_t t = 0; t < T; ++t) {
    double acc = 0.0;
    for (std::size_t r = 0; r < R; ++r) {
      acc += x(r, t);
      m(r, t) = acc;
    }
    // Removes rounding drift; the column sum is 1 within tolerance already.
    m(R - 1, t) = 1.0;
  }
  return CumulativeMatrix(std::move(m));
}

inline CumulativeMatrix outcome_cumulative(const Outcome& o) {
  const std::size_t R = o.structure().categories();
  const std::size_t T = o.teams();
  Matrix m(R, T);
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t r = o.category(t); r < R; ++r) m(r, t) = 1.0;
  }
  return CumulativeMatrix(std::move(m));
}

/// Every team gets category r with probability capacity(r) / T.
inline PredictionMatrix flat_prediction(const RankStructure& structure,
                                        std::vector<std::string> team_labels) {
  const std::size_t R = structure.categories();
  const std::size_t T = structure.teams();
  Matrix m(R, T);
  for (std::size_t r = 0; r < R; ++r) {
    const double p = double(structure.capacity(r)) / double(T);
    for (std::size_t t = 0; t < T; ++t) m(r, t) = p;
  }
  return validate_prediction(std::move(m), structure, std::move(team_labels));
}

inline PredictionMatrix flat_prediction(const RankStructure& structure) {
  return flat_prediction(structure, default_team_labels(structure.teams()));
}

/// Checks that `mapping` (fine category -> coarse category) is non-decreasing,
/// onto, and capacity-consistent.
inline void check_collapse_mapping(const RankStructure& fine, const RankStructure& coarse,
                                   const std::vector<std::size_t>& mapping) {
  if (fine.teams() != coarse.teams()) {
    throw std::invalid_argument("fine and coarse structures have different team counts");
  }
  if (mapping.size() != fine.categories()) {
    throw std::invalid_argument("mapping must have one entry per fine category");
  }
  std::vector<std::size_t> cap(coarse.categories(), 0);
  for (std::size_t i = 0; i < mapping.size(); ++i) {
    if (mapping[i] >= coarse.categories()) throw std::invalid_argument("mapping target out of range");
    if (i > 0 && mapping[i] < mapping[i - 1]) throw std::invalid_argument("mapping is not monotone");
    cap[mapping[i]] += fine.capacity(i);
  }
  for (std::size_t c = 0; c < cap.size(); ++c) {
    if (cap[c] == 0) throw std::invalid_argument("mapping is not onto coarse category " + coarse.label(c));
    if (cap[c] != coarse.capacity(c)) {
      throw std::invalid_argument("fine capacities mapped to '" + coarse.label(c) + "' sum to " +
                                  std::to_string(cap[c]) + ", expected " +
                                  std::to_string(coarse.capacity(c)));
    }
  }
}

/// The mapping that merges consecutive fine categories into `coarse` by
/// overall position. Throws when a coarse boundary splits a fine category.
inline std::vector<std::size_t> positional_mapping(const RankStructure& fine,
                                                   const RankStructure& coarse) {
  if (fine.teams() != coarse.teams()) {
    throw std::invalid_argument("fine and coarse structures have different team counts");
  }
  std::vector<std::size_t> mapping(fine.categories());
  for (std::size_t i = 0; i < fine.categories(); ++i) {
    const std::size_t first = fine.first_position(i);
    const std::size_t last = first + fine.capacity(i) - 1;
    mapping[i] = coarse.category_of_position(first);
    if (coarse.category_of_position(last) != mapping[i]) {
      throw std::invalid_argument("fine category '" + fine.label(i) + "' straddles a coarse boundary");
    }
  }
  return mapping;
}

/// Sums fine rows into coarse rows. Row and column sums carry over up to
/// rounding, so the result is re-validated at the input's tolerance.
inline PredictionMatrix collapse(const PredictionMatrix& x, const RankStructure& coarse,
                                 const std::vector<std::size_t>& mapping) {
  check_collapse_mapping(x.structure(), coarse, mapping);
  Matrix m(coarse.categories(), x.teams());
  for (std::size_t r = 0; r < x.categories(); ++r) {
    for (std::size_t t = 0; t < x.teams(); ++t) m(mapping[r], t) += x(r, t);
  }
  // Sums of entries in [0,1] can exceed 1 by an ulp.
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t t = 0; t < m.cols(); ++t) m(r, t) = std::min(m(r, t), 1.0);
  }
  return validate_prediction(std::move(m), coarse, x.labels(), {.tolerance = x.tolerance()});
}

}  // namespace trps
