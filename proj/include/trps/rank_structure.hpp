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
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "trps/errors.hpp"

namespace trps {

struct RankCategory {
  std::string label;
  std::size_t capacity = 0;

  friend bool operator==(const RankCategory&, const RankCategory&) = default;
};

/// Ordered rank categories, best first, each holding a fixed number of teams.
///
/// Invariants: 2 <= R <= T, every capacity positive, capacities sum to T.
/// Category indices are 0-based (index 0 is the champion).
class RankStructure {
 public:
  explicit RankStructure(std::vector<RankCategory> categories)
      : categories_(std::move(categories)) {
    if (categories_.size() < 2) {
      throw std::invalid_argument("rank structure needs at least 2 categories");
    }
    std::unordered_set<std::string> seen;
    for (const auto& c : categories_) {
      if (c.capacity == 0) throw std::invalid_argument("category '" + c.label + "' has capacity 0");
      if (!seen.insert(c.label).second) {
        throw std::invalid_argument("duplicate category label '" + c.label + "'");
      }
      teams_ += c.capacity;
    }
    first_position_.reserve(categories_.size());
    std::size_t pos = 0;
    for (const auto& c : categories_) {
      first_position_.push_back(pos);
      pos += c.capacity;
    }
  }

  /// Labels are the overall positions each category covers, e.g. "1", "2", "3-4".
  static RankStructure from_capacities(const std::vector<std::size_t>& capacities) {
    std::vector<RankCategory> cats;
    std::size_t pos = 1;
    for (std::size_t cap : capacities) {
      std::string label = std::to_string(pos);
      if (cap > 1) label += "-" + std::to_string(pos + cap - 1);
      cats.push_back({std::move(label), cap});
      pos += cap;
    }
    return RankStructure(std::move(cats));
  }

  static RankStructure full_ranking(std::size_t teams) {
    return from_capacities(std::vector<std::size_t>(teams, 1));
  }

  /// Winner, runner-up and then everybody else in one category.
  static RankStructure top_two(std::size_t teams) {
    if (teams < 3) throw std::invalid_argument("top-two structure needs at least 3 teams");
    return from_capacities({1, 1, teams - 2});
  }

  /// Knockout over 2^rounds teams: (1, 1, 2, 4, ..., 2^(rounds-1)).
  static RankStructure knockout(std::size_t rounds) {
    if (rounds < 1) throw std::invalid_argument("knockout needs at least one round");
    std::vector<std::size_t> caps{1};
    for (std::size_t n = 0; n < rounds; ++n) caps.push_back(std::size_t{1} << n);
    return from_capacities(caps);
  }

  /// 32 teams, 7 observable categories: 1st, 2nd, 3rd, 4th, 5-8, 9-16, 17-32.
  static RankStructure world_cup_2018() { return from_capacities({1, 1, 1, 1, 4, 8, 16}); }

  std::size_t categories() const noexcept { return categories_.size(); }
  std::size_t teams() const noexcept { return teams_; }

  const RankCategory& category(std::size_t r) const { return categories_.at(r); }
  std::size_t capacity(std::size_t r) const { return categories_.at(r).capacity; }
  const std::string& label(std::size_t r) const { return categories_.at(r).label; }
  const std::vector<RankCategory>& all() const noexcept { return categories_; }

  std::vector<std::size_t> capacities() const {
    std::vector<std::size_t> out;
    out.reserve(categories_.size());
    for (const auto& c : categories_) out.push_back(c.capacity);
    return out;
  }

  /// First 0-based overall position in category r.
  std::size_t first_position(std::size_t r) const { return first_position_.at(r); }

  /// Category holding 0-based overall position p.
  std::size_t category_of_position(std::size_t p) const {
    if (p >= teams_) throw std::out_of_range("position beyond team count");
    auto it = std::upper_bound(first_position_.begin(), first_position_.end(), p);
    return static_cast<std::size_t>(it - first_position_.begin()) - 1;
  }

  /// Category index for a label, or throws std::out_of_range.
  std::size_t index_of(const std::string& label) const {
    for (std::size_t r = 0; r < categories_.size(); ++r) {
      if (categories_[r].label == label) return r;
    }
    throw std::out_of_range("unknown rank label '" + label + "'");
  }

  /// Same capacities in the same order; labels are opaque and ignored.
  bool same_shape(const RankStructure& other) const {
    if (categories_.size() != other.categories_.size()) return false;
    for (std::size_t r = 0; r < categories_.size(); ++r) {
      if (categories_[r].capacity != other.categories_[r].capacity) return false;
    }
    return true;
  }

  friend bool operator==(const RankStructure& a, const RankStructure& b) {
    return a.categories_ == b.categories_;
  }

 private:
  std::vector<RankCategory> categories_;
  std::vector<std::size_t> first_position_;
  std::size_t teams_ = 0;
};

/// Default team labels "team1" ... "teamT".
inline std::vector<std::string> default_team_labels(std::size_t teams) {
  std::vector<std::string> labels;
  labels.reserve(teams);
  for (std::size_t t = 0; t < teams; ++t) labels.push_back("team" + std::to_string(t + 1));
  return labels;
}

inline void require_distinct_labels(const std::vector<std::string>& labels) {
  std::unordered_set<std::string> seen;
  for (const auto& l : labels) {
    if (!seen.insert(l).second) throw std::invalid_argument("duplicate team label '" + l + "'");
  }
}

/// Observed final placement of every team.
class Outcome {
 public:
  Outcome(RankStructure structure, std::vector<std::string> team_labels,
          std::vector<std::size_t> category_of_team)
      : structure_(std::move(structure)),
        labels_(std::move(team_labels)),
        category_(std::move(category_of_team)) {
    const std::size_t T = structure_.teams();
    if (labels_.size() != T || category_.size() != T) {
      throw std::invalid_argument("outcome must assign exactly " + std::to_string(T) + " teams");
    }
    require_distinct_labels(labels_);
    std::vector<std::size_t> count(structure_.categories(), 0);
    for (std::size_t c : category_) {
      if (c >= structure_.categories()) throw std::invalid_argument("category index out of range");
      ++count[c];
    }
    for (std::size_t r = 0; r < count.size(); ++r) {
      if (count[r] != structure_.capacity(r)) {
        throw std::invalid_argument("category '" + structure_.label(r) + "' holds " +
                                    std::to_string(count[r]) + " teams, capacity is " +
                                    std::to_string(structure_.capacity(r)));
      }
    }
  }

  /// Unlabelled convenience form using default_team_labels.
  Outcome(RankStructure structure, std::vector<std::size_t> category_of_team)
      : Outcome(structure, default_team_labels(structure.teams()), std::move(category_of_team)) {}

  /// Teams listed best first fill the categories in order.
  static Outcome from_finishing_order(RankStructure structure, std::vector<std::string> labels_best_first) {
    std::vector<std::size_t> cats(labels_best_first.size());
    for (std::size_t p = 0; p < cats.size(); ++p) cats[p] = structure.category_of_position(p);
    return Outcome(std::move(structure), std::move(labels_best_first), std::move(cats));
  }

  const RankStructure& structure() const noexcept { return structure_; }
  std::size_t teams() const noexcept { return labels_.size(); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::vector<std::size_t>& categories() const noexcept { return category_; }
  std::size_t category(std::size_t t) const { return category_.at(t); }

  std::size_t category_of(const std::string& label) const {
    for (std::size_t t = 0; t < labels_.size(); ++t) {
      if (labels_[t] == label) return category_[t];
    }
    throw std::out_of_range("unknown team '" + label + "'");
  }

 private:
  RankStructure structure_;
  std::vector<std::string> labels_;
  std::vector<std::size_t> category_;
};

/// For each label in `target`, its column in `source`. Throws AlignmentError
/// with the symmetric difference when the two label sets differ.
inline std::vector<std::size_t> align_labels(const std::vector<std::string>& source,
                                             const std::vector<std::string>& target) {
  if (source == target) {
    std::vector<std::size_t> identity(source.size());
    std::iota(identity.begin(), identity.end(), std::size_t{0});
    return identity;
  }
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < source.size(); ++i) index.emplace(source[i], i);
  std::vector<std::size_t> perm;
  perm.reserve(target.size());
  std::vector<std::string> only_target;
  std::unordered_set<std::string> target_set(target.begin(), target.end());
  for (const auto& l : target) {
    auto it = index.find(l);
    if (it == index.end()) {
      only_target.push_back(l);
    } else {
      perm.push_back(it->second);
    }
  }
  std::vector<std::string> only_source;
  for (const auto& l : source) {
    if (!target_set.count(l)) only_source.push_back(l);
  }
  if (!only_source.empty() || !only_target.empty() || source.size() != target.size()) {
    std::sort(only_source.begin(), only_source.end());
    std::sort(only_target.begin(), only_target.end());
    throw AlignmentError(std::move(only_source), std::move(only_target));
  }
  return perm;
}

}  // namespace trps
