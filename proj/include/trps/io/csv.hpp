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

#include <charconv>
#include <cstddef>
#include <fstream>
#include <iomanip>
#include <limits>
#include <locale>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "trps/errors.hpp"
#include "trps/matrix.hpp"
#include "trps/prediction.hpp"
#include "trps/rank_structure.hpp"

namespace trps::io {

/// File could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("error reading '" + path + "'");
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw IoError("error writing '" + path + "'");
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

/// Splits one CSV record. Double-quoted fields may contain commas; a doubled
/// quote inside them is a literal quote.
inline std::vector<std::string> split_record(std::string_view line, std::size_t line_no) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += ch;
      }
    } else if (ch == '"' && trim(cur).empty()) {
      cur.clear();
      quoted = true;
      was_quoted = true;
    } else if (ch == ',') {
      fields.push_back(was_quoted ? cur : std::string(trim(cur)));
      cur.clear();
      was_quoted = false;
    } else {
      cur += ch;
    }
  }
  if (quoted) throw ParseError("unterminated quoted field", line_no);
  fields.push_back(was_quoted ? cur : std::string(trim(cur)));
  return fields;
}

struct Record {
  std::size_t line;
  std::vector<std::string> fields;
};

/// Non-blank, non-comment ('#') records. Strips a UTF-8 byte order mark.
inline std::vector<Record> records(std::string_view text) {
  if (text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);
  std::vector<Record> out;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    out.push_back({line_no, split_record(line, line_no)});
  }
  return out;
}

inline double parse_double(std::string_view s, std::size_t line_no) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParseError("not a number: '" + std::string(s) + "'", line_no);
  }
  return v;
}

inline std::size_t parse_count(std::string_view s, std::size_t line_no) {
  s = trim(s);
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParseError("not a non-negative integer: '" + std::string(s) + "'", line_no);
  }
  return v;
}

inline std::string quote(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos && field == std::string(trim(field))) {
    return field;
  }
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

inline std::string format_double(double v) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
  return os.str();
}

}  // namespace detail

/// A parsed prediction file before validation.
struct RawPrediction {
  RankStructure structure;
  std::vector<std::string> team_labels;
  Matrix probs;
};

/// Parses `rank_label,capacity,<team1>,...` with one row per category, best first.
/// Throws ParseError on malformed text; probabilities are not validated here.
inline RawPrediction parse_prediction_csv_raw(std::string_view text) {
  const auto recs = detail::records(text);
  if (recs.empty()) throw ParseError("empty prediction file");
  const auto& header = recs.front();
  if (header.fields.size() < 3 || header.fields[0] != "rank_label" || header.fields[1] != "capacity") {
    throw ParseError("header must start with 'rank_label,capacity' followed by team labels",
                     header.line);
  }
  std::vector<std::string> teams(header.fields.begin() + 2, header.fields.end());
  for (const auto& t : teams) {
    if (t.empty()) throw ParseError("empty team label in header", header.line);
  }
  std::vector<RankCategory> cats;
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 1; i < recs.size(); ++i) {
    const auto& rec = recs[i];
    if (rec.fields.size() != teams.size() + 2) {
      throw ParseError("expected " + std::to_string(teams.size() + 2) + " fields, got " +
                           std::to_string(rec.fields.size()),
                       rec.line);
    }
    cats.push_back({rec.fields[0], detail::parse_count(rec.fields[1], rec.line)});
    std::vector<double> row;
    row.reserve(teams.size());
    for (std::size_t j = 2; j < rec.fields.size(); ++j) {
      row.push_back(detail::parse_double(rec.fields[j], rec.line));
    }
    rows.push_back(std::move(row));
  }
  std::optional<RankStructure> structure;
  try {
    structure.emplace(std::move(cats));
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("bad rank structure: ") + e.what());
  }
  Matrix m(rows.size(), teams.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t t = 0; t < teams.size(); ++t) m(r, t) = rows[r][t];
  }
  return {std::move(*structure), std::move(teams), std::move(m)};
}

inline PredictionMatrix parse_prediction_csv(std::string_view text,
                                             const ValidationOptions& options = {}) {
  auto raw = parse_prediction_csv_raw(text);
  try {
    return validate_prediction(std::move(raw.probs), raw.structure, std::move(raw.team_labels),
                               options);
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
}

inline PredictionMatrix read_prediction_file(const std::string& path,
                                             const ValidationOptions& options = {}) {
  return parse_prediction_csv(read_file(path), options);
}

inline std::string write_prediction_csv(const PredictionMatrix& x) {
  std::string out = "rank_label,capacity";
  for (const auto& l : x.labels()) out += "," + detail::quote(l);
  out += "\n";
  for (std::size_t r = 0; r < x.categories(); ++r) {
    out += detail::quote(x.structure().label(r)) + "," + std::to_string(x.structure().capacity(r));
    for (std::size_t t = 0; t < x.teams(); ++t) out += "," + detail::format_double(x(r, t));
    out += "\n";
  }
  return out;
}

/// Parses `team,rank_label` rows against `structure`. Rank labels must be the
/// structure's category labels. Teams keep file order.
inline Outcome parse_outcome_csv(std::string_view text, const RankStructure& structure) {
  const auto recs = detail::records(text);
  if (recs.empty()) throw ParseError("empty outcome file");
  std::size_t first = 0;
  if (recs.front().fields.size() == 2 && recs.front().fields[0] == "team" &&
      recs.front().fields[1] == "rank_label") {
    first = 1;
  }
  std::vector<std::string> teams;
  std::vector<std::size_t> cats;
  for (std::size_t i = first; i < recs.size(); ++i) {
    const auto& rec = recs[i];
    if (rec.fields.size() != 2) throw ParseError("expected 'team,rank_label'", rec.line);
    std::size_t r = 0;
    try {
      r = structure.index_of(rec.fields[1]);
    } catch (const std::out_of_range&) {
      throw InvalidOutcome("line " + std::to_string(rec.line) + ": unknown rank label '" +
                           rec.fields[1] + "'");
    }
    teams.push_back(rec.fields[0]);
    cats.push_back(r);
  }
  try {
    return Outcome(structure, std::move(teams), std::move(cats));
  } catch (const std::invalid_argument& e) {
    throw InvalidOutcome(e.what());
  }
}

inline Outcome read_outcome_file(const std::string& path, const RankStructure& structure) {
  return parse_outcome_csv(read_file(path), structure);
}

inline std::string write_outcome_csv(const Outcome& o) {
  std::string out = "team,rank_label\n";
  for (std::size_t t = 0; t < o.teams(); ++t) {
    out += detail::quote(o.labels()[t]) + "," + detail::quote(o.structure().label(o.category(t))) + "\n";
  }
  return out;
}

/// Numbers separated by commas, whitespace or newlines; '#' starts a comment.
inline std::vector<double> parse_number_list(std::string_view text) {
  std::vector<double> out;
  for (const auto& rec : detail::records(text)) {
    for (const auto& field : rec.fields) {
      std::istringstream ws(field);
      std::string tok;
      while (ws >> tok) out.push_back(detail::parse_double(tok, rec.line));
    }
  }
  if (out.empty()) throw ParseError("no numbers found");
  return out;
}

inline std::vector<double> read_number_list(const std::string& path) {
  return parse_number_list(read_file(path));
}

}  // namespace trps::io
