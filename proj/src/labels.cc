/*
 * Copyright 2026 The aiou Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "aiou/labels.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_set>

#include "aiou/error.h"

namespace aiou {
namespace {

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  while (!s.empty() &&
         (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> SplitCsvLine(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    fields.push_back(Trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

bool ParseDouble(std::string_view s, double& out) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

// Generic table: header + rows of string cells, shape-checked.
struct RawCsv {
  std::vector<std::string> attributes;
  std::vector<std::string> ids;
  std::vector<std::vector<std::string>> cells;
};

RawCsv ReadRawCsv(std::istream& in) {
  RawCsv raw;
  std::string line;
  bool have_header = false;
  std::size_t line_no = 0;
  std::unordered_set<std::string> seen;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    const auto fields = SplitCsvLine(line);
    if (!have_header) {
      if (fields.front() != "image_id") {
        throw Error(ErrorCode::kMissingColumn,
                    "first header must be 'image_id'");
      }
      for (std::size_t i = 1; i < fields.size(); ++i) {
        if (fields[i].empty()) {
          throw Error(ErrorCode::kMissingColumn,
                      "empty attribute name in header");
        }
        raw.attributes.emplace_back(fields[i]);
      }
      have_header = true;
      continue;
    }
    if (fields.size() != raw.attributes.size() + 1) {
      throw Error(ErrorCode::kMissingColumn,
                  "line " + std::to_string(line_no) + " has " +
                      std::to_string(fields.size()) + " fields, expected " +
                      std::to_string(raw.attributes.size() + 1));
    }
    std::string id(fields.front());
    if (!seen.insert(id).second) {
      throw Error(ErrorCode::kDuplicateImageId, id);
    }
    raw.ids.push_back(std::move(id));
    raw.cells.emplace_back(fields.begin() + 1, fields.end());
  }
  if (!have_header) {
    throw Error(ErrorCode::kMissingColumn, "missing 'image_id' header");
  }
  return raw;
}

std::ifstream OpenText(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kIoFailure, "cannot open " + path.string());
  }
  return in;
}

}  // namespace

LabelTable::LabelTable(std::vector<std::string> image_ids,
                       std::vector<std::string> attributes,
                       std::vector<std::uint8_t> ground_truth)
    : image_ids_(std::move(image_ids)),
      attributes_(std::move(attributes)),
      ground_truth_(std::move(ground_truth)) {
  if (ground_truth_.size() != image_ids_.size() * attributes_.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "ground truth size does not match images x attributes");
  }
  for (const std::uint8_t v : ground_truth_) {
    if (v > 1) {
      throw Error(ErrorCode::kNonBinaryLabel, std::to_string(v));
    }
  }
  std::unordered_set<std::string_view> seen_attr;
  for (const auto& a : attributes_) {
    if (!seen_attr.insert(a).second) {
      throw Error(ErrorCode::kInvalidArgument, "duplicate attribute " + a);
    }
  }
  for (std::size_t i = 0; i < image_ids_.size(); ++i) {
    if (!image_index_.emplace(image_ids_[i], i).second) {
      throw Error(ErrorCode::kDuplicateImageId, image_ids_[i]);
    }
  }
}

bool LabelTable::HasAttribute(std::string_view name) const {
  for (const auto& a : attributes_) {
    if (a == name) return true;
  }
  return false;
}

std::size_t LabelTable::AttributeIndex(std::string_view name) const {
  for (std::size_t i = 0; i < attributes_.size(); ++i) {
    if (attributes_[i] == name) return i;
  }
  throw Error(ErrorCode::kUnknownAttribute, std::string(name));
}

std::optional<std::size_t> LabelTable::ImageIndex(std::string_view id) const {
  const auto it = image_index_.find(std::string(id));
  if (it == image_index_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::uint8_t> LabelTable::Column(std::string_view name) const {
  const std::size_t a = AttributeIndex(name);
  std::vector<std::uint8_t> out(num_images());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = Label(i, a);
  return out;
}

void LabelTable::AttachPredictions(const PredictionTable& predictions) {
  const std::size_t n_attr = predictions.attributes.size();
  std::vector<std::size_t> row_of(num_images(), SIZE_MAX);
  for (std::size_t r = 0; r < predictions.image_ids.size(); ++r) {
    const auto idx = ImageIndex(predictions.image_ids[r]);
    if (!idx) {
      throw Error(ErrorCode::kUnknownImage,
                  "prediction for unlabeled image '" +
                      predictions.image_ids[r] + "'");
    }
    row_of[*idx] = r;
  }
  for (std::size_t i = 0; i < num_images(); ++i) {
    if (row_of[i] == SIZE_MAX) {
      throw Error(ErrorCode::kUnknownImage,
                  "no prediction row for image '" + image_ids_[i] + "'");
    }
  }
  for (std::size_t a = 0; a < n_attr; ++a) {
    std::vector<double> scores(num_images());
    std::vector<std::uint8_t> labels(num_images());
    for (std::size_t i = 0; i < num_images(); ++i) {
      scores[i] = predictions.scores[row_of[i] * n_attr + a];
      labels[i] = scores[i] >= 0.5 ? 1 : 0;
    }
    scores_.insert_or_assign(predictions.attributes[a], std::move(scores));
    predicted_.insert_or_assign(predictions.attributes[a], std::move(labels));
  }
}

bool LabelTable::HasPredictions(std::string_view name) const {
  return scores_.find(name) != scores_.end();
}

const std::vector<double>& LabelTable::PredictionScores(
    std::string_view name) const {
  const auto it = scores_.find(name);
  if (it == scores_.end()) {
    throw Error(ErrorCode::kUnknownAttribute,
                "no predictions for '" + std::string(name) + "'");
  }
  return it->second;
}

const std::vector<std::uint8_t>& LabelTable::PredictedColumn(
    std::string_view name) const {
  const auto it = predicted_.find(name);
  if (it == predicted_.end()) {
    throw Error(ErrorCode::kUnknownAttribute,
                "no predictions for '" + std::string(name) + "'");
  }
  return it->second;
}

std::vector<std::uint8_t> LabelTable::Labels(std::string_view name,
                                             bool use_predictions) const {
  return use_predictions ? PredictedColumn(name) : Column(name);
}

LabelTable LabelTable::Subset(std::span<const std::size_t> rows) const {
  std::vector<std::string> ids;
  std::vector<std::uint8_t> gt;
  ids.reserve(rows.size());
  gt.reserve(rows.size() * attributes_.size());
  for (const std::size_t r : rows) {
    ids.push_back(image_ids_.at(r));
    for (std::size_t a = 0; a < attributes_.size(); ++a) {
      gt.push_back(Label(r, a));
    }
  }
  LabelTable out(std::move(ids), attributes_, std::move(gt));
  for (const auto& [name, scores] : scores_) {
    std::vector<double> s;
    std::vector<std::uint8_t> l;
    const auto& labels = predicted_.at(name);
    for (const std::size_t r : rows) {
      s.push_back(scores[r]);
      l.push_back(labels[r]);
    }
    out.scores_.emplace(name, std::move(s));
    out.predicted_.emplace(name, std::move(l));
  }
  return out;
}

LabelTable ReadLabels(std::istream& in) {
  RawCsv raw = ReadRawCsv(in);
  std::vector<std::uint8_t> gt;
  gt.reserve(raw.ids.size() * raw.attributes.size());
  for (std::size_t r = 0; r < raw.ids.size(); ++r) {
    for (std::size_t a = 0; a < raw.attributes.size(); ++a) {
      const std::string& cell = raw.cells[r][a];
      double v = 0.0;
      if (!ParseDouble(cell, v) || (v != 0.0 && v != 1.0)) {
        throw Error(ErrorCode::kNonBinaryLabel,
                    "'" + cell + "' for image '" + raw.ids[r] +
                        "', attribute '" + raw.attributes[a] + "'");
      }
      gt.push_back(v == 1.0 ? 1 : 0);
    }
  }
  return LabelTable(std::move(raw.ids), std::move(raw.attributes),
                    std::move(gt));
}

LabelTable ReadLabelsFile(const std::filesystem::path& path) {
  auto in = OpenText(path);
  return ReadLabels(in);
}

PredictionTable ReadPredictions(std::istream& in) {
  RawCsv raw = ReadRawCsv(in);
  PredictionTable out;
  out.scores.reserve(raw.ids.size() * raw.attributes.size());
  for (std::size_t r = 0; r < raw.ids.size(); ++r) {
    for (std::size_t a = 0; a < raw.attributes.size(); ++a) {
      double v = 0.0;
      if (!ParseDouble(raw.cells[r][a], v)) {
        throw Error(ErrorCode::kInvalidArgument,
                    "unparsable prediction '" + raw.cells[r][a] + "'");
      }
      out.scores.push_back(v);
    }
  }
  out.image_ids = std::move(raw.ids);
  out.attributes = std::move(raw.attributes);
  return out;
}

PredictionTable ReadPredictionsFile(const std::filesystem::path& path) {
  auto in = OpenText(path);
  return ReadPredictions(in);
}

void WriteLabels(const LabelTable& table, std::ostream& out) {
  out << "image_id";
  for (const auto& a : table.attributes()) out << ',' << a;
  out << '\n';
  for (std::size_t i = 0; i < table.num_images(); ++i) {
    out << table.image_ids()[i];
    for (std::size_t a = 0; a < table.attributes().size(); ++a) {
      out << ',' << static_cast<int>(table.Label(i, a));
    }
    out << '\n';
  }
}

void WritePredictions(const LabelTable& table, std::ostream& out) {
  std::vector<const std::vector<double>*> columns;
  out << "image_id";
  for (const auto& a : table.attributes()) {
    if (!table.HasPredictions(a)) continue;
    out << ',' << a;
    columns.push_back(&table.PredictionScores(a));
  }
  out << '\n';
  char buf[32];
  for (std::size_t i = 0; i < table.num_images(); ++i) {
    out << table.image_ids()[i];
    for (const auto* col : columns) {
      const auto res = std::to_chars(buf, buf + sizeof(buf), (*col)[i]);
      out << ',' << std::string_view(buf, res.ptr - buf);
    }
    out << '\n';
  }
}

}  // namespace aiou
