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

#ifndef AIOU_LABELS_H_
#define AIOU_LABELS_H_

// Per-image binary attribute labels and optional prediction scores.
//
// CSV schema: the first header is exactly "image_id", the remaining
// headers are attribute names. Label cells are 0 or 1; prediction files use
// the same layout with real-valued cells.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace aiou {

// Real-valued cells in label-table layout.
struct PredictionTable {
  std::vector<std::string> image_ids;
  std::vector<std::string> attributes;
  std::vector<double> scores;  // row-major, image x attribute
};

class LabelTable {
 public:
  LabelTable() = default;

  // ground_truth is row-major (image x attribute). Throws DuplicateImageId,
  // NonBinaryLabel or InvalidArgument on shape problems.
  LabelTable(std::vector<std::string> image_ids,
             std::vector<std::string> attributes,
             std::vector<std::uint8_t> ground_truth);

  const std::vector<std::string>& image_ids() const { return image_ids_; }
  const std::vector<std::string>& attributes() const { return attributes_; }
  std::size_t num_images() const { return image_ids_.size(); }

  bool HasAttribute(std::string_view name) const;
  // Throws UnknownAttribute.
  std::size_t AttributeIndex(std::string_view name) const;
  std::optional<std::size_t> ImageIndex(std::string_view id) const;

  std::uint8_t Label(std::size_t image, std::size_t attribute) const {
    return ground_truth_[image * attributes_.size() + attribute];
  }
  std::vector<std::uint8_t> Column(std::string_view name) const;

  // Attaches scores for every attribute in `predictions`. Every image of
  // this table must have a row, and no unknown image may appear (throws
  // UnknownImage). Predicted labels are 1[score >= 0.5].
  void AttachPredictions(const PredictionTable& predictions);

  bool HasPredictions(std::string_view name) const;
  // Throws UnknownAttribute when no predictions exist for `name`.
  const std::vector<double>& PredictionScores(std::string_view name) const;
  const std::vector<std::uint8_t>& PredictedColumn(
      std::string_view name) const;

  // Ground truth (or predicted labels) for one attribute.
  std::vector<std::uint8_t> Labels(std::string_view name,
                                   bool use_predictions) const;

  // Rows in the given order, predictions included.
  LabelTable Subset(std::span<const std::size_t> rows) const;

 private:
  std::vector<std::string> image_ids_;
  std::vector<std::string> attributes_;
  std::vector<std::uint8_t> ground_truth_;
  std::unordered_map<std::string, std::size_t> image_index_;
  std::map<std::string, std::vector<double>, std::less<>> scores_;
  std::map<std::string, std::vector<std::uint8_t>, std::less<>> predicted_;
};

// Throws MissingColumn, NonBinaryLabel, DuplicateImageId.
LabelTable ReadLabels(std::istream& in);
LabelTable ReadLabelsFile(const std::filesystem::path& path);

// Throws MissingColumn, DuplicateImageId, InvalidArgument (unparsable or
// non-finite cell).
PredictionTable ReadPredictions(std::istream& in);
PredictionTable ReadPredictionsFile(const std::filesystem::path& path);

void WriteLabels(const LabelTable& table, std::ostream& out);
// Writes the prediction scores of every attribute that has them.
void WritePredictions(const LabelTable& table, std::ostream& out);

}  // namespace aiou

#endif  // AIOU_LABELS_H_
