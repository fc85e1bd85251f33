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

#include <gtest/gtest.h>

#include <numeric>
#include <sstream>

#include "expect_error.h"
#include "oracles.h"

namespace aiou {
namespace {

LabelTable Labels(const std::string& csv) {
  std::istringstream in(csv);
  return ReadLabels(in);
}

PredictionTable Predictions(const std::string& csv) {
  std::istringstream in(csv);
  return ReadPredictions(in);
}

TEST(ReadLabels, SingleRow) {
  const LabelTable t = Labels("image_id,Male\nimg1,1\n");
  ASSERT_EQ(t.num_images(), 1u);
  EXPECT_EQ(t.attributes(), std::vector<std::string>{"Male"});
  EXPECT_EQ(t.Label(0, 0), 1);
  EXPECT_EQ(*t.ImageIndex("img1"), 0u);
  EXPECT_FALSE(t.ImageIndex("img2").has_value());
}

TEST(ReadLabels, ToleratesCrlfAndMissingTrailingNewline) {
  const LabelTable t = Labels("image_id,A,B\r\nx,0,1\r\ny,1,0");
  ASSERT_EQ(t.num_images(), 2u);
  EXPECT_EQ(t.Column("B"), (std::vector<std::uint8_t>{1, 0}));
}

TEST(ReadLabels, ColumnSumsMatchRecount) {
  testing::Rng rng(9);
  std::ostringstream csv;
  csv << "image_id,a,b,c\n";
  std::array<int, 3> sums{};
  for (int r = 0; r < 5; ++r) {
    csv << "row" << r;
    for (int a = 0; a < 3; ++a) {
      const int v = testing::UniformInt(rng, 0, 1);
      sums[a] += v;
      csv << ',' << v;
    }
    csv << '\n';
  }
  const LabelTable t = Labels(csv.str());
  for (int a = 0; a < 3; ++a) {
    const auto col = t.Column(t.attributes()[a]);
    EXPECT_EQ(std::accumulate(col.begin(), col.end(), 0), sums[a]);
  }
}

TEST(ReadLabels, Errors) {
  EXPECT_AIOU_ERROR(Labels("image_id,Male\nimg1,2\n"),
                    ErrorCode::kNonBinaryLabel);
  EXPECT_AIOU_ERROR(Labels("image_id,Male\nimg1,yes\n"),
                    ErrorCode::kNonBinaryLabel);
  EXPECT_AIOU_ERROR(Labels("id,Male\nimg1,1\n"), ErrorCode::kMissingColumn);
  EXPECT_AIOU_ERROR(Labels(""), ErrorCode::kMissingColumn);
  EXPECT_AIOU_ERROR(Labels("image_id,Male\nimg1\n"), ErrorCode::kMissingColumn);
  EXPECT_AIOU_ERROR(Labels("image_id,Male\nimg1,1\nimg1,0\n"),
                    ErrorCode::kDuplicateImageId);
  EXPECT_AIOU_ERROR(ReadLabelsFile("/nonexistent/labels.csv"),
                    ErrorCode::kIoFailure);
  const LabelTable t = Labels("image_id,Male\nimg1,1\n");
  EXPECT_AIOU_ERROR(t.Column("Smiling"), ErrorCode::kUnknownAttribute);
}

TEST(Predictions, ThresholdAtHalf) {
  LabelTable t = Labels("image_id,A\nx,1\ny,0\nz,1\n");
  EXPECT_FALSE(t.HasPredictions("A"));
  // Rows in a different order than the labels.
  t.AttachPredictions(Predictions("image_id,A\nz,0.49\nx,0.5\ny,0.9\n"));
  EXPECT_TRUE(t.HasPredictions("A"));
  EXPECT_EQ(t.PredictionScores("A"), (std::vector<double>{0.5, 0.9, 0.49}));
  EXPECT_EQ(t.PredictedColumn("A"), (std::vector<std::uint8_t>{1, 1, 0}));
  EXPECT_EQ(t.Labels("A", true), (std::vector<std::uint8_t>{1, 1, 0}));
  EXPECT_EQ(t.Labels("A", false), (std::vector<std::uint8_t>{1, 0, 1}));
}

TEST(Predictions, RowsMustMatchImages) {
  LabelTable t = Labels("image_id,A\nx,1\ny,0\n");
  EXPECT_AIOU_ERROR(t.AttachPredictions(Predictions("image_id,A\nx,0.1\n")),
                    ErrorCode::kUnknownImage);
  EXPECT_AIOU_ERROR(
      t.AttachPredictions(Predictions("image_id,A\nx,0.1\ny,1\nq,0\n")),
      ErrorCode::kUnknownImage);
  EXPECT_AIOU_ERROR(Predictions("image_id,A\nx,abc\n"),
                    ErrorCode::kInvalidArgument);
}

TEST(Labels, WriteReadRoundTrip) {
  LabelTable t = Labels("image_id,A,B\nx,1,0\ny,0,1\nz,1,1\n");
  t.AttachPredictions(
      Predictions("image_id,A,B\nx,0.125,0.3\ny,0.7,0.1\nz,1,0\n"));
  std::ostringstream labels;
  std::ostringstream predictions;
  WriteLabels(t, labels);
  WritePredictions(t, predictions);
  EXPECT_EQ(labels.str(), "image_id,A,B\nx,1,0\ny,0,1\nz,1,1\n");
  LabelTable back = Labels(labels.str());
  back.AttachPredictions(Predictions(predictions.str()));
  EXPECT_EQ(back.PredictionScores("A"), t.PredictionScores("A"));
  EXPECT_EQ(back.PredictionScores("B"), t.PredictionScores("B"));
}

TEST(Labels, Subset) {
  LabelTable t = Labels("image_id,A\nx,1\ny,0\nz,1\n");
  t.AttachPredictions(Predictions("image_id,A\nx,0.1\ny,0.2\nz,0.9\n"));
  const std::vector<std::size_t> rows = {2, 0};
  const LabelTable s = t.Subset(rows);
  EXPECT_EQ(s.image_ids(), (std::vector<std::string>{"z", "x"}));
  EXPECT_EQ(s.Column("A"), (std::vector<std::uint8_t>{1, 1}));
  EXPECT_EQ(s.PredictionScores("A"), (std::vector<double>{0.9, 0.1}));
}

}  // namespace
}  // namespace aiou
