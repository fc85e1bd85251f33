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

#include "aiou/scoring.h"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>

#include "aiou/labels.h"
#include "expect_error.h"
#include "oracles.h"

namespace aiou {
namespace {

using testing::Rng;
using testing::Uniform;
using testing::UniformInt;

MapSet One(const std::string& id, Map m) {
  MapSet s;
  s.emplace(id, std::move(m));
  return s;
}

TEST(MaskScore, Examples) {
  // Mask at twice the attention resolution, proportional after downsampling.
  const Map attention = Map::FromRows({{1, 0}, {0, 0}});
  const Map mask = Map::FromRows(
      {{1, 1, 0, 0}, {1, 1, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}});
  ScoreReport r = MaskScore(One("i", attention), One("i", mask), "T", "f");
  EXPECT_EQ(r.kind, ScoreKind::kMask);
  EXPECT_NEAR(r.overall_mean, 1.0, 1e-12);
  EXPECT_EQ(r.overall_std, 0.0);

  r = MaskScore(One("i", attention),
                One("i", Map::FromRows({{0, 0}, {0, 1}})), "T", "f");
  EXPECT_EQ(r.overall_mean, 0.0);

  // Per-image values 0.8 and 0.6.
  MapSet att;
  MapSet masks;
  att.emplace("a", Map::FromRows({{1, 0}, {0, 0}}));
  masks.emplace("a", Map::FromRows({{0.5, 0.5}, {0, 0}}));
  att.emplace("b", Map::FromRows({{1, 2}}));
  masks.emplace("b", Map::FromRows({{1, 0}}));
  r = MaskScore(att, masks, "T", "f");
  EXPECT_NEAR(r.overall_mean, 0.7, 1e-12);
  EXPECT_NEAR(r.overall_std, 0.1, 1e-12);
  EXPECT_EQ(r.n_images, 2);
  EXPECT_EQ(r.n_scored, 2);
}

TEST(MaskScore, Errors) {
  const Map attention = Map::FromRows({{1, 0}, {0, 0}});
  EXPECT_AIOU_ERROR(MaskScore(One("i", attention),
                              One("i", Map::FromRows({{2, 0}, {0, 0}})), "T",
                              "f"),
                    ErrorCode::kInvalidMask);
  EXPECT_AIOU_ERROR(
      MaskScore(One("i", attention), One("j", attention), "T", "f"),
      ErrorCode::kNoMatchedImages);
  EXPECT_AIOU_ERROR(
      MaskScore(One("i", attention), One("i", Map::FromRows({{1}})), "T", "f"),
      ErrorCode::kDimensionMismatch);
}

TEST(MaskScore, DegeneratePolicies) {
  MapSet att;
  MapSet masks;
  att.emplace("a", Map::FromRows({{1, 0}}));
  masks.emplace("a", Map::FromRows({{1, 0}}));
  att.emplace("b", Map::FromRows({{1, 0}}));
  masks.emplace("b", Map::FromRows({{0, 0}}));
  att.emplace("c", Map::FromRows({{0, 0}}));
  masks.emplace("c", Map::FromRows({{1, 1}}));
  att.emplace("orphan", Map::FromRows({{1, 1}}));

  const ScoreReport skip = MaskScore(att, masks, "T", "f");
  EXPECT_EQ(skip.n_images, 3);
  EXPECT_EQ(skip.n_scored, 1);
  EXPECT_EQ(skip.skipped_degenerate, 2);
  EXPECT_EQ(skip.zeroed_degenerate, 0);
  EXPECT_EQ(skip.unmatched, 1);
  EXPECT_EQ(skip.overall_mean, 1.0);

  const ScoreReport zero =
      MaskScore(att, masks, "T", "f", {DegeneratePolicy::kZero, {}});
  EXPECT_EQ(zero.n_scored, 3);
  EXPECT_EQ(zero.skipped_degenerate, 0);
  EXPECT_EQ(zero.zeroed_degenerate, 2);
  EXPECT_NEAR(zero.overall_mean, 1.0 / 3.0, 1e-15);

  EXPECT_AIOU_ERROR(MaskScore(One("b", Map::FromRows({{1, 0}})),
                              One("b", Map::FromRows({{0, 0}})), "T", "f"),
                    ErrorCode::kNoMatchedImages);
}

TEST(HeatmapScore, SelfAndDisjoint) {
  Rng rng(1);
  MapSet a;
  MapSet b;
  for (int i = 0; i < 20; ++i) {
    const auto [x, y] = testing::RandomDisjointMaps(rng, 4, 5);
    a.emplace("i" + std::to_string(i), x);
    b.emplace("i" + std::to_string(i), y);
  }
  EXPECT_NEAR(HeatmapScore(a, a, "Male", "Male").overall_mean, 1.0, 1e-12);
  EXPECT_EQ(HeatmapScore(a, b, "T", "Male").overall_mean, 0.0);
  EXPECT_EQ(HeatmapScore(a, b, "T", "Male").kind, ScoreKind::kHeatmap);
  EXPECT_AIOU_ERROR(
      HeatmapScore(One("i0", Map::FromRows({{1}})), a, "T", "Male"),
      ErrorCode::kDimensionMismatch);
}

TEST(HeatmapScore, MatchesPerImageMean) {
  Rng rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    MapSet a;
    MapSet b;
    const int n = UniformInt(rng, 1, 100);
    std::vector<double> expected;
    for (int i = 0; i < n; ++i) {
      const std::size_t h = UniformInt(rng, 1, 8);
      const std::size_t w = UniformInt(rng, 1, 8);
      const Map x = testing::RandomMap(rng, h, w, 0.5);
      const Map y = testing::RandomMap(rng, h, w, 0.5);
      a.emplace("img" + std::to_string(i), x);
      b.emplace("img" + std::to_string(i), y);
      expected.push_back(testing::NaiveAttentionIoU(x.values(), y.values()));
    }
    long double mean = 0;
    for (const double v : expected) mean += v;
    mean /= n;
    long double var = 0;
    for (const double v : expected) var += (v - mean) * (v - mean);
    const ScoreReport r = HeatmapScore(a, b, "T", "P");
    EXPECT_NEAR(r.overall_mean, static_cast<double>(mean), 1e-12);
    EXPECT_NEAR(r.overall_std, std::sqrt(static_cast<double>(var / n)), 1e-12);

    // Per-image positive rescaling changes nothing.
    MapSet scaled;
    for (const auto& [id, m] : a) scaled.emplace(id, m.Scaled(Uniform(rng, 0.1, 50)));
    EXPECT_NEAR(HeatmapScore(scaled, b, "T", "P").overall_mean, r.overall_mean,
                1e-12);
  }
}

// Labels for ids i0..i(n-1) with the given (t, p) per image.
LabelTable GroupLabels(const std::vector<std::pair<int, int>>& groups) {
  std::vector<std::string> ids;
  std::vector<std::uint8_t> gt;
  for (std::size_t i = 0; i < groups.size(); ++i) {
    ids.push_back("i" + std::to_string(i));
    gt.push_back(groups[i].first);
    gt.push_back(groups[i].second);
  }
  return LabelTable(ids, {"T", "P"}, gt);
}

TEST(Stratify, SingleGroup) {
  const LabelTable labels = GroupLabels({{1, 0}, {1, 0}, {1, 0}});
  MapSet a;
  MapSet b;
  Rng rng(3);
  for (int i = 0; i < 3; ++i) {
    a.emplace("i" + std::to_string(i), testing::RandomMap(rng, 3, 3));
    b.emplace("i" + std::to_string(i), testing::RandomMap(rng, 3, 3));
  }
  const ScoreReport r =
      HeatmapScore(a, b, "T", "P", {DegeneratePolicy::kSkip,
                                    Stratification{&labels, "P", 0.01, false}});
  ASSERT_EQ(r.per_group.size(), 4u);
  for (const GroupScore& g : r.per_group) {
    if (g.key == GroupKey{1, 0}) {
      EXPECT_EQ(g.n, 3);
      EXPECT_EQ(g.mean, r.overall_mean);
      EXPECT_FALSE(g.excluded);
    } else {
      EXPECT_EQ(g.n, 0);
      EXPECT_TRUE(g.excluded);
    }
  }
}

TEST(Stratify, ThresholdIsStrict) {
  // Groups of 60, 25, 14, 1 out of 100; the size-1 group sits exactly at 1%.
  std::vector<std::pair<int, int>> groups;
  for (int i = 0; i < 100; ++i) {
    groups.push_back(i < 60 ? std::pair{0, 0}
                     : i < 85 ? std::pair{0, 1}
                     : i < 99 ? std::pair{1, 0}
                              : std::pair{1, 1});
  }
  const LabelTable labels = GroupLabels(groups);
  PerImageScores scores;
  for (int i = 0; i < 100; ++i) {
    scores.images.push_back({"i" + std::to_string(i), 0.5, false});
  }
  auto r = Stratify(scores, labels, "T", "P", 0.01, false);
  EXPECT_EQ(r[3].n, 1);
  EXPECT_FALSE(r[3].excluded);
  r = Stratify(scores, labels, "T", "P", 0.02, false);
  EXPECT_TRUE(r[3].excluded);
  EXPECT_FALSE(r[2].excluded);
  r = Stratify(scores, labels, "T", "P", 0.07, false);
  EXPECT_FALSE(r[2].excluded);  // 14 vs 7
  r = Stratify(scores, labels, "T", "P", 0.15, false);
  EXPECT_TRUE(r[2].excluded);
}

TEST(Stratify, ConstantGroupScores) {
  Rng rng(4);
  std::vector<std::pair<int, int>> groups;
  PerImageScores scores;
  const std::array<double, 4> value = {0.1, 0.4, 0.7, 0.9};
  for (int i = 0; i < 80; ++i) {
    const int t = UniformInt(rng, 0, 1);
    const int p = UniformInt(rng, 0, 1);
    groups.emplace_back(t, p);
    scores.images.push_back(
        {"i" + std::to_string(i), value[2 * t + p], false});
  }
  // One skipped image still counts toward the exclusion total.
  scores.images.push_back({"i80", std::nullopt, true});
  groups.emplace_back(0, 0);
  const LabelTable labels = GroupLabels(groups);
  const auto r = Stratify(scores, labels, "T", "P", 0.0, false);
  std::int64_t n = 0;
  for (std::size_t g = 0; g < 4; ++g) {
    EXPECT_EQ(r[g].key, kGroupKeys[g]);
    if (r[g].n > 0) {
      EXPECT_NEAR(r[g].mean, value[g], 1e-15);
      EXPECT_EQ(r[g].std, 0.0);
    }
    n += r[g].n;
  }
  EXPECT_EQ(n + 1, 81);
}

TEST(Stratify, PredictedLabels) {
  LabelTable labels = GroupLabels({{0, 0}, {1, 1}});
  labels.AttachPredictions({{"i0", "i1"}, {"T", "P"}, {0.9, 0.9, 0.1, 0.1}});
  PerImageScores scores;
  scores.images = {{"i0", 0.25, false}, {"i1", 0.75, false}};
  const auto truth = Stratify(scores, labels, "T", "P", 0.0, false);
  const auto pred = Stratify(scores, labels, "T", "P", 0.0, true);
  EXPECT_EQ(truth[0].mean, 0.25);
  EXPECT_EQ(truth[3].mean, 0.75);
  EXPECT_EQ(pred[0].mean, 0.75);
  EXPECT_EQ(pred[3].mean, 0.25);
}

TEST(Stratify, Errors) {
  const LabelTable labels = GroupLabels({{0, 0}});
  PerImageScores scores;
  scores.images = {{"unknown", 0.5, false}};
  EXPECT_AIOU_ERROR(Stratify(scores, labels, "T", "P", 0.01, false),
                    ErrorCode::kUnknownImage);
  scores.images = {{"i0", 0.5, false}};
  EXPECT_AIOU_ERROR(Stratify(scores, labels, "T", "Q", 0.01, false),
                    ErrorCode::kUnknownAttribute);
}

TEST(Scoring, IndependentOfWorkerCount) {
  Rng rng(6);
  MapSet a;
  MapSet b;
  for (int i = 0; i < 300; ++i) {
    a.emplace("i" + std::to_string(i), testing::RandomMap(rng, 7, 7, 0.3));
    b.emplace("i" + std::to_string(i), testing::RandomMap(rng, 7, 7, 0.3));
  }
  ::setenv("AIOU_THREADS", "1", 1);
  const ScoreReport one = HeatmapScore(a, b, "T", "P");
  ::setenv("AIOU_THREADS", "4", 1);
  const ScoreReport four = HeatmapScore(a, b, "T", "P");
  ::unsetenv("AIOU_THREADS");
  EXPECT_EQ(one.overall_mean, four.overall_mean);
  EXPECT_EQ(one.overall_std, four.overall_std);
}

TEST(AverageMap, Examples) {
  const Map m = Map::FromRows({{1, 3}, {0, 2}});
  EXPECT_EQ(AverageMap(std::vector<Map>{m}),
            Map::FromRows({{1.0 / 3.0, 1}, {0, 2.0 / 3.0}}));
  EXPECT_EQ(AverageMap(std::vector<Map>{m, m.Scaled(5)}),
            AverageMap(std::vector<Map>{m}));
  EXPECT_EQ(AverageMap(std::vector<Map>{Map::FromRows({{1, 0}}),
                                        Map::FromRows({{0, 4}})}),
            Map::FromRows({{1, 1}}));
  EXPECT_AIOU_ERROR(AverageMap(std::vector<Map>{}), ErrorCode::kEmptySet);
  EXPECT_AIOU_ERROR(AverageMap(std::vector<Map>{m, Map::FromRows({{1}})}),
                    ErrorCode::kDimensionMismatch);
  EXPECT_AIOU_ERROR(AverageMap(std::vector<Map>{Map(2, 2)}),
                    ErrorCode::kEmptySet);
}

}  // namespace
}  // namespace aiou
