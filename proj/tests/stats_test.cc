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

#include "aiou/stats.h"

#include <gtest/gtest.h>

#include <cmath>

#include "aiou/labels.h"
#include "expect_error.h"
#include "oracles.h"

namespace aiou {
namespace {

using testing::Rng;
using testing::Uniform;
using testing::UniformInt;

std::vector<std::uint8_t> RandomBits(Rng& rng, std::size_t n, double p) {
  std::vector<std::uint8_t> v(n);
  for (auto& x : v) x = Uniform(rng, 0, 1) < p ? 1 : 0;
  return v;
}

// Scores on a coarse grid so ties are common.
std::vector<double> RandomScores(Rng& rng, std::size_t n) {
  std::vector<double> v(n);
  const int levels = UniformInt(rng, 2, 20);
  for (double& x : v) x = UniformInt(rng, 0, levels) / static_cast<double>(levels);
  return v;
}

TEST(Mcc, Examples) {
  EXPECT_EQ(Mcc(ConfusionCounts{50, 0, 0, 50}), 1.0);
  EXPECT_EQ(Mcc(ConfusionCounts{25, 25, 25, 25}), 0.0);
  EXPECT_NEAR(Mcc(ConfusionCounts{40, 10, 20, 30}), 1000 / std::sqrt(6e6),
              1e-15);
  EXPECT_AIOU_ERROR(Mcc(ConfusionCounts{5, 5, 0, 0}), ErrorCode::kUndefinedMcc);
  EXPECT_AIOU_ERROR(Mcc(ConfusionCounts{5, 0, 5, 0}), ErrorCode::kUndefinedMcc);
}

TEST(Mcc, MatchesPearsonCorrelation) {
  Rng rng(1);
  int checked = 0;
  while (checked < 300) {
    const std::size_t n = UniformInt(rng, 2, 100);
    const auto a = RandomBits(rng, n, Uniform(rng, 0.05, 0.95));
    const auto b = RandomBits(rng, n, Uniform(rng, 0.05, 0.95));
    const auto expected = testing::PearsonBinary(a, b);
    const ConfusionCounts c = CountPairs(a, b);
    EXPECT_EQ(c.total(), static_cast<std::int64_t>(n));
    if (!expected) {
      EXPECT_AIOU_ERROR(Mcc(c), ErrorCode::kUndefinedMcc);
      continue;
    }
    EXPECT_NEAR(Mcc(c), *expected, 1e-9);
    ++checked;
  }
}

TEST(Mcc, ScaleAndSymmetry) {
  Rng rng(2);
  for (int i = 0; i < 200; ++i) {
    const ConfusionCounts c{UniformInt(rng, 1, 50), UniformInt(rng, 1, 50),
                            UniformInt(rng, 1, 50), UniformInt(rng, 1, 50)};
    const double m = Mcc(c);
    const std::int64_t k = UniformInt(rng, 2, 1000);
    EXPECT_NEAR(Mcc(ConfusionCounts{k * c.n11, k * c.n10, k * c.n01, k * c.n00}),
                m, 1e-12);
    // Swap variables: n10 <-> n01.
    EXPECT_NEAR(Mcc(ConfusionCounts{c.n11, c.n01, c.n10, c.n00}), m, 1e-12);
    // Flip both labels: n11 <-> n00, n10 <-> n01.
    EXPECT_NEAR(Mcc(ConfusionCounts{c.n00, c.n01, c.n10, c.n11}), m, 1e-12);
    // Flip one label negates.
    EXPECT_NEAR(Mcc(ConfusionCounts{c.n10, c.n11, c.n00, c.n01}), -m, 1e-12);
  }
}

TEST(MccLabels, SelfAndNegation) {
  const LabelTable t({"a", "b", "c", "d"}, {"X", "Y", "NotX"},
                     {1, 0, 0, 0, 1, 1, 1, 1, 0, 0, 0, 1});
  EXPECT_NEAR(MccLabels(t, "X", "X", false), 1.0, 1e-15);
  EXPECT_NEAR(MccLabels(t, "X", "NotX", false), -1.0, 1e-15);
  EXPECT_AIOU_ERROR(MccLabels(t, "X", "Z", false), ErrorCode::kUnknownAttribute);
  EXPECT_AIOU_ERROR(MccLabels(t, "X", "Y", true), ErrorCode::kUnknownAttribute);
}

TEST(WorstGroupAccuracy, Examples) {
  // Groups (t, p): (0,0) 10 images 9 right, (0,1) 10 images 7 right,
  // (1,0) 20 images 17 right, (1,1) 20 images 19 right.
  std::vector<std::string> ids;
  std::vector<std::uint8_t> gt;
  PredictionTable pred;
  pred.attributes = {"T", "P"};
  auto add = [&](int t, int p, int n, int right) {
    for (int i = 0; i < n; ++i) {
      ids.push_back("i" + std::to_string(ids.size()));
      gt.push_back(t);
      gt.push_back(p);
      pred.image_ids.push_back(ids.back());
      pred.scores.push_back(i < right ? t : 1 - t);
      pred.scores.push_back(p);
    }
  };
  add(0, 0, 10, 9);
  add(0, 1, 10, 7);
  add(1, 0, 20, 17);
  add(1, 1, 20, 19);
  LabelTable t(ids, {"T", "P"}, gt);
  t.AttachPredictions(pred);
  const WorstGroupResult r = WorstGroupAccuracy(t, "T", "P");
  EXPECT_DOUBLE_EQ(r.worst_group_accuracy, 0.7);
  EXPECT_EQ(r.groups[1].n, 10);
  EXPECT_EQ(r.groups[1].correct, 7);

  // (0,1) falls under 20% of 60 images and is excluded.
  const WorstGroupResult excluded = WorstGroupAccuracy(t, "T", "P", 0.2);
  EXPECT_TRUE(excluded.groups[1].excluded);
  EXPECT_TRUE(excluded.groups[0].excluded);
  EXPECT_DOUBLE_EQ(excluded.worst_group_accuracy, 0.85);
  EXPECT_AIOU_ERROR(WorstGroupAccuracy(t, "T", "P", 0.9),
                    ErrorCode::kAllGroupsExcluded);

  const LabelTable no_predictions(ids, {"T", "P"}, gt);
  EXPECT_AIOU_ERROR(WorstGroupAccuracy(no_predictions, "T", "P"),
                    ErrorCode::kUnknownAttribute);
}

TEST(WorstGroupAccuracy, MatchesRecount) {
  Rng rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = UniformInt(rng, 1, 100);
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < n; ++i) ids.push_back("r" + std::to_string(i));
    const auto target = RandomBits(rng, n, Uniform(rng, 0.1, 0.9));
    const auto prot = RandomBits(rng, n, Uniform(rng, 0.1, 0.9));
    std::vector<std::uint8_t> gt;
    PredictionTable pred{ids, {"T"}, {}};
    std::vector<std::uint8_t> predicted(n);
    for (std::size_t i = 0; i < n; ++i) {
      gt.push_back(target[i]);
      gt.push_back(prot[i]);
      pred.scores.push_back(Uniform(rng, 0, 1));
      predicted[i] = pred.scores.back() >= 0.5;
    }
    LabelTable t(ids, {"T", "P"}, gt);
    t.AttachPredictions(pred);
    const double threshold = UniformInt(rng, 0, 30) / 100.0;
    const auto expected =
        testing::NaiveWorstGroupAccuracy(target, prot, predicted, threshold);
    if (!expected) {
      EXPECT_AIOU_ERROR(WorstGroupAccuracy(t, "T", "P", threshold),
                        ErrorCode::kAllGroupsExcluded);
    } else {
      EXPECT_NEAR(WorstGroupAccuracy(t, "T", "P", threshold).worst_group_accuracy,
                  *expected, 1e-9);
    }
  }
}

TEST(AveragePrecision, Examples) {
  const std::vector<double> s = {0.9, 0.8, 0.7};
  const std::vector<std::uint8_t> l = {1, 0, 1};
  EXPECT_NEAR(AveragePrecision(s, l), 0.5 + 0.5 * 2.0 / 3.0, 1e-15);
  EXPECT_EQ(AveragePrecision(s, std::vector<std::uint8_t>{1, 1, 0}), 1.0);
  EXPECT_NEAR(AveragePrecision(std::vector<double>{5, 4, 3, 2, 1},
                               std::vector<std::uint8_t>{0, 0, 0, 0, 1}),
              0.2, 1e-15);
  EXPECT_AIOU_ERROR(AveragePrecision(s, std::vector<std::uint8_t>{0, 0, 0}),
                    ErrorCode::kNoPositives);
}

TEST(AveragePrecision, TiesKeepInputOrder) {
  // Equal scores: the earlier item ranks first.
  EXPECT_EQ(AveragePrecision(std::vector<double>{0.5, 0.5},
                             std::vector<std::uint8_t>{1, 0}),
            1.0);
  EXPECT_EQ(AveragePrecision(std::vector<double>{0.5, 0.5},
                             std::vector<std::uint8_t>{0, 1}),
            0.5);
}

TEST(NormalizedAveragePrecision, Examples) {
  const std::vector<double> s = {0.9, 0.8, 0.7};
  const std::vector<std::uint8_t> l = {1, 0, 1};
  EXPECT_NEAR(NormalizedAveragePrecision(s, l, 2), 0.5 + 0.5 * 2.0 / 3.0,
              1e-15);
  EXPECT_NEAR(NormalizedAveragePrecision(s, l, 4), 0.9, 1e-15);
  EXPECT_AIOU_ERROR(NormalizedAveragePrecision(s, l, 0),
                    ErrorCode::kInvalidArgument);
}

TEST(AveragePrecision, MatchesBruteForce) {
  Rng rng(4);
  int checked = 0;
  while (checked < 300) {
    const std::size_t n = UniformInt(rng, 1, 100);
    const auto scores = RandomScores(rng, n);
    const auto labels = RandomBits(rng, n, Uniform(rng, 0.05, 0.9));
    int positives = 0;
    for (const auto x : labels) positives += x;
    if (positives == 0) continue;
    const double ap = AveragePrecision(scores, labels);
    EXPECT_NEAR(ap, testing::NaiveAveragePrecision(scores, labels), 1e-9);
    const double n_ref = Uniform(rng, 0.5, 200);
    EXPECT_NEAR(NormalizedAveragePrecision(scores, labels, n_ref),
                testing::NaiveNormalizedAveragePrecision(scores, labels, n_ref),
                1e-9);
    EXPECT_NEAR(NormalizedAveragePrecision(scores, labels, positives), ap,
                1e-12);
    ++checked;
  }
}

TEST(DefaultReferenceCount, MeanPositives) {
  const std::vector<std::vector<std::uint8_t>> cols = {{1, 1, 0}, {0, 0, 1},
                                                       {1, 1, 1}};
  EXPECT_DOUBLE_EQ(DefaultReferenceCount(cols), 2.0);
  EXPECT_AIOU_ERROR(
      DefaultReferenceCount(std::span<const std::vector<std::uint8_t>>{}),
      ErrorCode::kEmptySet);
}

TEST(KendallTau, Examples) {
  const std::vector<double> x = {1, 2, 3, 4};
  EXPECT_EQ(KendallTau(x, std::vector<double>{2, 3, 5, 9}), 1.0);
  EXPECT_EQ(KendallTau(x, std::vector<double>{9, 5, 3, 2}), -1.0);
  EXPECT_NEAR(KendallTau(std::vector<double>{1, 2, 3},
                         std::vector<double>{1, 3, 2}),
              1.0 / 3.0, 1e-15);
  EXPECT_AIOU_ERROR(KendallTau(std::vector<double>{1, 1, 1}, std::vector<double>{1, 2, 3}),
                    ErrorCode::kDegenerateInput);
  EXPECT_AIOU_ERROR(KendallTau(std::vector<double>{1}, std::vector<double>{1}),
                    ErrorCode::kDegenerateInput);
  EXPECT_AIOU_ERROR(KendallTau(x, std::vector<double>{1, 2}),
                    ErrorCode::kInvalidArgument);
}

TEST(KendallTau, MatchesPairEnumeration) {
  Rng rng(5);
  int checked = 0;
  while (checked < 300) {
    const std::size_t n = UniformInt(rng, 2, 100);
    const auto x = RandomScores(rng, n);
    const auto y = RandomScores(rng, n);
    const bool flat_x = std::all_of(x.begin(), x.end(),
                                    [&](double v) { return v == x[0]; });
    const bool flat_y = std::all_of(y.begin(), y.end(),
                                    [&](double v) { return v == y[0]; });
    if (flat_x || flat_y) {
      EXPECT_AIOU_ERROR(KendallTau(x, y), ErrorCode::kDegenerateInput);
      continue;
    }
    const double tau = KendallTau(x, y);
    EXPECT_NEAR(tau, testing::NaiveKendallTau(x, y), 1e-9);
    EXPECT_NEAR(KendallTau(y, x), tau, 1e-12);
    ++checked;
  }
}

TEST(KendallTau, NegationWithoutTies) {
  Rng rng(6);
  for (int i = 0; i < 100; ++i) {
    const std::size_t n = UniformInt(rng, 2, 60);
    std::vector<double> x(n);
    std::vector<double> y(n);
    std::vector<double> neg(n);
    for (std::size_t k = 0; k < n; ++k) {
      x[k] = Uniform(rng, 0, 1);
      y[k] = Uniform(rng, 0, 1);
      neg[k] = -y[k];
    }
    EXPECT_NEAR(KendallTau(x, neg), -KendallTau(x, y), 1e-12);
  }
}

}  // namespace
}  // namespace aiou
