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

#ifndef AIOU_STATS_H_
#define AIOU_STATS_H_

// Label and prediction statistics: Matthews correlation, worst-group
// accuracy, (normalized) average precision and Kendall's tau-b.

#include <array>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "aiou/groups.h"
#include "aiou/labels.h"

namespace aiou {

// 2x2 contingency table of binary variables A and B; nAB.
struct ConfusionCounts {
  std::int64_t n11 = 0;
  std::int64_t n10 = 0;
  std::int64_t n01 = 0;
  std::int64_t n00 = 0;

  std::int64_t total() const { return n11 + n10 + n01 + n00; }
  std::array<double, 4> AsReals() const {
    return {static_cast<double>(n11), static_cast<double>(n10),
            static_cast<double>(n01), static_cast<double>(n00)};
  }
  friend bool operator==(const ConfusionCounts&,
                         const ConfusionCounts&) = default;
};

ConfusionCounts CountPairs(std::span<const std::uint8_t> a,
                           std::span<const std::uint8_t> b);

// (n11 n00 - n10 n01) / sqrt(row and column marginals). Throws UndefinedMcc
// when a marginal is zero. The real-valued overload accepts fractional
// subgroup sizes (used by the subsample planner); cells are {n11, n10, n01,
// n00}.
double Mcc(const ConfusionCounts& c);
double Mcc(const std::array<double, 4>& cells);

// MCC between two attributes of a table, from ground truth or from
// predicted labels. Throws UnknownAttribute or UndefinedMcc.
double MccLabels(const LabelTable& labels, std::string_view a,
                 std::string_view b, bool use_predictions);

struct GroupAccuracy {
  GroupKey key;
  std::int64_t n = 0;
  std::int64_t correct = 0;
  double accuracy = 0.0;
  bool excluded = false;
};

struct WorstGroupResult {
  double worst_group_accuracy = 0.0;
  std::array<GroupAccuracy, 4> groups;  // in kGroupKeys order
};

// Groups images by ground-truth (target, protected) labels and measures how
// often the predicted target label matches ground truth. The worst-group
// accuracy is the minimum over groups that are not excluded. Throws
// AllGroupsExcluded, UnknownAttribute (including missing predictions).
WorstGroupResult WorstGroupAccuracy(
    const LabelTable& labels, std::string_view target,
    std::string_view protected_attribute,
    double threshold = kDefaultExclusionThreshold);

// Step-interpolated AP: items ranked by descending score (ties keep input
// order), AP = sum over positive hits of (1 / n_pos) * precision@k.
// Throws NoPositives.
double AveragePrecision(std::span<const double> scores,
                        std::span<const std::uint8_t> labels);

// AP with precision replaced by R*n_ref / (R*n_ref + FP) at every hit, so
// that classes with different base rates become comparable. Equals
// AveragePrecision when n_ref is the number of positives.
double NormalizedAveragePrecision(std::span<const double> scores,
                                  std::span<const std::uint8_t> labels,
                                  double n_ref);

// Mean positive count over a batch of label columns; the default n_ref.
double DefaultReferenceCount(
    std::span<const std::vector<std::uint8_t>> label_columns);

// Tau-b with the usual tie corrections, O(n log n). Throws DegenerateInput
// for fewer than two items or when x or y is constant.
double KendallTau(std::span<const double> x, std::span<const double> y);

}  // namespace aiou

#endif  // AIOU_STATS_H_
