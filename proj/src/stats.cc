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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "aiou/compensated_sum.h"
#include "aiou/error.h"

namespace aiou {
namespace {

void CheckSameLength(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string(what) + ": length mismatch (" +
                    std::to_string(a) + " vs " + std::to_string(b) + ")");
  }
}

// Indices ordered by descending score; equal scores keep input order.
std::vector<std::size_t> RankByScore(std::span<const double> scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return scores[a] > scores[b];
                   });
  return order;
}

std::int64_t CountPositives(std::span<const std::uint8_t> labels) {
  std::int64_t n = 0;
  for (const auto l : labels) n += l != 0;
  if (n == 0) {
    throw Error(ErrorCode::kNoPositives, "average precision needs a positive");
  }
  return n;
}

std::int64_t TiedPairs(std::int64_t run) { return run * (run - 1) / 2; }

// Sorts v ascending, returning the number of strict inversions.
std::int64_t MergeCountInversions(std::vector<double>& v,
                                  std::vector<double>& scratch,
                                  std::size_t lo, std::size_t hi) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  std::int64_t swaps = MergeCountInversions(v, scratch, lo, mid) +
                       MergeCountInversions(v, scratch, mid, hi);
  std::size_t i = lo, j = mid, k = lo;
  while (i < mid && j < hi) {
    if (v[j] < v[i]) {
      swaps += static_cast<std::int64_t>(mid - i);
      scratch[k++] = v[j++];
    } else {
      scratch[k++] = v[i++];
    }
  }
  while (i < mid) scratch[k++] = v[i++];
  while (j < hi) scratch[k++] = v[j++];
  std::copy(scratch.begin() + lo, scratch.begin() + hi, v.begin() + lo);
  return swaps;
}

}  // namespace

ConfusionCounts CountPairs(std::span<const std::uint8_t> a,
                           std::span<const std::uint8_t> b) {
  CheckSameLength(a.size(), b.size(), "CountPairs");
  ConfusionCounts c;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i]) {
      (b[i] ? c.n11 : c.n10)++;
    } else {
      (b[i] ? c.n01 : c.n00)++;
    }
  }
  return c;
}

double Mcc(const ConfusionCounts& c) { return Mcc(c.AsReals()); }

double Mcc(const std::array<double, 4>& cells) {
  const auto [n11, n10, n01, n00] = cells;
  const double a1 = n11 + n10;
  const double a0 = n01 + n00;
  const double b1 = n11 + n01;
  const double b0 = n10 + n00;
  if (!(a1 > 0.0 && a0 > 0.0 && b1 > 0.0 && b0 > 0.0)) {
    throw Error(ErrorCode::kUndefinedMcc,
                "a marginal of the contingency table is zero");
  }
  const double value =
      (n11 * n00 - n10 * n01) / (std::sqrt(a1 * a0) * std::sqrt(b1 * b0));
  return std::clamp(value, -1.0, 1.0);
}

double MccLabels(const LabelTable& labels, std::string_view a,
                 std::string_view b, bool use_predictions) {
  const auto la = labels.Labels(a, use_predictions);
  const auto lb = labels.Labels(b, use_predictions);
  return Mcc(CountPairs(la, lb));
}

WorstGroupResult WorstGroupAccuracy(const LabelTable& labels,
                                    std::string_view target,
                                    std::string_view protected_attribute,
                                    double threshold) {
  const auto truth = labels.Column(target);
  const auto prot = labels.Column(protected_attribute);
  const auto& predicted = labels.PredictedColumn(target);

  WorstGroupResult result;
  for (std::size_t g = 0; g < 4; ++g) result.groups[g].key = kGroupKeys[g];
  for (std::size_t i = 0; i < truth.size(); ++i) {
    GroupAccuracy& g = result.groups[GroupIndex({truth[i], prot[i]})];
    ++g.n;
    g.correct += predicted[i] == truth[i];
  }

  const auto total = static_cast<std::int64_t>(truth.size());
  bool any = false;
  for (GroupAccuracy& g : result.groups) {
    g.excluded = IsExcludedGroup(g.n, total, threshold);
    if (g.n > 0) {
      g.accuracy = static_cast<double>(g.correct) / static_cast<double>(g.n);
    }
    if (!g.excluded) {
      result.worst_group_accuracy =
          any ? std::min(result.worst_group_accuracy, g.accuracy)
              : g.accuracy;
      any = true;
    }
  }
  if (!any) {
    throw Error(ErrorCode::kAllGroupsExcluded,
                "every group of '" + std::string(target) + "' x '" +
                    std::string(protected_attribute) +
                    "' is below the exclusion threshold");
  }
  return result;
}

double AveragePrecision(std::span<const double> scores,
                        std::span<const std::uint8_t> labels) {
  CheckSameLength(scores.size(), labels.size(), "AveragePrecision");
  const std::int64_t positives = CountPositives(labels);
  const auto order = RankByScore(scores);

  CompensatedSum sum;
  std::int64_t hits = 0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (labels[order[k]]) {
      ++hits;
      sum.Add(static_cast<double>(hits) / static_cast<double>(k + 1));
    }
  }
  return sum.Total() / static_cast<double>(positives);
}

double NormalizedAveragePrecision(std::span<const double> scores,
                                  std::span<const std::uint8_t> labels,
                                  double n_ref) {
  CheckSameLength(scores.size(), labels.size(), "NormalizedAveragePrecision");
  if (!(n_ref > 0.0) || !std::isfinite(n_ref)) {
    throw Error(ErrorCode::kInvalidArgument, "n_ref must be positive");
  }
  const auto positives = static_cast<double>(CountPositives(labels));
  const auto order = RankByScore(scores);

  CompensatedSum sum;
  std::int64_t hits = 0;
  std::int64_t false_positives = 0;
  for (const std::size_t i : order) {
    if (!labels[i]) {
      ++false_positives;
      continue;
    }
    ++hits;
    const double recall = static_cast<double>(hits) / positives;
    const double weighted = recall * n_ref;
    sum.Add(weighted / (weighted + static_cast<double>(false_positives)));
  }
  return sum.Total() / positives;
}

double DefaultReferenceCount(
    std::span<const std::vector<std::uint8_t>> label_columns) {
  if (label_columns.empty()) {
    throw Error(ErrorCode::kEmptySet, "no label columns");
  }
  double total = 0.0;
  for (const auto& col : label_columns) {
    total += static_cast<double>(std::count(col.begin(), col.end(), 1));
  }
  return total / static_cast<double>(label_columns.size());
}

double KendallTau(std::span<const double> x, std::span<const double> y) {
  CheckSameLength(x.size(), y.size(), "KendallTau");
  const std::size_t n = x.size();
  if (n < 2) {
    throw Error(ErrorCode::kDegenerateInput, "need at least two items");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (std::isnan(x[i]) || std::isnan(y[i])) {
      throw Error(ErrorCode::kInvalidArgument, "NaN in KendallTau input");
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return x[a] < x[b] || (x[a] == x[b] && y[a] < y[b]);
  });

  // Ties in x and joint ties in (x, y), over runs of the sorted order.
  std::int64_t x_ties = 0;
  std::int64_t joint_ties = 0;
  std::int64_t x_run = 1;
  std::int64_t joint_run = 1;
  for (std::size_t k = 1; k <= n; ++k) {
    const bool same_x = k < n && x[order[k]] == x[order[k - 1]];
    const bool same_xy = same_x && y[order[k]] == y[order[k - 1]];
    if (same_x) {
      ++x_run;
    } else {
      x_ties += TiedPairs(x_run);
      x_run = 1;
    }
    if (same_xy) {
      ++joint_run;
    } else {
      joint_ties += TiedPairs(joint_run);
      joint_run = 1;
    }
  }

  std::vector<double> ys(n);
  for (std::size_t k = 0; k < n; ++k) ys[k] = y[order[k]];
  std::vector<double> scratch(n);
  const std::int64_t discordant = MergeCountInversions(ys, scratch, 0, n);

  std::int64_t y_ties = 0;
  std::int64_t y_run = 1;
  for (std::size_t k = 1; k <= n; ++k) {
    if (k < n && ys[k] == ys[k - 1]) {
      ++y_run;
    } else {
      y_ties += TiedPairs(y_run);
      y_run = 1;
    }
  }

  const std::int64_t pairs = TiedPairs(static_cast<std::int64_t>(n));
  if (x_ties == pairs || y_ties == pairs) {
    throw Error(ErrorCode::kDegenerateInput,
                "Kendall tau is undefined for a constant sequence");
  }
  const std::int64_t numerator =
      pairs - x_ties - y_ties + joint_ties - 2 * discordant;
  const double denominator =
      std::sqrt(static_cast<double>(pairs - x_ties) *
                static_cast<double>(pairs - y_ties));
  return std::clamp(static_cast<double>(numerator) / denominator, -1.0, 1.0);
}

}  // namespace aiou
