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

#ifndef AIOU_PLANNER_H_
#define AIOU_PLANNER_H_

// Subgroup subsampling to a target MCC.
//
// Given the four (target label, protected label) subgroup sizes of a
// training set, find sizes n that keep ||n - n0||_2 minimal subject to
// mcc(n) = target, 0 <= n <= n0 and, optionally, sum(n) = total_cap.
//
// MCC is homogeneous of degree zero in the counts, so the problem is
// solved on proportions (counts / sum(n0)). The MCC constraint goes through
// an augmented Lagrangian whose subproblems are solved by projected
// gradient over the box (or box intersected with the cap hyperplane); a
// final projection step drives the constraint residual to round-off. The
// solve is repeated from the warm start and four deterministic
// perturbations of it, and once on each face with a single emptied cell,
// keeping the best feasible point.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "aiou/labels.h"
#include "aiou/stats.h"

namespace aiou {

// {n11, n10, n01, n00}: first index target label, second protected label.
using SubgroupSizes = std::array<double, 4>;

// Set of MCC values reachable by some n with 0 <= n <= n0.
struct MccInterval {
  bool empty = true;
  double lo = 0.0;
  double hi = 0.0;
  bool lo_closed = false;
  bool hi_closed = false;

  bool Contains(double value) const;
};

MccInterval AttainableMccRange(const ConfusionCounts& original);

struct SubsamplePlan {
  ConfusionCounts original;
  double target_mcc = 0.0;
  std::optional<std::int64_t> total_cap;

  SubgroupSizes planned{};  // before rounding
  double planned_mcc = 0.0;
  double planned_distance = 0.0;

  ConfusionCounts rounded;
  double achieved_mcc = 0.0;
  double l2_distance = 0.0;  // ||rounded - original||_2
  std::int64_t total = 0;    // rounded.total()
};

struct SolveOptions {
  std::optional<SubgroupSizes> warm_start;
  std::optional<std::int64_t> total_cap;
};

// Throws UnattainableTarget when the target lies outside
// AttainableMccRange(original), InfeasibleCap when the cap exceeds the
// original total or no feasible point with that total is found.
SubsamplePlan SolveSubgroups(const ConfusionCounts& original,
                             double target_mcc,
                             const SolveOptions& options = {});

// Integer counts for plan.planned. The MCC accuracy bar is the best
// |mcc - target| over the 16 floor/ceil corners of the plan (restricted to
// sum == total_cap when capped); the result is the integer point within
// [floor - 3, floor + 3] of the plan, inside the box, meeting that bar and
// closest to the original sizes. A plan that is already integral and inside
// the box is kept. Fills rounded, achieved_mcc, l2_distance and total.
SubsamplePlan RoundPlan(const SubsamplePlan& plan);

// Two passes over ascending targets. Pass 1 solves each target warm-started
// from the previous plan (the first from the original sizes). Pass 2
// re-solves every target with total_cap = the smallest pass-1 planned total
// rounded down, so all returned plans have the same total.
std::vector<SubsamplePlan> Sweep(const ConfusionCounts& original,
                                 std::span<const double> targets);

// Subgroup sizes of a labelled set; n11 = target 1 and protected 1.
ConfusionCounts SubgroupCounts(const LabelTable& labels,
                               std::string_view target,
                               std::string_view protected_attribute);

// Keeps the first rounded.nXY images (in table order) of every subgroup.
// Throws InvalidArgument if a subgroup has fewer images than requested.
LabelTable ApplyPlan(const LabelTable& labels, std::string_view target,
                     std::string_view protected_attribute,
                     const ConfusionCounts& rounded);

}  // namespace aiou

#endif  // AIOU_PLANNER_H_
