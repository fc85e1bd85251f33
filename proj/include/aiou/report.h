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

#ifndef AIOU_REPORT_H_
#define AIOU_REPORT_H_

// JSON and CSV forms of score reports and subsample plans, and the
// across-model merge of score reports.

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "aiou/planner.h"
#include "aiou/scoring.h"
#include "json.hpp"

namespace aiou {

using Json = nlohmann::ordered_json;

// Field names mirror ScoreReport. Groups with n = 0 carry null mean/std.
Json ReportToJson(const ScoreReport& report);
// Throws InvalidArgument on a malformed object.
ScoreReport ReportFromJson(const Json& json);

// One row per (target, reference, group); group "all" is the overall row.
void WriteReportCsvHeader(std::ostream& out);
void WriteReportCsvRows(const ScoreReport& report, std::ostream& out);

// {target_mcc, planned[4], rounded[4], achieved_mcc, l2_distance, total}
// with cells ordered n11, n10, n01, n00.
Json PlanToJson(const SubsamplePlan& plan);
void WritePlanCsvHeader(std::ostream& out);
void WritePlanCsvRow(const SubsamplePlan& plan, std::ostream& out);

// Mean and population std across models of the overall score and of every
// group's mean (groups excluded in a model do not contribute).
struct MergedGroup {
  GroupKey key;
  std::int64_t n_models = 0;
  double mean = 0.0;
  double std = 0.0;
};

struct MergedReport {
  ScoreKind kind = ScoreKind::kMask;
  std::string target;
  std::string reference;
  std::int64_t n_models = 0;
  double mean = 0.0;
  double std = 0.0;
  std::vector<MergedGroup> per_group;
};

// Reports are grouped by (kind, target, reference); output is ordered by
// first appearance.
std::vector<MergedReport> MergeReports(std::span<const ScoreReport> reports);
Json MergedToJson(const MergedReport& merged);

// Shortest round-trip decimal form of a double.
std::string FormatDouble(double value);

}  // namespace aiou

#endif  // AIOU_REPORT_H_
