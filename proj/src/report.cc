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

#include "aiou/report.h"

#include <charconv>
#include <ostream>

#include "aiou/error.h"

namespace aiou {
namespace {

Json Cells(const std::array<double, 4>& v) {
  return Json::array({v[0], v[1], v[2], v[3]});
}

Json Cells(const ConfusionCounts& c) {
  return Json::array({c.n11, c.n10, c.n01, c.n00});
}

Json NullableNumber(bool present, double value) {
  return present ? Json(value) : Json(nullptr);
}

}  // namespace

std::string FormatDouble(double value) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

Json ReportToJson(const ScoreReport& r) {
  Json j;
  j["score_kind"] = ScoreKindName(r.kind);
  j["target"] = r.target;
  j["reference"] = r.reference;
  j["overall_mean"] = r.overall_mean;
  j["overall_std"] = r.overall_std;
  j["n_images"] = r.n_images;
  j["n_scored"] = r.n_scored;
  j["skipped_degenerate"] = r.skipped_degenerate;
  j["zeroed_degenerate"] = r.zeroed_degenerate;
  j["unmatched"] = r.unmatched;
  j["degenerate_policy"] = DegeneratePolicyName(r.degenerate_policy);
  if (r.per_group.empty()) {
    j["stratification"] = nullptr;
  } else {
    j["stratification"] = {
        {"protected", r.protected_attribute},
        {"threshold", r.exclusion_threshold},
        {"labels", r.stratified_by_predictions ? "predicted" : "ground_truth"}};
  }
  Json groups = Json::array();
  for (const GroupScore& g : r.per_group) {
    groups.push_back({{"target_label", g.key.target_label},
                      {"protected_label", g.key.protected_label},
                      {"n", g.n},
                      {"mean", NullableNumber(g.n > 0, g.mean)},
                      {"std", NullableNumber(g.n > 0, g.std)},
                      {"excluded", g.excluded}});
  }
  j["per_group"] = std::move(groups);
  return j;
}

ScoreReport ReportFromJson(const Json& j) {
  try {
    ScoreReport r;
    const std::string kind = j.at("score_kind").get<std::string>();
    if (kind == "Mask") {
      r.kind = ScoreKind::kMask;
    } else if (kind == "Heatmap") {
      r.kind = ScoreKind::kHeatmap;
    } else {
      throw Error(ErrorCode::kInvalidArgument, "unknown score_kind " + kind);
    }
    r.target = j.at("target").get<std::string>();
    r.reference = j.at("reference").get<std::string>();
    r.overall_mean = j.at("overall_mean").get<double>();
    r.overall_std = j.at("overall_std").get<double>();
    r.n_images = j.value("n_images", std::int64_t{0});
    r.n_scored = j.value("n_scored", std::int64_t{0});
    r.skipped_degenerate = j.value("skipped_degenerate", std::int64_t{0});
    r.zeroed_degenerate = j.value("zeroed_degenerate", std::int64_t{0});
    r.unmatched = j.value("unmatched", std::int64_t{0});
    r.degenerate_policy = j.value("degenerate_policy", std::string("skip")) ==
                                  "zero"
                              ? DegeneratePolicy::kZero
                              : DegeneratePolicy::kSkip;
    if (const auto& s = j.at("stratification"); !s.is_null()) {
      r.protected_attribute = s.at("protected").get<std::string>();
      r.exclusion_threshold = s.at("threshold").get<double>();
      r.stratified_by_predictions = s.at("labels") == "predicted";
    }
    for (const auto& g : j.at("per_group")) {
      GroupScore gs;
      gs.key = {g.at("target_label").get<std::uint8_t>(),
                g.at("protected_label").get<std::uint8_t>()};
      gs.n = g.at("n").get<std::int64_t>();
      gs.mean = g.at("mean").is_null() ? 0.0 : g.at("mean").get<double>();
      gs.std = g.at("std").is_null() ? 0.0 : g.at("std").get<double>();
      gs.excluded = g.at("excluded").get<bool>();
      r.per_group.push_back(gs);
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string("malformed score report: ") + e.what());
  }
}

void WriteReportCsvHeader(std::ostream& out) {
  out << "score_kind,target,reference,group,n,mean,std,excluded\n";
}

void WriteReportCsvRows(const ScoreReport& r, std::ostream& out) {
  const auto prefix = std::string(ScoreKindName(r.kind)) + "," + r.target +
                      "," + r.reference + ",";
  out << prefix << "all," << r.n_scored << ',' << FormatDouble(r.overall_mean)
      << ',' << FormatDouble(r.overall_std) << ",0\n";
  for (const GroupScore& g : r.per_group) {
    out << prefix << GroupName(g.key) << ',' << g.n << ',';
    if (g.n > 0) {
      out << FormatDouble(g.mean) << ',' << FormatDouble(g.std);
    } else {
      out << ',';
    }
    out << ',' << (g.excluded ? 1 : 0) << '\n';
  }
}

Json PlanToJson(const SubsamplePlan& p) {
  Json j;
  j["target_mcc"] = p.target_mcc;
  j["planned"] = Cells(p.planned);
  j["rounded"] = Cells(p.rounded);
  j["achieved_mcc"] = p.achieved_mcc;
  j["l2_distance"] = p.l2_distance;
  j["total"] = p.total;
  return j;
}

void WritePlanCsvHeader(std::ostream& out) {
  out << "target_mcc,planned_n11,planned_n10,planned_n01,planned_n00,"
         "rounded_n11,rounded_n10,rounded_n01,rounded_n00,achieved_mcc,"
         "l2_distance,total\n";
}

void WritePlanCsvRow(const SubsamplePlan& p, std::ostream& out) {
  out << FormatDouble(p.target_mcc);
  for (const double v : p.planned) out << ',' << FormatDouble(v);
  out << ',' << p.rounded.n11 << ',' << p.rounded.n10 << ',' << p.rounded.n01
      << ',' << p.rounded.n00 << ',' << FormatDouble(p.achieved_mcc) << ','
      << FormatDouble(p.l2_distance) << ',' << p.total << '\n';
}

std::vector<MergedReport> MergeReports(std::span<const ScoreReport> reports) {
  struct Bucket {
    const ScoreReport* first;
    std::vector<double> overall;
    std::array<std::vector<double>, 4> groups;
  };
  std::vector<Bucket> buckets;
  for (const ScoreReport& r : reports) {
    auto it = std::find_if(buckets.begin(), buckets.end(), [&](const Bucket& b) {
      return b.first->kind == r.kind && b.first->target == r.target &&
             b.first->reference == r.reference;
    });
    if (it == buckets.end()) {
      buckets.push_back({&r, {}, {}});
      it = std::prev(buckets.end());
    }
    it->overall.push_back(r.overall_mean);
    for (const GroupScore& g : r.per_group) {
      if (!g.excluded) it->groups[GroupIndex(g.key)].push_back(g.mean);
    }
  }

  std::vector<MergedReport> out;
  for (const Bucket& b : buckets) {
    MergedReport m;
    m.kind = b.first->kind;
    m.target = b.first->target;
    m.reference = b.first->reference;
    const Moments overall = ComputeMoments(b.overall);
    m.n_models = overall.n;
    m.mean = overall.mean;
    m.std = overall.std;
    for (std::size_t g = 0; g < 4; ++g) {
      if (b.groups[g].empty()) continue;
      const Moments gm = ComputeMoments(b.groups[g]);
      m.per_group.push_back({kGroupKeys[g], gm.n, gm.mean, gm.std});
    }
    out.push_back(std::move(m));
  }
  return out;
}

Json MergedToJson(const MergedReport& m) {
  Json j;
  j["score_kind"] = ScoreKindName(m.kind);
  j["target"] = m.target;
  j["reference"] = m.reference;
  j["n_models"] = m.n_models;
  j["mean"] = m.mean;
  j["std"] = m.std;
  Json groups = Json::array();
  for (const MergedGroup& g : m.per_group) {
    groups.push_back({{"target_label", g.key.target_label},
                      {"protected_label", g.key.protected_label},
                      {"n_models", g.n_models},
                      {"mean", g.mean},
                      {"std", g.std}});
  }
  j["per_group"] = std::move(groups);
  return j;
}

}  // namespace aiou
