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

// Command-line front end: aiou <command> [flags].

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "aiou/container.h"
#include "aiou/error.h"
#include "aiou/labels.h"
#include "aiou/planner.h"
#include "aiou/report.h"
#include "aiou/scoring.h"
#include "aiou/stats.h"
#include "aiou/synthetic.h"
#include "json.hpp"

namespace aiou {
namespace {

constexpr int kExitOk = 0;
constexpr int kExitWarning = 1;
constexpr int kExitError = 2;

struct RunConfig {
  std::string command;
  std::string maps;
  std::string masks;
  std::string labels;
  std::string predictions;
  std::vector<std::string> target;
  std::vector<std::string> reference;
  std::string protected_attribute;
  double threshold = kDefaultExclusionThreshold;
  std::vector<double> mcc_targets;
  std::uint64_t seed = 0;
  std::string out;
  std::string format = "json";
  std::string degenerate = "skip";
  bool use_predictions = false;

  // synth
  double leakage = 0.0;
  std::size_t images = 200;
  std::size_t height = 7;
  std::size_t width = 7;
  std::size_t mask_scale = 4;

  // plan
  std::string subsets;

  // metrics
  double n_ref = 0.0;

  // merge, trend
  std::vector<std::string> inputs;
  std::vector<double> x;
};

Json OptionalString(const std::string& s) {
  return s.empty() ? Json(nullptr) : Json(s);
}

Json ConfigToJson(const RunConfig& c) {
  Json j;
  j["command"] = c.command;
  j["maps"] = OptionalString(c.maps);
  j["masks"] = OptionalString(c.masks);
  j["labels"] = OptionalString(c.labels);
  j["predictions"] = OptionalString(c.predictions);
  j["target"] = c.target;
  j["reference"] = c.reference;
  j["protected"] = OptionalString(c.protected_attribute);
  j["threshold"] = c.threshold;
  j["mcc_targets"] = c.mcc_targets;
  j["seed"] = c.seed;
  j["out"] = OptionalString(c.out);
  j["format"] = c.format;
  j["degenerate"] = c.degenerate;
  j["use_predictions"] = c.use_predictions;
  if (c.command == "synth") {
    j["leakage"] = c.leakage;
    j["images"] = c.images;
    j["height"] = c.height;
    j["width"] = c.width;
    j["mask_scale"] = c.mask_scale;
  }
  if (c.command == "plan") j["subsets"] = OptionalString(c.subsets);
  if (c.command == "metrics") {
    j["n_ref"] = c.n_ref > 0 ? Json(c.n_ref) : Json(nullptr);
  }
  if (c.command == "merge" || c.command == "trend") j["inputs"] = c.inputs;
  if (c.command == "trend") j["x"] = c.x;
  return j;
}

void Emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoFailure, "cannot open " + path);
  out << text;
  if (!out) throw Error(ErrorCode::kIoFailure, "write failed on " + path);
}

std::string Dump(const Json& j) { return j.dump(2) + "\n"; }

void Require(bool condition, const std::string& message) {
  if (!condition) throw Error(ErrorCode::kInvalidArgument, message);
}

DegeneratePolicy ParsePolicy(const std::string& name) {
  if (name == "skip") return DegeneratePolicy::kSkip;
  if (name == "zero") return DegeneratePolicy::kZero;
  throw Error(ErrorCode::kInvalidArgument, "unknown degenerate policy " + name);
}

LabelTable LoadLabels(const RunConfig& c) {
  LabelTable table = ReadLabelsFile(c.labels);
  if (!c.predictions.empty()) {
    table.AttachPredictions(ReadPredictionsFile(c.predictions));
  }
  return table;
}

MapSet LoadSelection(const MapContainer& container, std::string_view attribute,
                     MapKind kind, std::string_view what) {
  MapSet maps = SelectMaps(container, attribute, kind);
  if (maps.empty()) {
    throw Error(ErrorCode::kUnknownAttribute,
                "no " + std::string(what) + " maps for " +
                    std::string(attribute));
  }
  return maps;
}

ScoreOptions MakeScoreOptions(const RunConfig& c, const LabelTable* labels) {
  ScoreOptions options;
  options.degenerate = ParsePolicy(c.degenerate);
  if (!c.protected_attribute.empty()) {
    Require(labels != nullptr, "--protected needs --labels");
    Require(c.threshold >= 0.0 && c.threshold <= 1.0,
            "--threshold must lie in [0, 1]");
    labels->AttributeIndex(c.protected_attribute);
    options.stratification = Stratification{
        labels, c.protected_attribute, c.threshold, c.use_predictions};
  }
  return options;
}

bool AllExcluded(const ScoreReport& report) {
  if (report.per_group.empty()) return false;
  return std::all_of(report.per_group.begin(), report.per_group.end(),
                     [](const GroupScore& g) { return g.excluded; });
}

int WarnAllExcluded(const ScoreReport& r) {
  std::cerr << "warning: every group excluded for " << r.target << " vs "
            << r.reference << "\n";
  return kExitWarning;
}

int ScoreMask(const RunConfig& c) {
  Require(!c.target.empty() && c.target.size() == 1,
          "score-mask takes one --target");
  Require(!c.reference.empty(), "score-mask needs --reference");
  Require(!c.use_predictions || !c.predictions.empty(),
          "--use-predictions needs --predictions");
  std::optional<LabelTable> labels;
  if (!c.labels.empty()) labels = LoadLabels(c);
  const ScoreOptions options =
      MakeScoreOptions(c, labels ? &*labels : nullptr);

  const MapContainer attention = ReadContainerFile(c.maps);
  const MapContainer masks = ReadContainerFile(c.masks);
  const std::string& target = c.target.front();
  const MapSet target_maps =
      LoadSelection(attention, target, MapKind::kAttention, "attention");

  int exit_code = kExitOk;
  std::vector<ScoreReport> reports;
  for (const std::string& feature : c.reference) {
    const MapSet feature_masks =
        LoadSelection(masks, feature, MapKind::kMask, "mask");
    reports.push_back(
        MaskScore(target_maps, feature_masks, target, feature, options));
    if (AllExcluded(reports.back())) exit_code = WarnAllExcluded(reports.back());
  }

  if (c.format == "csv") {
    std::ostringstream out;
    WriteReportCsvHeader(out);
    for (const ScoreReport& r : reports) WriteReportCsvRows(r, out);
    Emit(out.str(), c.out);
    return exit_code;
  }

  Json j;
  j["config"] = ConfigToJson(c);
  j["reports"] = Json::array();
  for (const ScoreReport& r : reports) j["reports"].push_back(ReportToJson(r));
  if (labels && !c.predictions.empty() && !c.protected_attribute.empty()) {
    try {
      const WorstGroupResult wga =
          WorstGroupAccuracy(*labels, target, c.protected_attribute,
                             c.threshold);
      Json groups = Json::array();
      for (const GroupAccuracy& g : wga.groups) {
        groups.push_back({{"target_label", g.key.target_label},
                          {"protected_label", g.key.protected_label},
                          {"n", g.n},
                          {"correct", g.correct},
                          {"accuracy", g.n > 0 ? Json(g.accuracy)
                                               : Json(nullptr)},
                          {"excluded", g.excluded}});
      }
      j["worst_group_accuracy"] = {{"value", wga.worst_group_accuracy},
                                   {"groups", std::move(groups)}};
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kAllGroupsExcluded) throw;
      std::cerr << "warning: " << e.what() << "\n";
      j["worst_group_accuracy"] = nullptr;
      exit_code = kExitWarning;
    }
  }
  Emit(Dump(j), c.out);
  return exit_code;
}

int ScoreHeatmap(const RunConfig& c) {
  Require(!c.target.empty(), "score-heatmap needs --target");
  Require(c.reference.size() <= 1, "score-heatmap takes one --reference");
  const std::string reference =
      c.reference.empty() ? c.protected_attribute : c.reference.front();
  Require(!reference.empty(), "score-heatmap needs --reference or --protected");
  Require(!c.use_predictions || !c.predictions.empty(),
          "--use-predictions needs --predictions");

  std::optional<LabelTable> labels;
  if (!c.labels.empty()) labels = LoadLabels(c);
  const ScoreOptions options =
      MakeScoreOptions(c, labels ? &*labels : nullptr);

  const MapContainer attention = ReadContainerFile(c.maps);
  const MapSet reference_maps =
      LoadSelection(attention, reference, MapKind::kAttention, "attention");

  int exit_code = kExitOk;
  std::vector<ScoreReport> reports;
  Json scatter = Json::array();
  for (const std::string& target : c.target) {
    const MapSet target_maps =
        LoadSelection(attention, target, MapKind::kAttention, "attention");
    reports.push_back(HeatmapScore(target_maps, reference_maps, target,
                                   reference, options));
    const ScoreReport& r = reports.back();
    if (AllExcluded(r)) exit_code = WarnAllExcluded(r);

    Json row;
    row["target"] = target;
    row["reference"] = reference;
    row["n"] = r.n_scored;
    row["mean"] = r.overall_mean;
    row["std"] = r.overall_std;
    row["abs_mcc"] = nullptr;
    row["mcc_source"] = nullptr;
    if (labels && labels->HasAttribute(target) &&
        labels->HasAttribute(reference)) {
      const bool predicted = labels->HasPredictions(target) &&
                             labels->HasPredictions(reference);
      try {
        row["abs_mcc"] =
            std::abs(MccLabels(*labels, target, reference, predicted));
        row["mcc_source"] = predicted ? "predicted" : "ground_truth";
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kUndefinedMcc) throw;
      }
    }
    scatter.push_back(std::move(row));
  }

  if (c.format == "csv") {
    std::ostringstream out;
    out << "target,reference,n,mean,std,abs_mcc,mcc_source\n";
    for (const Json& row : scatter) {
      out << row["target"].get<std::string>() << ','
          << row["reference"].get<std::string>() << ','
          << row["n"].get<std::int64_t>() << ','
          << FormatDouble(row["mean"].get<double>()) << ','
          << FormatDouble(row["std"].get<double>()) << ',';
      if (!row["abs_mcc"].is_null()) {
        out << FormatDouble(row["abs_mcc"].get<double>()) << ','
            << row["mcc_source"].get<std::string>();
      } else {
        out << ',';
      }
      out << '\n';
    }
    Emit(out.str(), c.out);
    return exit_code;
  }

  Json j;
  j["config"] = ConfigToJson(c);
  j["reports"] = Json::array();
  for (const ScoreReport& r : reports) j["reports"].push_back(ReportToJson(r));
  j["scatter"] = std::move(scatter);
  Emit(Dump(j), c.out);
  return exit_code;
}

Json IntervalToJson(const MccInterval& range) {
  if (range.empty) return nullptr;
  return {{"lo", range.lo},
          {"hi", range.hi},
          {"lo_closed", range.lo_closed},
          {"hi_closed", range.hi_closed}};
}

int Plan(RunConfig c) {
  Require(c.target.size() == 1, "plan takes one --target");
  Require(!c.protected_attribute.empty(), "plan needs --protected");
  Require(!c.mcc_targets.empty(), "plan needs --targets");
  std::sort(c.mcc_targets.begin(), c.mcc_targets.end());
  c.mcc_targets.erase(std::unique(c.mcc_targets.begin(), c.mcc_targets.end()),
                      c.mcc_targets.end());

  const LabelTable labels = LoadLabels(c);
  const std::string& target = c.target.front();
  const ConfusionCounts original =
      SubgroupCounts(labels, target, c.protected_attribute);
  const std::vector<SubsamplePlan> plans = Sweep(original, c.mcc_targets);

  if (!c.subsets.empty()) {
    std::filesystem::create_directories(c.subsets);
    for (std::size_t i = 0; i < plans.size(); ++i) {
      const LabelTable subset =
          ApplyPlan(labels, target, c.protected_attribute, plans[i].rounded);
      std::ostringstream csv;
      WriteLabels(subset, csv);
      char name[32];
      std::snprintf(name, sizeof(name), "subset_%03zu.csv", i);
      Emit(csv.str(), (std::filesystem::path(c.subsets) / name).string());
    }
  }

  if (c.format == "csv") {
    std::ostringstream out;
    WritePlanCsvHeader(out);
    for (const SubsamplePlan& p : plans) WritePlanCsvRow(p, out);
    Emit(out.str(), c.out);
    return kExitOk;
  }
  Json j;
  j["config"] = ConfigToJson(c);
  j["original"] = {{"n11", original.n11},
                   {"n10", original.n10},
                   {"n01", original.n01},
                   {"n00", original.n00},
                   {"mcc", Mcc(original)}};
  j["attainable"] = IntervalToJson(AttainableMccRange(original));
  j["plans"] = Json::array();
  for (const SubsamplePlan& p : plans) j["plans"].push_back(PlanToJson(p));
  Emit(Dump(j), c.out);
  return kExitOk;
}

int Synth(const RunConfig& c) {
  Require(!c.out.empty(), "synth needs --out directory");
  Require(c.leakage >= 0.0 && c.leakage <= 1.0, "--leakage must lie in [0, 1]");
  Require(c.images >= 1 && c.height >= 1 && c.width >= 1 && c.mask_scale >= 1,
          "synth sizes must be positive");
  BiasFixture f;
  f.n_images = c.images;
  f.height = c.height;
  f.width = c.width;
  f.mask_scale = c.mask_scale;
  f.leakage = c.leakage;
  f.seed = c.seed;
  const BiasFixtureData data = GenerateBiasFixture(f);

  const std::filesystem::path dir(c.out);
  std::filesystem::create_directories(dir);
  WriteContainerFile(data.attention.records, dir / "attention.aiou");
  WriteContainerFile(data.masks.records, dir / "masks.aiou");
  std::ostringstream labels;
  std::ostringstream predictions;
  WriteLabels(data.labels, labels);
  WritePredictions(data.labels, predictions);
  Emit(labels.str(), (dir / "labels.csv").string());
  Emit(predictions.str(), (dir / "predictions.csv").string());

  Json j;
  j["config"] = ConfigToJson(c);
  j["files"] = {"attention.aiou", "masks.aiou", "labels.csv",
                "predictions.csv"};
  j["attention_records"] = data.attention.records.size();
  j["mask_records"] = data.masks.records.size();
  Emit(Dump(j), (dir / "manifest.json").string());
  return kExitOk;
}

Json ContainerCensus(const std::string& path, std::set<std::string>& ids) {
  const MapContainer container = ReadContainerFile(path);
  std::int64_t attention = 0;
  std::int64_t masks = 0;
  Json degenerate = Json::array();
  std::set<std::string> attributes;
  for (const MapRecord& r : container.records) {
    (r.kind == MapKind::kAttention ? attention : masks) += 1;
    if (r.map.IsDegenerate()) degenerate.push_back(r.name);
    ids.emplace(r.image_id());
    attributes.emplace(r.attribute());
  }
  return {{"path", path},
          {"version", container.version},
          {"records", container.records.size()},
          {"attention", attention},
          {"masks", masks},
          {"attributes", attributes},
          {"degenerate_count", degenerate.size()},
          {"degenerate", std::move(degenerate)}};
}

int Validate(const RunConfig& c) {
  Require(!c.maps.empty() || !c.masks.empty() || !c.labels.empty(),
          "validate needs --maps, --masks or --labels");
  Json j;
  j["config"] = ConfigToJson(c);
  std::set<std::string> map_ids;
  j["containers"] = Json::array();
  for (const std::string& path : {c.maps, c.masks}) {
    if (!path.empty()) j["containers"].push_back(ContainerCensus(path, map_ids));
  }

  int exit_code = kExitOk;
  if (!c.labels.empty()) {
    const LabelTable labels = LoadLabels(c);
    j["labels"] = {{"path", c.labels},
                   {"images", labels.num_images()},
                   {"attributes", labels.attributes()},
                   {"predictions", OptionalString(c.predictions)}};
    if (!c.maps.empty() || !c.masks.empty()) {
      const std::set<std::string> label_ids(labels.image_ids().begin(),
                                            labels.image_ids().end());
      Json maps_only = Json::array();
      Json labels_only = Json::array();
      for (const std::string& id : map_ids) {
        if (!label_ids.contains(id)) maps_only.push_back(id);
      }
      for (const std::string& id : label_ids) {
        if (!map_ids.contains(id)) labels_only.push_back(id);
      }
      if (!maps_only.empty() || !labels_only.empty()) {
        std::cerr << "warning: " << maps_only.size()
                  << " map ids without labels, " << labels_only.size()
                  << " label ids without maps\n";
        exit_code = kExitWarning;
      }
      j["orphans"] = {{"maps_without_labels", std::move(maps_only)},
                      {"labels_without_maps", std::move(labels_only)}};
    }
  }
  j["ok"] = exit_code == kExitOk;
  Emit(Dump(j), c.out);
  return exit_code;
}

std::vector<ScoreReport> LoadReports(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument,
                path + " is not a JSON score report: " + e.what());
  }
  if (!j.contains("reports") || !j["reports"].is_array()) {
    throw Error(ErrorCode::kInvalidArgument, path + " has no reports array");
  }
  std::vector<ScoreReport> reports;
  for (const Json& r : j["reports"]) reports.push_back(ReportFromJson(r));
  return reports;
}

int Merge(const RunConfig& c) {
  std::vector<ScoreReport> reports;
  for (const std::string& path : c.inputs) {
    for (ScoreReport& r : LoadReports(path)) reports.push_back(std::move(r));
  }
  const std::vector<MergedReport> merged = MergeReports(reports);
  if (c.format == "csv") {
    std::ostringstream out;
    out << "score_kind,target,reference,group,n_models,mean,std\n";
    for (const MergedReport& m : merged) {
      const auto prefix = std::string(ScoreKindName(m.kind)) + "," + m.target +
                          "," + m.reference + ",";
      out << prefix << "all," << m.n_models << ',' << FormatDouble(m.mean)
          << ',' << FormatDouble(m.std) << '\n';
      for (const MergedGroup& g : m.per_group) {
        out << prefix << GroupName(g.key) << ',' << g.n_models << ','
            << FormatDouble(g.mean) << ',' << FormatDouble(g.std) << '\n';
      }
    }
    Emit(out.str(), c.out);
    return kExitOk;
  }
  Json j;
  j["config"] = ConfigToJson(c);
  j["merged"] = Json::array();
  for (const MergedReport& m : merged) j["merged"].push_back(MergedToJson(m));
  Emit(Dump(j), c.out);
  return kExitOk;
}

int Trend(const RunConfig& c) {
  Require(c.x.size() == c.inputs.size(),
          "--x needs one value per report file");
  struct Series {
    ScoreKind kind;
    std::string target;
    std::string reference;
    std::vector<double> x;
    std::vector<double> y;
  };
  std::vector<Series> series;
  for (std::size_t i = 0; i < c.inputs.size(); ++i) {
    for (const ScoreReport& r : LoadReports(c.inputs[i])) {
      auto it = std::find_if(series.begin(), series.end(), [&](const Series& s) {
        return s.kind == r.kind && s.target == r.target &&
               s.reference == r.reference;
      });
      if (it == series.end()) {
        series.push_back({r.kind, r.target, r.reference, {}, {}});
        it = std::prev(series.end());
      }
      it->x.push_back(c.x[i]);
      it->y.push_back(r.overall_mean);
    }
  }
  Json rows = Json::array();
  for (const Series& s : series) {
    Json row = {{"score_kind", ScoreKindName(s.kind)},
                {"target", s.target},
                {"reference", s.reference},
                {"n", s.x.size()},
                {"x", s.x},
                {"scores", s.y}};
    try {
      row["kendall_tau"] = KendallTau(s.x, s.y);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kDegenerateInput) throw;
      row["kendall_tau"] = nullptr;
    }
    rows.push_back(std::move(row));
  }
  Json j;
  j["config"] = ConfigToJson(c);
  j["trends"] = std::move(rows);
  Emit(Dump(j), c.out);
  return kExitOk;
}

int Metrics(const RunConfig& c) {
  Require(!c.predictions.empty(), "metrics needs --predictions");
  const LabelTable labels = LoadLabels(c);
  std::vector<std::string> attributes = c.target;
  if (attributes.empty()) {
    for (const std::string& a : labels.attributes()) {
      if (labels.HasPredictions(a)) attributes.push_back(a);
    }
  }
  std::vector<std::vector<std::uint8_t>> columns;
  for (const std::string& a : attributes) {
    Require(labels.HasPredictions(a), "no predictions for " + a);
    columns.push_back(labels.Column(a));
  }
  Require(!columns.empty(), "no attributes with predictions");
  const double n_ref = c.n_ref > 0 ? c.n_ref : DefaultReferenceCount(columns);

  int exit_code = kExitOk;
  Json rows = Json::array();
  for (std::size_t k = 0; k < attributes.size(); ++k) {
    const std::string& a = attributes[k];
    const std::vector<double>& scores = labels.PredictionScores(a);
    Json row;
    row["attribute"] = a;
    row["n_positives"] =
        std::count(columns[k].begin(), columns[k].end(), std::uint8_t{1});
    row["ap"] = nullptr;
    row["ap_n"] = nullptr;
    try {
      row["ap"] = AveragePrecision(scores, columns[k]);
      row["ap_n"] = NormalizedAveragePrecision(scores, columns[k], n_ref);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kNoPositives) throw;
    }
    if (!c.protected_attribute.empty()) {
      for (const bool predicted : {false, true}) {
        const char* key = predicted ? "mcc_predicted" : "mcc_ground_truth";
        try {
          row[key] = MccLabels(labels, a, c.protected_attribute, predicted &&
                               labels.HasPredictions(c.protected_attribute));
        } catch (const Error& e) {
          if (e.code() != ErrorCode::kUndefinedMcc) throw;
          row[key] = nullptr;
        }
      }
      try {
        row["worst_group_accuracy"] =
            WorstGroupAccuracy(labels, a, c.protected_attribute, c.threshold)
                .worst_group_accuracy;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kAllGroupsExcluded) throw;
        row["worst_group_accuracy"] = nullptr;
        exit_code = kExitWarning;
      }
    }
    rows.push_back(std::move(row));
  }

  if (c.format == "csv") {
    std::ostringstream out;
    out << "attribute,n_positives,ap,ap_n,mcc_ground_truth,mcc_predicted,"
           "worst_group_accuracy\n";
    auto cell = [&out](const Json& row, const char* key) {
      out << ',';
      if (row.contains(key) && !row[key].is_null()) {
        out << FormatDouble(row[key].get<double>());
      }
    };
    for (const Json& row : rows) {
      out << row["attribute"].get<std::string>() << ','
          << row["n_positives"].get<std::int64_t>();
      for (const char* key : {"ap", "ap_n", "mcc_ground_truth",
                              "mcc_predicted", "worst_group_accuracy"}) {
        cell(row, key);
      }
      out << '\n';
    }
    Emit(out.str(), c.out);
    return exit_code;
  }
  Json j;
  j["config"] = ConfigToJson(c);
  j["n_ref"] = n_ref;
  j["metrics"] = std::move(rows);
  Emit(Dump(j), c.out);
  return exit_code;
}

Json MapToJson(const Map& m) {
  return {{"height", m.height()}, {"width", m.width()}, {"values", m.values()}};
}

int Average(const RunConfig& c) {
  Require(c.target.size() == 1, "average takes one --target");
  const MapContainer attention = ReadContainerFile(c.maps);
  const MapSet maps = LoadSelection(attention, c.target.front(),
                                    MapKind::kAttention, "attention");
  std::optional<LabelTable> labels;
  if (!c.protected_attribute.empty()) {
    Require(!c.labels.empty(), "--protected needs --labels");
    Require(!c.use_predictions || !c.predictions.empty(),
            "--use-predictions needs --predictions");
    labels = LoadLabels(c);
  }

  std::array<std::vector<Map>, 5> buckets;  // 4 groups, then all
  for (const auto& [id, map] : maps) {
    if (map.IsDegenerate()) continue;
    buckets[4].push_back(map);
    if (!labels) continue;
    const auto row = labels->ImageIndex(id);
    if (!row) {
      throw Error(ErrorCode::kUnknownImage, "no labels for image " + id);
    }
    const auto t = labels->Labels(c.target.front(), c.use_predictions)[*row];
    const auto p =
        labels->Labels(c.protected_attribute, c.use_predictions)[*row];
    buckets[GroupIndex({t, p})].push_back(map);
  }
  Require(!buckets[4].empty(), "every map is all-zero");

  Json out = Json::array();
  out.push_back({{"group", "all"},
                 {"n", buckets[4].size()},
                 {"map", MapToJson(AverageMap(buckets[4]))}});
  if (labels) {
    for (std::size_t g = 0; g < 4; ++g) {
      out.push_back({{"group", GroupName(kGroupKeys[g])},
                     {"n", buckets[g].size()},
                     {"map", buckets[g].empty()
                                 ? Json(nullptr)
                                 : MapToJson(AverageMap(buckets[g]))}});
    }
  }
  Json j;
  j["config"] = ConfigToJson(c);
  j["averages"] = std::move(out);
  Emit(Dump(j), c.out);
  return kExitOk;
}

int Run(int argc, char** argv) {
  CLI::App app{"Attention-IoU bias analysis"};
  app.require_subcommand(1);
  RunConfig c;

  auto add_out = [&c](CLI::App* sub, bool format) {
    sub->add_option("--out", c.out, "Output path (default: stdout)");
    if (format) {
      sub->add_option("--format", c.format, "Output format")
          ->check(CLI::IsMember({"json", "csv"}));
    }
  };
  auto add_labels = [&c](CLI::App* sub) {
    sub->add_option("--labels", c.labels, "Labels CSV");
    sub->add_option("--predictions", c.predictions, "Predictions CSV");
  };
  auto add_strata = [&c](CLI::App* sub) {
    sub->add_option("--protected", c.protected_attribute,
                    "Protected attribute for group stratification");
    sub->add_option("--threshold", c.threshold,
                    "Group exclusion threshold (fraction of images)");
    sub->add_flag("--use-predictions", c.use_predictions,
                  "Stratify by predicted instead of ground-truth labels");
  };
  auto add_degenerate = [&c](CLI::App* sub) {
    sub->add_option("--degenerate", c.degenerate,
                    "All-zero map handling: skip or zero")
        ->check(CLI::IsMember({"skip", "zero"}));
  };

  auto* mask = app.add_subcommand("score-mask", "Mask score of a target");
  mask->add_option("--maps", c.maps, "Attention container")->required();
  mask->add_option("--masks", c.masks, "Mask container")->required();
  mask->add_option("--target", c.target, "Target attribute")->required();
  mask->add_option("--reference", c.reference, "Mask feature(s)")
      ->required()
      ->delimiter(',');
  add_labels(mask);
  add_strata(mask);
  add_degenerate(mask);
  add_out(mask, true);

  auto* heat = app.add_subcommand("score-heatmap", "Heatmap scores");
  heat->add_option("--maps", c.maps, "Attention container")->required();
  heat->add_option("--target", c.target, "Target attribute(s)")
      ->required()
      ->delimiter(',');
  heat->add_option("--reference", c.reference,
                   "Reference attribute (default: --protected)");
  add_labels(heat);
  add_strata(heat);
  add_degenerate(heat);
  add_out(heat, true);

  auto* plan = app.add_subcommand("plan", "Subgroup subsampling plans");
  plan->add_option("--labels", c.labels, "Labels CSV")->required();
  plan->add_option("--target", c.target, "Target attribute")->required();
  plan->add_option("--protected", c.protected_attribute,
                   "Protected attribute")
      ->required();
  plan->add_option("--targets", c.mcc_targets, "Comma list of target MCCs")
      ->required()
      ->delimiter(',');
  plan->add_option("--seed", c.seed, "Recorded in the report");
  plan->add_option("--subsets", c.subsets,
                   "Directory for subsampled label CSVs");
  add_out(plan, true);

  auto* synth = app.add_subcommand("synth", "Synthetic bias fixture");
  synth->add_option("--seed", c.seed, "Random seed");
  synth->add_option("--leakage", c.leakage, "Attention mass on background");
  synth->add_option("--images", c.images, "Number of images");
  synth->add_option("--height", c.height, "Attention map height");
  synth->add_option("--width", c.width, "Attention map width");
  synth->add_option("--mask-scale", c.mask_scale,
                    "Mask resolution multiple of the map size");
  synth->add_option("--out", c.out, "Output directory")->required();

  auto* validate = app.add_subcommand("validate", "Check input files");
  validate->add_option("--maps", c.maps, "Attention container");
  validate->add_option("--masks", c.masks, "Mask container");
  add_labels(validate);
  add_out(validate, false);

  auto* merge = app.add_subcommand("merge", "Mean and std across models");
  merge->add_option("reports", c.inputs, "Score report JSON files")
      ->required();
  add_out(merge, true);

  auto* trend = app.add_subcommand("trend", "Kendall tau of scores against x");
  trend->add_option("reports", c.inputs, "Score report JSON files")
      ->required();
  trend->add_option("--x", c.x, "One value per report file")
      ->required()
      ->delimiter(',');
  add_out(trend, false);

  auto* metrics = app.add_subcommand("metrics", "AP, AP_N, MCC and WGA");
  metrics->add_option("--labels", c.labels, "Labels CSV")->required();
  metrics->add_option("--predictions", c.predictions, "Predictions CSV")
      ->required();
  metrics->add_option("--target", c.target, "Attribute(s) (default: all)")
      ->delimiter(',');
  metrics->add_option("--protected", c.protected_attribute,
                      "Protected attribute");
  metrics->add_option("--threshold", c.threshold, "Group exclusion threshold");
  metrics->add_option("--n-ref", c.n_ref,
                      "Reference positive count for AP_N");
  add_out(metrics, true);

  auto* average = app.add_subcommand("average", "Averaged attention maps");
  average->add_option("--maps", c.maps, "Attention container")->required();
  average->add_option("--target", c.target, "Target attribute")->required();
  add_labels(average);
  average->add_option("--protected", c.protected_attribute,
                      "Also average per group");
  average->add_flag("--use-predictions", c.use_predictions,
                    "Group by predicted labels");
  add_out(average, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitError;
  }

  const CLI::App* sub = app.get_subcommands().front();
  c.command = sub->get_name();
  try {
    if (sub == mask) return ScoreMask(c);
    if (sub == heat) return ScoreHeatmap(c);
    if (sub == plan) return Plan(c);
    if (sub == synth) return Synth(c);
    if (sub == validate) return Validate(c);
    if (sub == merge) return Merge(c);
    if (sub == trend) return Trend(c);
    if (sub == metrics) return Metrics(c);
    return Average(c);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: IoFailure: " << e.what() << "\n";
  }
  return kExitError;
}

}  // namespace
}  // namespace aiou

int main(int argc, char** argv) { return aiou::Run(argc, argv); }
