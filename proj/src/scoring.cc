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

#include <algorithm>
#include <cmath>

#include "aiou/compensated_sum.h"
#include "aiou/error.h"
#include "aiou/parallel.h"

namespace aiou {
namespace {

struct MatchedPair {
  const std::string* id;
  const Map* first;
  const Map* second;
};

// Ids present in both sets, in id order.
std::vector<MatchedPair> MatchById(const MapSet& a, const MapSet& b,
                                   std::int64_t& unmatched) {
  std::vector<MatchedPair> pairs;
  auto ia = a.begin();
  auto ib = b.begin();
  unmatched = 0;
  while (ia != a.end() && ib != b.end()) {
    if (ia->first < ib->first) {
      ++unmatched;
      ++ia;
    } else if (ib->first < ia->first) {
      ++unmatched;
      ++ib;
    } else {
      pairs.push_back({&ia->first, &ia->second, &ib->second});
      ++ia;
      ++ib;
    }
  }
  unmatched += std::distance(ia, a.end()) + std::distance(ib, b.end());
  return pairs;
}

void CheckMask(const std::string& id, const Map& mask) {
  for (const double v : mask.values()) {
    if (v > 1.0) {
      throw Error(ErrorCode::kInvalidMask,
                  "mask of image '" + id + "' has entries above 1");
    }
  }
}

template <typename Fn>
PerImageScores ScorePairs(const MapSet& a, const MapSet& b,
                          DegeneratePolicy policy, Fn score) {
  PerImageScores out;
  const auto pairs = MatchById(a, b, out.unmatched);
  out.images.resize(pairs.size());
  ParallelFor(pairs.size(), [&](std::size_t i) {
    const MatchedPair& p = pairs[i];
    ImageScore& s = out.images[i];
    s.image_id = *p.id;
    s.value = score(p);
    if (!s.value) {
      s.degenerate = true;
      if (policy == DegeneratePolicy::kZero) s.value = 0.0;
    }
  });
  return out;
}

std::optional<double> GuardedIoU(const Map& a, const Map& b) {
  if (a.IsDegenerate() || b.IsDegenerate()) return std::nullopt;
  return AttentionIoU(a, b);
}

ScoreReport BuildReport(ScoreKind kind, std::string_view target,
                        std::string_view reference,
                        const PerImageScores& scores,
                        const ScoreOptions& options) {
  ScoreReport report;
  report.kind = kind;
  report.target = target;
  report.reference = reference;
  report.degenerate_policy = options.degenerate;
  report.unmatched = scores.unmatched;
  report.n_images = static_cast<std::int64_t>(scores.images.size());

  std::vector<double> values;
  values.reserve(scores.images.size());
  for (const ImageScore& s : scores.images) {
    if (s.degenerate) {
      (s.value ? report.zeroed_degenerate : report.skipped_degenerate)++;
    }
    if (s.value) values.push_back(*s.value);
  }
  if (values.empty()) {
    throw Error(ErrorCode::kNoMatchedImages,
                "no scorable images for '" + std::string(target) + "' vs '" +
                    std::string(reference) + "' (" +
                    std::to_string(report.n_images) + " matched, " +
                    std::to_string(report.skipped_degenerate) +
                    " degenerate)");
  }
  const Moments m = ComputeMoments(values);
  report.n_scored = m.n;
  report.overall_mean = m.mean;
  report.overall_std = m.std;

  if (options.stratification) {
    const Stratification& s = *options.stratification;
    if (s.labels == nullptr) {
      throw Error(ErrorCode::kInvalidArgument, "stratification without labels");
    }
    const auto groups = Stratify(scores, *s.labels, target,
                                 s.protected_attribute, s.threshold,
                                 s.use_predictions);
    report.per_group.assign(groups.begin(), groups.end());
    report.protected_attribute = s.protected_attribute;
    report.exclusion_threshold = s.threshold;
    report.stratified_by_predictions = s.use_predictions;
  }
  return report;
}

}  // namespace

std::string_view ScoreKindName(ScoreKind kind) {
  return kind == ScoreKind::kMask ? "Mask" : "Heatmap";
}

std::string_view DegeneratePolicyName(DegeneratePolicy policy) {
  return policy == DegeneratePolicy::kSkip ? "skip" : "zero";
}

PerImageScores ScoreMaskImages(const MapSet& attention, const MapSet& masks,
                               DegeneratePolicy policy) {
  return ScorePairs(attention, masks, policy,
                    [](const MatchedPair& p) -> std::optional<double> {
                      CheckMask(*p.id, *p.second);
                      const Map mask = BilinearDownsample(
                          *p.second, p.first->height(), p.first->width());
                      return GuardedIoU(*p.first, mask);
                    });
}

PerImageScores ScoreHeatmapImages(const MapSet& target_maps,
                                  const MapSet& reference_maps,
                                  DegeneratePolicy policy) {
  return ScorePairs(target_maps, reference_maps, policy,
                    [](const MatchedPair& p) -> std::optional<double> {
                      if (!p.first->SameShape(*p.second)) {
                        throw Error(ErrorCode::kDimensionMismatch,
                                    "attention maps of image '" + *p.id +
                                        "' differ in shape");
                      }
                      return GuardedIoU(*p.first, *p.second);
                    });
}

Moments ComputeMoments(std::span<const double> values) {
  Moments m;
  m.n = static_cast<std::int64_t>(values.size());
  if (values.empty()) return m;
  CompensatedSum sum;
  for (const double v : values) sum.Add(v);
  m.mean = sum.Total() / static_cast<double>(m.n);
  CompensatedSum sq;
  for (const double v : values) sq.Add((v - m.mean) * (v - m.mean));
  m.std = std::sqrt(sq.Total() / static_cast<double>(m.n));
  return m;
}

std::array<GroupScore, 4> Stratify(const PerImageScores& scores,
                                   const LabelTable& labels,
                                   std::string_view target,
                                   std::string_view protected_attribute,
                                   double threshold, bool use_predictions) {
  const auto target_labels = labels.Labels(target, use_predictions);
  const auto protected_labels =
      labels.Labels(protected_attribute, use_predictions);

  std::array<std::vector<double>, 4> buckets;
  for (const ImageScore& s : scores.images) {
    const auto row = labels.ImageIndex(s.image_id);
    if (!row) {
      throw Error(ErrorCode::kUnknownImage,
                  "image '" + s.image_id + "' has no labels");
    }
    if (!s.value) continue;
    const GroupKey key{target_labels[*row], protected_labels[*row]};
    buckets[GroupIndex(key)].push_back(*s.value);
  }

  const auto total = static_cast<std::int64_t>(scores.images.size());
  std::array<GroupScore, 4> out;
  for (std::size_t g = 0; g < 4; ++g) {
    const Moments m = ComputeMoments(buckets[g]);
    out[g] = {kGroupKeys[g], m.n, m.mean, m.std,
              IsExcludedGroup(m.n, total, threshold)};
  }
  return out;
}

ScoreReport MaskScore(const MapSet& attention, const MapSet& masks,
                      std::string_view target, std::string_view feature,
                      const ScoreOptions& options) {
  const PerImageScores scores =
      ScoreMaskImages(attention, masks, options.degenerate);
  return BuildReport(ScoreKind::kMask, target, feature, scores, options);
}

ScoreReport HeatmapScore(const MapSet& target_maps,
                         const MapSet& reference_maps,
                         std::string_view target, std::string_view reference,
                         const ScoreOptions& options) {
  const PerImageScores scores =
      ScoreHeatmapImages(target_maps, reference_maps, options.degenerate);
  return BuildReport(ScoreKind::kHeatmap, target, reference, scores, options);
}

Map AverageMap(std::span<const Map> maps) {
  if (maps.empty()) {
    throw Error(ErrorCode::kEmptySet, "no maps to average");
  }
  const std::size_t h = maps.front().height();
  const std::size_t w = maps.front().width();
  std::vector<CompensatedSum> acc(h * w);
  std::size_t used = 0;
  for (const Map& m : maps) {
    if (m.height() != h || m.width() != w) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "maps to average differ in shape");
    }
    if (m.IsDegenerate()) continue;
    const NormalizedMap n = L1Normalize(m);
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i].Add(n.values()[i]);
    ++used;
  }
  if (used == 0) {
    throw Error(ErrorCode::kEmptySet, "every map to average is all-zero");
  }
  std::vector<double> mean(acc.size());
  for (std::size_t i = 0; i < acc.size(); ++i) {
    mean[i] = acc[i].Total() / static_cast<double>(used);
  }
  const double peak = *std::max_element(mean.begin(), mean.end());
  for (double& v : mean) v /= peak;
  return Map(h, w, std::move(mean));
}

Map AverageMap(const MapSet& maps) {
  std::vector<Map> list;
  list.reserve(maps.size());
  for (const auto& [id, m] : maps) list.push_back(m);
  return AverageMap(list);
}

}  // namespace aiou
