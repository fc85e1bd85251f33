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

#ifndef AIOU_SCORING_H_
#define AIOU_SCORING_H_

// Dataset-level bias scores built on AttentionIoU.
//
//   mask score(t, f)    = mean_i AttentionIoU(attn_t(x_i), interp(mask_f(x_i)))
//   heatmap score(t, p) = mean_i AttentionIoU(attn_t(x_i), attn_p(x_i))
//
// Per-image values are computed in parallel into an index-ordered buffer
// and reduced sequentially in image-id order, so every reported number is
// independent of the worker count.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "aiou/container.h"
#include "aiou/groups.h"
#include "aiou/labels.h"
#include "aiou/map.h"

namespace aiou {

enum class ScoreKind { kMask, kHeatmap };
std::string_view ScoreKindName(ScoreKind kind);

// What to do with an image whose attention map or (downsampled) mask is
// all-zero. kSkip drops it from the mean and counts it; kZero scores it 0.
enum class DegeneratePolicy { kSkip, kZero };
std::string_view DegeneratePolicyName(DegeneratePolicy policy);

struct ImageScore {
  std::string image_id;
  std::optional<double> value;  // empty: degenerate and skipped
  bool degenerate = false;
};

struct PerImageScores {
  std::vector<ImageScore> images;  // sorted by image id
  std::int64_t unmatched = 0;      // ids present in only one input set
};

struct GroupScore {
  GroupKey key;
  std::int64_t n = 0;
  double mean = 0.0;
  double std = 0.0;
  bool excluded = true;
};

struct Stratification {
  const LabelTable* labels = nullptr;
  std::string protected_attribute;
  double threshold = kDefaultExclusionThreshold;
  bool use_predictions = false;
};

struct ScoreReport {
  ScoreKind kind = ScoreKind::kMask;
  std::string target;
  std::string reference;
  std::int64_t n_images = 0;  // matched images, scored + skipped
  std::int64_t n_scored = 0;
  double overall_mean = 0.0;
  double overall_std = 0.0;  // population
  std::int64_t skipped_degenerate = 0;
  std::int64_t zeroed_degenerate = 0;
  std::int64_t unmatched = 0;
  DegeneratePolicy degenerate_policy = DegeneratePolicy::kSkip;

  // Filled only when stratified; kGroupKeys order.
  std::vector<GroupScore> per_group;
  std::string protected_attribute;
  double exclusion_threshold = kDefaultExclusionThreshold;
  bool stratified_by_predictions = false;
};

struct ScoreOptions {
  DegeneratePolicy degenerate = DegeneratePolicy::kSkip;
  std::optional<Stratification> stratification;
};

// Each mask must have entries in [0, 1] (InvalidMask) and is bilinearly
// downsampled to its attention map's shape (DimensionMismatch if smaller).
PerImageScores ScoreMaskImages(const MapSet& attention, const MapSet& masks,
                               DegeneratePolicy policy);

// Both maps of an image must have the same shape (DimensionMismatch).
PerImageScores ScoreHeatmapImages(const MapSet& target_maps,
                                  const MapSet& reference_maps,
                                  DegeneratePolicy policy);

struct Moments {
  std::int64_t n = 0;
  double mean = 0.0;
  double std = 0.0;
};
// Mean and population std of a sequence, in the given order.
Moments ComputeMoments(std::span<const double> values);

// Per-group statistics of the scored images. Each image lands in exactly
// one group; groups holding fewer than threshold * (all matched images) are
// flagged but still reported. Throws UnknownAttribute, UnknownImage.
std::array<GroupScore, 4> Stratify(const PerImageScores& scores,
                                   const LabelTable& labels,
                                   std::string_view target,
                                   std::string_view protected_attribute,
                                   double threshold, bool use_predictions);

// Throws NoMatchedImages when nothing could be scored.
ScoreReport MaskScore(const MapSet& attention, const MapSet& masks,
                      std::string_view target, std::string_view feature,
                      const ScoreOptions& options = {});
ScoreReport HeatmapScore(const MapSet& target_maps,
                         const MapSet& reference_maps,
                         std::string_view target, std::string_view reference,
                         const ScoreOptions& options = {});

// Pixel-wise mean of the L1-normalized maps, rescaled so the maximum is 1.
// All-zero maps are skipped. Throws EmptySet, DimensionMismatch.
Map AverageMap(std::span<const Map> maps);
Map AverageMap(const MapSet& maps);

}  // namespace aiou

#endif  // AIOU_SCORING_H_
