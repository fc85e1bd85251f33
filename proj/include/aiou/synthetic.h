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

#ifndef AIOU_SYNTHETIC_H_
#define AIOU_SYNTHETIC_H_

// Parametric attention maps and masks for end-to-end checks without a
// trained model. A bias fixture mimics a bird/background dataset: each
// image gets an elliptical "bird" mask and its complement as the
// "background" mask, and an attention map that puts a fraction `leakage`
// of its mass on the background instead of the bird.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

#include "aiou/container.h"
#include "aiou/labels.h"
#include "aiou/map.h"

namespace aiou {

// Isotropic Gaussian bump. center_row / center_col are in [0, 1]^2 image
// coordinates; sigma is in pixels.
struct BlobSpec {
  double center_row = 0.5;
  double center_col = 0.5;
  double sigma = 1.0;
  double amplitude = 1.0;
};

// Sum of blobs evaluated at pixel centres. Throws InvalidArgument for
// non-positive sigma or amplitude.
Map GenerateBlobMap(std::size_t height, std::size_t width,
                    std::span<const BlobSpec> blobs);

inline constexpr std::string_view kFixtureTarget = "Waterbird";
inline constexpr std::string_view kFixtureProtected = "WaterBackground";
inline constexpr std::string_view kBirdMask = "bird";
inline constexpr std::string_view kBackgroundMask = "background";

struct BiasFixture {
  std::size_t n_images = 200;
  std::size_t height = 7;  // attention-map resolution
  std::size_t width = 7;
  std::size_t mask_scale = 4;  // masks are (height*scale) x (width*scale)
  double leakage = 0.0;        // in [0, 1]
  std::uint64_t seed = 0;
};

struct BiasFixtureData {
  MapContainer attention;  // "<id>/Waterbird"
  MapContainer masks;      // "<id>/bird", "<id>/background"
  // Ground truth for Waterbird and WaterBackground, plus prediction scores
  // where the Waterbird prediction copies the background label with
  // probability `leakage`.
  LabelTable labels;
};

// Deterministic in the fixture: the same seed gives identical maps for
// every leakage value except for the leakage mix itself, so fixtures that
// differ only in leakage are directly comparable.
BiasFixtureData GenerateBiasFixture(const BiasFixture& fixture);

}  // namespace aiou

#endif  // AIOU_SYNTHETIC_H_
