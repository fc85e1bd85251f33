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

#ifndef AIOU_MAP_H_
#define AIOU_MAP_H_

// Dense nonnegative pixel maps and the Attention-IoU metric.
//
// A Map is either an attention map (e.g. a GradCAM output at the
// resolution of the last convolutional layer) or a feature mask. Maps are
// immutable once constructed. All metric arithmetic is double precision
// with compensated accumulation.

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace aiou {

class Map {
 public:
  // All-zero (degenerate) map.
  Map(std::size_t height, std::size_t width);

  // Row-major values. Throws InvalidMap unless height, width >= 1,
  // values.size() == height * width and every value is finite and >= 0.
  Map(std::size_t height, std::size_t width, std::vector<double> values);

  // Convenience for literals: Map::FromRows({{1, 0}, {0, 0}}).
  static Map FromRows(
      std::initializer_list<std::initializer_list<double>> rows);

  std::size_t height() const { return height_; }
  std::size_t width() const { return width_; }
  std::size_t size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }

  double at(std::size_t row, std::size_t col) const {
    return values_[row * width_ + col];
  }

  bool SameShape(const Map& other) const {
    return height_ == other.height_ && width_ == other.width_;
  }

  // True iff every entry is exactly zero.
  bool IsDegenerate() const;

  double Sum() const;
  double Max() const;

  // Every entry multiplied by factor (factor must be finite and >= 0).
  Map Scaled(double factor) const;

  friend bool operator==(const Map& a, const Map& b) = default;

 private:
  std::size_t height_;
  std::size_t width_;
  std::vector<double> values_;
};

// A map whose entries sum to one. Only produced by L1Normalize.
class NormalizedMap {
 public:
  const Map& map() const { return map_; }
  std::span<const double> values() const { return map_.values(); }

 private:
  friend NormalizedMap L1Normalize(const Map& m);
  explicit NormalizedMap(Map m) : map_(std::move(m)) {}

  Map map_;
};

// m / sum(m). Throws DegenerateMap for an all-zero map.
NormalizedMap L1Normalize(const Map& m);

// Generalized IoU of two dense maps:
//
//   <P, Q>_F / ||(P + Q) / 2||_F^2,   P = m1 / |m1|_1,  Q = m2 / |m2|_1
//
// The result lies in [0, 1]: 1 iff P == Q, 0 iff the supports are
// disjoint. Invariant to positive rescaling of either map and to integer
// nearest-neighbour upscaling of both. Symmetric bit-for-bit.
//
// Throws DegenerateMap if either map is all-zero and DimensionMismatch if
// the shapes differ.
double AttentionIoU(const Map& m1, const Map& m2);

// Bilinear resampling to a smaller (or equal) grid with half-pixel centre
// alignment: src = (dst + 0.5) * src_size / dst_size - 0.5, clamped to
// the border. No antialiasing filter is applied.
//
// Throws DimensionMismatch if either output dimension exceeds the input.
Map BilinearDownsample(const Map& m, std::size_t out_height,
                       std::size_t out_width);

// Replicates every pixel into an alpha x alpha block.
Map NearestUpscale(const Map& m, std::size_t alpha);

}  // namespace aiou

#endif  // AIOU_MAP_H_
