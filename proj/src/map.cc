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

#include "aiou/map.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "aiou/compensated_sum.h"
#include "aiou/error.h"

namespace aiou {
namespace {

std::string ShapeString(const Map& m) {
  return std::to_string(m.height()) + "x" + std::to_string(m.width());
}

}  // namespace

Map::Map(std::size_t height, std::size_t width)
    : height_(height), width_(width), values_(height * width, 0.0) {
  if (height == 0 || width == 0) {
    throw Error(ErrorCode::kInvalidMap, "map dimensions must be positive");
  }
}

Map::Map(std::size_t height, std::size_t width, std::vector<double> values)
    : height_(height), width_(width), values_(std::move(values)) {
  if (height == 0 || width == 0) {
    throw Error(ErrorCode::kInvalidMap, "map dimensions must be positive");
  }
  if (values_.size() != height * width) {
    throw Error(ErrorCode::kInvalidMap,
                "expected " + std::to_string(height * width) +
                    " values, got " + std::to_string(values_.size()));
  }
  for (const double v : values_) {
    if (!std::isfinite(v) || v < 0.0) {
      throw Error(ErrorCode::kInvalidMap,
                  "entries must be finite and nonnegative");
    }
  }
}

Map Map::FromRows(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t height = rows.size();
  const std::size_t width = height == 0 ? 0 : rows.begin()->size();
  std::vector<double> values;
  values.reserve(height * width);
  for (const auto& row : rows) {
    if (row.size() != width) {
      throw Error(ErrorCode::kInvalidMap, "ragged rows");
    }
    values.insert(values.end(), row.begin(), row.end());
  }
  return Map(height, width, std::move(values));
}

bool Map::IsDegenerate() const {
  return std::all_of(values_.begin(), values_.end(),
                     [](double v) { return v == 0.0; });
}

double Map::Sum() const {
  CompensatedSum sum;
  for (const double v : values_) sum.Add(v);
  return sum.Total();
}

double Map::Max() const {
  return *std::max_element(values_.begin(), values_.end());
}

Map Map::Scaled(double factor) const {
  std::vector<double> out(values_.size());
  std::transform(values_.begin(), values_.end(), out.begin(),
                 [factor](double v) { return v * factor; });
  return Map(height_, width_, std::move(out));
}

NormalizedMap L1Normalize(const Map& m) {
  if (m.IsDegenerate()) {
    throw Error(ErrorCode::kDegenerateMap,
                "cannot L1-normalize an all-zero " + ShapeString(m) + " map");
  }
  return NormalizedMap(m.Scaled(1.0 / m.Sum()));
}

double AttentionIoU(const Map& m1, const Map& m2) {
  if (!m1.SameShape(m2)) {
    throw Error(ErrorCode::kDimensionMismatch,
                ShapeString(m1) + " vs " + ShapeString(m2));
  }
  const NormalizedMap p = L1Normalize(m1);
  const NormalizedMap q = L1Normalize(m2);
  const auto pv = p.values();
  const auto qv = q.values();

  // Every term is symmetric in (p, q), so swapping the arguments yields
  // the same bits.
  CompensatedSum intersection;
  CompensatedSum union_sq;
  for (std::size_t i = 0; i < pv.size(); ++i) {
    intersection.Add(pv[i] * qv[i]);
    const double mid = (pv[i] + qv[i]) * 0.5;
    union_sq.Add(mid * mid);
  }
  const double value = intersection.Total() / union_sq.Total();
  return std::clamp(value, 0.0, 1.0);
}

Map BilinearDownsample(const Map& m, std::size_t out_height,
                       std::size_t out_width) {
  if (out_height == 0 || out_width == 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "output dimensions must be positive");
  }
  if (out_height > m.height() || out_width > m.width()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "cannot downsample " + ShapeString(m) + " to " +
                    std::to_string(out_height) + "x" +
                    std::to_string(out_width));
  }

  struct Tap {
    std::size_t lo;
    std::size_t hi;
    double frac;
  };
  const auto taps = [](std::size_t src, std::size_t dst) {
    std::vector<Tap> out(dst);
    const double scale = static_cast<double>(src) / static_cast<double>(dst);
    const double last = static_cast<double>(src - 1);
    for (std::size_t i = 0; i < dst; ++i) {
      const double x =
          std::clamp((static_cast<double>(i) + 0.5) * scale - 0.5, 0.0, last);
      const auto lo = static_cast<std::size_t>(std::floor(x));
      out[i] = {lo, std::min(lo + 1, src - 1), x - static_cast<double>(lo)};
    }
    return out;
  };
  const std::vector<Tap> rows = taps(m.height(), out_height);
  const std::vector<Tap> cols = taps(m.width(), out_width);

  std::vector<double> out;
  out.reserve(out_height * out_width);
  for (const Tap& r : rows) {
    for (const Tap& c : cols) {
      // a + f * (b - a) keeps constant inputs exact.
      const double top =
          m.at(r.lo, c.lo) + c.frac * (m.at(r.lo, c.hi) - m.at(r.lo, c.lo));
      const double bottom =
          m.at(r.hi, c.lo) + c.frac * (m.at(r.hi, c.hi) - m.at(r.hi, c.lo));
      out.push_back(std::max(0.0, top + r.frac * (bottom - top)));
    }
  }
  return Map(out_height, out_width, std::move(out));
}

Map NearestUpscale(const Map& m, std::size_t alpha) {
  if (alpha == 0) {
    throw Error(ErrorCode::kInvalidArgument, "alpha must be >= 1");
  }
  const std::size_t out_w = m.width() * alpha;
  std::vector<double> out;
  out.reserve(m.size() * alpha * alpha);
  for (std::size_t r = 0; r < m.height() * alpha; ++r) {
    for (std::size_t c = 0; c < out_w; ++c) {
      out.push_back(m.at(r / alpha, c / alpha));
    }
  }
  return Map(m.height() * alpha, out_w, std::move(out));
}

}  // namespace aiou
