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

#include "aiou/synthetic.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>

#include "aiou/error.h"
#include "aiou/parallel.h"

namespace aiou {
namespace {

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Uniform [0, 1) from the top 53 bits; identical on every standard library.
class Uniform {
 public:
  explicit Uniform(std::uint64_t seed) : engine_(seed) {}
  double operator()() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }
  double operator()(double lo, double hi) { return lo + (hi - lo) * (*this)(); }

 private:
  std::mt19937_64 engine_;
};

// Rounds through binary32 so maps survive a container round trip as is.
Map Narrow(const Map& m) {
  std::vector<double> v(m.values().begin(), m.values().end());
  for (double& x : v) x = static_cast<float>(x);
  return Map(m.height(), m.width(), std::move(v));
}

Map NormalizeOrZero(std::vector<double> values, std::size_t h,
                    std::size_t w) {
  double sum = 0.0;
  for (const double v : values) sum += v;
  if (sum > 0.0) {
    for (double& v : values) v /= sum;
  }
  return Map(h, w, std::move(values));
}

struct ImageSample {
  Map attention{1, 1};
  Map bird{1, 1};
  Map background{1, 1};
  std::uint8_t bird_label = 0;
  std::uint8_t water_label = 0;
  double prediction = 0.0;
};

ImageSample GenerateImage(const BiasFixture& f, std::size_t index) {
  Uniform rng(SplitMix64(f.seed ^ SplitMix64(index + 1)));
  // All random draws happen before leakage enters, in a fixed order.
  const double cy = rng(0.35, 0.65);
  const double cx = rng(0.35, 0.65);
  const double ry = rng(0.18, 0.32);
  const double rx = rng(0.18, 0.32);
  const std::uint8_t bird_label = rng() < 0.5;
  const std::uint8_t water_label = rng() < 0.5;
  const double flip = rng();
  std::vector<double> texture(f.height * f.width);
  for (double& t : texture) t = rng(0.5, 1.0);
  std::vector<double> noise(f.height * f.width);
  for (double& n : noise) n = rng();

  const std::size_t mh = f.height * f.mask_scale;
  const std::size_t mw = f.width * f.mask_scale;
  std::vector<double> bird(mh * mw);
  std::vector<double> background(mh * mw);
  for (std::size_t r = 0; r < mh; ++r) {
    for (std::size_t c = 0; c < mw; ++c) {
      const double dy = ((r + 0.5) / mh - cy) / ry;
      const double dx = ((c + 0.5) / mw - cx) / rx;
      const bool inside = dy * dy + dx * dx <= 1.0;
      bird[r * mw + c] = inside ? 1.0 : 0.0;
      background[r * mw + c] = inside ? 0.0 : 1.0;
    }
  }
  ImageSample s;
  s.bird = Map(mh, mw, std::move(bird));
  s.background = Map(mh, mw, std::move(background));
  s.bird_label = bird_label;
  s.water_label = water_label;

  // Mass on the bird follows the downsampled bird mask, shaped by a broad
  // bump at its centre; mass on the background sits on pixels the bird
  // does not touch at all.
  const Map coarse = BilinearDownsample(s.bird, f.height, f.width);
  const BlobSpec bump{cy, cx,
                      1.5 * std::max(ry * f.height, rx * f.width), 1.0};
  const Map shape = GenerateBlobMap(f.height, f.width, {&bump, 1});
  std::vector<double> on_bird(coarse.size());
  std::vector<double> on_background(coarse.size());
  for (std::size_t i = 0; i < coarse.size(); ++i) {
    on_bird[i] = coarse.values()[i] * shape.values()[i];
    on_background[i] = coarse.values()[i] == 0.0 ? texture[i] : 0.0;
  }
  const Map u = NormalizeOrZero(std::move(on_bird), f.height, f.width);
  Map v = NormalizeOrZero(std::move(on_background), f.height, f.width);
  if (v.IsDegenerate()) {
    std::vector<double> rest(coarse.size());
    for (std::size_t i = 0; i < rest.size(); ++i) {
      rest[i] = 1.0 - coarse.values()[i];
    }
    v = NormalizeOrZero(std::move(rest), f.height, f.width);
  }

  std::vector<double> attention(coarse.size());
  for (std::size_t i = 0; i < attention.size(); ++i) {
    attention[i] =
        (1.0 - f.leakage) * u.values()[i] + f.leakage * v.values()[i];
  }
  const double peak = *std::max_element(attention.begin(), attention.end());
  for (std::size_t i = 0; i < attention.size(); ++i) {
    attention[i] += 0.01 * peak * noise[i];
  }
  s.attention = Narrow(Map(f.height, f.width, std::move(attention)));

  const std::uint8_t predicted = flip < f.leakage ? water_label : bird_label;
  s.prediction = predicted ? 0.8 : 0.2;
  return s;
}

std::string ImageId(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "img%05zu", index);
  return buf;
}

}  // namespace

Map GenerateBlobMap(std::size_t height, std::size_t width,
                    std::span<const BlobSpec> blobs) {
  std::vector<double> values(height * width, 0.0);
  for (const BlobSpec& b : blobs) {
    if (!(b.sigma > 0.0) || !(b.amplitude > 0.0)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "blob sigma and amplitude must be positive");
    }
    const double cy = b.center_row * static_cast<double>(height);
    const double cx = b.center_col * static_cast<double>(width);
    const double inv = 1.0 / (2.0 * b.sigma * b.sigma);
    for (std::size_t r = 0; r < height; ++r) {
      for (std::size_t c = 0; c < width; ++c) {
        const double dy = static_cast<double>(r) + 0.5 - cy;
        const double dx = static_cast<double>(c) + 0.5 - cx;
        values[r * width + c] +=
            b.amplitude * std::exp(-(dy * dy + dx * dx) * inv);
      }
    }
  }
  return Map(height, width, std::move(values));
}

BiasFixtureData GenerateBiasFixture(const BiasFixture& f) {
  if (f.n_images == 0 || f.height == 0 || f.width == 0 || f.mask_scale == 0) {
    throw Error(ErrorCode::kInvalidArgument, "empty fixture");
  }
  if (!(f.leakage >= 0.0 && f.leakage <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "leakage must be in [0, 1]");
  }

  std::vector<ImageSample> samples(f.n_images);
  ParallelFor(f.n_images,
              [&](std::size_t i) { samples[i] = GenerateImage(f, i); });

  BiasFixtureData data;
  std::vector<std::string> ids;
  std::vector<std::uint8_t> truth;
  PredictionTable predictions;
  predictions.attributes = {std::string(kFixtureTarget),
                            std::string(kFixtureProtected)};
  for (std::size_t i = 0; i < f.n_images; ++i) {
    ImageSample& s = samples[i];
    const std::string id = ImageId(i);
    data.attention.records.push_back(
        {id + "/" + std::string(kFixtureTarget), MapKind::kAttention,
         std::move(s.attention)});
    data.masks.records.push_back({id + "/" + std::string(kBirdMask),
                                  MapKind::kMask, std::move(s.bird)});
    data.masks.records.push_back({id + "/" + std::string(kBackgroundMask),
                                  MapKind::kMask, std::move(s.background)});
    ids.push_back(id);
    truth.push_back(s.bird_label);
    truth.push_back(s.water_label);
    predictions.image_ids.push_back(id);
    predictions.scores.push_back(s.prediction);
    predictions.scores.push_back(s.water_label ? 0.9 : 0.1);
  }
  data.labels = LabelTable(
      ids, {std::string(kFixtureTarget), std::string(kFixtureProtected)},
      std::move(truth));
  data.labels.AttachPredictions(predictions);
  return data;
}

}  // namespace aiou
