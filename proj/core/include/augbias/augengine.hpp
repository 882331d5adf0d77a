// Copyright (c) 2026, The augbias Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#ifndef AUGBIAS_AUGENGINE_HPP_
#define AUGBIAS_AUGENGINE_HPP_

#include <cstddef>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include "augbias/common.hpp"
#include "augbias/policy.hpp"
#include "augbias/rng.hpp"

namespace augbias {

/// RGB image, row-major HWC, values in [0, 1].
class Image {
 public:
  static constexpr int kChannels = 3;

  Image(int height, int width, float fill = 0.0f);

  int height() const { return height_; }
  int width() const { return width_; }

  float& at(int y, int x, int c) { return data_[index(y, x, c)]; }
  float at(int y, int x, int c) const { return data_[index(y, x, c)]; }

  std::span<float> data() { return data_; }
  std::span<const float> data() const { return data_; }

  bool operator==(const Image&) const = default;

 private:
  std::size_t index(int y, int x, int c) const {
    return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x)) *
               kChannels +
           static_cast<std::size_t>(c);
  }

  int height_;
  int width_;
  std::vector<float> data_;
};

struct RrcParams {
  double s_low = 0.08;
  double s_up = 1.0;
  double r_low = 3.0 / 4.0;
  double r_up = 4.0 / 3.0;
  int out_resolution = 176;

  void validate() const;
};

struct CropRect {
  int top = 0;
  int left = 0;
  int height = 0;
  int width = 0;

  bool operator==(const CropRect&) const = default;
};

/// Crop size (height, width) for scale s and aspect r on an h x w image, or
/// nullopt if it does not fit.
std::optional<std::pair<int, int>> rrc_crop_size(int h, int w, double s, double r);

/// Centered crop used once every attempt has been rejected: the full image
/// with its aspect ratio clamped into [r_low, r_up].
CropRect rrc_fallback(const RrcParams& params, int h, int w);

/// s ~ U[s_low, s_up] once, then r ~ U[r_low, r_up] for up to ten attempts
/// until the crop fits, then the centered fallback. The offset is uniform
/// over valid positions.
CropRect rrc_sample(const RrcParams& params, int h, int w, Rng& rng);

/// Crop then bilinear resize (half-pixel centers) to out_resolution squared.
Image rrc_apply(const Image& img, const CropRect& rect, int out_resolution);

Image hflip(const Image& img);

/// With probability p, applies brightness, contrast, saturation and hue
/// jitter of intensity c in random order, clamping after each step.
Image colorjitter(const Image& img, double c, double p, Rng& rng);

/// ITU-R 601 luma.
inline float luma(float r, float g, float b) { return 0.299f * r + 0.587f * g + 0.114f * b; }

struct Mixed {
  std::vector<double> input;
  std::vector<double> target;
};

/// lambda * (x_i, y_i) + (1 - lambda) * (x_j, y_j).
Mixed mixup(std::span<const double> x_i, std::span<const double> x_j, std::span<const double> y_i,
            std::span<const double> y_j, double lambda);
Image mixup(const Image& x_i, const Image& x_j, double lambda);

/// lambda ~ Beta(alpha, alpha).
double sample_mixup_lambda(double alpha, Rng& rng);

struct JitterConfig {
  double intensity = 0.1;
  double probability = 0.5;
};

struct TransformConfig {
  RrcParams rrc;  // s_low is replaced by the policy strength
  double flip_probability = 0.5;
  std::optional<JitterConfig> jitter;
  /// When non-empty, labels outside this set trigger a warning.
  std::set<ClassId> known_classes;
  std::ostream* warnings = nullptr;  // defaults to std::clog
};

/// RRC at the class's policy strength, then flip, then optional jitter. A
/// class mapped to no augmentation is only resized.
Image apply_policy(const Image& sample, const ClassId& label, const AugPolicy& policy,
                   const TransformConfig& config, Rng& rng);

}  // namespace augbias

#endif  // AUGBIAS_AUGENGINE_HPP_
