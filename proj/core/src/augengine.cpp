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


#include "augbias/augengine.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iostream>
#include <sstream>

namespace augbias {

Image::Image(int height, int width, float fill) : height_(height), width_(width) {
  if (height < 1 || width < 1) {
    throw ValidationError("image dimensions must be positive, got " + std::to_string(height) + "x" +
                          std::to_string(width));
  }
  data_.assign(static_cast<std::size_t>(height) * static_cast<std::size_t>(width) * kChannels, fill);
}

void RrcParams::validate() const {
  std::ostringstream msg;
  if (!(s_low > 0.0 && s_low <= s_up && s_up <= 1.0)) {
    msg << "crop scale range must satisfy 0 < s_low <= s_up <= 1, got [" << s_low << ", " << s_up << "]";
  } else if (!(r_low > 0.0 && r_low <= r_up && std::isfinite(r_up))) {
    msg << "aspect range must satisfy 0 < r_low <= r_up, got [" << r_low << ", " << r_up << "]";
  } else if (out_resolution < 1) {
    msg << "output resolution must be positive, got " << out_resolution;
  } else {
    return;
  }
  throw ValidationError(msg.str());
}

std::optional<std::pair<int, int>> rrc_crop_size(int h, int w, double s, double r) {
  const double area = s * static_cast<double>(h) * static_cast<double>(w);
  const auto cw = static_cast<int>(std::lround(std::sqrt(area * r)));
  const auto ch = static_cast<int>(std::lround(std::sqrt(area / r)));
  if (cw < 1 || ch < 1 || cw > w || ch > h) return std::nullopt;
  return std::pair{ch, cw};
}

CropRect rrc_fallback(const RrcParams& params, int h, int w) {
  const double ratio = static_cast<double>(w) / static_cast<double>(h);
  int cw = w;
  int ch = h;
  if (ratio < params.r_low) {
    ch = std::clamp(static_cast<int>(std::lround(w / params.r_low)), 1, h);
  } else if (ratio > params.r_up) {
    cw = std::clamp(static_cast<int>(std::lround(h * params.r_up)), 1, w);
  }
  return {(h - ch) / 2, (w - cw) / 2, ch, cw};
}

CropRect rrc_sample(const RrcParams& params, int h, int w, Rng& rng) {
  params.validate();
  if (h < 1 || w < 1) throw ValidationError("image dimensions must be positive");
  // Only the aspect ratio is redrawn on rejection so that the scale keeps its
  // uniform law.
  const double s = rng.uniform(params.s_low, params.s_up);
  for (int attempt = 0; attempt < 10; ++attempt) {
    const double r = rng.uniform(params.r_low, params.r_up);
    if (auto size = rrc_crop_size(h, w, s, r)) {
      const auto [ch, cw] = *size;
      const auto top = static_cast<int>(rng.uniform_int(0, h - ch));
      const auto left = static_cast<int>(rng.uniform_int(0, w - cw));
      return {top, left, ch, cw};
    }
  }
  return rrc_fallback(params, h, w);
}

Image rrc_apply(const Image& img, const CropRect& rect, int out_resolution) {
  if (out_resolution < 1) throw ValidationError("output resolution must be positive");
  if (rect.height < 1 || rect.width < 1 || rect.top < 0 || rect.left < 0 ||
      rect.top + rect.height > img.height() || rect.left + rect.width > img.width()) {
    std::ostringstream msg;
    msg << "crop (" << rect.top << ", " << rect.left << ", " << rect.height << "x" << rect.width
        << ") is outside the " << img.height() << "x" << img.width() << " image";
    throw ValidationError(msg.str());
  }
  Image out(out_resolution, out_resolution);
  const double sy = static_cast<double>(rect.height) / out_resolution;
  const double sx = static_cast<double>(rect.width) / out_resolution;

  // Source coordinate and weights per output row / column.
  struct Tap {
    int i0;
    int i1;
    float t;
  };
  auto taps = [](int n_out, double scale, int offset, int extent) {
    std::vector<Tap> v(static_cast<std::size_t>(n_out));
    for (int o = 0; o < n_out; ++o) {
      const double src = std::clamp((o + 0.5) * scale - 0.5, 0.0, static_cast<double>(extent - 1));
      const int i0 = static_cast<int>(std::floor(src));
      const int i1 = std::min(i0 + 1, extent - 1);
      v[static_cast<std::size_t>(o)] = {offset + i0, offset + i1, static_cast<float>(src - i0)};
    }
    return v;
  };
  const auto ty = taps(out_resolution, sy, rect.top, rect.height);
  const auto tx = taps(out_resolution, sx, rect.left, rect.width);

  for (int y = 0; y < out_resolution; ++y) {
    const auto& a = ty[static_cast<std::size_t>(y)];
    for (int x = 0; x < out_resolution; ++x) {
      const auto& b = tx[static_cast<std::size_t>(x)];
      for (int c = 0; c < Image::kChannels; ++c) {
        const float top = img.at(a.i0, b.i0, c) + b.t * (img.at(a.i0, b.i1, c) - img.at(a.i0, b.i0, c));
        const float bot = img.at(a.i1, b.i0, c) + b.t * (img.at(a.i1, b.i1, c) - img.at(a.i1, b.i0, c));
        out.at(y, x, c) = top + a.t * (bot - top);
      }
    }
  }
  return out;
}

Image hflip(const Image& img) {
  Image out(img.height(), img.width());
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      for (int c = 0; c < Image::kChannels; ++c) out.at(y, img.width() - 1 - x, c) = img.at(y, x, c);
    }
  }
  return out;
}

namespace {

float clamp01(float v) { return std::clamp(v, 0.0f, 1.0f); }

void adjust_brightness(Image& img, float f) {
  for (auto& v : img.data()) v = clamp01(v * f);
}

void adjust_contrast(Image& img, float f) {
  double sum = 0.0;
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) sum += luma(img.at(y, x, 0), img.at(y, x, 1), img.at(y, x, 2));
  }
  const auto mean = static_cast<float>(sum / (static_cast<double>(img.height()) * img.width()));
  for (auto& v : img.data()) v = clamp01(f * v + (1.0f - f) * mean);
}

void adjust_saturation(Image& img, float f) {
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      const float g = luma(img.at(y, x, 0), img.at(y, x, 1), img.at(y, x, 2));
      for (int c = 0; c < Image::kChannels; ++c) img.at(y, x, c) = clamp01(f * img.at(y, x, c) + (1.0f - f) * g);
    }
  }
}

void adjust_hue(Image& img, float shift) {
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      const float r = img.at(y, x, 0);
      const float g = img.at(y, x, 1);
      const float b = img.at(y, x, 2);
      const float mx = std::max({r, g, b});
      const float mn = std::min({r, g, b});
      const float delta = mx - mn;
      if (delta <= 0.0f) continue;  // achromatic pixels have no hue

      float h;
      if (mx == r) {
        h = (g - b) / delta;
      } else if (mx == g) {
        h = 2.0f + (b - r) / delta;
      } else {
        h = 4.0f + (r - g) / delta;
      }
      h = h / 6.0f + shift;
      h -= std::floor(h);

      const float s = delta / mx;
      const float v = mx;
      const float h6 = h * 6.0f;
      const int sector = static_cast<int>(h6) % 6;
      const float frac = h6 - std::floor(h6);
      const float p = v * (1.0f - s);
      const float q = v * (1.0f - s * frac);
      const float t = v * (1.0f - s * (1.0f - frac));
      static constexpr std::array<std::array<int, 3>, 6> kPick = {
          {{0, 3, 1}, {2, 0, 1}, {1, 0, 3}, {1, 2, 0}, {3, 1, 0}, {0, 1, 2}}};
      const std::array<float, 4> vals = {v, p, q, t};
      for (int c = 0; c < 3; ++c) {
        img.at(y, x, c) = clamp01(vals[static_cast<std::size_t>(kPick[static_cast<std::size_t>(sector)][static_cast<std::size_t>(c)])]);
      }
    }
  }
}

}  // namespace

Image colorjitter(const Image& img, double c, double p, Rng& rng) {
  if (!(c >= 0.0 && c < 1.0)) throw ValidationError("jitter intensity must lie in [0, 1)");
  if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("jitter probability must lie in [0, 1]");
  Image out = img;
  if (!rng.bernoulli(p)) return out;

  std::array<int, 4> order = {0, 1, 2, 3};
  for (int i = 3; i > 0; --i) std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(rng.uniform_int(0, i))]);
  for (int op : order) {
    switch (op) {
      case 0:
        adjust_brightness(out, static_cast<float>(rng.uniform(1.0 - c, 1.0 + c)));
        break;
      case 1:
        adjust_contrast(out, static_cast<float>(rng.uniform(1.0 - c, 1.0 + c)));
        break;
      case 2:
        adjust_saturation(out, static_cast<float>(rng.uniform(1.0 - c, 1.0 + c)));
        break;
      default:
        adjust_hue(out, static_cast<float>(rng.uniform(-c, c)));
        break;
    }
  }
  return out;
}

Mixed mixup(std::span<const double> x_i, std::span<const double> x_j, std::span<const double> y_i,
            std::span<const double> y_j, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw ValidationError("mixup lambda must lie in [0, 1]");
  if (x_i.size() != x_j.size() || y_i.size() != y_j.size()) {
    throw ValidationError("mixup operands have different shapes");
  }
  Mixed m;
  m.input.resize(x_i.size());
  m.target.resize(y_i.size());
  for (std::size_t i = 0; i < x_i.size(); ++i) m.input[i] = lambda * x_i[i] + (1.0 - lambda) * x_j[i];
  for (std::size_t i = 0; i < y_i.size(); ++i) m.target[i] = lambda * y_i[i] + (1.0 - lambda) * y_j[i];
  return m;
}

Image mixup(const Image& x_i, const Image& x_j, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw ValidationError("mixup lambda must lie in [0, 1]");
  if (x_i.height() != x_j.height() || x_i.width() != x_j.width()) {
    throw ValidationError("mixup images have different shapes");
  }
  Image out(x_i.height(), x_i.width());
  const auto a = x_i.data();
  const auto b = x_j.data();
  auto o = out.data();
  const auto l = static_cast<float>(lambda);
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = l * a[i] + (1.0f - l) * b[i];
  return out;
}

double sample_mixup_lambda(double alpha, Rng& rng) {
  if (!(alpha > 0.0)) throw ValidationError("mixup alpha must be positive");
  return rng.beta(alpha, alpha);
}

Image apply_policy(const Image& sample, const ClassId& label, const AugPolicy& policy,
                   const TransformConfig& config, Rng& rng) {
  std::optional<Strength> strength;
  if (!config.known_classes.empty() && !config.known_classes.contains(label)) {
    std::ostream& warn = config.warnings ? *config.warnings : std::clog;
    warn << "warning: class '" << label << "' is not in the class universe; using the default strength\n";
    strength = policy.default_strength;
  } else {
    strength = policy.strength_for(label);
  }

  const int res = config.rrc.out_resolution;
  if (!strength) return rrc_apply(sample, {0, 0, sample.height(), sample.width()}, res);

  RrcParams params = config.rrc;
  params.s_low = std::min(strength->fraction(), params.s_up);
  Image out = rrc_apply(sample, rrc_sample(params, sample.height(), sample.width(), rng), res);
  if (rng.bernoulli(config.flip_probability)) out = hflip(out);
  if (config.jitter) out = colorjitter(out, config.jitter->intensity, config.jitter->probability, rng);
  return out;
}

}  // namespace augbias
