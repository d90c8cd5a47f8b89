#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "xpsr/common.hpp"

namespace xpsr {

// 8-bit sRGB image, interleaved RGB, no alpha.
struct ImageU8 {
  int h = 0;
  int w = 0;
  std::vector<std::uint8_t> data;  // h*w*3

  static ImageU8 zeros(int h, int w) {
    ImageU8 img;
    img.h = h;
    img.w = w;
    img.data.assign(std::size_t(h) * w * 3, 0);
    return img;
  }
  std::uint8_t& at(int y, int x, int c) { return data[(std::size_t(y) * w + x) * 3 + c]; }
  std::uint8_t at(int y, int x, int c) const { return data[(std::size_t(y) * w + x) * 3 + c]; }
};

// Value-range convention for real-valued images.
enum class Range { Unit, Model };  // Unit: [0,1] (metrics, file I/O); Model: [-1,1]

// Real-valued image stored as an (h*w) x 3 matrix, position index y*w + x.
template <typename S = float>
struct Image {
  int h = 0;
  int w = 0;
  Range range = Range::Unit;
  Mat<S> data;

  static Image constant(int h, int w, S v, Range range) {
    Image img;
    img.h = h;
    img.w = w;
    img.range = range;
    img.data = Mat<S>::Constant(Index(h) * w, 3, v);
    return img;
  }
};

// Latent map, (h*w) x channels.
template <typename S = float>
struct Latent {
  int h = 0;
  int w = 0;
  Mat<S> data;

  static Latent zeros(int h, int w, int channels = 4) {
    Latent z;
    z.h = h;
    z.w = w;
    z.data = Mat<S>::Zero(Index(h) * w, channels);
    return z;
  }
};

// ---------------------------------------------------------------------------
// Range conversions

template <typename S = float>
Image<S> to_model_range(const ImageU8& img) {
  Image<S> out;
  out.h = img.h;
  out.w = img.w;
  out.range = Range::Model;
  out.data.resize(Index(img.h) * img.w, 3);
  for (Index i = 0; i < out.data.rows(); ++i)
    for (int c = 0; c < 3; ++c)
      out.data(i, c) = S(img.data[std::size_t(i) * 3 + c]) / S(127.5) - S(1);
  return out;
}

template <typename S>
ImageU8 from_model_range(const Image<S>& img) {
  ImageU8 out = ImageU8::zeros(img.h, img.w);
  for (Index i = 0; i < img.data.rows(); ++i)
    for (int c = 0; c < 3; ++c) {
      double v = (double(img.data(i, c)) + 1.0) * 127.5;
      out.data[std::size_t(i) * 3 + c] =
          std::uint8_t(std::clamp(std::lround(v), 0l, 255l));
    }
  return out;
}

template <typename S = float>
Image<S> to_unit_range(const ImageU8& img) {
  Image<S> out;
  out.h = img.h;
  out.w = img.w;
  out.range = Range::Unit;
  out.data.resize(Index(img.h) * img.w, 3);
  for (Index i = 0; i < out.data.rows(); ++i)
    for (int c = 0; c < 3; ++c) out.data(i, c) = S(img.data[std::size_t(i) * 3 + c]) / S(255);
  return out;
}

template <typename S>
ImageU8 from_unit_range(const Image<S>& img) {
  ImageU8 out = ImageU8::zeros(img.h, img.w);
  for (Index i = 0; i < img.data.rows(); ++i)
    for (int c = 0; c < 3; ++c) {
      double v = double(img.data(i, c)) * 255.0;
      out.data[std::size_t(i) * 3 + c] =
          std::uint8_t(std::clamp(std::lround(v), 0l, 255l));
    }
  return out;
}

template <typename S>
Image<S> model_to_unit(const Image<S>& img) {
  Image<S> out = img;
  if (img.range == Range::Model) {
    out.data = (img.data.array() + S(1)) * S(0.5);
    out.range = Range::Unit;
  }
  return out;
}

template <typename S>
Image<S> unit_to_model(const Image<S>& img) {
  Image<S> out = img;
  if (img.range == Range::Unit) {
    out.data = img.data.array() * S(2) - S(1);
    out.range = Range::Model;
  }
  return out;
}

template <typename S>
void clamp_to_range(Image<S>& img) {
  S lo = img.range == Range::Unit ? S(0) : S(-1);
  img.data = img.data.array().max(lo).min(S(1));
}

// ---------------------------------------------------------------------------
// Resampling primitives

// Block-average downsampling of an (h*w) x c map by an integer factor.
template <typename S>
Mat<S> downsample_avg_map(const Mat<S>& m, int h, int w, int factor) {
  if (factor < 1 || h % factor != 0 || w % factor != 0)
    throw NonDivisibleShape("downsample_avg: " + std::to_string(h) + "x" +
                            std::to_string(w) + " not divisible by " +
                            std::to_string(factor));
  if (factor == 1) return m;
  const int oh = h / factor, ow = w / factor;
  const Index c = m.cols();
  Mat<S> out(Index(oh) * ow, c);
  const S inv = S(1) / S(factor * factor);
  for (int oy = 0; oy < oh; ++oy)
    for (int ox = 0; ox < ow; ++ox) {
      for (Index ch = 0; ch < c; ++ch) {
        S acc = 0;
        for (int dy = 0; dy < factor; ++dy)
          for (int dx = 0; dx < factor; ++dx)
            acc += m(Index(oy * factor + dy) * w + (ox * factor + dx), ch);
        out(Index(oy) * ow + ox, ch) = acc * inv;
      }
    }
  return out;
}

template <typename S>
Image<S> downsample_avg(const Image<S>& img, int factor) {
  Image<S> out;
  out.h = img.h / factor;
  out.w = img.w / factor;
  out.range = img.range;
  out.data = downsample_avg_map(img.data, img.h, img.w, factor);
  return out;
}

template <typename S>
Latent<S> downsample_avg(const Latent<S>& z, int factor) {
  Latent<S> out;
  out.h = z.h / factor;
  out.w = z.w / factor;
  out.data = downsample_avg_map(z.data, z.h, z.w, factor);
  return out;
}

namespace detail {

// Catmull-Rom cubic kernel (a = -0.5).
inline double cubic_weight(double t) {
  t = std::abs(t);
  if (t < 1.0) return (1.5 * t - 2.5) * t * t + 1.0;
  if (t < 2.0) return ((-0.5 * t + 2.5) * t - 4.0) * t + 2.0;
  return 0.0;
}

struct CubicTaps {
  int idx[4];
  double w[4];
};

// Center-aligned source taps for one output coordinate, edge-clamped.
inline CubicTaps cubic_taps(int di, int dst, int src) {
  double sx = (di + 0.5) * (double(src) / dst) - 0.5;
  int base = int(std::floor(sx));
  double frac = sx - base;
  CubicTaps taps;
  for (int k = 0; k < 4; ++k) {
    taps.idx[k] = std::clamp(base - 1 + k, 0, src - 1);
    taps.w[k] = cubic_weight(frac - (k - 1));
  }
  double sum = taps.w[0] + taps.w[1] + taps.w[2] + taps.w[3];
  for (double& v : taps.w) v /= sum;
  return taps;
}

inline double linear_weight(double t) {
  t = std::abs(t);
  return t < 1.0 ? 1.0 - t : 0.0;
}

}  // namespace detail

// Separable Catmull-Rom resize of an (h*w) x c map (row pass, then column pass).
template <typename S>
Mat<S> resize_bicubic_map(const Mat<S>& m, int h, int w, int oh, int ow) {
  const Index c = m.cols();
  Mat<S> tmp(Index(h) * ow, c);
  for (int ox = 0; ox < ow; ++ox) {
    auto taps = detail::cubic_taps(ox, ow, w);
    for (int y = 0; y < h; ++y)
      for (Index ch = 0; ch < c; ++ch) {
        double acc = 0;
        for (int k = 0; k < 4; ++k)
          acc += taps.w[k] * double(m(Index(y) * w + taps.idx[k], ch));
        tmp(Index(y) * ow + ox, ch) = S(acc);
      }
  }
  Mat<S> out(Index(oh) * ow, c);
  for (int oy = 0; oy < oh; ++oy) {
    auto taps = detail::cubic_taps(oy, oh, h);
    for (int x = 0; x < ow; ++x)
      for (Index ch = 0; ch < c; ++ch) {
        double acc = 0;
        for (int k = 0; k < 4; ++k)
          acc += taps.w[k] * double(tmp(Index(taps.idx[k]) * ow + x, ch));
        out(Index(oy) * ow + x, ch) = S(acc);
      }
  }
  return out;
}

template <typename S>
Image<S> resize_bicubic(const Image<S>& img, int oh, int ow) {
  Image<S> out;
  out.h = oh;
  out.w = ow;
  out.range = img.range;
  out.data = resize_bicubic_map(img.data, img.h, img.w, oh, ow);
  return out;
}

template <typename S>
Image<S> upsample_bicubic(const Image<S>& img, int factor) {
  if (factor < 1) throw ShapeError("upsample_bicubic: factor must be >= 1");
  if (factor == 1) return img;
  return resize_bicubic(img, img.h * factor, img.w * factor);
}

template <typename S>
Image<S> resize_bilinear(const Image<S>& img, int oh, int ow) {
  Image<S> out;
  out.h = oh;
  out.w = ow;
  out.range = img.range;
  out.data.resize(Index(oh) * ow, 3);
  for (int oy = 0; oy < oh; ++oy) {
    double sy = (oy + 0.5) * (double(img.h) / oh) - 0.5;
    int y0 = std::clamp(int(std::floor(sy)), 0, img.h - 1);
    int y1 = std::min(y0 + 1, img.h - 1);
    double fy = std::clamp(sy - std::floor(sy), 0.0, 1.0);
    for (int ox = 0; ox < ow; ++ox) {
      double sx = (ox + 0.5) * (double(img.w) / ow) - 0.5;
      int x0 = std::clamp(int(std::floor(sx)), 0, img.w - 1);
      int x1 = std::min(x0 + 1, img.w - 1);
      double fx = std::clamp(sx - std::floor(sx), 0.0, 1.0);
      for (int c = 0; c < 3; ++c) {
        double top = (1 - fx) * img.data(Index(y0) * img.w + x0, c) +
                     fx * img.data(Index(y0) * img.w + x1, c);
        double bot = (1 - fx) * img.data(Index(y1) * img.w + x0, c) +
                     fx * img.data(Index(y1) * img.w + x1, c);
        out.data(Index(oy) * ow + ox, c) = S((1 - fy) * top + fy * bot);
      }
    }
  }
  return out;
}

// Box-filter resize; collapses to exact block averaging on integer ratios.
template <typename S>
Image<S> resize_area(const Image<S>& img, int oh, int ow) {
  if (oh <= img.h && ow <= img.w && img.h % oh == 0 && img.w % ow == 0 &&
      img.h / oh == img.w / ow)
    return downsample_avg(img, img.h / oh);
  Image<S> out;
  out.h = oh;
  out.w = ow;
  out.range = img.range;
  out.data.resize(Index(oh) * ow, 3);
  const double ry = double(img.h) / oh, rx = double(img.w) / ow;
  for (int oy = 0; oy < oh; ++oy) {
    double y_lo = oy * ry, y_hi = (oy + 1) * ry;
    for (int ox = 0; ox < ow; ++ox) {
      double x_lo = ox * rx, x_hi = (ox + 1) * rx;
      double acc[3] = {0, 0, 0};
      double area = 0;
      for (int y = int(std::floor(y_lo)); y < int(std::ceil(y_hi)); ++y) {
        double wy = std::min<double>(y + 1, y_hi) - std::max<double>(y, y_lo);
        int yc = std::clamp(y, 0, img.h - 1);
        for (int x = int(std::floor(x_lo)); x < int(std::ceil(x_hi)); ++x) {
          double wx = std::min<double>(x + 1, x_hi) - std::max<double>(x, x_lo);
          int xc = std::clamp(x, 0, img.w - 1);
          for (int c = 0; c < 3; ++c)
            acc[c] += wy * wx * double(img.data(Index(yc) * img.w + xc, c));
          area += wy * wx;
        }
      }
      for (int c = 0; c < 3; ++c) out.data(Index(oy) * ow + ox, c) = S(acc[c] / area);
    }
  }
  return out;
}

inline ImageU8 center_crop(const ImageU8& img, int size) {
  if (img.h < size || img.w < size)
    throw ShapeError("center_crop: image " + std::to_string(img.w) + "x" +
                     std::to_string(img.h) + " smaller than crop " +
                     std::to_string(size));
  ImageU8 out = ImageU8::zeros(size, size);
  const int y0 = (img.h - size) / 2, x0 = (img.w - size) / 2;
  for (int y = 0; y < size; ++y)
    for (int x = 0; x < size; ++x)
      for (int c = 0; c < 3; ++c) out.at(y, x, c) = img.at(y0 + y, x0 + x, c);
  return out;
}

// ---------------------------------------------------------------------------
// PNG I/O (8-bit sRGB, alpha stripped on read). Implemented in image_io.cpp.

ImageU8 read_png(const std::filesystem::path& path);
void write_png(const std::filesystem::path& path, const ImageU8& img);

// ---------------------------------------------------------------------------
// Run configuration. The config file is a flat key-value document whose keys
// match these field names exactly; unknown keys are rejected.

struct RunConfig {
  int hr_size = 128;  // full-scale runs use 512
  int sr_factor = 4;
  int latent_factor = 8;
  int latent_channels = 4;
  int timesteps = 1000;
  int sampler_steps = 20;
  double lambda_dfc = 0.05;
  double guidance_scale = 5.5;
  double lr = 5e-5;
  double weight_decay = 1e-2;
  int batch = 32;
  std::uint64_t seed = 0;

  // toy architecture knobs (scale-parametric stand-ins)
  int embed_dim = 64;
  int context_len = 77;
  int vocab_size = 4096;
  int text_layers = 2;
  int heads = 4;
  int unet_width = 64;           // per-scale widths are (w, 2w, 2w)
  int image_encoder_width = 16;  // pyramid widths are (w, 2w, 4w)

  // training extents
  int ae_steps = 1200;
  int base_steps = 2000;
  int control_steps = 2000;
  double prompt_dropout = 0.1;

  int lr_size() const { return hr_size / sr_factor; }
  int latent_size() const { return hr_size / latent_factor; }

  void validate() const;
};

RunConfig parse_config_text(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);
void apply_override(RunConfig& cfg, const std::string& key, const std::string& value);
std::string config_to_text(const RunConfig& cfg);

}  // namespace xpsr
