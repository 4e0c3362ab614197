#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "spinegrade/errors.hpp"
#include "spinegrade/rng.hpp"

namespace sg {

template <typename T>
using ImageT = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using ImageF = ImageT<float>;
using MaskImage = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

namespace img {

// Bilinear sample at (r, c) with clamped borders.
template <typename T>
T sample_bilinear(const ImageT<T>& im, double r, double c) {
  const int h = static_cast<int>(im.rows()), w = static_cast<int>(im.cols());
  r = std::clamp(r, 0.0, static_cast<double>(h - 1));
  c = std::clamp(c, 0.0, static_cast<double>(w - 1));
  int r0 = static_cast<int>(std::floor(r)), c0 = static_cast<int>(std::floor(c));
  int r1 = std::min(r0 + 1, h - 1), c1 = std::min(c0 + 1, w - 1);
  double fr = r - r0, fc = c - c0;
  double v = (1 - fr) * ((1 - fc) * im(r0, c0) + fc * im(r0, c1)) +
             fr * ((1 - fc) * im(r1, c0) + fc * im(r1, c1));
  return static_cast<T>(v);
}

// Half-pixel-center bilinear resize (matches the usual image-resize convention).
template <typename T>
ImageT<T> resize_bilinear(const ImageT<T>& im, int oh, int ow) {
  if (oh <= 0 || ow <= 0) throw ValidationError("resize: output size must be positive");
  ImageT<T> out(oh, ow);
  const double sr = static_cast<double>(im.rows()) / oh;
  const double sc = static_cast<double>(im.cols()) / ow;
  for (int r = 0; r < oh; ++r) {
    const double src_r = (r + 0.5) * sr - 0.5;
    for (int c = 0; c < ow; ++c) {
      const double src_c = (c + 0.5) * sc - 0.5;
      out(r, c) = sample_bilinear(im, src_r, src_c);
    }
  }
  return out;
}

inline MaskImage resize_nearest(const MaskImage& im, int oh, int ow) {
  if (oh <= 0 || ow <= 0) throw ValidationError("resize: output size must be positive");
  MaskImage out(oh, ow);
  const double sr = static_cast<double>(im.rows()) / oh;
  const double sc = static_cast<double>(im.cols()) / ow;
  for (int r = 0; r < oh; ++r) {
    int src_r = std::clamp(static_cast<int>(std::floor((r + 0.5) * sr)), 0,
                           static_cast<int>(im.rows()) - 1);
    for (int c = 0; c < ow; ++c) {
      int src_c = std::clamp(static_cast<int>(std::floor((c + 0.5) * sc)), 0,
                             static_cast<int>(im.cols()) - 1);
      out(r, c) = im(src_r, src_c);
    }
  }
  return out;
}

// Rotation about the image centre by `degrees` (counter-clockwise), bilinear
// interpolation, out-of-frame pixels take `fill`.
template <typename T>
ImageT<T> rotate_bilinear(const ImageT<T>& im, double degrees, T fill = T(0)) {
  const double a = degrees * M_PI / 180.0;
  const double ca = std::cos(a), sa = std::sin(a);
  const double cr = (im.rows() - 1) * 0.5, cc = (im.cols() - 1) * 0.5;
  ImageT<T> out(im.rows(), im.cols());
  for (int r = 0; r < im.rows(); ++r) {
    for (int c = 0; c < im.cols(); ++c) {
      // inverse map: rotate destination offset by -a
      const double dr = r - cr, dc = c - cc;
      const double sr = cr + ca * dr + sa * dc;
      const double sc = cc - sa * dr + ca * dc;
      if (sr < 0 || sr > im.rows() - 1 || sc < 0 || sc > im.cols() - 1) {
        out(r, c) = fill;
      } else {
        out(r, c) = sample_bilinear(im, sr, sc);
      }
    }
  }
  return out;
}

inline MaskImage rotate_nearest(const MaskImage& im, double degrees, std::uint8_t fill = 0) {
  const double a = degrees * M_PI / 180.0;
  const double ca = std::cos(a), sa = std::sin(a);
  const double cr = (im.rows() - 1) * 0.5, cc = (im.cols() - 1) * 0.5;
  MaskImage out(im.rows(), im.cols());
  for (int r = 0; r < im.rows(); ++r) {
    for (int c = 0; c < im.cols(); ++c) {
      const double dr = r - cr, dc = c - cc;
      const double sr = cr + ca * dr + sa * dc;
      const double sc = cc - sa * dr + ca * dc;
      int ir = static_cast<int>(std::lround(sr)), ic = static_cast<int>(std::lround(sc));
      if (ir < 0 || ir >= im.rows() || ic < 0 || ic >= im.cols()) {
        out(r, c) = fill;
      } else {
        out(r, c) = im(ir, ic);
      }
    }
  }
  return out;
}

template <typename T>
std::vector<T> gaussian_kernel(double sigma) {
  int radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
  std::vector<T> k(2 * radius + 1);
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    double v = std::exp(-0.5 * (i * i) / (sigma * sigma));
    k[i + radius] = static_cast<T>(v);
    sum += v;
  }
  for (auto& v : k) v = static_cast<T>(v / sum);
  return k;
}

// Separable Gaussian blur with clamped borders.
template <typename T>
ImageT<T> gaussian_blur(const ImageT<T>& im, double sigma) {
  if (sigma <= 0) return im;
  const auto k = gaussian_kernel<T>(sigma);
  const int radius = static_cast<int>(k.size() / 2);
  const int h = static_cast<int>(im.rows()), w = static_cast<int>(im.cols());
  ImageT<T> tmp(h, w), out(h, w);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      double acc = 0;
      for (int i = -radius; i <= radius; ++i)
        acc += k[i + radius] * im(r, std::clamp(c + i, 0, w - 1));
      tmp(r, c) = static_cast<T>(acc);
    }
  }
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      double acc = 0;
      for (int i = -radius; i <= radius; ++i)
        acc += k[i + radius] * tmp(std::clamp(r + i, 0, h - 1), c);
      out(r, c) = static_cast<T>(acc);
    }
  }
  return out;
}

// Linearly interpolated percentile (p in [0,100]).
template <typename T>
double percentile_of(std::vector<T> v, double p) {
  if (v.empty()) throw ValidationError("percentile: empty input");
  std::sort(v.begin(), v.end());
  const double idx = std::clamp(p, 0.0, 100.0) / 100.0 * (v.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(idx));
  const std::size_t hi = static_cast<std::size_t>(std::ceil(idx));
  const double f = idx - lo;
  return (1.0 - f) * v[lo] + f * v[hi];
}

template <typename T>
double percentile(const ImageT<T>& im, double p) {
  std::vector<T> v(im.data(), im.data() + im.size());
  return percentile_of(std::move(v), p);
}

// Smooth displacement field on a coarse node grid, bilinearly upsampled;
// border nodes stay fixed so content is never pulled out of frame.
template <typename T>
ImageT<T> grid_distortion(const ImageT<T>& im, int num_cells, double magnitude,
                          std::uint64_t seed) {
  const int h = static_cast<int>(im.rows()), w = static_cast<int>(im.cols());
  const int n = num_cells + 1;  // node count per axis
  ImageT<double> dr(n, n), dc(n, n);
  Rng rng(seed);
  const double cell_h = static_cast<double>(h) / num_cells;
  const double cell_w = static_cast<double>(w) / num_cells;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const bool border = (i == 0 || j == 0 || i == n - 1 || j == n - 1);
      dr(i, j) = border ? 0.0 : rng.uniform(-magnitude, magnitude) * cell_h;
      dc(i, j) = border ? 0.0 : rng.uniform(-magnitude, magnitude) * cell_w;
    }
  }
  ImageT<T> out(h, w);
  for (int r = 0; r < h; ++r) {
    const double gi = static_cast<double>(r) / h * num_cells;
    for (int c = 0; c < w; ++c) {
      const double gj = static_cast<double>(c) / w * num_cells;
      const double drr = sample_bilinear(dr, gi, gj);
      const double dcc = sample_bilinear(dc, gi, gj);
      out(r, c) = sample_bilinear(im, r + drr, c + dcc);
    }
  }
  return out;
}

// Downsample by `factor` then upsample back: simulated resolution loss.
template <typename T>
ImageT<T> downscale_upscale(const ImageT<T>& im, double factor) {
  const int h = static_cast<int>(im.rows()), w = static_cast<int>(im.cols());
  const int sh = std::max(2, static_cast<int>(std::lround(h / factor)));
  const int sw = std::max(2, static_cast<int>(std::lround(w / factor)));
  return resize_bilinear(resize_bilinear(im, sh, sw), h, w);
}

}  // namespace img
}  // namespace sg
