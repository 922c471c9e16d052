#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "platepipe/errors.hpp"

namespace platepipe {

/// Owned 8-bit raster, interleaved row-major. channels is 1 (gray) or 3 (RGB).
struct Image {
  int width = 0;
  int height = 0;
  int channels = 0;
  std::vector<std::uint8_t> data;

  static Image create(int width, int height, int channels, std::uint8_t fill = 0);

  std::uint8_t& at(int x, int y, int c = 0) {
    return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }
  std::uint8_t at(int x, int y, int c = 0) const {
    return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }

  std::size_t sample_count() const { return data.size(); }
  bool same_shape(const Image& other) const {
    return width == other.width && height == other.height && channels == other.channels;
  }
  bool valid() const {
    return width >= 1 && height >= 1 && (channels == 1 || channels == 3) &&
           data.size() == static_cast<std::size_t>(width) * height * channels;
  }
};

/// Unclamped real-valued plane, the output domain of convolution.
struct Plane {
  int width = 0;
  int height = 0;
  std::vector<double> samples;

  static Plane create(int width, int height, double fill = 0.0);

  double& at(int x, int y) { return samples[static_cast<std::size_t>(y) * width + x]; }
  double at(int x, int y) const { return samples[static_cast<std::size_t>(y) * width + x]; }
};

/// Square odd-sized convolution stencil.
struct Kernel {
  int size = 0;
  std::vector<double> weights;  // size*size, row-major

  Kernel(int size, std::vector<double> weights);

  /// 4-neighbor Laplacian, [[0,1,0],[1,-4,1],[0,1,0]].
  static Kernel laplacian();
  /// Uniform averaging kernel; weights sum to 1.
  static Kernel box(int size);

  double at(int i, int j) const { return weights[static_cast<std::size_t>(j) * size + i]; }
};

struct BBox {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 0.0;
  double y_max = 0.0;

  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }
  double area() const { return width() * height(); }
  double x_center() const { return 0.5 * (x_min + x_max); }
  double y_center() const { return 0.5 * (y_min + y_max); }
  bool valid() const;
};

enum class ResizeMode { letterbox, stretch };

/// Geometry of an aspect-preserving fit of src into a dst canvas. The same
/// mapping drives both pixel placement and box coordinate transforms so the
/// two can never drift apart.
struct LetterboxMapping {
  double scale = 1.0;
  int pad_left = 0;
  int pad_top = 0;
  int content_w = 0;
  int content_h = 0;

  BBox to_canvas(const BBox& b) const;
  BBox to_source(const BBox& b) const;
};

LetterboxMapping letterbox_mapping(int src_w, int src_h, int dst_w, int dst_h);

/// Gray value used to pad letterboxed canvases.
inline constexpr std::uint8_t kLetterboxFill = 114;

/// Luma conversion, gray = round(0.299 R + 0.587 G + 0.114 B).
/// 1-channel input is returned as an identical copy.
Image to_grayscale(const Image& img);

/// Convolves a grayscale image with the kernel using replicate-edge padding.
/// The result is left unclamped so downstream statistics see true magnitudes.
Plane convolve(const Image& gray, const Kernel& kernel);

/// Per-channel uniform blur, rounded and clamped back to 8 bits.
Image box_blur(const Image& img, int size);

/// The pixel region crop() extracts: box inflated by margin_fraction per
/// side, clamped to [0,w]x[0,h], rounded outward to whole pixels. Throws
/// EmptyCropError when nothing remains.
BBox crop_region(const BBox& box, double margin_fraction, int width, int height);

/// Extracts the box inflated by margin_fraction per side, clamped to image
/// bounds and rounded outward to whole pixels.
Image crop(const Image& img, const BBox& box, double margin_fraction);

Image resize(const Image& img, int width, int height, ResizeMode mode);

/// Content-identity hash for scripting deterministic backends. Samples are
/// quantized to 32 levels so resampling wobble of a few intensity steps maps
/// to the same id.
std::string image_fingerprint(const Image& img);

}  // namespace platepipe
