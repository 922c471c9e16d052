#include "platepipe/image.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

namespace platepipe {

namespace {

std::uint8_t clamp_u8(double v) {
  long r = std::lround(v);
  return static_cast<std::uint8_t>(std::clamp(r, 0L, 255L));
}

void require_valid(const Image& img, const char* what) {
  if (!img.valid()) {
    throw DimensionMismatchError(std::string(what) + ": invalid image");
  }
}

}  // namespace

Image Image::create(int width, int height, int channels, std::uint8_t fill) {
  if (width < 1 || height < 1) {
    throw RangeError("Image::create: dimensions must be >= 1");
  }
  if (channels != 1 && channels != 3) {
    throw RangeError("Image::create: channels must be 1 or 3");
  }
  Image img;
  img.width = width;
  img.height = height;
  img.channels = channels;
  img.data.assign(static_cast<std::size_t>(width) * height * channels, fill);
  return img;
}

Plane Plane::create(int width, int height, double fill) {
  Plane p;
  p.width = width;
  p.height = height;
  p.samples.assign(static_cast<std::size_t>(width) * height, fill);
  return p;
}

Kernel::Kernel(int size, std::vector<double> weights) : size(size), weights(std::move(weights)) {
  if (size < 1 || size % 2 == 0) {
    throw EvenKernelError("Kernel: size must be odd and >= 1, got " + std::to_string(size));
  }
  if (this->weights.size() != static_cast<std::size_t>(size) * size) {
    throw RangeError("Kernel: weight count does not match size*size");
  }
}

Kernel Kernel::laplacian() {
  return Kernel(3, {0, 1, 0, 1, -4, 1, 0, 1, 0});
}

Kernel Kernel::box(int size) {
  if (size % 2 == 0) {
    throw EvenKernelError("box kernel size must be odd, got " + std::to_string(size));
  }
  double w = 1.0 / (static_cast<double>(size) * size);
  return Kernel(size, std::vector<double>(static_cast<std::size_t>(size) * size, w));
}

bool BBox::valid() const {
  return std::isfinite(x_min) && std::isfinite(y_min) && std::isfinite(x_max) &&
         std::isfinite(y_max) && x_min < x_max && y_min < y_max;
}

BBox LetterboxMapping::to_canvas(const BBox& b) const {
  return {b.x_min * scale + pad_left, b.y_min * scale + pad_top, b.x_max * scale + pad_left,
          b.y_max * scale + pad_top};
}

BBox LetterboxMapping::to_source(const BBox& b) const {
  return {(b.x_min - pad_left) / scale, (b.y_min - pad_top) / scale, (b.x_max - pad_left) / scale,
          (b.y_max - pad_top) / scale};
}

LetterboxMapping letterbox_mapping(int src_w, int src_h, int dst_w, int dst_h) {
  LetterboxMapping m;
  m.scale = std::min(static_cast<double>(dst_w) / src_w, static_cast<double>(dst_h) / src_h);
  m.content_w = std::max(1, static_cast<int>(std::lround(src_w * m.scale)));
  m.content_h = std::max(1, static_cast<int>(std::lround(src_h * m.scale)));
  m.pad_left = (dst_w - m.content_w) / 2;
  m.pad_top = (dst_h - m.content_h) / 2;
  return m;
}

Image to_grayscale(const Image& img) {
  require_valid(img, "to_grayscale");
  if (img.channels == 1) return img;
  Image out = Image::create(img.width, img.height, 1);
  const std::size_t pixels = static_cast<std::size_t>(img.width) * img.height;
  for (std::size_t i = 0; i < pixels; ++i) {
    double r = img.data[i * 3 + 0];
    double g = img.data[i * 3 + 1];
    double b = img.data[i * 3 + 2];
    out.data[i] = clamp_u8(0.299 * r + 0.587 * g + 0.114 * b);
  }
  return out;
}

Plane convolve(const Image& gray, const Kernel& kernel) {
  require_valid(gray, "convolve");
  if (gray.channels != 1) {
    throw DimensionMismatchError("convolve: input must be grayscale");
  }
  const int w = gray.width, h = gray.height, r = kernel.size / 2;
  Plane out = Plane::create(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int j = 0; j < kernel.size; ++j) {
        int sy = std::clamp(y + j - r, 0, h - 1);
        for (int i = 0; i < kernel.size; ++i) {
          int sx = std::clamp(x + i - r, 0, w - 1);
          acc += static_cast<double>(gray.at(sx, sy)) * kernel.at(i, j);
        }
      }
      out.at(x, y) = acc;
    }
  }
  return out;
}

Image box_blur(const Image& img, int size) {
  require_valid(img, "box_blur");
  if (size % 2 == 0) {
    throw EvenKernelError("box_blur: size must be odd, got " + std::to_string(size));
  }
  if (size < 1) {
    throw RangeError("box_blur: size must be >= 1");
  }
  const int w = img.width, h = img.height, c = img.channels, r = size / 2;
  // Separable: horizontal running pass into doubles, then vertical.
  std::vector<double> tmp(img.data.size());
  for (int ch = 0; ch < c; ++ch) {
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        double acc = 0.0;
        for (int i = -r; i <= r; ++i) {
          acc += img.at(std::clamp(x + i, 0, w - 1), y, ch);
        }
        tmp[(static_cast<std::size_t>(y) * w + x) * c + ch] = acc;
      }
    }
  }
  Image out = Image::create(w, h, c);
  const double norm = 1.0 / (static_cast<double>(size) * size);
  for (int ch = 0; ch < c; ++ch) {
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        double acc = 0.0;
        for (int j = -r; j <= r; ++j) {
          int sy = std::clamp(y + j, 0, h - 1);
          acc += tmp[(static_cast<std::size_t>(sy) * w + x) * c + ch];
        }
        out.at(x, y, ch) = clamp_u8(acc * norm);
      }
    }
  }
  return out;
}

BBox crop_region(const BBox& box, double margin_fraction, int width, int height) {
  if (!box.valid()) {
    throw EmptyCropError("crop: degenerate box");
  }
  if (margin_fraction < 0.0) {
    throw RangeError("crop: margin_fraction must be >= 0");
  }
  const double dx = margin_fraction * box.width();
  const double dy = margin_fraction * box.height();
  double x0 = std::max(0.0, box.x_min - dx);
  double y0 = std::max(0.0, box.y_min - dy);
  double x1 = std::min(static_cast<double>(width), box.x_max + dx);
  double y1 = std::min(static_cast<double>(height), box.y_max + dy);
  BBox region{std::floor(x0), std::floor(y0), std::ceil(x1), std::ceil(y1)};
  if (region.x_max <= region.x_min || region.y_max <= region.y_min) {
    throw EmptyCropError("crop: box does not cover any pixels");
  }
  return region;
}

Image crop(const Image& img, const BBox& box, double margin_fraction) {
  require_valid(img, "crop");
  const BBox region = crop_region(box, margin_fraction, img.width, img.height);
  const int ix0 = static_cast<int>(region.x_min);
  const int iy0 = static_cast<int>(region.y_min);
  const int ix1 = static_cast<int>(region.x_max);
  const int iy1 = static_cast<int>(region.y_max);
  Image out = Image::create(ix1 - ix0, iy1 - iy0, img.channels);
  for (int y = iy0; y < iy1; ++y) {
    for (int x = ix0; x < ix1; ++x) {
      for (int ch = 0; ch < img.channels; ++ch) {
        out.at(x - ix0, y - iy0, ch) = img.at(x, y, ch);
      }
    }
  }
  return out;
}

namespace {

Image resize_stretch(const Image& img, int dst_w, int dst_h) {
  Image out = Image::create(dst_w, dst_h, img.channels);
  const double sx_scale = static_cast<double>(img.width) / dst_w;
  const double sy_scale = static_cast<double>(img.height) / dst_h;
  for (int y = 0; y < dst_h; ++y) {
    double sy = (y + 0.5) * sy_scale - 0.5;
    int y0 = static_cast<int>(std::floor(sy));
    double fy = sy - y0;
    int cy0 = std::clamp(y0, 0, img.height - 1);
    int cy1 = std::clamp(y0 + 1, 0, img.height - 1);
    for (int x = 0; x < dst_w; ++x) {
      double sx = (x + 0.5) * sx_scale - 0.5;
      int x0 = static_cast<int>(std::floor(sx));
      double fx = sx - x0;
      int cx0 = std::clamp(x0, 0, img.width - 1);
      int cx1 = std::clamp(x0 + 1, 0, img.width - 1);
      for (int ch = 0; ch < img.channels; ++ch) {
        double top = img.at(cx0, cy0, ch) * (1 - fx) + img.at(cx1, cy0, ch) * fx;
        double bot = img.at(cx0, cy1, ch) * (1 - fx) + img.at(cx1, cy1, ch) * fx;
        out.at(x, y, ch) = clamp_u8(top * (1 - fy) + bot * fy);
      }
    }
  }
  return out;
}

}  // namespace

Image resize(const Image& img, int width, int height, ResizeMode mode) {
  require_valid(img, "resize");
  if (width < 1 || height < 1) {
    throw RangeError("resize: target dimensions must be >= 1");
  }
  if (mode == ResizeMode::stretch) {
    if (width == img.width && height == img.height) return img;
    return resize_stretch(img, width, height);
  }
  LetterboxMapping m = letterbox_mapping(img.width, img.height, width, height);
  Image content = (m.content_w == img.width && m.content_h == img.height)
                      ? img
                      : resize_stretch(img, m.content_w, m.content_h);
  if (m.content_w == width && m.content_h == height) return content;
  Image out = Image::create(width, height, img.channels, kLetterboxFill);
  for (int y = 0; y < m.content_h; ++y) {
    for (int x = 0; x < m.content_w; ++x) {
      for (int ch = 0; ch < img.channels; ++ch) {
        out.at(x + m.pad_left, y + m.pad_top, ch) = content.at(x, y, ch);
      }
    }
  }
  return out;
}

std::string image_fingerprint(const Image& img) {
  // FNV-1a over the shape and 32-level quantized samples.
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](std::uint64_t v) {
    h ^= v;
    h *= 1099511628211ULL;
  };
  mix(static_cast<std::uint64_t>(img.width));
  mix(static_cast<std::uint64_t>(img.height));
  mix(static_cast<std::uint64_t>(img.channels));
  for (std::uint8_t s : img.data) {
    mix(static_cast<std::uint64_t>(s >> 3));
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

}  // namespace platepipe
