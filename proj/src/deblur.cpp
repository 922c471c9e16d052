#include "platepipe/deblur.hpp"

#include <algorithm>
#include <cmath>

namespace platepipe {

namespace {

constexpr int kScaleSize = 256;

}  // namespace

MultiScaleInput build_multiscale(const Image& img) {
  MultiScaleInput ms;
  ms.b1 = resize(img, kScaleSize, kScaleSize, ResizeMode::letterbox);
  ms.b2 = resize(ms.b1, 128, 128, ResizeMode::stretch);
  ms.b3 = resize(ms.b1, 64, 64, ResizeMode::stretch);
  return ms;
}

DeblurResult deblur(DeblurBackend& backend, const Image& img) {
  MultiScaleInput ms = build_multiscale(img);
  Image s1 = backend.run(ms);
  if (s1.width != kScaleSize || s1.height != kScaleSize) {
    throw BackendFailure("deblur backend returned " + std::to_string(s1.width) + "x" +
                         std::to_string(s1.height) + ", expected 256x256");
  }

  DeblurResult result;
  result.scale_output = s1;
  const LetterboxMapping m = letterbox_mapping(img.width, img.height, kScaleSize, kScaleSize);
  if (m.content_w == kScaleSize && m.content_h == kScaleSize) {
    result.sharp = (img.width == kScaleSize && img.height == kScaleSize)
                       ? std::move(s1)
                       : resize(s1, img.width, img.height, ResizeMode::stretch);
    return result;
  }
  BBox content{static_cast<double>(m.pad_left), static_cast<double>(m.pad_top),
               static_cast<double>(m.pad_left + m.content_w),
               static_cast<double>(m.pad_top + m.content_h)};
  Image content_img = crop(s1, content, 0.0);
  result.sharp = resize(content_img, img.width, img.height, ResizeMode::stretch);
  return result;
}

Image unsharp_mask(const Image& img, int blur_size, double amount) {
  Image blurred = box_blur(img, blur_size);
  Image out = Image::create(img.width, img.height, img.channels);
  for (std::size_t i = 0; i < img.data.size(); ++i) {
    double v = img.data[i] + amount * (static_cast<double>(img.data[i]) - blurred.data[i]);
    out.data[i] = static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
  }
  return out;
}

}  // namespace platepipe
