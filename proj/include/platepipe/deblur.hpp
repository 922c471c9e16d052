#pragma once

#include <atomic>

#include "platepipe/image.hpp"

namespace platepipe {

/// The three resolution scales fed to the deblur generator.
struct MultiScaleInput {
  Image b1;  // 256x256 letterboxed input
  Image b2;  // 128x128
  Image b3;  // 64x64
};

struct DeblurResult {
  Image sharp;         // original input dimensions
  Image scale_output;  // raw 256x256 generator output, before un-letterboxing
};

class DeblurBackend {
 public:
  virtual ~DeblurBackend() = default;

  /// Produces the 256x256 sharp output from the multi-scale input.
  virtual Image run(const MultiScaleInput& input) = 0;

  virtual bool concurrent_safe() const { return false; }
};

/// Letterboxes to 256x256 (b1) and downscales to 128 (b2) and 64 (b3).
MultiScaleInput build_multiscale(const Image& img);

/// Full deblur step: build the multi-scale input, invoke the backend, then
/// un-letterbox the 256x256 output back to the source dimensions.
DeblurResult deblur(DeblurBackend& backend, const Image& img);

/// I + amount * (I - box_blur(I, blur_size)), clamped.
Image unsharp_mask(const Image& img, int blur_size = 3, double amount = 1.0);

/// Pass-through backend; useful for gating tests and as a no-op stand-in.
class IdentityDeblurBackend : public DeblurBackend {
 public:
  Image run(const MultiScaleInput& input) override {
    calls_.fetch_add(1);
    return input.b1;
  }
  bool concurrent_safe() const override { return true; }
  int calls() const { return calls_.load(); }

 private:
  std::atomic<int> calls_{0};
};

/// Deterministic edge amplifier (unsharp mask on b1). Gives gating tests a
/// measurable sharpness improvement without a trained model.
class SharpenDeblurBackend : public DeblurBackend {
 public:
  Image run(const MultiScaleInput& input) override {
    calls_.fetch_add(1);
    return unsharp_mask(input.b1);
  }
  bool concurrent_safe() const override { return true; }
  int calls() const { return calls_.load(); }

 private:
  std::atomic<int> calls_{0};
};

}  // namespace platepipe
