#pragma once

#include <vector>

#include "platepipe/image.hpp"

namespace platepipe {

struct BlurGateConfig {
  double threshold = 100.0;  // Laplacian-variance units on 8-bit grayscale

  bool valid() const;
};

struct BlurVerdict {
  double variance = 0.0;
  bool is_blurred = false;
  double threshold_used = 0.0;
};

/// Population variance of the unclamped Laplacian response. Color input is
/// grayscaled first. Higher means sharper.
double laplacian_variance(const Image& img);

/// Gate decision: at or below threshold counts as blurred, so the boundary
/// case takes the deblur path.
BlurVerdict check_blur(const Image& img, const BlurGateConfig& cfg);

struct CalibrationResult {
  double threshold = 0.0;
  bool separable = false;
};

/// Recommends a gate threshold from labeled variance samples. When the sets
/// separate, returns the midpoint between max blurred and min sharp variance;
/// otherwise scans cut points for the fewest misclassifications, ties broken
/// toward the lower threshold.
CalibrationResult calibrate_threshold(const std::vector<double>& sharp_variances,
                                      const std::vector<double>& blurred_variances);

CalibrationResult calibrate(const std::vector<Image>& sharp_set,
                            const std::vector<Image>& blurred_set);

}  // namespace platepipe
