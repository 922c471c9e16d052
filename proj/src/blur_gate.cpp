#include "platepipe/blur_gate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace platepipe {

bool BlurGateConfig::valid() const {
  return std::isfinite(threshold) && threshold > 0.0;
}

double laplacian_variance(const Image& img) {
  Image gray = img.channels == 1 ? img : to_grayscale(img);
  Plane response = convolve(gray, Kernel::laplacian());
  const std::size_t n = response.samples.size();
  double mean = 0.0;
  for (double s : response.samples) mean += s;
  mean /= static_cast<double>(n);
  double acc = 0.0;
  for (double s : response.samples) acc += (s - mean) * (s - mean);
  return acc / static_cast<double>(n);
}

BlurVerdict check_blur(const Image& img, const BlurGateConfig& cfg) {
  if (!cfg.valid()) {
    throw RangeError("blur gate threshold must be finite and positive");
  }
  BlurVerdict v;
  v.variance = laplacian_variance(img);
  v.threshold_used = cfg.threshold;
  v.is_blurred = v.variance <= cfg.threshold;
  return v;
}

CalibrationResult calibrate_threshold(const std::vector<double>& sharp_variances,
                                      const std::vector<double>& blurred_variances) {
  if (sharp_variances.empty() || blurred_variances.empty()) {
    throw EmptySetError("calibrate: both sets must be non-empty");
  }
  const double min_sharp = *std::min_element(sharp_variances.begin(), sharp_variances.end());
  const double max_blurred =
      *std::max_element(blurred_variances.begin(), blurred_variances.end());

  if (min_sharp > max_blurred) {
    return {0.5 * (min_sharp + max_blurred), true};
  }

  // Overlapping sets: classification flips only at observed variances, so
  // scanning those (plus one cut below everything) is exhaustive.
  std::vector<double> candidates;
  candidates.reserve(sharp_variances.size() + blurred_variances.size() + 1);
  double min_all = std::min(min_sharp,
                            *std::min_element(blurred_variances.begin(), blurred_variances.end()));
  candidates.push_back(min_all > 0.0 ? 0.5 * min_all
                                     : std::numeric_limits<double>::min());
  candidates.insert(candidates.end(), sharp_variances.begin(), sharp_variances.end());
  candidates.insert(candidates.end(), blurred_variances.begin(), blurred_variances.end());
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  double best_threshold = candidates.front();
  std::size_t best_errors = std::numeric_limits<std::size_t>::max();
  for (double t : candidates) {
    std::size_t errors = 0;
    for (double v : sharp_variances) {
      if (v <= t) ++errors;  // sharp classified blurred
    }
    for (double v : blurred_variances) {
      if (v > t) ++errors;  // blurred classified sharp
    }
    if (errors < best_errors) {
      best_errors = errors;
      best_threshold = t;
    }
  }
  return {best_threshold, false};
}

CalibrationResult calibrate(const std::vector<Image>& sharp_set,
                            const std::vector<Image>& blurred_set) {
  if (sharp_set.empty() || blurred_set.empty()) {
    throw EmptySetError("calibrate: both sets must be non-empty");
  }
  std::vector<double> sharp_vars, blurred_vars;
  sharp_vars.reserve(sharp_set.size());
  blurred_vars.reserve(blurred_set.size());
  for (const Image& img : sharp_set) sharp_vars.push_back(laplacian_variance(img));
  for (const Image& img : blurred_set) blurred_vars.push_back(laplacian_variance(img));
  return calibrate_threshold(sharp_vars, blurred_vars);
}

}  // namespace platepipe
