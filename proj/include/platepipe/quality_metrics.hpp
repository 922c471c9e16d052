#pragma once

#include "platepipe/image.hpp"

namespace platepipe {

struct QualityReport {
  double psnr_db = 0.0;  // +inf when images are identical
  double ssim = 0.0;
  double mssim = 0.0;
};

/// Peak signal-to-noise ratio over all samples with a 255 peak.
/// Identical images return +infinity.
double psnr(const Image& reference, const Image& test);

/// Structural similarity computed as a single window over the whole image,
/// population statistics, C1=(0.01*255)^2, C2=(0.03*255)^2. Grayscaled
/// internally.
double ssim_global(const Image& reference, const Image& test);

/// Mean of the local SSIM map under an 11x11 Gaussian window (sigma 1.5),
/// valid-region sliding. Requires both dimensions >= 11.
double mssim(const Image& reference, const Image& test);

QualityReport quality_report(const Image& reference, const Image& test);

}  // namespace platepipe
