#include "platepipe/quality_metrics.hpp"

#include <array>
#include <cmath>
#include <limits>

namespace platepipe {

namespace {

constexpr double kC1 = (0.01 * 255.0) * (0.01 * 255.0);
constexpr double kC2 = (0.03 * 255.0) * (0.03 * 255.0);

void require_same_shape(const Image& a, const Image& b, const char* what) {
  if (!a.valid() || !b.valid() || !a.same_shape(b)) {
    throw DimensionMismatchError(std::string(what) + ": images must have identical shape");
  }
}

// 11x11 Gaussian weights, sigma 1.5, normalized to sum 1.
const std::array<double, 121>& gaussian_window() {
  static const std::array<double, 121> window = [] {
    std::array<double, 121> w{};
    double sum = 0.0;
    for (int j = 0; j < 11; ++j) {
      for (int i = 0; i < 11; ++i) {
        double dx = i - 5.0, dy = j - 5.0;
        double g = std::exp(-(dx * dx + dy * dy) / (2.0 * 1.5 * 1.5));
        w[static_cast<std::size_t>(j) * 11 + i] = g;
        sum += g;
      }
    }
    for (double& v : w) v /= sum;
    return w;
  }();
  return window;
}

double ssim_from_stats(double mx, double my, double vx, double vy, double cov) {
  return ((2.0 * mx * my + kC1) * (2.0 * cov + kC2)) /
         ((mx * mx + my * my + kC1) * (vx + vy + kC2));
}

}  // namespace

double psnr(const Image& reference, const Image& test) {
  require_same_shape(reference, test, "psnr");
  double se = 0.0;
  for (std::size_t i = 0; i < reference.data.size(); ++i) {
    double d = static_cast<double>(reference.data[i]) - static_cast<double>(test.data[i]);
    se += d * d;
  }
  double mse = se / static_cast<double>(reference.data.size());
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(255.0 * 255.0 / mse);
}

double ssim_global(const Image& reference, const Image& test) {
  require_same_shape(reference, test, "ssim");
  Image a = to_grayscale(reference);
  Image b = to_grayscale(test);
  const std::size_t n = a.data.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += a.data[i];
    my += b.data[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double vx = 0.0, vy = 0.0, cov = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double da = a.data[i] - mx;
    double db = b.data[i] - my;
    vx += da * da;
    vy += db * db;
    cov += da * db;
  }
  vx /= static_cast<double>(n);
  vy /= static_cast<double>(n);
  cov /= static_cast<double>(n);
  return ssim_from_stats(mx, my, vx, vy, cov);
}

double mssim(const Image& reference, const Image& test) {
  require_same_shape(reference, test, "mssim");
  if (reference.width < 11 || reference.height < 11) {
    throw TooSmallError("mssim: both dimensions must be >= 11");
  }
  Image a = to_grayscale(reference);
  Image b = to_grayscale(test);
  const auto& w = gaussian_window();
  const int out_w = a.width - 10;
  const int out_h = a.height - 10;
  double sum = 0.0;
  for (int y = 0; y < out_h; ++y) {
    for (int x = 0; x < out_w; ++x) {
      double mx = 0.0, my = 0.0;
      for (int j = 0; j < 11; ++j) {
        for (int i = 0; i < 11; ++i) {
          double wij = w[static_cast<std::size_t>(j) * 11 + i];
          mx += wij * a.at(x + i, y + j);
          my += wij * b.at(x + i, y + j);
        }
      }
      double vx = 0.0, vy = 0.0, cov = 0.0;
      for (int j = 0; j < 11; ++j) {
        for (int i = 0; i < 11; ++i) {
          double wij = w[static_cast<std::size_t>(j) * 11 + i];
          double da = a.at(x + i, y + j) - mx;
          double db = b.at(x + i, y + j) - my;
          vx += wij * da * da;
          vy += wij * db * db;
          cov += wij * da * db;
        }
      }
      sum += ssim_from_stats(mx, my, vx, vy, cov);
    }
  }
  return sum / (static_cast<double>(out_w) * out_h);
}

QualityReport quality_report(const Image& reference, const Image& test) {
  return {psnr(reference, test), ssim_global(reference, test), mssim(reference, test)};
}

}  // namespace platepipe
