#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "platepipe/image.hpp"

namespace platepipe {

/// One labeled box in normalized center/size form, the plain-text annotation
/// convention: "class_id cx cy w h", all four reals in [0,1].
struct AnnotationRecord {
  int class_id = 0;
  double cx = 0.0;
  double cy = 0.0;
  double w = 0.0;
  double h = 0.0;
};

struct CorpusEntry {
  std::string sharp_path;
  std::string blurred_path;
  int kernel_size = 0;
};

struct CorpusManifest {
  std::vector<CorpusEntry> entries;
  std::uint64_t seed = 0;
};

enum class AugmentTag { rain, shine, snow, fog, unlit };

const char* to_string(AugmentTag tag);

struct AugmentedImage {
  AugmentTag tag;
  Image image;
};

/// Exactly five deterministic weather variants per source image (so original
/// plus variants gives the x6 corpus expansion): seeded rain streaks, a
/// brightness boost with radial highlight, seeded snow speckle, a 0.5 blend
/// toward gray 200, and a -60 brightness drop.
std::vector<AugmentedImage> augment(const Image& img, std::uint64_t seed);

/// Valid box-blur sizes for corpus synthesis: 7x7 through 19x19.
constexpr int kMinCorpusKernel = 7;
constexpr int kMaxCorpusKernel = 19;

/// Blurs every sharp image with every kernel size, writes the blurred files
/// under out_dir as PNG, and returns the pairing manifest. Sizes must be odd
/// and within [7,19].
CorpusManifest synth_blur_corpus(const std::vector<std::string>& sharp_paths,
                                 const std::vector<int>& kernel_sizes,
                                 const std::string& out_dir, std::uint64_t seed = 0);

void write_manifest(const CorpusManifest& manifest, const std::string& path);
CorpusManifest read_manifest(const std::string& path);

/// One record per line, 6-decimal fixed point. ParseError carries the
/// offending line number; values outside [0,1] raise RangeError.
std::vector<AnnotationRecord> read_annotations(const std::string& path);
void write_annotations(const std::vector<AnnotationRecord>& records, const std::string& path);

BBox denormalize(const AnnotationRecord& rec, int width, int height);
AnnotationRecord normalize(const BBox& box, int class_id, int width, int height);

struct SplitResult {
  std::vector<std::string> train;
  std::vector<std::string> val;
  std::vector<std::string> test;
};

/// Seeded 80/10/10 partition (deterministic shuffle; val and test each get
/// floor(n/10), the rest trains).
SplitResult split_dataset(std::vector<std::string> paths, std::uint64_t seed);

}  // namespace platepipe
