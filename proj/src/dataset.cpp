#include "platepipe/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "platepipe/image_io.hpp"

namespace platepipe {

namespace {

namespace fs = std::filesystem;

// splitmix64; keeps augmentation byte-identical across platforms, which the
// standard distributions do not guarantee.
struct Rng {
  std::uint64_t state;

  explicit Rng(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, n). Modulo bias is irrelevant at these ranges.
  std::uint32_t below(std::uint32_t n) { return static_cast<std::uint32_t>(next() % n); }
};

std::uint8_t clamp_u8(double v) {
  return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
}

void add_brightness(Image& img, double delta) {
  for (auto& s : img.data) s = clamp_u8(s + delta);
}

void blend_pixel(Image& img, int x, int y, double target, double alpha) {
  if (x < 0 || y < 0 || x >= img.width || y >= img.height) return;
  for (int c = 0; c < img.channels; ++c) {
    img.at(x, y, c) = clamp_u8((1.0 - alpha) * img.at(x, y, c) + alpha * target);
  }
}

Image make_rain(const Image& src, std::uint64_t seed) {
  Image out = src;
  Rng rng(seed ^ 0x7261696eULL);  // "rain"
  const int streaks = std::max(20, src.width * src.height / 2000);
  for (int s = 0; s < streaks; ++s) {
    int x = static_cast<int>(rng.below(static_cast<std::uint32_t>(src.width)));
    int y = static_cast<int>(rng.below(static_cast<std::uint32_t>(src.height)));
    int len = 8 + static_cast<int>(rng.below(12));
    for (int i = 0; i < len; ++i) {
      // Slanted streak: one pixel right per three down.
      blend_pixel(out, x + i / 3, y + i, 230.0, 0.5);
    }
  }
  return out;
}

Image make_shine(const Image& src) {
  Image out = src;
  const double cx = 0.5 * (src.width - 1);
  const double cy = 0.5 * (src.height - 1);
  const double radius = 0.5 * std::hypot(static_cast<double>(src.width),
                                         static_cast<double>(src.height));
  for (int y = 0; y < src.height; ++y) {
    for (int x = 0; x < src.width; ++x) {
      double r = std::hypot(x - cx, y - cy);
      double boost = 40.0 + 60.0 * std::max(0.0, 1.0 - r / radius);
      for (int c = 0; c < src.channels; ++c) {
        out.at(x, y, c) = clamp_u8(src.at(x, y, c) + boost);
      }
    }
  }
  return out;
}

Image make_snow(const Image& src, std::uint64_t seed) {
  Image out = src;
  Rng rng(seed ^ 0x736e6f77ULL);  // "snow"
  const int flakes = std::max(30, static_cast<int>(0.015 * src.width * src.height));
  for (int s = 0; s < flakes; ++s) {
    int x = static_cast<int>(rng.below(static_cast<std::uint32_t>(src.width)));
    int y = static_cast<int>(rng.below(static_cast<std::uint32_t>(src.height)));
    int r = static_cast<int>(rng.below(2));
    for (int dy = -r; dy <= r; ++dy) {
      for (int dx = -r; dx <= r; ++dx) {
        blend_pixel(out, x + dx, y + dy, 255.0, 0.85);
      }
    }
  }
  return out;
}

Image make_fog(const Image& src) {
  Image out = src;
  for (auto& s : out.data) s = clamp_u8(0.5 * s + 0.5 * 200.0);
  return out;
}

Image make_unlit(const Image& src) {
  Image out = src;
  add_brightness(out, -60.0);
  return out;
}

std::string unique_blurred_path(const fs::path& out_dir, const fs::path& sharp, int size,
                                std::set<std::string>& used) {
  char suffix[16];
  std::snprintf(suffix, sizeof(suffix), "_k%02d", size);
  std::string base = sharp.stem().string() + suffix;
  std::string candidate = (out_dir / (base + ".png")).string();
  int n = 1;
  while (!used.insert(candidate).second) {
    candidate = (out_dir / (base + "_" + std::to_string(n++) + ".png")).string();
  }
  return candidate;
}

}  // namespace

const char* to_string(AugmentTag tag) {
  switch (tag) {
    case AugmentTag::rain: return "rain";
    case AugmentTag::shine: return "shine";
    case AugmentTag::snow: return "snow";
    case AugmentTag::fog: return "fog";
    case AugmentTag::unlit: return "unlit";
  }
  return "?";
}

std::vector<AugmentedImage> augment(const Image& img, std::uint64_t seed) {
  if (!img.valid()) throw DimensionMismatchError("augment: invalid image");
  std::vector<AugmentedImage> out;
  out.reserve(5);
  out.push_back({AugmentTag::rain, make_rain(img, seed)});
  out.push_back({AugmentTag::shine, make_shine(img)});
  out.push_back({AugmentTag::snow, make_snow(img, seed)});
  out.push_back({AugmentTag::fog, make_fog(img)});
  out.push_back({AugmentTag::unlit, make_unlit(img)});
  return out;
}

CorpusManifest synth_blur_corpus(const std::vector<std::string>& sharp_paths,
                                 const std::vector<int>& kernel_sizes,
                                 const std::string& out_dir, std::uint64_t seed) {
  for (int size : kernel_sizes) {
    if (size % 2 == 0) {
      throw EvenKernelError("synth_blur_corpus: kernel size must be odd, got " +
                            std::to_string(size));
    }
    if (size < kMinCorpusKernel || size > kMaxCorpusKernel) {
      throw RangeError("synth_blur_corpus: kernel size " + std::to_string(size) +
                       " outside [7,19]");
    }
  }
  fs::create_directories(out_dir);

  CorpusManifest manifest;
  manifest.seed = seed;
  std::set<std::string> used_paths;
  for (const std::string& sharp_path : sharp_paths) {
    Image sharp = load_image(sharp_path);
    for (int size : kernel_sizes) {
      Image blurred = box_blur(sharp, size);
      std::string blurred_path =
          unique_blurred_path(out_dir, fs::path(sharp_path), size, used_paths);
      save_image(blurred, blurred_path);
      manifest.entries.push_back({sharp_path, blurred_path, size});
    }
  }
  return manifest;
}

void write_manifest(const CorpusManifest& manifest, const std::string& path) {
  nlohmann::ordered_json doc;
  doc["seed"] = manifest.seed;
  doc["entries"] = nlohmann::ordered_json::array();
  for (const auto& e : manifest.entries) {
    doc["entries"].push_back({{"sharp_path", e.sharp_path},
                              {"blurred_path", e.blurred_path},
                              {"kernel_size", e.kernel_size}});
  }
  std::ofstream out(path);
  if (!out) throw Error("cannot write manifest: " + path);
  out << doc.dump(2) << "\n";
}

CorpusManifest read_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open manifest: " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("manifest " + path + ": " + e.what());
  }
  CorpusManifest manifest;
  manifest.seed = doc.value("seed", 0ULL);
  for (const auto& e : doc.at("entries")) {
    manifest.entries.push_back({e.at("sharp_path").get<std::string>(),
                                e.at("blurred_path").get<std::string>(),
                                e.at("kernel_size").get<int>()});
  }
  return manifest;
}

std::vector<AnnotationRecord> read_annotations(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open annotation file: " + path);
  std::vector<AnnotationRecord> records;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream is(line);
    AnnotationRecord rec;
    std::string extra;
    if (!(is >> rec.class_id >> rec.cx >> rec.cy >> rec.w >> rec.h) || (is >> extra)) {
      throw ParseError(path + ":" + std::to_string(line_no) +
                       ": expected 'class_id cx cy w h'");
    }
    for (double v : {rec.cx, rec.cy, rec.w, rec.h}) {
      if (!(v >= 0.0 && v <= 1.0)) {
        throw RangeError(path + ":" + std::to_string(line_no) +
                         ": normalized values must be in [0,1]");
      }
    }
    if (rec.w <= 0.0 || rec.h <= 0.0) {
      throw RangeError(path + ":" + std::to_string(line_no) + ": box size must be positive");
    }
    if (rec.class_id < 0) {
      throw RangeError(path + ":" + std::to_string(line_no) + ": class_id must be >= 0");
    }
    records.push_back(rec);
  }
  return records;
}

void write_annotations(const std::vector<AnnotationRecord>& records, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write annotation file: " + path);
  char buf[128];
  for (const auto& r : records) {
    std::snprintf(buf, sizeof(buf), "%d %.6f %.6f %.6f %.6f\n", r.class_id, r.cx, r.cy, r.w,
                  r.h);
    out << buf;
  }
}

BBox denormalize(const AnnotationRecord& rec, int width, int height) {
  if (width < 1 || height < 1) throw RangeError("denormalize: image dims must be >= 1");
  return {(rec.cx - rec.w / 2.0) * width, (rec.cy - rec.h / 2.0) * height,
          (rec.cx + rec.w / 2.0) * width, (rec.cy + rec.h / 2.0) * height};
}

AnnotationRecord normalize(const BBox& box, int class_id, int width, int height) {
  if (width < 1 || height < 1) throw RangeError("normalize: image dims must be >= 1");
  AnnotationRecord rec;
  rec.class_id = class_id;
  rec.cx = box.x_center() / width;
  rec.cy = box.y_center() / height;
  rec.w = box.width() / width;
  rec.h = box.height() / height;
  return rec;
}

SplitResult split_dataset(std::vector<std::string> paths, std::uint64_t seed) {
  Rng rng(seed ^ 0x73706c6974ULL);  // "split"
  for (std::size_t i = paths.size(); i > 1; --i) {
    std::size_t j = rng.below(static_cast<std::uint32_t>(i));
    std::swap(paths[i - 1], paths[j]);
  }
  SplitResult out;
  const std::size_t n = paths.size();
  const std::size_t n_val = n / 10;
  const std::size_t n_test = n / 10;
  const std::size_t n_train = n - n_val - n_test;
  out.train.assign(paths.begin(), paths.begin() + n_train);
  out.val.assign(paths.begin() + n_train, paths.begin() + n_train + n_val);
  out.test.assign(paths.begin() + n_train + n_val, paths.end());
  return out;
}

}  // namespace platepipe
