#pragma once

// Deterministic images and detection sets shared across test suites.

#include <algorithm>
#include <cstdint>
#include <vector>

#include "platepipe/detect.hpp"
#include "platepipe/image.hpp"

namespace fixtures {

// splitmix64, kept local so fixtures never depend on library RNG choices.
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
  std::uint32_t below(std::uint32_t n) { return static_cast<std::uint32_t>(next() % n); }
  double unit() { return static_cast<double>(next() >> 11) / 9007199254740992.0; }
};

inline platepipe::Image constant(int w, int h, int channels, std::uint8_t value) {
  return platepipe::Image::create(w, h, channels, value);
}

// Two left columns 0, two right columns 255 (or scaled to any size).
inline platepipe::Image vertical_step(int w = 4, int h = 4) {
  platepipe::Image img = platepipe::Image::create(w, h, 1, 0);
  for (int y = 0; y < h; ++y) {
    for (int x = w / 2; x < w; ++x) img.at(x, y) = 255;
  }
  return img;
}

inline platepipe::Image checkerboard(int w, int h, int cell = 1) {
  platepipe::Image img = platepipe::Image::create(w, h, 1, 0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      img.at(x, y) = ((x / cell + y / cell) % 2 == 0) ? 0 : 255;
    }
  }
  return img;
}

// Texture with strong edges at several scales plus seeded noise; the kind of
// content whose Laplacian variance degrades monotonically under growing blur.
inline platepipe::Image edge_rich(int w = 256, int h = 256, std::uint64_t seed = 42) {
  platepipe::Image img = platepipe::Image::create(w, h, 1, 0);
  Rng rng(seed);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      int v = ((x / 8 + y / 8) % 2 == 0) ? 40 : 215;   // coarse checker
      if ((x / 2 + y / 3) % 7 == 0) v = 255 - v;        // diagonal stripes
      v += static_cast<int>(rng.below(61)) - 30;        // noise
      img.at(x, y) = static_cast<std::uint8_t>(std::clamp(v, 0, 255));
    }
  }
  return img;
}

// Natural-image-like content: big structures, soft shading, crisp edges and
// only mild noise. Similarity metrics degrade monotonically under growing
// box blur on this kind of image, unlike on noise-dominated textures.
inline platepipe::Image structured(int w = 256, int h = 256, std::uint64_t seed = 7) {
  platepipe::Image img = platepipe::Image::create(w, h, 1, 0);
  Rng rng(seed);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      int v = 60 + (x * 90) / w + (y * 50) / h;      // smooth shading
      if ((x / 32 + y / 32) % 2 == 0) v += 70;       // coarse blocks
      if (x % 48 < 4) v = 235;                       // vertical bars
      v += static_cast<int>(rng.below(9)) - 4;       // mild noise
      img.at(x, y) = static_cast<std::uint8_t>(std::clamp(v, 0, 255));
    }
  }
  return img;
}

// Smooth diagonal gradient; bilinear resampling treats it almost exactly.
inline platepipe::Image gradient(int w, int h) {
  platepipe::Image img = platepipe::Image::create(w, h, 1, 0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      img.at(x, y) = static_cast<std::uint8_t>((x + y) * 255 / (w + h - 2));
    }
  }
  return img;
}

// A 256x256 frame with a bright "plate" rectangle and dark character-ish
// strokes inside; mid-bucket values so fingerprints tolerate +-1 wobble.
inline platepipe::Image plate_scene(std::uint64_t variant = 0) {
  platepipe::Image img = platepipe::Image::create(256, 256, 3, 72);
  Rng rng(variant * 7919 + 17);
  // Textured background so the frame is edge-rich (sharp by the gate).
  for (int y = 0; y < 256; ++y) {
    for (int x = 0; x < 256; ++x) {
      std::uint8_t v = static_cast<std::uint8_t>(48 + rng.below(160));
      for (int c = 0; c < 3; ++c) img.at(x, y, c) = v;
    }
  }
  // Plate body at (48,96)-(208,144).
  for (int y = 96; y < 144; ++y) {
    for (int x = 48; x < 208; ++x) {
      for (int c = 0; c < 3; ++c) img.at(x, y, c) = 220;
    }
  }
  // Eight dark strokes as stand-in characters.
  for (int k = 0; k < 8; ++k) {
    int cx = 56 + k * 18;
    for (int y = 104; y < 136; ++y) {
      for (int x = cx; x < cx + 8; ++x) {
        for (int c = 0; c < 3; ++c) img.at(x, y, c) = 28;
      }
    }
  }
  return img;
}

// Eight character detections spelling "12A34567" under the default 44-label
// set, listed in scrambled order. Boxes live in the character detector's
// 256x256 input frame, vertically centered so they stay inside the content
// band of any near-landscape plate crop.
inline std::vector<platepipe::Detection> scrambled_chars() {
  auto box_at = [](int k) {
    double x = 20.0 + k * 28.0;
    return platepipe::BBox{x, 105.0, x + 14.0, 150.0};
  };
  auto cls = [](char c) { return c <= '9' ? c - '0' : 10 + (c - 'A'); };
  const char* text = "12A34567";
  const int order[8] = {5, 2, 7, 0, 4, 1, 6, 3};
  std::vector<platepipe::Detection> dets;
  for (int k : order) {
    dets.push_back({box_at(k), cls(text[k]), 0.8 + 0.01 * k});
  }
  return dets;
}

inline std::vector<platepipe::Detection> random_detections(Rng& rng, int count) {
  std::vector<platepipe::Detection> dets;
  dets.reserve(count);
  for (int i = 0; i < count; ++i) {
    double x0 = rng.below(100);
    double y0 = rng.below(100);
    double w = 1 + rng.below(40);
    double h = 1 + rng.below(40);
    platepipe::Detection d;
    d.box = {x0, y0, x0 + w, y0 + h};
    d.class_id = static_cast<int>(rng.below(3));
    // Quantized so ties happen and exercise the deterministic tie-breaks.
    d.confidence = static_cast<double>(rng.below(1000)) / 999.0;
    dets.push_back(d);
  }
  return dets;
}

}  // namespace fixtures
