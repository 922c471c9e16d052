#pragma once

#include <atomic>
#include <string>
#include <unordered_map>
#include <vector>

#include "platepipe/detect.hpp"

namespace platepipe {

/// Scripted detector for tests and trained-model-free runs. Detections are
/// keyed by image fingerprint; the id "*" matches any image. Boxes are in
/// the backend input frame (spec().input_size letterbox canvas).
class MockDetectorBackend : public DetectorBackend {
 public:
  explicit MockDetectorBackend(DetectorSpec spec);
  MockDetectorBackend(MockDetectorBackend&& other) noexcept
      : spec_(std::move(other.spec_)),
        fixtures_(std::move(other.fixtures_)),
        calls_(other.calls_.load()) {}

  /// Fixture file: JSON array of {image_id, detections:[{box:[x0,y0,x1,y1],
  /// class_id, confidence}]}.
  static MockDetectorBackend from_json_file(DetectorSpec spec, const std::string& path);

  void script(const std::string& image_id, std::vector<Detection> detections);
  void script_any(std::vector<Detection> detections);

  const DetectorSpec& spec() const override { return spec_; }
  std::vector<Detection> infer(const Image& input) override;
  bool concurrent_safe() const override { return true; }

  int calls() const { return calls_.load(); }

 private:
  DetectorSpec spec_;
  std::unordered_map<std::string, std::vector<Detection>> fixtures_;
  std::atomic<int> calls_{0};
};

}  // namespace platepipe
