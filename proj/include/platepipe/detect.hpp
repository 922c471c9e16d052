#pragma once

#include <string>
#include <vector>

#include "platepipe/image.hpp"

namespace platepipe {

/// One predicted object in source-image pixel coordinates.
struct Detection {
  BBox box;
  int class_id = 0;
  double confidence = 0.0;
};

/// Shape contract a detector backend must satisfy.
struct DetectorSpec {
  int class_count = 1;
  int anchor_count = 3;
  int input_size = 256;
  std::vector<std::string> class_labels;

  /// Throws SpecMismatchError when labels and class_count disagree or labels
  /// repeat.
  void validate() const;
};

struct DetectionConfig {
  double iou_threshold = 0.6;
  double confidence_threshold = 0.3;

  bool valid() const {
    return iou_threshold > 0.0 && iou_threshold < 1.0 && confidence_threshold > 0.0 &&
           confidence_threshold < 1.0;
  }
};

/// Channel count of one detector output scale: anchors * (4 box terms +
/// 1 objectness + classes). 18 for the single-class plate head, 147 for the
/// 44-class character head.
int head_width(int anchors, int classes);

/// Intersection over union; 0 for disjoint boxes.
double iou(const BBox& a, const BBox& b);

/// Confidence filter followed by per-class greedy suppression. Output is
/// sorted by descending confidence; ties break toward smaller class_id, then
/// smaller x_min, so results are deterministic.
std::vector<Detection> nms(std::vector<Detection> detections, const DetectionConfig& cfg);

class DetectorBackend {
 public:
  virtual ~DetectorBackend() = default;

  virtual const DetectorSpec& spec() const = 0;

  /// Decoded detections for an input already letterboxed to
  /// spec().input_size, in that canvas's pixel coordinates.
  virtual std::vector<Detection> infer(const Image& input) = 0;

  /// Whether infer() may be called from several threads at once. Callers
  /// must serialize access otherwise.
  virtual bool concurrent_safe() const { return false; }
};

/// Timing breakdown of one detect() call.
struct DetectTimes {
  double infer_seconds = 0.0;
  double post_seconds = 0.0;
};

/// Full single-image detection: letterbox to the backend input size, infer,
/// filter + NMS, then map boxes back to source-image pixels (clamped to the
/// frame).
std::vector<Detection> detect(DetectorBackend& backend, const Image& img,
                              const DetectionConfig& cfg, DetectTimes* times = nullptr);

/// {"plate"}
const std::vector<std::string>& default_plate_labels();

/// 44 single-symbol labels for the character head: digits 0-9 plus 34 letter
/// placeholders.
const std::vector<std::string>& default_char_labels();

}  // namespace platepipe
