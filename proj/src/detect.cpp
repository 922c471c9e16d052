#include "platepipe/detect.hpp"

#include <algorithm>
#include <chrono>
#include <unordered_set>

namespace platepipe {

namespace {

bool detection_order(const Detection& a, const Detection& b) {
  if (a.confidence != b.confidence) return a.confidence > b.confidence;
  if (a.class_id != b.class_id) return a.class_id < b.class_id;
  return a.box.x_min < b.box.x_min;
}

}  // namespace

void DetectorSpec::validate() const {
  if (class_count < 1) throw SpecMismatchError("detector spec: class_count must be >= 1");
  if (anchor_count < 1) throw SpecMismatchError("detector spec: anchor_count must be >= 1");
  if (input_size < 1) throw SpecMismatchError("detector spec: input_size must be >= 1");
  if (class_labels.size() != static_cast<std::size_t>(class_count)) {
    throw SpecMismatchError("detector spec: expected " + std::to_string(class_count) +
                            " labels, got " + std::to_string(class_labels.size()));
  }
  std::unordered_set<std::string> seen;
  for (const auto& label : class_labels) {
    if (!seen.insert(label).second) {
      throw SpecMismatchError("detector spec: duplicate label '" + label + "'");
    }
  }
}

int head_width(int anchors, int classes) {
  if (anchors < 1 || classes < 1) {
    throw NonPositiveError("head_width: anchors and classes must be >= 1");
  }
  return anchors * (4 + 1 + classes);
}

double iou(const BBox& a, const BBox& b) {
  const double ix = std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min);
  const double iy = std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min);
  if (ix <= 0.0 || iy <= 0.0) return 0.0;
  const double inter = ix * iy;
  const double uni = a.area() + b.area() - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

std::vector<Detection> nms(std::vector<Detection> detections, const DetectionConfig& cfg) {
  std::erase_if(detections,
                [&](const Detection& d) { return d.confidence < cfg.confidence_threshold; });
  std::sort(detections.begin(), detections.end(), detection_order);

  std::vector<Detection> kept;
  kept.reserve(detections.size());
  for (const Detection& d : detections) {
    bool suppressed = false;
    for (const Detection& k : kept) {
      if (k.class_id == d.class_id && iou(k.box, d.box) > cfg.iou_threshold) {
        suppressed = true;
        break;
      }
    }
    if (!suppressed) kept.push_back(d);
  }
  return kept;
}

std::vector<Detection> detect(DetectorBackend& backend, const Image& img,
                              const DetectionConfig& cfg, DetectTimes* times) {
  using clock = std::chrono::steady_clock;
  const DetectorSpec& spec = backend.spec();
  spec.validate();

  const auto t0 = clock::now();
  Image input = resize(img, spec.input_size, spec.input_size, ResizeMode::letterbox);
  std::vector<Detection> raw = backend.infer(input);
  const auto t1 = clock::now();

  std::vector<Detection> kept = nms(std::move(raw), cfg);

  const LetterboxMapping mapping =
      letterbox_mapping(img.width, img.height, spec.input_size, spec.input_size);
  for (Detection& d : kept) {
    BBox src = mapping.to_source(d.box);
    d.box.x_min = std::clamp(src.x_min, 0.0, static_cast<double>(img.width));
    d.box.y_min = std::clamp(src.y_min, 0.0, static_cast<double>(img.height));
    d.box.x_max = std::clamp(src.x_max, 0.0, static_cast<double>(img.width));
    d.box.y_max = std::clamp(src.y_max, 0.0, static_cast<double>(img.height));
  }
  std::erase_if(kept, [](const Detection& d) { return !d.box.valid(); });
  const auto t2 = clock::now();

  if (times) {
    times->infer_seconds = std::chrono::duration<double>(t1 - t0).count();
    times->post_seconds = std::chrono::duration<double>(t2 - t1).count();
  }
  return kept;
}

const std::vector<std::string>& default_plate_labels() {
  static const std::vector<std::string> labels = {"plate"};
  return labels;
}

const std::vector<std::string>& default_char_labels() {
  static const std::vector<std::string> labels = [] {
    std::vector<std::string> l;
    l.reserve(44);
    for (char c = '0'; c <= '9'; ++c) l.emplace_back(1, c);
    for (char c = 'A'; c <= 'Z'; ++c) l.emplace_back(1, c);
    for (char c = 'a'; c <= 'h'; ++c) l.emplace_back(1, c);
    return l;
  }();
  return labels;
}

}  // namespace platepipe
