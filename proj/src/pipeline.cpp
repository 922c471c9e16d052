#include "platepipe/pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <numeric>

namespace platepipe {

namespace {

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point start) {
  return std::chrono::duration<double>(clock_type::now() - start).count();
}

bool is_digit_label(const std::string& label) {
  return label.size() == 1 && std::isdigit(static_cast<unsigned char>(label[0]));
}

[[noreturn]] void rethrow_tagged(const char* stage, const BackendFailure& e) {
  throw BackendFailure(std::string(stage) + ": " + e.what());
}

}  // namespace

const char* to_string(DeblurMode mode) {
  switch (mode) {
    case DeblurMode::automatic: return "auto";
    case DeblurMode::force: return "force";
    case DeblurMode::skip: return "skip";
  }
  return "?";
}

DeblurMode deblur_mode_from_string(const std::string& name) {
  if (name == "auto") return DeblurMode::automatic;
  if (name == "force") return DeblurMode::force;
  if (name == "skip") return DeblurMode::skip;
  throw ParseError("unknown deblur mode '" + name + "' (expected auto|force|skip)");
}

void PipelineConfig::validate() const {
  if (!gate.valid()) throw RangeError("pipeline config: gate threshold must be positive");
  if (!lpd.valid() || !cr.valid()) {
    throw RangeError("pipeline config: detection thresholds must be in (0,1)");
  }
  lpd_spec.validate();
  cr_spec.validate();
  if (lpd_spec.class_count != 1) {
    throw SpecMismatchError("pipeline config: plate detector must have exactly 1 class");
  }
  if (cr_spec.class_count != 44) {
    throw SpecMismatchError("pipeline config: character detector must have exactly 44 classes");
  }
  if (crop_margin < 0.0 || crop_margin > 0.5) {
    throw RangeError("pipeline config: crop_margin must be in [0, 0.5]");
  }
}

PlateReading assemble_plate(const std::vector<Detection>& characters, const DetectorSpec& spec) {
  if (characters.empty()) {
    throw NoCharactersError("assemble_plate: no character detections");
  }
  std::vector<Detection> ordered = characters;
  std::sort(ordered.begin(), ordered.end(), [](const Detection& a, const Detection& b) {
    if (a.box.x_center() != b.box.x_center()) return a.box.x_center() < b.box.x_center();
    if (a.box.y_center() != b.box.y_center()) return a.box.y_center() < b.box.y_center();
    return a.confidence > b.confidence;
  });

  PlateReading reading;
  reading.characters.reserve(ordered.size());
  std::vector<std::string> symbols;
  symbols.reserve(ordered.size());
  double confidence_sum = 0.0;
  for (const Detection& d : ordered) {
    if (d.class_id < 0 || d.class_id >= spec.class_count) {
      throw RangeError("assemble_plate: class_id " + std::to_string(d.class_id) +
                       " outside the " + std::to_string(spec.class_count) + "-class label set");
    }
    const std::string& label = spec.class_labels[static_cast<std::size_t>(d.class_id)];
    reading.characters.emplace_back(label, d);
    reading.text += label;
    symbols.push_back(label);
    confidence_sum += d.confidence;
  }
  reading.mean_char_confidence = confidence_sum / static_cast<double>(ordered.size());
  reading.format_valid = validate_plate_format(symbols);
  return reading;
}

bool validate_plate_format(const std::vector<std::string>& symbols) {
  if (symbols.size() != 8) return false;
  for (std::size_t i = 0; i < 8; ++i) {
    const bool want_digit = i != 2;
    if (is_digit_label(symbols[i]) != want_digit) return false;
  }
  return true;
}

bool validate_plate_format(const std::string& text, const std::vector<std::string>& labels) {
  // Re-tokenize greedily, longest label first, so multi-character labels
  // survive the round trip through the concatenated text.
  std::vector<std::string> sorted = labels;
  std::sort(sorted.begin(), sorted.end(),
            [](const std::string& a, const std::string& b) { return a.size() > b.size(); });
  std::vector<std::string> symbols;
  std::size_t pos = 0;
  while (pos < text.size()) {
    bool matched = false;
    for (const std::string& label : sorted) {
      if (!label.empty() && text.compare(pos, label.size(), label) == 0) {
        symbols.push_back(label);
        pos += label.size();
        matched = true;
        break;
      }
    }
    if (!matched) return false;
  }
  return validate_plate_format(symbols);
}

PipelineResult run_pipeline(const Image& img, const PipelineConfig& cfg,
                            const PipelineBackends& backends) {
  cfg.validate();
  if (!backends.lpd || !backends.cr) {
    throw BackendFailure("pipeline: plate and character backends must be configured");
  }

  PipelineResult result;
  result.stage_times = {{"gate", 0.0}, {"deblur", 0.0}, {"lpd", 0.0}, {"cr", 0.0},
                        {"assemble", 0.0}};

  auto t = clock_type::now();
  result.verdict = check_blur(img, cfg.gate);
  result.stage_times["gate"] = seconds_since(t);

  const bool want_deblur =
      cfg.deblur_mode == DeblurMode::force ||
      (cfg.deblur_mode == DeblurMode::automatic && result.verdict.is_blurred);

  Image frame = img;
  if (want_deblur) {
    if (!backends.deblur) {
      throw BackendFailure("deblur: no backend configured");
    }
    t = clock_type::now();
    try {
      frame = deblur(*backends.deblur, img).sharp;
    } catch (const BackendFailure& e) {
      rethrow_tagged("deblur", e);
    }
    result.stage_times["deblur"] = seconds_since(t);
    result.deblur_applied = true;
  }

  t = clock_type::now();
  std::vector<Detection> plates;
  DetectTimes lpd_times;
  try {
    plates = detect(*backends.lpd, frame, cfg.lpd, &lpd_times);
  } catch (const BackendFailure& e) {
    rethrow_tagged("lpd", e);
  }
  result.stage_times["lpd"] = seconds_since(t);
  result.substage_times["lpd.infer"] = lpd_times.infer_seconds;
  result.substage_times["lpd.post"] = lpd_times.post_seconds;

  double cr_seconds = 0.0, cr_infer = 0.0, cr_post = 0.0, assemble_seconds = 0.0;
  for (const Detection& plate : plates) {
    t = clock_type::now();
    Image plate_crop = crop(frame, plate.box, cfg.crop_margin);
    std::vector<Detection> chars;
    DetectTimes cr_times;
    try {
      chars = detect(*backends.cr, plate_crop, cfg.cr, &cr_times);
    } catch (const BackendFailure& e) {
      rethrow_tagged("cr", e);
    }
    cr_seconds += seconds_since(t);
    cr_infer += cr_times.infer_seconds;
    cr_post += cr_times.post_seconds;

    t = clock_type::now();
    PlateReading reading;
    if (!chars.empty()) {
      reading = assemble_plate(chars, cfg.cr_spec);
    }
    reading.plate_box = plate.box;
    reading.plate_confidence = plate.confidence;
    reading.crop_box = crop_region(plate.box, cfg.crop_margin, frame.width, frame.height);
    assemble_seconds += seconds_since(t);
    result.plates.push_back(std::move(reading));
  }
  result.stage_times["cr"] = cr_seconds;
  result.substage_times["cr.infer"] = cr_infer;
  result.substage_times["cr.post"] = cr_post;
  result.stage_times["assemble"] = assemble_seconds;
  return result;
}

}  // namespace platepipe
