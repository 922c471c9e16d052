#include "platepipe/serialize.hpp"

#include <cmath>

namespace platepipe {

using nlohmann::ordered_json;

ordered_json to_json(const BBox& box) {
  return ordered_json::array({box.x_min, box.y_min, box.x_max, box.y_max});
}

ordered_json to_json(const Detection& det) {
  ordered_json j;
  j["box"] = to_json(det.box);
  j["class_id"] = det.class_id;
  j["confidence"] = det.confidence;
  return j;
}

ordered_json to_json(const BlurVerdict& verdict) {
  ordered_json j;
  j["variance"] = verdict.variance;
  j["is_blurred"] = verdict.is_blurred;
  j["threshold"] = verdict.threshold_used;
  return j;
}

ordered_json to_json(const PlateReading& reading) {
  ordered_json j;
  j["box"] = to_json(reading.plate_box);
  j["confidence"] = reading.plate_confidence;
  j["text"] = reading.text;
  j["mean_char_confidence"] = reading.mean_char_confidence;
  j["format_valid"] = reading.format_valid;
  j["crop_box"] = to_json(reading.crop_box);
  j["characters"] = ordered_json::array();
  for (const auto& [label, det] : reading.characters) {
    ordered_json c = to_json(det);
    c["label"] = label;
    j["characters"].push_back(std::move(c));
  }
  return j;
}

ordered_json result_to_json(const std::string& image_path, const PipelineResult& result,
                            bool include_times) {
  ordered_json j;
  j["image"] = image_path;
  j["verdict"] = to_json(result.verdict);
  j["deblur_applied"] = result.deblur_applied;
  j["plates"] = ordered_json::array();
  for (const PlateReading& reading : result.plates) {
    j["plates"].push_back(to_json(reading));
  }
  if (include_times) {
    j["stage_times"] = ordered_json(result.stage_times);
  }
  return j;
}

ordered_json psnr_to_json(double psnr_db) {
  if (std::isinf(psnr_db)) return "inf";
  return psnr_db;
}

ordered_json to_json(const EvalReport& report) {
  ordered_json j;
  j["precision"] = report.precision;
  j["recall"] = report.recall;
  j["tp"] = report.tp;
  j["fp"] = report.fp;
  j["fn"] = report.fn;
  j["plate_accuracy"] = report.plate_accuracy;
  j["correct_plates"] = report.correct_plates;
  j["gt_plates"] = report.gt_plates;
  j["images"] = report.images;
  j["mean_stage_times"] = ordered_json(report.mean_stage_times);
  return j;
}

ordered_json to_json(const BenchReport& report) {
  auto stat = [](const LatencyStat& s) {
    return ordered_json{{"mean_seconds", s.mean_seconds}, {"p95_seconds", s.p95_seconds}};
  };
  ordered_json j;
  j["warmup"] = report.warmup;
  j["repeats"] = report.repeats;
  j["samples"] = report.samples;
  j["stages"] = ordered_json::object();
  for (const auto& [name, s] : report.stages) j["stages"][name] = stat(s);
  j["substages"] = ordered_json::object();
  for (const auto& [name, s] : report.substages) j["substages"][name] = stat(s);
  j["end_to_end"] = stat(report.end_to_end);
  return j;
}

}  // namespace platepipe
