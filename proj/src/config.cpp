#include "platepipe/config.hpp"

#include <fstream>
#include <set>

#include "json.hpp"
#include "platepipe/mock_backend.hpp"
#include "platepipe/onnx_model.hpp"

namespace platepipe {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, const std::set<std::string>& known,
                         const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (!known.contains(key)) {
      throw ParseError("config: unknown key '" + key + "' in " + where);
    }
  }
}

void parse_detection_section(const json& obj, const std::string& where, DetectionConfig& det,
                             DetectorSpec& spec, BackendConfig& backend) {
  reject_unknown_keys(obj,
                      {"iou_threshold", "confidence_threshold", "input_size", "labels",
                       "backend"},
                      where);
  det.iou_threshold = obj.value("iou_threshold", det.iou_threshold);
  det.confidence_threshold = obj.value("confidence_threshold", det.confidence_threshold);
  spec.input_size = obj.value("input_size", spec.input_size);
  if (obj.contains("labels")) {
    spec.class_labels = obj.at("labels").get<std::vector<std::string>>();
    spec.class_count = static_cast<int>(spec.class_labels.size());
  }
  if (obj.contains("backend")) {
    const json& b = obj.at("backend");
    reject_unknown_keys(b, {"kind", "fixtures", "model"}, where + ".backend");
    backend.kind = b.value("kind", "");
    backend.path = b.contains("fixtures") ? b.at("fixtures").get<std::string>()
                                          : b.value("model", "");
  }
}

}  // namespace

EngineConfig parse_engine_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("config: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("config: root must be a JSON object");
  reject_unknown_keys(doc, {"gate", "lpd", "cr", "deblur", "crop_margin", "deblur_mode",
                            "eval_iou"},
                      "root");

  EngineConfig cfg;
  if (doc.contains("gate")) {
    reject_unknown_keys(doc.at("gate"), {"threshold"}, "gate");
    cfg.pipeline.gate.threshold = doc.at("gate").value("threshold", cfg.pipeline.gate.threshold);
  }
  if (doc.contains("lpd")) {
    parse_detection_section(doc.at("lpd"), "lpd", cfg.pipeline.lpd, cfg.pipeline.lpd_spec,
                            cfg.lpd_backend);
  }
  if (doc.contains("cr")) {
    parse_detection_section(doc.at("cr"), "cr", cfg.pipeline.cr, cfg.pipeline.cr_spec,
                            cfg.cr_backend);
  }
  if (doc.contains("deblur")) {
    const json& d = doc.at("deblur");
    reject_unknown_keys(d, {"backend"}, "deblur");
    if (d.contains("backend")) {
      const json& b = d.at("backend");
      reject_unknown_keys(b, {"kind", "model"}, "deblur.backend");
      cfg.deblur_backend.kind = b.value("kind", "identity");
      cfg.deblur_backend.path = b.value("model", "");
    }
  }
  cfg.pipeline.crop_margin = doc.value("crop_margin", cfg.pipeline.crop_margin);
  if (doc.contains("deblur_mode")) {
    cfg.pipeline.deblur_mode = deblur_mode_from_string(doc.at("deblur_mode").get<std::string>());
  }
  cfg.eval_iou = doc.value("eval_iou", cfg.eval_iou);
  if (cfg.eval_iou <= 0.0 || cfg.eval_iou >= 1.0) {
    throw RangeError("config: eval_iou must be in (0,1)");
  }
  cfg.pipeline.validate();
  return cfg;
}

EngineConfig load_engine_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file: " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_engine_config(text);
}

std::string engine_config_to_json(const EngineConfig& cfg) {
  nlohmann::ordered_json doc;
  doc["gate"] = {{"threshold", cfg.pipeline.gate.threshold}};
  auto detection_section = [](const DetectionConfig& det, const DetectorSpec& spec,
                              const BackendConfig& backend) {
    nlohmann::ordered_json s;
    s["iou_threshold"] = det.iou_threshold;
    s["confidence_threshold"] = det.confidence_threshold;
    s["input_size"] = spec.input_size;
    s["classes"] = spec.class_count;
    s["backend"] = {{"kind", backend.kind}, {"path", backend.path}};
    return s;
  };
  doc["lpd"] = detection_section(cfg.pipeline.lpd, cfg.pipeline.lpd_spec, cfg.lpd_backend);
  doc["cr"] = detection_section(cfg.pipeline.cr, cfg.pipeline.cr_spec, cfg.cr_backend);
  doc["deblur"] = {{"backend", {{"kind", cfg.deblur_backend.kind},
                                {"path", cfg.deblur_backend.path}}}};
  doc["crop_margin"] = cfg.pipeline.crop_margin;
  doc["deblur_mode"] = to_string(cfg.pipeline.deblur_mode);
  doc["eval_iou"] = cfg.eval_iou;
  return doc.dump();
}

LoadedBackends make_backends(const EngineConfig& cfg) {
  auto make_detector = [](const BackendConfig& b, const DetectorSpec& spec,
                          const std::string& slot) -> std::unique_ptr<DetectorBackend> {
    if (b.kind == "mock") {
      if (b.path.empty()) {
        return std::make_unique<MockDetectorBackend>(spec);
      }
      return std::make_unique<MockDetectorBackend>(
          MockDetectorBackend::from_json_file(spec, b.path));
    }
    if (b.kind == "onnx") {
      return std::make_unique<OnnxDetectorBackend>(b.path, spec);
    }
    if (b.kind.empty()) {
      throw UsageError("config: no " + slot + " backend configured");
    }
    throw ParseError("config: unknown detector backend kind '" + b.kind + "'");
  };

  LoadedBackends loaded;
  loaded.lpd = make_detector(cfg.lpd_backend, cfg.pipeline.lpd_spec, "lpd");
  loaded.cr = make_detector(cfg.cr_backend, cfg.pipeline.cr_spec, "cr");

  if (cfg.deblur_backend.kind == "identity" || cfg.deblur_backend.kind.empty()) {
    loaded.deblur = std::make_unique<IdentityDeblurBackend>();
  } else if (cfg.deblur_backend.kind == "sharpen") {
    loaded.deblur = std::make_unique<SharpenDeblurBackend>();
  } else if (cfg.deblur_backend.kind == "onnx") {
    loaded.deblur = std::make_unique<OnnxDeblurBackend>(cfg.deblur_backend.path);
  } else {
    throw ParseError("config: unknown deblur backend kind '" + cfg.deblur_backend.kind + "'");
  }

  loaded.view = {loaded.lpd.get(), loaded.cr.get(), loaded.deblur.get()};
  return loaded;
}

}  // namespace platepipe
