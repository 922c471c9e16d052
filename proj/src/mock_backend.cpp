#include "platepipe/mock_backend.hpp"

#include <fstream>

#include "json.hpp"
#include "platepipe/log.hpp"

namespace platepipe {

MockDetectorBackend::MockDetectorBackend(DetectorSpec spec) : spec_(std::move(spec)) {
  spec_.validate();
}

MockDetectorBackend MockDetectorBackend::from_json_file(DetectorSpec spec,
                                                        const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open mock fixture file: " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("mock fixture " + path + ": " + e.what());
  }
  if (!doc.is_array()) throw ParseError("mock fixture " + path + ": expected a JSON array");

  MockDetectorBackend backend(std::move(spec));
  for (const auto& entry : doc) {
    std::string image_id = entry.at("image_id").get<std::string>();
    std::vector<Detection> dets;
    for (const auto& d : entry.at("detections")) {
      const auto& box = d.at("box");
      if (!box.is_array() || box.size() != 4) {
        throw ParseError("mock fixture " + path + ": box must be [x_min,y_min,x_max,y_max]");
      }
      Detection det;
      det.box = {box[0].get<double>(), box[1].get<double>(), box[2].get<double>(),
                 box[3].get<double>()};
      det.class_id = d.at("class_id").get<int>();
      det.confidence = d.at("confidence").get<double>();
      if (det.class_id < 0 || det.class_id >= backend.spec_.class_count) {
        throw RangeError("mock fixture " + path + ": class_id " +
                         std::to_string(det.class_id) + " out of range");
      }
      if (det.confidence < 0.0 || det.confidence > 1.0) {
        throw RangeError("mock fixture " + path + ": confidence must be in [0,1]");
      }
      dets.push_back(det);
    }
    backend.fixtures_[image_id] = std::move(dets);
  }
  return backend;
}

void MockDetectorBackend::script(const std::string& image_id, std::vector<Detection> detections) {
  fixtures_[image_id] = std::move(detections);
}

void MockDetectorBackend::script_any(std::vector<Detection> detections) {
  fixtures_["*"] = std::move(detections);
}

std::vector<Detection> MockDetectorBackend::infer(const Image& input) {
  calls_.fetch_add(1);
  const std::string id = image_fingerprint(input);
  log_debug("mock detector: input fingerprint " + id);
  auto it = fixtures_.find(id);
  if (it == fixtures_.end()) it = fixtures_.find("*");
  if (it == fixtures_.end()) return {};
  return it->second;
}

}  // namespace platepipe
