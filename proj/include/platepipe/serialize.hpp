#pragma once

#include <string>

#include "json.hpp"
#include "platepipe/eval.hpp"
#include "platepipe/pipeline.hpp"

namespace platepipe {

// JSON shapes for the machine-readable interfaces. ordered_json keeps key
// order stable so identical runs serialize byte-identically.

nlohmann::ordered_json to_json(const BBox& box);            // [x_min,y_min,x_max,y_max]
nlohmann::ordered_json to_json(const Detection& det);
nlohmann::ordered_json to_json(const BlurVerdict& verdict);
nlohmann::ordered_json to_json(const PlateReading& reading);

/// One JSON line per processed frame. Stage times vary run to run, so they
/// are only included when include_times is set; default output stays
/// byte-reproducible.
nlohmann::ordered_json result_to_json(const std::string& image_path,
                                      const PipelineResult& result, bool include_times);

/// psnr serializes as a number, or the string "inf" for identical images.
nlohmann::ordered_json psnr_to_json(double psnr_db);

nlohmann::ordered_json to_json(const EvalReport& report);
nlohmann::ordered_json to_json(const BenchReport& report);

}  // namespace platepipe
