#pragma once

#include <memory>
#include <string>

#include "platepipe/pipeline.hpp"

namespace platepipe {

/// Which plug-in fills a backend slot and where its data lives.
/// Detector kinds: "mock" (path = fixture JSON) or "onnx" (path = model).
/// Deblur kinds: "identity", "sharpen", or "onnx".
struct BackendConfig {
  std::string kind;
  std::string path;
};

/// Everything the CLI needs to wire up a run: the pipeline parameters plus
/// backend selection and the evaluation matching threshold.
struct EngineConfig {
  PipelineConfig pipeline;
  BackendConfig lpd_backend;
  BackendConfig cr_backend;
  BackendConfig deblur_backend{"identity", ""};
  double eval_iou = 0.5;
};

/// Parses the JSON config document. Unknown keys are rejected so typos
/// surface instead of silently reverting to defaults.
EngineConfig parse_engine_config(const std::string& json_text);
EngineConfig load_engine_config(const std::string& path);

/// Config echo for reports.
std::string engine_config_to_json(const EngineConfig& cfg);

/// Owns the constructed backends; `view` is what the pipeline consumes.
struct LoadedBackends {
  std::unique_ptr<DetectorBackend> lpd;
  std::unique_ptr<DetectorBackend> cr;
  std::unique_ptr<DeblurBackend> deblur;
  PipelineBackends view;
};

/// Instantiates the configured backends (loading mock fixtures or model
/// files as needed). Detector slots must be configured; the deblur slot
/// defaults to the identity backend.
LoadedBackends make_backends(const EngineConfig& cfg);

}  // namespace platepipe
