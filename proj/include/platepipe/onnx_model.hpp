#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "platepipe/deblur.hpp"
#include "platepipe/detect.hpp"

namespace platepipe {

struct TensorInfo {
  std::string name;
  std::vector<std::int64_t> dims;  // dynamic dimensions reported as -1
};

struct OnnxModelInfo {
  std::string producer;
  std::vector<TensorInfo> inputs;
  std::vector<TensorInfo> outputs;
};

/// Reads graph input/output tensor shapes from an ONNX file.
/// Throws ParseError when the file is missing or not a model.
OnnxModelInfo read_onnx_model_info(const std::string& path);

/// Checks that every graph output carries a dimension equal to
/// head_width(spec.anchor_count, spec.class_count) — 18 for the plate head,
/// 147 for the character head. Throws SpecMismatchError otherwise.
void validate_detector_outputs(const OnnxModelInfo& info, const DetectorSpec& spec);

/// Detector plug-in backed by a trained ONNX file. Construction loads the
/// model description and validates the head widths against the spec. This
/// build carries no neural-network execution runtime, so infer() reports a
/// BackendFailure; swap in a runtime-backed subclass to run real models.
class OnnxDetectorBackend : public DetectorBackend {
 public:
  OnnxDetectorBackend(const std::string& model_path, DetectorSpec spec);

  const DetectorSpec& spec() const override { return spec_; }
  std::vector<Detection> infer(const Image& input) override;
  bool concurrent_safe() const override { return true; }

  const OnnxModelInfo& model_info() const { return info_; }

 private:
  DetectorSpec spec_;
  OnnxModelInfo info_;
  std::string path_;
};

/// Deblur plug-in backed by a trained generator file; same runtime caveat as
/// OnnxDetectorBackend.
class OnnxDeblurBackend : public DeblurBackend {
 public:
  explicit OnnxDeblurBackend(const std::string& model_path);

  Image run(const MultiScaleInput& input) override;
  bool concurrent_safe() const override { return true; }

  const OnnxModelInfo& model_info() const { return info_; }

 private:
  OnnxModelInfo info_;
  std::string path_;
};

}  // namespace platepipe
