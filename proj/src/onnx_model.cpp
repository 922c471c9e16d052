#include "platepipe/onnx_model.hpp"

#include <fstream>
#include <sstream>

#include "onnx_subset.pb.h"

namespace platepipe {

namespace {

TensorInfo tensor_info(const onnxpb::ValueInfoProto& value) {
  TensorInfo info;
  info.name = value.name();
  if (value.has_type() && value.type().has_tensor_type() &&
      value.type().tensor_type().has_shape()) {
    for (const auto& dim : value.type().tensor_type().shape().dim()) {
      info.dims.push_back(dim.value_case() == onnxpb::TensorShapeProto::Dimension::kDimValue
                              ? dim.dim_value()
                              : -1);
    }
  }
  return info;
}

std::string dims_to_string(const std::vector<std::int64_t>& dims) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (i) os << ",";
    if (dims[i] < 0) {
      os << "?";
    } else {
      os << dims[i];
    }
  }
  os << "]";
  return os.str();
}

}  // namespace

OnnxModelInfo read_onnx_model_info(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open model file: " + path);

  onnxpb::ModelProto model;
  if (!model.ParseFromIstream(&in)) {
    throw ParseError("not a valid model file: " + path);
  }
  if (!model.has_graph()) {
    throw ParseError("model file has no graph: " + path);
  }

  OnnxModelInfo info;
  info.producer = model.producer_name();
  for (const auto& input : model.graph().input()) info.inputs.push_back(tensor_info(input));
  for (const auto& output : model.graph().output()) info.outputs.push_back(tensor_info(output));
  return info;
}

void validate_detector_outputs(const OnnxModelInfo& info, const DetectorSpec& spec) {
  const int expected = head_width(spec.anchor_count, spec.class_count);
  if (info.outputs.empty()) {
    throw SpecMismatchError("model declares no outputs; expected head width " +
                            std::to_string(expected));
  }
  for (const auto& output : info.outputs) {
    bool found = false;
    for (std::int64_t d : output.dims) {
      if (d == expected) {
        found = true;
        break;
      }
    }
    if (!found) {
      throw SpecMismatchError("model output '" + output.name + "' " +
                              dims_to_string(output.dims) + " has no dimension equal to the " +
                              std::to_string(spec.class_count) + "-class head width " +
                              std::to_string(expected));
    }
  }
}

OnnxDetectorBackend::OnnxDetectorBackend(const std::string& model_path, DetectorSpec spec)
    : spec_(std::move(spec)), path_(model_path) {
  spec_.validate();
  info_ = read_onnx_model_info(model_path);
  validate_detector_outputs(info_, spec_);
}

std::vector<Detection> OnnxDetectorBackend::infer(const Image&) {
  throw BackendFailure("onnx detector '" + path_ +
                       "': this build has no neural-network execution runtime; "
                       "use a mock backend or link a runtime-backed implementation");
}

OnnxDeblurBackend::OnnxDeblurBackend(const std::string& model_path) : path_(model_path) {
  info_ = read_onnx_model_info(model_path);
}

Image OnnxDeblurBackend::run(const MultiScaleInput&) {
  throw BackendFailure("onnx deblurrer '" + path_ +
                       "': this build has no neural-network execution runtime; "
                       "use the identity or sharpen backend instead");
}

}  // namespace platepipe
