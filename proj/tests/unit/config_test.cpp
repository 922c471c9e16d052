#include "platepipe/config.hpp"

#include <filesystem>
#include <fstream>
#include <limits>

#include "doctest.h"
#include "json.hpp"
#include "platepipe/mock_backend.hpp"
#include "platepipe/serialize.hpp"
#include "support/fixtures.hpp"
#include "support/onnx_fixtures.hpp"

using namespace platepipe;
namespace fs = std::filesystem;

namespace {

std::string scratch(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / "platepipe_config_test";
  fs::create_directories(dir);
  return (dir / name).string();
}

}  // namespace

TEST_CASE("defaults mirror the documented parameters") {
  EngineConfig cfg = parse_engine_config("{}");
  CHECK(cfg.pipeline.gate.threshold == 100.0);
  CHECK(cfg.pipeline.lpd.iou_threshold == 0.6);
  CHECK(cfg.pipeline.lpd.confidence_threshold == 0.3);
  CHECK(cfg.pipeline.crop_margin == 0.05);
  CHECK(cfg.pipeline.deblur_mode == DeblurMode::automatic);
  CHECK(cfg.pipeline.lpd_spec.class_count == 1);
  CHECK(cfg.pipeline.cr_spec.class_count == 44);
  CHECK(cfg.eval_iou == 0.5);
}

TEST_CASE("sections override defaults") {
  EngineConfig cfg = parse_engine_config(R"({
    "gate": {"threshold": 55.5},
    "lpd": {"iou_threshold": 0.45, "confidence_threshold": 0.25, "input_size": 320},
    "crop_margin": 0.1,
    "deblur_mode": "force"
  })");
  CHECK(cfg.pipeline.gate.threshold == 55.5);
  CHECK(cfg.pipeline.lpd.iou_threshold == 0.45);
  CHECK(cfg.pipeline.lpd_spec.input_size == 320);
  CHECK(cfg.pipeline.cr.iou_threshold == 0.6);  // untouched
  CHECK(cfg.pipeline.deblur_mode == DeblurMode::force);
}

TEST_CASE("unknown keys and bad values are rejected") {
  CHECK_THROWS_AS(parse_engine_config(R"({"blur_treshold": 10})"), ParseError);
  CHECK_THROWS_AS(parse_engine_config(R"({"gate": {"thresh": 10}})"), ParseError);
  CHECK_THROWS_AS(parse_engine_config(R"({"deblur_mode": "maybe"})"), ParseError);
  CHECK_THROWS_AS(parse_engine_config(R"({"gate": {"threshold": -3}})"), RangeError);
  CHECK_THROWS_AS(parse_engine_config(R"({"crop_margin": 0.9})"), RangeError);
  CHECK_THROWS_AS(parse_engine_config("not json"), ParseError);
  CHECK_THROWS_AS(parse_engine_config(R"({"lpd": {"labels": ["a", "b"]}})"),
                  SpecMismatchError);  // plate head must stay single-class
}

TEST_CASE("mock backends load fixture files") {
  std::string fixture = scratch("lpd_fixture.json");
  {
    std::ofstream out(fixture);
    out << R"([{"image_id": "*", "detections": [
           {"box": [10, 10, 50, 30], "class_id": 0, "confidence": 0.9}]}])";
  }
  std::string config = scratch("config.json");
  {
    std::ofstream out(config);
    out << R"({"lpd": {"backend": {"kind": "mock", "fixtures": ")" << fixture << R"("}},
               "cr": {"backend": {"kind": "mock"}}})";
  }
  EngineConfig cfg = load_engine_config(config);
  LoadedBackends backends = make_backends(cfg);
  Image img = fixtures::constant(256, 256, 1, 50);
  auto dets = backends.lpd->infer(img);
  REQUIRE(dets.size() == 1);
  CHECK(dets[0].confidence == 0.9);
  CHECK(backends.cr->infer(img).empty());
  CHECK(backends.deblur != nullptr);  // identity by default
}

TEST_CASE("fixture files validate their contents") {
  std::string bad_class = scratch("bad_class.json");
  {
    std::ofstream out(bad_class);
    out << R"([{"image_id": "*", "detections": [
           {"box": [0, 0, 5, 5], "class_id": 7, "confidence": 0.5}]}])";
  }
  DetectorSpec spec{1, 3, 256, default_plate_labels()};
  CHECK_THROWS_AS(MockDetectorBackend::from_json_file(spec, bad_class), RangeError);

  std::string bad_box = scratch("bad_box.json");
  {
    std::ofstream out(bad_box);
    out << R"([{"image_id": "*", "detections": [
           {"box": [0, 0, 5], "class_id": 0, "confidence": 0.5}]}])";
  }
  CHECK_THROWS_AS(MockDetectorBackend::from_json_file(spec, bad_box), ParseError);
}

TEST_CASE("onnx detector slots validate against the spec at load") {
  std::string good = scratch("good18.onnx");
  onnx_fixtures::write_detector_model(good, 18);
  std::string config = scratch("onnx_config.json");
  {
    std::ofstream out(config);
    out << R"({"lpd": {"backend": {"kind": "onnx", "model": ")" << good << R"("}},
               "cr": {"backend": {"kind": "mock"}}})";
  }
  CHECK_NOTHROW(make_backends(load_engine_config(config)));

  std::string bad = scratch("bad20.onnx");
  onnx_fixtures::write_detector_model(bad, 20);
  std::string bad_config = scratch("onnx_bad_config.json");
  {
    std::ofstream out(bad_config);
    out << R"({"lpd": {"backend": {"kind": "onnx", "model": ")" << bad << R"("}},
               "cr": {"backend": {"kind": "mock"}}})";
  }
  CHECK_THROWS_AS(make_backends(load_engine_config(bad_config)), SpecMismatchError);
}

TEST_CASE("missing backend slots are usage errors") {
  EngineConfig cfg = parse_engine_config("{}");
  CHECK_THROWS_AS(make_backends(cfg), UsageError);
}

TEST_CASE("sharpen deblur slot") {
  EngineConfig cfg = parse_engine_config(R"({
    "lpd": {"backend": {"kind": "mock"}},
    "cr": {"backend": {"kind": "mock"}},
    "deblur": {"backend": {"kind": "sharpen"}}
  })");
  LoadedBackends backends = make_backends(cfg);
  CHECK(dynamic_cast<SharpenDeblurBackend*>(backends.deblur.get()) != nullptr);
}

TEST_CASE("config echo is stable json") {
  EngineConfig cfg = parse_engine_config("{}");
  std::string a = engine_config_to_json(cfg);
  std::string b = engine_config_to_json(cfg);
  CHECK(a == b);
  CHECK(nlohmann::json::parse(a).at("gate").at("threshold") == 100.0);
}

TEST_CASE("serialization shapes") {
  Detection det{{1, 2, 3, 4}, 0, 0.5};
  auto j = to_json(det);
  CHECK(j.at("box").size() == 4);
  CHECK(psnr_to_json(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(psnr_to_json(42.0) == 42.0);

  PipelineResult result;
  result.verdict = {12.5, true, 100.0};
  result.stage_times = {{"gate", 0.1}};
  auto line = result_to_json("img.png", result, false);
  CHECK_FALSE(line.contains("stage_times"));
  auto timed = result_to_json("img.png", result, true);
  CHECK(timed.contains("stage_times"));
}
