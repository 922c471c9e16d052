// platepipe command-line front end.
//
// stdout carries only machine-parseable JSON lines; everything human-facing
// goes to stderr. Exit codes: 0 success, 1 runtime failure, 2 usage error.

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "platepipe/blur_gate.hpp"
#include "platepipe/config.hpp"
#include "platepipe/dataset.hpp"
#include "platepipe/eval.hpp"
#include "platepipe/image_io.hpp"
#include "platepipe/log.hpp"
#include "platepipe/pipeline.hpp"
#include "platepipe/quality_metrics.hpp"
#include "platepipe/serialize.hpp"
#include "platepipe/version.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

struct CommonFlags {
  std::string config_path;
  std::optional<double> blur_threshold;
  std::optional<double> iou;
  std::optional<double> conf;
  bool force_deblur = false;
  bool skip_deblur = false;
  int jobs = 1;
  std::uint64_t seed = 0;
  std::string out_path;
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_path, "JSON pipeline config file")
      ->envname("PLATE_PIPELINE_CONFIG");
  cmd->add_option("--jobs", flags.jobs, "Frame-level parallelism")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", flags.seed, "Seed for synthesis commands");
  cmd->add_option("--out", flags.out_path, "Write results to a file instead of stdout");
}

const CLI::Validator OpenUnitInterval(
    [](std::string& value) -> std::string {
      double v = 0.0;
      try {
        v = std::stod(value);
      } catch (...) {
        return "value must be a number in (0,1)";
      }
      if (v <= 0.0 || v >= 1.0) return "value must be strictly between 0 and 1";
      return {};
    },
    "FLOAT in (0,1)");

void add_override_flags(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--blur-threshold", flags.blur_threshold,
                  "Blur gate threshold (Laplacian variance)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--iou", flags.iou, "NMS IoU threshold")->check(OpenUnitInterval);
  cmd->add_option("--conf", flags.conf, "Detection confidence threshold")
      ->check(OpenUnitInterval);
  cmd->add_flag("--force-deblur", flags.force_deblur, "Always take the deblur path");
  cmd->add_flag("--skip-deblur", flags.skip_deblur, "Never take the deblur path");
}

platepipe::EngineConfig resolve_config(const CommonFlags& flags, bool require_file) {
  platepipe::EngineConfig cfg;
  if (!flags.config_path.empty()) {
    cfg = platepipe::load_engine_config(flags.config_path);
  } else if (require_file) {
    throw platepipe::UsageError("--config is required for this command");
  }
  if (flags.blur_threshold) cfg.pipeline.gate.threshold = *flags.blur_threshold;
  if (flags.iou) {
    cfg.pipeline.lpd.iou_threshold = *flags.iou;
    cfg.pipeline.cr.iou_threshold = *flags.iou;
  }
  if (flags.conf) {
    cfg.pipeline.lpd.confidence_threshold = *flags.conf;
    cfg.pipeline.cr.confidence_threshold = *flags.conf;
  }
  if (flags.force_deblur && flags.skip_deblur) {
    throw platepipe::UsageError("--force-deblur and --skip-deblur are mutually exclusive");
  }
  if (flags.force_deblur) cfg.pipeline.deblur_mode = platepipe::DeblurMode::force;
  if (flags.skip_deblur) cfg.pipeline.deblur_mode = platepipe::DeblurMode::skip;
  return cfg;
}

std::ostream& open_output(const std::string& out_path, std::ofstream& file) {
  if (out_path.empty()) return std::cout;
  file.open(out_path);
  if (!file) throw platepipe::Error("cannot open output file: " + out_path);
  return file;
}

std::vector<std::string> list_images(const std::string& dir) {
  std::vector<std::string> paths;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::string ext = entry.path().extension().string();
    for (auto& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (ext == ".png" || ext == ".jpg" || ext == ".jpeg") {
      paths.push_back(entry.path().string());
    }
  }
  std::sort(paths.begin(), paths.end());
  return paths;
}

// Ground truth layout: images with sibling .txt annotation files (class 0 =
// plate) plus a JSON map from image basename to the plate texts in
// annotation line order.
std::vector<platepipe::EvalSample> load_eval_dataset(const std::string& dir,
                                                     const std::string& texts_path) {
  nlohmann::json texts = nlohmann::json::object();
  if (!texts_path.empty()) {
    std::ifstream in(texts_path);
    if (!in) throw platepipe::ParseError("cannot open texts file: " + texts_path);
    in >> texts;
  }

  std::vector<platepipe::EvalSample> dataset;
  for (const std::string& path : list_images(dir)) {
    platepipe::EvalSample sample;
    sample.image_path = path;
    sample.image = platepipe::load_image(path);

    const std::string base = fs::path(path).filename().string();
    std::vector<std::string> plate_texts;
    if (texts.contains(base)) {
      plate_texts = texts.at(base).get<std::vector<std::string>>();
    }
    fs::path ann = fs::path(path).replace_extension(".txt");
    if (fs::exists(ann)) {
      auto records = platepipe::read_annotations(ann.string());
      for (std::size_t i = 0; i < records.size(); ++i) {
        platepipe::GroundTruthPlate gt;
        gt.box = platepipe::denormalize(records[i], sample.image.width, sample.image.height);
        if (i < plate_texts.size()) gt.text = plate_texts[i];
        sample.plates.push_back(std::move(gt));
      }
    }
    dataset.push_back(std::move(sample));
  }
  if (dataset.empty()) {
    throw platepipe::EmptySetError("no images found in " + dir);
  }
  return dataset;
}

int run_frames(const CommonFlags& flags, const std::vector<std::string>& images,
               bool include_times) {
  platepipe::EngineConfig cfg = resolve_config(flags, true);
  platepipe::LoadedBackends backends = platepipe::make_backends(cfg);

  std::ofstream out_file;
  std::ostream& out = open_output(flags.out_path, out_file);

  // Backends that are not concurrent-safe share one mutex.
  std::mutex backend_mutex;
  const bool needs_serialization = flags.jobs > 1 && !(backends.lpd->concurrent_safe() &&
                                                       backends.cr->concurrent_safe() &&
                                                       backends.deblur->concurrent_safe());

  auto process = [&](const std::string& path) {
    platepipe::Image img = platepipe::load_image(path);
    if (needs_serialization) {
      std::lock_guard<std::mutex> lock(backend_mutex);
      return platepipe::run_pipeline(img, cfg.pipeline, backends.view);
    }
    return platepipe::run_pipeline(img, cfg.pipeline, backends.view);
  };

  if (flags.jobs <= 1) {
    for (const std::string& path : images) {
      platepipe::PipelineResult result = process(path);
      out << platepipe::result_to_json(path, result, include_times).dump() << "\n";
    }
    return 0;
  }

  std::vector<ordered_json> lines(images.size());
  std::vector<std::string> errors(images.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    while (true) {
      std::size_t i = next.fetch_add(1);
      if (i >= images.size()) return;
      try {
        platepipe::PipelineResult result = process(images[i]);
        lines[i] = platepipe::result_to_json(images[i], result, include_times);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < flags.jobs; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  for (std::size_t i = 0; i < images.size(); ++i) {
    if (!errors[i].empty()) throw platepipe::Error(errors[i]);
    out << lines[i].dump() << "\n";
  }
  return 0;
}

int cmd_check_blur(const CommonFlags& flags, const std::string& image_path) {
  platepipe::EngineConfig cfg = resolve_config(flags, false);
  platepipe::Image img = platepipe::load_image(image_path);
  platepipe::BlurVerdict verdict = platepipe::check_blur(img, cfg.pipeline.gate);
  ordered_json j;
  j["variance"] = verdict.variance;
  j["is_blurred"] = verdict.is_blurred;
  std::cout << j.dump() << "\n";
  return 0;
}

int cmd_deblur(const CommonFlags& flags, const std::string& image_path, std::string out_path) {
  platepipe::EngineConfig cfg = resolve_config(flags, true);
  platepipe::LoadedBackends backends = platepipe::make_backends(cfg);
  platepipe::Image img = platepipe::load_image(image_path);
  platepipe::DeblurResult result = platepipe::deblur(*backends.deblur, img);
  if (out_path.empty()) {
    out_path = (fs::path(image_path).parent_path() /
                (fs::path(image_path).stem().string() + "_deblurred.png"))
                   .string();
  }
  platepipe::save_image(result.sharp, out_path);
  ordered_json j;
  j["image"] = image_path;
  j["out"] = out_path;
  j["variance_before"] = platepipe::laplacian_variance(img);
  j["variance_after"] = platepipe::laplacian_variance(result.sharp);
  std::cout << j.dump() << "\n";
  return 0;
}

int cmd_detect(const CommonFlags& flags, const std::string& image_path,
               const std::string& stage) {
  platepipe::EngineConfig cfg = resolve_config(flags, true);
  platepipe::LoadedBackends backends = platepipe::make_backends(cfg);
  platepipe::Image img = platepipe::load_image(image_path);
  platepipe::DetectorBackend& backend = stage == "cr" ? *backends.cr : *backends.lpd;
  const platepipe::DetectionConfig& det_cfg = stage == "cr" ? cfg.pipeline.cr : cfg.pipeline.lpd;
  std::vector<platepipe::Detection> dets = platepipe::detect(backend, img, det_cfg);
  ordered_json j;
  j["image"] = image_path;
  j["stage"] = stage;
  j["detections"] = ordered_json::array();
  for (const auto& d : dets) j["detections"].push_back(platepipe::to_json(d));
  std::cout << j.dump() << "\n";
  return 0;
}

int cmd_augment(const CommonFlags& flags, const std::vector<std::string>& images,
                const std::string& out_dir) {
  fs::create_directories(out_dir);
  for (const std::string& path : images) {
    platepipe::Image img = platepipe::load_image(path);
    ordered_json outputs;
    for (const auto& variant : platepipe::augment(img, flags.seed)) {
      std::string out_path =
          (fs::path(out_dir) / (fs::path(path).stem().string() + "_" +
                                platepipe::to_string(variant.tag) + ".png"))
              .string();
      platepipe::save_image(variant.image, out_path);
      outputs[platepipe::to_string(variant.tag)] = out_path;
    }
    ordered_json j;
    j["image"] = path;
    j["seed"] = flags.seed;
    j["outputs"] = outputs;
    std::cout << j.dump() << "\n";
  }
  return 0;
}

int cmd_synth_blur(const CommonFlags& flags, const std::vector<std::string>& images,
                   const std::vector<int>& kernel_sizes, const std::string& out_dir) {
  std::vector<int> sizes = kernel_sizes;
  if (sizes.empty()) sizes = {7, 9, 11, 13, 15, 17, 19};
  platepipe::CorpusManifest manifest =
      platepipe::synth_blur_corpus(images, sizes, out_dir, flags.seed);
  std::string manifest_path = (fs::path(out_dir) / "manifest.json").string();
  platepipe::write_manifest(manifest, manifest_path);
  ordered_json j;
  j["manifest"] = manifest_path;
  j["entries"] = manifest.entries.size();
  std::cout << j.dump() << "\n";
  return 0;
}

int cmd_calibrate(const std::string& sharp_dir, const std::string& blurred_dir) {
  std::vector<platepipe::Image> sharp, blurred;
  for (const std::string& path : list_images(sharp_dir)) {
    sharp.push_back(platepipe::load_image(path));
  }
  for (const std::string& path : list_images(blurred_dir)) {
    blurred.push_back(platepipe::load_image(path));
  }
  platepipe::CalibrationResult result = platepipe::calibrate(sharp, blurred);
  ordered_json j;
  j["threshold"] = result.threshold;
  j["separable"] = result.separable;
  j["sharp_count"] = sharp.size();
  j["blurred_count"] = blurred.size();
  std::cout << j.dump() << "\n";
  return 0;
}

int cmd_eval(const CommonFlags& flags, const std::string& dataset_dir,
             const std::string& texts_path, std::optional<double> eval_iou) {
  platepipe::EngineConfig cfg = resolve_config(flags, true);
  if (eval_iou) cfg.eval_iou = *eval_iou;
  platepipe::LoadedBackends backends = platepipe::make_backends(cfg);
  auto dataset = load_eval_dataset(dataset_dir, texts_path);
  platepipe::EvalReport report =
      platepipe::evaluate_pipeline(dataset, cfg.pipeline, backends.view, cfg.eval_iou);

  ordered_json j = platepipe::to_json(report);
  j["eval_iou"] = cfg.eval_iou;
  j["config"] = ordered_json::parse(platepipe::engine_config_to_json(cfg));
  j["version"] = platepipe::kVersion;

  std::ofstream out_file;
  std::ostream& out = open_output(flags.out_path, out_file);
  out << j.dump() << "\n";
  return 0;
}

int cmd_bench(const CommonFlags& flags, const std::string& dataset_dir, int warmup,
              int repeats) {
  platepipe::EngineConfig cfg = resolve_config(flags, true);
  platepipe::LoadedBackends backends = platepipe::make_backends(cfg);
  auto dataset = load_eval_dataset(dataset_dir, "");
  platepipe::BenchReport report =
      platepipe::bench(dataset, cfg.pipeline, backends.view, warmup, repeats);

  ordered_json j = platepipe::to_json(report);
  j["config"] = ordered_json::parse(platepipe::engine_config_to_json(cfg));
  j["version"] = platepipe::kVersion;

  std::ofstream out_file;
  std::ostream& out = open_output(flags.out_path, out_file);
  out << j.dump() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Selective-deblur license-plate reading pipeline"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(platepipe::kVersion));

  CommonFlags flags;

  // check-blur
  std::string image_path;
  auto* check = app.add_subcommand("check-blur", "Laplacian-variance blur verdict");
  check->add_option("image", image_path, "Input image")->required();
  add_common_flags(check, flags);
  add_override_flags(check, flags);

  // deblur
  std::string deblur_out;
  auto* deb = app.add_subcommand("deblur", "Run the deblur backend on one image");
  deb->add_option("image", image_path, "Input image")->required();
  deb->add_option("--out-image", deblur_out, "Output image path");
  add_common_flags(deb, flags);
  add_override_flags(deb, flags);

  // detect
  std::string detect_stage = "lpd";
  auto* det = app.add_subcommand("detect", "Run one detector on one image");
  det->add_option("image", image_path, "Input image")->required();
  det->add_option("--stage", detect_stage, "Detector to run")
      ->check(CLI::IsMember({"lpd", "cr"}));
  add_common_flags(det, flags);
  add_override_flags(det, flags);

  // run
  std::vector<std::string> run_images;
  bool run_times = false;
  auto* run = app.add_subcommand("run", "Full pipeline over images, JSON line per image");
  run->add_option("images", run_images, "Input images")->required();
  run->add_flag("--timing", run_times, "Include per-stage wall-clock in each JSON line");
  add_common_flags(run, flags);
  add_override_flags(run, flags);

  // augment
  std::vector<std::string> aug_images;
  std::string aug_out;
  auto* aug = app.add_subcommand("augment", "Write the five weather variants per image");
  aug->add_option("images", aug_images, "Input images")->required();
  aug->add_option("--out-dir", aug_out, "Output directory")->required();
  add_common_flags(aug, flags);

  // synth-blur
  std::vector<std::string> blur_images;
  std::vector<int> kernel_sizes;
  std::string blur_out;
  auto* synth = app.add_subcommand("synth-blur", "Paired sharp/blurred corpus synthesis");
  synth->add_option("images", blur_images, "Sharp input images")->required();
  synth->add_option("--kernel-sizes", kernel_sizes, "Odd box sizes in [7,19]")->delimiter(',');
  synth->add_option("--out-dir", blur_out, "Output directory")->required();
  add_common_flags(synth, flags);

  // calibrate
  std::string sharp_dir, blurred_dir;
  auto* cal = app.add_subcommand("calibrate", "Recommend a blur-gate threshold");
  cal->add_option("--sharp", sharp_dir, "Directory of sharp images")->required();
  cal->add_option("--blurred", blurred_dir, "Directory of blurred images")->required();
  add_common_flags(cal, flags);

  // eval
  std::string dataset_dir, texts_path;
  std::optional<double> eval_iou;
  auto* ev = app.add_subcommand("eval", "Detection metrics and plate accuracy over a dataset");
  ev->add_option("--dataset", dataset_dir, "Directory of images with sibling .txt annotations")
      ->required();
  ev->add_option("--texts", texts_path, "JSON map image basename -> plate texts");
  ev->add_option("--eval-iou", eval_iou, "Matching IoU threshold")
      ->check(OpenUnitInterval);
  add_common_flags(ev, flags);
  add_override_flags(ev, flags);

  // bench
  int warmup = 1, repeats = 3;
  auto* be = app.add_subcommand("bench", "Per-stage latency statistics");
  be->add_option("--dataset", dataset_dir, "Directory of images")->required();
  be->add_option("--warmup", warmup, "Discarded warmup passes")->check(CLI::NonNegativeNumber);
  be->add_option("--repeats", repeats, "Timed passes")->check(CLI::PositiveNumber);
  add_common_flags(be, flags);
  add_override_flags(be, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    if (check->parsed()) return cmd_check_blur(flags, image_path);
    if (deb->parsed()) return cmd_deblur(flags, image_path, deblur_out);
    if (det->parsed()) return cmd_detect(flags, image_path, detect_stage);
    if (run->parsed()) return run_frames(flags, run_images, run_times);
    if (aug->parsed()) return cmd_augment(flags, aug_images, aug_out);
    if (synth->parsed()) return cmd_synth_blur(flags, blur_images, kernel_sizes, blur_out);
    if (cal->parsed()) return cmd_calibrate(sharp_dir, blurred_dir);
    if (ev->parsed()) return cmd_eval(flags, dataset_dir, texts_path, eval_iou);
    if (be->parsed()) return cmd_bench(flags, dataset_dir, warmup, repeats);
  } catch (const platepipe::UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
