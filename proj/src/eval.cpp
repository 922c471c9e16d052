#include "platepipe/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "platepipe/log.hpp"

namespace platepipe {

namespace {

double percentile_95(std::vector<double> xs) {
  if (xs.empty()) return 0.0;
  std::sort(xs.begin(), xs.end());
  const std::size_t idx =
      static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(xs.size()))) - 1;
  return xs[std::min(idx, xs.size() - 1)];
}

double mean_of(const std::vector<double>& xs) {
  if (xs.empty()) return 0.0;
  double acc = 0.0;
  for (double x : xs) acc += x;
  return acc / static_cast<double>(xs.size());
}

}  // namespace

MatchCounts match_detections(std::vector<Detection> predictions, const std::vector<BBox>& gts,
                             double iou_threshold) {
  std::sort(predictions.begin(), predictions.end(), [](const Detection& a, const Detection& b) {
    if (a.confidence != b.confidence) return a.confidence > b.confidence;
    if (a.class_id != b.class_id) return a.class_id < b.class_id;
    return a.box.x_min < b.box.x_min;
  });

  std::vector<bool> matched(gts.size(), false);
  MatchCounts counts;
  for (const Detection& pred : predictions) {
    int best = -1;
    double best_iou = 0.0;
    for (std::size_t g = 0; g < gts.size(); ++g) {
      if (matched[g]) continue;
      double overlap = iou(pred.box, gts[g]);
      if (overlap >= iou_threshold && overlap > best_iou) {
        best = static_cast<int>(g);
        best_iou = overlap;
      }
    }
    if (best >= 0) {
      matched[static_cast<std::size_t>(best)] = true;
      ++counts.tp;
    } else {
      ++counts.fp;
    }
  }
  counts.fn = static_cast<int>(gts.size()) - counts.tp;
  return counts;
}

double precision_of(const MatchCounts& c) {
  if (c.tp + c.fp == 0) return c.fn == 0 ? 1.0 : 0.0;
  return static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
}

double recall_of(const MatchCounts& c) {
  if (c.tp + c.fn == 0) return 1.0;
  return static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
}

EvalReport evaluate_pipeline(const std::vector<EvalSample>& dataset, const PipelineConfig& cfg,
                             const PipelineBackends& backends, double eval_iou) {
  if (dataset.empty()) throw EmptySetError("evaluate_pipeline: dataset must be non-empty");

  EvalReport report;
  MatchCounts total;
  std::map<std::string, double> time_sums;
  for (const EvalSample& sample : dataset) {
    PipelineResult result;
    try {
      result = run_pipeline(sample.image, cfg, backends);
    } catch (const BackendFailure& e) {
      throw BackendFailure(sample.image_path + ": " + e.what());
    }

    std::vector<Detection> plate_dets;
    plate_dets.reserve(result.plates.size());
    for (const PlateReading& reading : result.plates) {
      plate_dets.push_back({reading.plate_box, 0, reading.plate_confidence});
    }
    std::vector<BBox> gt_boxes;
    gt_boxes.reserve(sample.plates.size());
    for (const auto& gt : sample.plates) gt_boxes.push_back(gt.box);

    MatchCounts counts = match_detections(plate_dets, gt_boxes, eval_iou);
    total.tp += counts.tp;
    total.fp += counts.fp;
    total.fn += counts.fn;

    for (const auto& gt : sample.plates) {
      ++report.gt_plates;
      bool correct = false;
      for (const PlateReading& reading : result.plates) {
        if (reading.text == gt.text && iou(reading.plate_box, gt.box) >= eval_iou) {
          correct = true;
          break;
        }
      }
      if (correct) ++report.correct_plates;
    }

    for (const auto& [stage, seconds] : result.stage_times) {
      time_sums[stage] += seconds;
    }
    ++report.images;
  }

  report.tp = total.tp;
  report.fp = total.fp;
  report.fn = total.fn;
  report.precision = precision_of(total);
  report.recall = recall_of(total);
  report.plate_accuracy =
      report.gt_plates == 0
          ? 1.0
          : static_cast<double>(report.correct_plates) / static_cast<double>(report.gt_plates);
  for (const auto& [stage, sum] : time_sums) {
    report.mean_stage_times[stage] = sum / static_cast<double>(report.images);
  }
  return report;
}

BenchReport bench(const std::vector<EvalSample>& dataset, const PipelineConfig& cfg,
                  const PipelineBackends& backends, int warmup, int repeats) {
  if (repeats < 1) throw RangeError("bench: repeats must be >= 1");
  if (warmup < 0) throw RangeError("bench: warmup must be >= 0");
  if (dataset.empty()) throw EmptySetError("bench: dataset must be non-empty");

  using clock = std::chrono::steady_clock;
  std::map<std::string, std::vector<double>> stage_samples;
  std::map<std::string, std::vector<double>> substage_samples;
  std::vector<double> total_samples;

  for (int pass = 0; pass < warmup + repeats; ++pass) {
    const bool timed = pass >= warmup;
    for (const EvalSample& sample : dataset) {
      const auto t0 = clock::now();
      PipelineResult result = run_pipeline(sample.image, cfg, backends);
      const double total = std::chrono::duration<double>(clock::now() - t0).count();
      if (!timed) continue;
      for (const auto& [stage, seconds] : result.stage_times) {
        stage_samples[stage].push_back(seconds);
      }
      for (const auto& [stage, seconds] : result.substage_times) {
        substage_samples[stage].push_back(seconds);
      }
      total_samples.push_back(total);
    }
  }

  BenchReport report;
  report.warmup = warmup;
  report.repeats = repeats;
  report.samples = static_cast<int>(total_samples.size());
  for (const auto& [stage, samples] : stage_samples) {
    report.stages[stage] = {mean_of(samples), percentile_95(samples)};
  }
  for (const auto& [stage, samples] : substage_samples) {
    report.substages[stage] = {mean_of(samples), percentile_95(samples)};
  }
  report.end_to_end = {mean_of(total_samples), percentile_95(total_samples)};
  return report;
}

}  // namespace platepipe
