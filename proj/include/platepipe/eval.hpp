#pragma once

#include <map>
#include <string>
#include <vector>

#include "platepipe/pipeline.hpp"

namespace platepipe {

struct MatchCounts {
  int tp = 0;
  int fp = 0;
  int fn = 0;
};

/// Greedy detection/ground-truth matching: predictions in descending
/// confidence, each taking the highest-IoU still-unmatched ground truth with
/// IoU >= threshold. Leftover predictions are false positives, leftover
/// ground truths false negatives.
MatchCounts match_detections(std::vector<Detection> predictions, const std::vector<BBox>& gts,
                             double iou_threshold);

/// Precision with the fixed zero-prediction convention: 0 when ground truth
/// exists but nothing was predicted, 1 when neither exists.
double precision_of(const MatchCounts& counts);
double recall_of(const MatchCounts& counts);

struct GroundTruthPlate {
  BBox box;
  std::string text;
};

struct EvalSample {
  std::string image_path;
  Image image;
  std::vector<GroundTruthPlate> plates;
};

struct EvalReport {
  double precision = 0.0;
  double recall = 0.0;
  int tp = 0;
  int fp = 0;
  int fn = 0;
  std::map<std::string, double> mean_stage_times;
  double plate_accuracy = 0.0;  // exact-text matches over ground-truth plates
  int correct_plates = 0;
  int gt_plates = 0;
  int images = 0;
};

/// Runs the pipeline over every sample. Plate detection quality is scored by
/// box matching at eval_iou; end-to-end accuracy counts a ground-truth plate
/// as read when some reading matches its text exactly and overlaps its box
/// at IoU >= eval_iou.
EvalReport evaluate_pipeline(const std::vector<EvalSample>& dataset, const PipelineConfig& cfg,
                             const PipelineBackends& backends, double eval_iou = 0.5);

struct LatencyStat {
  double mean_seconds = 0.0;
  double p95_seconds = 0.0;
};

struct BenchReport {
  std::map<std::string, LatencyStat> stages;     // the five pipeline stages
  std::map<std::string, LatencyStat> substages;  // infer/post splits
  LatencyStat end_to_end;
  int warmup = 0;
  int repeats = 0;
  int samples = 0;  // timed samples per stage (images x repeats)
};

/// Per-stage wall-clock statistics over repeated pipeline runs. Backend
/// loading happens before this call and is excluded; warmup passes are
/// discarded.
BenchReport bench(const std::vector<EvalSample>& dataset, const PipelineConfig& cfg,
                  const PipelineBackends& backends, int warmup, int repeats);

}  // namespace platepipe
