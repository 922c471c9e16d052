#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "platepipe/blur_gate.hpp"
#include "platepipe/deblur.hpp"
#include "platepipe/detect.hpp"

namespace platepipe {

enum class DeblurMode { automatic, force, skip };

const char* to_string(DeblurMode mode);
DeblurMode deblur_mode_from_string(const std::string& name);

struct PipelineConfig {
  BlurGateConfig gate;
  DetectionConfig lpd;
  DetectorSpec lpd_spec{1, 3, 256, default_plate_labels()};
  DetectionConfig cr;
  DetectorSpec cr_spec{44, 3, 256, default_char_labels()};
  double crop_margin = 0.05;
  DeblurMode deblur_mode = DeblurMode::automatic;

  /// Enforces the two pipeline roles: a 1-class plate head and a 44-class
  /// character head, and crop_margin in [0, 0.5].
  void validate() const;
};

/// One recognized plate: where it is, which characters were read, and the
/// assembled text.
struct PlateReading {
  BBox plate_box;                // source-frame pixels
  double plate_confidence = 0.0;
  BBox crop_box;                 // region handed to the character detector
  std::vector<std::pair<std::string, Detection>> characters;  // crop coords
  std::string text;
  double mean_char_confidence = 0.0;
  bool format_valid = false;
};

struct PipelineResult {
  BlurVerdict verdict;
  bool deblur_applied = false;
  std::vector<PlateReading> plates;
  std::map<std::string, double> stage_times;      // gate, deblur, lpd, cr, assemble
  std::map<std::string, double> substage_times;   // lpd.infer, lpd.post, cr.infer, cr.post
};

struct PipelineBackends {
  DetectorBackend* lpd = nullptr;
  DetectorBackend* cr = nullptr;
  DeblurBackend* deblur = nullptr;  // may be null when the mode is skip
};

/// Orders character detections left to right (ties by y-center, then by
/// descending confidence), maps class ids to labels, and concatenates the
/// plate text. The caller fills in plate geometry afterwards.
PlateReading assemble_plate(const std::vector<Detection>& characters, const DetectorSpec& spec);

/// Advisory single-row layout check: 8 symbols shaped digit,digit,letter,
/// digit,digit,digit,digit,digit. Never rejects a reading.
bool validate_plate_format(const std::vector<std::string>& symbols);

/// Convenience overload for an already-concatenated text; the label set is
/// used to re-tokenize it (longest match first).
bool validate_plate_format(const std::string& text, const std::vector<std::string>& labels);

/// Runs the full architecture on one frame: blur gate, selective deblur,
/// plate detection, per-plate crop, character detection, plate assembly.
/// Zero plates is a success. Backend errors surface as BackendFailure tagged
/// with the failing stage.
PipelineResult run_pipeline(const Image& img, const PipelineConfig& cfg,
                            const PipelineBackends& backends);

}  // namespace platepipe
