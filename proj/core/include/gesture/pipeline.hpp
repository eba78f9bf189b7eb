#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gesture/corpus.hpp"
#include "gesture/descriptors.hpp"
#include "gesture/preprocess.hpp"
#include "gesture/qchi.hpp"
#include "gesture/recognizer.hpp"

namespace gesture {

enum class Method { SM, MM };

struct RunConfig {
  Method method = Method::SM;
  bool trim = true;
  bool medfilt = true;
  double qc_m = 0.5;
  int window_l = 10;
  int jobs = 1;
  TrimConfig trim_config;
  FlowParams flow;
  SmOptions sm;
  SegmentOptions segments;
  OrientationCoupling coupling = OrientationCoupling::Adjacent;
  std::optional<std::filesystem::path> dump_dir;

  void validate() const;
};

/// A recording after preprocessing and feature extraction.
struct PreparedVideo {
  std::vector<FrameRepr> reprs;
  std::vector<int> kept;               // surviving frame indices
  std::optional<MotionCurve> motion;   // present when trimming ran
};

/// Background removal and (optionally) median filtering of depth, motion
/// trimming applied to both streams, then frame representations. Trimming is
/// skipped for videos too short for the motion gap, and undone if it would
/// leave fewer than two frames.
PreparedVideo prepare_recording(const Recording& rec, const RunConfig& cfg, bool with_hof);

/// Models built from a batch's training recordings.
class TrainedRecognizer {
 public:
  static TrainedRecognizer train(const Batch& batch, const RunConfig& cfg);

  LabelSequence recognize(const Recording& rec, const std::string& id = {}) const;

  const RunConfig& config() const noexcept { return cfg_; }
  const MatchContext& context() const noexcept { return ctx_; }
  const GestureModel& sm_model() const noexcept { return sm_model_; }
  const std::vector<GestureModel>& mm_models() const noexcept { return mm_models_; }
  std::size_t training_frames() const noexcept { return training_frames_; }

 private:
  RunConfig cfg_;
  MatchContext ctx_;
  GestureModel sm_model_;
  std::vector<GestureModel> mm_models_;
  FrameRepr rest_;
  std::size_t training_frames_ = 0;
};

// Recognizes every test recording, up to cfg.jobs at a time.
PredictionMap predict_batch(const Batch& batch, const RunConfig& cfg);

struct BenchOptions {
  std::uint64_t seed = 11;
  int rows = 120;
  int cols = 160;
  int base_vocabulary = 24;   // training gestures at scale 1
  int base_test_frames = 120; // test frames at scale 1
  int repeats = 5;            // the fastest repeat is reported
  RunConfig run;
};

struct BenchPoint {
  std::string axis;  // "F" (test frames) or "N" (training frames)
  double scale = 1.0;
  std::size_t training_frames = 0;
  std::size_t test_frames = 0;
  double train_seconds = 0.0;
  double eval_seconds = 0.0;
};

/// For each scale, times evaluation of a test video of scale * F frames
/// against the base model, and of the base test video against a model with
/// scale * N training frames.
std::vector<BenchPoint> run_bench(std::span<const double> scales, const BenchOptions& options = {});

void write_bench_csv(std::span<const BenchPoint> points, std::ostream& out);
void write_bench_csv(std::span<const BenchPoint> points, const std::filesystem::path& path);

}  // namespace gesture
