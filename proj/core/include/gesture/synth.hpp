#pragma once

#include <cstdint>
#include <vector>

#include "gesture/corpus.hpp"

namespace gesture {

/// Desk-scale synthetic batches: a static figure in front of a far wall whose
/// two arms perform keyframed gestures.
struct SynthConfig {
  std::uint64_t seed = 1;
  int k = 5;                 // vocabulary size
  int rows = 120;            // multiple of 40
  int cols = 160;            // multiple of 40
  double noise_rate = 0.0;   // probability of a zeroed depth pixel in test videos
  double speed_min = 1.0;    // per-gesture speed factor range (log-uniform)
  double speed_max = 1.0;
  int rest_length = 10;      // resting frames before, between and after gestures
  int test_count = 10;
  int min_gestures = 1;
  int max_gestures = 5;
  int idle_prefix = 0;       // frames of a held non-resting pose before the first rest
  int idle_suffix = 0;       // same, after the last rest

  void validate() const;
};

/// Arm configuration of the figure. Angles in degrees: 0 hangs down, 90
/// points sideways away from the body, 180 points up, negative crosses the
/// body. Reach in (0, 1] shortens an arm pointing toward the camera.
struct Pose {
  double left_angle = 12.0;
  double right_angle = 12.0;
  double left_reach = 1.0;
  double right_reach = 1.0;
};

Pose rest_pose();

struct Keyframe {
  double time;  // frames at speed 1
  Pose pose;
};

// Starts and ends in the resting pose.
struct GestureTemplate {
  std::vector<Keyframe> keys;

  double duration() const { return keys.empty() ? 0.0 : keys.back().time; }
  Pose at(double time) const;
};

// Depth (8-bit, 0 = no reading) and grayscale color rendering of one pose.
struct RenderedFrame {
  Frame depth;
  Frame color;
};

RenderedFrame render_pose(const Pose& pose, int rows, int cols);

// k distinct templates, deterministic in `seed`.
std::vector<GestureTemplate> make_templates(int k, std::uint64_t seed);

// Sample times of a performance at `speed`, always ending on the last key.
std::vector<double> performance_times(const GestureTemplate& g, double speed);

struct SynthBatch {
  Batch batch;
  PredictionMap truth;
};

SynthBatch generate_batch(const SynthConfig& cfg);

}  // namespace gesture
