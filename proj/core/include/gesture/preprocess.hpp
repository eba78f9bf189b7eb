#pragma once

#include <span>
#include <vector>

#include "gesture/frame.hpp"

namespace gesture {

/// Parameters of motion-based trimming and the depth median filter.
struct TrimConfig {
  int gap = 3;              // frame offset of the motion difference
  int max_diff = 15;        // per-pixel difference cap, intensity units
  double threshold = 0.1;   // scaled motion below this counts as inactivity
  int min_trim = 5;         // minimum run length that triggers trimming
  int median_radius = 1;    // 3x3 median window

  // Throws ArgumentError when a field is outside its domain.
  void validate() const;
};

// Median over the (2r+1)x(2r+1) window clipped to the image. Even-sized
// border windows take the lower median.
Frame median_filter(const Frame& frame, int radius);

Video median_filter(const Video& video, int radius);

/// Per-pixel background depth: the farthest nonzero value the pixel ever
/// reports in the video (0 if it never reports one).
struct BackgroundModel {
  int rows = 0;
  int cols = 0;
  std::vector<std::uint8_t> depth;
};

// Pixels at least this many units nearer than the background are foreground.
inline constexpr int kForegroundMargin = 8;

BackgroundModel estimate_background(const Video& depth);

// Zeroes every pixel that is not foreground under `model`. Idempotent for a
// fixed model.
Video apply_background(const Video& depth, const BackgroundModel& model);

// apply_background(depth, estimate_background(depth)).
Video remove_background(const Video& depth);

/// Scaled motion per frame, length n - gap, values in [0, 1].
struct MotionCurve {
  std::vector<double> values;
};

// Mean clamped absolute difference between frame i and frame i + gap, for
// i = 0 .. n-gap-1. Throws ArgumentError if n <= gap.
std::vector<double> raw_motion(const Video& depth, const TrimConfig& cfg);

// motion(i) = mean(mot(max(0, i-gap) .. i)): the averaging window grows from
// one term up to gap+1 terms.
std::vector<double> average_motion(std::span<const double> mot, int gap);

// (x - min) / (max - min); a constant input maps to all zeros.
std::vector<double> scale_to_unit(std::span<const double> values);

// Expects a background-removed, median-filtered depth video.
MotionCurve motion_curve(const Video& depth, const TrimConfig& cfg);

/// Indices of the frames that survive trimming, strictly increasing, into a
/// video of `frame_count` frames. Frames past the end of the curve reuse its
/// last value. Low-motion prefix and suffix runs of at least min_trim frames
/// are dropped; interior runs longer than min_trim keep min_trim uniformly
/// spaced frames including both ends. A video that is low-motion throughout
/// is returned whole.
std::vector<int> trim_indices(const MotionCurve& motion, std::size_t frame_count,
                              const TrimConfig& cfg);

// Run-local (0-based) offsets kept from an interior run of `length` frames.
std::vector<int> uniform_keep(int length, int keep);

// Background removal, median filter, motion curve, trim_indices.
std::vector<int> trim_video(const Video& depth, const TrimConfig& cfg);

}  // namespace gesture
