#include "gesture/preprocess.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <string>

#include "gesture/error.hpp"

namespace gesture {

void TrimConfig::validate() const {
  if (gap < 1) throw ArgumentError("gap must be >= 1");
  if (max_diff <= 0 || max_diff > 255) throw ArgumentError("max_diff must be in (0, 255]");
  if (!(threshold > 0.0 && threshold < 1.0)) throw ArgumentError("threshold must be in (0, 1)");
  if (min_trim < 1) throw ArgumentError("min_trim must be >= 1");
  if (median_radius < 1) throw ArgumentError("median_radius must be >= 1");
}

namespace {

void sort2(std::uint8_t& a, std::uint8_t& b) {
  const std::uint8_t lo = std::min(a, b);
  b = std::max(a, b);
  a = lo;
}

// Median of 9 with a 19-exchange network.
std::uint8_t median9(std::array<std::uint8_t, 9> p) {
  sort2(p[1], p[2]); sort2(p[4], p[5]); sort2(p[7], p[8]);
  sort2(p[0], p[1]); sort2(p[3], p[4]); sort2(p[6], p[7]);
  sort2(p[1], p[2]); sort2(p[4], p[5]); sort2(p[7], p[8]);
  sort2(p[0], p[3]); sort2(p[5], p[8]); sort2(p[4], p[7]);
  sort2(p[3], p[6]); sort2(p[1], p[4]); sort2(p[2], p[5]);
  sort2(p[4], p[7]); sort2(p[4], p[2]); sort2(p[6], p[4]);
  sort2(p[4], p[2]);
  return p[4];
}

std::uint8_t clipped_median(const Frame& frame, int r, int c) {
  std::array<std::uint8_t, 9> window{};
  std::size_t n = 0;
  for (int y = std::max(0, r - 1); y <= std::min(frame.rows() - 1, r + 1); ++y)
    for (int x = std::max(0, c - 1); x <= std::min(frame.cols() - 1, c + 1); ++x) window[n++] = frame(y, x);
  std::sort(window.begin(), window.begin() + static_cast<std::ptrdiff_t>(n));
  return window[(n - 1) / 2];
}

Frame median3x3(const Frame& frame) {
  const int rows = frame.rows(), cols = frame.cols();
  Frame out(rows, cols);
  for (int r = 0; r < rows; ++r) {
    const bool edge_row = r == 0 || r == rows - 1;
    for (int c = 0; c < cols; ++c) {
      if (edge_row || c == 0 || c == cols - 1) {
        out(r, c) = clipped_median(frame, r, c);
        continue;
      }
      out(r, c) = median9({frame(r - 1, c - 1), frame(r - 1, c), frame(r - 1, c + 1),
                           frame(r, c - 1), frame(r, c), frame(r, c + 1),
                           frame(r + 1, c - 1), frame(r + 1, c), frame(r + 1, c + 1)});
    }
  }
  return out;
}

}  // namespace

Frame median_filter(const Frame& frame, int radius) {
  if (radius < 1) throw ArgumentError("median radius must be >= 1");
  const int rows = frame.rows();
  const int cols = frame.cols();
  if (radius == 1 && rows >= 3 && cols >= 3) return median3x3(frame);
  Frame out(rows, cols);
  std::vector<std::uint8_t> window;
  window.reserve(static_cast<std::size_t>((2 * radius + 1) * (2 * radius + 1)));
  for (int r = 0; r < rows; ++r) {
    const int r0 = std::max(0, r - radius), r1 = std::min(rows - 1, r + radius);
    for (int c = 0; c < cols; ++c) {
      const int c0 = std::max(0, c - radius), c1 = std::min(cols - 1, c + radius);
      window.clear();
      for (int y = r0; y <= r1; ++y)
        for (int x = c0; x <= c1; ++x) window.push_back(frame(y, x));
      // lower median for even counts
      auto mid = window.begin() + static_cast<std::ptrdiff_t>((window.size() - 1) / 2);
      std::nth_element(window.begin(), mid, window.end());
      out(r, c) = *mid;
    }
  }
  return out;
}

Video median_filter(const Video& video, int radius) {
  Video out = video;
  for (auto& f : out.frames) f = median_filter(f, radius);
  return out;
}

BackgroundModel estimate_background(const Video& depth) {
  check_uniform_shape(depth);
  BackgroundModel model;
  model.rows = depth.rows();
  model.cols = depth.cols();
  model.depth.assign(static_cast<std::size_t>(model.rows) * static_cast<std::size_t>(model.cols), 0);
  for (const auto& f : depth.frames) {
    auto px = f.pixels();
    for (std::size_t i = 0; i < px.size(); ++i) model.depth[i] = std::max(model.depth[i], px[i]);
  }
  return model;
}

Video apply_background(const Video& depth, const BackgroundModel& model) {
  Video out = depth;
  for (auto& f : out.frames) {
    if (f.rows() != model.rows || f.cols() != model.cols) {
      throw IntegrityError("background model shape does not match frame");
    }
    auto px = f.pixels();
    for (std::size_t i = 0; i < px.size(); ++i) {
      if (px[i] == 0) continue;
      if (static_cast<int>(model.depth[i]) - static_cast<int>(px[i]) < kForegroundMargin) px[i] = 0;
    }
  }
  return out;
}

Video remove_background(const Video& depth) {
  return apply_background(depth, estimate_background(depth));
}

std::vector<double> raw_motion(const Video& depth, const TrimConfig& cfg) {
  cfg.validate();
  const std::size_t n = depth.size();
  if (n <= static_cast<std::size_t>(cfg.gap)) {
    throw ArgumentError("video of " + std::to_string(n) + " frames is too short for gap " +
                        std::to_string(cfg.gap));
  }
  check_uniform_shape(depth);
  const std::size_t count = n - static_cast<std::size_t>(cfg.gap);
  std::vector<double> mot(count);
  for (std::size_t i = 0; i < count; ++i) {
    auto a = depth.frames[i].pixels();
    auto b = depth.frames[i + static_cast<std::size_t>(cfg.gap)].pixels();
    long long sum = 0;
    for (std::size_t p = 0; p < a.size(); ++p) {
      sum += std::min(std::abs(static_cast<int>(a[p]) - static_cast<int>(b[p])), cfg.max_diff);
    }
    mot[i] = static_cast<double>(sum) / static_cast<double>(a.size());
  }
  return mot;
}

std::vector<double> average_motion(std::span<const double> mot, int gap) {
  if (gap < 1) throw ArgumentError("gap must be >= 1");
  std::vector<double> out(mot.size());
  for (std::size_t i = 0; i < mot.size(); ++i) {
    const std::size_t first = i >= static_cast<std::size_t>(gap) ? i - static_cast<std::size_t>(gap) : 0;
    double sum = 0.0;
    for (std::size_t j = first; j <= i; ++j) sum += mot[j];
    out[i] = sum / static_cast<double>(i - first + 1);
  }
  return out;
}

std::vector<double> scale_to_unit(std::span<const double> values) {
  std::vector<double> out(values.size(), 0.0);
  if (values.empty()) return out;
  auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const double range = *hi - *lo;
  if (range <= 0.0) return out;
  for (std::size_t i = 0; i < values.size(); ++i) out[i] = (values[i] - *lo) / range;
  return out;
}

MotionCurve motion_curve(const Video& depth, const TrimConfig& cfg) {
  auto mot = raw_motion(depth, cfg);
  auto avg = average_motion(mot, cfg.gap);
  return MotionCurve{scale_to_unit(avg)};
}

std::vector<int> uniform_keep(int length, int keep) {
  std::vector<int> out;
  if (length <= 0) return out;
  if (keep >= length) {
    for (int i = 0; i < length; ++i) out.push_back(i);
    return out;
  }
  if (keep <= 1) return {0};
  for (int j = 0; j < keep; ++j) {
    out.push_back(static_cast<int>(std::lround(static_cast<double>(j) * (length - 1) / (keep - 1))));
  }
  return out;
}

std::vector<int> trim_indices(const MotionCurve& motion, std::size_t frame_count,
                              const TrimConfig& cfg) {
  cfg.validate();
  const int n = static_cast<int>(frame_count);
  if (motion.values.empty()) throw ArgumentError("empty motion curve");
  std::vector<char> low(frame_count);
  for (int i = 0; i < n; ++i) {
    const std::size_t k = std::min(static_cast<std::size_t>(i), motion.values.size() - 1);
    low[static_cast<std::size_t>(i)] = motion.values[k] < cfg.threshold;
  }

  int begin = 0;
  while (begin < n && low[static_cast<std::size_t>(begin)]) ++begin;
  if (begin == n) {
    std::vector<int> all(frame_count);
    for (int i = 0; i < n; ++i) all[static_cast<std::size_t>(i)] = i;
    return all;
  }
  int end = n;
  while (end > begin && low[static_cast<std::size_t>(end - 1)]) --end;
  if (begin < cfg.min_trim) begin = 0;
  if (n - end < cfg.min_trim) end = n;

  std::vector<int> kept;
  int i = begin;
  while (i < end) {
    if (!low[static_cast<std::size_t>(i)]) {
      kept.push_back(i++);
      continue;
    }
    int j = i;
    while (j < end && low[static_cast<std::size_t>(j)]) ++j;
    const int length = j - i;
    // runs touching an untrimmed prefix/suffix are never longer than min_trim
    if (length > cfg.min_trim) {
      for (int off : uniform_keep(length, cfg.min_trim)) kept.push_back(i + off);
    } else {
      for (int t = i; t < j; ++t) kept.push_back(t);
    }
    i = j;
  }
  return kept;
}

std::vector<int> trim_video(const Video& depth, const TrimConfig& cfg) {
  cfg.validate();
  Video clean = median_filter(remove_background(depth), cfg.median_radius);
  return trim_indices(motion_curve(clean, cfg), depth.size(), cfg);
}

}  // namespace gesture
