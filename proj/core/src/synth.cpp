#include "gesture/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <string>

#include "gesture/error.hpp"

namespace gesture {
namespace {

constexpr std::uint8_t kWallDepth = 220;
constexpr std::uint8_t kBodyDepth = 150;
constexpr std::uint8_t kArmDepth = 100;
constexpr std::uint8_t kHandDepth = 92;
constexpr double kShoulderOffset = 0.08;  // fraction of the width

double deg2rad(double d) { return d * std::numbers::pi / 180.0; }

double smoothstep(double x) { return x * x * (3.0 - 2.0 * x); }

Pose lerp(const Pose& a, const Pose& b, double w) {
  return {a.left_angle + (b.left_angle - a.left_angle) * w,
          a.right_angle + (b.right_angle - a.right_angle) * w,
          a.left_reach + (b.left_reach - a.left_reach) * w,
          a.right_reach + (b.right_reach - a.right_reach) * w};
}

Pose pose(double l, double r, double lr = 1.0, double rr = 1.0) { return {l, r, lr, rr}; }

// Key times below are stretched by this factor.
constexpr double kTimeScale = 1.5;

GestureTemplate from_keys(std::initializer_list<std::pair<double, Pose>> keys) {
  GestureTemplate g;
  g.keys.push_back({0.0, rest_pose()});
  for (const auto& [t, p] : keys) g.keys.push_back({t * kTimeScale, p});
  return g;
}

// Hand-designed vocabulary; every gesture moves both arms.
std::vector<GestureTemplate> base_templates() {
  const Pose r = rest_pose();
  return {
      from_keys({{8, pose(90, 90)}, {16, r}}),                                      // raise sideways
      from_keys({{9, pose(40, 165)}, {18, r}}),                                     // right overhead
      from_keys({{9, pose(165, 40)}, {18, r}}),                                     // left overhead
      from_keys({{7, pose(-50, -50)}, {15, r}}),                                    // cross
      from_keys({{6, pose(35, 115)}, {9, pose(35, 70)}, {12, pose(35, 115)}, {15, pose(35, 70)}, {20, r}}),
      from_keys({{6, pose(120, 40)}, {12, pose(40, 120)}, {18, r}}),                // alternate
      from_keys({{7, pose(60, -45)}, {13, pose(60, -45)}, {19, r}}),                // hold, right across
      from_keys({{6, pose(115, 35)}, {9, pose(70, 35)}, {12, pose(115, 35)}, {15, pose(70, 35)}, {20, r}}),
      from_keys({{8, pose(70, 70, 0.45, 0.45)}, {16, r}}),                          // push forward
      from_keys({{9, pose(160, 160)}, {18, r}}),                                    // both overhead
      from_keys({{7, pose(-45, 60)}, {13, pose(-45, 60)}, {19, r}}),                // hold, left across
      from_keys({{8, pose(135, 45)}, {16, r}}),                                     // diagonal
  };
}

struct Capsule {
  double x0, y0, x1, y1, radius;
};

double capsule_distance(const Capsule& c, double x, double y, double* along) {
  const double dx = c.x1 - c.x0, dy = c.y1 - c.y0;
  const double len2 = dx * dx + dy * dy;
  double t = len2 > 0.0 ? ((x - c.x0) * dx + (y - c.y0) * dy) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  if (along) *along = t * std::sqrt(len2);
  const double px = c.x0 + t * dx - x, py = c.y0 + t * dy - y;
  return std::sqrt(px * px + py * py);
}

struct StaticScene {
  int rows = 0, cols = 0;
  std::vector<double> depth, color;
};

// Textured wall, torso and head; cached per frame size.
const StaticScene& static_scene(int rows, int cols) {
  thread_local StaticScene scene;
  if (scene.rows == rows && scene.cols == cols) return scene;
  const double R = rows, C = cols, cx = 0.5 * C, shoulder_dx = kShoulderOffset * C;
  scene.rows = rows;
  scene.cols = cols;
  scene.depth.assign(static_cast<std::size_t>(rows * cols), kWallDepth);
  scene.color.assign(scene.depth.size(), 0.0);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const double x = c + 0.5, y = r + 0.5;
      const std::size_t i = static_cast<std::size_t>(r * cols + c);
      scene.color[i] = 95.0 + 25.0 * std::sin(x / 6.0) * std::cos(y / 8.0);
      const bool torso = std::abs(x - cx) <= shoulder_dx && y >= 0.48 * R && y <= 0.97 * R;
      const double hdx = x - cx, hdy = y - 0.38 * R;
      const bool head = hdx * hdx + hdy * hdy <= (0.08 * R) * (0.08 * R);
      if (torso || head) {
        scene.depth[i] = kBodyDepth;
        scene.color[i] = 150.0 + 12.0 * std::sin((x + y) / 5.0);
      }
    }
  }
  return scene;
}

std::uint8_t clamp_u8(double v) { return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L)); }

}  // namespace

void SynthConfig::validate() const {
  if (k < 1) throw ArgumentError("synth: k must be >= 1");
  if (rows < 120 || cols < 120 || rows % 40 != 0 || cols % 40 != 0) {
    throw ArgumentError("synth: frame size must be multiples of 40, at least 120");
  }
  if (noise_rate < 0.0 || noise_rate > 0.2) throw ArgumentError("synth: noise_rate must be in [0, 0.2]");
  if (speed_min < 0.34 || speed_max > 3.0 || speed_min > speed_max) {
    throw ArgumentError("synth: speed range must lie within [0.34, 3]");
  }
  if (rest_length < 0 || test_count < 0 || idle_prefix < 0 || idle_suffix < 0) {
    throw ArgumentError("synth: lengths and counts must be non-negative");
  }
  if (min_gestures < 1 || max_gestures < min_gestures) {
    throw ArgumentError("synth: need 1 <= min_gestures <= max_gestures");
  }
}

Pose rest_pose() { return Pose{}; }

Pose GestureTemplate::at(double time) const {
  if (keys.empty()) return rest_pose();
  if (time <= keys.front().time) return keys.front().pose;
  for (std::size_t i = 1; i < keys.size(); ++i) {
    if (time <= keys[i].time) {
      const double span = keys[i].time - keys[i - 1].time;
      const double w = span > 0.0 ? (time - keys[i - 1].time) / span : 1.0;
      return lerp(keys[i - 1].pose, keys[i].pose, smoothstep(w));
    }
  }
  return keys.back().pose;
}

RenderedFrame render_pose(const Pose& p, int rows, int cols) {
  Frame depth(rows, cols), color(rows, cols);
  const double R = rows, C = cols;
  const double shoulder_y = 0.50 * R;
  const double shoulder_dx = kShoulderOffset * C;
  const double arm_len = 0.25 * R;
  const double arm_radius = 0.04 * R;  // at the hand; arms taper toward the shoulder
  const double hand_radius = 0.05 * R;
  const double cx = 0.5 * C;

  struct Arm {
    Capsule cap;
    double hand_x, hand_y;
    double depth;
    double length;
  };
  auto make_arm = [&](double angle, double reach, double side) {
    const double a = deg2rad(angle);
    const double sx = cx + side * shoulder_dx;
    const double len = arm_len * reach;
    const double hx = sx + side * std::sin(a) * len, hy = shoulder_y + std::cos(a) * len;
    return Arm{{sx, shoulder_y, hx, hy, arm_radius}, hx, hy, kArmDepth - 30.0 * (1.0 - reach), std::max(len, 1.0)};
  };
  const Arm arms[2] = {make_arm(p.left_angle, p.left_reach, -1.0),
                       make_arm(p.right_angle, p.right_reach, 1.0)};

  const StaticScene& scene = static_scene(rows, cols);
  std::vector<double> d = scene.depth, g = scene.color;

  for (const Arm& arm : arms) {
    const double pad = std::max(arm_radius, hand_radius) + 1.0;
    const int r0 = std::max(0, static_cast<int>(std::floor(std::min(arm.cap.y0, arm.cap.y1) - pad)));
    const int r1 = std::min(rows - 1, static_cast<int>(std::ceil(std::max(arm.cap.y0, arm.cap.y1) + pad)));
    const int c0 = std::max(0, static_cast<int>(std::floor(std::min(arm.cap.x0, arm.cap.x1) - pad)));
    const int c1 = std::min(cols - 1, static_cast<int>(std::ceil(std::max(arm.cap.x0, arm.cap.x1) + pad)));
    for (int r = r0; r <= r1; ++r) {
      for (int c = c0; c <= c1; ++c) {
        const double x = c + 0.5, y = r + 0.5;
        const std::size_t i = static_cast<std::size_t>(r * cols + c);
        double along = 0.0;
        const double dist = capsule_distance(arm.cap, x, y, &along);
        const double hx = x - arm.hand_x, hy = y - arm.hand_y;
        const bool hand = hx * hx + hy * hy <= hand_radius * hand_radius;
        const double hand_depth = kHandDepth - (kArmDepth - arm.depth);
        if (hand && hand_depth < d[i]) {
          d[i] = hand_depth;
          g[i] = 225.0 - 25.0 * std::sqrt(hx * hx + hy * hy) / hand_radius;
        } else if (dist <= arm.cap.radius * std::max(0.15, along / arm.length) && arm.depth < d[i]) {
          d[i] = arm.depth;
          g[i] = 195.0 + 35.0 * std::sin(along / 2.5) - 20.0 * dist / arm.cap.radius;
        }
      }
    }
  }
  for (std::size_t i = 0; i < d.size(); ++i) {
    depth.pixels()[i] = clamp_u8(d[i]);
    color.pixels()[i] = clamp_u8(g[i]);
  }
  return {std::move(depth), std::move(color)};
}

std::vector<GestureTemplate> make_templates(int k, std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  auto base = base_templates();
  std::vector<std::size_t> order(base.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);

  std::uniform_real_distribution<double> jitter(-8.0, 8.0);
  std::vector<GestureTemplate> out;
  for (int i = 0; i < k; ++i) {
    GestureTemplate g;
    if (static_cast<std::size_t>(i) < base.size()) {
      g = base[order[static_cast<std::size_t>(i)]];
    } else {
      // beyond the designed vocabulary: random two-key gestures
      std::uniform_real_distribution<double> angle(-50.0, 170.0);
      std::uniform_real_distribution<double> reach(0.5, 1.0);
      std::uniform_int_distribution<int> dur(6, 10);
      const double t1 = dur(rng), t2 = t1 + dur(rng);
      g = from_keys({{t1, pose(angle(rng), angle(rng), reach(rng), reach(rng))},
                     {t2, pose(angle(rng), angle(rng))},
                     {t2 + dur(rng), rest_pose()}});
    }
    for (std::size_t key = 1; key + 1 < g.keys.size(); ++key) {
      g.keys[key].pose.left_angle += jitter(rng);
      g.keys[key].pose.right_angle += jitter(rng);
    }
    out.push_back(std::move(g));
  }
  return out;
}

std::vector<double> performance_times(const GestureTemplate& g, double speed) {
  std::vector<double> times;
  const double end = g.duration();
  for (int j = 0;; ++j) {
    const double t = j * speed;
    if (t > end + 1e-9) break;
    times.push_back(std::min(t, end));
  }
  if (end - times.back() > 1e-9) times.push_back(end);
  return times;
}

SynthBatch generate_batch(const SynthConfig& cfg) {
  cfg.validate();
  std::mt19937_64 rng(cfg.seed);
  const auto templates = make_templates(cfg.k, cfg.seed);
  const auto rest = render_pose(rest_pose(), cfg.rows, cfg.cols);

  auto append = [](Recording& rec, const RenderedFrame& f) {
    rec.depth.frames.push_back(f.depth);
    rec.color.frames.push_back(f.color);
  };
  auto new_recording = [] {
    Recording rec;
    rec.depth.modality = Modality::Depth;
    rec.color.modality = Modality::Gray;
    return rec;
  };
  auto perform = [&](Recording& rec, const GestureTemplate& g, double speed) {
    for (double t : performance_times(g, speed)) append(rec, render_pose(g.at(t), cfg.rows, cfg.cols));
  };
  auto hold_rest = [&](Recording& rec, int frames) {
    for (int i = 0; i < frames; ++i) append(rec, rest);
  };
  // idle pose plus a short transition to or from rest
  const Pose idle = pose(55.0, -25.0);
  const GestureTemplate to_rest{{{0.0, idle}, {6.0, rest_pose()}}};
  auto hold_idle = [&](Recording& rec, int frames) {
    const auto f = render_pose(idle, cfg.rows, cfg.cols);
    for (int i = 0; i < frames; ++i) append(rec, f);
  };

  SynthBatch out;
  out.batch.vocabulary_size = cfg.k;
  for (int label = 1; label <= cfg.k; ++label) {
    Recording rec = new_recording();
    hold_rest(rec, 3);
    perform(rec, templates[static_cast<std::size_t>(label - 1)], 1.0);
    hold_rest(rec, 3);
    out.batch.training.emplace(label, std::move(rec));
  }

  std::uniform_int_distribution<int> count(cfg.min_gestures, cfg.max_gestures);
  std::uniform_int_distribution<int> pick(1, cfg.k);
  std::uniform_real_distribution<double> log_speed(std::log(cfg.speed_min), std::log(cfg.speed_max));
  std::bernoulli_distribution dropout(cfg.noise_rate);
  // separate stream so the noise rate does not change the gesture sequences
  std::mt19937_64 noise_rng(cfg.seed ^ 0x6a09e667f3bcc909ULL);
  const int width = cfg.test_count >= 100 ? 3 : 2;

  for (int v = 1; v <= cfg.test_count; ++v) {
    char id[16];
    std::snprintf(id, sizeof(id), "v%0*d", width, v);
    Recording rec = new_recording();
    LabelSequence labels;

    if (cfg.idle_prefix > 0) {
      hold_idle(rec, cfg.idle_prefix);
      for (double t : performance_times(to_rest, 1.0)) append(rec, render_pose(to_rest.at(t), cfg.rows, cfg.cols));
    }
    hold_rest(rec, cfg.rest_length);
    const int n = count(rng);
    for (int i = 0; i < n; ++i) {
      const Label label = pick(rng);
      const double speed = std::exp(log_speed(rng));
      perform(rec, templates[static_cast<std::size_t>(label - 1)], speed);
      hold_rest(rec, cfg.rest_length);
      labels.push_back(label);
    }
    if (cfg.idle_suffix > 0) {
      auto times = performance_times(to_rest, 1.0);
      for (auto it = times.rbegin(); it != times.rend(); ++it) append(rec, render_pose(to_rest.at(*it), cfg.rows, cfg.cols));
      hold_idle(rec, cfg.idle_suffix);
    }

    if (cfg.noise_rate > 0.0) {
      for (auto& f : rec.depth.frames)
        for (auto& px : f.pixels())
          if (dropout(noise_rng)) px = 0;
    }
    out.truth.emplace(id, std::move(labels));
    out.batch.test.emplace(id, std::move(rec));
  }
  return out;
}

}  // namespace gesture
