// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fails. Tolerances below are fixed; do not loosen them to
// make a run green.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "gesture/descriptors.hpp"
#include "gesture/eval.hpp"
#include "gesture/pipeline.hpp"
#include "gesture/preprocess.hpp"
#include "gesture/qchi.hpp"
#include "gesture/recognizer.hpp"
#include "gesture/synth.hpp"
#include "oracles.hpp"

using namespace gesture;

namespace {

constexpr double kLevenshteinSeconds = 5.0;
constexpr double kTrimSeconds = 1.0;
constexpr double kMotionTol = 1e-12;
constexpr double kHogTol = 1e-9;
constexpr double kFlowTolUnit = 0.25;
constexpr double kFlowTolDouble = 0.5;
constexpr double kHofSumTol = 1e-9;
constexpr double kSimilarityTol = 1e-12;
constexpr double kKernelTol = 1e-9;
constexpr double kQcOracleTol = 1e-9;
constexpr double kQcEuclidTol = 1e-12;
constexpr double kQcScaleTol = 1e-9;
constexpr double kSmCleanMax = 0.0;
constexpr double kSmNoisyMax = 10.0;
constexpr double kMmMax = 5.0;
constexpr double kEndToEndSeconds = 180.0;
constexpr double kScaleLow = 1.6;
constexpr double kScaleHigh = 2.6;

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

using Clock = std::chrono::steady_clock;
double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

Frame random_frame(std::mt19937& rng, int rows, int cols) {
  std::uniform_int_distribution<int> v(0, 255);
  Frame f(rows, cols);
  for (auto& p : f.pixels()) p = static_cast<std::uint8_t>(v(rng));
  return f;
}

// Smooth band-limited texture shifted by (dx, dy).
Frame texture(int rows, int cols, double dx, double dy) {
  Frame f(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      const double x = c - dx, y = r - dy;
      const double v = 128 + 50 * std::sin(x / 6.0 + 0.3) * std::cos(y / 7.0) + 35 * std::sin((x + 2 * y) / 11.0) +
                       25 * std::cos((2 * x - y) / 9.0);
      f(r, c) = static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
    }
  return f;
}

Outcome c1_levenshtein() {
  Outcome o;
  // only the implementation is timed; the enumeration oracle is slow by design
  double s = 0.0;
  auto timed = [&](const LabelSequence& a, const LabelSequence& b) {
    const auto t0 = Clock::now();
    const auto d = levenshtein(a, b);
    s += since(t0);
    return d;
  };
  if (levenshtein({1, 2}, {1}) != 1 || levenshtein({1, 2, 3}, {2, 4}) != 2 || levenshtein({1, 2, 3}, {3, 2}) != 2) {
    o.fail("worked examples differ");
  }
  std::mt19937 rng(101);
  std::uniform_int_distribution<int> len(0, 5), sym(1, 4);
  auto draw = [&] {
    LabelSequence s(static_cast<std::size_t>(len(rng)));
    for (auto& x : s) x = sym(rng);
    return s;
  };
  for (int i = 0; i < 1000; ++i) {
    const auto a = draw(), b = draw(), c = draw();
    const auto ab = timed(a, b);
    if (ab != oracle::edit_distance(a, b)) o.fail("disagrees with edit enumeration");
    if (ab != timed(b, a)) o.fail("not symmetric");
    if ((ab == 0) != (a == b)) o.fail("identity fails");
    if (timed(a, c) > ab + timed(b, c)) o.fail("triangle inequality fails");
  }
  if (s >= kLevenshteinSeconds) o.fail(fmt("took %.2f s", s));
  if (o.pass) o.detail = fmt("1000 pairs, %.4f s", s);
  return o;
}

Outcome c2_trimming() {
  Outcome o;
  const auto t0 = Clock::now();
  TrimConfig cfg;
  auto kept = [&](std::vector<double> m) {
    const auto n = m.size();
    return trim_indices(MotionCurve{std::move(m)}, n, cfg);
  };
  auto profile = [](std::initializer_list<std::pair<int, double>> runs) {
    std::vector<double> m;
    for (auto [n, v] : runs) m.insert(m.end(), static_cast<std::size_t>(n), v);
    return m;
  };
  auto range = [](int a, int b) {
    std::vector<int> r;
    for (int i = a; i < b; ++i) r.push_back(i);
    return r;
  };
  // interior run occupying indices 6..18 (run-local 1..13)
  {
    const auto k = kept(profile({{6, 0.8}, {13, 0.02}, {6, 0.8}}));
    std::vector<int> local;
    for (int i : k)
      if (i >= 6 && i < 19) local.push_back(i - 6 + 1);
    if (local != std::vector<int>{1, 4, 7, 10, 13}) o.fail("interior run keeps the wrong frames");
  }
  // low prefix of 7 removed, short suffix of 4 kept
  {
    const auto expect = range(7, 21);
    if (kept(profile({{7, 0.0}, {10, 0.5}, {4, 0.05}})) != expect) o.fail("prefix/suffix profile 1");
  }
  // low prefix of 4 kept, low suffix of 5 removed
  {
    const auto expect = range(0, 12);
    if (kept(profile({{4, 0.05}, {8, 0.9}, {5, 0.0}})) != expect) o.fail("prefix/suffix profile 2");
  }
  // both ends exactly min_trim long and removed; a run of exactly min_trim inside stays whole
  {
    const auto expect = range(5, 20);
    if (kept(profile({{5, 0.0}, {5, 1.0}, {5, 0.0}, {5, 1.0}, {5, 0.0}})) != expect) o.fail("prefix/suffix profile 3");
  }
  const double s = since(t0);
  if (s >= kTrimSeconds) o.fail(fmt("took %.3f s", s));
  if (o.pass) o.detail = "run-local {1,4,7,10,13}; 3 end profiles";
  return o;
}

Outcome c3_motion_average() {
  Outcome o;
  std::vector<double> mot(15);
  for (std::size_t i = 0; i < mot.size(); ++i) mot[i] = std::sqrt(2.0 + static_cast<double>(i)) / std::numbers::pi;
  const auto motion = average_motion(mot, 3);
  // 1-based motion(2) and motion(12)
  const double m2 = (mot[0] + mot[1]) / 2;
  const double m12 = (mot[8] + mot[9] + mot[10] + mot[11]) / 4;
  const double e2 = std::abs(motion[1] - m2), e12 = std::abs(motion[11] - m12);
  if (e2 > kMotionTol || e12 > kMotionTol) o.fail(fmt("errors %.3g and %.3g", e2, e12));
  if (o.pass) o.detail = fmt("max error %.2g", std::max(e2, e12));
  return o;
}

Outcome c4_median() {
  Outcome o;
  std::mt19937 rng(104);
  for (int i = 0; i < 100; ++i) {
    Frame f = random_frame(rng, 16, 16);
    if (median_filter(f, 1) != oracle::median(f, 1)) o.fail("frame " + std::to_string(i) + " differs");
  }
  if (o.pass) o.detail = "100 frames identical";
  return o;
}

Outcome c5_hog() {
  Outcome o;
  std::mt19937 rng(105);
  if (hog(random_frame(rng, 240, 320)).size() != 384) o.fail("240x320 length is not 384");
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    // half noise, half structured frames
    Frame f = i % 2 ? random_frame(rng, 240, 320) : texture(240, 320, i, -i);
    const auto d = hog(f);
    const auto ref = oracle::hog(f);
    if (ref.size() != d.size()) {
      o.fail("length mismatch");
      break;
    }
    for (std::size_t j = 0; j < ref.size(); ++j) worst = std::max(worst, std::abs(d.values()[j] - ref[j]));
  }
  if (worst > kHogTol) o.fail(fmt("max bin error %.3g", worst));
  const Descriptor flat = hog(Frame(240, 320, 123));
  for (double v : flat.values())
    if (v != 0.0) o.fail("constant frame gives a nonzero descriptor");
  if (o.pass) o.detail = fmt("max bin error %.2g", worst);
  return o;
}

Outcome c6_flow() {
  Outcome o;
  const Frame base = texture(120, 160, 0, 0);
  const int margin = 16;
  std::string summary;
  for (int mag : {1, 2}) {
    for (auto [sx, sy] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}}) {
      const double dx = sx * mag, dy = sy * mag;
      const auto flow = lucas_kanade(base, texture(120, 160, dx, dy));
      double err = 0.0;
      int n = 0;
      for (int r = margin; r < 120 - margin; ++r)
        for (int c = margin; c < 160 - margin; ++c) {
          const auto i = static_cast<std::size_t>(r * 160 + c);
          err += std::hypot(flow.u[i] - dx, flow.v[i] - dy);
          ++n;
        }
      err /= n;
      const double tol = mag == 1 ? kFlowTolUnit : kFlowTolDouble;
      if (err >= tol) o.fail(fmt("shift (%g,%g) mean error %.3f", dx, dy, err));
      summary += fmt("%.3f ", err);
    }
  }
  if (o.pass) o.detail = "mean errors " + summary;
  return o;
}

Outcome c7_hof() {
  Outcome o;
  const Frame a = texture(240, 320, 0, 0), b = texture(240, 320, 1, 0);
  const auto d = hof(lucas_kanade(a, b));
  if (d.size() != 768) o.fail("length " + std::to_string(d.size()));
  if (std::abs(d.sum() - 1.0) > kHofSumTol) o.fail(fmt("sum %.12f", d.sum()));
  const auto z = hof(lucas_kanade(a, a));
  for (double v : z.values())
    if (v != 0.0) o.fail("identical frames give nonzero HOF");
  if (o.pass) o.detail = fmt("sum-1 = %.2g", d.sum() - 1.0);
  return o;
}

Outcome c8_similarity() {
  Outcome o;
  const auto a = build_similarity_matrix(4, 6, 16);
  const auto dense = oracle::kronecker_similarity(4, 6, 16, 0.56, true);
  std::size_t max_nnz = 0;
  double worst = 0.0;
  for (int i = 0; i < a.dimension(); ++i) {
    max_nnz = std::max(max_nnz, a.row(i).size());
    const double diag = a.at(i, i);
    for (const auto& e : a.row(i)) {
      if (e.weight < 0.0) o.fail("negative entry");
      if (a.at(e.col, i) != e.weight) o.fail("not symmetric");
      if (e.weight > diag) o.fail("row not diagonal-maximal");
    }
    for (int j = 0; j < a.dimension(); ++j) worst = std::max(worst, std::abs(a.at(i, j) - dense[i][j]));
  }
  if (max_nnz > 27) o.fail("row with " + std::to_string(max_nnz) + " nonzeros");
  if (worst > kSimilarityTol) o.fail(fmt("entry error %.3g", worst));
  const auto g = gaussian_kernel3(0.56);
  const double s2 = 2 * 0.56 * 0.56, total = 1 + 4 * std::exp(-1 / s2) + 4 * std::exp(-2 / s2);
  if (std::abs(g.center - 1 / total) > kKernelTol || std::abs(g.edge - std::exp(-1 / s2) / total) > kKernelTol ||
      std::abs(g.corner - std::exp(-2 / s2) / total) > kKernelTol) {
    o.fail("kernel weights differ from the formula");
  }
  if (o.pass) o.detail = fmt("max nnz/row %.0f, entry error %.2g", static_cast<double>(max_nnz), worst);
  return o;
}

Outcome c9_qc() {
  Outcome o;
  std::mt19937 rng(109);
  std::uniform_real_distribution<double> u(0, 1);
  const auto a = build_similarity_matrix(4, 6, 16);
  const auto dense = oracle::kronecker_similarity(4, 6, 16, 0.56, true);
  double worst = 0, worst_self = 0, worst_scale = 0;
  for (int i = 0; i < 100; ++i) {
    std::vector<double> p(384), q(384);
    for (auto& x : p) x = u(rng) < 0.4 ? 0.0 : u(rng);
    for (auto& x : q) x = u(rng) < 0.4 ? 0.0 : u(rng);
    const double d = qc_distance(p, q, a);
    worst = std::max(worst, std::abs(d - oracle::qc(p, q, dense, 0.5)));
    worst_self = std::max(worst_self, qc_distance(p, p, a));
    const double alpha = 0.1 + 9.9 * u(rng);
    std::vector<double> ap(p), aq(q);
    for (auto& x : ap) x *= alpha;
    for (auto& x : aq) x *= alpha;
    worst_scale = std::max(worst_scale, std::abs(qc_distance(ap, aq, a) - std::sqrt(alpha) * d));
  }
  if (worst > kQcOracleTol) o.fail(fmt("oracle error %.3g", worst));
  if (worst_self != 0.0) o.fail(fmt("QC(P,P) = %.3g", worst_self));
  if (worst_scale > kQcScaleTol) o.fail(fmt("scaling error %.3g", worst_scale));

  const auto id = BinSimilarityMatrix::identity(384);
  double worst_euclid = 0;
  for (int i = 0; i < 20; ++i) {
    std::vector<double> p(384), q(384);
    for (auto& x : p) x = u(rng);
    for (auto& x : q) x = u(rng);
    double ss = 0;
    for (std::size_t j = 0; j < p.size(); ++j) ss += (p[j] - q[j]) * (p[j] - q[j]);
    worst_euclid = std::max(worst_euclid, std::abs(qc_distance(p, q, id, {0.0}) - std::sqrt(ss)));
  }
  if (worst_euclid > kQcEuclidTol) o.fail(fmt("euclidean reduction error %.3g", worst_euclid));
  if (o.pass) o.detail = fmt("oracle %.2g, scaling %.2g, euclid %.2g", worst, worst_scale, worst_euclid);
  return o;
}

Outcome c10_viterbi() {
  Outcome o;
  std::mt19937 rng(110);
  std::uniform_int_distribution<int> row_count(1, 3), row_len(1, 4), cols(1, 6), coin(0, 1), small(0, 2);
  std::uniform_real_distribution<double> u(0, 1);
  int instances = 0, infeasible = 0;
  while (instances < 200) {
    const bool with_rest = coin(rng) == 1;
    std::map<Label, std::vector<FrameRepr>> rows;
    int nodes = with_rest ? 1 : 0;
    const int nrows = row_count(rng);
    for (int g = 1; g <= nrows; ++g) {
      const int len = std::min(row_len(rng), 8 - nodes - (nrows - g));
      if (len < 1) break;
      rows[g].assign(static_cast<std::size_t>(len), FrameRepr{Descriptor(1, 1, 1), std::nullopt});
      nodes += len;
    }
    if (rows.empty()) continue;
    const GestureModel m(rows, with_rest ? std::optional(FrameRepr{Descriptor(1, 1, 1), std::nullopt}) : std::nullopt);
    CostMatrix costs(m.size(), static_cast<std::size_t>(cols(rng)));
    const bool ties = instances % 2 == 0;
    for (std::size_t n = 0; n < costs.nodes(); ++n)
      for (std::size_t t = 0; t < costs.columns(); ++t) costs(n, t) = ties ? small(rng) : u(rng);
    const auto start = m.entry_nodes(), end = m.exit_nodes();
    const auto brute = oracle::viterbi(m, costs, start, end);
    ++instances;
    if (!brute) {
      ++infeasible;
      bool threw = false;
      try {
        (void)viterbi(m, costs, start, end);
      } catch (const std::exception&) {
        threw = true;
      }
      if (!threw) o.fail("infeasible instance did not throw");
      continue;
    }
    const auto path = viterbi(m, costs, start, end);
    if (path.cost != brute->cost) o.fail("cost differs on instance " + std::to_string(instances));
    if (path.states != brute->states) o.fail("path differs on instance " + std::to_string(instances));
  }
  if (o.pass) o.detail = "200 instances (" + std::to_string(infeasible) + " infeasible)";
  return o;
}

SynthConfig e2e_config(std::uint64_t seed, double noise) {
  SynthConfig cfg;
  cfg.seed = seed;
  cfg.k = 5;
  cfg.test_count = 10;
  cfg.noise_rate = noise;
  cfg.speed_min = 0.5;
  cfg.speed_max = 2.0;
  return cfg;
}

Outcome c11_sm() {
  Outcome o;
  const auto t0 = Clock::now();
  double worst_clean = 0, worst_noisy = 0;
  RunConfig run;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto clean = generate_batch(e2e_config(seed, 0.02));
    worst_clean = std::max(worst_clean, batch_score(predict_batch(clean.batch, run), clean.truth).score);
    const auto noisy = generate_batch(e2e_config(seed, 0.08));
    worst_noisy = std::max(worst_noisy, batch_score(predict_batch(noisy.batch, run), noisy.truth).score);
  }
  const double s = since(t0);
  if (worst_clean > kSmCleanMax) o.fail(fmt("worst batch at noise 0.02 scored %.2f", worst_clean));
  if (worst_noisy > kSmNoisyMax) o.fail(fmt("worst batch at noise 0.08 scored %.2f", worst_noisy));
  if (s >= kEndToEndSeconds) o.fail(fmt("took %.1f s", s));
  if (o.pass) o.detail = fmt("worst %.2f / %.2f, %.1f s", worst_clean, worst_noisy, s);
  return o;
}

Outcome c12_mm() {
  Outcome o;
  const auto t0 = Clock::now();
  double worst = 0;
  RunConfig run;
  run.method = Method::MM;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto b = generate_batch(e2e_config(seed, 0.02));
    worst = std::max(worst, batch_score(predict_batch(b.batch, run), b.truth).score);
  }
  const double s = since(t0);
  if (worst > kMmMax) o.fail(fmt("worst batch scored %.2f", worst));
  if (s >= kEndToEndSeconds) o.fail(fmt("took %.1f s", s));
  if (o.pass) o.detail = fmt("worst %.2f, %.1f s", worst, s);
  return o;
}

Outcome c13_ablation() {
  Outcome o;
  std::size_t with = 0, without = 0, gestures = 0;
  RunConfig trimmed, untrimmed;
  untrimmed.trim = false;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto cfg = e2e_config(seed + 100, 0.02);
    cfg.idle_prefix = 25;
    cfg.idle_suffix = 25;
    const auto b = generate_batch(cfg);
    const auto a = batch_score(predict_batch(b.batch, trimmed), b.truth);
    const auto u = batch_score(predict_batch(b.batch, untrimmed), b.truth);
    with += a.total_distance;
    without += u.total_distance;
    gestures += a.total_gestures;
  }
  const double sw = 100.0 * static_cast<double>(with) / static_cast<double>(gestures);
  const double sn = 100.0 * static_cast<double>(without) / static_cast<double>(gestures);
  if (sw > sn) o.fail(fmt("trimmed %.2f > untrimmed %.2f", sw, sn));
  if (o.pass) o.detail = fmt("trimmed %.2f <= untrimmed %.2f", sw, sn);
  return o;
}

Outcome c14_scaling() {
  Outcome o;
  BenchOptions opt;
  const std::vector<double> scales{1.0, 2.0};
  const auto points = run_bench(scales, opt);
  double f1 = 0, f2 = 0, n1 = 0, n2 = 0;
  for (const auto& p : points) {
    double& slot = p.axis == "F" ? (p.scale == 1.0 ? f1 : f2) : (p.scale == 1.0 ? n1 : n2);
    slot = p.eval_seconds;
  }
  const double rf = f2 / f1, rn = n2 / n1;
  if (!(rf >= kScaleLow && rf <= kScaleHigh)) o.fail(fmt("doubling F gave ratio %.2f", rf));
  if (!(rn >= kScaleLow && rn <= kScaleHigh)) o.fail(fmt("doubling N gave ratio %.2f", rn));
  if (o.pass) o.detail = fmt("F ratio %.2f, N ratio %.2f", rf, rn);
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"levenshtein fixture and metric properties", c1_levenshtein},
      {"trimming fixture", c2_trimming},
      {"motion averaging fixture", c3_motion_average},
      {"median filter vs oracle", c4_median},
      {"HOG length and oracle", c5_hog},
      {"optical flow translations", c6_flow},
      {"HOF length and normalization", c7_hof},
      {"similarity matrix", c8_similarity},
      {"QC distance", c9_qc},
      {"Viterbi vs enumeration", c10_viterbi},
      {"end-to-end SM", c11_sm},
      {"end-to-end MM", c12_mm},
      {"trimming ablation", c13_ablation},
      {"linear scaling", c14_scaling},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("threw: ") + e.what();
    }
    if (!o.pass) ++failures;
    std::printf("[%s] %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
