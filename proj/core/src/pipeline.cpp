#include "gesture/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <chrono>
#include <exception>
#include <fstream>
#include <mutex>
#include <thread>

#include "gesture/dump.hpp"
#include "gesture/error.hpp"
#include "gesture/synth.hpp"

namespace gesture {

void RunConfig::validate() const {
  trim_config.validate();
  flow.validate();
  QcParams{qc_m}.validate();
  if (window_l < 1) throw ArgumentError("window length must be >= 1");
  if (jobs < 1) throw ArgumentError("jobs must be >= 1");
  if (sm.min_run < 1) throw ArgumentError("min_run must be >= 1");
}

PreparedVideo prepare_recording(const Recording& rec, const RunConfig& cfg, bool with_hof) {
  if (rec.depth.size() != rec.color.size()) {
    throw IntegrityError("depth and color frame counts differ");
  }
  Video depth = remove_background(rec.depth);
  if (cfg.medfilt) depth = median_filter(depth, cfg.trim_config.median_radius);

  PreparedVideo out;
  const std::size_t n = depth.size();
  if (cfg.trim && n > static_cast<std::size_t>(cfg.trim_config.gap)) {
    out.motion = motion_curve(depth, cfg.trim_config);
    out.kept = trim_indices(*out.motion, n, cfg.trim_config);
  }
  if (out.kept.size() < 2) {
    out.kept.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.kept[i] = static_cast<int>(i);
  }
  out.reprs = represent_video(select_frames(depth, out.kept), select_frames(rec.color, out.kept),
                              with_hof, cfg.flow);
  return out;
}

TrainedRecognizer TrainedRecognizer::train(const Batch& batch, const RunConfig& cfg) {
  cfg.validate();
  if (batch.training.empty()) throw ArgumentError("batch has no training recordings");
  TrainedRecognizer r;
  r.cfg_ = cfg;
  const Video& first = batch.training.begin()->second.depth;
  r.ctx_ = MatchContext::for_frame_size(first.rows(), first.cols(), QcParams{cfg.qc_m}, cfg.coupling);

  const bool with_hof = cfg.method == Method::SM;
  std::map<Label, std::vector<FrameRepr>> reprs;
  for (const auto& [label, rec] : batch.training) {
    if (rec.depth.rows() != first.rows() || rec.depth.cols() != first.cols()) {
      throw IntegrityError("training recordings differ in frame size");
    }
    auto prepared = prepare_recording(rec, cfg, with_hof);
    r.training_frames_ += prepared.reprs.size();
    reprs.emplace(label, std::move(prepared.reprs));
  }
  r.rest_ = mean_first_repr(reprs);
  if (cfg.method == Method::SM) {
    r.sm_model_ = GestureModel(reprs, r.rest_);
  } else {
    r.mm_models_ = build_mm_models(reprs);
  }
  return r;
}

LabelSequence TrainedRecognizer::recognize(const Recording& rec, const std::string& id) const {
  const bool with_hof = cfg_.method == Method::SM;
  const auto prepared = prepare_recording(rec, cfg_, with_hof);
  const bool dump = cfg_.dump_dir.has_value() && !id.empty();
  if (dump && prepared.motion) write_motion_csv(*prepared.motion, *cfg_.dump_dir / (id + "_motion.csv"));

  if (cfg_.method == Method::SM) {
    auto result = sm_analyze(sm_model_, prepared.reprs, ctx_, cfg_.sm);
    if (dump) {
      write_cost_matrix_csv(result.costs, *cfg_.dump_dir / (id + "_costs.csv"));
      write_path_csv(sm_model_, result.path, *cfg_.dump_dir / (id + "_path.csv"));
    }
    return result.labels;
  }
  auto result = mm_analyze(mm_models_, rest_, prepared.reprs, cfg_.window_l, ctx_, cfg_.segments);
  if (dump) write_score_matrix_csv(result.scores, *cfg_.dump_dir / (id + "_scores.csv"));
  return result.labels;
}

PredictionMap predict_batch(const Batch& batch, const RunConfig& cfg) {
  const auto recognizer = TrainedRecognizer::train(batch, cfg);
  if (cfg.dump_dir) {
    write_similarity_csv(recognizer.context().hog, *cfg.dump_dir / "similarity_hog.csv");
    write_similarity_csv(recognizer.context().hof, *cfg.dump_dir / "similarity_hof.csv");
  }

  std::vector<const std::pair<const std::string, Recording>*> work;
  for (const auto& entry : batch.test) work.push_back(&entry);
  std::vector<LabelSequence> results(work.size());

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= work.size()) return;
      try {
        results[i] = recognizer.recognize(work[i]->second, work[i]->first);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = work.size();
      }
    }
  };
  const int threads = std::min<int>(cfg.jobs, static_cast<int>(std::max<std::size_t>(1, work.size())));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  PredictionMap out;
  for (std::size_t i = 0; i < work.size(); ++i) out.emplace(work[i]->first, std::move(results[i]));
  return out;
}

namespace {

using Clock = std::chrono::steady_clock;

template <typename F>
double fastest(int repeats, F&& f) {
  double best = 1e300;
  for (int i = 0; i < std::max(1, repeats); ++i) {
    const auto t0 = Clock::now();
    f();
    best = std::min(best, std::chrono::duration<double>(Clock::now() - t0).count());
  }
  return best;
}

// Cycles through the frames of `rec` until `frames` frames are collected.
Recording tile(const Recording& rec, std::size_t frames) {
  Recording out;
  out.depth.modality = Modality::Depth;
  out.color.modality = Modality::Gray;
  for (std::size_t i = 0; i < frames; ++i) {
    out.depth.frames.push_back(rec.depth.frames[i % rec.depth.size()]);
    out.color.frames.push_back(rec.color.frames[i % rec.color.size()]);
  }
  return out;
}

}  // namespace

std::vector<BenchPoint> run_bench(std::span<const double> scales, const BenchOptions& options) {
  std::vector<BenchPoint> points;
  if (scales.empty()) return points;

  SynthConfig synth;
  synth.seed = options.seed;
  synth.rows = options.rows;
  synth.cols = options.cols;
  synth.k = options.base_vocabulary;
  synth.test_count = 1;
  synth.min_gestures = synth.max_gestures = 5;
  const SynthBatch base = generate_batch(synth);
  const Recording base_test = tile(base.batch.test.begin()->second,
                                   static_cast<std::size_t>(options.base_test_frames));

  RunConfig run = options.run;
  run.dump_dir.reset();
  run.jobs = 1;

  struct Pending {
    TrainedRecognizer recognizer;
    Recording test;
  };
  std::vector<Pending> pending;
  auto add = [&](const std::string& axis, double scale, const Batch& batch, Recording test) {
    BenchPoint p;
    p.axis = axis;
    p.scale = scale;
    p.test_frames = test.depth.size();
    Pending job{{}, std::move(test)};
    p.train_seconds = fastest(1, [&] { job.recognizer = TrainedRecognizer::train(batch, run); });
    p.training_frames = job.recognizer.training_frames();
    p.eval_seconds = 1e300;
    points.push_back(p);
    pending.push_back(std::move(job));
  };

  for (double s : scales) {
    if (!(s > 0.0)) throw ArgumentError("bench scales must be positive");
    const auto frames = static_cast<std::size_t>(std::lround(s * options.base_test_frames));
    add("F", s, base.batch, tile(base_test, std::max<std::size_t>(frames, 2)));
  }
  for (double s : scales) {
    // relabelled copies of the base vocabulary
    Batch scaled;
    const int k = std::max(1, static_cast<int>(std::lround(s * options.base_vocabulary)));
    scaled.vocabulary_size = k;
    for (int label = 1; label <= k; ++label) {
      const Label source = (label - 1) % options.base_vocabulary + 1;
      scaled.training.emplace(label, base.batch.training.at(source));
    }
    add("N", s, scaled, base_test);
  }

  // round-robin over points so slow drift in machine speed hits all of them alike
  for (int r = 0; r < std::max(1, options.repeats); ++r) {
    for (std::size_t i = 0; i < points.size(); ++i) {
      const double t = fastest(1, [&] { (void)pending[i].recognizer.recognize(pending[i].test); });
      points[i].eval_seconds = std::min(points[i].eval_seconds, t);
    }
  }
  return points;
}

void write_bench_csv(std::span<const BenchPoint> points, std::ostream& out) {
  out << "axis,scale,training_frames,test_frames,train_seconds,eval_seconds\n";
  for (const auto& p : points) {
    out << p.axis << ',' << p.scale << ',' << p.training_frames << ',' << p.test_frames << ','
        << p.train_seconds << ',' << p.eval_seconds << '\n';
  }
}

void write_bench_csv(std::span<const BenchPoint> points, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  write_bench_csv(points, out);
}

}  // namespace gesture
