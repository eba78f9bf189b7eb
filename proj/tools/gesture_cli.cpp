#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gesture/corpus.hpp"
#include "gesture/dump.hpp"
#include "gesture/error.hpp"
#include "gesture/eval.hpp"
#include "gesture/pipeline.hpp"
#include "gesture/synth.hpp"

namespace fs = std::filesystem;
using namespace gesture;

namespace {

struct PipelineFlags {
  std::string method = "sm";
  bool no_trim = false;
  bool no_medfilt = false;
  std::string coupling = "adjacent";
  std::string dump_dir;
};

void add_pipeline_flags(CLI::App& cmd, RunConfig& cfg, PipelineFlags& flags) {
  cmd.add_option("--method", flags.method, "Recognizer: sm (single model) or mm (multiple models)")
      ->check(CLI::IsMember({"sm", "mm"}))
      ->capture_default_str();
  cmd.add_flag("--no-trim", flags.no_trim, "Skip motion-based trimming");
  cmd.add_flag("--no-medfilt", flags.no_medfilt, "Skip the depth median filter");
  cmd.add_option("--qc-m", cfg.qc_m, "Quadratic-Chi normalization exponent m in [0,1)")
      ->capture_default_str();
  cmd.add_option("--window", cfg.window_l, "Sliding-window length l for mm")->capture_default_str();
  cmd.add_option("--jobs", cfg.jobs, "Test videos processed concurrently")->capture_default_str();
  cmd.add_option("--gap", cfg.trim_config.gap, "Frame gap of the motion difference")
      ->capture_default_str();
  cmd.add_option("--max-diff", cfg.trim_config.max_diff, "Per-pixel difference cap")
      ->capture_default_str();
  cmd.add_option("--threshold", cfg.trim_config.threshold, "Low-motion threshold on the scaled curve")
      ->capture_default_str();
  cmd.add_option("--min-trim", cfg.trim_config.min_trim, "Shortest low-motion run that is trimmed")
      ->capture_default_str();
  cmd.add_option("--min-run", cfg.sm.min_run, "Shortest path run decoded as a gesture (sm)")
      ->capture_default_str();
  cmd.add_option("--coupling", flags.coupling,
                 "Orientation coupling of the similarity matrix: adjacent or filtered")
      ->check(CLI::IsMember({"adjacent", "filtered"}))
      ->capture_default_str();
  cmd.add_option("--dump-dir", flags.dump_dir, "Write diagnostic CSVs into this directory");
}

void finish_config(RunConfig& cfg, const PipelineFlags& flags) {
  cfg.method = flags.method == "mm" ? Method::MM : Method::SM;
  cfg.trim = !flags.no_trim;
  cfg.medfilt = !flags.no_medfilt;
  cfg.coupling = flags.coupling == "filtered" ? OrientationCoupling::Filtered2D
                                              : OrientationCoupling::Adjacent;
  if (!flags.dump_dir.empty()) {
    cfg.dump_dir = fs::path(flags.dump_dir);
    std::error_code ec;
    fs::create_directories(*cfg.dump_dir, ec);
    if (ec) throw IoError("cannot create " + flags.dump_dir);
  }
  cfg.validate();
}

std::vector<double> parse_scales(const std::string& text) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ArgumentError("bad size '" + item + "'");
    }
  }
  return out;
}

Recording cleaned(const Recording& rec, const RunConfig& cfg, const std::string& id) {
  Video depth = remove_background(rec.depth);
  if (cfg.medfilt) depth = median_filter(depth, cfg.trim_config.median_radius);
  std::vector<int> kept(depth.size());
  for (std::size_t i = 0; i < kept.size(); ++i) kept[i] = static_cast<int>(i);
  if (cfg.trim && depth.size() > static_cast<std::size_t>(cfg.trim_config.gap)) {
    const auto curve = motion_curve(depth, cfg.trim_config);
    if (cfg.dump_dir) write_motion_csv(curve, *cfg.dump_dir / (id + "_motion.csv"));
    auto trimmed = trim_indices(curve, depth.size(), cfg.trim_config);
    if (trimmed.size() >= 2) kept = std::move(trimmed);
  }
  return {select_frames(depth, kept), select_frames(rec.color, kept)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"One-shot gesture recognition on depth and color video batches"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "gesture 0.1.0");

  RunConfig run;
  PipelineFlags flags;
  std::string batch_dir, out_path, pred_path, truth_path, report_path;

  auto* preprocess = app.add_subcommand("preprocess", "Write the cleaned and trimmed batch");
  preprocess->add_option("batch", batch_dir, "Batch directory")->required();
  preprocess->add_option("out", out_path, "Output batch directory")->required();
  add_pipeline_flags(*preprocess, run, flags);

  auto* train = app.add_subcommand("train", "Build the models of a batch and report their size");
  train->add_option("batch", batch_dir, "Batch directory")->required();
  add_pipeline_flags(*train, run, flags);

  auto* predict = app.add_subcommand("predict", "Recognize every test video of a batch");
  predict->add_option("batch", batch_dir, "Batch directory")->required();
  predict->add_option("out", out_path, "Predictions CSV")->required();
  add_pipeline_flags(*predict, run, flags);

  auto* score = app.add_subcommand("score", "Levenshtein score of predictions against truth");
  score->add_option("predictions", pred_path, "Predictions CSV")->required();
  score->add_option("truth", truth_path, "Truth CSV")->required();
  score->add_option("--report", report_path, "Also write a one-row CSV report here");

  SynthConfig synth;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic batch with its truth.csv");
  synth_cmd->add_option("out", out_path, "Output batch directory")->required();
  synth_cmd->add_option("--seed", synth.seed, "Random seed")->capture_default_str();
  synth_cmd->add_option("--k", synth.k, "Vocabulary size")->capture_default_str();
  synth_cmd->add_option("--rows", synth.rows, "Frame rows (multiple of 40)")->capture_default_str();
  synth_cmd->add_option("--cols", synth.cols, "Frame columns (multiple of 40)")->capture_default_str();
  synth_cmd->add_option("--noise", synth.noise_rate, "Zeroed depth pixel rate in test videos")
      ->capture_default_str();
  synth_cmd->add_option("--speed-min", synth.speed_min, "Slowest gesture speed")->capture_default_str();
  synth_cmd->add_option("--speed-max", synth.speed_max, "Fastest gesture speed")->capture_default_str();
  synth_cmd->add_option("--rest", synth.rest_length, "Resting frames around gestures")
      ->capture_default_str();
  synth_cmd->add_option("--tests", synth.test_count, "Number of test videos")->capture_default_str();
  synth_cmd->add_option("--min-gestures", synth.min_gestures, "Fewest gestures per test video")
      ->capture_default_str();
  synth_cmd->add_option("--max-gestures", synth.max_gestures, "Most gestures per test video")
      ->capture_default_str();
  synth_cmd->add_option("--idle-prefix", synth.idle_prefix, "Idle frames before the first rest")
      ->capture_default_str();
  synth_cmd->add_option("--idle-suffix", synth.idle_suffix, "Idle frames after the last rest")
      ->capture_default_str();

  BenchOptions bench;
  std::string sizes;
  auto* bench_cmd = app.add_subcommand("bench", "Time evaluation against scaled F and N");
  bench_cmd->add_option("--sizes", sizes, "Comma-separated scale factors, e.g. 1,2");
  bench_cmd->add_option("--out", out_path, "Timing CSV (default: stdout)");
  bench_cmd->add_option("--seed", bench.seed, "Random seed")->capture_default_str();
  bench_cmd->add_option("--vocabulary", bench.base_vocabulary, "Training gestures at scale 1")
      ->capture_default_str();
  bench_cmd->add_option("--frames", bench.base_test_frames, "Test frames at scale 1")
      ->capture_default_str();
  bench_cmd->add_option("--repeats", bench.repeats, "Timed repeats; the fastest is kept")
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (preprocess->parsed()) {
      finish_config(run, flags);
      const Batch in = load_batch(batch_dir);
      Batch out;
      out.vocabulary_size = in.vocabulary_size;
      for (const auto& [label, rec] : in.training) {
        out.training.emplace(label, cleaned(rec, run, "train_" + std::to_string(label)));
      }
      for (const auto& [id, rec] : in.test) out.test.emplace(id, cleaned(rec, run, id));
      save_batch(out_path, out);
    } else if (train->parsed()) {
      finish_config(run, flags);
      const auto recognizer = TrainedRecognizer::train(load_batch(batch_dir), run);
      if (run.method == Method::SM) {
        std::printf("nodes=%zu training_frames=%zu\n", recognizer.sm_model().size(),
                    recognizer.training_frames());
      } else {
        std::printf("models=%zu training_frames=%zu\n", recognizer.mm_models().size(),
                    recognizer.training_frames());
      }
      if (run.dump_dir) {
        write_similarity_csv(recognizer.context().hog, *run.dump_dir / "similarity_hog.csv");
        write_similarity_csv(recognizer.context().hof, *run.dump_dir / "similarity_hof.csv");
      }
    } else if (predict->parsed()) {
      finish_config(run, flags);
      const Batch batch = load_batch(batch_dir);
      write_predictions(predict_batch(batch, run), out_path, batch.vocabulary_size);
    } else if (score->parsed()) {
      const auto result = batch_score(load_predictions(pred_path), load_truth(truth_path));
      std::printf("%s\n", format_score(result.score).c_str());
      if (!report_path.empty()) {
        std::ofstream report(report_path);
        if (!report) throw IoError("cannot write " + report_path);
        report << "batch,total_distance,total_gestures,score\n"
               << fs::path(pred_path).stem().string() << ',' << result.total_distance << ','
               << result.total_gestures << ',' << format_score(result.score) << '\n';
      }
    } else if (synth_cmd->parsed()) {
      const auto generated = generate_batch(synth);
      save_batch(out_path, generated.batch);
      write_predictions(generated.truth, fs::path(out_path) / "truth.csv");
    } else if (bench_cmd->parsed()) {
      const auto scales = parse_scales(sizes);
      if (scales.empty()) return 0;
      const auto points = run_bench(scales, bench);
      if (out_path.empty()) {
        write_bench_csv(points, std::cout);
      } else {
        write_bench_csv(points, out_path);
      }
    }
  } catch (const Error& e) {
    std::fprintf(stderr, "gesture: %s\n", e.what());
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "gesture: %s\n", e.what());
    return 1;
  }
  return 0;
}
