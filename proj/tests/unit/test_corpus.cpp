#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "gesture/corpus.hpp"
#include "gesture/error.hpp"
#include "gesture/synth.hpp"

using namespace gesture;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("gesture_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream(p) << text;
}

}  // namespace

TEST_CASE("pgm round trip") {
  const auto dir = scratch("pgm");
  Frame f(3, 4);
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 4; ++c) f(r, c) = static_cast<std::uint8_t>(r * 40 + c * 7);
  write_pgm(dir / "a.pgm", f);
  CHECK(read_pgm(dir / "a.pgm") == f);

  write_text(dir / "bad.pgm", "P2\n3 4\n255\n");
  CHECK_THROWS_AS(read_pgm(dir / "bad.pgm"), FormatError);
  CHECK_THROWS_AS(read_pgm(dir / "missing.pgm"), IoError);
}

TEST_CASE("batch round trip") {
  SynthConfig cfg;
  cfg.k = 2;
  cfg.test_count = 2;
  cfg.max_gestures = 2;
  const auto generated = generate_batch(cfg);
  const auto dir = scratch("batch");
  save_batch(dir, generated.batch);
  const Batch loaded = load_batch(dir);
  CHECK(loaded.vocabulary_size == 2);
  CHECK(loaded.training.size() == 2);
  CHECK(loaded.test.size() == 2);
  CHECK(loaded.training.at(1).depth.frames == generated.batch.training.at(1).depth.frames);
  CHECK(loaded.test.at("v02").color.frames == generated.batch.test.at("v02").color.frames);
}

TEST_CASE("manifest errors map to their kinds") {
  const auto dir = scratch("manifest");
  CHECK_THROWS_AS(load_batch(dir), FormatError);
  write_text(dir / "manifest.json", "{ not json");
  CHECK_THROWS_AS(load_batch(dir), FormatError);
  write_text(dir / "manifest.json",
             R"({"vocabulary_size": 1, "train": {"1": {"depth": "d", "color": "c"}}, "test": {}})");
  CHECK_THROWS_AS(load_batch(dir), IoError);

  Video v;
  v.frames = {Frame(2, 2, 1), Frame(2, 2, 2)};
  write_video(dir / "d", v);
  v.frames.pop_back();
  write_video(dir / "c", v);
  CHECK_THROWS_AS(load_batch(dir), IntegrityError);
}

TEST_CASE("prediction csv round trip and validation") {
  const auto dir = scratch("csv");
  PredictionMap p{{"v02", {3, 1}}, {"v01", {}}};
  write_predictions(p, dir / "p.csv");
  CHECK(load_predictions(dir / "p.csv") == p);
  CHECK_THROWS_AS(load_truth(dir / "p.csv"), FormatError);  // empty truth row
  CHECK_THROWS_AS(write_predictions({{"a", {9}}}, dir / "q.csv", 5), ArgumentError);

  write_text(dir / "dup.csv", "video_id,labels\na,1\na,2\n");
  CHECK_THROWS_AS(load_truth(dir / "dup.csv"), FormatError);
  write_text(dir / "junk.csv", "video_id,labels\na,1 x\n");
  CHECK_THROWS_AS(load_truth(dir / "junk.csv"), FormatError);
}
