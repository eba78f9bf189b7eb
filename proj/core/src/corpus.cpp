#include "gesture/corpus.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "gesture/error.hpp"

namespace gesture {
namespace fs = std::filesystem;

namespace {

std::string frame_name(std::size_t one_based) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "frame_%04zu.pgm", one_based);
  return buf;
}

// Skips whitespace and '#' comments between PGM header tokens.
void skip_pgm_space(std::istream& in) {
  for (;;) {
    int ch = in.peek();
    if (ch == '#') {
      std::string ignored;
      std::getline(in, ignored);
    } else if (ch == ' ' || ch == '\t' || ch == '\n' || ch == '\r') {
      in.get();
    } else {
      return;
    }
  }
}

int read_pgm_int(std::istream& in, const fs::path& path) {
  skip_pgm_space(in);
  int value = 0;
  if (!(in >> value)) throw FormatError(path.string() + ": malformed PGM header");
  return value;
}

Recording load_recording(const fs::path& root, const nlohmann::json& entry,
                         const std::string& name) {
  if (!entry.is_object() || !entry.contains("depth") || !entry.contains("color") ||
      !entry["depth"].is_string() || !entry["color"].is_string()) {
    throw FormatError("manifest entry '" + name + "' needs string fields depth and color");
  }
  std::optional<std::size_t> frames;
  if (entry.contains("frames")) {
    if (!entry["frames"].is_number_unsigned()) {
      throw FormatError("manifest entry '" + name + "': frames must be a non-negative integer");
    }
    frames = entry["frames"].get<std::size_t>();
  }
  Recording rec;
  rec.depth = read_video(root / entry["depth"].get<std::string>(), Modality::Depth, frames);
  rec.color = read_video(root / entry["color"].get<std::string>(), Modality::Gray, frames);
  if (rec.depth.size() != rec.color.size()) {
    throw IntegrityError("recording '" + name + "' has " + std::to_string(rec.depth.size()) +
                         " depth frames but " + std::to_string(rec.color.size()) +
                         " color frames");
  }
  if (!rec.depth.frames.empty() && !rec.depth.frames.front().same_shape(rec.color.frames.front())) {
    throw IntegrityError("recording '" + name + "': depth and color frame sizes differ");
  }
  return rec;
}

nlohmann::json recording_entry(const std::string& stem, const Recording& rec) {
  return {{"depth", stem + "/depth"}, {"color", stem + "/color"}, {"frames", rec.depth.size()}};
}

PredictionMap parse_label_csv(const fs::path& path, bool allow_empty) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  PredictionMap out;
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& why) {
    throw FormatError(path.string() + ":" + std::to_string(line_no) + ": " + why);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1 && line.rfind("video_id,", 0) == 0) continue;
    if (line.empty()) continue;
    auto comma = line.find(',');
    if (comma == std::string::npos) fail("expected 'video_id,labels'");
    std::string id = line.substr(0, comma);
    if (id.empty()) fail("empty video id");
    if (line.find(',', comma + 1) != std::string::npos) fail("too many fields");
    LabelSequence labels;
    std::istringstream fields(line.substr(comma + 1));
    std::string token;
    while (fields >> token) {
      Label value = 0;
      auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
      if (ec != std::errc{} || ptr != token.data() + token.size() || value < 1) {
        fail("invalid label '" + token + "'");
      }
      labels.push_back(value);
    }
    if (labels.empty() && !allow_empty) fail("empty label field for '" + id + "'");
    if (!out.emplace(id, std::move(labels)).second) fail("duplicate video id '" + id + "'");
  }
  return out;
}

}  // namespace

Frame read_pgm(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  char magic[2] = {};
  in.read(magic, 2);
  if (!in || magic[0] != 'P' || magic[1] != '5') {
    throw FormatError(path.string() + ": not a binary PGM (P5)");
  }
  const int cols = read_pgm_int(in, path);
  const int rows = read_pgm_int(in, path);
  const int maxval = read_pgm_int(in, path);
  if (cols < 1 || rows < 1) throw FormatError(path.string() + ": invalid PGM dimensions");
  if (maxval < 1 || maxval > 255) {
    throw FormatError(path.string() + ": only 8-bit PGM is supported");
  }
  in.get();  // single whitespace before raster
  std::vector<std::uint8_t> data(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols));
  in.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(data.size()));
  if (in.gcount() != static_cast<std::streamsize>(data.size())) {
    throw FormatError(path.string() + ": truncated PGM raster");
  }
  return Frame(rows, cols, std::move(data));
}

void write_pgm(const fs::path& path, const Frame& frame) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << "P5\n" << frame.cols() << ' ' << frame.rows() << "\n255\n";
  auto px = frame.pixels();
  out.write(reinterpret_cast<const char*>(px.data()), static_cast<std::streamsize>(px.size()));
  if (!out) throw IoError("write failed for " + path.string());
}

Video read_video(const fs::path& dir, Modality modality,
                 std::optional<std::size_t> expected_frames) {
  if (!fs::is_directory(dir)) throw IoError("frame directory not found: " + dir.string());
  Video video;
  video.modality = modality;
  for (std::size_t i = 1;; ++i) {
    if (expected_frames && i > *expected_frames) break;
    fs::path file = dir / frame_name(i);
    if (!fs::exists(file)) {
      if (expected_frames) throw IoError("missing frame file " + file.string());
      break;
    }
    video.frames.push_back(read_pgm(file));
  }
  if (video.frames.empty()) throw IoError("no frames in " + dir.string());
  check_uniform_shape(video);
  return video;
}

void write_video(const fs::path& dir, const Video& video) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  for (std::size_t i = 0; i < video.frames.size(); ++i) {
    write_pgm(dir / frame_name(i + 1), video.frames[i]);
  }
}

Batch load_batch(const fs::path& dir) {
  const fs::path manifest_path = dir / "manifest.json";
  std::ifstream in(manifest_path);
  if (!in) throw FormatError("missing manifest: " + manifest_path.string());
  nlohmann::json manifest;
  try {
    in >> manifest;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(manifest_path.string() + ": " + e.what());
  }
  if (!manifest.is_object() || !manifest.contains("vocabulary_size") ||
      !manifest["vocabulary_size"].is_number_integer() || !manifest.contains("train") ||
      !manifest["train"].is_object()) {
    throw FormatError(manifest_path.string() + ": needs integer vocabulary_size and object train");
  }

  Batch batch;
  batch.vocabulary_size = manifest["vocabulary_size"].get<int>();
  for (const auto& [key, entry] : manifest["train"].items()) {
    Label label = 0;
    auto [ptr, ec] = std::from_chars(key.data(), key.data() + key.size(), label);
    if (ec != std::errc{} || ptr != key.data() + key.size()) {
      throw FormatError("training label '" + key + "' is not an integer");
    }
    batch.training.emplace(label, load_recording(dir, entry, "train/" + key));
  }
  if (manifest.contains("test")) {
    if (!manifest["test"].is_object()) throw FormatError("manifest field test must be an object");
    for (const auto& [id, entry] : manifest["test"].items()) {
      batch.test.emplace(id, load_recording(dir, entry, "test/" + id));
    }
  }

  const int k = batch.vocabulary_size;
  if (k < 1 || static_cast<std::size_t>(k) != batch.training.size()) {
    throw IntegrityError("vocabulary_size " + std::to_string(k) + " does not match " +
                         std::to_string(batch.training.size()) + " training labels");
  }
  for (const auto& [label, rec] : batch.training) {
    if (label < 1 || label > k) {
      throw IntegrityError("training label " + std::to_string(label) + " outside 1.." +
                           std::to_string(k));
    }
  }
  return batch;
}

void save_batch(const fs::path& dir, const Batch& batch) {
  nlohmann::json manifest;
  manifest["vocabulary_size"] = batch.vocabulary_size;
  manifest["train"] = nlohmann::json::object();
  manifest["test"] = nlohmann::json::object();
  for (const auto& [label, rec] : batch.training) {
    const std::string stem = "train/" + std::to_string(label);
    write_video(dir / stem / "depth", rec.depth);
    write_video(dir / stem / "color", rec.color);
    manifest["train"][std::to_string(label)] = recording_entry(stem, rec);
  }
  for (const auto& [id, rec] : batch.test) {
    const std::string stem = "test/" + id;
    write_video(dir / stem / "depth", rec.depth);
    write_video(dir / stem / "color", rec.color);
    manifest["test"][id] = recording_entry(stem, rec);
  }
  std::ofstream out(dir / "manifest.json");
  if (!out) throw IoError("cannot write " + (dir / "manifest.json").string());
  out << manifest.dump(2) << '\n';
}

void write_predictions(const PredictionMap& predictions, const fs::path& path,
                       std::optional<int> vocabulary_size) {
  for (const auto& [id, labels] : predictions) {
    if (id.empty() || id.find_first_of(",\n\r") != std::string::npos) {
      throw ArgumentError("video id '" + id + "' cannot be written to CSV");
    }
    for (Label l : labels) {
      if (l < 1 || (vocabulary_size && l > *vocabulary_size)) {
        throw ArgumentError("label " + std::to_string(l) + " of '" + id + "' out of range");
      }
    }
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << "video_id,labels\n";
  for (const auto& [id, labels] : predictions) {
    out << id << ',';
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (i) out << ' ';
      out << labels[i];
    }
    out << '\n';
  }
  if (!out) throw IoError("write failed for " + path.string());
}

PredictionMap load_truth(const fs::path& path) { return parse_label_csv(path, false); }

PredictionMap load_predictions(const fs::path& path) { return parse_label_csv(path, true); }

}  // namespace gesture
