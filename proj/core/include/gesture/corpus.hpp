#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gesture/frame.hpp"

namespace gesture {

using Label = int;
using LabelSequence = std::vector<Label>;
using PredictionMap = std::map<std::string, LabelSequence>;

/// Depth and grayscale-color streams of one recording; equal frame counts.
struct Recording {
  Video depth;
  Video color;

  friend bool operator==(const Recording&, const Recording&) = default;
};

/// One user, one vocabulary: a training recording per label plus unlabeled
/// test recordings. Labels run 1..vocabulary_size.
struct Batch {
  int vocabulary_size = 0;
  std::map<Label, Recording> training;
  std::map<std::string, Recording> test;

  friend bool operator==(const Batch&, const Batch&) = default;
};

// Binary 8-bit PGM (P5).
Frame read_pgm(const std::filesystem::path& path);
void write_pgm(const std::filesystem::path& path, const Frame& frame);

// Reads frame_0001.pgm, frame_0002.pgm, ... from `dir`. With `expected_frames`
// every file up to that count must exist; otherwise reading stops at the
// first gap.
Video read_video(const std::filesystem::path& dir, Modality modality,
                 std::optional<std::size_t> expected_frames = std::nullopt);
void write_video(const std::filesystem::path& dir, const Video& video);

/// Loads `manifest.json` and every referenced frame directory.
///
/// Manifest layout:
///   { "vocabulary_size": k,
///     "train": { "<label>":    {"depth": dir, "color": dir, "frames": n}, ... },
///     "test":  { "<video_id>": {"depth": dir, "color": dir, "frames": n}, ... } }
/// Directories are relative to the batch directory; "frames" is optional.
///
/// Throws FormatError for a missing or malformed manifest, IntegrityError for
/// size or count mismatches, IoError for absent frame files.
Batch load_batch(const std::filesystem::path& dir);

// Writes the batch in the layout load_batch reads.
void save_batch(const std::filesystem::path& dir, const Batch& batch);

/// Writes `video_id,l1 l2 ... ln` rows, sorted by video id, after a
/// `video_id,labels` header. With a vocabulary size every label must be in
/// 1..k.
void write_predictions(const PredictionMap& predictions, const std::filesystem::path& path,
                       std::optional<int> vocabulary_size = std::nullopt);

// Ground truth: every row needs at least one label.
PredictionMap load_truth(const std::filesystem::path& path);

// Predictions may carry an empty label field (nothing recognized).
PredictionMap load_predictions(const std::filesystem::path& path);

}  // namespace gesture
