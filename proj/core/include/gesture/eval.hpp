#pragma once

#include <cstddef>
#include <string>

#include "gesture/corpus.hpp"

namespace gesture {

// Unit-cost edit distance (insertion, deletion, substitution).
std::size_t levenshtein(const LabelSequence& a, const LabelSequence& b);

struct BatchScore {
  std::size_t total_distance = 0;
  std::size_t total_gestures = 0;
  double score = 0.0;  // 100 * total_distance / total_gestures
};

/// Sums edit distances over videos and normalizes by the number of truth
/// gestures. Throws ArgumentError if the two maps are keyed differently
/// (the message lists the offending ids) or the truth holds no gestures.
BatchScore batch_score(const PredictionMap& predictions, const PredictionMap& truth);

// Score with two decimals, e.g. "23.78".
std::string format_score(double score);

}  // namespace gesture
