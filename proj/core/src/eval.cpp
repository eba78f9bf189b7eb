#include "gesture/eval.hpp"

#include <algorithm>
#include <cstdio>
#include <vector>

#include "gesture/error.hpp"

namespace gesture {

std::size_t levenshtein(const LabelSequence& a, const LabelSequence& b) {
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

BatchScore batch_score(const PredictionMap& predictions, const PredictionMap& truth) {
  std::string missing_pred, missing_truth;
  for (const auto& [id, labels] : truth)
    if (!predictions.contains(id)) missing_pred += (missing_pred.empty() ? "" : ", ") + id;
  for (const auto& [id, labels] : predictions)
    if (!truth.contains(id)) missing_truth += (missing_truth.empty() ? "" : ", ") + id;
  if (!missing_pred.empty() || !missing_truth.empty()) {
    std::string msg = "prediction and truth ids differ";
    if (!missing_pred.empty()) msg += "; missing predictions: " + missing_pred;
    if (!missing_truth.empty()) msg += "; missing truth: " + missing_truth;
    throw ArgumentError(msg);
  }

  BatchScore s;
  for (const auto& [id, labels] : truth) {
    s.total_distance += levenshtein(predictions.at(id), labels);
    s.total_gestures += labels.size();
  }
  if (s.total_gestures == 0) throw ArgumentError("truth contains no gestures");
  s.score = 100.0 * static_cast<double>(s.total_distance) / static_cast<double>(s.total_gestures);
  return s;
}

std::string format_score(double score) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", score);
  return buf;
}

}  // namespace gesture
