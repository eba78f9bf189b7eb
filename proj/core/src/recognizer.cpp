#include "gesture/recognizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "gesture/error.hpp"

namespace gesture {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Descriptor mean_of(std::span<const Descriptor* const> items) {
  Descriptor out(items.front()->cells_rows(), items.front()->cells_cols(), items.front()->bins());
  auto acc = out.values();
  for (const Descriptor* d : items) {
    if (!d->same_shape(out)) throw ArgumentError("cannot average descriptors of different shapes");
    auto v = d->values();
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += v[i];
  }
  for (double& x : acc) x /= static_cast<double>(items.size());
  return out;
}

FrameRepr hog_only(const FrameRepr& r) { return FrameRepr{r.hog, std::nullopt}; }

}  // namespace

MatchContext MatchContext::for_frame_size(int rows, int cols, const QcParams& params,
                                          OrientationCoupling coupling) {
  params.validate();
  if (rows % kCellSize != 0 || cols % kCellSize != 0 || rows < 3 * kCellSize ||
      cols < 3 * kCellSize) {
    throw IntegrityError("frame size " + std::to_string(rows) + "x" + std::to_string(cols) +
                         " is not a grid of at least 3x3 cells of 40x40");
  }
  const int cr = rows / kCellSize, cc = cols / kCellSize;
  return MatchContext{build_similarity_matrix(cr - 2, cc - 2, kOrientationBins, coupling),
                      build_similarity_matrix(cr, cc, kOrientationBins, coupling), params};
}

double frame_cost(const FrameRepr& node, const FrameRepr& obs, const MatchContext& ctx) {
  double cost = qc_distance(node.hog, obs.hog, ctx.hog, ctx.params);
  if (node.hof.has_value() != obs.hof.has_value()) {
    throw IntegrityError("frame_cost: HOF present on only one side");
  }
  if (node.hof) cost += qc_distance(*node.hof, *obs.hof, ctx.hof, ctx.params);
  return cost;
}

GestureModel::GestureModel(const std::map<Label, std::vector<FrameRepr>>& rows,
                           std::optional<FrameRepr> rest) {
  if (rows.empty()) throw ArgumentError("a gesture model needs at least one gesture");
  for (const auto& [label, reprs] : rows) {
    if (reprs.empty()) {
      throw ArgumentError("gesture " + std::to_string(label) + " has no representations");
    }
    if (label == kRestLabel) throw ArgumentError("label 0 is reserved for the resting position");
    rows_.push_back({label, static_cast<int>(nodes_.size()), static_cast<int>(reprs.size())});
    for (std::size_t i = 0; i < reprs.size(); ++i) {
      nodes_.push_back({label, static_cast<int>(i), reprs[i]});
    }
  }
  if (rest) {
    rest_ = static_cast<int>(nodes_.size());
    nodes_.push_back({kRestLabel, 0, std::move(*rest)});
  }

  succs_.assign(nodes_.size(), {});
  for (const Row& row : rows_) {
    for (int i = 0; i < row.length; ++i) {
      for (int step = 0; step <= 2 && i + step < row.length; ++step) {
        succs_[static_cast<std::size_t>(row.first + i)].push_back(row.first + i + step);
      }
    }
  }
  if (rest_) {
    auto& rp = succs_[static_cast<std::size_t>(*rest_)];
    rp.push_back(*rest_);
    for (const Row& row : rows_) {
      const int band = std::min(kBand, row.length);
      for (int i = 0; i < band; ++i) rp.push_back(row.first + i);
      for (int i = row.length - band; i < row.length; ++i) {
        succs_[static_cast<std::size_t>(row.first + i)].push_back(*rest_);
      }
    }
  }
  preds_.assign(nodes_.size(), {});
  for (std::size_t from = 0; from < succs_.size(); ++from) {
    auto& s = succs_[from];
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    for (int to : s) preds_[static_cast<std::size_t>(to)].push_back(static_cast<int>(from));
  }
  for (auto& p : preds_) std::sort(p.begin(), p.end());
}

bool GestureModel::has_transition(int from, int to) const {
  auto s = successors(from);
  return std::binary_search(s.begin(), s.end(), to);
}

std::vector<int> GestureModel::entry_nodes() const {
  std::vector<int> out;
  for (const Row& row : rows_)
    for (int i = 0; i < std::min(kBand, row.length); ++i) out.push_back(row.first + i);
  if (rest_) out.push_back(*rest_);
  return out;
}

std::vector<int> GestureModel::exit_nodes() const {
  std::vector<int> out;
  for (const Row& row : rows_)
    for (int i = row.length - std::min(kBand, row.length); i < row.length; ++i) out.push_back(row.first + i);
  if (rest_) out.push_back(*rest_);
  return out;
}

std::vector<int> GestureModel::all_nodes() const {
  std::vector<int> out(nodes_.size());
  std::iota(out.begin(), out.end(), 0);
  return out;
}

FrameRepr mean_first_repr(const std::map<Label, std::vector<FrameRepr>>& training) {
  if (training.empty()) throw ArgumentError("no training gestures");
  std::vector<const Descriptor*> hogs, hofs;
  for (const auto& [label, reprs] : training) {
    if (reprs.empty()) throw ArgumentError("gesture " + std::to_string(label) + " has no representations");
    hogs.push_back(&reprs.front().hog);
    if (reprs.front().hof) hofs.push_back(&*reprs.front().hof);
  }
  FrameRepr out{mean_of(hogs), std::nullopt};
  if (hofs.size() == hogs.size()) out.hof = mean_of(hofs);
  return out;
}

GestureModel build_sm_model(const std::map<Label, std::vector<FrameRepr>>& training) {
  return GestureModel(training, mean_first_repr(training));
}

CostMatrix compute_cost_matrix(const GestureModel& model, std::span<const FrameRepr> test,
                               const MatchContext& ctx) {
  CostMatrix costs(model.size(), test.size());
  for (std::size_t t = 0; t < test.size(); ++t)
    for (std::size_t n = 0; n < model.size(); ++n)
      costs(n, t) = frame_cost(model.node(static_cast<int>(n)).repr, test[t], ctx);
  return costs;
}

ViterbiPath viterbi(const GestureModel& model, const CostMatrix& costs, std::span<const int> start,
                    std::span<const int> end, std::size_t first_col, std::size_t col_count) {
  const std::size_t n = model.size();
  if (costs.nodes() != n) throw ArgumentError("cost matrix rows do not match the model");
  if (first_col >= costs.columns()) throw ArgumentError("viterbi: no columns to decode");
  if (col_count == 0) col_count = costs.columns() - first_col;
  if (first_col + col_count > costs.columns()) throw ArgumentError("viterbi: column range out of bounds");
  if (start.empty() || end.empty()) throw ArgumentError("viterbi: empty start or end set");

  std::vector<double> prev(n, kInf), cur(n);
  std::vector<int> back(col_count * n, -1);
  for (int s : start) {
    if (s < 0 || static_cast<std::size_t>(s) >= n) throw ArgumentError("viterbi: start node out of range");
    prev[static_cast<std::size_t>(s)] = costs(static_cast<std::size_t>(s), first_col);
  }
  for (std::size_t t = 1; t < col_count; ++t) {
    for (std::size_t s = 0; s < n; ++s) {
      double best = kInf;
      int arg = -1;
      for (int p : model.predecessors(static_cast<int>(s))) {
        if (prev[static_cast<std::size_t>(p)] < best) {
          best = prev[static_cast<std::size_t>(p)];
          arg = p;
        }
      }
      back[t * n + s] = arg;
      cur[s] = arg < 0 ? kInf : best + costs(s, first_col + t);
    }
    std::swap(prev, cur);
  }

  std::vector<int> ends(end.begin(), end.end());
  std::sort(ends.begin(), ends.end());
  double best = kInf;
  int last = -1;
  for (int s : ends) {
    if (s < 0 || static_cast<std::size_t>(s) >= n) throw ArgumentError("viterbi: end node out of range");
    if (prev[static_cast<std::size_t>(s)] < best) {
      best = prev[static_cast<std::size_t>(s)];
      last = s;
    }
  }
  if (last < 0) throw ArgumentError("viterbi: no feasible path");

  ViterbiPath path;
  path.cost = best;
  path.states.resize(col_count);
  path.states[col_count - 1] = last;
  for (std::size_t t = col_count - 1; t > 0; --t) {
    path.states[t - 1] = back[t * n + static_cast<std::size_t>(path.states[t])];
  }
  return path;
}

double viterbi_cost(const GestureModel& model, const CostMatrix& costs, std::size_t first_col,
                    std::size_t col_count) {
  const std::size_t n = model.size();
  if (col_count == 0 || first_col + col_count > costs.columns()) {
    throw ArgumentError("viterbi_cost: column range out of bounds");
  }
  std::vector<double> prev(n), cur(n);
  for (std::size_t s = 0; s < n; ++s) prev[s] = costs(s, first_col);
  for (std::size_t t = 1; t < col_count; ++t) {
    for (std::size_t s = 0; s < n; ++s) {
      double best = kInf;
      for (int p : model.predecessors(static_cast<int>(s))) best = std::min(best, prev[static_cast<std::size_t>(p)]);
      cur[s] = best + costs(s, first_col + t);
    }
    std::swap(prev, cur);
  }
  return *std::min_element(prev.begin(), prev.end());
}

LabelSequence decode_path(const GestureModel& model, const ViterbiPath& path, int min_run) {
  LabelSequence out;
  std::size_t t = 0;
  const auto& states = path.states;
  auto row_label = [&](int s) { return model.node(s).label; };
  while (t < states.size()) {
    const Label label = row_label(states[t]);
    std::size_t u = t;
    while (u < states.size() && row_label(states[u]) == label) ++u;
    if (label != GestureModel::kRestLabel && static_cast<int>(u - t) >= min_run) out.push_back(label);
    t = u;
  }
  return out;
}

SmResult sm_analyze(const GestureModel& model, std::span<const FrameRepr> test,
                    const MatchContext& ctx, const SmOptions& options) {
  if (test.empty()) throw ArgumentError("sm_recognize: empty test video");
  SmResult result;
  result.costs = compute_cost_matrix(model, test, ctx);
  result.path = viterbi(model, result.costs, model.entry_nodes(), model.exit_nodes());
  result.labels = decode_path(model, result.path, options.min_run);
  return result;
}

LabelSequence sm_recognize(const GestureModel& model, std::span<const FrameRepr> test,
                           const MatchContext& ctx, const SmOptions& options) {
  return sm_analyze(model, test, ctx, options).labels;
}

std::vector<GestureModel> build_mm_models(const std::map<Label, std::vector<FrameRepr>>& training) {
  if (training.empty()) throw ArgumentError("no training gestures");
  std::vector<GestureModel> models;
  for (const auto& [label, reprs] : training) {
    std::vector<FrameRepr> hogs;
    hogs.reserve(reprs.size());
    for (const auto& r : reprs) hogs.push_back(hog_only(r));
    models.emplace_back(std::map<Label, std::vector<FrameRepr>>{{label, std::move(hogs)}}, std::nullopt);
  }
  return models;
}

ScoreMatrix sliding_scores(std::span<const GestureModel> models, std::span<const FrameRepr> test,
                           int window, const MatchContext& ctx) {
  if (window < 1 || test.size() < static_cast<std::size_t>(window)) {
    throw ArgumentError("sliding window of " + std::to_string(window) + " does not fit " +
                        std::to_string(test.size()) + " representations");
  }
  std::vector<FrameRepr> hogs;
  hogs.reserve(test.size());
  for (const auto& r : test) hogs.push_back(hog_only(r));

  const std::size_t l = static_cast<std::size_t>(window);
  ScoreMatrix scores;
  scores.columns = test.size() - l + 1;
  scores.data.resize(models.size() * scores.columns);
  for (std::size_t g = 0; g < models.size(); ++g) {
    if (models[g].rows().size() != 1) throw ArgumentError("sliding_scores expects single-gesture models");
    scores.labels.push_back(models[g].rows().front().label);
    const CostMatrix costs = compute_cost_matrix(models[g], hogs, ctx);
    for (std::size_t t = 0; t < scores.columns; ++t) {
      scores.data[g * scores.columns + t] = viterbi_cost(models[g], costs, t, l) / static_cast<double>(l);
    }
  }
  return scores;
}

std::vector<double> rest_distance(std::span<const FrameRepr> test, const FrameRepr& rest,
                                  const MatchContext& ctx) {
  std::vector<double> out;
  out.reserve(test.size());
  for (const auto& r : test) out.push_back(qc_distance(r.hog, rest.hog, ctx.hog, ctx.params));
  return out;
}

std::vector<Segment> segment_by_rest_distance(std::span<const double> distance,
                                              const SegmentOptions& options) {
  const int n = static_cast<int>(distance.size());
  if (n == 0) return {};

  const int half = options.smoothing_taps / 2;
  std::vector<double> smooth(distance.size());
  for (int t = 0; t < n; ++t) {
    const int a = std::max(0, t - half), b = std::min(n - 1, t + half);
    double sum = 0.0;
    for (int i = a; i <= b; ++i) sum += distance[static_cast<std::size_t>(i)];
    smooth[static_cast<std::size_t>(t)] = sum / (b - a + 1);
  }

  std::vector<double> sorted = smooth;
  std::sort(sorted.begin(), sorted.end());
  const double pos = options.percentile * (n - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(sorted.size() - 1, lo + 1);
  const double threshold = sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);

  // interior local minima; a flat valley is represented by its middle
  std::vector<int> candidates;
  for (int i = 1; i < n - 1;) {
    int j = i;
    const double v = smooth[static_cast<std::size_t>(i)];
    while (j + 1 < n - 1 && smooth[static_cast<std::size_t>(j + 1)] == v) ++j;
    if (smooth[static_cast<std::size_t>(i - 1)] > v && smooth[static_cast<std::size_t>(j + 1)] > v &&
        v < threshold) {
      candidates.push_back((i + j) / 2);
    }
    i = j + 1;
  }
  std::stable_sort(candidates.begin(), candidates.end(), [&](int a, int b) {
    return smooth[static_cast<std::size_t>(a)] < smooth[static_cast<std::size_t>(b)];
  });

  const int sep = options.min_separation;
  std::vector<int> cuts;
  for (int c : candidates) {
    if (c < sep || n - c < sep) continue;
    bool clear = std::all_of(cuts.begin(), cuts.end(), [&](int o) { return std::abs(o - c) >= sep; });
    if (clear) cuts.push_back(c);
  }
  std::sort(cuts.begin(), cuts.end());

  std::vector<Segment> segments;
  int begin = 0;
  for (int c : cuts) {
    segments.push_back({begin, c});
    begin = c;
  }
  segments.push_back({begin, n});
  return segments;
}

std::vector<Segment> segment_test_video(std::span<const FrameRepr> test, const FrameRepr& rest,
                                        const MatchContext& ctx, const SegmentOptions& options) {
  return segment_by_rest_distance(rest_distance(test, rest, ctx), options);
}

LabelSequence mm_recognize(const ScoreMatrix& scores, std::span<const Segment> segments, int window,
                           SegmentWeighting weighting) {
  LabelSequence out;
  if (scores.columns == 0 || scores.labels.empty()) return out;
  const int cols = static_cast<int>(scores.columns);
  const int centre_offset = (window - 1) / 2;
  for (const Segment& seg : segments) {
    if (seg.end <= seg.begin) continue;
    // window t is centred on representation t + centre_offset
    const int a = std::clamp(seg.begin - centre_offset, 0, cols - 1);
    const int b = std::clamp(seg.end - centre_offset, a + 1, cols);
    const double centre = 0.5 * (a + b - 1);
    const double reach = std::max(centre - a, (b - 1) - centre);

    std::size_t best_g = 0;
    double best = kInf;
    for (std::size_t g = 0; g < scores.labels.size(); ++g) {
      double sum = 0.0;
      for (int t = a; t < b; ++t) {
        double w = 1.0;
        if (weighting == SegmentWeighting::Triangular && reach > 0.0) {
          w = 1.0 - 0.8 * std::abs(t - centre) / reach;
        }
        sum += w * scores(g, static_cast<std::size_t>(t));
      }
      if (sum < best || (sum == best && scores.labels[g] < scores.labels[best_g])) {
        best = sum;
        best_g = g;
      }
    }
    out.push_back(scores.labels[best_g]);
  }
  return out;
}

MmResult mm_analyze(std::span<const GestureModel> models, const FrameRepr& rest,
                    std::span<const FrameRepr> test, int window, const MatchContext& ctx,
                    const SegmentOptions& options) {
  if (test.empty()) throw ArgumentError("mm_recognize: empty test video");
  MmResult result;
  result.window = std::min(window, static_cast<int>(test.size()));
  result.scores = sliding_scores(models, test, result.window, ctx);
  result.segments = segment_test_video(test, rest, ctx, options);
  result.labels = mm_recognize(result.scores, result.segments, result.window);
  return result;
}

}  // namespace gesture
