#pragma once

#include <map>
#include <optional>
#include <span>
#include <vector>

#include "gesture/corpus.hpp"
#include "gesture/descriptors.hpp"
#include "gesture/qchi.hpp"

namespace gesture {

/// Similarity matrices and QC parameters used to compare frame
/// representations of one frame size.
struct MatchContext {
  BinSimilarityMatrix hog;
  BinSimilarityMatrix hof;
  QcParams params;

  static MatchContext for_frame_size(int rows, int cols, const QcParams& params = {},
                                     OrientationCoupling coupling = OrientationCoupling::Adjacent);
};

// QC distance of the HOGs plus QC distance of the HOFs. When neither side
// carries a HOF only the HOG term is used.
double frame_cost(const FrameRepr& node, const FrameRepr& obs, const MatchContext& ctx);

struct ModelNode {
  Label label = 0;   // 0 for the resting-position node
  int position = 0;  // 0-based position within its gesture row
  FrameRepr repr;
};

/// Lattice of frame-representation nodes. Each gesture occupies a row of
/// consecutive nodes; node n moves to n, n+1 or n+2 inside its row. The
/// optional resting-position (RP) node comes last, loops on itself, enters
/// the first three nodes of every row and is entered from the last three.
class GestureModel {
 public:
  static constexpr Label kRestLabel = 0;
  static constexpr int kBand = 3;

  struct Row {
    Label label;
    int first;
    int length;
  };

  GestureModel() = default;
  GestureModel(const std::map<Label, std::vector<FrameRepr>>& rows, std::optional<FrameRepr> rest);

  std::size_t size() const noexcept { return nodes_.size(); }
  const ModelNode& node(int n) const { return nodes_[static_cast<std::size_t>(n)]; }
  std::span<const ModelNode> nodes() const noexcept { return nodes_; }
  std::span<const Row> rows() const noexcept { return rows_; }
  std::optional<int> rest_node() const noexcept { return rest_; }

  // Ascending node indices.
  std::span<const int> predecessors(int n) const { return preds_[static_cast<std::size_t>(n)]; }
  std::span<const int> successors(int n) const { return succs_[static_cast<std::size_t>(n)]; }
  bool has_transition(int from, int to) const;

  // RP plus the first three nodes of every row.
  std::vector<int> entry_nodes() const;
  // RP plus the last three nodes of every row.
  std::vector<int> exit_nodes() const;
  std::vector<int> all_nodes() const;

 private:
  std::vector<ModelNode> nodes_;
  std::vector<Row> rows_;
  std::optional<int> rest_;
  std::vector<std::vector<int>> preds_;
  std::vector<std::vector<int>> succs_;
};

/// One row per gesture in label order plus an RP node holding the elementwise
/// mean of every training video's first representation.
/// Throws ArgumentError for an empty map or an empty representation list.
GestureModel build_sm_model(const std::map<Label, std::vector<FrameRepr>>& training);

// Elementwise mean of the first representation of each list.
FrameRepr mean_first_repr(const std::map<Label, std::vector<FrameRepr>>& training);

/// Node x time match costs, stored column by column.
class CostMatrix {
 public:
  CostMatrix() = default;
  CostMatrix(std::size_t nodes, std::size_t columns, double fill = 0.0)
      : nodes_(nodes), columns_(columns), data_(nodes * columns, fill) {}

  std::size_t nodes() const noexcept { return nodes_; }
  std::size_t columns() const noexcept { return columns_; }
  double operator()(std::size_t node, std::size_t col) const { return data_[col * nodes_ + node]; }
  double& operator()(std::size_t node, std::size_t col) { return data_[col * nodes_ + node]; }

 private:
  std::size_t nodes_ = 0;
  std::size_t columns_ = 0;
  std::vector<double> data_;
};

CostMatrix compute_cost_matrix(const GestureModel& model, std::span<const FrameRepr> test,
                               const MatchContext& ctx);

struct ViterbiPath {
  std::vector<int> states;  // one node per column
  double cost = 0.0;
};

/// Minimum-cost transition-respecting state sequence over columns
/// [first_col, first_col + col_count), starting in `start` and ending in
/// `end`. Ties go to the smaller node index, both for the final state and
/// at every backtracking step. col_count 0 means "to the last column".
/// Throws ArgumentError when no feasible path exists.
ViterbiPath viterbi(const GestureModel& model, const CostMatrix& costs, std::span<const int> start,
                    std::span<const int> end, std::size_t first_col = 0, std::size_t col_count = 0);

// Cost only; same recursion as viterbi without backpointers.
double viterbi_cost(const GestureModel& model, const CostMatrix& costs, std::size_t first_col,
                    std::size_t col_count);

struct SmOptions {
  int min_run = 3;  // shortest run of path states inside one row that counts as a gesture
};

/// Each maximal run of consecutive states inside one gesture row emits that
/// row's label once, in path order, when the run has at least min_run states.
LabelSequence decode_path(const GestureModel& model, const ViterbiPath& path, int min_run);

struct SmResult {
  LabelSequence labels;
  ViterbiPath path;
  CostMatrix costs;
};

SmResult sm_analyze(const GestureModel& model, std::span<const FrameRepr> test,
                    const MatchContext& ctx, const SmOptions& options = {});

LabelSequence sm_recognize(const GestureModel& model, std::span<const FrameRepr> test,
                           const MatchContext& ctx, const SmOptions& options = {});

// One RP-free, HOG-only single-row model per gesture, in label order.
std::vector<GestureModel> build_mm_models(const std::map<Label, std::vector<FrameRepr>>& training);

/// k gestures x (T - l + 1) window positions.
struct ScoreMatrix {
  std::vector<Label> labels;
  std::size_t columns = 0;
  std::vector<double> data;  // row-major

  double operator()(std::size_t g, std::size_t t) const { return data[g * columns + t]; }
};

/// Entry (g, t): cheapest unconstrained alignment of representations
/// t .. t+l-1 to model g, divided by l. Throws ArgumentError if the test has
/// fewer than l representations.
ScoreMatrix sliding_scores(std::span<const GestureModel> models, std::span<const FrameRepr> test,
                           int window, const MatchContext& ctx);

/// Half-open interval of test representations.
struct Segment {
  int begin = 0;
  int end = 0;

  friend bool operator==(const Segment&, const Segment&) = default;
};

struct SegmentOptions {
  int smoothing_taps = 5;
  double percentile = 0.30;
  int min_separation = 8;  // between cuts, and between a cut and either end
};

// Distance of each test HOG to the RP HOG.
std::vector<double> rest_distance(std::span<const FrameRepr> test, const FrameRepr& rest,
                                  const MatchContext& ctx);

// Cuts at local minima of the smoothed distance below its percentile.
std::vector<Segment> segment_by_rest_distance(std::span<const double> distance,
                                              const SegmentOptions& options = {});

std::vector<Segment> segment_test_video(std::span<const FrameRepr> test, const FrameRepr& rest,
                                        const MatchContext& ctx, const SegmentOptions& options = {});

enum class SegmentWeighting { Triangular, Uniform };

/// Per segment, the label minimizing the weighted column sum of its score
/// row. A segment owns the window positions whose centre falls inside it;
/// triangular weights run from 1 at the centre column down to 0.2 at the
/// segment's edge columns. Ties go to the smaller label; empty segments are
/// skipped.
LabelSequence mm_recognize(const ScoreMatrix& scores, std::span<const Segment> segments, int window,
                           SegmentWeighting weighting = SegmentWeighting::Triangular);

struct MmResult {
  LabelSequence labels;
  ScoreMatrix scores;
  std::vector<Segment> segments;
  int window = 0;
};

// sliding_scores + segment_test_video + mm_recognize, shrinking the window
// to the test length when the test is shorter than `window`.
MmResult mm_analyze(std::span<const GestureModel> models, const FrameRepr& rest,
                    std::span<const FrameRepr> test, int window, const MatchContext& ctx,
                    const SegmentOptions& options = {});

}  // namespace gesture
