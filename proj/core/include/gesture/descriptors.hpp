#pragma once

#include <optional>
#include <span>
#include <vector>

#include "gesture/frame.hpp"

namespace gesture {

inline constexpr int kCellSize = 40;
inline constexpr int kOrientationBins = 16;

/// Non-negative histogram over cells_rows x cells_cols spatial cells with
/// `bins` orientation bins each. Storage order: bin fastest, then cell row,
/// then cell column. The bin-similarity matrix uses the same order.
class Descriptor {
 public:
  Descriptor() = default;
  Descriptor(int cells_rows, int cells_cols, int bins);

  int cells_rows() const noexcept { return cells_rows_; }
  int cells_cols() const noexcept { return cells_cols_; }
  int bins() const noexcept { return bins_; }
  std::size_t size() const noexcept { return values_.size(); }

  std::size_t index(int row, int col, int bin) const noexcept {
    return (static_cast<std::size_t>(col) * static_cast<std::size_t>(cells_rows_) +
            static_cast<std::size_t>(row)) * static_cast<std::size_t>(bins_) +
           static_cast<std::size_t>(bin);
  }
  double at(int row, int col, int bin) const { return values_[index(row, col, bin)]; }
  double& at(int row, int col, int bin) { return values_[index(row, col, bin)]; }

  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }

  double sum() const noexcept;
  bool same_shape(const Descriptor& o) const noexcept {
    return cells_rows_ == o.cells_rows_ && cells_cols_ == o.cells_cols_ && bins_ == o.bins_;
  }

  friend bool operator==(const Descriptor&, const Descriptor&) = default;

 private:
  int cells_rows_ = 0;
  int cells_cols_ = 0;
  int bins_ = 0;
  std::vector<double> values_;
};

/// Per-pixel displacement; u along columns, v along rows, pixels per frame.
struct FlowField {
  int rows = 0;
  int cols = 0;
  std::vector<double> u;
  std::vector<double> v;
};

struct FlowParams {
  int window_radius = 4;        // square least-squares window, side 2r+1
  double smoothing_sigma = 2.0; // Gaussian pre-smoothing of both frames
  double regularization = 9e-5; // added to the diagonal of the 2x2 normal matrix

  void validate() const;
};

/// What one node of a gesture model (or one test time step) stores.
struct FrameRepr {
  Descriptor hog;
  std::optional<Descriptor> hof;
};

// Added to each block norm so that empty blocks normalize to zero.
inline constexpr double kBlockNormEpsilon = 1e-6;

/// HOG of a depth frame: [-1,0,1] gradients, 16 unsigned orientation bins over
/// [0, 180), magnitude-weighted hard binning into 40x40 cells, 2x2-cell blocks
/// L2-normalized jointly, and each inner cell the sum of its four normalized
/// copies. Border cells are dropped, so a 240x320 frame yields 4x6x16.
/// Throws IntegrityError unless both dimensions are multiples of 40 and at
/// least 120.
Descriptor hog(const Frame& frame);

// Dense Lucas-Kanade flow from `prev` to `next` on intensities scaled to [0,1].
FlowField lucas_kanade(const Frame& prev, const Frame& next, const FlowParams& params = {});

/// Histogram of flow over the full grid of 40x40 cells: 16 direction bins
/// over [0, 360), magnitude-weighted, scaled to sum to 1 over the whole
/// descriptor. Zero flow gives the zero descriptor.
Descriptor hof(const FlowField& flow);

/// Node i (0-based) holds hog(depth[i+1]) and, with `with_hof`,
/// hof(lucas_kanade(color[i], color[i+1])). Returns f-1 representations.
std::vector<FrameRepr> represent_video(const Video& depth, const Video& color,
                                       bool with_hof = true, const FlowParams& flow = {});

}  // namespace gesture
