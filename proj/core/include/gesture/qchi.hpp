#pragma once

#include <span>
#include <vector>

#include "gesture/descriptors.hpp"

namespace gesture {

/// Values of the normalized 3x3 Gaussian kernel, by position.
struct GaussianKernel3 {
  double center = 0.0;
  double edge = 0.0;    // 4-adjacent positions
  double corner = 0.0;  // diagonal positions
};

GaussianKernel3 gaussian_kernel3(double sigma = 0.56);

/// How the p x p orientation block couples bins.
///
/// Adjacent keeps each bin linked to itself and its two circular neighbours
/// (at most 27 nonzeros per row of the full matrix). Filtered2D is the full
/// 2-D circular filtering of the identity with the 3x3 kernel, which also
/// links bins two steps apart through the kernel corners.
enum class OrientationCoupling { Adjacent, Filtered2D };

/// Sparse symmetric bin-similarity matrix in CSR form.
class BinSimilarityMatrix {
 public:
  struct Entry {
    int col;
    double weight;
  };

  BinSimilarityMatrix() = default;
  BinSimilarityMatrix(int dimension, std::vector<std::size_t> row_offsets, std::vector<Entry> entries);

  static BinSimilarityMatrix identity(int dimension);

  int dimension() const noexcept { return dimension_; }
  std::span<const Entry> row(int i) const noexcept {
    return {entries_.data() + row_offsets_[static_cast<std::size_t>(i)],
            entries_.data() + row_offsets_[static_cast<std::size_t>(i) + 1]};
  }
  double at(int i, int j) const noexcept;
  std::size_t nonzeros() const noexcept { return entries_.size(); }

 private:
  int dimension_ = 0;
  std::vector<std::size_t> row_offsets_{0};
  std::vector<Entry> entries_;
};

/// Similarity over h x w cells with p orientation bins (H = h*w*p), as the
/// Kronecker product of a spatial block (same cell: kernel center, 4-adjacent
/// cell: kernel edge, diagonal cell: kernel corner) with the orientation
/// block. Index layout matches Descriptor: bin fastest, then row, then col.
BinSimilarityMatrix build_similarity_matrix(int h, int w, int p,
                                            OrientationCoupling coupling = OrientationCoupling::Adjacent,
                                            double sigma = 0.56);

// Orientation block alone (p x p, dense row-major).
std::vector<double> orientation_block(int p, OrientationCoupling coupling, double sigma = 0.56);

// Spatial block alone ((h*w) x (h*w), dense row-major, row-fastest cell order).
std::vector<double> spatial_block(int h, int w, double sigma = 0.56);

struct QcParams {
  double m = 0.5;  // normalization exponent, 0 <= m < 1

  void validate() const;
};

/// Quadratic-Chi distance
///   sqrt( sum_ij D_i D_j A_ij ),  D_i = (P_i - Q_i) / (sum_c (P_c + Q_c) A_ci)^m
/// with 0/0 = 0. A negative radicand from rounding is clamped to zero.
/// Throws ArgumentError on dimension mismatch.
double qc_distance(std::span<const double> p, std::span<const double> q,
                   const BinSimilarityMatrix& a, const QcParams& params = {});

double qc_distance(const Descriptor& p, const Descriptor& q, const BinSimilarityMatrix& a,
                   const QcParams& params = {});

}  // namespace gesture
