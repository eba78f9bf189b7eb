#include "gesture/qchi.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gesture/error.hpp"

namespace gesture {

BinSimilarityMatrix::BinSimilarityMatrix(int dimension, std::vector<std::size_t> row_offsets,
                                         std::vector<Entry> entries)
    : dimension_(dimension), row_offsets_(std::move(row_offsets)), entries_(std::move(entries)) {
  if (row_offsets_.size() != static_cast<std::size_t>(dimension) + 1 ||
      row_offsets_.back() != entries_.size()) {
    throw ArgumentError("inconsistent CSR layout");
  }
}

BinSimilarityMatrix BinSimilarityMatrix::identity(int dimension) {
  std::vector<std::size_t> offsets(static_cast<std::size_t>(dimension) + 1);
  std::vector<Entry> entries;
  for (int i = 0; i < dimension; ++i) {
    offsets[static_cast<std::size_t>(i)] = entries.size();
    entries.push_back({i, 1.0});
  }
  offsets.back() = entries.size();
  return BinSimilarityMatrix(dimension, std::move(offsets), std::move(entries));
}

double BinSimilarityMatrix::at(int i, int j) const noexcept {
  for (const auto& e : row(i))
    if (e.col == j) return e.weight;
  return 0.0;
}

GaussianKernel3 gaussian_kernel3(double sigma) {
  const double s2 = 2.0 * sigma * sigma;
  const double c = 1.0, e = std::exp(-1.0 / s2), k = std::exp(-2.0 / s2);
  const double total = c + 4.0 * e + 4.0 * k;
  return {c / total, e / total, k / total};
}

std::vector<double> orientation_block(int p, OrientationCoupling coupling, double sigma) {
  const auto g = gaussian_kernel3(sigma);
  std::vector<double> out(static_cast<std::size_t>(p * p), 0.0);
  auto add = [&](int i, int offset, double w) {
    const int j = ((i + offset) % p + p) % p;
    out[static_cast<std::size_t>(i * p + j)] += w;
  };
  for (int i = 0; i < p; ++i) {
    if (coupling == OrientationCoupling::Filtered2D) {
      // circular correlation of the identity with the 3x3 kernel: entry (i, j)
      // collects kernel taps (dr, dc) with j = i + dr - dc
      for (int dr = -1; dr <= 1; ++dr)
        for (int dc = -1; dc <= 1; ++dc) {
          const int taps = std::abs(dr) + std::abs(dc);
          add(i, dr - dc, taps == 0 ? g.center : taps == 1 ? g.edge : g.corner);
        }
    } else {
      add(i, 0, g.center + 2.0 * g.corner);
      add(i, -1, 2.0 * g.edge);
      add(i, 1, 2.0 * g.edge);
    }
  }
  return out;
}

std::vector<double> spatial_block(int h, int w, double sigma) {
  const auto g = gaussian_kernel3(sigma);
  const int cells = h * w;
  std::vector<double> out(static_cast<std::size_t>(cells * cells), 0.0);
  // cell index = col * h + row
  for (int c1 = 0; c1 < w; ++c1)
    for (int r1 = 0; r1 < h; ++r1)
      for (int c2 = std::max(0, c1 - 1); c2 <= std::min(w - 1, c1 + 1); ++c2)
        for (int r2 = std::max(0, r1 - 1); r2 <= std::min(h - 1, r1 + 1); ++r2) {
          const int steps = (r1 != r2) + (c1 != c2);
          out[static_cast<std::size_t>((c1 * h + r1) * cells + (c2 * h + r2))] =
              steps == 0 ? g.center : steps == 1 ? g.edge : g.corner;
        }
  return out;
}

BinSimilarityMatrix build_similarity_matrix(int h, int w, int p, OrientationCoupling coupling,
                                            double sigma) {
  if (h < 1 || w < 1 || p < 1) throw ArgumentError("similarity matrix dimensions must be positive");
  const auto orient = orientation_block(p, coupling, sigma);
  const auto spatial = spatial_block(h, w, sigma);
  const int cells = h * w;
  const int dim = cells * p;

  std::vector<std::size_t> offsets(static_cast<std::size_t>(dim) + 1);
  std::vector<BinSimilarityMatrix::Entry> entries;
  for (int cell_i = 0; cell_i < cells; ++cell_i) {
    for (int bin_i = 0; bin_i < p; ++bin_i) {
      offsets[static_cast<std::size_t>(cell_i * p + bin_i)] = entries.size();
      for (int cell_j = 0; cell_j < cells; ++cell_j) {
        const double s = spatial[static_cast<std::size_t>(cell_i * cells + cell_j)];
        if (s == 0.0) continue;
        for (int bin_j = 0; bin_j < p; ++bin_j) {
          const double o = orient[static_cast<std::size_t>(bin_i * p + bin_j)];
          if (o == 0.0) continue;
          entries.push_back({cell_j * p + bin_j, s * o});
        }
      }
    }
  }
  offsets.back() = entries.size();
  return BinSimilarityMatrix(dim, std::move(offsets), std::move(entries));
}

void QcParams::validate() const {
  if (!(m >= 0.0 && m < 1.0)) throw ArgumentError("QC normalization factor m must be in [0, 1)");
}

double qc_distance(std::span<const double> p, std::span<const double> q,
                   const BinSimilarityMatrix& a, const QcParams& params) {
  const auto dim = static_cast<std::size_t>(a.dimension());
  if (p.size() != q.size() || p.size() != dim) {
    throw ArgumentError("QC dimension mismatch: " + std::to_string(p.size()) + ", " +
                        std::to_string(q.size()) + " vs matrix " + std::to_string(dim));
  }
  thread_local std::vector<double> d;
  d.assign(dim, 0.0);
  for (std::size_t i = 0; i < dim; ++i) {
    const double diff = p[i] - q[i];
    if (diff == 0.0) continue;
    if (params.m == 0.0) {
      d[i] = diff;
      continue;
    }
    // A is symmetric, so column i equals row i
    double z = 0.0;
    for (const auto& e : a.row(static_cast<int>(i))) {
      z += (p[static_cast<std::size_t>(e.col)] + q[static_cast<std::size_t>(e.col)]) * e.weight;
    }
    if (z > 0.0) d[i] = diff / std::pow(z, params.m);
  }
  double total = 0.0;
  for (std::size_t i = 0; i < dim; ++i) {
    if (d[i] == 0.0) continue;
    double row = 0.0;
    for (const auto& e : a.row(static_cast<int>(i))) row += d[static_cast<std::size_t>(e.col)] * e.weight;
    total += d[i] * row;
  }
  return std::sqrt(std::max(0.0, total));
}

double qc_distance(const Descriptor& p, const Descriptor& q, const BinSimilarityMatrix& a,
                   const QcParams& params) {
  if (!p.same_shape(q)) throw ArgumentError("QC descriptors differ in shape");
  return qc_distance(p.values(), q.values(), a, params);
}

}  // namespace gesture
