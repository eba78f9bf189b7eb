#include "gesture/descriptors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "gesture/error.hpp"

namespace gesture {

Descriptor::Descriptor(int cells_rows, int cells_cols, int bins)
    : cells_rows_(cells_rows), cells_cols_(cells_cols), bins_(bins) {
  if (cells_rows < 1 || cells_cols < 1 || bins < 1) {
    throw ArgumentError("descriptor dimensions must be positive");
  }
  values_.assign(static_cast<std::size_t>(cells_rows) * static_cast<std::size_t>(cells_cols) *
                     static_cast<std::size_t>(bins),
                 0.0);
}

double Descriptor::sum() const noexcept {
  return std::accumulate(values_.begin(), values_.end(), 0.0);
}

void FlowParams::validate() const {
  if (window_radius < 1) throw ArgumentError("flow window radius must be >= 1");
  if (smoothing_sigma < 0.0) throw ArgumentError("flow smoothing sigma must be >= 0");
  if (!(regularization > 0.0)) throw ArgumentError("flow regularization must be > 0");
}

namespace {

void check_cell_grid(int rows, int cols, int min_cells) {
  if (rows % kCellSize != 0 || cols % kCellSize != 0 || rows / kCellSize < min_cells ||
      cols / kCellSize < min_cells) {
    throw IntegrityError("frame size " + std::to_string(rows) + "x" + std::to_string(cols) +
                         " is not a grid of at least " + std::to_string(min_cells) + "x" +
                         std::to_string(min_cells) + " cells of 40x40");
  }
}

using Plane = std::vector<double>;

Plane to_unit_plane(const Frame& f) {
  Plane out(f.size());
  auto px = f.pixels();
  for (std::size_t i = 0; i < px.size(); ++i) out[i] = px[i] / 255.0;
  return out;
}

// Separable Gaussian with replicated borders; radius ceil(3 sigma).
Plane gaussian_blur(const Plane& in, int rows, int cols, double sigma) {
  if (sigma <= 0.0) return in;
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> kernel(static_cast<std::size_t>(2 * radius + 1));
  double total = 0.0;
  for (int k = -radius; k <= radius; ++k) {
    double w = std::exp(-0.5 * k * k / (sigma * sigma));
    kernel[static_cast<std::size_t>(k + radius)] = w;
    total += w;
  }
  for (auto& w : kernel) w /= total;

  Plane tmp(in.size()), out(in.size());
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      double acc = 0.0;
      for (int k = -radius; k <= radius; ++k) {
        int x = std::clamp(c + k, 0, cols - 1);
        acc += kernel[static_cast<std::size_t>(k + radius)] * in[static_cast<std::size_t>(r * cols + x)];
      }
      tmp[static_cast<std::size_t>(r * cols + c)] = acc;
    }
  }
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      double acc = 0.0;
      for (int k = -radius; k <= radius; ++k) {
        int y = std::clamp(r + k, 0, rows - 1);
        acc += kernel[static_cast<std::size_t>(k + radius)] * tmp[static_cast<std::size_t>(y * cols + c)];
      }
      out[static_cast<std::size_t>(r * cols + c)] = acc;
    }
  }
  return out;
}

// Window sums over (2r+1)^2 clipped to the image, via an integral image.
Plane box_sum(const Plane& in, int rows, int cols, int radius) {
  std::vector<double> integral(static_cast<std::size_t>((rows + 1) * (cols + 1)), 0.0);
  auto I = [&](int r, int c) -> double& {
    return integral[static_cast<std::size_t>(r * (cols + 1) + c)];
  };
  for (int r = 0; r < rows; ++r) {
    double row_acc = 0.0;
    for (int c = 0; c < cols; ++c) {
      row_acc += in[static_cast<std::size_t>(r * cols + c)];
      I(r + 1, c + 1) = I(r, c + 1) + row_acc;
    }
  }
  Plane out(in.size());
  for (int r = 0; r < rows; ++r) {
    const int r0 = std::max(0, r - radius), r1 = std::min(rows, r + radius + 1);
    for (int c = 0; c < cols; ++c) {
      const int c0 = std::max(0, c - radius), c1 = std::min(cols, c + radius + 1);
      out[static_cast<std::size_t>(r * cols + c)] = I(r1, c1) - I(r0, c1) - I(r1, c0) + I(r0, c0);
    }
  }
  return out;
}

}  // namespace

Descriptor hog(const Frame& frame) {
  const int rows = frame.rows(), cols = frame.cols();
  check_cell_grid(rows, cols, 3);
  const int cells_r = rows / kCellSize, cells_c = cols / kCellSize;
  const double bin_width = 180.0 / kOrientationBins;

  // cell histograms, layout [cell_r][cell_c][bin]
  std::vector<double> cells(static_cast<std::size_t>(cells_r * cells_c * kOrientationBins), 0.0);
  auto cell = [&](int cr, int cc, int b) -> double& {
    return cells[static_cast<std::size_t>((cr * cells_c + cc) * kOrientationBins + b)];
  };

  for (int r = 0; r < rows; ++r) {
    const int up = std::max(0, r - 1), down = std::min(rows - 1, r + 1);
    for (int c = 0; c < cols; ++c) {
      const int left = std::max(0, c - 1), right = std::min(cols - 1, c + 1);
      const double gx = static_cast<double>(frame(r, right)) - frame(r, left);
      const double gy = static_cast<double>(frame(down, c)) - frame(up, c);
      if (gx == 0.0 && gy == 0.0) continue;
      const double mag = std::hypot(gx, gy);
      double angle = std::atan2(gy, gx) * 180.0 / std::numbers::pi;
      if (angle < 0.0) angle += 180.0;
      if (angle >= 180.0) angle -= 180.0;
      const int b = std::min(kOrientationBins - 1, static_cast<int>(angle / bin_width));
      cell(r / kCellSize, c / kCellSize, b) += mag;
    }
  }

  // one norm per 2x2 block, indexed by its top-left cell
  std::vector<double> block_norm(static_cast<std::size_t>((cells_r - 1) * (cells_c - 1)));
  for (int br = 0; br + 1 < cells_r; ++br) {
    for (int bc = 0; bc + 1 < cells_c; ++bc) {
      double ss = 0.0;
      for (int dr = 0; dr < 2; ++dr)
        for (int dc = 0; dc < 2; ++dc)
          for (int b = 0; b < kOrientationBins; ++b) {
            const double v = cell(br + dr, bc + dc, b);
            ss += v * v;
          }
      block_norm[static_cast<std::size_t>(br * (cells_c - 1) + bc)] = std::sqrt(ss) + kBlockNormEpsilon;
    }
  }

  Descriptor out(cells_r - 2, cells_c - 2, kOrientationBins);
  for (int cr = 1; cr + 1 < cells_r; ++cr) {
    for (int cc = 1; cc + 1 < cells_c; ++cc) {
      for (int b = 0; b < kOrientationBins; ++b) {
        const double v = cell(cr, cc, b);
        double acc = 0.0;
        for (int br = cr - 1; br <= cr; ++br)
          for (int bc = cc - 1; bc <= cc; ++bc)
            acc += v / block_norm[static_cast<std::size_t>(br * (cells_c - 1) + bc)];
        out.at(cr - 1, cc - 1, b) = acc;
      }
    }
  }
  return out;
}

namespace {

Plane smoothed(const Frame& f, const FlowParams& params) {
  return gaussian_blur(to_unit_plane(f), f.rows(), f.cols(), params.smoothing_sigma);
}

// Flow between two frames already passed through smoothed().
FlowField flow_between(const Plane& a, const Plane& b, int rows, int cols, const FlowParams& params) {
  const std::size_t n = a.size();
  Plane xx(n), xy(n), yy(n), xt(n), yt(n);
  for (int r = 0; r < rows; ++r) {
    const int up = std::max(0, r - 1), down = std::min(rows - 1, r + 1);
    for (int c = 0; c < cols; ++c) {
      const int left = std::max(0, c - 1), right = std::min(cols - 1, c + 1);
      auto at = [cols](const Plane& p, int y, int x) { return p[static_cast<std::size_t>(y * cols + x)]; };
      // central differences averaged over both frames
      const double ix = 0.25 * (at(a, r, right) - at(a, r, left) + at(b, r, right) - at(b, r, left));
      const double iy = 0.25 * (at(a, down, c) - at(a, up, c) + at(b, down, c) - at(b, up, c));
      const std::size_t i = static_cast<std::size_t>(r * cols + c);
      const double it = b[i] - a[i];
      xx[i] = ix * ix;
      xy[i] = ix * iy;
      yy[i] = iy * iy;
      xt[i] = ix * it;
      yt[i] = iy * it;
    }
  }
  const int w = params.window_radius;
  xx = box_sum(xx, rows, cols, w);
  xy = box_sum(xy, rows, cols, w);
  yy = box_sum(yy, rows, cols, w);
  xt = box_sum(xt, rows, cols, w);
  yt = box_sum(yt, rows, cols, w);

  FlowField flow{rows, cols, Plane(n, 0.0), Plane(n, 0.0)};
  const double eps = params.regularization;
  for (std::size_t i = 0; i < n; ++i) {
    if (xt[i] == 0.0 && yt[i] == 0.0) continue;
    const double s_xx = xx[i] + eps, s_yy = yy[i] + eps, s_xy = xy[i];
    const double det = s_xx * s_yy - s_xy * s_xy;
    flow.u[i] = (-s_yy * xt[i] + s_xy * yt[i]) / det;
    flow.v[i] = (s_xy * xt[i] - s_xx * yt[i]) / det;
  }
  return flow;
}

}  // namespace

FlowField lucas_kanade(const Frame& prev, const Frame& next, const FlowParams& params) {
  params.validate();
  if (!prev.same_shape(next)) throw IntegrityError("optical flow frames differ in size");
  return flow_between(smoothed(prev, params), smoothed(next, params), prev.rows(), prev.cols(), params);
}

Descriptor hof(const FlowField& flow) {
  check_cell_grid(flow.rows, flow.cols, 1);
  const int cells_r = flow.rows / kCellSize, cells_c = flow.cols / kCellSize;
  const double bin_width = 360.0 / kOrientationBins;
  Descriptor out(cells_r, cells_c, kOrientationBins);
  double total = 0.0;
  for (int r = 0; r < flow.rows; ++r) {
    for (int c = 0; c < flow.cols; ++c) {
      const std::size_t i = static_cast<std::size_t>(r * flow.cols + c);
      const double u = flow.u[i], v = flow.v[i];
      if (u == 0.0 && v == 0.0) continue;
      const double mag = std::hypot(u, v);
      double angle = std::atan2(v, u) * 180.0 / std::numbers::pi;
      if (angle < 0.0) angle += 360.0;
      if (angle >= 360.0) angle -= 360.0;
      const int b = std::min(kOrientationBins - 1, static_cast<int>(angle / bin_width));
      out.at(r / kCellSize, c / kCellSize, b) += mag;
      total += mag;
    }
  }
  if (total > 0.0) {
    for (double& x : out.values()) x /= total;
  }
  return out;
}

std::vector<FrameRepr> represent_video(const Video& depth, const Video& color, bool with_hof,
                                       const FlowParams& flow) {
  if (depth.size() != color.size()) {
    throw IntegrityError("depth has " + std::to_string(depth.size()) + " frames, color has " +
                         std::to_string(color.size()));
  }
  if (depth.size() < 2) throw IntegrityError("a video needs at least 2 frames to be represented");
  std::vector<FrameRepr> out;
  out.reserve(depth.size() - 1);
  Plane prev;
  if (with_hof) {
    flow.validate();
    check_uniform_shape(color);
    prev = smoothed(color.frames[0], flow);
  }
  for (std::size_t i = 1; i < depth.size(); ++i) {
    FrameRepr repr{hog(depth.frames[i]), std::nullopt};
    if (with_hof) {
      Plane next = smoothed(color.frames[i], flow);
      repr.hof = hof(flow_between(prev, next, color.rows(), color.cols(), flow));
      prev = std::move(next);
    }
    out.push_back(std::move(repr));
  }
  return out;
}

}  // namespace gesture
