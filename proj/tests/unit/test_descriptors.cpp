#include <cmath>
#include <random>

#include "doctest.h"
#include "gesture/descriptors.hpp"
#include "gesture/error.hpp"
#include "oracles.hpp"

using namespace gesture;

namespace {

Frame textured(int rows, int cols, double dx, double dy) {
  Frame f(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      const double x = c - dx, y = r - dy;
      f(r, c) = static_cast<std::uint8_t>(std::lround(128 + 60 * std::sin(x / 5.0) * std::cos(y / 7.0) +
                                                      40 * std::sin((x + y) / 9.0)));
    }
  return f;
}

}  // namespace

TEST_CASE("hog shape and oracle agreement") {
  std::mt19937 rng(2);
  std::uniform_int_distribution<int> v(0, 255);
  Frame f(120, 160);
  for (auto& p : f.pixels()) p = static_cast<std::uint8_t>(v(rng));
  const Descriptor d = hog(f);
  CHECK(d.cells_rows() == 1);
  CHECK(d.cells_cols() == 2);
  const auto ref = oracle::hog(f);
  REQUIRE(ref.size() == d.size());
  for (std::size_t i = 0; i < ref.size(); ++i) CHECK(d.values()[i] == doctest::Approx(ref[i]).epsilon(1e-12));
  for (double x : d.values()) CHECK(x >= 0.0);

  CHECK(hog(Frame(240, 320)).size() == 384);
  const Descriptor flat = hog(Frame(120, 120, 77));
  for (double x : flat.values()) CHECK(x == 0.0);
  CHECK_THROWS_AS(hog(Frame(100, 160)), IntegrityError);
  CHECK_THROWS_AS(hog(Frame(80, 160)), IntegrityError);
}

TEST_CASE("hog cell norms stay bounded") {
  std::mt19937 rng(8);
  std::uniform_int_distribution<int> v(0, 255);
  Frame f(160, 200);
  for (auto& p : f.pixels()) p = static_cast<std::uint8_t>(v(rng));
  const Descriptor d = hog(f);
  for (int r = 0; r < d.cells_rows(); ++r)
    for (int c = 0; c < d.cells_cols(); ++c) {
      double ss = 0;
      for (int b = 0; b < d.bins(); ++b) ss += d.at(r, c, b) * d.at(r, c, b);
      CHECK(std::sqrt(ss) <= 4.0 + 1e-9);
    }
}

TEST_CASE("lucas-kanade recovers a small translation") {
  const Frame a = textured(120, 160, 0, 0), b = textured(120, 160, 1, 0);
  const FlowField flow = lucas_kanade(a, b);
  double su = 0, sv = 0;
  int n = 0;
  for (int r = 20; r < 100; ++r)
    for (int c = 20; c < 140; ++c) {
      su += flow.u[static_cast<std::size_t>(r * 160 + c)];
      sv += flow.v[static_cast<std::size_t>(r * 160 + c)];
      ++n;
    }
  CHECK(su / n == doctest::Approx(1.0).epsilon(0.25));
  CHECK(std::abs(sv / n) < 0.1);
  CHECK_THROWS_AS(lucas_kanade(a, Frame(40, 40)), IntegrityError);
}

TEST_CASE("hof normalization") {
  FlowField flow{80, 120, std::vector<double>(80 * 120, 0.0), std::vector<double>(80 * 120, 0.0)};
  const Descriptor zero = hof(flow);
  CHECK(zero.size() == 2 * 3 * 16);
  CHECK(zero.sum() == 0.0);
  flow.u[5] = 1.0;     // 0 degrees
  flow.v[4000] = -2.0; // 270 degrees
  const Descriptor d = hof(flow);
  CHECK(d.sum() == doctest::Approx(1.0));
  CHECK(d.at(0, 0, 0) == doctest::Approx(1.0 / 3.0));
  CHECK(d.at(4000 / 120 / 40, (4000 % 120) / 40, 12) == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("represent_video pairs frames") {
  Video depth, color;
  depth.frames.assign(3, Frame(120, 120, 50));
  color.frames = {textured(120, 120, 0, 0), textured(120, 120, 1, 0), textured(120, 120, 1, 0)};
  const auto reprs = represent_video(depth, color);
  REQUIRE(reprs.size() == 2);
  CHECK(reprs[0].hof->sum() == doctest::Approx(1.0));
  CHECK(reprs[1].hof->sum() == 0.0);
  CHECK_FALSE(represent_video(depth, color, false)[0].hof.has_value());
  color.frames.pop_back();
  CHECK_THROWS_AS(represent_video(depth, color), IntegrityError);
}
