#include <cmath>
#include <random>

#include "doctest.h"
#include "gesture/error.hpp"
#include "gesture/qchi.hpp"
#include "oracles.hpp"

using namespace gesture;

TEST_CASE("gaussian kernel weights") {
  const auto g = gaussian_kernel3(0.56);
  const double e1 = std::exp(-1.0 / (2 * 0.56 * 0.56)), e2 = std::exp(-2.0 / (2 * 0.56 * 0.56));
  const double total = 1 + 4 * e1 + 4 * e2;
  CHECK(g.center == doctest::Approx(1 / total).epsilon(1e-12));
  CHECK(g.edge == doctest::Approx(e1 / total).epsilon(1e-12));
  CHECK(g.corner == doctest::Approx(e2 / total).epsilon(1e-12));
}

TEST_CASE("similarity matrix equals the dense construction") {
  for (auto coupling : {OrientationCoupling::Adjacent, OrientationCoupling::Filtered2D}) {
    const bool adjacent = coupling == OrientationCoupling::Adjacent;
    const auto a = build_similarity_matrix(2, 3, 16, coupling);
    const auto dense = oracle::kronecker_similarity(2, 3, 16, 0.56, adjacent);
    for (int i = 0; i < a.dimension(); ++i)
      for (int j = 0; j < a.dimension(); ++j) CHECK(a.at(i, j) == doctest::Approx(dense[i][j]).epsilon(1e-12));
  }
  const auto a = build_similarity_matrix(4, 6, 16);
  for (int i = 0; i < a.dimension(); ++i) {
    CHECK(a.row(i).size() <= 27);
    for (const auto& e : a.row(i)) {
      CHECK(e.weight > 0.0);
      CHECK(a.at(e.col, i) == e.weight);
      CHECK(e.weight <= a.at(i, i));
    }
  }
}

TEST_CASE("orientation block wraps around") {
  const auto o = orientation_block(16, OrientationCoupling::Adjacent);
  CHECK(o[0 * 16 + 15] == o[0 * 16 + 1]);
  CHECK(o[0 * 16 + 2] == 0.0);
  const auto f = orientation_block(16, OrientationCoupling::Filtered2D);
  CHECK(f[0 * 16 + 14] == doctest::Approx(gaussian_kernel3().corner));
}

TEST_CASE("qc distance properties") {
  std::mt19937 rng(4);
  std::uniform_real_distribution<double> u(0, 1);
  const auto a = build_similarity_matrix(2, 2, 16);
  const auto dense = oracle::kronecker_similarity(2, 2, 16, 0.56, true);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> p(64), q(64);
    for (auto& x : p) x = u(rng) < 0.3 ? 0.0 : u(rng);
    for (auto& x : q) x = u(rng) < 0.3 ? 0.0 : u(rng);
    for (double m : {0.0, 0.5, 0.9}) {
      const double d = qc_distance(p, q, a, {m});
      CHECK(d == doctest::Approx(oracle::qc(p, q, dense, m)).epsilon(1e-9));
      CHECK(d == doctest::Approx(qc_distance(q, p, a, {m})).epsilon(1e-12));
    }
    CHECK(qc_distance(p, p, a) == 0.0);
  }
  const auto id = BinSimilarityMatrix::identity(2);
  CHECK(qc_distance(std::vector<double>{1, 0}, std::vector<double>{0, 1}, id) == doctest::Approx(std::sqrt(2.0)));
  CHECK(qc_distance(std::vector<double>{0, 0}, std::vector<double>{0, 0}, id) == 0.0);
  CHECK_THROWS_AS(qc_distance(std::vector<double>{1}, std::vector<double>{1, 2}, id), ArgumentError);
  CHECK_THROWS_AS(QcParams{1.0}.validate(), ArgumentError);
}
