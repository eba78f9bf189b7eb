#include <benchmark/benchmark.h>

#include <random>

#include "gesture/descriptors.hpp"
#include "gesture/preprocess.hpp"
#include "gesture/qchi.hpp"
#include "gesture/recognizer.hpp"
#include "gesture/synth.hpp"

using namespace gesture;

namespace {

Frame noise_frame(int rows, int cols, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> v(0, 255);
  Frame f(rows, cols);
  for (auto& p : f.pixels()) p = static_cast<std::uint8_t>(v(rng));
  return f;
}

void BM_MedianFilter(benchmark::State& state) {
  const Frame f = noise_frame(120, 160, 1);
  for (auto _ : state) benchmark::DoNotOptimize(median_filter(f, 1));
}
BENCHMARK(BM_MedianFilter);

void BM_Hog(benchmark::State& state) {
  const int scale = static_cast<int>(state.range(0));
  const Frame f = render_pose(rest_pose(), 120 * scale, 160 * scale).color;
  for (auto _ : state) benchmark::DoNotOptimize(hog(f));
}
BENCHMARK(BM_Hog)->Arg(1)->Arg(2);

void BM_LucasKanade(benchmark::State& state) {
  Pose moved = rest_pose();
  moved.right_angle += 10.0;
  const Frame a = render_pose(rest_pose(), 120, 160).color, b = render_pose(moved, 120, 160).color;
  for (auto _ : state) benchmark::DoNotOptimize(lucas_kanade(a, b));
}
BENCHMARK(BM_LucasKanade);

void BM_QcDistance(benchmark::State& state) {
  const int h = static_cast<int>(state.range(0)), w = static_cast<int>(state.range(1));
  const auto a = build_similarity_matrix(h, w, kOrientationBins);
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<double> p(static_cast<std::size_t>(a.dimension())), q(p.size());
  for (auto& x : p) x = u(rng);
  for (auto& x : q) x = u(rng);
  for (auto _ : state) benchmark::DoNotOptimize(qc_distance(p, q, a));
}
BENCHMARK(BM_QcDistance)->Args({1, 2})->Args({4, 6});

void BM_Viterbi(benchmark::State& state) {
  const auto columns = static_cast<std::size_t>(state.range(0));
  std::map<Label, std::vector<FrameRepr>> rows;
  for (Label l = 1; l <= 20; ++l) rows[l].assign(40, FrameRepr{Descriptor(1, 1, 1), std::nullopt});
  const GestureModel model(rows, FrameRepr{Descriptor(1, 1, 1), std::nullopt});
  CostMatrix costs(model.size(), columns);
  std::mt19937 rng(4);
  std::uniform_real_distribution<double> u(0, 1);
  for (std::size_t n = 0; n < costs.nodes(); ++n)
    for (std::size_t t = 0; t < columns; ++t) costs(n, t) = u(rng);
  const auto start = model.entry_nodes(), end = model.exit_nodes();
  for (auto _ : state) benchmark::DoNotOptimize(viterbi(model, costs, start, end));
  state.SetComplexityN(static_cast<benchmark::IterationCount>(columns));
}
BENCHMARK(BM_Viterbi)->RangeMultiplier(2)->Range(64, 512)->Complexity(benchmark::oN);

}  // namespace

BENCHMARK_MAIN();
