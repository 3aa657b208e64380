#include <benchmark/benchmark.h>

#include <cmath>

#include "postmetrics/anfis.hpp"
#include "postmetrics/esn.hpp"
#include "postmetrics/numerics.hpp"
#include "postmetrics/svr.hpp"

using namespace postmetrics;

namespace {

Mat uniform_mat(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  Mat m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = rng.uniform01();
  }
  return m;
}

// Heavy-tailed targets in [0, 1], shaped like scaled engagement counts.
Vec skewed_targets(Rng& rng, const Mat& x) {
  Vec y(x.rows());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    y[i] = 0.05 + 0.3 * x(i, 0) * x(i, 5) + 0.6 * std::pow(rng.uniform01(), 6.0);
  }
  return y;
}

const std::vector<std::pair<double, double>> kUnit7(7, {0.0, 1.0});

}  // namespace

static void BM_RidgeSolve(benchmark::State& state) {
  Rng rng(1);
  const auto n = state.range(0);
  const Mat a = uniform_mat(rng, 400, n);
  const Vec b = uniform_mat(rng, 400, 1).col(0);
  for (auto _ : state) benchmark::DoNotOptimize(ridge_solve(a, b, 1e-6));
}
BENCHMARK(BM_RidgeSolve)->Arg(26)->Arg(256)->Unit(benchmark::kMicrosecond);

static void BM_SpectralRadius(benchmark::State& state) {
  Rng rng(2);
  const Mat m = uniform_mat(rng, 25, 25).array() - 0.5;
  for (auto _ : state) benchmark::DoNotOptimize(spectral_radius(m));
}
BENCHMARK(BM_SpectralRadius)->Unit(benchmark::kMicrosecond);

static void BM_EsnTrain(benchmark::State& state) {
  Rng rng(3);
  const Mat x = uniform_mat(rng, 400, 7);
  const Vec y = skewed_targets(rng, x);
  const EsnModel init = init_esn(7, EsnConfig{});
  for (auto _ : state) benchmark::DoNotOptimize(train_readout(init, x, y));
}
BENCHMARK(BM_EsnTrain)->Unit(benchmark::kMicrosecond);

static void BM_SvrTrain(benchmark::State& state) {
  Rng rng(4);
  const Mat x = uniform_mat(rng, 400, 7);
  const Vec y = skewed_targets(rng, x);
  std::size_t iterations = 0;
  for (auto _ : state) {
    const SvrModel m = train_svr(x, y, SvrConfig{});
    iterations = m.iterations;
    benchmark::DoNotOptimize(m.beta0);
  }
  state.counters["updates"] = static_cast<double>(iterations);
}
BENCHMARK(BM_SvrTrain)->Unit(benchmark::kMillisecond);

static void BM_AnfisForward(benchmark::State& state) {
  Rng rng(5);
  const AnfisModel m = init_anfis(kUnit7);
  const Vec x = uniform_mat(rng, 1, 7).row(0).transpose();
  for (auto _ : state) benchmark::DoNotOptimize(forward(m, x).output);
}
BENCHMARK(BM_AnfisForward)->Unit(benchmark::kMicrosecond);

static void BM_AnfisLse(benchmark::State& state) {
  Rng rng(6);
  const Mat x = uniform_mat(rng, 400, 7);
  const Vec y = skewed_targets(rng, x);
  const AnfisModel m = init_anfis(kUnit7);
  for (auto _ : state) benchmark::DoNotOptimize(lse_consequents(m, x, y));
}
BENCHMARK(BM_AnfisLse)->Unit(benchmark::kMillisecond);

static void BM_AnfisGradient(benchmark::State& state) {
  Rng rng(7);
  const Mat x = uniform_mat(rng, 400, 7);
  const Vec y = skewed_targets(rng, x);
  const AnfisModel m = lse_consequents(init_anfis(kUnit7), x, y);
  for (auto _ : state) benchmark::DoNotOptimize(premise_gradient(m, x, y));
}
BENCHMARK(BM_AnfisGradient)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
