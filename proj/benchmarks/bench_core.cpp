#include <benchmark/benchmark.h>

#include "wshift/risk_engine.hpp"
#include "wshift/transport.hpp"

namespace {

wshift::GaussianLocation make_gaussian(int p) {
  wshift::GaussianLocation g;
  g.theta = wshift::Vec::Zero(p);
  g.sigma_cov = wshift::Mat::Zero(p, p);
  for (int i = 0; i < p; ++i) g.sigma_cov(i, i) = (i + 1) / (2.0 * p);
  return g;
}

void BM_SampleGaussian(benchmark::State& state) {
  const wshift::DistributionSpec dist{make_gaussian(3)};
  wshift::RngStream rng(42);
  for (auto _ : state) {
    benchmark::DoNotOptimize(wshift::sample(dist, 10, rng));
  }
}
BENCHMARK(BM_SampleGaussian);

void BM_W2Scalar(benchmark::State& state) {
  const wshift::DistributionSpec a{wshift::UniformLocation{0.0}};
  const wshift::DistributionSpec b{wshift::SmoothedUniform{0.0, 0.25}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(wshift::w2_1d(a, b, 1e-6));
  }
}
BENCHMARK(BM_W2Scalar);

void BM_RiskCell(benchmark::State& state) {
  const auto g = make_gaussian(3);
  const wshift::DistributionSpec dist{g};
  const wshift::PerturbationSpec shift = wshift::least_favorable_location(
      wshift::ShiftClass::JDS, 0.1, 10, 3, g.sigma_cov.trace());
  const wshift::EstimatorSpec mean = wshift::SampleMean{};
  const wshift::LossSpec loss = wshift::SquaredError{};
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        wshift::run_cell(dist, 10, shift, mean, loss, 200, 7));
  }
}
BENCHMARK(BM_RiskCell);

}  // namespace
