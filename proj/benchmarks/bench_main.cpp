// Microbenchmarks for the hot paths: marginals, whitening, objective
// derivatives, solver runs, and expansion diagnostics.  All inputs are
// seeded, so timings are comparable across runs.

#include <benchmark/benchmark.h>

#include "kronfit/cp_map.hpp"
#include "kronfit/dataset.hpp"
#include "kronfit/generators.hpp"
#include "kronfit/kron.hpp"
#include "kronfit/objective.hpp"
#include "kronfit/rng.hpp"
#include "kronfit/solvers.hpp"

namespace {

using kronfit::CPMapView;
using kronfit::Dataset;
using kronfit::DimVector;
using kronfit::GeneratorKind;
using kronfit::GeneratorSpec;
using kronfit::KronPoint;
using kronfit::Seed;
using kronfit::SolverConfig;

KronPoint make_point(std::vector<int> dims, std::uint64_t seed) {
  const GeneratorSpec spec{GeneratorKind::kWishart, DimVector(std::move(dims))};
  return kronfit::generate(spec, Seed{seed, 0});
}

Dataset make_data(std::vector<int> dims, int n, std::uint64_t seed) {
  const KronPoint truth = make_point(std::move(dims), seed);
  return Dataset::sample_model(truth, n, Seed{seed, 1});
}

void BM_PartialTraceOne(benchmark::State& state) {
  const Dataset x = make_data({8, 8, 8}, 16, 11);
  for (auto _ : state) {
    benchmark::DoNotOptimize(kronfit::partial_trace_one(x, 1));
  }
}
BENCHMARK(BM_PartialTraceOne);

void BM_PartialTraceTwo(benchmark::State& state) {
  const Dataset x = make_data({8, 8}, 64, 12);
  for (auto _ : state) {
    benchmark::DoNotOptimize(kronfit::partial_trace_two(x, 0, 1));
  }
}
BENCHMARK(BM_PartialTraceTwo);

void BM_Whiten(benchmark::State& state) {
  const Dataset x = make_data({16, 16}, 32, 13);
  const KronPoint theta = make_point({16, 16}, 14);
  for (auto _ : state) {
    benchmark::DoNotOptimize(kronfit::whiten(x, theta));
  }
}
BENCHMARK(BM_Whiten);

void BM_SampleModel(benchmark::State& state) {
  const KronPoint truth = make_point({16, 16}, 15);
  for (auto _ : state) {
    benchmark::DoNotOptimize(Dataset::sample_model(truth, 64, Seed{16, 0}));
  }
}
BENCHMARK(BM_SampleModel);

void BM_Gradient(benchmark::State& state) {
  const Dataset x = make_data({4, 4, 4}, 32, 17);
  const KronPoint theta = make_point({4, 4, 4}, 18);
  const kronfit::ObjectiveConfig cfg{0.3};
  for (auto _ : state) {
    benchmark::DoNotOptimize(kronfit::gradient(x, theta, cfg));
  }
}
BENCHMARK(BM_Gradient);

void BM_HessianApply(benchmark::State& state) {
  const DimVector dims({4, 4});
  const Dataset x = make_data({4, 4}, 32, 19);
  const KronPoint theta = make_point({4, 4}, 20);
  std::vector<Eigen::MatrixXd> blocks;
  kronfit::CounterRng rng(Seed{21, 0}, kronfit::rng_domain::kTest);
  for (int a = 0; a < dims.k(); ++a) {
    Eigen::MatrixXd b(dims[a], dims[a]);
    for (int i = 0; i < dims[a]; ++i) {
      for (int j = 0; j < dims[a]; ++j) b(i, j) = rng.next_gaussian();
    }
    blocks.push_back(b);
  }
  const kronfit::TangentVec h(dims, 0.5, blocks);
  for (auto _ : state) {
    benchmark::DoNotOptimize(kronfit::hessian_apply(x, theta, h));
  }
}
BENCHMARK(BM_HessianApply);

void BM_FlipFlop(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const int n = static_cast<int>(state.range(1));
  const Dataset x = make_data({d, d}, n, 22);
  SolverConfig cfg;
  cfg.delta = 1e-8;
  for (auto _ : state) {
    benchmark::DoNotOptimize(kronfit::flip_flop(x, cfg));
  }
}
BENCHMARK(BM_FlipFlop)->Args({4, 100})->Args({8, 64});

void BM_ShrinkFlopUndersampled(benchmark::State& state) {
  const Dataset x = Dataset::sample_model(
      KronPoint::identity(DimVector({25, 50})), 1, Seed{23, 0});
  SolverConfig cfg;
  cfg.alpha = 0.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(kronfit::shrink_flop(x, cfg));
  }
}
BENCHMARK(BM_ShrinkFlopUndersampled);

void BM_ExpansionNorm(benchmark::State& state) {
  const Dataset x = make_data({8, 8}, 64, 24);
  for (auto _ : state) {
    const CPMapView phi(x, 0, 1);
    benchmark::DoNotOptimize(kronfit::expansion_norm(phi));
  }
}
BENCHMARK(BM_ExpansionNorm);

void BM_GeodesicDistance(benchmark::State& state) {
  const KronPoint a = make_point({16, 16, 16}, 25);
  const KronPoint b = make_point({16, 16, 16}, 26);
  for (auto _ : state) {
    benchmark::DoNotOptimize(kronfit::geodesic_distance(a, b));
  }
}
BENCHMARK(BM_GeodesicDistance);

}  // namespace

BENCHMARK_MAIN();
