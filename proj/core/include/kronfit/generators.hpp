#pragma once

#include "kronfit/kron.hpp"
#include "kronfit/rng.hpp"

namespace kronfit {

/// Synthetic ground-truth families for experiments.
enum class GeneratorKind {
  kIdentity,
  kSpiked,           // covariance I + strength * v v^T, v standard Gaussian
  kSparseLaplacian,  // precision L(multigraph) + I/2
  kWishart           // precision I + (1/rank) sum of rank Gaussian outer
                     // products
};

struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::kIdentity;
  DimVector dims = DimVector({1});
  double strength = 10.0;    // spiked rank-one strength
  double edge_factor = 0.4;  // multigraph has floor(edge_factor * d_a) edges
  int rank = 0;              // Wishart rank; 0 selects d_a
};

/// One factor in the kind's native convention, trace-normalized to d_a:
/// the *covariance* factor for kSpiked, the *precision* factor otherwise.
/// Draws from `rng` sequentially; `generate` consumes factors in mode
/// order from a kGenerate-domain stream.
PDMat generate_factor(const GeneratorSpec& spec, int a, CounterRng& rng);

/// Balanced ground-truth precision point: native factors are drawn per
/// mode (spiked covariances are inverted), then balanced.
KronPoint generate(const GeneratorSpec& spec, Seed seed);

const char* to_string(GeneratorKind kind);

}  // namespace kronfit
