#include "kronfit/generators.hpp"

#include <cmath>
#include <vector>

#include "kronfit/errors.hpp"

namespace kronfit {

namespace {

void validate(const GeneratorSpec& spec) {
  if (!(spec.strength >= 0.0) || !std::isfinite(spec.strength)) {
    throw InvalidInput("generator: strength must be finite and >= 0");
  }
  if (!(spec.edge_factor >= 0.0) || !std::isfinite(spec.edge_factor)) {
    throw InvalidInput("generator: edge_factor must be finite and >= 0");
  }
  if (spec.rank < 0) {
    throw InvalidInput("generator: rank must be >= 0");
  }
}

PDMat normalize_trace(const Eigen::MatrixXd& m, int d) {
  const PDMat base((SymMat(m)));
  return base.scaled(static_cast<double>(d) / base.trace());
}

Eigen::VectorXd gaussian_vector(int d, CounterRng& rng) {
  Eigen::VectorXd v(d);
  for (int i = 0; i < d; ++i) v(i) = rng.next_gaussian();
  return v;
}

PDMat spiked_covariance(int d, double strength, CounterRng& rng) {
  const Eigen::VectorXd v = gaussian_vector(d, rng);
  Eigen::MatrixXd m = strength * (v * v.transpose());
  m.diagonal().array() += 1.0;
  return normalize_trace(m, d);
}

PDMat sparse_laplacian_precision(int d, double edge_factor, CounterRng& rng) {
  // Laplacian of a uniform random multigraph: each edge is an unordered
  // pair of distinct vertices, drawn with replacement (repeats add
  // weight).  A single vertex admits no edges.
  Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(d, d);
  if (d >= 2) {
    const auto edges = static_cast<std::int64_t>(edge_factor * d);
    for (std::int64_t e = 0; e < edges; ++e) {
      const int u = static_cast<int>(rng.next_below(d));
      int v = static_cast<int>(rng.next_below(d - 1));
      if (v >= u) ++v;
      lap(u, u) += 1.0;
      lap(v, v) += 1.0;
      lap(u, v) -= 1.0;
      lap(v, u) -= 1.0;
    }
  }
  lap.diagonal().array() += 0.5;
  return normalize_trace(lap, d);
}

PDMat wishart_precision(int d, int rank, CounterRng& rng) {
  const int r = rank == 0 ? d : rank;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
  for (int j = 0; j < r; ++j) {
    const Eigen::VectorXd g = gaussian_vector(d, rng);
    m += g * g.transpose();
  }
  m /= static_cast<double>(r);
  m.diagonal().array() += 1.0;
  return normalize_trace(m, d);
}

}  // namespace

PDMat generate_factor(const GeneratorSpec& spec, int a, CounterRng& rng) {
  validate(spec);
  if (a < 0 || a >= spec.dims.k()) {
    throw InvalidInput("generate_factor: mode out of range");
  }
  const int d = spec.dims[a];
  switch (spec.kind) {
    case GeneratorKind::kIdentity:
      return PDMat::identity(d);
    case GeneratorKind::kSpiked:
      return spiked_covariance(d, spec.strength, rng);
    case GeneratorKind::kSparseLaplacian:
      return sparse_laplacian_precision(d, spec.edge_factor, rng);
    case GeneratorKind::kWishart:
      return wishart_precision(d, spec.rank, rng);
  }
  throw InvalidInput("generate_factor: unknown generator kind");
}

KronPoint generate(const GeneratorSpec& spec, Seed seed) {
  validate(spec);
  CounterRng rng(seed, rng_domain::kGenerate);
  std::vector<PDMat> factors;
  factors.reserve(spec.dims.k());
  for (int a = 0; a < spec.dims.k(); ++a) {
    PDMat native = generate_factor(spec, a, rng);
    if (spec.kind == GeneratorKind::kSpiked) {
      native = PDMat(native.fn(SpectralFn::kInverse));
    }
    factors.push_back(std::move(native));
  }
  return balance(factors);
}

const char* to_string(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::kIdentity:
      return "identity";
    case GeneratorKind::kSpiked:
      return "spiked";
    case GeneratorKind::kSparseLaplacian:
      return "sparse_laplacian";
    case GeneratorKind::kWishart:
      return "wishart";
  }
  return "unknown";
}

}  // namespace kronfit
