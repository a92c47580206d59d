#include "kronfit/solvers.hpp"

#include <cmath>
#include <utility>

#include "kronfit/errors.hpp"

namespace kronfit {

namespace {

void validate_common(const Dataset& x, const SolverConfig& cfg) {
  (void)x;
  if (!(cfg.delta > 0.0)) {
    throw InvalidInput("solver: delta must be positive");
  }
  if (cfg.max_iters < 0) {
    throw InvalidInput("solver: max_iters must be >= 1 (or 0 for default)");
  }
  if (!(cfg.singular_tolerance >= 0.0 && cfg.singular_tolerance < 1.0)) {
    throw InvalidInput("solver: singular_tolerance must lie in [0, 1)");
  }
}

bool marginal_is_singular(const SymEig& eig, double tolerance) {
  const double lambda_max = eig.values(eig.values.size() - 1);
  const double lambda_min = eig.values(0);
  return !(lambda_max > 0.0) || lambda_min <= tolerance * lambda_max;
}

Eigen::MatrixXd eig_inverse(const SymEig& eig) {
  return eig.vectors * eig.values.cwiseInverse().asDiagonal() *
         eig.vectors.transpose();
}

Estimate run_sweep(const Dataset& x, const SolverConfig& cfg, bool use_shrink) {
  const DimVector& dims = x.dims();
  const int k = dims.k();
  const double total = static_cast<double>(dims.total());
  const int max_iters =
      cfg.max_iters == 0 ? default_max_iters(dims) : cfg.max_iters;
  const double trace_rho_x = trace_rho(x);

  std::vector<PDMat> factors;
  factors.reserve(k);
  for (int a = 0; a < k; ++a) factors.push_back(PDMat::identity(dims[a]));

  SolverReport report;
  report.termination = Termination::kMaxItersReached;
  int updates = 0;

  for (int t = 1;; ++t) {
    const KronPoint current = KronPoint::from_factors(factors);
    const Dataset w = whiten(x, current);
    const double tr_w = trace_rho(w);

    std::vector<double> factor_traces(k);
    double trace_theta = 1.0;
    for (int a = 0; a < k; ++a) {
      factor_traces[a] = factors[a].trace();
      trace_theta *= factor_traces[a];
    }
    const double shrink_c = cfg.alpha * trace_rho_x / total;

    std::vector<SymMat> marginals;
    marginals.reserve(k);
    std::vector<double> norms(k);
    for (int a = 0; a < k; ++a) {
      marginals.push_back(partial_trace_one(w, a));
      Eigen::MatrixXd g = marginals[a].mat();
      g.diagonal().array() -= tr_w / dims[a];
      if (use_shrink) {
        g *= 1.0 - cfg.alpha;
        Eigen::MatrixXd reg = factors[a].mat();
        reg.diagonal().array() -= factor_traces[a] / dims[a];
        g += shrink_c * (trace_theta / factor_traces[a]) * reg;
      }
      norms[a] = std::sqrt(static_cast<double>(dims[a])) * g.norm();
    }
    int best = 0;
    for (int a = 1; a < k; ++a) {
      if (norms[a] > norms[best]) best = a;
    }

    const double log_det = current.log_det();
    IterationRecord rec;
    rec.t = t;
    rec.f = use_shrink
                ? (1.0 - cfg.alpha) * tr_w + shrink_c * trace_theta -
                      log_det / total
                : tr_w - log_det / total;
    rec.max_grad_norm = norms[best];
    rec.grad_norms = norms;
    rec.trace_rho = tr_w;

    const bool check_stop = !(cfg.skip_first_stop_check && t == 1);
    if (check_stop && norms[best] <= cfg.delta) {
      report.records.push_back(std::move(rec));
      report.termination = Termination::kConverged;
      break;
    }
    if (updates == max_iters) {
      report.records.push_back(std::move(rec));
      report.termination = Termination::kMaxItersReached;
      break;
    }

    const int da = dims[best];
    if (!use_shrink) {
      const SymEig meig = sym_eig(marginals[best]);
      if (marginal_is_singular(meig, cfg.singular_tolerance)) {
        report.records.push_back(std::move(rec));
        report.termination = Termination::kSingularMarginal;
        break;
      }
      const Eigen::MatrixXd root = factors[best].fn(SpectralFn::kSqrt).mat();
      factors[best] = PDMat(
          SymMat((root * eig_inverse(meig) * root / da).eval()));
    } else {
      const Eigen::MatrixXd root_inv =
          factors[best].fn(SpectralFn::kInvSqrt).mat();
      Eigen::MatrixXd shrunk =
          (1.0 - cfg.alpha) * (root_inv * marginals[best].mat() * root_inv);
      shrunk.diagonal().array() +=
          shrink_c * (trace_theta / factor_traces[best]);
      const SymMat inv = PDMat(SymMat(shrunk)).fn(SpectralFn::kInverse);
      factors[best] = PDMat(SymMat((inv.mat() / da).eval()));
    }
    rec.chosen = best;
    ++updates;
    report.records.push_back(std::move(rec));
  }

  report.iterations = updates;
  return Estimate{balance(factors), std::move(report)};
}

}  // namespace

const char* to_string(Termination t) {
  switch (t) {
    case Termination::kConverged:
      return "Converged";
    case Termination::kMaxItersReached:
      return "MaxItersReached";
    case Termination::kSingularMarginal:
      return "SingularMarginal";
  }
  return "Unknown";
}

int default_max_iters(const DimVector& dims) {
  return 50 * (dims.k() * dims.k() * dims.d_max() + 64);
}

Estimate flip_flop(const Dataset& x, const SolverConfig& cfg) {
  validate_common(x, cfg);
  if (cfg.alpha != 0.0) {
    throw InvalidInput("flip_flop: alpha must be 0 (use shrink_flop)");
  }
  return run_sweep(x, cfg, /*use_shrink=*/false);
}

Estimate shrink_flop(const Dataset& x, const SolverConfig& cfg) {
  validate_common(x, cfg);
  if (!(cfg.alpha > 0.0 && cfg.alpha <= 1.0)) {
    throw InvalidInput("shrink_flop: alpha must lie in (0, 1]");
  }
  if (x.squared_norm() == 0.0) {
    throw DegenerateInput("shrink_flop: all-zero dataset");
  }
  return run_sweep(x, cfg, /*use_shrink=*/true);
}

Dataset one_step_renormalize(const Dataset& x, int mode) {
  const DimVector& dims = x.dims();
  if (mode < 0 || mode >= dims.k()) {
    throw InvalidInput("one_step_renormalize: mode out of range");
  }
  const SymMat marginal = partial_trace_one(x, mode);
  const SymEig eig = sym_eig(marginal);
  if (marginal_is_singular(eig, kSingularTolerance)) {
    throw SingularMarginal("one_step_renormalize: singular mode marginal");
  }
  const double da = static_cast<double>(dims[mode]);
  const Eigen::MatrixXd m =
      eig.vectors *
      (da * eig.values.array()).rsqrt().matrix().asDiagonal() *
      eig.vectors.transpose();
  return mode_multiply(x, mode, SymMat(m));
}

}  // namespace kronfit
