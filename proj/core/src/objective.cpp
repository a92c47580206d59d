#include "kronfit/objective.hpp"

#include <cmath>
#include <memory>
#include <utility>
#include <vector>

#include "kronfit/errors.hpp"

namespace kronfit {

namespace {

void require_match(const Dataset& x, const KronPoint& theta) {
  if (x.dims() != theta.dims()) {
    throw InvalidInput("objective: dataset and point dimensions differ");
  }
}

void require_alpha(double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw InvalidInput("objective: alpha must lie in [0, 1]");
  }
}

double product_of_traces(const KronPoint& theta) {
  double prod = 1.0;
  for (int a = 0; a < theta.k(); ++a) prod *= theta.factor(a).trace();
  return prod;
}

// rho^(ab) contracted against a symmetric d_b x d_b block, and its adjoint.
Eigen::MatrixXd dense_pair_apply(const Eigen::MatrixXd& r, int da, int db,
                                 const Eigen::MatrixXd& k) {
  Eigen::MatrixXd out(da, da);
  for (int i = 0; i < da; ++i) {
    for (int j = 0; j < da; ++j) {
      out(i, j) = r.block(i * db, j * db, db, db).cwiseProduct(k).sum();
    }
  }
  return out;
}

Eigen::MatrixXd dense_pair_adjoint(const Eigen::MatrixXd& r, int da, int db,
                                   const Eigen::MatrixXd& h) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(db, db);
  for (int i = 0; i < da; ++i) {
    for (int j = 0; j < da; ++j) {
      out += h(i, j) * r.block(i * db, j * db, db, db);
    }
  }
  return out;
}

// Whitened second-moment data needed to apply the Hessian repeatedly:
// one-mode marginals, their traceless centerings G_a, and one two-mode
// coupling per unordered pair (dense when small, Kraus sums otherwise).
class HessianOperator {
 public:
  HessianOperator(const Dataset& x, const KronPoint& theta)
      : dims_(x.dims()) {
    const Dataset w = whiten(x, theta);
    trace_w_ = trace_rho(w);
    const int k = dims_.k();
    marginals_.reserve(k);
    centered_.reserve(k);
    for (int a = 0; a < k; ++a) {
      Eigen::MatrixXd m = partial_trace_one(w, a).mat();
      marginals_.push_back(m);
      m.diagonal().array() -= trace_w_ / dims_[a];
      centered_.push_back(std::sqrt(static_cast<double>(dims_[a])) * m);
    }
    for (int a = 0; a < k; ++a) {
      for (int b = a + 1; b < k; ++b) {
        Pair p;
        p.a = a;
        p.b = b;
        p.weight = std::sqrt(static_cast<double>(dims_[a]) *
                             static_cast<double>(dims_[b]));
        if (static_cast<std::int64_t>(dims_[a]) * dims_[b] <=
            kMaxDenseHessianPair) {
          p.dense = partial_trace_two(w, a, b).mat();
        } else {
          p.view = std::make_unique<CPMapView>(w, a, b);
        }
        pairs_.push_back(std::move(p));
      }
    }
  }

  const DimVector& dims() const { return dims_; }

  TangentVec apply(const TangentVec& h) const {
    const int k = dims_.k();
    const double h0 = h.h0();
    std::vector<Eigen::MatrixXd> out;
    out.reserve(k);
    double out0 = trace_w_ * h0;
    for (int a = 0; a < k; ++a) {
      const Eigen::MatrixXd& rho = marginals_[a];
      const Eigen::MatrixXd& ha = h.block(a);
      Eigen::MatrixXd block =
          0.5 * dims_[a] * (rho * ha + ha * rho) + h0 * centered_[a];
      out.push_back(std::move(block));
      out0 += centered_[a].cwiseProduct(ha).sum();
    }
    for (const Pair& p : pairs_) {
      if (p.view) {
        out[p.a] +=
            p.weight * p.view->apply(SymMat(h.block(p.b))).mat();
        out[p.b] +=
            p.weight * p.view->apply_adjoint(SymMat(h.block(p.a))).mat();
      } else {
        out[p.a] += p.weight *
                    dense_pair_apply(p.dense, dims_[p.a], dims_[p.b],
                                     h.block(p.b));
        out[p.b] += p.weight *
                    dense_pair_adjoint(p.dense, dims_[p.a], dims_[p.b],
                                       h.block(p.a));
      }
    }
    return TangentVec(dims_, out0, out);
  }

  /// Upper bound on the operator norm of the Hessian, from trace bounds on
  /// every term of its quadratic form.
  double shift_bound() const {
    double sum_d = 0.0, sum_sqrt = 0.0, sum_cross = 0.0;
    const int k = dims_.k();
    for (int a = 0; a < k; ++a) {
      sum_d += dims_[a];
      sum_sqrt += std::sqrt(static_cast<double>(dims_[a]));
      for (int b = 0; b < k; ++b) {
        if (b != a) {
          sum_cross += std::sqrt(static_cast<double>(dims_[a]) *
                                 static_cast<double>(dims_[b]));
        }
      }
    }
    return trace_w_ * (1.0 + sum_d + sum_cross + 4.0 * sum_sqrt);
  }

 private:
  struct Pair {
    int a = 0, b = 0;
    double weight = 0.0;
    Eigen::MatrixXd dense;
    std::unique_ptr<CPMapView> view;
  };

  DimVector dims_;
  double trace_w_ = 0.0;
  std::vector<Eigen::MatrixXd> marginals_;
  std::vector<Eigen::MatrixXd> centered_;
  std::vector<Pair> pairs_;
};

TangentVec axpby(double alpha, const TangentVec& u, double beta,
                 const TangentVec& v) {
  std::vector<Eigen::MatrixXd> blocks;
  blocks.reserve(u.dims().k());
  for (int a = 0; a < u.dims().k(); ++a) {
    blocks.push_back(alpha * u.block(a) + beta * v.block(a));
  }
  return TangentVec(u.dims(), alpha * u.h0() + beta * v.h0(), blocks);
}

TangentVec random_unit_tangent(const DimVector& dims, CounterRng& rng) {
  std::vector<Eigen::MatrixXd> blocks;
  blocks.reserve(dims.k());
  for (int a = 0; a < dims.k(); ++a) {
    Eigen::MatrixXd g(dims[a], dims[a]);
    for (int i = 0; i < dims[a]; ++i) {
      for (int j = 0; j < dims[a]; ++j) g(i, j) = rng.next_gaussian();
    }
    blocks.push_back(g);
  }
  TangentVec v(dims, rng.next_gaussian(), blocks);
  const double norm = v.norm();
  if (norm == 0.0) {
    throw NumericalFailure("hessian_min_eig: degenerate start vector");
  }
  return v.scaled(1.0 / norm);
}

}  // namespace

double f_value(const Dataset& x, const KronPoint& theta) {
  require_match(x, theta);
  const Dataset w = whiten(x, theta);
  const double total = static_cast<double>(x.dims().total());
  return trace_rho(w) - theta.log_det() / total;
}

double f_alpha_value(const Dataset& x, const KronPoint& theta,
                     const ObjectiveConfig& cfg) {
  require_match(x, theta);
  require_alpha(cfg.alpha);
  const Dataset w = whiten(x, theta);
  const double total = static_cast<double>(x.dims().total());
  const double data_term =
      (1.0 - cfg.alpha) * trace_rho(w) +
      cfg.alpha * (trace_rho(x) / total) * product_of_traces(theta);
  return data_term - theta.log_det() / total;
}

TangentVec gradient(const Dataset& x, const KronPoint& theta,
                    const ObjectiveConfig& cfg) {
  require_match(x, theta);
  require_alpha(cfg.alpha);
  const DimVector& dims = x.dims();
  const int k = dims.k();
  const double total = static_cast<double>(dims.total());
  const Dataset w = whiten(x, theta);
  const double trace_w = trace_rho(w);
  const double shrink = cfg.alpha * trace_rho(x) / total;

  std::vector<double> factor_traces(k);
  double trace_theta = 1.0;
  for (int a = 0; a < k; ++a) {
    factor_traces[a] = theta.factor(a).trace();
    trace_theta *= factor_traces[a];
  }

  std::vector<Eigen::MatrixXd> blocks;
  blocks.reserve(k);
  for (int a = 0; a < k; ++a) {
    const int da = dims[a];
    Eigen::MatrixXd block =
        (1.0 - cfg.alpha) * partial_trace_one(w, a).mat();
    block.diagonal().array() -= (1.0 - cfg.alpha) * trace_w / da;
    if (cfg.alpha > 0.0) {
      Eigen::MatrixXd reg = theta.factor(a).mat();
      reg.diagonal().array() -= factor_traces[a] / da;
      block += shrink * (trace_theta / factor_traces[a]) * reg;
    }
    blocks.push_back(std::sqrt(static_cast<double>(da)) * block);
  }
  const double h0 = (1.0 - cfg.alpha) * trace_w + shrink * trace_theta - 1.0;
  return TangentVec(dims, h0, blocks);
}

TangentVec hessian_apply(const Dataset& x, const KronPoint& theta,
                         const TangentVec& h) {
  require_match(x, theta);
  if (h.dims() != x.dims()) {
    throw InvalidInput("hessian_apply: tangent dimensions differ");
  }
  return HessianOperator(x, theta).apply(h);
}

double hessian_min_eig(const Dataset& x, const KronPoint& theta, double tol) {
  require_match(x, theta);
  if (!(tol > 0.0)) {
    throw InvalidInput("hessian_min_eig: tolerance must be positive");
  }
  const HessianOperator op(x, theta);
  const double shift = op.shift_bound();
  CounterRng rng(Seed{0x6b66686573736d6eull, 0}, rng_domain::kPowerIteration);
  TangentVec v = random_unit_tangent(x.dims(), rng);

  double rayleigh = 0.0;
  int stable = 0;
  for (int step = 0; step < kPowerIterMaxSteps; ++step) {
    const TangentVec shifted = axpby(shift, v, -1.0, op.apply(v));
    const double r = tangent_inner(v, shifted);
    if (step > 0 && std::abs(r - rayleigh) <= tol * std::max(1.0, std::abs(r))) {
      if (++stable >= 3) return shift - r;
    } else {
      stable = 0;
    }
    rayleigh = r;
    const double norm = shifted.norm();
    if (norm == 0.0) return shift - r;
    v = shifted.scaled(1.0 / norm);
  }
  throw NumericalFailure("hessian_min_eig: power iteration did not settle");
}

}  // namespace kronfit
