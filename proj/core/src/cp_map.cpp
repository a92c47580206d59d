#include "kronfit/cp_map.hpp"

#include <cmath>

#include <Eigen/SVD>

namespace kronfit {

namespace {

double op_norm(const SymMat& m) {
  const SymEig eig = sym_eig(m);
  return std::max(std::abs(eig.values(0)),
                  std::abs(eig.values(eig.values.size() - 1)));
}

// Remove the trace component of a symmetric matrix (projection onto the
// traceless subspace).
void project_traceless(Eigen::MatrixXd& m) {
  m.diagonal().array() -= m.trace() / static_cast<double>(m.rows());
}

}  // namespace

CPMapView::CPMapView(const Dataset& x, int a, int b)
    : a_(a),
      b_(b),
      marginal_a_(1),
      marginal_b_(1) {
  const DimVector& dims = x.dims();
  if (a < 0 || a >= dims.k() || b < 0 || b >= dims.k()) {
    throw InvalidInput("CPMapView: mode index out of range");
  }
  if (a == b) {
    throw InvalidInput("CPMapView: modes must differ");
  }
  da_ = dims[a];
  db_ = dims[b];
  scale_ = 1.0 / (static_cast<double>(x.n()) *
                  static_cast<double>(x.total_dim()));

  const int u = std::min(a, b), v = std::max(a, b);
  const std::int64_t du = dims[u], dv = dims[v];
  std::int64_t pre = 1, mid = 1, suf = 1;
  for (int m = 0; m < u; ++m) pre *= dims[m];
  for (int m = u + 1; m < v; ++m) mid *= dims[m];
  for (int m = v + 1; m < dims.k(); ++m) suf *= dims[m];

  kraus_.reserve(static_cast<size_t>(x.n()) *
                 static_cast<size_t>(pre * mid * suf));
  trace_image_ = 0.0;
  for (int i = 0; i < x.n(); ++i) {
    const double* base = x.row(i);
    for (std::int64_t p = 0; p < pre; ++p) {
      for (std::int64_t q = 0; q < mid; ++q) {
        for (std::int64_t s = 0; s < suf; ++s) {
          Eigen::MatrixXd slice(da_, db_);
          for (std::int64_t iu = 0; iu < du; ++iu) {
            for (std::int64_t iv = 0; iv < dv; ++iv) {
              const double value =
                  base[(((p * du + iu) * mid + q) * dv + iv) * suf + s];
              if (a == u) {
                slice(iu, iv) = value;
              } else {
                slice(iv, iu) = value;
              }
            }
          }
          trace_image_ += slice.squaredNorm();
          kraus_.push_back(std::move(slice));
        }
      }
    }
  }
  trace_image_ *= scale_;
  marginal_a_ = partial_trace_one(x, a);
  marginal_b_ = partial_trace_one(x, b);
}

SymMat CPMapView::apply(const SymMat& k) const {
  if (k.dim() != db_) {
    throw InvalidInput("CPMapView::apply: input must be d_b x d_b");
  }
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(da_, da_);
  for (const Eigen::MatrixXd& slice : kraus_) {
    out.noalias() += slice * k.mat() * slice.transpose();
  }
  return SymMat(scale_ * out);
}

SymMat CPMapView::apply_adjoint(const SymMat& h) const {
  if (h.dim() != da_) {
    throw InvalidInput("CPMapView::apply_adjoint: input must be d_a x d_a");
  }
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(db_, db_);
  for (const Eigen::MatrixXd& slice : kraus_) {
    out.noalias() += slice.transpose() * h.mat() * slice;
  }
  return SymMat(scale_ * out);
}

std::pair<double, double> balance_deficit(const CPMapView& phi) {
  const double tr = phi.trace_image();
  if (tr <= 0.0) {
    throw DegenerateInput("balance_deficit: dataset has zero second moment");
  }
  const int da = phi.dim_a(), db = phi.dim_b();
  Eigen::MatrixXd dev_a = phi.marginal_a().mat() / tr;
  dev_a.diagonal().array() -= 1.0 / da;
  Eigen::MatrixXd dev_b = phi.marginal_b().mat() / tr;
  dev_b.diagonal().array() -= 1.0 / db;
  return {da * op_norm(SymMat(dev_a)), db * op_norm(SymMat(dev_b))};
}

double expansion_norm(const CPMapView& phi, double tol) {
  if (!(tol > 0.0)) {
    throw InvalidInput("expansion_norm: tolerance must be positive");
  }
  const int db = phi.dim_b();
  // The traceless symmetric space is trivial in dimension one.
  if (db == 1) {
    return 0.0;
  }
  CounterRng rng(Seed{0x657870616e64ull, 0}, rng_domain::kPowerIteration);
  Eigen::MatrixXd h(db, db);
  for (int i = 0; i < db; ++i) {
    for (int j = 0; j <= i; ++j) {
      const double g = rng.next_gaussian();
      h(i, j) = g;
      h(j, i) = g;
    }
  }
  project_traceless(h);
  double norm = h.norm();
  if (norm == 0.0) {
    return 0.0;
  }
  h /= norm;

  double rayleigh = 0.0;
  for (int step = 0; step < kPowerIterMaxSteps; ++step) {
    const SymMat image = phi.apply(SymMat(h));
    Eigen::MatrixXd next = phi.apply_adjoint(image).mat();
    project_traceless(next);
    const double next_rayleigh = (h.array() * next.array()).sum();
    const double next_norm = next.norm();
    if (next_norm <= 1e-300) {
      // Phi annihilates the current iterate (and, from a random start,
      // effectively the whole traceless space).
      return 0.0;
    }
    h = next / next_norm;
    if (step > 0 && std::abs(next_rayleigh - rayleigh) <=
                        tol * std::max(1.0, std::abs(next_rayleigh))) {
      return std::sqrt(std::max(next_rayleigh, 0.0));
    }
    rayleigh = next_rayleigh;
  }
  throw NumericalFailure("expansion_norm: power iteration did not converge");
}

double spectral_gap(const CPMapView& phi) {
  const std::int64_t da = phi.dim_a(), db = phi.dim_b();
  if (da * da * db * db > kMaxTransferEntries) {
    throw TooLarge("spectral_gap: transfer matrix exceeds dense limit");
  }
  const double tr = phi.trace_image();
  if (tr <= 0.0) {
    throw DegenerateInput("spectral_gap: dataset has zero second moment");
  }
  // Transfer matrix of Phi in row-major vec coordinates:
  // M[(i·d_a+j), (l·d_b+m)] = (1/nD) sum_s A_s[i,l]·A_s[j,m],
  // i.e. M = (1/nD) sum_s A_s kron A_s.
  Eigen::MatrixXd transfer = Eigen::MatrixXd::Zero(da * da, db * db);
  for (const Eigen::MatrixXd& slice : phi.kraus_slices()) {
    for (std::int64_t i = 0; i < da; ++i) {
      for (std::int64_t l = 0; l < db; ++l) {
        transfer.block(i * da, l * db, da, db) += slice(i, l) * slice;
      }
    }
  }
  transfer *= phi.normalization();
  Eigen::BDCSVD<Eigen::MatrixXd> svd(transfer);
  const Eigen::VectorXd& sigma = svd.singularValues();
  const double sigma2 = sigma.size() >= 2 ? sigma(1) : 0.0;
  return 1.0 - sigma2 * std::sqrt(static_cast<double>(da * db)) / tr;
}

}  // namespace kronfit
