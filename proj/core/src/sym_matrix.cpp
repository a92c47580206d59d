#include "kronfit/sym_matrix.hpp"

#include <cmath>
#include <utility>

namespace kronfit {

SymMat::SymMat(int dim) {
  if (dim < 1) {
    throw InvalidInput("SymMat: dimension must be >= 1");
  }
  mat_ = Eigen::MatrixXd::Zero(dim, dim);
}

SymMat::SymMat(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols() || m.rows() < 1) {
    throw InvalidInput("SymMat: matrix must be square and nonempty");
  }
  if (!m.allFinite()) {
    throw InvalidInput("SymMat: entries must be finite");
  }
  mat_ = 0.5 * (m + m.transpose());
}

SymMat SymMat::identity(int dim) {
  if (dim < 1) {
    throw InvalidInput("SymMat::identity: dimension must be >= 1");
  }
  return SymMat(Eigen::MatrixXd::Identity(dim, dim));
}

SymEig sym_eig(const SymMat& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m.mat());
  if (solver.info() != Eigen::Success) {
    throw NumericalFailure("sym_eig: eigendecomposition did not converge");
  }
  return SymEig{solver.eigenvalues(), solver.eigenvectors()};
}

PDMat::PDMat(const SymMat& m) : base_(m), eig_(validated_eig(m)) {}

PDMat::PDMat(SymMat base, SymEig eig)
    : base_(std::move(base)), eig_(std::move(eig)) {}

SymEig PDMat::validated_eig(const SymMat& m) {
  SymEig eig = sym_eig(m);
  const double lambda_min = eig.values(0);
  const double lambda_max = eig.values(eig.values.size() - 1);
  if (lambda_max <= 0.0 || lambda_min <= kPdTolerance * lambda_max) {
    throw NotPositiveDefinite("PDMat: eigenvalue below positivity tolerance");
  }
  return eig;
}

PDMat PDMat::identity(int dim) {
  SymMat base = SymMat::identity(dim);
  SymEig eig{Eigen::VectorXd::Ones(dim), Eigen::MatrixXd::Identity(dim, dim)};
  return PDMat(std::move(base), std::move(eig));
}

double PDMat::log_det() const { return eig_.values.array().log().sum(); }

PDMat PDMat::scaled(double c) const {
  if (!(c > 0.0) || !std::isfinite(c)) {
    throw InvalidInput("PDMat::scaled: factor must be positive and finite");
  }
  SymMat base(c * mat());
  SymEig eig{c * eig_.values, eig_.vectors};
  return PDMat(std::move(base), std::move(eig));
}

SymMat PDMat::fn(SpectralFn f) const {
  Eigen::ArrayXd lambda = eig_.values.array();
  switch (f) {
    case SpectralFn::kSqrt:
      lambda = lambda.sqrt();
      break;
    case SpectralFn::kInvSqrt:
      lambda = lambda.rsqrt();
      break;
    case SpectralFn::kLog:
      lambda = lambda.log();
      break;
    case SpectralFn::kInverse:
      lambda = lambda.inverse();
      break;
  }
  return SymMat(eig_.vectors * lambda.matrix().asDiagonal() *
                eig_.vectors.transpose());
}

SymMat pd_fn(const PDMat& m, SpectralFn f) { return m.fn(f); }

PDMat sym_exp(const SymMat& m) {
  SymEig eig = sym_eig(m);
  const Eigen::VectorXd exp_values = eig.values.array().exp().matrix();
  return PDMat(SymMat(eig.vectors * exp_values.asDiagonal() *
                      eig.vectors.transpose()));
}

double cond_number(const PDMat& m) {
  const Eigen::VectorXd& v = m.eig().values;
  return v(v.size() - 1) / v(0);
}

}  // namespace kronfit
