#pragma once

#include <Eigen/Dense>

#include "kronfit/errors.hpp"

namespace kronfit {

/// Eigenvalue ratio below which a symmetric matrix is classified as not
/// positive definite (machine-epsilon-scale rank decision).
inline constexpr double kPdTolerance = 1e-12;

/// Spectral functions applied through the eigendecomposition of a PD matrix.
enum class SpectralFn { kSqrt, kInvSqrt, kLog, kInverse };

/// Dense real symmetric matrix.  Construction symmetrizes via (M + Mᵀ)/2
/// and rejects non-finite entries, so downstream spectral code can assume
/// exact symmetry.
class SymMat {
 public:
  /// Zero matrix of the given dimension.
  explicit SymMat(int dim);

  /// Symmetrize and store; requires a square matrix with finite entries.
  explicit SymMat(const Eigen::MatrixXd& m);

  static SymMat identity(int dim);

  int dim() const { return static_cast<int>(mat_.rows()); }
  const Eigen::MatrixXd& mat() const { return mat_; }

  double trace() const { return mat_.trace(); }
  double frobenius_norm() const { return mat_.norm(); }

 private:
  Eigen::MatrixXd mat_;
};

/// Result of a symmetric eigendecomposition: eigenvalues ascending,
/// eigenvectors orthonormal in matching column order.
struct SymEig {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
};

/// Eigendecomposition of a symmetric matrix; values ascending.
SymEig sym_eig(const SymMat& m);

/// Positive-definite matrix with its eigendecomposition cached.  The
/// constructor enforces lambda_min > kPdTolerance · lambda_max.
class PDMat {
 public:
  /// Validate and decompose a symmetric matrix.
  explicit PDMat(const SymMat& m);

  static PDMat identity(int dim);

  int dim() const { return base_.dim(); }
  const SymMat& base() const { return base_; }
  const Eigen::MatrixXd& mat() const { return base_.mat(); }
  const SymEig& eig() const { return eig_; }

  double trace() const { return base_.trace(); }
  double log_det() const;

  /// Same matrix scaled by c > 0 (eigendecomposition reused).
  PDMat scaled(double c) const;

  /// Spectral function through the cached eigendecomposition.
  SymMat fn(SpectralFn f) const;

 private:
  PDMat(SymMat base, SymEig eig);
  static SymEig validated_eig(const SymMat& m);

  SymMat base_;
  SymEig eig_;
};

/// Spectral function on a PD matrix (sqrt, inv_sqrt, log, inverse).
SymMat pd_fn(const PDMat& m, SpectralFn f);

/// Matrix exponential of a symmetric matrix; always positive definite.
PDMat sym_exp(const SymMat& m);

/// Condition number lambda_max / lambda_min of a PD matrix.
double cond_number(const PDMat& m);

}  // namespace kronfit
