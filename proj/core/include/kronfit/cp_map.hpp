#pragma once

#include <utility>
#include <vector>

#include "kronfit/dataset.hpp"

namespace kronfit {

/// Default relative tolerance for iterative spectral probes.
inline constexpr double kPowerIterTolerance = 1e-10;
/// Iteration cap for power iterations before NumericalFailure.
inline constexpr int kPowerIterMaxSteps = 20000;
/// Dense transfer-matrix SVD allowed while d_a^2 * d_b^2 stays below this.
inline constexpr std::int64_t kMaxTransferEntries = 1000000;

/// The completely positive map Phi = Phi^(ab) induced by a dataset on an
/// ordered mode pair (a, b): Phi(K) = (1/nD) sum_s A_s K A_s^T over the
/// d_a x d_b Kraus slices A_s of the samples.  Slices are gathered at
/// construction; the view is immutable afterwards.
class CPMapView {
 public:
  CPMapView(const Dataset& x, int a, int b);

  int mode_a() const { return a_; }
  int mode_b() const { return b_; }
  int dim_a() const { return da_; }
  int dim_b() const { return db_; }
  std::int64_t kraus_count() const {
    return static_cast<std::int64_t>(kraus_.size());
  }

  /// Phi(K); K must be d_b x d_b symmetric.
  SymMat apply(const SymMat& k) const;

  /// Adjoint Phi*(H); H must be d_a x d_a symmetric.
  SymMat apply_adjoint(const SymMat& h) const;

  /// tr Phi(I_{d_b}) = (1/nD) sum_s ||A_s||_F^2 (equals tr rho).
  double trace_image() const { return trace_image_; }

  /// One-mode marginals rho^(a), rho^(b) of the underlying dataset.
  const SymMat& marginal_a() const { return marginal_a_; }
  const SymMat& marginal_b() const { return marginal_b_; }

  /// Raw (unscaled) Kraus slices and the 1/(nD) normalization they carry.
  const std::vector<Eigen::MatrixXd>& kraus_slices() const { return kraus_; }
  double normalization() const { return scale_; }

 private:
  int a_, b_;
  int da_, db_;
  double scale_;  // 1/(nD)
  double trace_image_;
  std::vector<Eigen::MatrixXd> kraus_;
  SymMat marginal_a_;
  SymMat marginal_b_;
};

/// Smallest (eps_a, eps_b) such that the marginals satisfy the
/// double-balancedness inequalities: eps_a = d_a·||rho^(a)/tr rho − I/d_a||_op
/// and the b-mode analogue.
std::pair<double, double> balance_deficit(const CPMapView& phi);

/// ||Phi||_0: the largest ||Phi(H)||_F over unit-Frobenius traceless
/// symmetric H, via power iteration on the traceless-projected Phi*Phi.
double expansion_norm(const CPMapView& phi, double tol = kPowerIterTolerance);

/// Spectral gap gamma = 1 − sigma_2 · sqrt(d_a d_b) / tr Phi(I), with
/// sigma_2 the second singular value of Phi as a linear map on matrices
/// (dense transfer-matrix SVD; small dims only).
double spectral_gap(const CPMapView& phi);

}  // namespace kronfit
