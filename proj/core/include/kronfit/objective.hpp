#pragma once

#include "kronfit/cp_map.hpp"
#include "kronfit/dataset.hpp"
#include "kronfit/kron.hpp"

namespace kronfit {

/// Two-mode marginals are realized densely in Hessian products only while
/// d_a * d_b stays below this; larger pairs fall back to Kraus sums.
inline constexpr std::int64_t kMaxDenseHessianPair = 512;

/// Shrinkage weight for the regularized objective; alpha = 0 is the pure
/// negative log-likelihood.
struct ObjectiveConfig {
  double alpha = 0.0;
};

/// f_x(Theta) = (1/nD) sum_i x_i^T Theta x_i − (1/D) log det Theta.
double f_value(const Dataset& x, const KronPoint& theta);

/// Shrunk objective f^alpha: the second-moment matrix rho is replaced by
/// (1−alpha)·rho + alpha·(tr rho/D)·I.  Reduces to f_value at alpha = 0.
double f_alpha_value(const Dataset& x, const KronPoint& theta,
                     const ObjectiveConfig& cfg);

/// Riemannian gradient of f^alpha at theta (alpha = 0 gives the MLE
/// objective's gradient).  Factor blocks carry the sqrt(d_a) scaling of
/// the tangent-space convention.
TangentVec gradient(const Dataset& x, const KronPoint& theta,
                    const ObjectiveConfig& cfg);

/// Riemannian Hessian-vector product of f (alpha = 0 only) at theta.
TangentVec hessian_apply(const Dataset& x, const KronPoint& theta,
                         const TangentVec& h);

/// Smallest eigenvalue of the Hessian of f at theta on the tangent space,
/// via shifted power iteration (shift from marginal trace bounds).
double hessian_min_eig(const Dataset& x, const KronPoint& theta,
                       double tol = kPowerIterTolerance);

}  // namespace kronfit
