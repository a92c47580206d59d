#pragma once

#include <utility>
#include <vector>

#include "kronfit/kron.hpp"
#include "kronfit/sym_matrix.hpp"

namespace kronfit {

/// Equivariant error measures of an estimate against a reference point.
/// Per-factor entries are computed on the balanced representatives; the
/// full-matrix values depend only on the Kronecker products.
struct ErrorReport {
  std::vector<double> factor_frob;  // relative Frobenius error per factor
  std::vector<double> factor_op;    // relative spectral error per factor
  double full_frob = 0.0;
  double full_op = 0.0;
  double geodesic = 0.0;
  double fisher_rao = 0.0;
  double kl = 0.0;  // kl_gaussian(truth, est)
};

/// Relative Frobenius error ||I - b^{-1/2} a b^{-1/2}||_F.
double rel_frob(const PDMat& a, const PDMat& b);

/// Relative spectral error ||I - b^{-1/2} a b^{-1/2}||_op.
double rel_op(const PDMat& a, const PDMat& b);

/// Factor-wise and full-matrix errors of `est` against `truth`.  Inputs
/// are rebalanced if needed; full-matrix norms use the factorized
/// expansion ||I - (x)M_a||_F^2 = D - 2 prod tr M_a + prod ||M_a||_F^2.
ErrorReport factor_errors(const KronPoint& est, const KronPoint& truth);

/// KL divergence between the centered Gaussians with precisions theta1 and
/// theta2: (tr theta1^{-1} theta2 - log det theta1^{-1} theta2 - D) / 2,
/// evaluated factorwise and clamped at zero.
double kl_gaussian(const KronPoint& theta1, const KronPoint& theta2);

/// Fisher-Rao distance sqrt(D/2) * geodesic_distance.
double fisher_rao(const KronPoint& theta1, const KronPoint& theta2);

/// Total-variation bracket {0.01 * D_F, 1.5 * D_F} from the full-matrix
/// relative Frobenius error; a valid enclosure only in the local regime.
std::pair<double, double> tv_bounds(const KronPoint& theta1,
                                    const KronPoint& theta2);

}  // namespace kronfit
