#include "kronfit/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "kronfit/errors.hpp"

namespace kronfit {

namespace {

void require_same_dim(const PDMat& a, const PDMat& b, const char* where) {
  if (a.dim() != b.dim()) {
    throw InvalidInput(std::string(where) + ": dimension mismatch");
  }
}

void require_same_dims(const KronPoint& a, const KronPoint& b,
                       const char* where) {
  if (a.dims() != b.dims()) {
    throw InvalidInput(std::string(where) + ": dimension mismatch");
  }
}

/// Spectrum of b^{-1/2} a b^{-1/2} (all strictly positive).
Eigen::VectorXd relative_spectrum(const PDMat& a, const PDMat& b) {
  const Eigen::MatrixXd w = b.fn(SpectralFn::kInvSqrt).mat();
  const SymEig eig = sym_eig(SymMat((w * a.mat() * w).eval()));
  return eig.values;
}

struct FullRelative {
  double frob = 0.0;
  double op = 0.0;
};

/// Full-matrix relative errors of (x)M_a with M_a = truth_a^{-1/2} est_a
/// truth_a^{-1/2}, from per-factor spectra only.
FullRelative full_relative_errors(const KronPoint& est,
                                  const KronPoint& truth) {
  const int k = est.k();
  const double total = static_cast<double>(est.dims().total());
  double prod_trace = 1.0;
  double prod_sq = 1.0;
  double prod_max = 1.0;
  double prod_min = 1.0;
  for (int a = 0; a < k; ++a) {
    const Eigen::VectorXd lambda =
        relative_spectrum(est.factor(a), truth.factor(a));
    prod_trace *= lambda.sum();
    prod_sq *= lambda.squaredNorm();
    prod_max *= lambda(lambda.size() - 1);
    prod_min *= lambda(0);
  }
  FullRelative out;
  out.frob = std::sqrt(std::max(total - 2.0 * prod_trace + prod_sq, 0.0));
  out.op = std::max(std::abs(1.0 - prod_max), std::abs(1.0 - prod_min));
  return out;
}

}  // namespace

double rel_frob(const PDMat& a, const PDMat& b) {
  require_same_dim(a, b, "rel_frob");
  const Eigen::VectorXd lambda = relative_spectrum(a, b);
  return (lambda.array() - 1.0).matrix().norm();
}

double rel_op(const PDMat& a, const PDMat& b) {
  require_same_dim(a, b, "rel_op");
  const Eigen::VectorXd lambda = relative_spectrum(a, b);
  return (lambda.array() - 1.0).abs().maxCoeff();
}

ErrorReport factor_errors(const KronPoint& est, const KronPoint& truth) {
  require_same_dims(est, truth, "factor_errors");
  const KronPoint e = est.is_balanced() ? est : balance(est);
  const KronPoint t = truth.is_balanced() ? truth : balance(truth);
  const int k = e.k();

  ErrorReport report;
  report.factor_frob.reserve(k);
  report.factor_op.reserve(k);
  for (int a = 0; a < k; ++a) {
    const Eigen::VectorXd lambda = relative_spectrum(e.factor(a), t.factor(a));
    report.factor_frob.push_back((lambda.array() - 1.0).matrix().norm());
    report.factor_op.push_back((lambda.array() - 1.0).abs().maxCoeff());
  }
  const FullRelative full = full_relative_errors(e, t);
  report.full_frob = full.frob;
  report.full_op = full.op;
  report.geodesic = geodesic_distance(e, t);
  report.fisher_rao = fisher_rao(e, t);
  report.kl = kl_gaussian(t, e);
  return report;
}

double kl_gaussian(const KronPoint& theta1, const KronPoint& theta2) {
  require_same_dims(theta1, theta2, "kl_gaussian");
  double prod_trace = 1.0;
  for (int a = 0; a < theta1.k(); ++a) {
    prod_trace *= theta1.factor(a)
                      .fn(SpectralFn::kInverse)
                      .mat()
                      .cwiseProduct(theta2.factor(a).mat())
                      .sum();
  }
  const double total = static_cast<double>(theta1.dims().total());
  const double log_det_ratio = theta2.log_det() - theta1.log_det();
  return std::max(0.5 * (prod_trace - log_det_ratio - total), 0.0);
}

double fisher_rao(const KronPoint& theta1, const KronPoint& theta2) {
  require_same_dims(theta1, theta2, "fisher_rao");
  const double total = static_cast<double>(theta1.dims().total());
  return std::sqrt(total / 2.0) * geodesic_distance(theta1, theta2);
}

std::pair<double, double> tv_bounds(const KronPoint& theta1,
                                    const KronPoint& theta2) {
  require_same_dims(theta1, theta2, "tv_bounds");
  const double frob = full_relative_errors(theta1, theta2).frob;
  return {0.01 * frob, 1.5 * frob};
}

}  // namespace kronfit
