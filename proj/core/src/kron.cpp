#include "kronfit/kron.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace kronfit {

namespace {

constexpr double kBalancedTolerance = 1e-10;

void require_same_dims(const DimVector& a, const DimVector& b,
                       const char* where) {
  if (a != b) {
    throw InvalidInput(std::string(where) + ": dimension mismatch");
  }
}

// Per-factor (1/d_a) log det, whose spread across factors measures
// imbalance on the log scale.
std::vector<double> normalized_log_dets(const std::vector<PDMat>& factors,
                                        const DimVector& dims) {
  std::vector<double> out(factors.size());
  for (size_t a = 0; a < factors.size(); ++a) {
    out[a] = factors[a].log_det() / dims[static_cast<int>(a)];
  }
  return out;
}

bool factors_balanced(const std::vector<PDMat>& factors,
                      const DimVector& dims) {
  const std::vector<double> nld = normalized_log_dets(factors, dims);
  // (det Theta_a)^{1/d_a} equal across a to 1e-10 relative is equivalent
  // to the normalized log dets agreeing to ~1e-10 absolute.
  double lo = nld[0], hi = nld[0];
  for (double v : nld) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return (hi - lo) <= kBalancedTolerance * (1.0 + std::abs(hi) + std::abs(lo));
}

}  // namespace

DimVector::DimVector(std::vector<int> dims) : dims_(std::move(dims)) {
  if (dims_.empty()) {
    throw InvalidInput("DimVector: need at least one mode");
  }
  total_ = 1;
  for (int d : dims_) {
    if (d < 1) {
      throw InvalidInput("DimVector: every dimension must be >= 1");
    }
    total_ *= d;
    if (total_ > kMaxTotalDim) {
      throw InvalidInput("DimVector: total dimension exceeds 2^31");
    }
  }
}

int DimVector::d_max() const {
  int m = dims_[0];
  for (int d : dims_) m = std::max(m, d);
  return m;
}

int DimVector::d_min() const {
  int m = dims_[0];
  for (int d : dims_) m = std::min(m, d);
  return m;
}

KronPoint::KronPoint(DimVector dims, std::vector<PDMat> factors, bool balanced)
    : dims_(std::move(dims)), factors_(std::move(factors)), balanced_(balanced) {}

KronPoint KronPoint::from_factors(std::vector<PDMat> factors) {
  if (factors.empty()) {
    throw InvalidInput("KronPoint: need at least one factor");
  }
  std::vector<int> dims;
  dims.reserve(factors.size());
  for (const PDMat& f : factors) dims.push_back(f.dim());
  DimVector dv(std::move(dims));
  const bool balanced = factors_balanced(factors, dv);
  return KronPoint(std::move(dv), std::move(factors), balanced);
}

KronPoint KronPoint::identity(const DimVector& dims) {
  std::vector<PDMat> factors;
  factors.reserve(dims.k());
  for (int a = 0; a < dims.k(); ++a) {
    factors.push_back(PDMat::identity(dims[a]));
  }
  return KronPoint(dims, std::move(factors), true);
}

double KronPoint::log_det() const {
  double total = 0.0;
  for (int a = 0; a < k(); ++a) {
    total += static_cast<double>(dims_.total() / dims_[a]) *
             factors_[a].log_det();
  }
  return total;
}

KronPoint balance(const std::vector<PDMat>& factors) {
  return balance(KronPoint::from_factors(factors));
}

KronPoint balance(const KronPoint& theta) {
  const DimVector& dims = theta.dims();
  std::vector<double> nld(dims.k());
  double mean = 0.0;
  for (int a = 0; a < dims.k(); ++a) {
    nld[a] = theta.factor(a).log_det() / dims[a];
    mean += nld[a];
  }
  mean /= dims.k();
  // Scale factor s_a = exp(mean - nld[a]) has product one across a, so the
  // Kronecker product is preserved exactly up to rounding.
  std::vector<PDMat> scaled;
  scaled.reserve(dims.k());
  for (int a = 0; a < dims.k(); ++a) {
    scaled.push_back(theta.factor(a).scaled(std::exp(mean - nld[a])));
  }
  return KronPoint(dims, std::move(scaled), true);
}

TangentVec::TangentVec(const DimVector& dims, double h0,
                       const std::vector<Eigen::MatrixXd>& blocks)
    : dims_(dims), h0_(h0) {
  if (!std::isfinite(h0)) {
    throw InvalidInput("TangentVec: scalar part must be finite");
  }
  if (static_cast<int>(blocks.size()) != dims.k()) {
    throw InvalidInput("TangentVec: need one block per mode");
  }
  blocks_.reserve(blocks.size());
  for (int a = 0; a < dims.k(); ++a) {
    const Eigen::MatrixXd& b = blocks[a];
    if (b.rows() != dims[a] || b.cols() != dims[a]) {
      throw InvalidInput("TangentVec: block dimension mismatch");
    }
    if (!b.allFinite()) {
      throw InvalidInput("TangentVec: block entries must be finite");
    }
    Eigen::MatrixXd sym = 0.5 * (b + b.transpose());
    sym.diagonal().array() -= sym.trace() / dims[a];
    blocks_.push_back(std::move(sym));
  }
}

TangentVec TangentVec::zero(const DimVector& dims) {
  std::vector<Eigen::MatrixXd> blocks;
  blocks.reserve(dims.k());
  for (int a = 0; a < dims.k(); ++a) {
    blocks.push_back(Eigen::MatrixXd::Zero(dims[a], dims[a]));
  }
  return TangentVec(dims, 0.0, blocks);
}

double TangentVec::norm() const { return std::sqrt(tangent_inner(*this, *this)); }

TangentVec TangentVec::scaled(double c) const {
  std::vector<Eigen::MatrixXd> blocks;
  blocks.reserve(blocks_.size());
  for (const Eigen::MatrixXd& b : blocks_) blocks.push_back(c * b);
  return TangentVec(dims_, c * h0_, blocks);
}

double tangent_inner(const TangentVec& h, const TangentVec& k) {
  require_same_dims(h.dims(), k.dims(), "tangent_inner");
  double total = h.h0() * k.h0();
  for (int a = 0; a < h.dims().k(); ++a) {
    total += (h.block(a).array() * k.block(a).array()).sum();
  }
  return total;
}

KronPoint exp_at(const KronPoint& theta, const TangentVec& h) {
  require_same_dims(theta.dims(), h.dims(), "exp_at");
  const DimVector& dims = theta.dims();
  const double scalar = std::exp(h.h0() / dims.k());
  std::vector<PDMat> factors;
  factors.reserve(dims.k());
  for (int a = 0; a < dims.k(); ++a) {
    const Eigen::MatrixXd root = theta.factor(a).fn(SpectralFn::kSqrt).mat();
    const Eigen::MatrixXd exp_block =
        sym_exp(SymMat(std::sqrt(static_cast<double>(dims[a])) * h.block(a)))
            .mat();
    factors.push_back(PDMat(SymMat(scalar * root * exp_block * root)));
  }
  return balance(KronPoint::from_factors(std::move(factors)));
}

namespace {

// Eigenvalues of log(Theta_a^{-1/2} Theta'_a Theta_a^{-1/2}) per factor.
std::vector<Eigen::VectorXd> whitened_log_spectra(const KronPoint& a,
                                                  const KronPoint& b) {
  std::vector<Eigen::VectorXd> spectra;
  spectra.reserve(a.k());
  for (int m = 0; m < a.k(); ++m) {
    const Eigen::MatrixXd w = a.factor(m).fn(SpectralFn::kInvSqrt).mat();
    const SymMat ratio(w * b.factor(m).mat() * w);
    const PDMat pd(ratio);  // NotPositiveDefinite would indicate breakdown
    spectra.push_back(pd.eig().values.array().log().matrix());
  }
  return spectra;
}

}  // namespace

double geodesic_distance(const KronPoint& a, const KronPoint& b) {
  require_same_dims(a.dims(), b.dims(), "geodesic_distance");
  const DimVector& dims = a.dims();
  const std::vector<Eigen::VectorXd> spectra = whitened_log_spectra(a, b);
  // || sum_a lifted log M_a ||_F^2 = sum_a (D/d_a)||log M_a||_F^2
  //   + sum_{a != b} (D/(d_a d_b)) tr(log M_a) tr(log M_b); divide by D.
  double sq = 0.0;
  double trace_sum_sq = 0.0;
  for (int m = 0; m < dims.k(); ++m) {
    const double tr = spectra[m].sum();
    sq += spectra[m].squaredNorm() / dims[m] -
          tr * tr / (static_cast<double>(dims[m]) * dims[m]);
    trace_sum_sq += tr / dims[m];
  }
  sq += trace_sum_sq * trace_sum_sq;
  return std::sqrt(std::max(sq, 0.0));
}

double d_op_distance(const KronPoint& a, const KronPoint& b) {
  require_same_dims(a.dims(), b.dims(), "d_op_distance");
  const std::vector<Eigen::VectorXd> spectra = whitened_log_spectra(a, b);
  // Eigenvalues of the lifted sum are sums of one per-factor eigenvalue
  // each; extremes are attained by summing per-factor extremes.
  double max_sum = 0.0;
  double min_sum = 0.0;
  for (const Eigen::VectorXd& s : spectra) {
    max_sum += s.maxCoeff();
    min_sum += s.minCoeff();
  }
  return std::max(std::abs(max_sum), std::abs(min_sum));
}

PDMat materialize(const KronPoint& theta) {
  const DimVector& dims = theta.dims();
  if (dims.total() > kMaxMaterializeDim) {
    throw TooLarge("materialize: total dimension exceeds dense limit");
  }
  Eigen::MatrixXd full = Eigen::MatrixXd::Identity(1, 1);
  for (int a = 0; a < dims.k(); ++a) {
    const Eigen::MatrixXd& f = theta.factor(a).mat();
    Eigen::MatrixXd next(full.rows() * f.rows(), full.cols() * f.cols());
    for (Eigen::Index i = 0; i < full.rows(); ++i) {
      for (Eigen::Index j = 0; j < full.cols(); ++j) {
        next.block(i * f.rows(), j * f.cols(), f.rows(), f.cols()) =
            full(i, j) * f;
      }
    }
    full = std::move(next);
  }
  return PDMat(SymMat(full));
}

}  // namespace kronfit
