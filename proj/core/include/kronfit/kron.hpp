#pragma once

#include <cstdint>
#include <vector>

#include "kronfit/sym_matrix.hpp"

namespace kronfit {

/// Largest total dimension D = prod d_a accepted anywhere.
inline constexpr std::int64_t kMaxTotalDim = std::int64_t{1} << 31;

/// Largest D for which dense D x D realization is permitted.
inline constexpr std::int64_t kMaxMaterializeDim = 4096;

/// Mode dimensions (d_1, ..., d_k), k >= 1, all d_a >= 1, with the product
/// D checked against overflow at construction.
class DimVector {
 public:
  explicit DimVector(std::vector<int> dims);

  int k() const { return static_cast<int>(dims_.size()); }
  std::int64_t total() const { return total_; }
  int operator[](int a) const { return dims_[a]; }
  const std::vector<int>& dims() const { return dims_; }

  int d_max() const;
  int d_min() const;

  bool operator==(const DimVector& other) const { return dims_ == other.dims_; }
  bool operator!=(const DimVector& other) const { return !(*this == other); }

 private:
  std::vector<int> dims_;
  std::int64_t total_;
};

/// Point Theta = Theta_1 (x) ... (x) Theta_k of the manifold of
/// Kronecker-factored precision matrices, stored as k PD factors.  The
/// factors are only identified up to scalars with product one; the
/// balanced representative fixes (det Theta_a)^{1/d_a} equal across a.
class KronPoint {
 public:
  /// Wrap factors as given; the balanced flag records whether they already
  /// satisfy the balancing convention to 1e-10 relative.
  static KronPoint from_factors(std::vector<PDMat> factors);

  static KronPoint identity(const DimVector& dims);

  const DimVector& dims() const { return dims_; }
  int k() const { return dims_.k(); }
  const PDMat& factor(int a) const { return factors_[a]; }
  const std::vector<PDMat>& factors() const { return factors_; }
  bool is_balanced() const { return balanced_; }

  /// log det of the full Kronecker product: sum_a (D/d_a) log det Theta_a.
  double log_det() const;

 private:
  KronPoint(DimVector dims, std::vector<PDMat> factors, bool balanced);

  DimVector dims_;
  std::vector<PDMat> factors_;
  bool balanced_;

  friend KronPoint balance(const KronPoint& theta);
};

/// Tangent vector H = (H_0; H_1, ..., H_k): a scalar plus one traceless
/// symmetric block per mode.  Construction symmetrizes and projects each
/// block onto the traceless subspace.
class TangentVec {
 public:
  TangentVec(const DimVector& dims, double h0,
             const std::vector<Eigen::MatrixXd>& blocks);

  static TangentVec zero(const DimVector& dims);

  const DimVector& dims() const { return dims_; }
  double h0() const { return h0_; }
  const Eigen::MatrixXd& block(int a) const { return blocks_[a]; }

  /// Norm induced by the tangent inner product.
  double norm() const;

  TangentVec scaled(double c) const;

 private:
  DimVector dims_;
  double h0_;
  std::vector<Eigen::MatrixXd> blocks_;
};

/// Rescale factors to the canonical balanced representative
/// lambda · Theta_a / (det Theta_a)^{1/d_a}, preserving the product.
KronPoint balance(const std::vector<PDMat>& factors);
KronPoint balance(const KronPoint& theta);

/// Geodesic exponential: exp_Theta(H) = e^{H_0} · (x)_a Theta_a^{1/2}
/// e^{sqrt(d_a) H_a} Theta_a^{1/2}, returned balanced (the scalar e^{H_0/k}
/// is folded into each factor).
KronPoint exp_at(const KronPoint& theta, const TangentVec& h);

/// Geodesic distance D^{-1/2} ||log Theta^{-1/2} Theta' Theta^{-1/2}||_F,
/// evaluated factorwise without realizing the product.
double geodesic_distance(const KronPoint& a, const KronPoint& b);

/// Operator-log distance ||log Theta^{-1/2} Theta' Theta^{-1/2}||_op,
/// evaluated factorwise.
double d_op_distance(const KronPoint& a, const KronPoint& b);

/// Dense D x D realization for small D (oracle/test path).
PDMat materialize(const KronPoint& theta);

/// Inner product h0·k0 + sum_a tr(H_a K_a) on the tangent space.
double tangent_inner(const TangentVec& h, const TangentVec& k);

}  // namespace kronfit
