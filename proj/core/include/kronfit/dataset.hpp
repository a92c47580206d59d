#pragma once

#include <string>
#include <vector>

#include "kronfit/kron.hpp"
#include "kronfit/rng.hpp"
#include "kronfit/sym_matrix.hpp"

namespace kronfit {

/// n samples in R^D with mode dimensions (d_1, ..., d_k).  Each row stores
/// one sample in row-major multi-index order: position of (i_1, ..., i_k)
/// is sum_a i_a * stride_a with stride_a = prod_{b>a} d_b (last index
/// fastest).  All flattenings and marginals derive from this layout.
/// Mode indices are 0-based throughout the library.
class Dataset {
 public:
  Dataset(DimVector dims, std::vector<double> data);

  /// Draw n i.i.d. samples from N(0, Theta^{-1}): standard Gaussian
  /// tensors mode-multiplied by Theta_a^{-1/2}.  Deterministic per
  /// (seed, build); sample draws are prefix-stable in n.
  static Dataset sample_model(const KronPoint& theta, int n, Seed seed);

  const DimVector& dims() const { return dims_; }
  int n() const { return n_; }
  std::int64_t total_dim() const { return dims_.total(); }
  const std::vector<double>& data() const { return data_; }
  const double* row(int i) const { return data_.data() + i * dims_.total(); }

  /// Sum of squares of all entries.
  double squared_norm() const { return squared_norm_; }

 private:
  DimVector dims_;
  int n_;
  std::vector<double> data_;
  double squared_norm_;
};

/// tr rho = ||x||^2 / (nD) for rho = (1/nD) sum_i x_i x_i^T.
double trace_rho(const Dataset& x);

/// One-mode marginal rho^(a) = (1/nD) X^(a) (X^(a))^T; d_a x d_a PSD.
SymMat partial_trace_one(const Dataset& x, int a);

/// Two-mode marginal rho^(ab) with row index i_a * d_b + i_b; requires
/// a != b and d_a * d_b within the dense realization limit.
SymMat partial_trace_two(const Dataset& x, int a, int b);

/// Replace each sample's mode-a flattening X^(a) by m * X^(a).
Dataset mode_multiply(const Dataset& x, int a, const SymMat& m);

/// Mode-multiply every mode a by Theta_a^{1/2}.
Dataset whiten(const Dataset& x, const KronPoint& theta);

/// Write the dataset in the TNDATA01 binary format (bit-exact round trip).
void save(const Dataset& x, const std::string& path);

/// Read a TNDATA01 file; header or payload validation failures raise
/// FormatError.
Dataset load(const std::string& path);

}  // namespace kronfit
