#pragma once

#include <vector>

#include "kronfit/dataset.hpp"
#include "kronfit/kron.hpp"

namespace kronfit {

/// Relative eigenvalue floor below which a marginal is treated as singular.
inline constexpr double kSingularTolerance = 1e-10;

/// Why a solver run stopped.  A singular marginal ends the run with the
/// last well-defined iterate rather than raising, so sweeps can record it.
enum class Termination { kConverged, kMaxItersReached, kSingularMarginal };

const char* to_string(Termination t);

struct SolverConfig {
  /// Stop once the largest factor-block gradient norm falls to delta.
  double delta = 1e-8;
  /// Update budget; 0 selects the default 50 * (k^2 * d_max + 64).
  int max_iters = 0;
  /// Shrinkage weight; must be 0 for flip_flop and in (0, 1] for
  /// shrink_flop.
  double alpha = 0.0;
  /// Skip the stopping test on the very first iteration (matrix-model
  /// variant of the algorithm).
  bool skip_first_stop_check = false;
  /// Relative eigenvalue threshold for declaring a marginal singular.
  double singular_tolerance = kSingularTolerance;
};

/// State measured at the top of one solver iteration, before any update.
struct IterationRecord {
  int t = 0;                       // 1-based iteration index
  double f = 0.0;                  // objective value at the current point
  double max_grad_norm = 0.0;      // largest factor-block gradient norm
  std::vector<double> grad_norms;  // per-mode block norms
  int chosen = -1;                 // mode updated this iteration; -1 if none
  double trace_rho = 0.0;          // trace of the whitened second moment
};

struct SolverReport {
  Termination termination = Termination::kConverged;
  int iterations = 0;  // number of factor updates performed
  std::vector<IterationRecord> records;
};

struct Estimate {
  KronPoint point;  // balanced representative of the final iterate
  SolverReport report;
};

/// Default update budget 50 * (k^2 * d_max + 64).
int default_max_iters(const DimVector& dims);

/// Maximum-likelihood flip-flop: from the identity, repeatedly whiten,
/// measure all factor-block gradients, and replace the worst factor by the
/// inverse of its whitened marginal (scaled by 1/d_a) until the largest
/// block norm reaches cfg.delta.  Requires cfg.alpha == 0.
Estimate flip_flop(const Dataset& x, const SolverConfig& cfg = SolverConfig{});

/// Shrinkage flip-flop: same sweep on the shrunk objective, replacing the
/// chosen factor by the inverse of the shrunk partially-whitened marginal.
/// Requires cfg.alpha in (0, 1]; well-posed for any nonzero dataset.
Estimate shrink_flop(const Dataset& x, const SolverConfig& cfg);

/// Multiply mode `mode` by (d_a rho^(a))^{-1/2}, making that marginal
/// exactly I/d_a (and the total squared norm nD).  Raises SingularMarginal
/// if the marginal is numerically singular.
Dataset one_step_renormalize(const Dataset& x, int mode);

}  // namespace kronfit
