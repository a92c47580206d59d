#pragma once

#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "kronfit/dataset.hpp"
#include "kronfit/generators.hpp"
#include "kronfit/solvers.hpp"

namespace kronfit {

/// Which solver parameter the sweep varies: delta drives flip_flop, alpha
/// drives shrink_flop.
enum class SweepKind { kDelta, kAlpha };

/// A seeded multi-trial benchmark: per trial draw a ground truth and a
/// nested family of datasets, then fit at every sweep value.  Trial t
/// derives its randomness from {seed.value, seed.stream + t}, so any
/// single cell can be replayed in isolation.
struct ExperimentSpec {
  GeneratorSpec generator;
  std::vector<int> n_list;
  int trials = 1;
  SweepKind sweep = SweepKind::kDelta;
  std::vector<double> sweep_values = {1e-8};
  SolverConfig solver;  // base config; the sweep overrides delta or alpha
  Seed seed;
  std::string out_csv = "bench.csv";
};

/// Metrics of one (trial, n, sweep value) cell.  All fields except
/// runtime_ms are deterministic functions of the spec and the cell index.
struct TrialPointResult {
  int trial = 0;
  int n = 0;
  double sweep_value = 0.0;
  std::string termination;
  int iterations = 0;
  double f_final = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> factor_frob;
  std::vector<double> factor_op;
  double full_frob = std::numeric_limits<double>::quiet_NaN();
  double geodesic = std::numeric_limits<double>::quiet_NaN();
  double geodesic_sq_ratio = std::numeric_limits<double>::quiet_NaN();
  double normalized_frob_sq = std::numeric_limits<double>::quiet_NaN();
  double runtime_ms = 0.0;
};

/// Recompute one cell from scratch (used both by run_experiment and for
/// row replay).  Data-dependent solver failures are recorded in
/// `termination` with NaN metrics; configuration errors propagate.
TrialPointResult run_single_point(const ExperimentSpec& spec, int trial,
                                  int n, double sweep_value);

/// Run the full sweep and write two files: the metrics CSV at
/// spec.out_csv (byte-identical across re-runs) and a timing sidecar at
/// "<out base>.timing.csv" holding the runtime_ms column.
void run_experiment(const ExperimentSpec& spec);

/// Error-vs-sample-size study fitted on the flip-flop solver.
struct ScalingSpec {
  GeneratorSpec generator;
  std::vector<int> n_list;  // strictly increasing
  int trials = 1;
  SolverConfig solver;
  Seed seed;
  std::string out_csv = "scaling.csv";
  std::string out_svg = "scaling.svg";
};

struct ScalingRow {
  int n = 0;
  double median_geodesic = 0.0;
  double geodesic_q1 = 0.0;
  double geodesic_q3 = 0.0;
  double median_full_frob = 0.0;
};

struct ScalingResult {
  std::vector<ScalingRow> rows;
  double slope = 0.0;  // least-squares slope of log median geodesic vs log n
};

/// Per-n medians and interquartile range of the geodesic error over
/// seeded trials, the fitted log-log slope, a CSV table, and an SVG chart.
ScalingResult scaling_study(const ScalingSpec& spec);

/// Quantum-expansion diagnostics for one ordered mode pair.
struct PairDiagnostics {
  int a = 0;
  int b = 0;
  double deficit_a = 0.0;  // eps for mode a
  double deficit_b = 0.0;  // eps for mode b
  double expansion = 0.0;  // ||Phi||_0 on traceless symmetric matrices
  double trace_image = 0.0;
  double eta = 0.0;  // ||Phi||_0 sqrt(d_a d_b) / tr Phi(I)
  double gamma = std::numeric_limits<double>::quiet_NaN();
  bool gap_computed = false;
};

/// Diagnostics for the given mode pairs (defaults to all pairs a < b when
/// the list is empty).  Spectral gaps are computed only when include_gap;
/// oversize pairs then raise TooLarge.
std::vector<PairDiagnostics> diagnose_modes(
    const Dataset& x, std::vector<std::pair<int, int>> pairs,
    bool include_gap);

}  // namespace kronfit
