#include "kronfit/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include "kronfit/cp_map.hpp"
#include "kronfit/errors.hpp"
#include "kronfit/metrics.hpp"
#include "kronfit/serialize.hpp"
#include "svg.hpp"

namespace kronfit {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

Seed trial_seed(Seed root, int trial) {
  return Seed{root.value, root.stream + static_cast<std::uint64_t>(trial)};
}

std::string seed_string(Seed s) {
  return std::to_string(s.value) + ":" + std::to_string(s.stream);
}

/// Data-dependent failure classes recorded per trial; anything else is a
/// configuration error and propagates.
const char* recordable_failure(const Error& e) {
  if (dynamic_cast<const SingularMarginal*>(&e)) return "SingularMarginal";
  if (dynamic_cast<const NotPositiveDefinite*>(&e)) {
    return "NotPositiveDefinite";
  }
  if (dynamic_cast<const DegenerateInput*>(&e)) return "DegenerateInput";
  if (dynamic_cast<const NumericalFailure*>(&e)) return "NumericalFailure";
  return nullptr;
}

std::string timing_path(const std::string& out_csv) {
  const std::string suffix = ".csv";
  if (out_csv.size() >= suffix.size() &&
      out_csv.compare(out_csv.size() - suffix.size(), suffix.size(),
                      suffix) == 0) {
    return out_csv.substr(0, out_csv.size() - suffix.size()) + ".timing.csv";
  }
  return out_csv + ".timing.csv";
}

void validate_common(const std::vector<int>& n_list, int trials) {
  if (n_list.empty()) {
    throw InvalidInput("experiment: n_list must be nonempty");
  }
  for (int n : n_list) {
    if (n < 1) throw InvalidInput("experiment: sample counts must be >= 1");
  }
  if (trials < 1) {
    throw InvalidInput("experiment: trials must be >= 1");
  }
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    throw Error("experiment: cannot open '" + path + "' for writing");
  }
  return out;
}

double quantile(std::vector<double> values, double q) {
  std::sort(values.begin(), values.end());
  const double pos = q * (static_cast<double>(values.size()) - 1.0);
  const auto lo = static_cast<std::size_t>(pos);
  const double frac = pos - static_cast<double>(lo);
  if (lo + 1 >= values.size()) return values.back();
  return values[lo] * (1.0 - frac) + values[lo + 1] * frac;
}

}  // namespace

TrialPointResult run_single_point(const ExperimentSpec& spec, int trial,
                                  int n, double sweep_value) {
  if (trial < 0) throw InvalidInput("run_single_point: trial must be >= 0");
  if (n < 1) throw InvalidInput("run_single_point: n must be >= 1");

  TrialPointResult result;
  result.trial = trial;
  result.n = n;
  result.sweep_value = sweep_value;
  const int k = spec.generator.dims.k();
  result.factor_frob.assign(k, kNan);
  result.factor_op.assign(k, kNan);

  const Seed seed = trial_seed(spec.seed, trial);
  const KronPoint truth = generate(spec.generator, seed);
  const Dataset x = Dataset::sample_model(truth, n, seed);

  SolverConfig cfg = spec.solver;
  if (spec.sweep == SweepKind::kDelta) {
    cfg.delta = sweep_value;
    cfg.alpha = 0.0;
  } else {
    cfg.alpha = sweep_value;
  }

  const auto start = std::chrono::steady_clock::now();
  try {
    const Estimate est = spec.sweep == SweepKind::kDelta
                             ? flip_flop(x, cfg)
                             : shrink_flop(x, cfg);
    result.runtime_ms =
        std::chrono::duration<double, std::milli>(
            std::chrono::steady_clock::now() - start)
            .count();
    result.termination = to_string(est.report.termination);
    result.iterations = est.report.iterations;
    if (!est.report.records.empty()) {
      result.f_final = est.report.records.back().f;
    }

    const ErrorReport errors = factor_errors(est.point, truth);
    result.factor_frob = errors.factor_frob;
    result.factor_op = errors.factor_op;
    result.full_frob = errors.full_frob;
    result.geodesic = errors.geodesic;
    const double baseline =
        geodesic_distance(truth, KronPoint::identity(truth.dims()));
    result.geodesic_sq_ratio =
        baseline > 0.0 ? (errors.geodesic * errors.geodesic) /
                             (baseline * baseline)
                       : kNan;

    // First-factor squared Frobenius error after matching traces.
    const Eigen::MatrixXd& t0 = truth.factor(0).mat();
    const Eigen::MatrixXd& e0 = est.point.factor(0).mat();
    const double scale = truth.factor(0).trace() / est.point.factor(0).trace();
    result.normalized_frob_sq =
        (scale * e0 - t0).squaredNorm() / t0.squaredNorm();
  } catch (const Error& e) {
    result.runtime_ms =
        std::chrono::duration<double, std::milli>(
            std::chrono::steady_clock::now() - start)
            .count();
    const char* name = recordable_failure(e);
    if (name == nullptr) throw;
    result.termination = name;
  }
  return result;
}

void run_experiment(const ExperimentSpec& spec) {
  validate_common(spec.n_list, spec.trials);
  if (spec.sweep_values.empty()) {
    throw InvalidInput("run_experiment: sweep_values must be nonempty");
  }

  std::vector<TrialPointResult> rows;
  rows.reserve(static_cast<std::size_t>(spec.trials) * spec.n_list.size() *
               spec.sweep_values.size());
  for (int trial = 0; trial < spec.trials; ++trial) {
    for (int n : spec.n_list) {
      for (double value : spec.sweep_values) {
        rows.push_back(run_single_point(spec, trial, n, value));
      }
    }
  }

  const int k = spec.generator.dims.k();
  std::ofstream out = open_output(spec.out_csv);
  out << "trial,n,alpha_or_delta,seed,iterations,termination,f_final";
  for (int a = 1; a <= k; ++a) out << ",factor_frob_" << a;
  for (int a = 1; a <= k; ++a) out << ",factor_op_" << a;
  out << ",full_frob,geodesic,geodesic_sq_ratio,normalized_frob_sq\n";
  const std::string seed_col = seed_string(spec.seed);
  for (const TrialPointResult& r : rows) {
    out << r.trial << "," << r.n << "," << format_double(r.sweep_value)
        << "," << seed_col << "," << r.iterations << "," << r.termination
        << "," << format_double(r.f_final);
    for (double v : r.factor_frob) out << "," << format_double(v);
    for (double v : r.factor_op) out << "," << format_double(v);
    out << "," << format_double(r.full_frob) << ","
        << format_double(r.geodesic) << ","
        << format_double(r.geodesic_sq_ratio) << ","
        << format_double(r.normalized_frob_sq) << "\n";
  }
  if (!out.good()) {
    throw Error("run_experiment: write failure on '" + spec.out_csv + "'");
  }

  std::ofstream timing = open_output(timing_path(spec.out_csv));
  timing << "trial,n,alpha_or_delta,runtime_ms\n";
  for (const TrialPointResult& r : rows) {
    timing << r.trial << "," << r.n << "," << format_double(r.sweep_value)
           << "," << format_double(r.runtime_ms) << "\n";
  }
  if (!timing.good()) {
    throw Error("run_experiment: write failure on timing sidecar");
  }
}

ScalingResult scaling_study(const ScalingSpec& spec) {
  validate_common(spec.n_list, spec.trials);
  for (std::size_t i = 1; i < spec.n_list.size(); ++i) {
    if (spec.n_list[i] <= spec.n_list[i - 1]) {
      throw InvalidInput("scaling_study: n_list must be strictly increasing");
    }
  }
  SolverConfig cfg = spec.solver;
  cfg.alpha = 0.0;

  // geodesic[i][t], full_frob[i][t] for n_list[i], trial t.
  std::vector<std::vector<double>> geodesics(spec.n_list.size());
  std::vector<std::vector<double>> full_frobs(spec.n_list.size());
  for (int trial = 0; trial < spec.trials; ++trial) {
    const Seed seed = trial_seed(spec.seed, trial);
    const KronPoint truth = generate(spec.generator, seed);
    for (std::size_t i = 0; i < spec.n_list.size(); ++i) {
      const Dataset x =
          Dataset::sample_model(truth, spec.n_list[i], seed);
      const Estimate est = flip_flop(x, cfg);
      const ErrorReport errors = factor_errors(est.point, truth);
      geodesics[i].push_back(errors.geodesic);
      full_frobs[i].push_back(errors.full_frob);
    }
  }

  ScalingResult result;
  result.rows.reserve(spec.n_list.size());
  for (std::size_t i = 0; i < spec.n_list.size(); ++i) {
    ScalingRow row;
    row.n = spec.n_list[i];
    row.median_geodesic = quantile(geodesics[i], 0.5);
    row.geodesic_q1 = quantile(geodesics[i], 0.25);
    row.geodesic_q3 = quantile(geodesics[i], 0.75);
    row.median_full_frob = quantile(full_frobs[i], 0.5);
    result.rows.push_back(row);
  }

  // Least-squares slope of log median geodesic against log n.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double m = static_cast<double>(result.rows.size());
  for (const ScalingRow& row : result.rows) {
    const double lx = std::log(static_cast<double>(row.n));
    const double ly = std::log(std::max(row.median_geodesic, 1e-300));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double denom = m * sxx - sx * sx;
  result.slope = denom != 0.0 ? (m * sxy - sx * sy) / denom : 0.0;

  std::ofstream out = open_output(spec.out_csv);
  out << "# log_log_slope_median_geodesic_vs_n," << format_double(result.slope)
      << "\n";
  out << "n,median_geodesic,geodesic_q1,geodesic_q3,median_full_frob\n";
  for (const ScalingRow& row : result.rows) {
    out << row.n << "," << format_double(row.median_geodesic) << ","
        << format_double(row.geodesic_q1) << ","
        << format_double(row.geodesic_q3) << ","
        << format_double(row.median_full_frob) << "\n";
  }
  if (!out.good()) {
    throw Error("scaling_study: write failure on '" + spec.out_csv + "'");
  }

  std::vector<internal::SeriesPoint> points;
  points.reserve(result.rows.size());
  for (const ScalingRow& row : result.rows) {
    internal::SeriesPoint p;
    p.x = static_cast<double>(row.n);
    p.y = row.median_geodesic;
    p.band_lo = row.geodesic_q1;
    p.band_hi = row.geodesic_q3;
    points.push_back(p);
  }
  std::ofstream svg = open_output(spec.out_svg);
  svg << internal::log_log_chart(
      "Geodesic error vs sample size",
      "median with interquartile band; log-log slope " +
          format_double(result.slope),
      "samples n", "geodesic error", points);
  if (!svg.good()) {
    throw Error("scaling_study: write failure on '" + spec.out_svg + "'");
  }
  return result;
}

std::vector<PairDiagnostics> diagnose_modes(
    const Dataset& x, std::vector<std::pair<int, int>> pairs,
    bool include_gap) {
  if (pairs.empty()) {
    for (int a = 0; a < x.dims().k(); ++a) {
      for (int b = a + 1; b < x.dims().k(); ++b) pairs.emplace_back(a, b);
    }
  }
  std::vector<PairDiagnostics> out;
  out.reserve(pairs.size());
  for (const auto& [a, b] : pairs) {
    const CPMapView phi(x, a, b);
    PairDiagnostics diag;
    diag.a = a;
    diag.b = b;
    const auto deficits = balance_deficit(phi);
    diag.deficit_a = deficits.first;
    diag.deficit_b = deficits.second;
    diag.expansion = expansion_norm(phi);
    diag.trace_image = phi.trace_image();
    diag.eta = diag.expansion *
               std::sqrt(static_cast<double>(phi.dim_a()) *
                         static_cast<double>(phi.dim_b())) /
               diag.trace_image;
    if (include_gap) {
      diag.gamma = spectral_gap(phi);
      diag.gap_computed = true;
    }
    out.push_back(diag);
  }
  return out;
}

}  // namespace kronfit
