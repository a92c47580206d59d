// kronfit command-line tool: sampling, fitting, metrics, benchmarks,
// scaling studies, and expander diagnostics over TNDATA01 datasets and
// JSON-serialized Kronecker points.
//
// Exit codes: 0 success; 2 invalid input (bad flags or parameters);
// 3 solver failure in `fit`; 1 any other error.

#include <cstdint>
#include <iostream>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "kronfit/cp_map.hpp"
#include "kronfit/dataset.hpp"
#include "kronfit/errors.hpp"
#include "kronfit/experiments.hpp"
#include "kronfit/generators.hpp"
#include "kronfit/metrics.hpp"
#include "kronfit/serialize.hpp"
#include "kronfit/solvers.hpp"

namespace {

using nlohmann::json;

kronfit::Seed parse_seed(const std::string& text) {
  const auto colon = text.find(':');
  try {
    kronfit::Seed seed;
    std::size_t used = 0;
    const std::string value_part =
        colon == std::string::npos ? text : text.substr(0, colon);
    seed.value = std::stoull(value_part, &used);
    if (used != value_part.size()) throw std::invalid_argument("trailing");
    if (colon != std::string::npos) {
      const std::string stream_part = text.substr(colon + 1);
      seed.stream = std::stoull(stream_part, &used);
      if (used != stream_part.size()) throw std::invalid_argument("trailing");
    }
    return seed;
  } catch (const std::exception&) {
    throw kronfit::InvalidInput("seed must be 'value' or 'value:stream' in decimal");
  }
}

std::vector<int> parse_int_list(const std::string& text, const char* what) {
  std::vector<int> out;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw kronfit::InvalidInput(std::string(what) +
                                  ": expected comma-separated integers");
    }
  }
  if (out.empty()) {
    throw kronfit::InvalidInput(std::string(what) + ": empty list");
  }
  return out;
}

std::vector<double> parse_double_list(const std::string& text,
                                      const char* what) {
  std::vector<double> out;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw kronfit::InvalidInput(std::string(what) +
                                  ": expected comma-separated reals");
    }
  }
  if (out.empty()) {
    throw kronfit::InvalidInput(std::string(what) + ": empty list");
  }
  return out;
}

kronfit::GeneratorKind parse_kind(const std::string& name) {
  if (name == "identity") return kronfit::GeneratorKind::kIdentity;
  if (name == "spiked") return kronfit::GeneratorKind::kSpiked;
  if (name == "sparse_laplacian") {
    return kronfit::GeneratorKind::kSparseLaplacian;
  }
  if (name == "wishart") return kronfit::GeneratorKind::kWishart;
  throw kronfit::InvalidInput(
      "generator kind must be one of identity, spiked, sparse_laplacian, "
      "wishart");
}

// Options shared by subcommands that synthesize a ground truth.
struct GeneratorOptions {
  std::string kind = "identity";
  std::string dims;
  double strength = 10.0;
  double edge_factor = 0.4;
  int rank = 0;

  void attach(CLI::App* cmd, bool dims_required) {
    cmd->add_option("--generator", kind,
                    "identity|spiked|sparse_laplacian|wishart")
        ->capture_default_str();
    auto* dims_opt = cmd->add_option(
        "--dims", dims, "mode dimensions, comma separated (e.g. 4,4)");
    if (dims_required) dims_opt->required();
    cmd->add_option("--strength", strength, "spiked rank-one strength")
        ->capture_default_str();
    cmd->add_option("--edge-factor", edge_factor,
                    "multigraph edges per vertex for sparse_laplacian")
        ->capture_default_str();
    cmd->add_option("--rank", rank, "Wishart rank (0 = full)")
        ->capture_default_str();
  }

  kronfit::GeneratorSpec build() const {
    kronfit::GeneratorSpec spec{parse_kind(kind),
                                kronfit::DimVector(parse_int_list(
                                    dims, "--dims"))};
    spec.strength = strength;
    spec.edge_factor = edge_factor;
    spec.rank = rank;
    return spec;
  }
};

struct SolverOptions {
  double delta = 1e-8;
  int max_iters = 0;
  bool skip_first_stop_check = false;
  double singular_tolerance = kronfit::kSingularTolerance;

  void attach(CLI::App* cmd) {
    cmd->add_option("--delta", delta, "gradient-norm stopping threshold")
        ->capture_default_str();
    cmd->add_option("--max-iters", max_iters,
                    "update budget (0 = dimension-based default)")
        ->capture_default_str();
    cmd->add_flag("--skip-first-stop-check", skip_first_stop_check,
                  "skip the stopping test on iteration 1");
    cmd->add_option("--singular-tolerance", singular_tolerance,
                    "relative eigenvalue floor for singular marginals")
        ->capture_default_str();
  }

  kronfit::SolverConfig build() const {
    kronfit::SolverConfig cfg;
    cfg.delta = delta;
    cfg.max_iters = max_iters;
    cfg.skip_first_stop_check = skip_first_stop_check;
    cfg.singular_tolerance = singular_tolerance;
    return cfg;
  }
};

json error_report_json(const kronfit::ErrorReport& report,
                       std::pair<double, double> tv) {
  json doc;
  doc["factor_frob"] = report.factor_frob;
  doc["factor_op"] = report.factor_op;
  doc["full_frob"] = report.full_frob;
  doc["full_op"] = report.full_op;
  doc["geodesic"] = report.geodesic;
  doc["fisher_rao"] = report.fisher_rao;
  doc["kl"] = report.kl;
  doc["tv_lower"] = tv.first;
  doc["tv_upper"] = tv.second;
  return doc;
}

kronfit::ExperimentSpec experiment_from_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw kronfit::Error("bench: cannot open config '" + path + "'");
  }
  json doc;
  try {
    in >> doc;
  } catch (const json::exception&) {
    throw kronfit::FormatError("bench: config is not valid JSON");
  }
  try {
    const json& gen = doc.at("generator");
    kronfit::GeneratorSpec generator{
        parse_kind(gen.at("kind").get<std::string>()),
        kronfit::DimVector(gen.at("dims").get<std::vector<int>>())};
    if (gen.contains("strength")) {
      generator.strength = gen.at("strength").get<double>();
    }
    if (gen.contains("edge_factor")) {
      generator.edge_factor = gen.at("edge_factor").get<double>();
    }
    if (gen.contains("rank")) generator.rank = gen.at("rank").get<int>();

    kronfit::ExperimentSpec spec{generator};
    if (doc.contains("n_list")) {
      spec.n_list = doc.at("n_list").get<std::vector<int>>();
    }
    if (doc.contains("trials")) spec.trials = doc.at("trials").get<int>();
    if (doc.contains("sweep")) {
      const json& sweep = doc.at("sweep");
      const std::string kind = sweep.at("kind").get<std::string>();
      if (kind == "delta") {
        spec.sweep = kronfit::SweepKind::kDelta;
      } else if (kind == "alpha") {
        spec.sweep = kronfit::SweepKind::kAlpha;
      } else {
        throw kronfit::InvalidInput("bench: sweep kind must be delta or alpha");
      }
      spec.sweep_values = sweep.at("values").get<std::vector<double>>();
    }
    if (doc.contains("solver")) {
      const json& solver = doc.at("solver");
      if (solver.contains("delta")) {
        spec.solver.delta = solver.at("delta").get<double>();
      }
      if (solver.contains("max_iters")) {
        spec.solver.max_iters = solver.at("max_iters").get<int>();
      }
      if (solver.contains("skip_first_stop_check")) {
        spec.solver.skip_first_stop_check =
            solver.at("skip_first_stop_check").get<bool>();
      }
      if (solver.contains("singular_tolerance")) {
        spec.solver.singular_tolerance =
            solver.at("singular_tolerance").get<double>();
      }
    }
    if (doc.contains("out")) spec.out_csv = doc.at("out").get<std::string>();
    return spec;
  } catch (const json::exception&) {
    throw kronfit::InvalidInput("bench: config missing or mistyped field");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "kronfit: maximum-likelihood estimation of Kronecker-factored "
      "precision matrices"};
  app.require_subcommand(1);
  int exit_code = 0;

  // ---- sample ----------------------------------------------------------
  auto* sample_cmd = app.add_subcommand(
      "sample", "draw a dataset from a model and write a TNDATA01 file");
  GeneratorOptions sample_gen;
  sample_gen.attach(sample_cmd, /*dims_required=*/false);
  int sample_n = 1;
  std::string sample_seed = "0";
  std::string sample_out;
  std::string sample_truth_path;
  std::string sample_save_truth;
  sample_cmd->add_option("--n", sample_n, "number of samples")->required();
  sample_cmd->add_option("--seed", sample_seed, "seed value[:stream]")
      ->capture_default_str();
  sample_cmd->add_option("--out", sample_out, "output TNDATA01 path")
      ->required();
  sample_cmd->add_option("--truth", sample_truth_path,
                         "JSON file with the precision point to sample from "
                         "(overrides --generator)");
  sample_cmd->add_option("--save-truth", sample_save_truth,
                         "also write the ground-truth point as JSON");
  sample_cmd->callback([&] {
    const kronfit::Seed seed = parse_seed(sample_seed);
    std::optional<kronfit::KronPoint> truth;
    if (!sample_truth_path.empty()) {
      truth = kronfit::load_kron_point(sample_truth_path);
    } else {
      if (sample_gen.dims.empty()) {
        throw kronfit::InvalidInput("sample: --dims or --truth is required");
      }
      truth = kronfit::generate(sample_gen.build(), seed);
    }
    const kronfit::Dataset x =
        kronfit::Dataset::sample_model(*truth, sample_n, seed);
    kronfit::save(x, sample_out);
    if (!sample_save_truth.empty()) {
      kronfit::save_kron_point(*truth, sample_save_truth);
    }
    json summary;
    summary["out"] = sample_out;
    summary["n"] = sample_n;
    summary["dims"] = truth->dims().dims();
    std::cout << summary.dump() << "\n";
  });

  // ---- fit -------------------------------------------------------------
  auto* fit_cmd = app.add_subcommand(
      "fit", "run flip-flop or ShrinkFlop on a TNDATA01 dataset");
  std::string fit_in;
  std::string fit_solver = "flip";
  double fit_alpha = 0.0;
  std::string fit_out;
  SolverOptions fit_opts;
  fit_cmd->add_option("--in", fit_in, "input TNDATA01 path")->required();
  fit_cmd->add_option("--solver", fit_solver, "flip|shrink")
      ->capture_default_str();
  fit_cmd->add_option("--alpha", fit_alpha, "shrinkage weight for shrink")
      ->capture_default_str();
  fit_opts.attach(fit_cmd);
  fit_cmd->add_option("--out", fit_out, "write the estimate as JSON");
  fit_cmd->callback([&] {
    const kronfit::Dataset x = kronfit::load(fit_in);
    kronfit::SolverConfig cfg = fit_opts.build();
    cfg.alpha = fit_alpha;
    kronfit::Estimate est = [&] {
      try {
        if (fit_solver == "flip") return kronfit::flip_flop(x, cfg);
        if (fit_solver == "shrink") return kronfit::shrink_flop(x, cfg);
        throw kronfit::InvalidInput("fit: --solver must be flip or shrink");
      } catch (const kronfit::InvalidInput&) {
        throw;
      } catch (const kronfit::Error& e) {
        std::cerr << "fit: solver failed: " << e.what() << "\n";
        exit_code = 3;
        throw CLI::RuntimeError(3);
      }
    }();
    json summary;
    summary["termination"] = kronfit::to_string(est.report.termination);
    summary["iterations"] = est.report.iterations;
    summary["dims"] = est.point.dims().dims();
    if (!est.report.records.empty()) {
      summary["f_final"] = est.report.records.back().f;
      summary["max_grad_norm"] = est.report.records.back().max_grad_norm;
    }
    std::cout << summary.dump() << "\n";
    if (!fit_out.empty()) kronfit::save_kron_point(est.point, fit_out);
    if (est.report.termination != kronfit::Termination::kConverged) {
      exit_code = 3;
    }
  });

  // ---- eval ------------------------------------------------------------
  auto* eval_cmd = app.add_subcommand(
      "eval", "error metrics between two saved precision points");
  std::string eval_est, eval_truth;
  eval_cmd->add_option("--est", eval_est, "estimate JSON path")->required();
  eval_cmd->add_option("--truth", eval_truth, "reference JSON path")
      ->required();
  eval_cmd->callback([&] {
    const kronfit::KronPoint est = kronfit::load_kron_point(eval_est);
    const kronfit::KronPoint truth = kronfit::load_kron_point(eval_truth);
    const kronfit::ErrorReport report = kronfit::factor_errors(est, truth);
    std::cout << error_report_json(report, kronfit::tv_bounds(est, truth))
                     .dump()
              << "\n";
  });

  // ---- bench -----------------------------------------------------------
  auto* bench_cmd = app.add_subcommand(
      "bench", "seeded multi-trial experiment sweep writing CSV files");
  std::string bench_config;
  std::string bench_seed;
  int bench_trials = 0;
  std::string bench_out;
  bench_cmd->add_option("--config", bench_config, "experiment config JSON")
      ->required();
  bench_cmd->add_option("--seed", bench_seed, "seed value[:stream]")
      ->required();
  bench_cmd->add_option("--trials", bench_trials,
                        "override the config's trial count");
  bench_cmd->add_option("--out", bench_out, "override the config's CSV path");
  bench_cmd->callback([&] {
    kronfit::ExperimentSpec spec = experiment_from_config(bench_config);
    spec.seed = parse_seed(bench_seed);
    if (bench_trials > 0) spec.trials = bench_trials;
    if (!bench_out.empty()) spec.out_csv = bench_out;
    kronfit::run_experiment(spec);
    json summary;
    summary["out"] = spec.out_csv;
    summary["rows"] = static_cast<int>(spec.n_list.size() *
                                       spec.sweep_values.size()) *
                      spec.trials;
    std::cout << summary.dump() << "\n";
  });

  // ---- scale -----------------------------------------------------------
  auto* scale_cmd = app.add_subcommand(
      "scale", "error-vs-n scaling study with CSV and SVG output");
  GeneratorOptions scale_gen;
  scale_gen.attach(scale_cmd, /*dims_required=*/true);
  std::string scale_n_list = "50,100,200,400";
  int scale_trials = 20;
  std::string scale_seed;
  std::string scale_out_csv = "scaling.csv";
  std::string scale_out_svg = "scaling.svg";
  SolverOptions scale_opts;
  scale_cmd->add_option("--n-list", scale_n_list,
                        "sample counts, comma separated, ascending")
      ->capture_default_str();
  scale_cmd->add_option("--trials", scale_trials, "trials per n")
      ->capture_default_str();
  scale_cmd->add_option("--seed", scale_seed, "seed value[:stream]")
      ->required();
  scale_cmd->add_option("--out-csv", scale_out_csv, "CSV output path")
      ->capture_default_str();
  scale_cmd->add_option("--out-svg", scale_out_svg, "SVG output path")
      ->capture_default_str();
  scale_opts.attach(scale_cmd);
  scale_cmd->callback([&] {
    kronfit::ScalingSpec spec{scale_gen.build()};
    spec.n_list = parse_int_list(scale_n_list, "--n-list");
    spec.trials = scale_trials;
    spec.solver = scale_opts.build();
    spec.seed = parse_seed(scale_seed);
    spec.out_csv = scale_out_csv;
    spec.out_svg = scale_out_svg;
    const kronfit::ScalingResult result = kronfit::scaling_study(spec);
    json summary;
    summary["slope"] = result.slope;
    json rows = json::array();
    for (const kronfit::ScalingRow& row : result.rows) {
      json r;
      r["n"] = row.n;
      r["median_geodesic"] = row.median_geodesic;
      r["geodesic_q1"] = row.geodesic_q1;
      r["geodesic_q3"] = row.geodesic_q3;
      r["median_full_frob"] = row.median_full_frob;
      rows.push_back(std::move(r));
    }
    summary["rows"] = std::move(rows);
    std::cout << summary.dump() << "\n";
  });

  // ---- diagnose --------------------------------------------------------
  auto* diag_cmd = app.add_subcommand(
      "diagnose", "quantum-expansion diagnostics for mode pairs");
  std::string diag_in;
  std::vector<std::string> diag_pairs;
  bool diag_skip_gap = false;
  diag_cmd->add_option("--in", diag_in, "input TNDATA01 path")->required();
  diag_cmd->add_option("--pair", diag_pairs,
                       "1-based mode pair 'a,b' (repeatable; default: all "
                       "pairs a<b)");
  diag_cmd->add_flag("--skip-gap", diag_skip_gap,
                     "skip the dense spectral-gap computation");
  diag_cmd->callback([&] {
    const kronfit::Dataset x = kronfit::load(diag_in);
    std::vector<std::pair<int, int>> pairs;
    for (const std::string& text : diag_pairs) {
      const std::vector<int> ab = parse_int_list(text, "--pair");
      if (ab.size() != 2) {
        throw kronfit::InvalidInput("--pair: expected exactly two modes");
      }
      pairs.emplace_back(ab[0] - 1, ab[1] - 1);  // CLI modes are 1-based
    }
    const auto reports =
        kronfit::diagnose_modes(x, std::move(pairs), !diag_skip_gap);
    for (const kronfit::PairDiagnostics& d : reports) {
      json line;
      line["a"] = d.a + 1;
      line["b"] = d.b + 1;
      line["deficit_a"] = d.deficit_a;
      line["deficit_b"] = d.deficit_b;
      line["expansion"] = d.expansion;
      line["trace_image"] = d.trace_image;
      line["eta"] = d.eta;
      if (d.gap_computed) {
        line["gamma"] = d.gamma;
      } else {
        line["gamma"] = nullptr;
      }
      std::cout << line.dump() << "\n";
    }
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::RuntimeError& e) {
    return e.get_exit_code();
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const kronfit::InvalidInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const kronfit::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return exit_code;
}
