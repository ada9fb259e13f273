// Command-line front end: estimator, variance, and enumeration queries plus
// the reproducible experiment runners. Single results print as key=value
// lines; experiments and tables emit CSV.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "momdec/diagram.hpp"
#include "momdec/experiments.hpp"
#include "momdec/format.hpp"
#include "momdec/matrix_lab.hpp"
#include "momdec/moments.hpp"
#include "momdec/rational.hpp"
#include "momdec/variance.hpp"
#include "momdec/wishart.hpp"

namespace {

using namespace momdec;

struct MatrixOptions {
  std::string matrix_file;
  std::vector<double> diagonal;
  int rows = 0;
  int cols = 0;
};

void add_matrix_options(CLI::App* cmd, MatrixOptions& opts) {
  cmd->add_option("--matrix", opts.matrix_file, "matrix file (\"rows cols\" then Re Im pairs)");
  cmd->add_option("--diag", opts.diagonal, "diagonal entries as a comma list")->delimiter(',');
  cmd->add_option("--n", opts.rows, "rows per observation");
  cmd->add_option("--N", opts.cols, "columns per observation");
}

ComplexMatrix resolve_matrix(const MatrixOptions& opts) {
  if (!opts.matrix_file.empty()) {
    std::ifstream in(opts.matrix_file);
    if (!in) throw std::invalid_argument("cannot open matrix file " + opts.matrix_file);
    return read_matrix(in);
  }
  if (opts.diagonal.empty())
    throw std::invalid_argument("either --matrix or --diag is required");
  const int fallback = static_cast<int>(opts.diagonal.size());
  return diagonal_matrix(opts.diagonal, opts.rows > 0 ? opts.rows : fallback,
                         opts.cols > 0 ? opts.cols : fallback);
}

std::vector<int> parse_parts(const std::string& text) {
  std::vector<int> parts;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) parts.push_back(std::stoi(item));
  return parts;
}

std::string output_path(const std::string& out_dir, const std::string& name) {
  std::string dir = out_dir;
  if (dir.empty()) {
    if (const char* env = std::getenv("MOMDEC_OUT")) dir = env;
  }
  if (dir.empty()) dir = ".";
  std::filesystem::create_directories(dir);
  return (std::filesystem::path(dir) / name).string();
}

void run_experiment(const std::string& name, const ExperimentConfig& config,
                    void (*runner)(const ExperimentConfig&, std::ostream&)) {
  const std::string path = output_path(config.out_dir, name + ".csv");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  runner(config, out);
  std::cout << "wrote=" << path << '\n';
}

struct ExperimentFlags {
  std::string config_file;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  std::optional<int> runs;
  std::optional<int> order;
};

void add_experiment_flags(CLI::App* cmd, ExperimentFlags& flags) {
  cmd->add_option("--config", flags.config_file, "JSON config file");
  cmd->add_option("--seed", flags.seed, "master seed (required)");
  cmd->add_option("--out", flags.out_dir, "output directory (default $MOMDEC_OUT or .)");
  cmd->add_option("--K", flags.runs, "estimator runs per empirical variance");
  cmd->add_option("--p", flags.order, "moment order");
}

ExperimentConfig resolve_experiment(const ExperimentFlags& flags, const std::string& name) {
  ExperimentConfig config;
  if (!flags.config_file.empty()) config = load_config_file(flags.config_file);
  config.experiment = name;
  if (flags.seed) config.seed = flags.seed;
  if (!flags.out_dir.empty()) config.out_dir = flags.out_dir;
  if (flags.runs) config.runs = *flags.runs;
  if (flags.order) config.order = *flags.order;
  return config;
}

int run(int argc, char** argv) {
  CLI::App app{"moment-method spectrum estimation for stacked noisy observations"};
  app.require_subcommand(1);
  int weight_cap = kDefaultWeightCap;
  app.add_option("--p-max", weight_cap, "weight cap for coefficient tables (default 4)");

  // enumerate
  auto* enumerate = app.add_subcommand("enumerate", "count partial-permutation diagrams");
  int enum_pairs = 1;
  std::string enum_kind = "sp";
  enumerate->add_option("--p", enum_pairs, "pair count")->required()->check(CLI::PositiveNumber);
  enumerate->add_option("--kind", enum_kind, "sp (one circle) or spr (cross-circle)")
      ->check(CLI::IsMember({"sp", "spr"}));
  enumerate->callback([&]() {
    std::uint64_t tally = 0;
    if (enum_kind == "sp") {
      for_each_sp(DiagramShape{{enum_pairs}}, [&](const PartialPermutation&) { ++tally; });
    } else {
      for_each_spr(enum_pairs, [&](const PartialPermutation&) { ++tally; });
    }
    std::cout << tally << '\n';
  });

  // estimate
  auto* estimate = app.add_subcommand("estimate", "estimate a signal moment from sampled observations");
  MatrixOptions est_matrix;
  add_matrix_options(estimate, est_matrix);
  int est_order = 3;
  int est_block_rows = 1;
  int est_block_cols = 1;
  int est_total = 0;
  std::string est_mode = "stack";
  std::string est_sigma = "1";
  std::optional<std::uint64_t> est_seed;
  estimate->add_option("--p", est_order, "moment order")->check(CLI::PositiveNumber);
  estimate->add_option("--L1", est_block_rows, "vertical copies")->check(CLI::PositiveNumber);
  estimate->add_option("--L2", est_block_cols, "horizontal copies")->check(CLI::PositiveNumber);
  estimate->add_option("--L", est_total, "observation count (average mode)");
  estimate->add_option("--mode", est_mode, "stack or average")
      ->check(CLI::IsMember({"stack", "average"}));
  estimate->add_option("--sigma", est_sigma, "known noise scale");
  estimate->add_option("--seed", est_seed, "master seed")->required();
  estimate->callback([&]() {
    const ComplexMatrix signal = resolve_matrix(est_matrix);
    const ModelDims dims{static_cast<int>(signal.rows()), static_cast<int>(signal.cols()),
                         rational_from_decimal(est_sigma)};
    double value = 0.0;
    if (est_mode == "stack") {
      value = stacked_moment_estimate(signal, dims, StackingScheme{est_block_rows, est_block_cols},
                                      est_order, *est_seed, 0, weight_cap);
    } else {
      const int count = est_total > 0 ? est_total : est_block_rows * est_block_cols;
      value = averaged_moment_estimate(signal, dims, count, est_order, *est_seed, 0, weight_cap);
    }
    const double truth =
        signal_moments(signal, dims.cols, est_order).at(PartitionIndex::single(est_order));
    std::cout << "estimate=" << format_real(value) << '\n'
              << "true_moment=" << format_real(truth) << '\n';
  });

  // variance
  auto* variance = app.add_subcommand("variance", "exact estimator variance");
  MatrixOptions var_matrix;
  add_matrix_options(variance, var_matrix);
  int var_order = 1;
  int var_block_rows = 1;
  int var_block_cols = 1;
  int var_total = 1;
  std::string var_mode = "stack";
  variance->add_option("--p", var_order, "moment order")->check(CLI::PositiveNumber);
  variance->add_option("--L1", var_block_rows, "vertical copies")->check(CLI::PositiveNumber);
  variance->add_option("--L2", var_block_cols, "horizontal copies")->check(CLI::PositiveNumber);
  variance->add_option("--L", var_total, "observation count (average mode)")->check(CLI::PositiveNumber);
  variance->add_option("--mode", var_mode, "stack or average")
      ->check(CLI::IsMember({"stack", "average"}));
  variance->callback([&]() {
    const ComplexMatrix signal = resolve_matrix(var_matrix);
    const ModelDims dims{static_cast<int>(signal.rows()), static_cast<int>(signal.cols()), 1};
    const auto moments = signal_moments(signal, dims.cols, 2 * var_order - 1);
    const VarianceReport report =
        var_mode == "stack"
            ? stacked_variance(var_order, dims, StackingScheme{var_block_rows, var_block_cols},
                               moments, weight_cap)
            : averaging_variance(var_order, dims, var_total, moments, weight_cap);
    std::cout << "variance=" << format_real(report.value) << '\n';
  });

  // limits
  auto* limits_cmd = app.add_subcommand("limits", "large-L limits of L*variance");
  MatrixOptions lim_matrix;
  add_matrix_options(limits_cmd, lim_matrix);
  int lim_order = 3;
  limits_cmd->add_option("--p", lim_order, "moment order")->check(CLI::PositiveNumber);
  limits_cmd->callback([&]() {
    const ComplexMatrix signal = resolve_matrix(lim_matrix);
    const ModelDims dims{static_cast<int>(signal.rows()), static_cast<int>(signal.cols()), 1};
    const auto moments = signal_moments(signal, dims.cols, 2 * lim_order - 1);
    const AsymptoticLimits limits = asymptotic_limits(lim_order, dims, moments, weight_cap);
    std::cout << "rect=" << format_real(limits.rect) << '\n'
              << "vert=" << format_real(limits.vert) << '\n'
              << "horiz=" << format_real(limits.horiz) << '\n'
              << "avg=" << format_real(limits.avg) << '\n';
  });

  // optimal-stacking
  auto* optimal = app.add_subcommand("optimal-stacking", "most-square factorization of L");
  int opt_rows = 1;
  int opt_cols = 1;
  int opt_total = 1;
  int opt_order = 3;
  optimal->add_option("--n", opt_rows, "rows per observation")->required();
  optimal->add_option("--N", opt_cols, "columns per observation")->required();
  optimal->add_option("--L", opt_total, "observation count")->required();
  optimal->add_option("--p", opt_order, "moment order");
  optimal->callback([&]() {
    const StackingScheme best = optimal_stacking(ModelDims{opt_rows, opt_cols, 1}, opt_total, opt_order);
    std::cout << "L1=" << best.block_rows << " L2=" << best.block_cols << '\n';
  });

  // coeffs
  auto* coeffs = app.add_subcommand("coeffs", "coefficient table as CSV");
  std::string coeff_parts = "1";
  int coeff_rows = 1;
  int coeff_cols = 1;
  int coeff_block_rows = 1;
  int coeff_block_cols = 1;
  std::string coeff_kind = "estimator";
  std::string coeff_sigma = "1";
  std::string coeff_out;
  coeffs->add_option("--parts", coeff_parts, "target partition, e.g. 3 or 2,1")->required();
  coeffs->add_option("--n", coeff_rows, "rows per observation")->required();
  coeffs->add_option("--N", coeff_cols, "columns per observation")->required();
  coeffs->add_option("--L1", coeff_block_rows, "vertical copies");
  coeffs->add_option("--L2", coeff_block_cols, "horizontal copies");
  coeffs->add_option("--kind", coeff_kind, "forward or estimator")
      ->check(CLI::IsMember({"forward", "estimator"}));
  coeffs->add_option("--sigma", coeff_sigma, "known noise scale");
  coeffs->add_option("--out", coeff_out, "output file (default stdout)");
  coeffs->callback([&]() {
    const PartitionIndex target(parse_parts(coeff_parts));
    const ModelDims dims{coeff_rows, coeff_cols, rational_from_decimal(coeff_sigma)};
    MomentExpression expr =
        coeff_kind == "forward"
            ? forward_map(target, dims, weight_cap)
            : stacked_estimator_coeffs(target, dims,
                                       StackingScheme{coeff_block_rows, coeff_block_cols},
                                       weight_cap);
    if (coeff_out.empty()) {
      write_coefficients_csv(std::cout, expr);
    } else {
      std::ofstream out(coeff_out);
      if (!out) throw std::runtime_error("cannot write " + coeff_out);
      write_coefficients_csv(out, expr);
      std::cout << "wrote=" << coeff_out << '\n';
    }
  });

  // variance-curve
  auto* curve = app.add_subcommand("variance-curve", "variance across factorizations as CSV");
  MatrixOptions curve_matrix;
  add_matrix_options(curve, curve_matrix);
  int curve_order = 3;
  std::vector<int> curve_schedule;
  std::string curve_out;
  curve->add_option("--p", curve_order, "moment order")->check(CLI::PositiveNumber);
  curve->add_option("--L", curve_schedule, "observation counts")->delimiter(',')->required();
  curve->add_option("--out", curve_out, "output file (default stdout)");
  curve->callback([&]() {
    const ComplexMatrix signal = resolve_matrix(curve_matrix);
    const ModelDims dims{static_cast<int>(signal.rows()), static_cast<int>(signal.cols()), 1};
    const auto moments = signal_moments(signal, dims.cols, 2 * curve_order - 1);
    if (curve_out.empty()) {
      write_variance_curve_csv(std::cout, curve_order, dims, curve_schedule, moments, weight_cap);
    } else {
      std::ofstream out(curve_out);
      if (!out) throw std::runtime_error("cannot write " + curve_out);
      write_variance_curve_csv(out, curve_order, dims, curve_schedule, moments, weight_cap);
      std::cout << "wrote=" << curve_out << '\n';
    }
  });

  // two-stage
  auto* two_stage = app.add_subcommand("two-stage", "product-model moment estimation as CSV");
  MatrixOptions ts_matrix;
  ts_matrix.diagonal = {2.0, 1.0, 1.0, 0.5};
  two_stage->add_option("--matrix", ts_matrix.matrix_file, "mixing matrix file");
  two_stage->add_option("--diag", ts_matrix.diagonal, "mixing diagonal entries")->delimiter(',');
  two_stage->add_option("--n", ts_matrix.rows, "mixing rows");
  two_stage->add_option("--m", ts_matrix.cols, "mixing columns");
  int ts_cols = 4;
  int ts_order = 3;
  int ts_total = 10;
  std::string ts_mode = "stack";
  std::optional<std::uint64_t> ts_seed;
  two_stage->add_option("--N", ts_cols, "columns per observation")->required()->check(CLI::PositiveNumber);
  two_stage->add_option("--p", ts_order, "maximum moment weight")->check(CLI::PositiveNumber);
  two_stage->add_option("--L", ts_total, "observation count")->required()->check(CLI::PositiveNumber);
  two_stage->add_option("--mode", ts_mode, "stack or average")
      ->check(CLI::IsMember({"stack", "average"}));
  two_stage->add_option("--seed", ts_seed, "master seed")->required();
  two_stage->callback([&]() {
    const ComplexMatrix mixing = resolve_matrix(ts_matrix);
    std::vector<ComplexMatrix> observations;
    observations.reserve(static_cast<std::size_t>(ts_total));
    for (int i = 0; i < ts_total; ++i) {
      SeededSampler sampler(*ts_seed, static_cast<std::uint64_t>(i));
      observations.push_back(observe_model2(mixing, ts_cols, sampler));
    }
    const MomentVector estimate = two_stage_estimate(
        observations, static_cast<int>(mixing.rows()), ts_cols, ts_order,
        ts_mode == "stack" ? TwoStageMode::horizontal_stack : TwoStageMode::average, weight_cap);
    write_moment_vector_csv(std::cout, estimate);
  });

  // experiments
  ExperimentFlags fig1_flags;
  auto* fig1 = app.add_subcommand("fig1", "quadratic-stacking estimates vs observation count");
  add_experiment_flags(fig1, fig1_flags);
  fig1->callback([&]() { run_experiment("fig1", resolve_experiment(fig1_flags, "fig1"), run_fig1); });

  ExperimentFlags fig2_flags;
  auto* fig2 = app.add_subcommand("fig2", "L*variance across stacking aspect ratios");
  add_experiment_flags(fig2, fig2_flags);
  fig2->callback([&]() { run_experiment("fig2", resolve_experiment(fig2_flags, "fig2"), run_fig2); });

  ExperimentFlags fig3_flags;
  auto* fig3 = app.add_subcommand("fig3", "two-stage estimation: stacking vs averaging");
  add_experiment_flags(fig3, fig3_flags);
  fig3->callback([&]() { run_experiment("fig3", resolve_experiment(fig3_flags, "fig3"), run_fig3); });

  // let subcommands see the global --p-max wherever it appears
  for (CLI::App* sub : app.get_subcommands([](const CLI::App*) { return true; }))
    sub->fallthrough();

  CLI11_PARSE(app, argc, argv);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
