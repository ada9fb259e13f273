#include "momdec/experiments.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "momdec/format.hpp"
#include "momdec/parallel.hpp"
#include "momdec/variance.hpp"
#include "momdec/wishart.hpp"

namespace momdec {

namespace {

using nlohmann::json;

const char* const kKnownKeys[] = {"experiment", "matrix_file",  "diag",        "n",
                                  "N",          "m",            "p",           "L_schedule",
                                  "stackings",  "empirical_L1", "empirical_L", "K",
                                  "sigma",      "seed",         "out_dir",     "p_max"};

std::vector<int> to_int_vector(const json& node, const std::string& key) {
  if (!node.is_array()) throw std::invalid_argument("config error: " + key + " must be an array");
  std::vector<int> out;
  for (const auto& item : node) out.push_back(item.get<int>());
  return out;
}

}  // namespace

ExperimentConfig load_config_json(const std::string& text) {
  json parsed;
  try {
    parsed = json::parse(text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config error: ") + e.what());
  }
  if (!parsed.is_object()) throw std::invalid_argument("config error: top level must be an object");

  for (const auto& [key, value] : parsed.items()) {
    bool known = false;
    for (const char* candidate : kKnownKeys) known = known || key == candidate;
    if (!known) throw std::invalid_argument("config error: unknown key '" + key + "'");
  }

  ExperimentConfig config;
  if (parsed.contains("experiment")) config.experiment = parsed["experiment"].get<std::string>();
  if (parsed.contains("matrix_file")) config.matrix_file = parsed["matrix_file"].get<std::string>();
  if (parsed.contains("diag")) {
    config.diagonal.clear();
    for (const auto& item : parsed["diag"]) config.diagonal.push_back(item.get<double>());
    config.rows = config.cols = config.inner = static_cast<int>(config.diagonal.size());
  }
  if (parsed.contains("n")) config.rows = parsed["n"].get<int>();
  if (parsed.contains("N")) config.cols = parsed["N"].get<int>();
  if (parsed.contains("m")) config.inner = parsed["m"].get<int>();
  if (parsed.contains("p")) config.order = parsed["p"].get<int>();
  if (parsed.contains("L_schedule")) config.schedule = to_int_vector(parsed["L_schedule"], "L_schedule");
  if (parsed.contains("stackings")) {
    const json& node = parsed["stackings"];
    if (node.is_string()) {
      if (node.get<std::string>() != "all-factorizations")
        throw std::invalid_argument("config error: stackings must be \"all-factorizations\" or pairs");
    } else if (node.is_array()) {
      for (const auto& item : node) {
        if (!item.is_array() || item.size() != 2)
          throw std::invalid_argument("config error: each stacking must be a [L1, L2] pair");
        config.stackings.emplace_back(item[0].get<int>(), item[1].get<int>());
      }
    } else {
      throw std::invalid_argument("config error: stackings must be \"all-factorizations\" or pairs");
    }
  }
  if (parsed.contains("empirical_L1"))
    config.empirical_rows = to_int_vector(parsed["empirical_L1"], "empirical_L1");
  if (parsed.contains("empirical_L")) config.empirical_total = parsed["empirical_L"].get<int>();
  if (parsed.contains("K")) config.runs = parsed["K"].get<int>();
  if (parsed.contains("sigma")) config.noise_scale = parsed["sigma"].get<double>();
  if (parsed.contains("seed")) config.seed = parsed["seed"].get<std::uint64_t>();
  if (parsed.contains("out_dir")) config.out_dir = parsed["out_dir"].get<std::string>();
  if (parsed.contains("p_max")) config.weight_cap = parsed["p_max"].get<int>();
  return config;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config error: cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return load_config_json(buffer.str());
}

std::uint64_t config_hash(const ExperimentConfig& config) {
  json canonical;
  canonical["experiment"] = config.experiment;
  canonical["matrix_file"] = config.matrix_file;
  canonical["diag"] = config.diagonal;
  canonical["n"] = config.rows;
  canonical["N"] = config.cols;
  canonical["m"] = config.inner;
  canonical["p"] = config.order;
  canonical["L_schedule"] = config.schedule;
  {
    json layouts = json::array();
    for (const auto& [left, right] : config.stackings) layouts.push_back({left, right});
    canonical["stackings"] = layouts;
  }
  canonical["empirical_L1"] = config.empirical_rows;
  canonical["empirical_L"] = config.empirical_total;
  canonical["K"] = config.runs.value_or(0);
  canonical["sigma"] = config.noise_scale;
  canonical["seed"] = config.seed.value_or(0);
  canonical["p_max"] = config.weight_cap;
  return fnv1a64(canonical.dump());
}

namespace {

ComplexMatrix config_matrix(const ExperimentConfig& config, int rows, int cols) {
  if (!config.matrix_file.empty()) {
    std::ifstream in(config.matrix_file);
    if (!in) throw std::invalid_argument("config error: cannot open matrix file " + config.matrix_file);
    return read_matrix(in);
  }
  return diagonal_matrix(config.diagonal, rows, cols);
}

}  // namespace

ComplexMatrix config_signal(const ExperimentConfig& config) {
  return config_matrix(config, config.rows, config.cols);
}

ComplexMatrix config_mixing(const ExperimentConfig& config) {
  return config_matrix(config, config.rows, config.inner);
}

namespace {

std::uint64_t require_seed(const ExperimentConfig& config) {
  if (!config.seed)
    throw std::invalid_argument("config error: experiment runs require an explicit seed");
  return *config.seed;
}

void write_stamp(std::ostream& out, const ExperimentConfig& config) {
  out << "# config_hash=" << hex64(config_hash(config)) << " seed=" << require_seed(config) << '\n';
}

std::vector<PartitionIndex> expression_keys(const MomentExpression& expr) {
  std::vector<PartitionIndex> keys;
  for (const auto& [partition, coeff] : expr.terms())
    if (!partition.empty()) keys.push_back(partition);
  return keys;
}

}  // namespace

double stacked_moment_estimate(const ComplexMatrix& signal, const ModelDims& dims,
                               const StackingScheme& scheme, int order, std::uint64_t master_seed,
                               std::uint64_t stream_base, int weight_cap) {
  std::vector<ComplexMatrix> observations;
  observations.reserve(static_cast<std::size_t>(scheme.count()));
  const double noise = to_double(dims.noise_scale);
  for (int i = 0; i < scheme.count(); ++i) {
    SeededSampler sampler(master_seed, stream_base + static_cast<std::uint64_t>(i));
    observations.push_back(observe_additive(signal, noise, sampler));
  }
  const ComplexMatrix compound = stack(observations, scheme);
  const MomentExpression expr =
      stacked_estimator_coeffs(PartitionIndex::single(order), dims, scheme, weight_cap);
  const auto observed = gram_moments(
      compound, static_cast<double>(dims.cols) * scheme.block_cols, expression_keys(expr));
  return expr.evaluate(observed);
}

double averaged_moment_estimate(const ComplexMatrix& signal, const ModelDims& dims, int count,
                                int order, std::uint64_t master_seed, std::uint64_t stream_base,
                                int weight_cap) {
  if (count < 1) throw std::invalid_argument("observation count must be positive");
  const MomentExpression expr = estimator_coeffs(PartitionIndex::single(order), dims, weight_cap);
  const auto keys = expression_keys(expr);
  const double noise = to_double(dims.noise_scale);
  double acc = 0.0;
  for (int i = 0; i < count; ++i) {
    SeededSampler sampler(master_seed, stream_base + static_cast<std::uint64_t>(i));
    const ComplexMatrix observation = observe_additive(signal, noise, sampler);
    acc += expr.evaluate(gram_moments(observation, static_cast<double>(dims.cols), keys));
  }
  return acc / count;
}

void run_fig1(const ExperimentConfig& config, std::ostream& out) {
  const std::uint64_t seed = require_seed(config);
  ExperimentConfig effective = config;
  if (effective.schedule.empty()) {
    for (int root = 1; root * root <= 900; ++root) effective.schedule.push_back(root * root);
  }
  for (int total : effective.schedule) {
    const int root = static_cast<int>(std::lround(std::sqrt(static_cast<double>(total))));
    if (root * root != total)
      throw std::invalid_argument("config error: schedule entry " + std::to_string(total) +
                                  " is not a perfect square");
  }

  const ComplexMatrix signal = config_signal(effective);
  const ModelDims dims{static_cast<int>(signal.rows()), static_cast<int>(signal.cols()),
                       rational_from_double(effective.noise_scale)};
  const double truth =
      signal_moments(signal, dims.cols, effective.order).at(PartitionIndex::single(effective.order));

  write_stamp(out, effective);
  out << "L,estimate,true_D3\n";
  std::uint64_t stream_base = 0;
  for (int total : effective.schedule) {
    const int root = static_cast<int>(std::lround(std::sqrt(static_cast<double>(total))));
    const double estimate = stacked_moment_estimate(signal, dims, StackingScheme{root, root},
                                                    effective.order, seed, stream_base,
                                                    effective.weight_cap);
    stream_base += static_cast<std::uint64_t>(total);
    out << total << ',' << format_real(estimate) << ',' << format_real(truth) << '\n';
  }
}

void run_fig2(const ExperimentConfig& config, std::ostream& out) {
  const std::uint64_t seed = require_seed(config);
  ExperimentConfig effective = config;
  if (effective.schedule.empty()) effective.schedule = {5, 50};
  if (effective.empirical_rows.empty()) effective.empirical_rows = {1, 2, 5, 10};
  if (!effective.runs) effective.runs = 1000;
  const int runs = *effective.runs;
  if (effective.noise_scale != 1.0)
    throw std::invalid_argument("config error: variance curves assume unit noise scale");

  const ComplexMatrix signal = config_signal(effective);
  const ModelDims dims{static_cast<int>(signal.rows()), static_cast<int>(signal.cols()), 1};
  const auto moments = signal_moments(signal, dims.cols, 2 * effective.order - 1);
  const AsymptoticLimits limits =
      asymptotic_limits(effective.order, dims, moments, effective.weight_cap);

  // Empirical variances at the configured layouts, K estimator runs each.
  std::map<std::pair<int, int>, double> empirical;
  std::uint64_t stream_base = 0;
  const bool empirical_scheduled =
      std::find(effective.schedule.begin(), effective.schedule.end(), effective.empirical_total) !=
      effective.schedule.end();
  for (std::size_t idx = 0; empirical_scheduled && idx < effective.empirical_rows.size(); ++idx) {
    const int block_rows = effective.empirical_rows[idx];
    const int total = effective.empirical_total;
    if (total % block_rows != 0)
      throw std::invalid_argument("config error: empirical L1 " + std::to_string(block_rows) +
                                  " does not divide L=" + std::to_string(total));
    const StackingScheme scheme{block_rows, total / block_rows};
    std::vector<double> estimates(static_cast<std::size_t>(runs));
    const std::uint64_t base = stream_base;
    parallel_for(0, runs, [&](std::int64_t run) {
      estimates[static_cast<std::size_t>(run)] = stacked_moment_estimate(
          signal, dims, scheme, effective.order, seed,
          base + static_cast<std::uint64_t>(run) * static_cast<std::uint64_t>(total),
          effective.weight_cap);
    });
    stream_base += static_cast<std::uint64_t>(runs) * static_cast<std::uint64_t>(total);
    empirical[{block_rows, total / block_rows}] = empirical_variance(estimates);
  }

  write_stamp(out, effective);
  out << "L,L1,L2,c,exact_Lv,limit_rect,limit_horiz,limit_avg,empirical_Lv\n";
  for (int total : effective.schedule) {
    for (const auto& [left, right] : factorizations(total)) {
      if (!effective.stackings.empty() &&
          std::find(effective.stackings.begin(), effective.stackings.end(),
                    std::pair{left, right}) == effective.stackings.end())
        continue;
      const VarianceReport report = stacked_variance(effective.order, dims, StackingScheme{left, right},
                                                     moments, effective.weight_cap);
      const double aspect =
          static_cast<double>(dims.rows) * left / (static_cast<double>(dims.cols) * right);
      out << total << ',' << left << ',' << right << ',' << format_real(aspect) << ','
          << format_real(total * report.value) << ',' << format_real(limits.rect) << ','
          << format_real(limits.horiz) << ',' << format_real(limits.avg) << ',';
      const auto it = total == effective.empirical_total ? empirical.find({left, right})
                                                         : empirical.end();
      if (it != empirical.end()) out << format_real(total * it->second);
      out << '\n';
    }
  }
}

void run_fig3(const ExperimentConfig& config, std::ostream& out) {
  const std::uint64_t seed = require_seed(config);
  ExperimentConfig effective = config;
  if (effective.schedule.empty()) effective.schedule = {10, 20, 30, 40, 50, 60, 70, 80, 90, 100};
  if (!effective.runs) effective.runs = 50;
  const int runs = *effective.runs;
  if (runs < 2) throw std::invalid_argument("config error: fig3 needs at least two runs");

  const ComplexMatrix mixing = config_mixing(effective);
  const int rows = static_cast<int>(mixing.rows());
  const int cols = effective.cols;
  const PartitionIndex target = PartitionIndex::single(effective.order);
  const double truth = gram_moments(mixing, 1.0, {target}).at(target);

  write_stamp(out, effective);
  out << "L,mode,estimate_mean,empirical_variance,true_moment\n";
  std::uint64_t stream_base = 0;
  for (int total : effective.schedule) {
    std::vector<double> stacked(static_cast<std::size_t>(runs));
    std::vector<double> averaged(static_cast<std::size_t>(runs));
    const TwoStageEstimator stack_estimator(rows, cols, total, effective.order,
                                            TwoStageMode::horizontal_stack, effective.weight_cap);
    const TwoStageEstimator average_estimator(rows, cols, total, effective.order,
                                              TwoStageMode::average, effective.weight_cap);
    const std::uint64_t base = stream_base;
    parallel_for(0, runs, [&](std::int64_t run) {
      std::vector<ComplexMatrix> observations;
      observations.reserve(static_cast<std::size_t>(total));
      for (int i = 0; i < total; ++i) {
        SeededSampler sampler(seed, base + static_cast<std::uint64_t>(run) * total +
                                        static_cast<std::uint64_t>(i));
        observations.push_back(observe_model2(mixing, cols, sampler));
      }
      // both modes read the same observations
      stacked[static_cast<std::size_t>(run)] = stack_estimator.estimate(observations).entries.at(target);
      averaged[static_cast<std::size_t>(run)] =
          average_estimator.estimate(observations).entries.at(target);
    });
    stream_base += static_cast<std::uint64_t>(runs) * static_cast<std::uint64_t>(total);

    for (const auto* mode : {"stack", "average"}) {
      const std::vector<double>& samples = mode == std::string("stack") ? stacked : averaged;
      double mean = 0.0;
      for (double x : samples) mean += x;
      mean /= static_cast<double>(samples.size());
      out << total << ',' << mode << ',' << format_real(mean) << ','
          << format_real(empirical_variance(samples)) << ',' << format_real(truth) << '\n';
    }
  }
}

}  // namespace momdec
