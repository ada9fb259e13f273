#include "momdec/variance.hpp"

#include <cassert>
#include <ostream>
#include <stdexcept>

#include "momdec/diagram.hpp"
#include "momdec/errors.hpp"
#include "momdec/format.hpp"

namespace momdec {

namespace {

void check_variance_inputs(int order, const ModelDims& dims, int weight_cap) {
  if (order < 1) throw std::invalid_argument("moment order must be positive");
  if (dims.rows < 1 || dims.cols < 1) throw std::invalid_argument("model dimensions must be positive");
  if (dims.noise_scale != 1)
    throw std::invalid_argument("variance formulas assume unit noise scale");
  if (order > weight_cap)
    throw capacity_error("variance order " + std::to_string(order) +
                         " exceeds the configured cap " + std::to_string(weight_cap));
}

// Shared cross-circle fold. block_rows == block_cols == 1 recovers the
// single-observation expression.
MomentExpression cross_fold(int order, const ModelDims& dims, const StackingScheme& scheme) {
  const long long rows_eff = static_cast<long long>(dims.rows) * scheme.block_rows;
  const long long cols_eff = static_cast<long long>(dims.cols) * scheme.block_cols;
  const DiagramShape shape = paired_shape(order);
  MomentExpression expr(MomentBasis::signal);
  for_each_spr(order, [&](const PartialPermutation& pp) {
    if (pp.size() == 0) return;  // no gluings: cancels against the squared mean
    const DiagramSummary s = summarize(shape, pp);
    Rational coeff =
        rational_pow(rows_eff, s.det_components - 2 + s.odd_classes - s.odd_classes_det);
    coeff *= rational_pow(cols_eff, s.even_classes - s.even_classes_det - s.contractions);
    // compound-to-signal scaling: block_rows^{2 - |rho1| - |sigma|}
    coeff *= rational_pow(scheme.block_rows, 2 - s.contractions - s.det_components);
    expr.add(PartitionIndex(s.det_block_halves), coeff);
  });
  return expr;
}

double evaluate_nonnegative(const MomentExpression& expr,
                            const std::map<PartitionIndex, double>& signal_moments) {
  const double value = expr.evaluate(signal_moments);
  assert(value >= 0.0);
  return value;
}

}  // namespace

MomentExpression variance_expression(int order, const ModelDims& dims, int weight_cap) {
  check_variance_inputs(order, dims, weight_cap);
  return cross_fold(order, dims, StackingScheme{1, 1});
}

MomentExpression stacked_variance_expression(int order, const ModelDims& dims,
                                             const StackingScheme& scheme, int weight_cap) {
  check_variance_inputs(order, dims, weight_cap);
  if (scheme.block_rows < 1 || scheme.block_cols < 1)
    throw std::invalid_argument("stacking block counts must be positive");
  return cross_fold(order, dims, scheme);
}

VarianceReport stacked_variance(int order, const ModelDims& dims, const StackingScheme& scheme,
                                const std::map<PartitionIndex, double>& signal_moments,
                                int weight_cap) {
  VarianceReport report;
  report.order = order;
  report.dims = dims;
  report.scheme = scheme;
  report.repetitions = scheme.count();
  report.expression = stacked_variance_expression(order, dims, scheme, weight_cap);
  report.value = evaluate_nonnegative(report.expression, signal_moments);
  return report;
}

VarianceReport averaging_variance(int order, const ModelDims& dims, int repetitions,
                                  const std::map<PartitionIndex, double>& signal_moments,
                                  int weight_cap) {
  if (repetitions < 1) throw std::invalid_argument("observation count must be positive");
  MomentExpression single = variance_expression(order, dims, weight_cap);
  MomentExpression scaled(MomentBasis::signal);
  const Rational inverse_count(1, repetitions);
  for (const auto& [partition, coefficient] : single.terms())
    scaled.add(partition, coefficient * inverse_count);
  VarianceReport report;
  report.order = order;
  report.dims = dims;
  report.scheme = std::nullopt;
  report.repetitions = repetitions;
  report.expression = std::move(scaled);
  report.value = evaluate_nonnegative(report.expression, signal_moments);
  return report;
}

AsymptoticLimits asymptotic_limits(int order, const ModelDims& dims,
                                   const std::map<PartitionIndex, double>& signal_moments,
                                   int weight_cap) {
  check_variance_inputs(order, dims, weight_cap);
  AsymptoticLimits limits;
  const double single = variance_expression(order, dims, weight_cap).evaluate(signal_moments);
  if (order == 1) {
    limits.rect = limits.vert = limits.horiz = limits.avg = single;
    return limits;
  }
  auto moment_at = [&](int q) {
    auto it = signal_moments.find(PartitionIndex::single(q));
    if (it == signal_moments.end())
      throw evaluation_error("no value supplied for moment partition " + std::to_string(q));
    return it->second;
  };
  const double p_sq = static_cast<double>(order) * order;
  const double rows = dims.rows;
  const double cols = dims.cols;
  limits.rect = 2.0 * p_sq / (rows * cols) * moment_at(2 * order - 1);
  limits.vert = limits.rect + p_sq / (cols * cols) * moment_at(2 * order - 2);
  limits.horiz = limits.rect + p_sq / (rows * cols) * moment_at(2 * order - 2);
  limits.avg = single;  // L * (single/L) is exact for averaging
  return limits;
}

std::vector<std::pair<int, int>> factorizations(int repetitions) {
  if (repetitions < 1) throw std::invalid_argument("observation count must be positive");
  std::vector<std::pair<int, int>> out;
  for (int left = 1; left <= repetitions; ++left)
    if (repetitions % left == 0) out.emplace_back(left, repetitions / left);
  return out;
}

StackingScheme optimal_stacking(const ModelDims& dims, int repetitions, int order) {
  if (order < 1) throw std::invalid_argument("moment order must be positive");
  if (dims.rows < 1 || dims.cols < 1) throw std::invalid_argument("model dimensions must be positive");
  StackingScheme best;
  Rational best_key;
  bool first = true;
  for (const auto& [left, right] : factorizations(repetitions)) {
    Rational ratio(static_cast<long long>(dims.rows) * left,
                   static_cast<long long>(dims.cols) * right);
    // |log ratio| compared exactly through max(ratio, 1/ratio)
    Rational key = ratio < 1 ? Rational(1) / ratio : ratio;
    if (first || key < best_key) {
      first = false;
      best_key = key;
      best = StackingScheme{left, right};
    }
  }
  return best;
}

void write_variance_curve_csv(std::ostream& out, int order, const ModelDims& dims,
                              const std::vector<int>& schedule,
                              const std::map<PartitionIndex, double>& signal_moments,
                              int weight_cap) {
  out << "L,L1,L2,c,kind,variance,L_times_variance\n";
  for (int total : schedule) {
    for (const auto& [left, right] : factorizations(total)) {
      const StackingScheme scheme{left, right};
      const VarianceReport report = stacked_variance(order, dims, scheme, signal_moments, weight_cap);
      const double aspect = static_cast<double>(dims.rows) * left / (static_cast<double>(dims.cols) * right);
      out << total << ',' << left << ',' << right << ',' << format_real(aspect) << ','
          << scheme.kind_label() << ',' << format_real(report.value) << ','
          << format_real(total * report.value) << '\n';
    }
    const VarianceReport avg = averaging_variance(order, dims, total, signal_moments, weight_cap);
    out << total << ",,,,A," << format_real(avg.value) << ',' << format_real(total * avg.value)
        << '\n';
  }
}

}  // namespace momdec
