#include "momdec/moments.hpp"

#include <ostream>
#include <stdexcept>
#include <type_traits>

#include "momdec/diagram.hpp"
#include "momdec/errors.hpp"

namespace momdec {

const char* basis_label(MomentBasis basis) {
  switch (basis) {
    case MomentBasis::signal: return "signal";
    case MomentBasis::observed: return "observed";
    case MomentBasis::first_stage: return "first_stage";
    case MomentBasis::gram: return "gram";
  }
  return "unknown";
}

void MomentExpression::add(PartitionIndex partition, const Rational& coefficient) {
  if (coefficient == 0) return;
  auto [it, inserted] = terms_.try_emplace(std::move(partition), coefficient);
  if (!inserted) {
    it->second += coefficient;
    if (it->second == 0) terms_.erase(it);
  }
}

Rational MomentExpression::coefficient(const PartitionIndex& partition) const {
  auto it = terms_.find(partition);
  return it == terms_.end() ? Rational(0) : it->second;
}

namespace {

template <typename Value>
Rational lookup_moment(const PartitionIndex& partition, const std::map<PartitionIndex, Value>& values) {
  auto as_rational = [](const Value& v) {
    if constexpr (std::is_same_v<Value, Rational>)
      return v;
    else
      return rational_from_double(v);
  };
  if (partition.empty()) return Rational(1);
  if (auto it = values.find(partition); it != values.end()) return as_rational(it->second);
  // fall back to the product of single-trace entries
  Rational product(1);
  for (int part : partition.parts()) {
    auto it = values.find(PartitionIndex::single(part));
    if (it == values.end())
      throw evaluation_error("no value supplied for moment partition " + partition.to_string());
    product *= as_rational(it->second);
  }
  return product;
}

}  // namespace

double MomentExpression::evaluate(const std::map<PartitionIndex, double>& values) const {
  Rational acc(0);
  for (const auto& [partition, coefficient] : terms_) acc += coefficient * lookup_moment(partition, values);
  return to_double(acc);
}

Rational MomentExpression::evaluate_exact(const std::map<PartitionIndex, Rational>& values) const {
  Rational acc(0);
  for (const auto& [partition, coefficient] : terms_) acc += coefficient * lookup_moment(partition, values);
  return acc;
}

namespace {

void check_weight(const PartitionIndex& parts, int weight_cap) {
  if (parts.weight() > weight_cap)
    throw capacity_error("moment weight " + std::to_string(parts.weight()) +
                         " exceeds the configured cap " + std::to_string(weight_cap));
}

// Shared diagram fold behind the forward map and the estimator tables.
MomentExpression diagram_fold(const DiagramShape& shape, long long rows_eff, long long cols_eff,
                              const Rational& noise_sq, bool alternating, MomentBasis basis) {
  MomentExpression expr(basis);
  const int circles = shape.circle_count();
  for_each_sp(shape, [&](const PartialPermutation& pp) {
    const DiagramSummary s = summarize(shape, pp);
    Rational coeff = rational_pow(rows_eff, s.det_components - circles + s.odd_classes - s.odd_classes_det);
    coeff *= rational_pow(cols_eff, s.even_classes - s.even_classes_det - s.contractions);
    if (noise_sq != 1) coeff *= rational_pow(noise_sq, s.contractions);
    if (alternating && (s.contractions % 2 != 0)) coeff = -coeff;
    expr.add(PartitionIndex(s.det_block_halves), coeff);
  });
  return expr;
}

void check_dims(const ModelDims& dims) {
  if (dims.rows < 1 || dims.cols < 1) throw std::invalid_argument("model dimensions must be positive");
}

}  // namespace

MomentExpression forward_map(const PartitionIndex& parts, const ModelDims& dims, int weight_cap) {
  check_dims(dims);
  check_weight(parts, weight_cap);
  if (parts.empty()) {
    MomentExpression constant(MomentBasis::signal);
    constant.add(PartitionIndex{}, 1);
    return constant;
  }
  return diagram_fold(DiagramShape{parts.parts()}, dims.rows, dims.cols,
                      dims.noise_scale * dims.noise_scale, false, MomentBasis::signal);
}

MomentExpression estimator_coeffs(const PartitionIndex& parts, const ModelDims& dims, int weight_cap) {
  check_dims(dims);
  check_weight(parts, weight_cap);
  if (parts.empty()) throw std::invalid_argument("estimator target partition must be nonempty");
  return diagram_fold(DiagramShape{parts.parts()}, dims.rows, dims.cols,
                      dims.noise_scale * dims.noise_scale, true, MomentBasis::observed);
}

MomentExpression stacked_estimator_coeffs(const PartitionIndex& parts, const ModelDims& dims,
                                          const StackingScheme& scheme, int weight_cap) {
  check_dims(dims);
  check_weight(parts, weight_cap);
  if (scheme.block_rows < 1 || scheme.block_cols < 1)
    throw std::invalid_argument("stacking block counts must be positive");
  if (parts.empty()) throw std::invalid_argument("estimator target partition must be nonempty");
  const ModelDims compound{dims.rows * scheme.block_rows, dims.cols * scheme.block_cols,
                           dims.noise_scale};
  MomentExpression raw = estimator_coeffs(parts, compound, weight_cap);
  const Rational prefactor =
      rational_pow(scheme.block_rows, static_cast<long>(parts.parts().size()) - parts.weight());
  MomentExpression expr(MomentBasis::observed);
  for (const auto& [partition, coefficient] : raw.terms()) expr.add(partition, coefficient * prefactor);
  return expr;
}

MomentExpression noisy_estimator_coeffs(const PartitionIndex& parts, const ModelDims& dims,
                                        int weight_cap) {
  if (dims.noise_scale <= 0) throw std::invalid_argument("noise scale must be positive");
  return estimator_coeffs(parts, dims, weight_cap);
}

Rational scale_moments(const PartitionIndex& parts, int block_rows) {
  if (parts.empty()) throw std::invalid_argument("scale_moments requires a nonempty partition");
  Rational factor(1);
  for (int part : parts.parts()) factor *= rational_pow(block_rows, part - 1);
  return factor;
}

MomentExpression expected_estimate_signal_basis(const PartitionIndex& parts, const ModelDims& dims,
                                                const StackingScheme& scheme, int weight_cap) {
  const MomentExpression estimator = stacked_estimator_coeffs(parts, dims, scheme, weight_cap);
  const ModelDims compound{dims.rows * scheme.block_rows, dims.cols * scheme.block_cols,
                           dims.noise_scale};
  MomentExpression expected(MomentBasis::signal);
  for (const auto& [observed, coefficient] : estimator.terms()) {
    if (observed.empty()) {
      expected.add(observed, coefficient);
      continue;
    }
    const MomentExpression forward = forward_map(observed, compound, weight_cap);
    for (const auto& [partition, weight] : forward.terms()) {
      const Rational scale = partition.empty() ? Rational(1) : scale_moments(partition, scheme.block_rows);
      expected.add(partition, coefficient * weight * scale);
    }
  }
  return expected;
}

void write_coefficients_csv(std::ostream& out, const MomentExpression& expr) {
  out << "partition,numerator,denominator\n";
  for (const auto& [partition, coefficient] : expr.terms()) {
    out << partition.to_string() << ',' << numerator(coefficient).str() << ','
        << denominator(coefficient).str() << '\n';
  }
}

}  // namespace momdec
