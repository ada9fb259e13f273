#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "momdec/moments.hpp"

namespace momdec {

/// Exact estimator variance for one stacking (or averaging) layout.
struct VarianceReport {
  int order = 1;
  ModelDims dims;
  std::optional<StackingScheme> scheme;  // nullopt means averaging
  int repetitions = 1;                   // total observations L
  double value = 0.0;
  MomentExpression expression;  // signal basis, evaluated to produce value
};

/// The four large-L limits of L * variance.
struct AsymptoticLimits {
  double rect = 0.0;
  double vert = 0.0;
  double horiz = 0.0;
  double avg = 0.0;
};

/// Variance of the single-observation estimator of the order-p moment, as a
/// signal-moment combination: the cross-circle diagram sum with coefficients
/// n^{|sigma|-2} N^{-|rho1|} N^{k-kd} n^{l-ld}. The diagram with no gluings
/// cancels against the squared mean and is skipped; the all-glued diagrams
/// contribute the constant term.
MomentExpression variance_expression(int order, const ModelDims& dims,
                                     int weight_cap = kDefaultWeightCap);

/// Variance of the stacked estimator: the same sum with dimensions inflated
/// to (n*L1, N*L2) and the compound-to-signal moment scaling folded in.
MomentExpression stacked_variance_expression(int order, const ModelDims& dims,
                                             const StackingScheme& scheme,
                                             int weight_cap = kDefaultWeightCap);

VarianceReport stacked_variance(int order, const ModelDims& dims, const StackingScheme& scheme,
                                const std::map<PartitionIndex, double>& signal_moments,
                                int weight_cap = kDefaultWeightCap);

/// Variance of the mean of per-observation estimates: the single-observation
/// variance divided by the number of observations.
VarianceReport averaging_variance(int order, const ModelDims& dims, int repetitions,
                                  const std::map<PartitionIndex, double>& signal_moments,
                                  int weight_cap = kDefaultWeightCap);

/// Limits of L*variance for rectangular, vertical, horizontal stacking and
/// averaging. Requires signal moments up to order 2p-1.
AsymptoticLimits asymptotic_limits(int order, const ModelDims& dims,
                                   const std::map<PartitionIndex, double>& signal_moments,
                                   int weight_cap = kDefaultWeightCap);

/// All factorizations L = L1 * L2, ascending in L1.
std::vector<std::pair<int, int>> factorizations(int repetitions);

/// The factorization minimizing |log(n*L1 / (N*L2))|; ties resolved toward
/// the smaller L1. Squareness alone decides, for every order >= 1.
StackingScheme optimal_stacking(const ModelDims& dims, int repetitions, int order);

/// Variance curves as CSV: L,L1,L2,c,kind,variance,L_times_variance. Each L
/// in the schedule contributes one row per factorization plus an averaging
/// row (kind A, empty layout columns).
void write_variance_curve_csv(std::ostream& out, int order, const ModelDims& dims,
                              const std::vector<int>& schedule,
                              const std::map<PartitionIndex, double>& signal_moments,
                              int weight_cap = kDefaultWeightCap);

}  // namespace momdec
