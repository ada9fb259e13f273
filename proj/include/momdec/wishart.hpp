#pragma once

#include <iosfwd>
#include <map>
#include <vector>

#include "momdec/matrix_lab.hpp"
#include "momdec/moments.hpp"
#include "momdec/partition.hpp"
#include "momdec/rational.hpp"

namespace momdec {

/// Estimated mixed moments, one entry per partition of weight <= max order.
struct MomentVector {
  MomentBasis basis = MomentBasis::gram;
  std::map<PartitionIndex, double> entries;
};

/// Exact linear map between mixed-moment bases, indexed by all partitions of
/// weight 1..max_weight in weight-then-reverse-lexicographic order. The map
/// only mixes partitions of equal weight.
class WishartMap {
 public:
  WishartMap(int max_weight, int rows, long long effective_cols,
             std::vector<PartitionIndex> index, std::vector<std::vector<Rational>> cells);

  int max_weight() const { return max_weight_; }
  int rows() const { return rows_; }
  long long effective_cols() const { return effective_cols_; }
  const std::vector<PartitionIndex>& index() const { return index_; }

  const Rational& at(std::size_t row, std::size_t col) const { return cells_[row][col]; }
  const Rational& at(const PartitionIndex& row, const PartitionIndex& col) const;

  /// Apply to a partition-indexed vector; exact until the final conversion.
  std::map<PartitionIndex, double> apply(const std::map<PartitionIndex, double>& vec) const;

 private:
  std::size_t position(const PartitionIndex& partition) const;

  int max_weight_;
  int rows_;
  long long effective_cols_;
  std::vector<PartitionIndex> index_;
  std::vector<std::vector<Rational>> cells_;
};

/// Expected mixed moments of S = D ((1/N_eff) X X^H) D^H in terms of the
/// moments of D D^H: row lambda collects, over all permutations of its
/// weight, N_eff^{#cycles(sigma)-w} rows^{#cycles(gamma sigma)-k} onto the
/// cycle type of gamma sigma.
WishartMap wishart_forward(int max_weight, int rows, long long effective_cols,
                           int weight_cap = kDefaultWeightCap);

/// Exact inverse; throws degeneracy_error when the map is singular.
WishartMap invert_map(const WishartMap& map);

enum class TwoStageMode { horizontal_stack, average };

const char* mode_label(TwoStageMode mode);

/// Two-stage moment estimation for observations of D X1 + X2: stage one
/// applies the additive-model estimators (to the horizontally stacked
/// compound, or per observation and averaged), stage two inverts the Wishart
/// moment map. Coefficient tables and the inverse are built once, so one
/// instance can serve many Monte-Carlo repetitions.
class TwoStageEstimator {
 public:
  TwoStageEstimator(int rows, int cols_per_observation, int observation_count, int max_weight,
                    TwoStageMode mode, int weight_cap = kDefaultWeightCap);

  /// Estimated moments of D D^H, one entry per partition of weight
  /// 1..max_weight.
  MomentVector estimate(const std::vector<ComplexMatrix>& observations) const;

  TwoStageMode mode() const { return mode_; }
  long long effective_cols() const { return inverse_.effective_cols(); }

 private:
  int rows_;
  int cols_;
  int count_;
  TwoStageMode mode_;
  std::vector<PartitionIndex> targets_;
  std::vector<MomentExpression> stage_one_;
  std::vector<PartitionIndex> needed_;
  WishartMap inverse_;
};

/// One-shot convenience wrapper around TwoStageEstimator.
MomentVector two_stage_estimate(const std::vector<ComplexMatrix>& observations, int rows,
                                int cols_per_observation, int max_weight, TwoStageMode mode,
                                int weight_cap = kDefaultWeightCap);

/// CSV with columns partition,value.
void write_moment_vector_csv(std::ostream& out, const MomentVector& vec);

}  // namespace momdec
