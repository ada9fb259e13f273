#pragma once

#include <iosfwd>
#include <map>
#include <string>

#include "momdec/partition.hpp"
#include "momdec/rational.hpp"

namespace momdec {

/// Which family of mixed moments an expression's partitions index.
enum class MomentBasis {
  signal,       // trace powers of (1/N) D D^H
  observed,     // trace powers of (1/N) Y Y^H for one realization
  first_stage,  // expected trace powers of D ((1/N_eff) X X^H) D^H
  gram,         // trace powers of D D^H, no column normalization
};

const char* basis_label(MomentBasis basis);

/// Matrix dimensions of one observation, plus the known noise scale of the
/// additive model Y = D + noise_scale * X. Kept exact so coefficient tables
/// stay rational.
struct ModelDims {
  int rows = 1;
  int cols = 1;
  Rational noise_scale = 1;
};

/// Block layout of stacked observations: block_rows x block_cols copies.
struct StackingScheme {
  int block_rows = 1;  // vertical copies (L1)
  int block_cols = 1;  // horizontal copies (L2)

  int count() const { return block_rows * block_cols; }

  enum class Kind { horizontal, vertical, rectangular };
  Kind kind() const {
    if (block_rows == 1) return Kind::horizontal;
    if (block_cols == 1) return Kind::vertical;
    return Kind::rectangular;
  }
  const char* kind_label() const {
    switch (kind()) {
      case Kind::horizontal: return "H";
      case Kind::vertical: return "V";
      default: return "R";
    }
  }
};

/// Linear combination of mixed moments with exact rational coefficients.
/// The empty partition indexes the constant term.
class MomentExpression {
 public:
  explicit MomentExpression(MomentBasis basis = MomentBasis::signal) : basis_(basis) {}

  MomentBasis basis() const { return basis_; }
  const std::map<PartitionIndex, Rational>& terms() const { return terms_; }

  void add(PartitionIndex partition, const Rational& coefficient);
  Rational coefficient(const PartitionIndex& partition) const;

  bool operator==(const MomentExpression& other) const { return terms_ == other.terms_; }

  /// Sum of coefficient*value, carried out in exact arithmetic and converted
  /// to double once at the end. Mixed partitions missing from the map are
  /// evaluated as products of their single-part entries.
  double evaluate(const std::map<PartitionIndex, double>& values) const;
  Rational evaluate_exact(const std::map<PartitionIndex, Rational>& values) const;

 private:
  MomentBasis basis_;
  std::map<PartitionIndex, Rational> terms_;
};

/// Weight cap for coefficient construction; raise explicitly for larger
/// orders (diagram counts grow super-exponentially).
inline constexpr int kDefaultWeightCap = 4;

/// Expected observed mixed moment as a signal-moment combination: the
/// diagram sum with coefficients n^{|sigma|-k} N^{-|rho1|} N^{k-kd} n^{l-ld},
/// each scaled by noise_scale^{2|rho1|}.
MomentExpression forward_map(const PartitionIndex& parts, const ModelDims& dims,
                             int weight_cap = kDefaultWeightCap);

/// Unbiased estimator of a signal mixed moment from one observation's
/// moments: the forward sum with the alternating sign (-1)^{|rho1|}.
MomentExpression estimator_coeffs(const PartitionIndex& parts, const ModelDims& dims,
                                  int weight_cap = kDefaultWeightCap);

/// Estimator on the compound observation matrix: per-observation dims are
/// inflated to (rows*block_rows, cols*block_cols) and the whole table is
/// scaled by block_rows^{k - weight}. Observed moments refer to the compound
/// matrix normalized by 1/(cols*block_cols).
MomentExpression stacked_estimator_coeffs(const PartitionIndex& parts, const ModelDims& dims,
                                          const StackingScheme& scheme,
                                          int weight_cap = kDefaultWeightCap);

/// estimator_coeffs for a model with known noise scale; requires
/// dims.noise_scale > 0.
MomentExpression noisy_estimator_coeffs(const PartitionIndex& parts, const ModelDims& dims,
                                        int weight_cap = kDefaultWeightCap);

/// Factor mapping a signal mixed moment to the matching compound-matrix
/// moment: product of block_rows^{part-1} over the parts.
Rational scale_moments(const PartitionIndex& parts, int block_rows);

/// Symbolic expectation of the stacked estimator, expressed over signal
/// moments. Unbiasedness means this equals the target partition with
/// coefficient one.
MomentExpression expected_estimate_signal_basis(const PartitionIndex& parts, const ModelDims& dims,
                                                const StackingScheme& scheme,
                                                int weight_cap = kDefaultWeightCap);

/// Coefficient table as CSV: partition,numerator,denominator.
void write_coefficients_csv(std::ostream& out, const MomentExpression& expr);

}  // namespace momdec
