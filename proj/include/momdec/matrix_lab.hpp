#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <random>
#include <vector>

#include "momdec/moments.hpp"
#include "momdec/partition.hpp"

namespace momdec {

using ComplexMatrix = Eigen::MatrixXcd;

/// Deterministic per-observation random stream: the same
/// (master_seed, stream_id) reproduces the same draws no matter in which
/// order or on which thread streams are consumed.
class SeededSampler {
 public:
  SeededSampler(std::uint64_t master_seed, std::uint64_t stream_id);

  /// Standard complex Gaussian: real and imaginary parts independent, each
  /// with variance 1/2.
  std::complex<double> next_complex_gaussian();

  std::uint64_t master_seed() const { return master_seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

 private:
  std::uint64_t master_seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 rng_;
};

/// rows x cols matrix of i.i.d. standard complex Gaussians, filled row major.
ComplexMatrix sample_gaussian(int rows, int cols, SeededSampler& sampler);

/// One observation of the additive model: signal + noise_scale * X.
ComplexMatrix observe_additive(const ComplexMatrix& signal, double noise_scale,
                               SeededSampler& sampler);

/// One observation of the product-plus-noise model: mixing * X1 + X2 with
/// X1 (inner x cols) and X2 (rows x cols) independent.
ComplexMatrix observe_model2(const ComplexMatrix& mixing, int cols, SeededSampler& sampler);

/// Compound block matrix: observations laid out row major into a
/// block_rows x block_cols grid.
ComplexMatrix stack(const std::vector<ComplexMatrix>& observations, const StackingScheme& scheme);

/// Trace powers of (1/col_norm) Y Y^H (normalized by the row count),
/// computed through the Gram matrix of the smaller side. Mixed partitions
/// evaluate to products of single-trace values.
std::map<PartitionIndex, double> gram_moments(const ComplexMatrix& matrix, double col_norm,
                                              const std::vector<PartitionIndex>& partitions);

/// Signal moments D_q = tr(((1/col_norm) D D^H)^q) for q = 1..max_order.
std::map<PartitionIndex, double> signal_moments(const ComplexMatrix& signal, double col_norm,
                                                int max_order);

/// Unbiased sample variance; requires at least two samples.
double empirical_variance(const std::vector<double>& samples);

/// Matrix file format: "rows cols" on the first line, then rows lines of
/// 2*cols reals alternating Re and Im.
ComplexMatrix read_matrix(std::istream& in);
void write_matrix(std::ostream& out, const ComplexMatrix& matrix);

/// rows x cols matrix with the given (real) leading diagonal.
ComplexMatrix diagonal_matrix(const std::vector<double>& diagonal, int rows, int cols);

}  // namespace momdec
