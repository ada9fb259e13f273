#include "momdec/matrix_lab.hpp"

#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>

#include "momdec/format.hpp"

namespace momdec {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

std::uint64_t stream_seed(std::uint64_t master, std::uint64_t stream) {
  return splitmix64(splitmix64(master) ^ splitmix64(stream + 0x632be59bd9b4e019ull));
}

}  // namespace

SeededSampler::SeededSampler(std::uint64_t master_seed, std::uint64_t stream_id)
    : master_seed_(master_seed), stream_id_(stream_id), rng_(stream_seed(master_seed, stream_id)) {}

std::complex<double> SeededSampler::next_complex_gaussian() {
  // Polar form: |z|^2 is exponential, the phase uniform. Uses exactly two
  // uniforms per draw, so streams advance at a fixed rate.
  const double u1 = (static_cast<double>(rng_() >> 11) + 1.0) * 0x1.0p-53;  // (0,1]
  const double u2 = static_cast<double>(rng_() >> 11) * 0x1.0p-53;          // [0,1)
  const double radius = std::sqrt(-std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  return {radius * std::cos(angle), radius * std::sin(angle)};
}

ComplexMatrix sample_gaussian(int rows, int cols, SeededSampler& sampler) {
  if (rows < 1 || cols < 1) throw std::invalid_argument("matrix dimensions must be positive");
  ComplexMatrix out(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) out(i, j) = sampler.next_complex_gaussian();
  return out;
}

ComplexMatrix observe_additive(const ComplexMatrix& signal, double noise_scale,
                               SeededSampler& sampler) {
  if (noise_scale < 0) throw std::invalid_argument("noise scale must be nonnegative");
  if (noise_scale == 0) return signal;
  return signal + noise_scale * sample_gaussian(static_cast<int>(signal.rows()),
                                                static_cast<int>(signal.cols()), sampler);
}

ComplexMatrix observe_model2(const ComplexMatrix& mixing, int cols, SeededSampler& sampler) {
  if (cols < 1) throw std::invalid_argument("matrix dimensions must be positive");
  const int rows = static_cast<int>(mixing.rows());
  const int inner = static_cast<int>(mixing.cols());
  const ComplexMatrix x1 = sample_gaussian(inner, cols, sampler);
  const ComplexMatrix x2 = sample_gaussian(rows, cols, sampler);
  return mixing * x1 + x2;
}

ComplexMatrix stack(const std::vector<ComplexMatrix>& observations, const StackingScheme& scheme) {
  if (scheme.block_rows < 1 || scheme.block_cols < 1)
    throw std::invalid_argument("stacking block counts must be positive");
  if (static_cast<int>(observations.size()) != scheme.count())
    throw std::invalid_argument("observation count does not match the stacking layout");
  const auto rows = observations.front().rows();
  const auto cols = observations.front().cols();
  for (const auto& obs : observations)
    if (obs.rows() != rows || obs.cols() != cols)
      throw std::invalid_argument("observations must share one shape");
  ComplexMatrix compound(rows * scheme.block_rows, cols * scheme.block_cols);
  for (int br = 0; br < scheme.block_rows; ++br)
    for (int bc = 0; bc < scheme.block_cols; ++bc)
      compound.block(br * rows, bc * cols, rows, cols) =
          observations[static_cast<std::size_t>(br) * scheme.block_cols + bc];
  return compound;
}

std::map<PartitionIndex, double> gram_moments(const ComplexMatrix& matrix, double col_norm,
                                              const std::vector<PartitionIndex>& partitions) {
  if (col_norm <= 0) throw std::invalid_argument("column normalization must be positive");
  int max_part = 0;
  for (const auto& partition : partitions)
    for (int part : partition.parts()) max_part = std::max(max_part, part);

  std::vector<double> trace_power(static_cast<std::size_t>(max_part) + 1, 0.0);
  if (max_part >= 1) {
    // Gram matrix on the smaller side; Tr((YY^H)^q) = Tr((Y^H Y)^q).
    const bool rows_smaller = matrix.rows() <= matrix.cols();
    ComplexMatrix gram = rows_smaller ? ComplexMatrix(matrix * matrix.adjoint())
                                      : ComplexMatrix(matrix.adjoint() * matrix);
    gram /= col_norm;
    ComplexMatrix power = gram;
    const double rows = static_cast<double>(matrix.rows());
    for (int q = 1; q <= max_part; ++q) {
      trace_power[static_cast<std::size_t>(q)] = power.trace().real() / rows;
      if (q < max_part) power = power * gram;
    }
  }

  std::map<PartitionIndex, double> out;
  for (const auto& partition : partitions) {
    double product = 1.0;
    for (int part : partition.parts()) product *= trace_power[static_cast<std::size_t>(part)];
    out[partition] = product;
  }
  return out;
}

std::map<PartitionIndex, double> signal_moments(const ComplexMatrix& signal, double col_norm,
                                                int max_order) {
  std::vector<PartitionIndex> singles;
  singles.reserve(static_cast<std::size_t>(max_order));
  for (int q = 1; q <= max_order; ++q) singles.push_back(PartitionIndex::single(q));
  return gram_moments(signal, col_norm, singles);
}

double empirical_variance(const std::vector<double>& samples) {
  const std::size_t count = samples.size();
  if (count < 2) throw std::invalid_argument("sample variance needs at least two samples");
  double mean = 0.0;
  for (double x : samples) mean += x;
  mean /= static_cast<double>(count);
  double sum_sq = 0.0;
  for (double x : samples) sum_sq += (x - mean) * (x - mean);
  return sum_sq / static_cast<double>(count - 1);
}

ComplexMatrix read_matrix(std::istream& in) {
  int rows = 0;
  int cols = 0;
  if (!(in >> rows >> cols) || rows < 1 || cols < 1)
    throw std::invalid_argument("matrix file must start with positive \"rows cols\"");
  ComplexMatrix out(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      double re = 0.0;
      double im = 0.0;
      if (!(in >> re >> im)) throw std::invalid_argument("matrix file ended before all entries");
      out(i, j) = {re, im};
    }
  }
  return out;
}

void write_matrix(std::ostream& out, const ComplexMatrix& matrix) {
  out << matrix.rows() << ' ' << matrix.cols() << '\n';
  for (Eigen::Index i = 0; i < matrix.rows(); ++i) {
    for (Eigen::Index j = 0; j < matrix.cols(); ++j) {
      if (j != 0) out << ' ';
      out << format_real(matrix(i, j).real()) << ' ' << format_real(matrix(i, j).imag());
    }
    out << '\n';
  }
}

ComplexMatrix diagonal_matrix(const std::vector<double>& diagonal, int rows, int cols) {
  if (rows < 1 || cols < 1) throw std::invalid_argument("matrix dimensions must be positive");
  if (static_cast<int>(diagonal.size()) > std::min(rows, cols))
    throw std::invalid_argument("diagonal longer than the matrix diagonal");
  ComplexMatrix out = ComplexMatrix::Zero(rows, cols);
  for (std::size_t i = 0; i < diagonal.size(); ++i)
    out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = diagonal[i];
  return out;
}

}  // namespace momdec
