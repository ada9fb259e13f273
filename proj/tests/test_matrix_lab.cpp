#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "momdec/matrix_lab.hpp"
#include "momdec/parallel.hpp"

using namespace momdec;

namespace {

struct MeanWithError {
  double mean = 0.0;
  double standard_error = 0.0;
};

MeanWithError summarize_samples(const std::vector<double>& samples) {
  MeanWithError out;
  for (double x : samples) out.mean += x;
  out.mean /= static_cast<double>(samples.size());
  out.standard_error =
      std::sqrt(empirical_variance(samples) / static_cast<double>(samples.size()));
  return out;
}

const ComplexMatrix kSignal = diagonal_matrix({2.0, 1.0, 1.0, 0.5}, 4, 4);

}  // namespace

TEST_CASE("gaussian sampling harness hits the model's first moments") {
  const int runs = 10000;
  std::vector<double> trace_power(runs);
  std::vector<double> trace_real(runs);
  std::vector<double> entry_real(runs);
  for (int r = 0; r < runs; ++r) {
    SeededSampler sampler(11, static_cast<std::uint64_t>(r));
    const ComplexMatrix x = sample_gaussian(4, 4, sampler);
    trace_power[static_cast<std::size_t>(r)] =
        gram_moments(x, 4.0, {PartitionIndex{1}}).at(PartitionIndex{1});
    trace_real[static_cast<std::size_t>(r)] = x.trace().real();
    entry_real[static_cast<std::size_t>(r)] = x(0, 0).real();
  }
  const MeanWithError power = summarize_samples(trace_power);
  CHECK(std::abs(power.mean - 1.0) < 3 * power.standard_error);
  const MeanWithError trace = summarize_samples(trace_real);
  CHECK(std::abs(trace.mean) < 3 * trace.standard_error);
  // Var(Re X_11) = 1/2; the sample variance of K draws has SE ~ var*sqrt(2/(K-1))
  const double variance = empirical_variance(entry_real);
  CHECK(std::abs(variance - 0.5) < 3 * 0.5 * std::sqrt(2.0 / (runs - 1)));
}

TEST_CASE("additive observations") {
  SeededSampler sampler(3, 0);
  CHECK(observe_additive(kSignal, 0.0, sampler) == kSignal);

  const int runs = 10000;
  std::vector<double> traces(runs);
  for (int r = 0; r < runs; ++r) {
    SeededSampler per_run(5, static_cast<std::uint64_t>(r));
    const ComplexMatrix y = observe_additive(kSignal, 1.0, per_run);
    traces[static_cast<std::size_t>(r)] =
        gram_moments(y, 4.0, {PartitionIndex{1}}).at(PartitionIndex{1});
  }
  const MeanWithError stats = summarize_samples(traces);
  CHECK(std::abs(stats.mean - 1.390625) < 3 * stats.standard_error);  // D_1 + 1
}

TEST_CASE("product-model observations") {
  const int runs = 10000;
  SUBCASE("identity mixing doubles the mean trace") {
    const ComplexMatrix identity = diagonal_matrix({1, 1, 1, 1}, 4, 4);
    std::vector<double> traces(runs);
    for (int r = 0; r < runs; ++r) {
      SeededSampler sampler(7, static_cast<std::uint64_t>(r));
      const ComplexMatrix y = observe_model2(identity, 4, sampler);
      traces[static_cast<std::size_t>(r)] =
          gram_moments(y, 4.0, {PartitionIndex{1}}).at(PartitionIndex{1});
    }
    const MeanWithError stats = summarize_samples(traces);
    CHECK(std::abs(stats.mean - 2.0) < 3 * stats.standard_error);
  }
  SUBCASE("reference diagonal mixing") {
    std::vector<double> traces(runs);
    for (int r = 0; r < runs; ++r) {
      SeededSampler sampler(202, static_cast<std::uint64_t>(r));
      const ComplexMatrix y = observe_model2(kSignal, 4, sampler);
      traces[static_cast<std::size_t>(r)] =
          gram_moments(y, 4.0, {PartitionIndex{1}}).at(PartitionIndex{1});
    }
    const MeanWithError stats = summarize_samples(traces);
    CHECK(std::abs(stats.mean - 2.5625) < 3 * stats.standard_error);  // tr_n(DD^H) + 1
  }
  SUBCASE("dimension mismatch is rejected") {
    SeededSampler sampler(1, 1);
    CHECK_THROWS_AS(observe_model2(kSignal, 0, sampler), std::invalid_argument);
  }
}

TEST_CASE("block stacking") {
  std::vector<ComplexMatrix> observations;
  for (int i = 0; i < 6; ++i) {
    SeededSampler sampler(13, static_cast<std::uint64_t>(i));
    observations.push_back(sample_gaussian(4, 5, sampler));
  }
  const ComplexMatrix compound = stack(observations, StackingScheme{2, 3});
  CHECK(compound.rows() == 8);
  CHECK(compound.cols() == 15);
  // row-major fill: observation index = block_row * block_cols + block_col
  CHECK(compound.block(0, 5, 4, 5) == observations[1]);
  CHECK(compound.block(4, 0, 4, 5) == observations[3]);

  CHECK(stack({observations[0]}, StackingScheme{1, 1}) == observations[0]);
  CHECK_THROWS_AS(stack(observations, StackingScheme{2, 2}), std::invalid_argument);
}

TEST_CASE("stacking copies of the signal scales its moments") {
  const auto base = signal_moments(kSignal, 4.0, 4);
  for (const StackingScheme& scheme : {StackingScheme{2, 3}, StackingScheme{4, 1}, StackingScheme{1, 5}}) {
    const std::vector<ComplexMatrix> copies(static_cast<std::size_t>(scheme.count()), kSignal);
    const ComplexMatrix compound = stack(copies, scheme);
    const auto stacked_moments = signal_moments(compound, 4.0 * scheme.block_cols, 4);
    for (int order = 1; order <= 4; ++order) {
      const double expected =
          std::pow(scheme.block_rows, order - 1) * base.at(PartitionIndex::single(order));
      const double actual = stacked_moments.at(PartitionIndex::single(order));
      CHECK(std::abs(actual - expected) <= 1e-10 * std::abs(expected));
    }
  }
}

TEST_CASE("gram moments") {
  SUBCASE("identity matrix") {
    const ComplexMatrix identity = diagonal_matrix({1, 1, 1, 1, 1}, 5, 5);
    const auto moments =
        gram_moments(identity, 5.0, {PartitionIndex{1}, PartitionIndex{2}, PartitionIndex{3}});
    CHECK(moments.at(PartitionIndex{1}) == doctest::Approx(1.0 / 5).epsilon(1e-14));
    CHECK(moments.at(PartitionIndex{2}) == doctest::Approx(1.0 / 25).epsilon(1e-14));
    CHECK(moments.at(PartitionIndex{3}) == doctest::Approx(1.0 / 125).epsilon(1e-14));
  }
  SUBCASE("known singular values, wide and tall") {
    const ComplexMatrix wide = diagonal_matrix({2.0, 1.0, 1.0, 0.5}, 4, 7);
    CHECK(gram_moments(wide, 4.0, {PartitionIndex{3}}).at(PartitionIndex{3}) ==
          doctest::Approx(0.25787353515625).epsilon(1e-14));
    const ComplexMatrix tall = diagonal_matrix({2.0, 1.0, 1.0, 0.5}, 7, 4);
    CHECK(gram_moments(tall, 4.0, {PartitionIndex{3}}).at(PartitionIndex{3}) ==
          doctest::Approx(0.25787353515625 * 4 / 7).epsilon(1e-14));
  }
  SUBCASE("mixed partitions multiply single traces") {
    SeededSampler sampler(17, 0);
    const ComplexMatrix y = sample_gaussian(3, 6, sampler);
    const auto moments = gram_moments(y, 6.0, {PartitionIndex{1}, PartitionIndex{1, 1}});
    CHECK(moments.at(PartitionIndex{1, 1}) ==
          doctest::Approx(moments.at(PartitionIndex{1}) * moments.at(PartitionIndex{1}))
              .epsilon(1e-14));
  }
  SUBCASE("bad normalization is rejected") {
    CHECK_THROWS_AS(gram_moments(kSignal, 0.0, {PartitionIndex{1}}), std::invalid_argument);
  }
}

TEST_CASE("sample variance") {
  CHECK(empirical_variance({1.0, 1.0, 1.0}) == 0.0);
  CHECK(empirical_variance({0.0, 2.0}) == 2.0);
  CHECK_THROWS_AS(empirical_variance({1.0}), std::invalid_argument);
}

TEST_CASE("streams are reproducible and order independent") {
  SeededSampler first(42, 7);
  SeededSampler second(42, 7);
  const ComplexMatrix a = sample_gaussian(3, 3, first);
  const ComplexMatrix b = sample_gaussian(3, 3, second);
  CHECK(a == b);

  SeededSampler other_stream(42, 8);
  CHECK(sample_gaussian(3, 3, other_stream) != a);

  // thread count must not influence the sampled values
  std::vector<double> serial(64);
  std::vector<double> threaded(64);
  auto fill = [](std::vector<double>& out, unsigned threads) {
    parallel_for(
        0, static_cast<std::int64_t>(out.size()),
        [&](std::int64_t i) {
          SeededSampler sampler(99, static_cast<std::uint64_t>(i));
          out[static_cast<std::size_t>(i)] =
              sample_gaussian(2, 2, sampler)(1, 1).real();
        },
        threads);
  };
  fill(serial, 1);
  fill(threaded, 4);
  CHECK(serial == threaded);
}

TEST_CASE("fill order of the compound matrix does not shift the estimator mean") {
  // observations are exchangeable, so a column-major arrangement must agree
  // with the row-major one in distribution; compare paired estimates
  const ModelDims dims{4, 4, 1};
  const StackingScheme scheme{2, 3};
  const MomentExpression expr = stacked_estimator_coeffs(PartitionIndex{2}, dims, scheme);
  std::vector<PartitionIndex> needed;
  for (const auto& [partition, coeff] : expr.terms())
    if (!partition.empty()) needed.push_back(partition);

  const int runs = 10000;
  std::vector<double> difference(runs);
  for (int r = 0; r < runs; ++r) {
    std::vector<ComplexMatrix> observations;
    observations.reserve(6);
    for (int i = 0; i < 6; ++i) {
      SeededSampler sampler(57, static_cast<std::uint64_t>(r) * 6 + i);
      observations.push_back(observe_additive(kSignal, 1.0, sampler));
    }
    const ComplexMatrix row_major = stack(observations, scheme);
    ComplexMatrix col_major(8, 12);
    for (int br = 0; br < 2; ++br)
      for (int bc = 0; bc < 3; ++bc)
        col_major.block(br * 4, bc * 4, 4, 4) = observations[static_cast<std::size_t>(bc) * 2 + br];
    const double a = expr.evaluate(gram_moments(row_major, 12.0, needed));
    const double b = expr.evaluate(gram_moments(col_major, 12.0, needed));
    difference[static_cast<std::size_t>(r)] = a - b;
  }
  const MeanWithError stats = summarize_samples(difference);
  CHECK(std::abs(stats.mean) < 3 * stats.standard_error);
}

TEST_CASE("matrix file round trip") {
  SeededSampler sampler(23, 0);
  const ComplexMatrix original = sample_gaussian(3, 2, sampler);
  std::stringstream buffer;
  write_matrix(buffer, original);
  const ComplexMatrix restored = read_matrix(buffer);
  REQUIRE(restored.rows() == original.rows());
  REQUIRE(restored.cols() == original.cols());
  for (Eigen::Index i = 0; i < original.rows(); ++i)
    for (Eigen::Index j = 0; j < original.cols(); ++j)
      CHECK(std::abs(restored(i, j) - original(i, j)) < 1e-10);

  std::stringstream malformed("2 2\n1 0 0 0\n");
  CHECK_THROWS_AS(read_matrix(malformed), std::invalid_argument);
}

TEST_CASE("diagonal shorthand") {
  const ComplexMatrix padded = diagonal_matrix({2.0, 1.0}, 3, 4);
  CHECK(padded.rows() == 3);
  CHECK(padded.cols() == 4);
  CHECK(padded(0, 0) == std::complex<double>(2.0, 0.0));
  CHECK(padded(2, 2) == std::complex<double>(0.0, 0.0));
  CHECK_THROWS_AS(diagonal_matrix({1.0, 1.0, 1.0}, 2, 2), std::invalid_argument);
}
