#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "momdec/errors.hpp"
#include "momdec/parallel.hpp"
#include "momdec/wishart.hpp"
#include "oracles.hpp"

using namespace momdec;

namespace {

// Moments of a diagonal Gram spectrum, one entry per single partition.
std::map<PartitionIndex, Rational> gram_spectrum_moments(const std::vector<Rational>& eigenvalues,
                                                         int rows, int max_order) {
  std::map<PartitionIndex, Rational> out;
  for (int q = 1; q <= max_order; ++q) {
    Rational sum(0);
    for (const Rational& value : eigenvalues) sum += rational_pow(value, q);
    out[PartitionIndex::single(q)] = sum / rows;
  }
  return out;
}

const ComplexMatrix kMixing = diagonal_matrix({2.0, 1.0, 1.0, 0.5}, 4, 4);
// tr_n((D D^H)^q) for the reference diagonal
const double kGram1 = 1.5625;
const double kGram2 = 4.515625;
const double kGram3 = 16.50390625;

}  // namespace

TEST_CASE("forward map blocks match the low-weight closed forms") {
  for (int rows : {1, 2, 4}) {
    for (long long cols_eff : {2LL, 3LL, 8LL}) {
      const WishartMap map = wishart_forward(2, rows, cols_eff);
      const Rational ratio(rows, cols_eff);
      CHECK(map.at(PartitionIndex{1}, PartitionIndex{1}) == 1);
      CHECK(map.at(PartitionIndex{2}, PartitionIndex{2}) == 1);
      CHECK(map.at(PartitionIndex{2}, PartitionIndex{1, 1}) == ratio);
      CHECK(map.at(PartitionIndex{1, 1}, PartitionIndex{2}) ==
            Rational(1, rows * cols_eff));
      CHECK(map.at(PartitionIndex{1, 1}, PartitionIndex{1, 1}) == 1);
      // weight is preserved: no mixing into the weight-one block
      CHECK(map.at(PartitionIndex{2}, PartitionIndex{1}) == 0);
      CHECK(map.at(PartitionIndex{1, 1}, PartitionIndex{1}) == 0);
      CHECK(map.at(PartitionIndex{1}, PartitionIndex{2}) == 0);
    }
  }
}

TEST_CASE("forward map equals the raw pairing oracle") {
  const std::vector<std::vector<Rational>> spectra{{Rational(7, 4)},
                                                   {Rational(7, 4), Rational(1, 3)},
                                                   {Rational(2), Rational(1, 5)}};
  for (const auto& spectrum : spectra) {
    const int rows = static_cast<int>(spectrum.size());
    for (long long cols_eff : {1LL, 2LL, 3LL}) {
      const WishartMap map = wishart_forward(3, rows, cols_eff);
      const auto gram = gram_spectrum_moments(spectrum, rows, 3);
      for (const auto& target : partitions_up_to(3)) {
        const int weight = target.weight();
        const int traces = static_cast<int>(target.parts().size());
        Rational produced(0);
        for (const auto& column : map.index())
          if (map.at(target, column) != 0) {
            Rational value(1);
            for (int part : column.parts()) value *= gram.at(PartitionIndex::single(part));
            produced += map.at(target, column) * value;
          }
        const Rational expected = oracle::wishart_trace_moment(target, spectrum, static_cast<int>(cols_eff)) *
                                  rational_pow(rows, -static_cast<long>(traces)) *
                                  rational_pow(cols_eff, -static_cast<long>(weight));
        CHECK(produced == expected);
      }
    }
  }
}

TEST_CASE("map inversion") {
  SUBCASE("weight one is the identity") {
    const WishartMap inverse = invert_map(wishart_forward(1, 3, 5));
    CHECK(inverse.at(PartitionIndex{1}, PartitionIndex{1}) == 1);
  }
  SUBCASE("weight-two block inverse at two effective columns") {
    for (int rows : {1, 2, 4}) {
      const WishartMap inverse = invert_map(wishart_forward(2, rows, 2));
      const Rational scale(4, 3);  // 1/(1 - 1/4)
      CHECK(inverse.at(PartitionIndex{2}, PartitionIndex{2}) == scale);
      CHECK(inverse.at(PartitionIndex{2}, PartitionIndex{1, 1}) == -scale * Rational(rows, 2));
      CHECK(inverse.at(PartitionIndex{1, 1}, PartitionIndex{2}) == -scale * Rational(1, 2 * rows));
      CHECK(inverse.at(PartitionIndex{1, 1}, PartitionIndex{1, 1}) == scale);
    }
  }
  SUBCASE("forward composed with inverse is the identity") {
    const WishartMap forward = wishart_forward(3, 2, 7);
    const WishartMap inverse = invert_map(forward);
    const std::size_t size = forward.index().size();
    for (std::size_t r = 0; r < size; ++r) {
      for (std::size_t c = 0; c < size; ++c) {
        Rational dot(0);
        for (std::size_t k = 0; k < size; ++k) dot += inverse.at(r, k) * forward.at(k, c);
        CHECK(dot == (r == c ? 1 : 0));
      }
    }
  }
  SUBCASE("a single effective column degenerates the weight-two block") {
    CHECK_THROWS_AS(invert_map(wishart_forward(2, 3, 1)), degeneracy_error);
  }
}

TEST_CASE("map application reports missing partitions") {
  const WishartMap map = wishart_forward(2, 2, 3);
  CHECK_THROWS_AS(map.apply({{PartitionIndex{1}, 1.0}}), evaluation_error);
}

TEST_CASE("two-stage estimates are unbiased in the mean") {
  const int runs = 10000;
  const int total = 20;
  SUBCASE("zero mixing gives zero first moments") {
    const ComplexMatrix zero = diagonal_matrix({0.0, 0.0}, 2, 2);
    for (TwoStageMode mode : {TwoStageMode::horizontal_stack, TwoStageMode::average}) {
      std::vector<double> estimates(runs);
      const TwoStageEstimator estimator(2, 2, 3, 1, mode);
      parallel_for(0, runs, [&](std::int64_t run) {
        std::vector<ComplexMatrix> observations;
        for (int i = 0; i < 3; ++i) {
          SeededSampler sampler(31, static_cast<std::uint64_t>(run) * 3 + i);
          observations.push_back(observe_model2(zero, 2, sampler));
        }
        estimates[static_cast<std::size_t>(run)] =
            estimator.estimate(observations).entries.at(PartitionIndex{1});
      });
      double mean = 0.0;
      for (double x : estimates) mean += x;
      mean /= runs;
      const double se = std::sqrt(empirical_variance(estimates) / runs);
      CHECK(std::abs(mean) < 3 * se);
    }
  }
  SUBCASE("reference mixing, both modes, weights up to three") {
    for (TwoStageMode mode : {TwoStageMode::horizontal_stack, TwoStageMode::average}) {
      std::vector<double> first(runs);
      std::vector<double> second(runs);
      std::vector<double> third(runs);
      const TwoStageEstimator estimator(4, 4, total, 3, mode);
      parallel_for(0, runs, [&](std::int64_t run) {
        std::vector<ComplexMatrix> observations;
        observations.reserve(total);
        for (int i = 0; i < total; ++i) {
          SeededSampler sampler(37, static_cast<std::uint64_t>(run) * total + i);
          observations.push_back(observe_model2(kMixing, 4, sampler));
        }
        const MomentVector estimate = estimator.estimate(observations);
        first[static_cast<std::size_t>(run)] = estimate.entries.at(PartitionIndex{1});
        second[static_cast<std::size_t>(run)] = estimate.entries.at(PartitionIndex{2});
        third[static_cast<std::size_t>(run)] = estimate.entries.at(PartitionIndex{3});
      });
      auto check_mean = [&](const std::vector<double>& samples, double target) {
        double mean = 0.0;
        for (double x : samples) mean += x;
        mean /= runs;
        const double se = std::sqrt(empirical_variance(samples) / runs);
        CHECK(std::abs(mean - target) < 3 * se);
      };
      check_mean(first, kGram1);
      check_mean(second, kGram2);
      check_mean(third, kGram3);
    }
  }
}

TEST_CASE("rectangular mixing: the inner dimension drops out of the estimates") {
  // 2x3 mixing, observations 2x4; targets are moments of the 2x2 Gram
  const ComplexMatrix mixing = diagonal_matrix({1.5, 0.5}, 2, 3);
  const double gram2 = (std::pow(2.25, 2) + std::pow(0.25, 2)) / 2.0;
  const int runs = 5000;
  const int total = 10;
  const TwoStageEstimator estimator(2, 4, total, 2, TwoStageMode::horizontal_stack);
  std::vector<double> estimates(runs);
  parallel_for(0, runs, [&](std::int64_t run) {
    std::vector<ComplexMatrix> observations;
    observations.reserve(total);
    for (int i = 0; i < total; ++i) {
      SeededSampler sampler(47, static_cast<std::uint64_t>(run) * total + i);
      observations.push_back(observe_model2(mixing, 4, sampler));
    }
    estimates[static_cast<std::size_t>(run)] =
        estimator.estimate(observations).entries.at(PartitionIndex{2});
  });
  double mean = 0.0;
  for (double x : estimates) mean += x;
  mean /= runs;
  const double se = std::sqrt(empirical_variance(estimates) / runs);
  CHECK(std::abs(mean - gram2) < 3 * se);
}

TEST_CASE("stacking lowers the two-stage spread") {
  const int runs = 50;
  const int total = 60;
  std::vector<double> stacked(runs);
  std::vector<double> averaged(runs);
  parallel_for(0, runs, [&](std::int64_t run) {
    std::vector<ComplexMatrix> observations;
    observations.reserve(total);
    for (int i = 0; i < total; ++i) {
      SeededSampler sampler(41, static_cast<std::uint64_t>(run) * total + i);
      observations.push_back(observe_model2(kMixing, 4, sampler));
    }
    stacked[static_cast<std::size_t>(run)] =
        two_stage_estimate(observations, 4, 4, 3, TwoStageMode::horizontal_stack)
            .entries.at(PartitionIndex{3});
    averaged[static_cast<std::size_t>(run)] =
        two_stage_estimate(observations, 4, 4, 3, TwoStageMode::average)
            .entries.at(PartitionIndex{3});
  });
  CHECK(empirical_variance(stacked) < empirical_variance(averaged));
}

TEST_CASE("estimate vectors cover every partition and export as CSV") {
  std::vector<ComplexMatrix> observations;
  for (int i = 0; i < 4; ++i) {
    SeededSampler sampler(43, static_cast<std::uint64_t>(i));
    observations.push_back(observe_model2(kMixing, 4, sampler));
  }
  const MomentVector estimate =
      two_stage_estimate(observations, 4, 4, 3, TwoStageMode::horizontal_stack);
  CHECK(estimate.entries.size() == partitions_up_to(3).size());
  for (const auto& partition : partitions_up_to(3))
    CHECK(estimate.entries.count(partition) == 1);

  std::ostringstream out;
  MomentVector tiny;
  tiny.entries[PartitionIndex{1}] = 1.5;
  tiny.entries[PartitionIndex{2}] = -0.25;
  write_moment_vector_csv(out, tiny);
  CHECK(out.str() == "partition,value\n1,1.5\n2,-0.25\n");

  CHECK_THROWS_AS(two_stage_estimate({}, 4, 4, 3, TwoStageMode::average), std::invalid_argument);
  CHECK_THROWS_AS(two_stage_estimate(observations, 3, 4, 3, TwoStageMode::average),
                  std::invalid_argument);
}
