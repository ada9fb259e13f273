#include "momdec/wishart.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "momdec/errors.hpp"
#include "momdec/format.hpp"

namespace momdec {

WishartMap::WishartMap(int max_weight, int rows, long long effective_cols,
                       std::vector<PartitionIndex> index, std::vector<std::vector<Rational>> cells)
    : max_weight_(max_weight),
      rows_(rows),
      effective_cols_(effective_cols),
      index_(std::move(index)),
      cells_(std::move(cells)) {}

std::size_t WishartMap::position(const PartitionIndex& partition) const {
  auto it = std::lower_bound(index_.begin(), index_.end(), partition);
  if (it == index_.end() || !(*it == partition))
    throw std::invalid_argument("partition " + partition.to_string() + " is outside the map");
  return static_cast<std::size_t>(it - index_.begin());
}

const Rational& WishartMap::at(const PartitionIndex& row, const PartitionIndex& col) const {
  return cells_[position(row)][position(col)];
}

std::map<PartitionIndex, double> WishartMap::apply(
    const std::map<PartitionIndex, double>& vec) const {
  std::map<PartitionIndex, double> out;
  for (std::size_t r = 0; r < index_.size(); ++r) {
    Rational acc(0);
    for (std::size_t c = 0; c < index_.size(); ++c) {
      if (cells_[r][c] == 0) continue;
      auto it = vec.find(index_[c]);
      if (it == vec.end())
        throw evaluation_error("no value supplied for moment partition " + index_[c].to_string());
      acc += cells_[r][c] * rational_from_double(it->second);
    }
    out[index_[r]] = to_double(acc);
  }
  return out;
}

namespace {

int cycle_count(const std::vector<int>& perm) {
  std::vector<bool> seen(perm.size(), false);
  int cycles = 0;
  for (std::size_t start = 0; start < perm.size(); ++start) {
    if (seen[start]) continue;
    ++cycles;
    std::size_t at = start;
    while (!seen[at]) {
      seen[at] = true;
      at = static_cast<std::size_t>(perm[at]);
    }
  }
  return cycles;
}

PartitionIndex cycle_type(const std::vector<int>& perm) {
  std::vector<bool> seen(perm.size(), false);
  std::vector<int> lengths;
  for (std::size_t start = 0; start < perm.size(); ++start) {
    if (seen[start]) continue;
    int length = 0;
    std::size_t at = start;
    while (!seen[at]) {
      seen[at] = true;
      at = static_cast<std::size_t>(perm[at]);
      ++length;
    }
    lengths.push_back(length);
  }
  return PartitionIndex(std::move(lengths));
}

// Permutation with consecutive cycles of the partition's lengths.
std::vector<int> trace_cycles(const PartitionIndex& parts) {
  std::vector<int> gamma(static_cast<std::size_t>(parts.weight()));
  int offset = 0;
  for (int length : parts.parts()) {
    for (int i = 0; i < length; ++i)
      gamma[static_cast<std::size_t>(offset + i)] = offset + (i + 1) % length;
    offset += length;
  }
  return gamma;
}

}  // namespace

WishartMap wishart_forward(int max_weight, int rows, long long effective_cols, int weight_cap) {
  if (max_weight < 1) throw std::invalid_argument("maximum weight must be positive");
  if (rows < 1 || effective_cols < 1) throw std::invalid_argument("dimensions must be positive");
  if (max_weight > weight_cap)
    throw capacity_error("moment weight " + std::to_string(max_weight) +
                         " exceeds the configured cap " + std::to_string(weight_cap));

  std::vector<PartitionIndex> index = partitions_up_to(max_weight);
  std::vector<std::vector<Rational>> cells(index.size(), std::vector<Rational>(index.size(), Rational(0)));
  auto position = [&](const PartitionIndex& partition) {
    return static_cast<std::size_t>(
        std::lower_bound(index.begin(), index.end(), partition) - index.begin());
  };

  for (std::size_t r = 0; r < index.size(); ++r) {
    const PartitionIndex& target = index[r];
    const int weight = target.weight();
    const int traces = static_cast<int>(target.parts().size());
    const std::vector<int> gamma = trace_cycles(target);

    std::vector<int> perm(static_cast<std::size_t>(weight));
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<int> composed(perm.size());
    do {
      for (std::size_t i = 0; i < perm.size(); ++i)
        composed[i] = gamma[static_cast<std::size_t>(perm[i])];
      const Rational coeff = rational_pow(effective_cols, cycle_count(perm) - weight) *
                             rational_pow(rows, cycle_count(composed) - traces);
      cells[r][position(cycle_type(composed))] += coeff;
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return WishartMap(max_weight, rows, effective_cols, std::move(index), std::move(cells));
}

WishartMap invert_map(const WishartMap& map) {
  const std::size_t size = map.index().size();
  std::vector<std::vector<Rational>> work(size, std::vector<Rational>(size));
  std::vector<std::vector<Rational>> inverse(size, std::vector<Rational>(size, Rational(0)));
  for (std::size_t r = 0; r < size; ++r) {
    inverse[r][r] = 1;
    for (std::size_t c = 0; c < size; ++c) work[r][c] = map.at(r, c);
  }

  // Gauss-Jordan with exact pivots.
  for (std::size_t col = 0; col < size; ++col) {
    std::size_t pivot = col;
    while (pivot < size && work[pivot][col] == 0) ++pivot;
    if (pivot == size)
      throw degeneracy_error("wishart moment map is singular at effective column count " +
                             std::to_string(map.effective_cols()));
    std::swap(work[pivot], work[col]);
    std::swap(inverse[pivot], inverse[col]);
    const Rational lead = work[col][col];
    for (std::size_t c = 0; c < size; ++c) {
      work[col][c] /= lead;
      inverse[col][c] /= lead;
    }
    for (std::size_t r = 0; r < size; ++r) {
      if (r == col || work[r][col] == 0) continue;
      const Rational factor = work[r][col];
      for (std::size_t c = 0; c < size; ++c) {
        work[r][c] -= factor * work[col][c];
        inverse[r][c] -= factor * inverse[col][c];
      }
    }
  }
  return WishartMap(map.max_weight(), map.rows(), map.effective_cols(),
                    std::vector<PartitionIndex>(map.index()), std::move(inverse));
}

const char* mode_label(TwoStageMode mode) {
  return mode == TwoStageMode::horizontal_stack ? "stack" : "average";
}

TwoStageEstimator::TwoStageEstimator(int rows, int cols_per_observation, int observation_count,
                                     int max_weight, TwoStageMode mode, int weight_cap)
    : rows_(rows),
      cols_(cols_per_observation),
      count_(observation_count),
      mode_(mode),
      targets_(partitions_up_to(max_weight)),
      inverse_(invert_map(wishart_forward(
          max_weight, rows,
          mode == TwoStageMode::horizontal_stack
              ? static_cast<long long>(cols_per_observation) * observation_count
              : cols_per_observation,
          weight_cap))) {
  if (observation_count < 1) throw std::invalid_argument("at least one observation is required");
  const ModelDims stage_dims{rows_, static_cast<int>(effective_cols()), 1};
  stage_one_.reserve(targets_.size());
  for (const auto& target : targets_) {
    stage_one_.push_back(estimator_coeffs(target, stage_dims, weight_cap));
    for (const auto& [partition, coeff] : stage_one_.back().terms())
      if (!partition.empty()) needed_.push_back(partition);
  }
  std::sort(needed_.begin(), needed_.end());
  needed_.erase(std::unique(needed_.begin(), needed_.end()), needed_.end());
}

MomentVector TwoStageEstimator::estimate(const std::vector<ComplexMatrix>& observations) const {
  if (static_cast<int>(observations.size()) != count_)
    throw std::invalid_argument("observation count does not match the estimator layout");
  for (const auto& obs : observations)
    if (obs.rows() != rows_ || obs.cols() != cols_)
      throw std::invalid_argument("observation shape does not match the declared dimensions");

  std::map<PartitionIndex, double> first_stage;
  if (mode_ == TwoStageMode::horizontal_stack) {
    const ComplexMatrix compound = stack(observations, StackingScheme{1, count_});
    const auto observed = gram_moments(compound, static_cast<double>(effective_cols()), needed_);
    for (std::size_t t = 0; t < targets_.size(); ++t)
      first_stage[targets_[t]] = stage_one_[t].evaluate(observed);
  } else {
    std::vector<double> acc(targets_.size(), 0.0);
    for (const auto& obs : observations) {
      const auto observed = gram_moments(obs, static_cast<double>(cols_), needed_);
      for (std::size_t t = 0; t < targets_.size(); ++t) acc[t] += stage_one_[t].evaluate(observed);
    }
    for (std::size_t t = 0; t < targets_.size(); ++t)
      first_stage[targets_[t]] = acc[t] / static_cast<double>(count_);
  }

  MomentVector out;
  out.basis = MomentBasis::gram;
  out.entries = inverse_.apply(first_stage);
  return out;
}

MomentVector two_stage_estimate(const std::vector<ComplexMatrix>& observations, int rows,
                                int cols_per_observation, int max_weight, TwoStageMode mode,
                                int weight_cap) {
  if (observations.empty()) throw std::invalid_argument("at least one observation is required");
  const TwoStageEstimator estimator(rows, cols_per_observation,
                                    static_cast<int>(observations.size()), max_weight, mode,
                                    weight_cap);
  return estimator.estimate(observations);
}

void write_moment_vector_csv(std::ostream& out, const MomentVector& vec) {
  out << "partition,value\n";
  for (const auto& [partition, value] : vec.entries)
    out << partition.to_string() << ',' << format_real(value) << '\n';
}

}  // namespace momdec
