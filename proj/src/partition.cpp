#include "momdec/partition.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <stdexcept>

namespace momdec {

namespace {

void canonicalize(std::vector<int>& parts) {
  for (int part : parts) {
    if (part < 1) throw std::invalid_argument("partition parts must be positive");
  }
  std::sort(parts.begin(), parts.end(), std::greater<int>());
}

}  // namespace

PartitionIndex::PartitionIndex(std::initializer_list<int> parts) : parts_(parts) {
  canonicalize(parts_);
}

PartitionIndex::PartitionIndex(std::vector<int> parts) : parts_(std::move(parts)) {
  canonicalize(parts_);
}

PartitionIndex PartitionIndex::single(int part) { return PartitionIndex{part}; }

int PartitionIndex::weight() const { return std::accumulate(parts_.begin(), parts_.end(), 0); }

PartitionIndex PartitionIndex::merged(const PartitionIndex& other) const {
  std::vector<int> joined = parts_;
  joined.insert(joined.end(), other.parts_.begin(), other.parts_.end());
  return PartitionIndex(std::move(joined));
}

bool PartitionIndex::operator<(const PartitionIndex& other) const {
  const int wa = weight();
  const int wb = other.weight();
  if (wa != wb) return wa < wb;
  return std::lexicographical_compare(parts_.begin(), parts_.end(), other.parts_.begin(),
                                      other.parts_.end(), std::greater<int>());
}

std::string PartitionIndex::to_string() const {
  if (parts_.empty()) return "const";
  std::string out;
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    if (i != 0) out += '+';
    out += std::to_string(parts_[i]);
  }
  return out;
}

std::vector<PartitionIndex> partitions_of(int weight) {
  if (weight < 0) throw std::invalid_argument("partition weight must be nonnegative");
  std::vector<PartitionIndex> out;
  std::vector<int> current;
  // parts chosen nonincreasing; descending first part gives PartitionIndex order
  std::function<void(int, int)> extend = [&](int remaining, int max_part) {
    if (remaining == 0) {
      out.emplace_back(current);
      return;
    }
    for (int part = std::min(remaining, max_part); part >= 1; --part) {
      current.push_back(part);
      extend(remaining - part, part);
      current.pop_back();
    }
  };
  extend(weight, weight);
  return out;
}

std::vector<PartitionIndex> partitions_up_to(int max_weight) {
  std::vector<PartitionIndex> out;
  for (int w = 1; w <= max_weight; ++w) {
    auto level = partitions_of(w);
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

}  // namespace momdec
