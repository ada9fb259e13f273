#pragma once

#include <initializer_list>
#include <string>
#include <vector>

namespace momdec {

/// Canonical integer partition: parts sorted descending, every part >= 1.
/// The empty partition stands for the constant term of a moment expression.
class PartitionIndex {
 public:
  PartitionIndex() = default;
  PartitionIndex(std::initializer_list<int> parts);
  explicit PartitionIndex(std::vector<int> parts);

  static PartitionIndex single(int part);

  const std::vector<int>& parts() const { return parts_; }
  int weight() const;
  bool empty() const { return parts_.empty(); }
  bool is_single() const { return parts_.size() == 1; }

  /// Multiset union of the two partitions.
  PartitionIndex merged(const PartitionIndex& other) const;

  bool operator==(const PartitionIndex& other) const = default;
  /// Weight ascending, then reverse-lexicographic: (3) < (2,1) < (1,1,1).
  bool operator<(const PartitionIndex& other) const;

  /// "3+1+1"; the empty partition prints as "const".
  std::string to_string() const;

 private:
  std::vector<int> parts_;
};

/// All partitions of the given weight, in PartitionIndex order.
std::vector<PartitionIndex> partitions_of(int weight);

/// All partitions of weight 1..max_weight, in PartitionIndex order.
std::vector<PartitionIndex> partitions_up_to(int max_weight);

}  // namespace momdec
