#pragma once

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

namespace momdec {

/// Multi-circle diagram layout. Circle i carries 2*pair_counts[i] edges;
/// edge and vertex labels run 1..2p globally, assigned consecutively circle
/// by circle, and wrap around only within their own circle. Pair i stands
/// for the odd edge 2i-1 together with the even edge 2i.
struct DiagramShape {
  std::vector<int> pair_counts;

  int circle_count() const { return static_cast<int>(pair_counts.size()); }
  int total_pairs() const {
    int total = 0;
    for (int c : pair_counts) total += c;
    return total;
  }
  bool valid() const {
    if (pair_counts.empty()) return false;
    return std::all_of(pair_counts.begin(), pair_counts.end(), [](int c) { return c >= 1; });
  }
};

/// A matching between two equal-size subsets of the pairs 1..p. Member t of
/// even_set has its even edge glued onto the odd edge of pair image[t], with
/// opposite orientation. odd_set is the sorted image of the matching.
struct PartialPermutation {
  std::vector<int> even_set;
  std::vector<int> odd_set;
  std::vector<int> image;

  int size() const { return static_cast<int>(even_set.size()); }
};

/// Everything the coefficient formulas need to know about one glued diagram.
struct DiagramSummary {
  int contractions = 0;               // number of glued edge pairs
  std::vector<int> det_block_halves;  // deterministic-component edge counts / 2, descending
  int det_components = 0;
  int even_classes = 0;      // vertex classes with even labels
  int even_classes_det = 0;  // ... of which border a deterministic edge
  int odd_classes = 0;
  int odd_classes_det = 0;
};

/// Glue the diagram and report vertex-class and component counts.
/// Throws std::invalid_argument on pair indices outside 1..p.
DiagramSummary summarize(const DiagramShape& shape, const PartialPermutation& pp);

/// Two circles of p pairs each, the layout behind the variance expansion.
inline DiagramShape paired_shape(int p) { return DiagramShape{{p, p}}; }

/// Number of partial permutations of p pairs: sum_a C(p,a)^2 a!.
std::uint64_t sp_count(int p);
/// Number of cross-circle partial permutations on paired_shape(p): sp_count(p)^2.
std::uint64_t spr_count(int p);

namespace detail {

// Subsets of {lo..hi} in lexicographic order of their ascending element
// lists: {}, {lo}, {lo,lo+1}, ..., {hi}.
template <typename F>
void for_each_subset(int lo, int hi, F&& fn) {
  std::vector<int> current;
  for (;;) {
    fn(std::as_const(current));
    const int candidate = current.empty() ? lo : current.back() + 1;
    if (candidate <= hi) {
      current.push_back(candidate);
    } else {
      if (current.empty()) return;
      current.pop_back();
      if (current.empty()) return;
      ++current.back();
    }
  }
}

// Size-k subsets of {lo..hi} in lexicographic order.
template <typename F>
void for_each_combination(int lo, int hi, int k, F&& fn) {
  const int count = hi - lo + 1;
  if (k < 0 || k > std::max(count, 0)) return;
  std::vector<int> current(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) current[static_cast<std::size_t>(i)] = lo + i;
  for (;;) {
    fn(std::as_const(current));
    int i = k - 1;
    while (i >= 0 && current[static_cast<std::size_t>(i)] == hi - (k - 1 - i)) --i;
    if (i < 0) return;
    ++current[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j)
      current[static_cast<std::size_t>(j)] = current[static_cast<std::size_t>(j - 1)] + 1;
  }
}

}  // namespace detail

/// Stream every partial permutation of the shape's pairs exactly once, in a
/// fixed order: even_set subsets lexicographically, then odd_set, then the
/// matching in lexicographic image order. The argument is only valid for the
/// duration of the call.
template <typename F>
void for_each_sp(const DiagramShape& shape, F&& fn) {
  const int p = shape.total_pairs();
  PartialPermutation pp;
  detail::for_each_subset(1, p, [&](const std::vector<int>& even_set) {
    detail::for_each_combination(1, p, static_cast<int>(even_set.size()),
                                 [&](const std::vector<int>& odd_set) {
                                   pp.even_set = even_set;
                                   pp.odd_set = odd_set;
                                   pp.image = odd_set;
                                   if (pp.image.empty()) {
                                     fn(std::as_const(pp));
                                     return;
                                   }
                                   do {
                                     fn(std::as_const(pp));
                                   } while (std::next_permutation(pp.image.begin(), pp.image.end()));
                                 });
  });
}

/// Stream the cross-circle partial permutations on two circles of p pairs:
/// every gluing sends an edge of one circle onto an edge of the other.
template <typename F>
void for_each_spr(int p, F&& fn) {
  PartialPermutation pp;
  detail::for_each_subset(1, p, [&](const std::vector<int>& even_first) {
    detail::for_each_subset(p + 1, 2 * p, [&](const std::vector<int>& even_second) {
      detail::for_each_combination(
          p + 1, 2 * p, static_cast<int>(even_first.size()),
          [&](const std::vector<int>& odd_second) {
            detail::for_each_combination(
                1, p, static_cast<int>(even_second.size()), [&](const std::vector<int>& odd_first) {
                  pp.even_set = even_first;
                  pp.even_set.insert(pp.even_set.end(), even_second.begin(), even_second.end());
                  pp.odd_set = odd_first;
                  pp.odd_set.insert(pp.odd_set.end(), odd_second.begin(), odd_second.end());
                  std::vector<int> image_first = odd_second;
                  std::vector<int> image_second = odd_first;
                  auto emit_second = [&]() {
                    pp.image = image_first;
                    pp.image.insert(pp.image.end(), image_second.begin(), image_second.end());
                    fn(std::as_const(pp));
                  };
                  auto run_second = [&]() {
                    if (image_second.empty()) {
                      emit_second();
                      return;
                    }
                    do {
                      emit_second();
                    } while (std::next_permutation(image_second.begin(), image_second.end()));
                  };
                  if (image_first.empty()) {
                    run_second();
                    return;
                  }
                  // next_permutation leaves image_second sorted again once
                  // run_second's inner loop wraps around
                  do {
                    run_second();
                  } while (std::next_permutation(image_first.begin(), image_first.end()));
                });
          });
    });
  });
}

}  // namespace momdec
