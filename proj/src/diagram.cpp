#include "momdec/diagram.hpp"

#include <functional>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace momdec {

namespace {

class DisjointSet {
 public:
  explicit DisjointSet(int size) : parent_(static_cast<std::size_t>(size)) {
    for (int i = 0; i < size; ++i) parent_[static_cast<std::size_t>(i)] = i;
  }

  int find(int element) {
    int root = element;
    while (parent_[static_cast<std::size_t>(root)] != root) root = parent_[static_cast<std::size_t>(root)];
    while (parent_[static_cast<std::size_t>(element)] != root) {
      int next = parent_[static_cast<std::size_t>(element)];
      parent_[static_cast<std::size_t>(element)] = root;
      element = next;
    }
    return root;
  }

  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[static_cast<std::size_t>(b)] = a;
  }

 private:
  std::vector<int> parent_;
};

// Maps a global edge/vertex label to its circle's wrapped successor.
struct CircleLayout {
  explicit CircleLayout(const DiagramShape& shape) {
    int offset = 0;
    for (int pairs : shape.pair_counts) {
      starts.push_back(offset);
      lengths.push_back(2 * pairs);
      offset += 2 * pairs;
    }
    circle_of.resize(static_cast<std::size_t>(offset) + 1, -1);
    for (std::size_t c = 0; c < starts.size(); ++c) {
      for (int e = starts[c] + 1; e <= starts[c] + lengths[c]; ++e)
        circle_of[static_cast<std::size_t>(e)] = static_cast<int>(c);
    }
  }

  int next(int label) const {
    const int c = circle_of[static_cast<std::size_t>(label)];
    const int start = starts[static_cast<std::size_t>(c)];
    const int len = lengths[static_cast<std::size_t>(c)];
    return start + (label - start) % len + 1;
  }

  std::vector<int> starts;
  std::vector<int> lengths;
  std::vector<int> circle_of;
};

}  // namespace

DiagramSummary summarize(const DiagramShape& shape, const PartialPermutation& pp) {
  if (!shape.valid()) throw std::invalid_argument("diagram shape must have positive pair counts");
  const int p = shape.total_pairs();
  const int labels = 2 * p;
  if (pp.even_set.size() != pp.image.size() || pp.even_set.size() != pp.odd_set.size())
    throw std::invalid_argument("partial permutation sets must have equal size");

  CircleLayout layout(shape);
  DisjointSet vertices(labels + 1);

  for (std::size_t t = 0; t < pp.even_set.size(); ++t) {
    const int i = pp.even_set[t];
    const int j = pp.image[t];
    if (i < 1 || i > p || j < 1 || j > p)
      throw std::invalid_argument("pair index out of range: " + std::to_string(i < 1 || i > p ? i : j));
    // Even edge 2i (vertices 2i, next(2i)) glued onto odd edge 2j-1
    // (vertices 2j-1, 2j) with opposite orientation.
    const int even_head = 2 * i;
    const int even_tail = layout.next(2 * i);
    vertices.unite(even_head, 2 * j);
    vertices.unite(even_tail, 2 * j - 1);
    if (even_tail % 2 != 1)
      throw std::logic_error("vertex identification crossed parity classes");
  }

  std::vector<bool> random_edge(static_cast<std::size_t>(labels) + 1, false);
  for (int i : pp.even_set) random_edge[static_cast<std::size_t>(2 * i)] = true;
  for (int j : pp.odd_set) {
    if (j < 1 || j > p) throw std::invalid_argument("pair index out of range: " + std::to_string(j));
    random_edge[static_cast<std::size_t>(2 * j - 1)] = true;
  }

  DiagramSummary summary;
  summary.contractions = pp.size();

  // Vertex classes are parity-pure; tally them and the subset bordering a
  // deterministic edge.
  std::vector<char> root_parity(static_cast<std::size_t>(labels) + 1, -1);
  std::vector<bool> root_seen(static_cast<std::size_t>(labels) + 1, false);
  std::vector<bool> root_det(static_cast<std::size_t>(labels) + 1, false);
  for (int v = 1; v <= labels; ++v) {
    const int root = vertices.find(v);
    const char parity = static_cast<char>(v % 2);
    if (!root_seen[static_cast<std::size_t>(root)]) {
      root_seen[static_cast<std::size_t>(root)] = true;
      root_parity[static_cast<std::size_t>(root)] = parity;
      if (parity == 0)
        ++summary.even_classes;
      else
        ++summary.odd_classes;
    } else if (root_parity[static_cast<std::size_t>(root)] != parity) {
      throw std::logic_error("vertex class mixes odd and even labels");
    }
  }
  for (int e = 1; e <= labels; ++e) {
    if (random_edge[static_cast<std::size_t>(e)]) continue;
    root_det[static_cast<std::size_t>(vertices.find(e))] = true;
    root_det[static_cast<std::size_t>(vertices.find(layout.next(e)))] = true;
  }
  for (int r = 1; r <= labels; ++r) {
    if (!root_seen[static_cast<std::size_t>(r)] || !root_det[static_cast<std::size_t>(r)]) continue;
    if (root_parity[static_cast<std::size_t>(r)] == 0)
      ++summary.even_classes_det;
    else
      ++summary.odd_classes_det;
  }

  // Connected components of deterministic edges: edges sharing a vertex
  // class are joined.
  std::vector<int> det_edges;
  det_edges.reserve(static_cast<std::size_t>(labels));
  for (int e = 1; e <= labels; ++e)
    if (!random_edge[static_cast<std::size_t>(e)]) det_edges.push_back(e);

  DisjointSet components(static_cast<int>(det_edges.size()));
  std::unordered_map<int, int> first_edge_at_class;
  first_edge_at_class.reserve(det_edges.size() * 2);
  for (std::size_t idx = 0; idx < det_edges.size(); ++idx) {
    const int e = det_edges[idx];
    for (int vertex : {e, layout.next(e)}) {
      const int root = vertices.find(vertex);
      auto [it, inserted] = first_edge_at_class.try_emplace(root, static_cast<int>(idx));
      if (!inserted) components.unite(it->second, static_cast<int>(idx));
    }
  }

  std::unordered_map<int, int> block_sizes;
  for (std::size_t idx = 0; idx < det_edges.size(); ++idx)
    ++block_sizes[components.find(static_cast<int>(idx))];
  summary.det_components = static_cast<int>(block_sizes.size());
  summary.det_block_halves.reserve(block_sizes.size());
  for (const auto& [root, size] : block_sizes) {
    if (size % 2 != 0) throw std::logic_error("deterministic component has odd edge count");
    summary.det_block_halves.push_back(size / 2);
  }
  std::sort(summary.det_block_halves.begin(), summary.det_block_halves.end(), std::greater<int>());
  return summary;
}

std::uint64_t sp_count(int p) {
  if (p < 0) throw std::invalid_argument("pair count must be nonnegative");
  if (p > 18) throw std::invalid_argument("partial permutation count overflows 64 bits beyond p=18");
  // sum over matched-set sizes a of C(p,a)^2 a!
  std::uint64_t total = 0;
  for (int a = 0; a <= p; ++a) {
    std::uint64_t binom = 1;
    for (int i = 0; i < a; ++i) binom = binom * static_cast<std::uint64_t>(p - i) / static_cast<std::uint64_t>(i + 1);
    std::uint64_t factorial = 1;
    for (int i = 2; i <= a; ++i) factorial *= static_cast<std::uint64_t>(i);
    total += binom * binom * factorial;
  }
  return total;
}

std::uint64_t spr_count(int p) {
  if (p > 9) throw std::invalid_argument("cross-circle count overflows 64 bits beyond p=9");
  const std::uint64_t base = sp_count(p);
  return base * base;
}

}  // namespace momdec
