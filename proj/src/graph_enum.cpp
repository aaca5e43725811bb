#include "curvlab/bakry_emery.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <set>
#include <stdexcept>

namespace curvlab {

namespace {

using Rows = std::vector<std::uint32_t>;  // adjacency bitmask per vertex

int popcount(std::uint32_t v) { return __builtin_popcount(v); }

// Largest upper-triangle bit string over labelings that list vertices by
// decreasing degree; any isomorphism preserves that ordering of classes.
std::uint64_t canonical_code(const Rows& adj) {
  const std::size_t n = adj.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return popcount(adj[a]) > popcount(adj[b]); });
  std::vector<std::pair<std::size_t, std::size_t>> classes;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && popcount(adj[order[j]]) == popcount(adj[order[i]])) ++j;
    classes.emplace_back(i, j);
    i = j;
  }
  for (auto [lo, hi] : classes) std::sort(order.begin() + lo, order.begin() + hi);

  std::uint64_t best = 0;
  auto encode = [&]() {
    std::uint64_t code = 0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) code = (code << 1) | ((adj[order[i]] >> order[j]) & 1u);
    }
    best = std::max(best, code);
  };
  // Odometer over the permutations of each degree class.
  auto recurse = [&](auto&& self, std::size_t c) -> void {
    if (c == classes.size()) {
      encode();
      return;
    }
    auto [lo, hi] = classes[c];
    std::sort(order.begin() + lo, order.begin() + hi);
    do {
      self(self, c + 1);
    } while (std::next_permutation(order.begin() + lo, order.begin() + hi));
  };
  recurse(recurse, 0);
  return best;
}

SmallGraph to_small(const Rows& adj) {
  SmallGraph s;
  s.n = adj.size();
  for (std::size_t i = 0; i < s.n; ++i) {
    for (std::size_t j = i + 1; j < s.n; ++j) {
      if ((adj[i] >> j) & 1u) s.edges.emplace_back(i, j);
    }
  }
  return s;
}

}  // namespace

std::vector<SmallGraph> connected_graphs(std::size_t max_vertices) {
  if (max_vertices > 10) throw std::invalid_argument("exhaustive enumeration is limited to 10 vertices");
  std::vector<SmallGraph> out;
  if (max_vertices == 0) return out;
  std::vector<Rows> level{Rows{0u}};
  out.push_back(to_small(level.front()));
  for (std::size_t n = 2; n <= max_vertices; ++n) {
    std::set<std::uint64_t> seen;
    std::vector<Rows> next;
    for (const auto& base : level) {
      const std::uint32_t subsets = 1u << (n - 1);
      for (std::uint32_t mask = 1; mask < subsets; ++mask) {
        Rows adj = base;
        adj.push_back(mask);
        for (std::size_t v = 0; v + 1 < n; ++v) {
          if ((mask >> v) & 1u) adj[v] |= 1u << (n - 1);
        }
        if (seen.insert(canonical_code(adj)).second) next.push_back(std::move(adj));
      }
    }
    for (const auto& adj : next) out.push_back(to_small(adj));
    level = std::move(next);
  }
  return out;
}

}  // namespace curvlab
