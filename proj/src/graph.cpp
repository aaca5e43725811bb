#include "curvlab/graph.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <stdexcept>

namespace curvlab {

WeightedGraph WeightedGraph::build(std::vector<VertexSpec> vertices, std::vector<EdgeSpec> edges) {
  WeightedGraph g;
  const std::size_t n = vertices.size();
  g.ids_.reserve(n);
  g.measures_.reserve(n);
  g.measures_f_.reserve(n);
  for (auto& spec : vertices) {
    if (spec.id.empty()) throw std::invalid_argument("empty vertex id");
    if (g.index_.count(spec.id)) throw std::invalid_argument("duplicate vertex '" + spec.id + "'");
    if (spec.m <= 0) throw std::invalid_argument("nonpositive measure at vertex '" + spec.id + "'");
    g.index_.emplace(spec.id, g.ids_.size());
    g.ids_.push_back(std::move(spec.id));
    g.measures_f_.push_back(to_double(spec.m));
    g.measures_.push_back(std::move(spec.m));
  }

  std::map<std::pair<Vertex, Vertex>, Rational> seen;
  for (auto& e : edges) {
    auto find = [&](const std::string& id) {
      auto it = g.index_.find(id);
      if (it == g.index_.end()) throw std::invalid_argument("edge references unknown vertex '" + id + "'");
      return it->second;
    };
    const Vertex u = find(e.u);
    const Vertex v = find(e.v);
    if (u == v) throw std::invalid_argument("self loop at vertex '" + e.u + "'");
    if (e.w < 0) throw std::invalid_argument("negative weight on edge '" + e.u + "'-'" + e.v + "'");
    const auto key = std::minmax(u, v);
    if (auto it = seen.find(key); it != seen.end()) {
      if (it->second != e.w) {
        throw std::invalid_argument("asymmetric weight entries for '" + e.u + "'-'" + e.v + "'");
      }
      throw std::invalid_argument("duplicate edge '" + e.u + "'-'" + e.v + "'");
    }
    seen.emplace(key, e.w);
  }

  g.adjacency_.assign(n, {});
  for (const auto& [key, w] : seen) {
    if (w == 0) continue;  // zero weight: not adjacent
    const double wf = to_double(w);
    g.adjacency_[key.first].push_back({key.second, w, wf});
    g.adjacency_[key.second].push_back({key.first, w, wf});
    ++g.edge_count_;
  }
  for (auto& list : g.adjacency_) {
    std::sort(list.begin(), list.end(),
              [](const Neighbor& a, const Neighbor& b) { return a.vertex < b.vertex; });
  }
  if (n <= kDistanceCacheLimit) g.compute_distance_table();
  return g;
}

void WeightedGraph::check(Vertex x) const {
  if (x >= ids_.size()) throw std::out_of_range("unknown vertex index " + std::to_string(x));
}

Vertex WeightedGraph::index(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) throw std::invalid_argument("unknown vertex '" + std::string(id) + "'");
  return it->second;
}

bool WeightedGraph::contains(std::string_view id) const { return index_.count(std::string(id)) > 0; }

bool WeightedGraph::adjacent(Vertex x, Vertex y) const {
  check(x);
  check(y);
  const auto& list = adjacency_[x];
  return std::binary_search(list.begin(), list.end(), Neighbor{y, Rational(0), 0.0},
                            [](const Neighbor& a, const Neighbor& b) { return a.vertex < b.vertex; });
}

std::vector<std::size_t> WeightedGraph::distances_from(Vertex source) const {
  check(source);
  std::vector<std::size_t> dist(size(), kUnreachable);
  std::deque<Vertex> queue{source};
  dist[source] = 0;
  while (!queue.empty()) {
    const Vertex x = queue.front();
    queue.pop_front();
    for (const auto& nb : adjacency_[x]) {
      if (dist[nb.vertex] == kUnreachable) {
        dist[nb.vertex] = dist[x] + 1;
        queue.push_back(nb.vertex);
      }
    }
  }
  return dist;
}

void WeightedGraph::compute_distance_table() {
  const std::size_t n = size();
  auto table = std::make_shared<std::vector<std::uint32_t>>(n * n);
  for (Vertex s = 0; s < n; ++s) {
    const auto row = distances_from(s);
    for (Vertex t = 0; t < n; ++t) {
      (*table)[s * n + t] = row[t] == kUnreachable ? std::numeric_limits<std::uint32_t>::max()
                                                   : static_cast<std::uint32_t>(row[t]);
    }
  }
  distance_table_ = std::move(table);
}

std::size_t WeightedGraph::distance(Vertex x, Vertex y) const {
  check(x);
  check(y);
  if (distance_table_) {
    const std::uint32_t d = (*distance_table_)[x * size() + y];
    return d == std::numeric_limits<std::uint32_t>::max() ? kUnreachable : d;
  }
  return distances_from(x)[y];
}

std::vector<Vertex> WeightedGraph::ball(Vertex x, std::size_t r) const {
  std::vector<Vertex> out;
  if (distance_table_) {
    check(x);
    for (Vertex z = 0; z < size(); ++z) {
      if (distance(x, z) <= r) out.push_back(z);
    }
    return out;
  }
  const auto dist = distances_from(x);
  for (Vertex z = 0; z < size(); ++z) {
    if (dist[z] <= r) out.push_back(z);
  }
  return out;
}

std::vector<Vertex> WeightedGraph::sphere(Vertex x, std::size_t r) const {
  std::vector<Vertex> out;
  const auto dist = distance_table_ ? std::vector<std::size_t>{} : distances_from(x);
  check(x);
  for (Vertex z = 0; z < size(); ++z) {
    const std::size_t d = distance_table_ ? distance(x, z) : dist[z];
    if (d == r) out.push_back(z);
  }
  return out;
}

std::size_t WeightedGraph::diameter() const {
  std::size_t best = 0;
  for (Vertex x = 0; x < size(); ++x) {
    for (std::size_t d : distances_from(x)) {
      if (d == kUnreachable) return kUnreachable;
      best = std::max(best, d);
    }
  }
  return best;
}

std::vector<std::size_t> WeightedGraph::components() const {
  std::vector<std::size_t> label(size(), kUnreachable);
  std::size_t next = 0;
  for (Vertex s = 0; s < size(); ++s) {
    if (label[s] != kUnreachable) continue;
    std::deque<Vertex> queue{s};
    label[s] = next;
    while (!queue.empty()) {
      const Vertex x = queue.front();
      queue.pop_front();
      for (const auto& nb : adjacency_[x]) {
        if (label[nb.vertex] == kUnreachable) {
          label[nb.vertex] = next;
          queue.push_back(nb.vertex);
        }
      }
    }
    ++next;
  }
  return label;
}

std::size_t WeightedGraph::component_count() const {
  const auto labels = components();
  return labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
}

bool WeightedGraph::connected() const { return component_count() <= 1; }

std::vector<VertexSpec> WeightedGraph::vertex_specs() const {
  std::vector<VertexSpec> out;
  out.reserve(size());
  for (Vertex x = 0; x < size(); ++x) out.push_back({ids_[x], measures_[x]});
  return out;
}

std::vector<EdgeSpec> WeightedGraph::edge_specs() const {
  std::vector<EdgeSpec> out;
  out.reserve(edge_count_);
  for (Vertex x = 0; x < size(); ++x) {
    for (const auto& nb : adjacency_[x]) {
      if (x < nb.vertex) out.push_back({ids_[x], ids_[nb.vertex], nb.weight});
    }
  }
  return out;
}

WeightedGraph WeightedGraph::with_scaled_measure(const Rational& c) const {
  if (c <= 0) throw std::invalid_argument("measure scale must be positive");
  auto vertices = vertex_specs();
  for (auto& v : vertices) v.m /= c;
  return build(std::move(vertices), edge_specs());
}

bool operator==(const WeightedGraph& a, const WeightedGraph& b) {
  if (a.ids_ != b.ids_ || a.measures_ != b.measures_ || a.size() != b.size()) return false;
  for (Vertex x = 0; x < a.size(); ++x) {
    const auto& la = a.adjacency_[x];
    const auto& lb = b.adjacency_[x];
    if (la.size() != lb.size()) return false;
    for (std::size_t i = 0; i < la.size(); ++i) {
      if (la[i].vertex != lb[i].vertex || la[i].weight != lb[i].weight) return false;
    }
  }
  return true;
}

}  // namespace curvlab
