#include "curvlab/graph.hpp"

#include <charconv>
#include <stdexcept>
#include <string>

namespace curvlab {

Family parse_family(std::string_view text) {
  if (text == "path") return Family::Path;
  if (text == "cycle") return Family::Cycle;
  if (text == "complete") return Family::Complete;
  if (text == "hypercube") return Family::Hypercube;
  if (text == "grid") return Family::Grid;
  if (text == "segment-of-integer-lattice" || text == "lattice") return Family::LatticeSegment;
  throw std::invalid_argument("unsupported family '" + std::string(text) + "'");
}

Weighting parse_weighting(std::string_view text) {
  if (text == "unit") return Weighting::Unit;
  if (text == "normalized") return Weighting::Normalized;
  if (text == "degree-one") return Weighting::DegreeOne;
  throw std::invalid_argument("unsupported weighting '" + std::string(text) + "'");
}

std::string_view to_string(Family family) {
  switch (family) {
    case Family::Path: return "path";
    case Family::Cycle: return "cycle";
    case Family::Complete: return "complete";
    case Family::Hypercube: return "hypercube";
    case Family::Grid: return "grid";
    case Family::LatticeSegment: return "segment-of-integer-lattice";
  }
  return "?";
}

std::string_view to_string(Weighting weighting) {
  switch (weighting) {
    case Weighting::Unit: return "unit";
    case Weighting::Normalized: return "normalized";
    case Weighting::DegreeOne: return "degree-one";
  }
  return "?";
}

namespace {

WeightedGraph weigh(std::vector<std::string> ids, const std::vector<std::pair<Vertex, Vertex>>& edges,
                    Weighting weighting) {
  const std::size_t n = ids.size();
  std::vector<std::size_t> deg(n, 0);
  for (auto [u, v] : edges) {
    ++deg.at(u);
    ++deg.at(v);
  }
  Rational w(1);
  if (weighting == Weighting::DegreeOne) {
    if (edges.empty()) throw std::invalid_argument("degree-one weighting needs at least one edge");
    w = Rational(1, 2 * static_cast<long>(edges.size()));
  }
  std::vector<VertexSpec> vertices;
  vertices.reserve(n);
  for (Vertex x = 0; x < n; ++x) {
    Rational m(1);
    if (weighting != Weighting::Unit) {
      if (deg[x] == 0) {
        throw std::invalid_argument(std::string(to_string(weighting)) +
                                    " weighting is undefined at isolated vertex '" + ids[x] + "'");
      }
      m = w * static_cast<long>(deg[x]);
    }
    vertices.push_back({std::move(ids[x]), m});
  }
  std::vector<EdgeSpec> specs;
  specs.reserve(edges.size());
  for (auto [u, v] : edges) specs.push_back({vertices[u].id, vertices[v].id, w});
  return WeightedGraph::build(std::move(vertices), std::move(specs));
}

std::vector<std::string> numbered(std::size_t n, long start = 0) {
  std::vector<std::string> ids;
  ids.reserve(n);
  for (std::size_t i = 0; i < n; ++i) ids.push_back(std::to_string(start + static_cast<long>(i)));
  return ids;
}

std::size_t expect(std::span<const std::size_t> size, std::size_t count, Family family) {
  if (size.size() != count) {
    throw std::invalid_argument(std::string(to_string(family)) + " takes " + std::to_string(count) +
                                " size parameter(s)");
  }
  for (std::size_t s : size) {
    if (s < 1) throw std::invalid_argument("size parameters must be >= 1");
  }
  return size[0];
}

}  // namespace

WeightedGraph from_edge_list(std::size_t n, std::span<const std::pair<Vertex, Vertex>> edges,
                             Weighting weighting) {
  return weigh(numbered(n), {edges.begin(), edges.end()}, weighting);
}

WeightedGraph generate(Family family, std::span<const std::size_t> size, Weighting weighting) {
  std::vector<std::pair<Vertex, Vertex>> edges;
  switch (family) {
    case Family::Path:
    case Family::LatticeSegment: {
      const std::size_t n = expect(size, 1, family);
      for (Vertex i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
      const long start = family == Family::LatticeSegment ? -static_cast<long>((n - 1) / 2) : 0;
      return weigh(numbered(n, start), edges, weighting);
    }
    case Family::Cycle: {
      const std::size_t n = expect(size, 1, family);
      if (n < 3) throw std::invalid_argument("cycle needs at least 3 vertices");
      for (Vertex i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n);
      return weigh(numbered(n), edges, weighting);
    }
    case Family::Complete: {
      const std::size_t n = expect(size, 1, family);
      for (Vertex i = 0; i < n; ++i) {
        for (Vertex j = i + 1; j < n; ++j) edges.emplace_back(i, j);
      }
      return weigh(numbered(n), edges, weighting);
    }
    case Family::Hypercube: {
      const std::size_t dim = expect(size, 1, family);
      if (dim > 16) throw std::invalid_argument("hypercube dimension above 16");
      const std::size_t n = std::size_t{1} << dim;
      std::vector<std::string> ids;
      for (std::size_t v = 0; v < n; ++v) {
        std::string bits(dim, '0');
        for (std::size_t b = 0; b < dim; ++b) {
          if (v >> (dim - 1 - b) & 1U) bits[b] = '1';
        }
        ids.push_back(bits);
        for (std::size_t b = 0; b < dim; ++b) {
          const std::size_t u = v ^ (std::size_t{1} << b);
          if (v < u) edges.emplace_back(v, u);
        }
      }
      return weigh(std::move(ids), edges, weighting);
    }
    case Family::Grid: {
      expect(size, 2, family);
      const std::size_t rows = size[0];
      const std::size_t cols = size[1];
      std::vector<std::string> ids;
      for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
          ids.push_back(std::to_string(r) + "_" + std::to_string(c));
          const Vertex v = r * cols + c;
          if (c + 1 < cols) edges.emplace_back(v, v + 1);
          if (r + 1 < rows) edges.emplace_back(v, v + cols);
        }
      }
      return weigh(std::move(ids), edges, weighting);
    }
  }
  throw std::invalid_argument("unsupported family");
}

WeightedGraph generate(std::string_view family_and_size, Weighting weighting) {
  const auto colon = family_and_size.find(':');
  if (colon == std::string_view::npos) {
    throw std::invalid_argument("expected family:size, got '" + std::string(family_and_size) + "'");
  }
  const Family family = parse_family(family_and_size.substr(0, colon));
  std::string_view rest = family_and_size.substr(colon + 1);
  std::vector<std::size_t> size;
  while (true) {
    const auto sep = rest.find('x');
    const std::string_view part = rest.substr(0, sep);
    std::size_t value = 0;
    auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), value);
    if (ec != std::errc{} || ptr != part.data() + part.size() || part.empty()) {
      throw std::invalid_argument("malformed size '" + std::string(part) + "'");
    }
    size.push_back(value);
    if (sep == std::string_view::npos) break;
    rest.remove_prefix(sep + 1);
  }
  return generate(family, size, weighting);
}

}  // namespace curvlab
