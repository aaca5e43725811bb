#include "curvlab/graph.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace curvlab {

namespace {

using nlohmann::json;

// DOM builder that keeps every number as its source text, so decimal
// weights like 0.1 become the exact rational 1/10.
class RawNumberDom : public nlohmann::detail::json_sax_dom_parser<json> {
 public:
  using Base = nlohmann::detail::json_sax_dom_parser<json>;
  using Base::Base;

  bool number_integer(json::number_integer_t value) {
    std::string text = std::to_string(value);
    return Base::string(text);
  }
  bool number_unsigned(json::number_unsigned_t value) {
    std::string text = std::to_string(value);
    return Base::string(text);
  }
  bool number_float(json::number_float_t /*value*/, const json::string_t& raw) {
    std::string text = raw;
    return Base::string(text);
  }
};

std::string malformed(const std::string& what) { return "malformed graph document: " + what; }

const json& member(const json& obj, const char* key, const std::string& context) {
  if (!obj.is_object()) throw std::invalid_argument(malformed(context + " must be an object"));
  auto it = obj.find(key);
  if (it == obj.end()) throw std::invalid_argument(malformed(context + " lacks \"" + key + "\""));
  return *it;
}

std::string text_of(const json& value, const std::string& context) {
  if (!value.is_string()) throw std::invalid_argument(malformed(context + " must be a string or number"));
  return value.get<std::string>();
}

Rational number_of(const json& value, const std::string& context) {
  try {
    return parse_rational(text_of(value, context));
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(malformed(context + ": " + e.what()));
  }
}

json number_json(const Rational& value) {
  const std::string decimal = shortest_decimal(to_double(value));
  if (parse_rational(decimal) == value) return json::parse(decimal);
  return rational_to_string(value);
}

}  // namespace

WeightedGraph load_graph_string(std::string_view text, const LoadOptions& options) {
  json doc;
  RawNumberDom dom(doc, true);
  try {
    json::sax_parse(text.begin(), text.end(), &dom);
  } catch (const json::exception& e) {
    throw std::invalid_argument(malformed(e.what()));
  }
  const auto& vertices = member(doc, "vertices", "document");
  const auto& edges = member(doc, "edges", "document");
  if (!vertices.is_array() || !edges.is_array()) {
    throw std::invalid_argument(malformed("\"vertices\" and \"edges\" must be arrays"));
  }
  std::vector<VertexSpec> vs;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    const std::string ctx = "vertices[" + std::to_string(i) + "]";
    vs.push_back({text_of(member(vertices[i], "id", ctx), ctx + ".id"),
                  number_of(member(vertices[i], "m", ctx), ctx + ".m")});
  }
  std::vector<EdgeSpec> es;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const std::string ctx = "edges[" + std::to_string(i) + "]";
    es.push_back({text_of(member(edges[i], "u", ctx), ctx + ".u"),
                  text_of(member(edges[i], "v", ctx), ctx + ".v"),
                  number_of(member(edges[i], "w", ctx), ctx + ".w")});
  }
  auto g = WeightedGraph::build(std::move(vs), std::move(es));
  if (options.require_connected && !g.connected()) {
    throw std::invalid_argument("graph is not connected");
  }
  return g;
}

WeightedGraph load_graph(std::istream& in, const LoadOptions& options) {
  std::stringstream buffer;
  buffer << in.rdbuf();
  return load_graph_string(buffer.str(), options);
}

WeightedGraph load_graph_file(const std::string& path, const LoadOptions& options) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return load_graph(in, options);
}

void save_graph(std::ostream& out, const WeightedGraph& g) {
  json doc;
  doc["vertices"] = json::array();
  for (const auto& v : g.vertex_specs()) {
    doc["vertices"].push_back({{"id", v.id}, {"m", number_json(v.m)}});
  }
  doc["edges"] = json::array();
  for (const auto& e : g.edge_specs()) {
    doc["edges"].push_back({{"u", e.u}, {"v", e.v}, {"w", number_json(e.w)}});
  }
  out << doc.dump(1) << '\n';
}

std::string save_graph_string(const WeightedGraph& g) {
  std::ostringstream out;
  save_graph(out, g);
  return out.str();
}

void save_graph_file(const std::string& path, const WeightedGraph& g) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  save_graph(out, g);
}

}  // namespace curvlab
