#include "commands.hpp"

#include "curvlab/bakry_emery.hpp"
#include "curvlab/ollivier.hpp"
#include "curvlab/spectral_heat.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace curvlab::cli {

namespace {

using nlohmann::json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Writes to --out when given, otherwise to the command's stdout.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : path_(path), fallback_(fallback) {}

  std::ostream& stream() { return path_.empty() ? fallback_ : buffer_; }

  void flush() {
    if (path_.empty()) return;
    std::ofstream file(path_, std::ios::binary);
    if (!file) throw UsageError("cannot write '" + path_ + "'");
    file << buffer_.str();
  }

 private:
  std::string path_;
  std::ostream& fallback_;
  std::ostringstream buffer_;
};

std::string num(double v) { return format_number(v); }

json value(double v) { return v; }
json value(const Rational& v) { return rational_to_string(v); }

std::pair<Vertex, Vertex> parse_single_pair(const WeightedGraph& g, const std::string& text) {
  const auto pairs = parse_pair_list(g, text);
  if (pairs.size() != 1) throw UsageError("--pair expects exactly one pair 'x,y'");
  return pairs.front();
}

std::vector<std::pair<Vertex, Vertex>> select_pairs(const WeightedGraph& g, const std::string& spec) {
  if (spec == "edges") return edge_pairs(g);
  if (spec == "all") {
    std::vector<std::pair<Vertex, Vertex>> out;
    for (auto [x, y] : all_pairs(g)) {
      if (g.distance(x, y) != kUnreachable) out.emplace_back(x, y);
    }
    return out;
  }
  return parse_pair_list(g, spec);
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    out.push_back(to_double(parse_rational(item)));
  }
  if (out.empty()) throw UsageError("empty grid '" + text + "'");
  return out;
}

VertexFunction<double> load_function(const WeightedGraph& g, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw UsageError("malformed function file '" + path + "': " + e.what());
  }
  if (!doc.is_object()) throw UsageError("function file must be a JSON object mapping id to number");
  VertexFunction<double> f(g.size());
  for (const auto& [id, v] : doc.items()) {
    if (!g.contains(id)) throw UsageError("function file names unknown vertex '" + id + "'");
    if (v.is_number()) {
      f.set(g.index(id), v.get<double>());
    } else if (v.is_string()) {
      f.set(g.index(id), to_double(parse_rational(v.get<std::string>())));
    } else {
      throw UsageError("value for '" + id + "' is not a number");
    }
  }
  return f;
}

struct FunctionSource {
  std::string file;
  std::size_t random = 0;
  std::uint64_t seed = 0;

  void add_options(CLI::App* app) {
    app->add_option("--function", file, "JSON object mapping vertex id to value");
    app->add_option("--random", random, "number of random centered 1-Lipschitz samples");
    app->add_option("--seed", seed, "seed for --random")->capture_default_str();
  }

  std::vector<VertexFunction<double>> load(const WeightedGraph& g) const {
    if (file.empty() == (random == 0)) throw UsageError("give exactly one of --function or --random");
    if (!file.empty()) {
      auto f = load_function(g, file);
      f.require_total("function file");
      return {f};
    }
    std::mt19937_64 rng(seed);
    const std::size_t diam = g.diameter();
    const double spread = diam == kUnreachable ? 1.0 : std::max(1.0, static_cast<double>(diam));
    std::vector<VertexFunction<double>> out;
    for (std::size_t i = 0; i < random; ++i) out.push_back(random_lipschitz(g, rng, spread));
    return out;
  }
};

double resolve_K(const WeightedGraph& g, const std::string& text, std::size_t threads) {
  if (text == "auto") {
    const auto c = min_curvature(g, Mode::Float, threads);
    if (!c.any) throw UsageError("no connected pair to compute a curvature infimum");
    return c.value;
  }
  return to_double(parse_rational(text));
}

template <class T>
json plan_json(const WeightedGraph& g, const TransportPlan<T>& plan) {
  json entries = json::array();
  for (const auto& [cell, mass] : plan.entries) {
    if (mass == T(0)) continue;
    entries.push_back({{"x", g.id(cell.first)}, {"y", g.id(cell.second)}, {"mass", value(mass)}});
  }
  return entries;
}

// -----------------------------------------------------------------------------

int cmd_curvature(const WeightedGraph& g, const std::string& pairs, Mode mode, Method method, std::size_t threads,
                  std::ostream& out) {
  const auto reports = curvature_sweep(g, select_pairs(g, pairs), mode, method, threads);
  out << "pair,d,kappa_primal,kappa_dual,gap";
  if (mode == Mode::Exact) out << ",kappa_primal_exact,kappa_dual_exact";
  out << '\n';
  bool ok = true;
  for (const auto& r : reports) {
    auto opt = [](const std::optional<double>& v) { return v ? num(*v) : std::string(); };
    out << g.id(r.x) << '|' << g.id(r.y) << ',' << (r.ok() ? std::to_string(r.d) : std::string()) << ','
        << opt(r.kappa_primal) << ',' << opt(r.kappa_dual) << ',' << opt(r.gap);
    if (mode == Mode::Exact) out << ',' << r.exact_primal << ',' << r.exact_dual;
    out << '\n';
    if (!r.ok() || (r.gap && *r.gap > kDualityGapTolerance)) ok = false;
  }
  return ok ? kPass : kFail;
}

template <class T>
int cmd_plan(const WeightedGraph& g, Vertex x, Vertex y, std::ostream& out) {
  const auto result = curvature_primal<T>(g, x, y);
  const auto check = verify_plan(g, result.plan);
  json doc{{"x", g.id(x)},
           {"y", g.id(y)},
           {"d", g.distance(x, y)},
           {"mode", std::string(to_string(is_exact_v<T> ? Mode::Exact : Mode::Float))},
           {"kappa", value(result.kappa)},
           {"feasible", check.feasible},
           {"max_residual", value(check.max_residual)},
           {"entries", plan_json(g, result.plan)}};
  out << doc.dump(1) << '\n';
  return check.feasible ? kPass : kFail;
}

template <class T>
int cmd_surgery(const WeightedGraph& g, Vertex x, Vertex y, std::optional<Vertex> xp, std::ostream& out) {
  if (!xp && strict_progress_neighbors(g, x, y).empty()) {
    throw UsageError("no strict-progress neighbor for the pair (" + g.id(x) + ", " + g.id(y) + ")");
  }
  const auto r = surgery_check<T>(g, x, y, xp);
  json doc{{"x", g.id(x)},
           {"y", g.id(y)},
           {"x_prime", g.id(r.x_prime)},
           {"d", r.d0},
           {"kappa", value(r.kappa)},
           {"epsilon", value(r.epsilon)},
           {"q_min", value(r.q_min)},
           {"value_before", value(r.value_before)},
           {"value_after", value(r.value_after)},
           {"forbidden_mass", value(r.forbidden_mass)},
           {"mass_beyond", value(r.mass_beyond)},
           {"bound", value(r.bound)},
           {"bound_applies", r.bound_applies},
           {"bound_holds", r.bound_holds},
           {"before", plan_json(g, r.before)},
           {"after", plan_json(g, r.after)}};
  out << doc.dump(1) << '\n';
  return !r.bound_applies || r.bound_holds ? kPass : kFail;
}

int cmd_bakry_emery(const WeightedGraph& g, const std::string& format, const std::string& forms,
                    std::size_t threads, std::ostream& out) {
  if (!forms.empty()) {
    out << local_forms_json(g, local_forms(g, g.index(forms))) << '\n';
    return kPass;
  }
  const auto be = be_curvatures(g, threads);
  if (format == "json") {
    json rows = json::array();
    for (Vertex x = 0; x < g.size(); ++x) rows.push_back({{"vertex", g.id(x)}, {"be", be[x]}});
    out << json{{"vertices", rows}}.dump(1) << '\n';
  } else {
    out << "vertex,be\n";
    for (Vertex x = 0; x < g.size(); ++x) out << g.id(x) << ',' << num(be[x]) << '\n';
  }
  return kPass;
}

int cmd_no_implication(std::size_t max_vertices, bool families, const std::string& dir, std::size_t threads,
                       std::ostream& out) {
  if (max_vertices > 7) throw UsageError("--max-vertices must be at most 7");
  const auto result = counterexample_search(search_catalog(max_vertices, families), threads);
  out << "examined " << result.examined << '\n';
  auto emit = [&](const char* name, const std::optional<CurvatureProfile>& w) {
    if (!w) {
      out << name << ": none\n";
      return;
    }
    const auto path = std::filesystem::path(dir) / (std::string(name) + ".graph.json");
    std::filesystem::create_directories(path.parent_path().empty() ? "." : path.parent_path());
    save_graph_file(path.string(), w->graph);
    out << name << ": " << path.string() << " vertices " << w->graph.size() << " edges " << w->graph.edge_count()
        << " min_be " << num(w->min_be) << " min_kappa " << num(w->min_kappa) << '\n';
  };
  emit("be_negative_kappa_nonnegative", result.be_negative_kappa_nonnegative);
  emit("kappa_negative_be_nonnegative", result.kappa_negative_be_nonnegative);
  if (result.exhausted()) {
    out << "exhausted\n";
    return kFail;
  }
  return kPass;
}

int cmd_heat(const WeightedGraph& g, const VertexFunction<double>& f, const std::vector<double>& times,
             std::ostream& out) {
  const HeatKernel kernel(g);
  out << 't';
  for (Vertex x = 0; x < g.size(); ++x) out << ',' << g.id(x);
  out << '\n';
  for (double t : times) {
    const auto p = kernel.evolve(f, t);
    out << num(t);
    for (Vertex x = 0; x < g.size(); ++x) out << ',' << num(p.at(x));
    out << '\n';
  }
  return kPass;
}

int cmd_decay(const WeightedGraph& g, const std::vector<VertexFunction<double>>& fs, double K,
              const std::vector<double>& times, std::ostream& out) {
  const auto reports = gradient_decay_sweep(g, fs, K, times);
  out << "sample,t,ratio,bound,pass\n";
  bool ok = true;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    for (const auto& row : reports[i].rows) {
      out << i << ',' << num(row.t) << ',' << num(row.ratio) << ',' << num(row.bound) << ',' << row.pass << '\n';
    }
    ok = ok && reports[i].pass;
  }
  return ok ? kPass : kFail;
}

int cmd_concentration(const WeightedGraph& g, const std::vector<VertexFunction<double>>& fs, double K,
                      const std::vector<double>& radii, std::ostream& out) {
  const auto reports = concentration_sweep(g, fs, K, radii);
  out << "sample,K,r,lambda,tail_mass,tail_bound,laplace_value,laplace_bound,chernoff,old_bound,improves_old,pass\n";
  bool ok = true;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto& c = reports[i];
    out << i / radii.size() << ',' << num(c.K) << ',' << num(c.r) << ',' << num(c.lambda) << ','
        << num(c.tail_mass) << ',' << num(c.tail_bound) << ',' << num(c.laplace_value) << ','
        << num(c.laplace_bound) << ',' << num(c.chernoff) << ',' << num(c.old_bound) << ',' << c.improves_old
        << ',' << c.pass << '\n';
    ok = ok && c.pass;
  }
  return ok ? kPass : kFail;
}

std::string label(double v) { return std::abs(v) < 1e-12 ? "0" : format_number(v, 6); }

std::map<std::pair<Vertex, Vertex>, double> read_curvature_table(const WeightedGraph& g, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw UsageError("empty curvature table");
  std::vector<std::string> header;
  {
    std::stringstream s(line);
    std::string cell;
    while (std::getline(s, cell, ',')) header.push_back(cell);
  }
  auto column = [&](const std::string& name) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return i;
    }
    return std::nullopt;
  };
  const auto pair_col = column("pair");
  const auto kappa_col = column("kappa_primal") ? column("kappa_primal") : column("kappa_dual");
  if (!pair_col || !kappa_col) throw UsageError("curvature table needs pair and kappa columns");
  std::map<std::pair<Vertex, Vertex>, double> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream s(line);
    std::string cell;
    while (std::getline(s, cell, ',')) cells.push_back(cell);
    if (cells.size() <= std::max(*pair_col, *kappa_col) || cells[*kappa_col].empty()) continue;
    const auto bar = cells[*pair_col].find('|');
    if (bar == std::string::npos) throw UsageError("malformed pair '" + cells[*pair_col] + "'");
    const Vertex x = g.index(cells[*pair_col].substr(0, bar));
    const Vertex y = g.index(cells[*pair_col].substr(bar + 1));
    const double k = to_double(parse_rational(cells[*kappa_col]));
    out[{std::min(x, y), std::max(x, y)}] = k;
  }
  return out;
}

int cmd_export_dot(const WeightedGraph& g, const std::string& table, bool with_be, std::size_t threads,
                   std::ostream& out) {
  std::map<std::pair<Vertex, Vertex>, double> kappa;
  if (table.empty()) {
    for (const auto& r : curvature_sweep(g, edge_pairs(g), Mode::Float, Method::Primal, threads)) {
      kappa[{r.x, r.y}] = r.kappa();
    }
  } else {
    kappa = read_curvature_table(g, table);
  }
  std::vector<double> be;
  if (with_be) {
    be.assign(g.size(), 0.0);
    for (Vertex x = 0; x < g.size(); ++x) {
      if (!g.neighbors(x).empty()) be[x] = be_curvature(g, x);
    }
  }
  auto quote = [](const std::string& s) {
    std::string q = "\"";
    for (char c : s) {
      if (c == '"') q += '\\';
      q += c;
    }
    return q + "\"";
  };
  out << "graph curvlab {\n";
  for (Vertex x = 0; x < g.size(); ++x) {
    out << "  " << quote(g.id(x));
    if (with_be) out << " [label=" << quote(g.id(x) + "\\nBE=" + label(be[x])) << "]";
    out << ";\n";
  }
  for (auto [x, y] : edge_pairs(g)) {
    out << "  " << quote(g.id(x)) << " -- " << quote(g.id(y));
    if (auto it = kappa.find({x, y}); it != kappa.end()) out << " [label=" << quote(label(it->second)) << "]";
    out << ";\n";
  }
  out << "}\n";
  return kPass;
}

int cmd_check_hypotheses(const WeightedGraph& g, std::ostream& out) {
  const auto r = hypothesis_check(g);
  json doc{{"deg_max", r.deg_max},
           {"deg_max_finite", std::isfinite(r.deg_max)},
           {"q_min", r.q_min ? json(*r.q_min) : json(nullptr)},
           {"q_min_positive", r.q_min && *r.q_min > 0.0},
           {"connected", r.connected},
           {"liouville_hypotheses_met", r.met}};
  if (r.curvature.any) {
    doc["min_curvature"] = r.curvature.value;
    doc["min_pair"] = {g.id(r.curvature.x), g.id(r.curvature.y)};
  }
  out << doc.dump(1) << '\n';
  return r.met ? kPass : kFail;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Ollivier and Bakry-Emery curvature on weighted graphs", "curvlab"};
  app.require_subcommand(1);
  std::size_t threads = 0;
  app.add_option("--threads", threads, "worker threads (default: CURVLAB_THREADS or all cores)");

  std::string graph_path, out_path, mode_text = "float", method_text = "both", pairs = "edges", pair, xprime;
  std::string format = "csv", forms, K_text = "auto", t_grid, r_grid = "0.25,0.5,1,2", table, out_dir = ".";
  std::string family, weighting = "unit";
  std::size_t max_vertices = 7;
  bool no_families = false, no_be = false;
  FunctionSource source;

  auto with_graph = [&](CLI::App* sub) {
    sub->add_option("graph", graph_path, "graph-json file")->required();
    sub->add_option("--out", out_path, "output file (default: stdout)");
  };
  auto with_mode = [&](CLI::App* sub) {
    sub->add_option("--mode", mode_text, "float or exact-rational")->capture_default_str();
  };

  auto* curvature = app.add_subcommand("curvature", "pair curvature table (CSV)");
  with_graph(curvature);
  with_mode(curvature);
  curvature->add_option("--method", method_text, "primal, dual or both")->capture_default_str();
  curvature->add_option("--pairs", pairs, "edges, all, or 'a,b;c,d'")->capture_default_str();

  auto* plan = app.add_subcommand("plan", "optimal transport plan (JSON)");
  with_graph(plan);
  with_mode(plan);
  plan->add_option("--pair", pair, "x,y")->required();

  auto* surgery = app.add_subcommand("surgery", "rewrite an optimal plan around x' (JSON)");
  with_graph(surgery);
  with_mode(surgery);
  surgery->add_option("--pair", pair, "x,y")->required();
  surgery->add_option("--xprime", xprime, "neighbor of x one step closer to y");

  auto* be = app.add_subcommand("bakry-emery", "per-vertex Bakry-Emery curvature");
  with_graph(be);
  be->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  be->add_option("--forms", forms, "dump the local Gamma and Gamma2 matrices of this vertex");

  auto* noimp = app.add_subcommand("no-implication", "search small graphs for curvature sign counterexamples");
  noimp->add_option("--max-vertices", max_vertices, "largest vertex count (<= 7)")->capture_default_str();
  noimp->add_option("--out", out_dir, "directory for witness graphs")->capture_default_str();
  noimp->add_flag("--no-families", no_families, "skip the generator families after the exhaustive list");

  auto* heat = app.add_subcommand("heat", "heat semigroup P_t f (CSV)");
  with_graph(heat);
  source.add_options(heat);
  heat->add_option("--t-grid", t_grid, "comma-separated times");

  auto* decay = app.add_subcommand("decay", "gradient decay check (CSV)");
  with_graph(decay);
  source.add_options(decay);
  decay->add_option("--K", K_text, "curvature lower bound or 'auto'")->capture_default_str();
  decay->add_option("--t-grid", t_grid, "comma-separated times");

  auto* conc = app.add_subcommand("concentration", "Gaussian concentration check (CSV)");
  with_graph(conc);
  source.add_options(conc);
  conc->add_option("--K", K_text, "curvature lower bound or 'auto'")->capture_default_str();
  conc->add_option("--r-grid", r_grid, "comma-separated radii")->capture_default_str();

  auto* gen = app.add_subcommand("gen", "generate a family graph");
  gen->add_option("family", family, "family:size, e.g. cycle:6 or grid:4x4")->required();
  gen->add_option("--weighting", weighting, "unit, normalized or degree-one")->capture_default_str();
  gen->add_option("--out", out_path, "output file (default: stdout)");

  auto* dot = app.add_subcommand("export-dot", "Graphviz export labelled with curvatures");
  with_graph(dot);
  dot->add_option("--curvature", table, "curvature CSV (default: compute the edge sweep)");
  dot->add_flag("--no-be", no_be, "omit Bakry-Emery vertex labels");

  auto* hyp = app.add_subcommand("check-hypotheses", "Liouville hypotheses report (JSON)");
  with_graph(hyp);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kPass : kUsage;
  }

  try {
    Sink sink(out_path, out);
    int code = kPass;
    if (gen->parsed()) {
      save_graph(sink.stream(), generate(family, parse_weighting(weighting)));
      sink.flush();
      return kPass;
    }
    if (noimp->parsed()) return cmd_no_implication(max_vertices, !no_families, out_dir, threads, out);

    const auto g = load_graph_file(graph_path);
    const Mode mode = parse_mode(mode_text);
    auto& o = sink.stream();
    if (curvature->parsed()) {
      code = cmd_curvature(g, pairs, mode, parse_method(method_text), threads, o);
    } else if (plan->parsed()) {
      auto [x, y] = parse_single_pair(g, pair);
      code = mode == Mode::Exact ? cmd_plan<Rational>(g, x, y, o) : cmd_plan<double>(g, x, y, o);
    } else if (surgery->parsed()) {
      auto [x, y] = parse_single_pair(g, pair);
      std::optional<Vertex> xp;
      if (!xprime.empty()) xp = g.index(xprime);
      code = mode == Mode::Exact ? cmd_surgery<Rational>(g, x, y, xp, o) : cmd_surgery<double>(g, x, y, xp, o);
    } else if (be->parsed()) {
      code = cmd_bakry_emery(g, format, forms, threads, o);
    } else if (heat->parsed()) {
      const auto fs = source.load(g);
      code = cmd_heat(g, fs.front(), t_grid.empty() ? kDefaultTimeGrid : parse_grid(t_grid), o);
    } else if (decay->parsed()) {
      const auto fs = source.load(g);
      code = cmd_decay(g, fs, resolve_K(g, K_text, threads), t_grid.empty() ? kDefaultTimeGrid : parse_grid(t_grid),
                       o);
    } else if (conc->parsed()) {
      const auto fs = source.load(g);
      code = cmd_concentration(g, fs, resolve_K(g, K_text, threads), parse_grid(r_grid), o);
    } else if (dot->parsed()) {
      code = cmd_export_dot(g, table, !no_be, threads, o);
    } else if (hyp->parsed()) {
      code = cmd_check_hypotheses(g, o);
    }
    sink.flush();
    return code;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
  }
  return kUsage;
}

}  // namespace curvlab::cli
