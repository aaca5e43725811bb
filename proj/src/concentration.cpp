#include "curvlab/spectral_heat.hpp"

#include <cmath>
#include <stdexcept>

namespace curvlab {

namespace {

constexpr double kExactTolerance = 1e-12;

void fail(const std::string& what) { throw std::invalid_argument("precondition " + what); }

void check_graph(const WeightedGraph& g, double K) {
  const double deg = g.deg_max<double>();
  if (deg > 1.0 + kExactTolerance) fail("Deg_max ≤ 1 violated (Deg_max = " + format_number(deg) + ")");
  const double mass = g.total_measure<double>();
  if (std::abs(mass - 1.0) > kExactTolerance) fail("m(V) = 1 violated (m(V) = " + format_number(mass) + ")");
  if (!g.connected()) fail("connected violated");
  if (!(K > 0.0)) fail("K > 0 violated (K = " + format_number(K) + ")");
}

void check_function(const WeightedGraph& g, const VertexFunction<double>& f) {
  f.require_total("concentration check");
  if (f.size() != g.size()) throw std::invalid_argument("function size does not match the graph");
  const double avg = mean(g, f);
  if (std::abs(avg) > kExactTolerance) fail("<f> = 0 violated (<f> = " + format_number(avg) + ")");
  const double grad = gradient_sup_norm(g, f);
  if (grad > 1.0 + kExactTolerance) fail("|grad f|_inf ≤ 1 violated (" + format_number(grad) + ")");
}

ConcentrationReport evaluate(const WeightedGraph& g, const VertexFunction<double>& f, double K, double r) {
  if (!(r > 0.0)) fail("r > 0 violated (r = " + format_number(r) + ")");
  ConcentrationReport c;
  c.K = K;
  c.r = r;
  c.lambda = 2.0 * r * K;
  for (Vertex x = 0; x < g.size(); ++x) {
    const double m = g.measure<double>(x);
    if (f.at(x) > r) c.tail_mass += m;
    c.laplace_value += m * std::exp(c.lambda * f.at(x));
  }
  c.tail_bound = std::exp(-K * r * r);
  c.laplace_bound = std::exp(c.lambda * c.lambda / (4.0 * K));
  c.chernoff = std::exp(-c.lambda * r) * c.laplace_value;
  c.old_bound = std::exp(-K * K * r * r);
  c.tail_pass = c.tail_mass <= c.tail_bound + kExactTolerance;
  c.laplace_pass = c.laplace_value <= c.laplace_bound * (1.0 + 1e-8);
  c.chernoff_pass = c.tail_mass <= c.chernoff + kExactTolerance && c.chernoff <= c.tail_bound * (1.0 + 1e-8);
  // K <= 1 gives K r^2 >= K^2 r^2, hence exp(-K r^2) <= exp(-K^2 r^2).
  c.improves_old = K > 1.0 || (K * r * r >= K * K * r * r && c.tail_bound <= c.old_bound);
  c.pass = c.tail_pass && c.laplace_pass && c.chernoff_pass && c.improves_old;
  return c;
}

}  // namespace

std::vector<ConcentrationReport> concentration_sweep(const WeightedGraph& g,
                                                     const std::vector<VertexFunction<double>>& fs, double K,
                                                     const std::vector<double>& radii) {
  check_graph(g, K);
  for (const auto& f : fs) check_function(g, f);
  for (double r : radii) {
    if (!(r > 0.0)) fail("r > 0 violated (r = " + format_number(r) + ")");
  }
  const auto c = min_curvature(g);
  if (c.any && K > c.value + kCurvatureSlack) {
    fail("K ≤ inf kappa violated: K = " + format_number(K) + " exceeds computed curvature infimum " +
         format_number(c.value));
  }
  std::vector<ConcentrationReport> out;
  for (const auto& f : fs) {
    for (double r : radii) out.push_back(evaluate(g, f, K, r));
  }
  return out;
}

ConcentrationReport concentration_check(const WeightedGraph& g, const VertexFunction<double>& f, double K, double r) {
  return concentration_sweep(g, {f}, K, {r}).front();
}

}  // namespace curvlab
