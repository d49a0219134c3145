#include "simploscore/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <set>

#include "simploscore/errors.hpp"
#include "simploscore/fitting.hpp"

namespace simploscore {

namespace {

std::size_t vertex_degree(const SimplicialComplex& complex, int v) {
  return complex.coface_ids(Simplex({v})).size();
}

Simplex simplex_union(const Simplex& a, const Simplex& b) {
  std::vector<int> u;
  std::set_union(a.vertices().begin(), a.vertices().end(), b.vertices().begin(), b.vertices().end(),
                 std::back_inserter(u));
  return Simplex(std::move(u));
}

std::string label(const Simplex& s) {
  std::string out;
  for (int v : s.vertices()) {
    if (!out.empty()) out += '-';
    out += std::to_string(v);
  }
  return out;
}

}  // namespace

CurvatureMode parse_curvature_mode(const std::string& text) {
  if (text == "forman_sum") return CurvatureMode::forman_sum;
  if (text == "forman_mean") return CurvatureMode::forman_mean;
  if (text == "angle_deficit") return CurvatureMode::angle_deficit;
  throw DomainError("unknown curvature mode '" + text + "'");
}

std::string to_string(CurvatureMode mode) {
  switch (mode) {
    case CurvatureMode::forman_sum:
      return "forman_sum";
    case CurvatureMode::forman_mean:
      return "forman_mean";
    case CurvatureMode::angle_deficit:
      return "angle_deficit";
  }
  return "unknown";
}

std::int64_t forman_graph_edge(const SimplicialComplex& complex, const Simplex& edge) {
  if (edge.dimension() != 1) throw DomainError("forman_graph_edge expects a 1-simplex");
  complex.index_of(edge);
  const auto& v = edge.vertices();
  return 4 - static_cast<std::int64_t>(vertex_degree(complex, v[0]) + vertex_degree(complex, v[1]));
}

std::int64_t forman_p(const SimplicialComplex& complex, const Simplex& s) {
  const int p = s.dimension();
  if (p == 0) throw DomainError("forman_p is defined for p >= 1; use gaussian_vertex for vertices");
  const auto cofaces = static_cast<std::int64_t>(complex.coface_ids(s).size());

  std::int64_t parallel = 0;
  for (std::size_t i = 0; i <= static_cast<std::size_t>(p); ++i) {
    const Simplex face = s.facet(i);
    for (std::size_t id : complex.coface_ids(face)) {
      const Simplex& t = complex.simplex(p, id);
      if (t == s) continue;
      // Two distinct p-simplices share at most one (p-1)-face, so each neighbour is seen once.
      if (!complex.contains(simplex_union(s, t))) ++parallel;
    }
  }
  return cofaces + p + 1 - parallel;
}

std::int64_t forman_edge(const SimplicialComplex& complex, const Simplex& edge) {
  if (edge.dimension() != 1) throw DomainError("forman_edge expects a 1-simplex");
  const std::int64_t value = forman_p(complex, edge);
  if (complex.coface_ids(edge).empty()) {
    const std::int64_t graph = forman_graph_edge(complex, edge);
    if (graph != value) {
      throw ConsistencyError("Forman curvature of edge " + label(edge) + " is " + std::to_string(value) +
                             " but the graph formula gives " + std::to_string(graph));
    }
  }
  return value;
}

double gaussian_vertex(const SimplicialComplex& complex, int vertex, CurvatureMode mode) {
  const Simplex v({vertex});
  const auto edge_ids = complex.coface_ids(v);
  const auto deg = static_cast<double>(edge_ids.size());
  switch (mode) {
    case CurvatureMode::forman_sum:
    case CurvatureMode::forman_mean: {
      double sum = 0.0;
      for (std::size_t id : edge_ids) sum += static_cast<double>(forman_edge(complex, complex.simplex(1, id)));
      if (mode == CurvatureMode::forman_sum) return sum;
      return edge_ids.empty() ? 0.0 : sum / deg;
    }
    case CurvatureMode::angle_deficit: {
      // Every triangle at v contains exactly two of v's edges.
      std::size_t twice_triangles = 0;
      for (std::size_t id : edge_ids) twice_triangles += complex.coface_ids(complex.simplex(1, id)).size();
      return 1.0 - deg / 2.0 + static_cast<double>(twice_triangles) / 6.0;
    }
  }
  throw DomainError("unknown curvature mode");
}

double CurvatureReport::mean_at(int p) const {
  for (const auto& o : orders) {
    if (o.order == p) return o.mean;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

CurvatureReport compute_curvature(const SimplicialComplex& complex, CurvatureMode mode) {
  CurvatureReport report;
  report.mode = mode;
  for (int p = 1; p <= complex.dimension(); ++p) {
    OrderCurvature oc;
    oc.order = p;
    const auto simplices = complex.simplices(p);
    oc.min = std::numeric_limits<std::int64_t>::max();
    oc.max = std::numeric_limits<std::int64_t>::min();
    std::int64_t sum = 0;
    for (const auto& s : simplices) {
      const std::int64_t f = p == 1 ? forman_edge(complex, s) : forman_p(complex, s);
      oc.values.emplace_back(s, f);
      sum += f;
      oc.min = std::min(oc.min, f);
      oc.max = std::max(oc.max, f);
    }
    oc.mean = static_cast<double>(sum) / static_cast<double>(simplices.size());
    report.orders.push_back(std::move(oc));
  }

  // Edge curvatures are reused for the Forman vertex modes.
  std::vector<std::int64_t> edge_values;
  if (!report.orders.empty()) {
    for (const auto& [s, f] : report.orders.front().values) edge_values.push_back(f);
  }
  // The angle-deficit total is kept in sixths so that an integral total comes out exact.
  std::int64_t total_sixths = 0;
  for (const auto& vs : complex.simplices(0)) {
    const int v = vs.vertices().front();
    double k = 0.0;
    if (mode == CurvatureMode::angle_deficit) {
      k = gaussian_vertex(complex, v, mode);
      const auto ids = complex.coface_ids(vs);
      std::int64_t sixths = 6 - 3 * static_cast<std::int64_t>(ids.size());
      for (std::size_t id : ids) sixths += static_cast<std::int64_t>(complex.coface_ids(complex.simplex(1, id)).size());
      total_sixths += sixths;
    } else {
      const auto ids = complex.coface_ids(vs);
      for (std::size_t id : ids) k += static_cast<double>(edge_values[id]);
      if (mode == CurvatureMode::forman_mean) k = ids.empty() ? 0.0 : k / static_cast<double>(ids.size());
    }
    report.vertex_curvatures.emplace_back(v, k);
    report.total_vertex_curvature += k;
  }
  if (mode == CurvatureMode::angle_deficit) report.total_vertex_curvature = static_cast<double>(total_sixths) / 6.0;
  return report;
}

void write_curvature_csv(std::ostream& out, const CurvatureReport& report) {
  out << "order,simplex,curvature\n";
  for (const auto& o : report.orders) {
    for (const auto& [s, f] : o.values) out << o.order << ',' << label(s) << ',' << f << '\n';
  }
}

nlohmann::json summary_json(const CurvatureReport& report) {
  auto orders = nlohmann::json::array();
  for (const auto& o : report.orders) {
    orders.push_back({{"order", o.order}, {"mean", o.mean}, {"min", o.min}, {"max", o.max}});
  }
  auto vertices = nlohmann::json::array();
  for (const auto& [v, k] : report.vertex_curvatures) vertices.push_back({{"vertex", v}, {"curvature", k}});
  return nlohmann::json{{"mode", to_string(report.mode)},
                        {"orders", std::move(orders)},
                        {"vertex_curvatures", std::move(vertices)},
                        {"total_vertex_curvature", report.total_vertex_curvature}};
}

GaussBonnetSeries gauss_bonnet_series(std::span<const double> euler, std::span<const double> total_curvature,
                                      std::size_t final_nodes) {
  if (euler.size() != total_curvature.size()) throw DomainError("Gauss-Bonnet series length mismatch");
  if (euler.size() < 3) throw DomainError("Gauss-Bonnet series needs at least 3 steps");
  GaussBonnetSeries gb;
  gb.euler.assign(euler.begin(), euler.end());
  gb.total_curvature.assign(total_curvature.begin(), total_curvature.end());
  gb.final_nodes = final_nodes;
  gb.alpha_nodes = final_nodes > 0 ? 1.0 / static_cast<double>(final_nodes) : 0.0;
  try {
    const FitResult line = fit_linear(euler, total_curvature);
    gb.slope_defined = true;
    gb.slope = line.parameters[0];
    gb.intercept = line.parameters[1];
    gb.r_squared = line.r_squared;
    gb.alpha_fitted = gb.slope != 0.0 ? 2.0 * std::numbers::pi / gb.slope : 0.0;
    gb.scaled_ratio = gb.alpha_nodes * gb.slope / (2.0 * std::numbers::pi);
  } catch (const DomainError&) {
    gb.slope_defined = false;
  }
  return gb;
}

nlohmann::json to_json(const GaussBonnetSeries& gb) {
  auto points = nlohmann::json::array();
  for (std::size_t i = 0; i < gb.euler.size(); ++i) points.push_back({gb.euler[i], gb.total_curvature[i]});
  nlohmann::json j{{"points", std::move(points)},
                   {"slope_defined", gb.slope_defined},
                   {"final_nodes", gb.final_nodes},
                   {"alpha_nodes", gb.alpha_nodes}};
  if (gb.slope_defined) {
    j["slope"] = gb.slope;
    j["intercept"] = gb.intercept;
    j["r2"] = gb.r_squared;
    j["alpha_fitted"] = gb.alpha_fitted;
    j["scaled_ratio"] = gb.scaled_ratio;
  } else {
    j["slope"] = nullptr;
    j["flag"] = "slope undefined: Euler characteristic is constant";
  }
  return j;
}

}  // namespace simploscore
