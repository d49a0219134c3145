#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "simploscore/complex.hpp"

namespace simploscore {

enum class CurvatureMode { forman_sum, forman_mean, angle_deficit };

CurvatureMode parse_curvature_mode(const std::string& text);
std::string to_string(CurvatureMode mode);

// 4 - (deg u + deg v), degrees counted in the 1-skeleton.
std::int64_t forman_graph_edge(const SimplicialComplex& complex, const Simplex& edge);

// (#cofaces + p + 1) - #parallel neighbours, for a p-simplex with p >= 1. A parallel neighbour
// shares a (p-1)-face with s but no (p+1)-coface.
std::int64_t forman_p(const SimplicialComplex& complex, const Simplex& s);

// forman_p on a 1-simplex; cross-checked against forman_graph_edge when the edge has no cofaces.
std::int64_t forman_edge(const SimplicialComplex& complex, const Simplex& edge);

double gaussian_vertex(const SimplicialComplex& complex, int vertex, CurvatureMode mode);

struct OrderCurvature {
  int order = 1;
  std::vector<std::pair<Simplex, std::int64_t>> values;  // registry order
  double mean = 0.0;
  std::int64_t min = 0;
  std::int64_t max = 0;
};

struct CurvatureReport {
  CurvatureMode mode = CurvatureMode::forman_sum;
  std::vector<OrderCurvature> orders;  // p = 1 .. d
  std::vector<std::pair<int, double>> vertex_curvatures;
  double total_vertex_curvature = 0.0;

  // Mean Forman curvature at order p, or NaN if the complex has no p-simplices.
  double mean_at(int p) const;
};

CurvatureReport compute_curvature(const SimplicialComplex& complex, CurvatureMode mode = CurvatureMode::forman_sum);

// order,simplex,curvature with the simplex written as dash-joined pitches.
void write_curvature_csv(std::ostream& out, const CurvatureReport& report);
// {mode, orders: [{order, mean, min, max}], total_vertex_curvature}
nlohmann::json summary_json(const CurvatureReport& report);

struct GaussBonnetSeries {
  std::vector<double> euler;
  std::vector<double> total_curvature;
  bool slope_defined = false;
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::size_t final_nodes = 0;
  double alpha_nodes = 0.0;    // 1 / N_0 at the final step
  double alpha_fitted = 0.0;   // 2 pi / slope
  double scaled_ratio = 0.0;   // alpha_nodes * slope / (2 pi)
};

// Requires at least 3 steps. Constant chi leaves slope_defined false.
GaussBonnetSeries gauss_bonnet_series(std::span<const double> euler, std::span<const double> total_curvature,
                                      std::size_t final_nodes);

nlohmann::json to_json(const GaussBonnetSeries& series);

}  // namespace simploscore
