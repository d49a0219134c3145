#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include <json.hpp>

#include "simploscore/complex.hpp"
#include "simploscore/curvature.hpp"
#include "simploscore/homology.hpp"
#include "simploscore/score.hpp"

namespace simploscore {

enum class EvolutionMode { cumulative, sliding };
enum class StepUnit { measure, element };

struct EvolutionConfig {
  EvolutionMode mode = EvolutionMode::cumulative;
  StepUnit step_unit = StepUnit::measure;
  int window = 2;  // sliding only, in step units
  int stride = 1;  // sliding only
  CurvatureMode curvature_mode = CurvatureMode::forman_sum;
  TopologyOptions topology;
  // Analyse steps on worker threads. Output does not depend on this.
  bool parallel = true;
};

struct EvolutionStep {
  TopologySnapshot topology;
  std::vector<double> mean_forman;  // index p-1 for p = 1 .. dimension
  double total_vertex_curvature = 0.0;

  friend bool operator==(const EvolutionStep&, const EvolutionStep&) = default;
};

struct NormalizedSeries {
  std::vector<double> t;
  std::vector<double> euler;
  // chi at the first step was 0, so values are divided by max |chi| instead.
  bool fallback = false;
};

struct EvolutionSeries {
  EvolutionConfig config;
  std::vector<EvolutionStep> steps;
  NormalizedSeries normalized;
  std::size_t final_nodes = 0;

  int max_dimension() const;
  std::vector<std::int64_t> euler() const;
};

// Builds the complex of a whole element sequence: every element plus every transition.
SimplicialComplex build_complex(std::span<const MusicalElement> seq);

// One snapshot per step unit (measure or element), each containing everything heard so far.
EvolutionSeries run_cumulative(std::span<const MusicalElement> seq, const EvolutionConfig& config);

// One fresh complex per window [t, t + window) of step units, advancing by stride.
EvolutionSeries run_sliding(std::span<const MusicalElement> seq, const EvolutionConfig& config);

EvolutionSeries run_evolution(std::span<const MusicalElement> seq, const EvolutionConfig& config);

EvolutionStep analyze_step(const SimplicialComplex& complex, std::int64_t step, const EvolutionConfig& config);

// t = (step - first) / (last - first), chi_norm = chi / |chi(first)|. Needs at least 2 steps.
NormalizedSeries normalize_series(std::span<const std::int64_t> steps, std::span<const std::int64_t> euler);

// A maximal run of equal chi values: positions [start, end] with end - start >= min_len,
// i.e. at least min_len consecutive steps where chi did not change.
struct Plateau {
  std::size_t start = 0;
  std::size_t end = 0;

  friend bool operator==(const Plateau&, const Plateau&) = default;
};

std::vector<Plateau> detect_plateaus(std::span<const std::int64_t> euler, std::size_t min_len = 2);

// step,t_norm,N0..Nd,beta0..betad,euler,euler_norm,meanF1..meanFd,sumKv
void write_series_csv(std::ostream& out, const EvolutionSeries& series);
nlohmann::json to_json(const EvolutionSeries& series);

GaussBonnetSeries gauss_bonnet_series(const EvolutionSeries& series);

}  // namespace simploscore
