#include "simploscore/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <ostream>
#include <thread>

#include "simploscore/csv.hpp"
#include "simploscore/errors.hpp"

namespace simploscore {

namespace {

// Runs fn(0..n-1) on a small pool; rethrows the first failure.
void parallel_for(std::size_t n, bool parallel, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers =
      parallel ? std::min<std::size_t>(n, std::max(1u, std::thread::hardware_concurrency())) : 1;
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += workers) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

std::vector<std::int64_t> unit_indices(std::span<const MusicalElement> seq, StepUnit unit) {
  std::vector<std::int64_t> units;
  units.reserve(seq.size());
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (unit == StepUnit::element) {
      units.push_back(static_cast<std::int64_t>(i));
      continue;
    }
    if (!seq[i].measure) throw DomainError("measure-based stepping needs measure indices (set beats per measure)");
    if (!units.empty() && *seq[i].measure < units.back()) {
      throw DomainError("element measures must be nondecreasing");
    }
    units.push_back(*seq[i].measure);
  }
  return units;
}

void ingest(SimplicialComplex& complex, std::span<const MusicalElement> seq, std::size_t i, bool with_incoming) {
  complex.insert_element(seq[i]);
  if (with_incoming && i > 0) {
    complex.insert_transition({seq[i - 1].representative, seq[i].representative,
                               seq[i - 1].representative == seq[i].representative});
  }
}

void finalize(EvolutionSeries& series) {
  std::vector<std::int64_t> steps;
  for (const auto& s : series.steps) steps.push_back(s.topology.step);
  const auto euler = series.euler();
  if (series.steps.size() >= 2) {
    series.normalized = normalize_series(steps, euler);
  } else if (series.steps.size() == 1) {
    series.normalized.t = {0.0};
    const double chi = static_cast<double>(euler.front());
    series.normalized.euler = {chi == 0.0 ? 0.0 : chi / std::abs(chi)};
    series.normalized.fallback = chi == 0.0;
  }
}

}  // namespace

int EvolutionSeries::max_dimension() const {
  int d = -1;
  for (const auto& s : steps) d = std::max(d, static_cast<int>(s.topology.simplex_counts.size()) - 1);
  return d;
}

std::vector<std::int64_t> EvolutionSeries::euler() const {
  std::vector<std::int64_t> out;
  out.reserve(steps.size());
  for (const auto& s : steps) out.push_back(s.topology.euler);
  return out;
}

SimplicialComplex build_complex(std::span<const MusicalElement> seq) {
  SimplicialComplex complex;
  for (std::size_t i = 0; i < seq.size(); ++i) ingest(complex, seq, i, true);
  return complex;
}

EvolutionStep analyze_step(const SimplicialComplex& complex, std::int64_t step, const EvolutionConfig& config) {
  EvolutionStep out;
  out.topology = analyze_topology(complex, step, config.topology);
  const CurvatureReport report = compute_curvature(complex, config.curvature_mode);
  for (const auto& o : report.orders) out.mean_forman.push_back(o.mean);
  out.total_vertex_curvature = report.total_vertex_curvature;
  return out;
}

EvolutionSeries run_cumulative(std::span<const MusicalElement> seq, const EvolutionConfig& config) {
  if (seq.empty()) throw DomainError("cannot evolve an empty piece");
  const auto units = unit_indices(seq, config.step_unit);
  const std::int64_t unit_count = units.back() + 1;

  // Building is sequential; each step's complex is kept so analysis can run in parallel.
  std::vector<SimplicialComplex> snapshots;
  snapshots.reserve(static_cast<std::size_t>(unit_count));
  SimplicialComplex complex;
  std::size_t i = 0;
  for (std::int64_t t = 0; t < unit_count; ++t) {
    for (; i < seq.size() && units[i] == t; ++i) ingest(complex, seq, i, true);
    snapshots.push_back(complex);
  }

  EvolutionSeries series;
  series.config = config;
  series.steps.resize(snapshots.size());
  parallel_for(snapshots.size(), config.parallel, [&](std::size_t t) {
    series.steps[t] = analyze_step(snapshots[t], static_cast<std::int64_t>(t), config);
  });
  series.final_nodes = complex.count(0);
  finalize(series);
  return series;
}

EvolutionSeries run_sliding(std::span<const MusicalElement> seq, const EvolutionConfig& config) {
  if (seq.empty()) throw DomainError("cannot evolve an empty piece");
  if (config.window < 1) throw DomainError("window must be at least 1");
  if (config.stride < 1) throw DomainError("stride must be at least 1");
  const auto units = unit_indices(seq, config.step_unit);
  const std::int64_t unit_count = units.back() + 1;
  if (config.window > unit_count) {
    throw DomainError("window of " + std::to_string(config.window) + " exceeds the piece length of " +
                      std::to_string(unit_count));
  }

  std::vector<std::int64_t> starts;
  for (std::int64_t t = 0; t + config.window <= unit_count; t += config.stride) starts.push_back(t);

  EvolutionSeries series;
  series.config = config;
  series.steps.resize(starts.size());
  std::vector<std::size_t> nodes(starts.size());
  parallel_for(starts.size(), config.parallel, [&](std::size_t w) {
    const std::int64_t lo = starts[w];
    const std::int64_t hi = lo + config.window;
    SimplicialComplex complex;
    bool first = true;
    for (std::size_t i = 0; i < seq.size(); ++i) {
      if (units[i] < lo || units[i] >= hi) continue;
      ingest(complex, seq, i, !first);
      first = false;
    }
    nodes[w] = complex.count(0);
    series.steps[w] = analyze_step(complex, lo, config);
  });
  series.final_nodes = nodes.back();
  finalize(series);
  return series;
}

EvolutionSeries run_evolution(std::span<const MusicalElement> seq, const EvolutionConfig& config) {
  return config.mode == EvolutionMode::cumulative ? run_cumulative(seq, config) : run_sliding(seq, config);
}

NormalizedSeries normalize_series(std::span<const std::int64_t> steps, std::span<const std::int64_t> euler) {
  if (steps.size() != euler.size()) throw DomainError("step and Euler series differ in length");
  if (steps.size() < 2) throw DomainError("normalization needs at least 2 steps");
  NormalizedSeries out;
  const double first = static_cast<double>(steps.front());
  const double span = static_cast<double>(steps.back()) - first;
  if (span == 0.0) throw DomainError("normalization needs distinct first and last steps");
  for (std::int64_t s : steps) out.t.push_back((static_cast<double>(s) - first) / span);

  double denom = std::abs(static_cast<double>(euler.front()));
  if (denom == 0.0) {
    out.fallback = true;
    for (std::int64_t e : euler) denom = std::max(denom, std::abs(static_cast<double>(e)));
  }
  for (std::int64_t e : euler) out.euler.push_back(denom == 0.0 ? 0.0 : static_cast<double>(e) / denom);
  return out;
}

std::vector<Plateau> detect_plateaus(std::span<const std::int64_t> euler, std::size_t min_len) {
  if (min_len < 2) throw DomainError("plateau minimum length must be at least 2");
  std::vector<Plateau> out;
  std::size_t start = 0;
  for (std::size_t i = 1; i <= euler.size(); ++i) {
    if (i < euler.size() && euler[i] == euler[start]) continue;
    if (i - 1 - start >= min_len) out.push_back({start, i - 1});
    start = i;
  }
  return out;
}

void write_series_csv(std::ostream& out, const EvolutionSeries& series) {
  const int d = std::max(series.max_dimension(), 0);
  out << "step,t_norm";
  for (int k = 0; k <= d; ++k) out << ",N" << k;
  for (int k = 0; k <= d; ++k) out << ",beta" << k;
  out << ",euler,euler_norm";
  for (int p = 1; p <= d; ++p) out << ",meanF" << p;
  out << ",sumKv\n";
  for (std::size_t i = 0; i < series.steps.size(); ++i) {
    const auto& s = series.steps[i];
    const auto& topo = s.topology;
    out << topo.step << ',' << format_double(series.normalized.t[i]);
    for (int k = 0; k <= d; ++k) {
      const auto uk = static_cast<std::size_t>(k);
      out << ',' << (uk < topo.simplex_counts.size() ? topo.simplex_counts[uk] : 0);
    }
    for (int k = 0; k <= d; ++k) {
      const auto uk = static_cast<std::size_t>(k);
      out << ',' << (uk < topo.betti.size() ? topo.betti[uk] : 0);
    }
    out << ',' << topo.euler << ',' << format_double(series.normalized.euler[i]);
    for (int p = 1; p <= d; ++p) {
      out << ',';
      if (static_cast<std::size_t>(p) <= s.mean_forman.size()) out << format_double(s.mean_forman[static_cast<std::size_t>(p - 1)]);
    }
    out << ',' << format_double(s.total_vertex_curvature) << '\n';
  }
}

nlohmann::json to_json(const EvolutionSeries& series) {
  auto steps = nlohmann::json::array();
  for (std::size_t i = 0; i < series.steps.size(); ++i) {
    const auto& s = series.steps[i];
    nlohmann::json row = to_json(s.topology);
    row["t_norm"] = series.normalized.t[i];
    row["euler_norm"] = series.normalized.euler[i];
    row["mean_forman"] = s.mean_forman;
    row["sumKv"] = s.total_vertex_curvature;
    steps.push_back(std::move(row));
  }
  auto plateaus = nlohmann::json::array();
  for (const auto& p : detect_plateaus(series.euler())) {
    plateaus.push_back({{"start", series.steps[p.start].topology.step}, {"end", series.steps[p.end].topology.step}});
  }
  const auto& cfg = series.config;
  nlohmann::json config{{"mode", cfg.mode == EvolutionMode::cumulative ? "cumulative" : "sliding"},
                        {"step_unit", cfg.step_unit == StepUnit::measure ? "measure" : "element"},
                        {"curvature", to_string(cfg.curvature_mode)}};
  if (cfg.mode == EvolutionMode::sliding) {
    config["window"] = cfg.window;
    config["stride"] = cfg.stride;
  }
  return nlohmann::json{{"config", std::move(config)},
                        {"steps", std::move(steps)},
                        {"euler_norm_fallback", series.normalized.fallback},
                        {"plateaus", std::move(plateaus)},
                        {"final_nodes", series.final_nodes}};
}

GaussBonnetSeries gauss_bonnet_series(const EvolutionSeries& series) {
  std::vector<double> chi;
  std::vector<double> total;
  for (const auto& s : series.steps) {
    chi.push_back(static_cast<double>(s.topology.euler));
    total.push_back(s.total_vertex_curvature);
  }
  return gauss_bonnet_series(chi, total, series.final_nodes);
}

}  // namespace simploscore
