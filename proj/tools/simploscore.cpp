#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "simploscore/complex.hpp"
#include "simploscore/csv.hpp"
#include "simploscore/curvature.hpp"
#include "simploscore/errors.hpp"
#include "simploscore/evolution.hpp"
#include "simploscore/fitting.hpp"
#include "simploscore/homology.hpp"
#include "simploscore/midi.hpp"
#include "simploscore/score.hpp"
#include "simploscore/svg.hpp"
#include "exit_codes.hpp"

namespace fs = std::filesystem;
using namespace simploscore;
using namespace simploscore::cli;
using nlohmann::json;

namespace {

// Raw flag values as typed on the command line or read from the config file.
struct RawOptions {
  std::string beats_per_measure;
  std::string pickup_beats = "0";
  std::string epsilon_beats = "1/16";
  std::string mode = "cumulative";
  std::string step_unit = "measure";
  int window = 2;
  int stride = 1;
  std::string curvature = "forman_sum";
  std::vector<std::string> models;
  std::string out;
  std::string format;
  bool pin_offset = false;
  bool matrices = false;
  bool spectral = true;
  std::string x_column = "t_norm";
  std::vector<std::string> y_columns;
};

struct Settings {
  std::optional<Beats> beats_per_measure;
  Beats pickup{0};
  Beats epsilon = kDefaultEpsilonBeats;
  EvolutionConfig evolution;
  std::vector<ModelSpec> models;
  ExponentialFitOptions exp_options;
  std::set<std::string> formats;
  fs::path out;
  bool matrices = false;
  std::string x_column;
  std::vector<std::string> y_columns;
};

Beats parse_flag_beats(const std::string& flag, const std::string& text) {
  try {
    return parse_beats(text);
  } catch (const DomainError& e) {
    throw UsageError(flag + ": " + e.what());
  }
}

std::set<std::string> parse_formats(const std::string& text, const std::string& fallback) {
  std::set<std::string> out;
  std::stringstream ss(text.empty() ? fallback : text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item != "csv" && item != "json" && item != "svg") {
      throw UsageError("--format: unknown format '" + item + "' (expected csv, json, svg)");
    }
    out.insert(item);
  }
  if (out.empty()) throw UsageError("--format: no formats given");
  return out;
}

// Everything is checked here, before any input file is opened.
Settings validate(const RawOptions& raw, const std::string& default_format) {
  Settings s;
  if (!raw.beats_per_measure.empty()) {
    s.beats_per_measure = parse_flag_beats("--beats-per-measure", raw.beats_per_measure);
    if (*s.beats_per_measure <= Beats(0)) throw UsageError("--beats-per-measure must be positive");
  }
  s.pickup = parse_flag_beats("--pickup-beats", raw.pickup_beats);
  if (s.pickup < Beats(0)) throw UsageError("--pickup-beats must not be negative");
  s.epsilon = parse_flag_beats("--epsilon-beats", raw.epsilon_beats);
  if (s.epsilon < Beats(0)) throw UsageError("--epsilon-beats must not be negative");

  auto& evo = s.evolution;
  if (raw.mode == "cumulative") {
    evo.mode = EvolutionMode::cumulative;
  } else if (raw.mode == "sliding") {
    evo.mode = EvolutionMode::sliding;
  } else {
    throw UsageError("--mode: expected cumulative or sliding, got '" + raw.mode + "'");
  }
  if (raw.step_unit == "measure") {
    evo.step_unit = StepUnit::measure;
  } else if (raw.step_unit == "element") {
    evo.step_unit = StepUnit::element;
  } else {
    throw UsageError("--step-unit: expected measure or element, got '" + raw.step_unit + "'");
  }
  if (raw.window < 1) throw UsageError("--window must be at least 1");
  if (raw.stride < 1) throw UsageError("--stride must be at least 1");
  evo.window = raw.window;
  evo.stride = raw.stride;
  try {
    evo.curvature_mode = parse_curvature_mode(raw.curvature);
  } catch (const DomainError& e) {
    throw UsageError(std::string("--curvature: ") + e.what());
  }
  evo.topology.verify_identities = true;
  evo.topology.spectral_cross_check = raw.spectral;

  const std::vector<std::string> models =
      raw.models.empty() ? std::vector<std::string>{"linear", "exp", "poly:4"} : raw.models;
  for (const auto& m : models) {
    try {
      s.models.push_back(parse_model_spec(m));
    } catch (const DomainError& e) {
      throw UsageError(std::string("--model: ") + e.what());
    }
  }
  s.exp_options.pin_offset = raw.pin_offset;
  s.formats = parse_formats(raw.format, default_format);
  s.out = raw.out;
  s.matrices = raw.matrices;
  s.x_column = raw.x_column;
  s.y_columns = raw.y_columns.empty() ? std::vector<std::string>{"euler_norm"} : raw.y_columns;
  return s;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
  spdlog::info("wrote {}", path.string());
}

void ensure_out_dir(const Settings& s) {
  if (s.out.empty()) return;
  std::error_code ec;
  fs::create_directories(s.out, ec);
  if (ec) throw std::runtime_error("cannot create output directory '" + s.out.string() + "': " + ec.message());
}

std::string stem_of(const std::string& path) { return fs::path(path).stem().string(); }

bool is_csv(const std::string& path) {
  auto ext = fs::path(path).extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), ::tolower);
  return ext == ".csv";
}

struct Piece {
  std::string path;
  ParsedMidi midi;
  std::optional<MeterSpec> meter;
  std::vector<NoteEvent> events;
  ElementSequence elements;
};

Piece load_piece(const std::string& path, const Settings& s) {
  Piece p;
  p.path = path;
  p.midi = read_midi_file(path);
  for (const auto& w : p.midi.warnings) spdlog::warn("{}: {}", path, w);
  if (p.midi.events.empty()) throw DomainError("empty piece: '" + path + "' contains no notes");
  if (s.beats_per_measure) {
    p.meter = MeterSpec{*s.beats_per_measure, MeterSource::cli_override};
  } else {
    p.meter = p.midi.meter;
  }
  p.events = p.meter ? assign_measures(p.midi.events, *p.meter, s.pickup) : p.midi.events;
  p.elements = detect_simultaneities(p.events, s.epsilon);
  spdlog::info("{}: {} notes, {} elements", path, p.events.size(), p.elements.size());
  return p;
}

json meter_json(const std::optional<MeterSpec>& meter) {
  if (!meter) return nullptr;
  return {{"beats_per_measure", format_beats(meter->beats_per_measure)},
          {"source", meter->source == MeterSource::midi_meta ? "midi_meta" : "cli_override"}};
}

// Runs jobs on worker threads; results keep input order.
template <class Fn>
void for_each_concurrently(std::size_t n, Fn fn) {
  const std::size_t workers = std::min<std::size_t>(n, std::max(1u, std::thread::hardware_concurrency()));
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += workers) fn(i);
    });
  }
  for (std::size_t i = 0; i < n; i += std::max<std::size_t>(workers, 1)) fn(i);
  for (auto& t : pool) t.join();
}

int exit_code_for(const std::exception_ptr& error) {
  try {
    std::rethrow_exception(error);
  } catch (const std::exception& e) {
    const ExitCode code = cli::exit_code_for(e);
    if (code == kConsistencyFailure) {
      spdlog::critical("internal consistency failure: {}", e.what());
    } else {
      spdlog::error("{}", e.what());
    }
    return code;
  } catch (...) {
    spdlog::critical("unknown failure");
    return kConsistencyFailure;
  }
}

// ---- analyze ----

struct AnalyzeOutput {
  json report;
  std::string notes_csv;
  std::string curvature_csv;
  std::vector<std::pair<std::string, std::string>> matrices;
};

AnalyzeOutput analyze_one(const std::string& path, const Settings& s) {
  const Piece piece = load_piece(path, s);
  const SimplicialComplex complex = build_complex(piece.elements);
  TopologyOptions topo;
  topo.verify_identities = true;
  topo.spectral_cross_check = s.evolution.topology.spectral_cross_check;
  const TopologySnapshot snapshot = analyze_topology(complex, 0, topo);
  const CurvatureReport curvature = compute_curvature(complex, s.evolution.curvature_mode);

  AnalyzeOutput out;
  json topology = to_json(snapshot);
  topology.erase("step");
  if (topo.spectral_cross_check) topology["betti_spectral"] = betti_spectral(complex, topo.spectral_tolerance);
  std::size_t measures = 0;
  if (piece.meter) {
    for (const auto& e : piece.events) measures = std::max<std::size_t>(measures, static_cast<std::size_t>(*e.measure) + 1);
  }
  out.report = {{"input", path},
                {"midi", {{"format", piece.midi.format},
                          {"ticks_per_quarter", piece.midi.ticks_per_quarter},
                          {"warnings", piece.midi.warnings}}},
                {"meter", meter_json(piece.meter)},
                {"events", piece.events.size()},
                {"elements", piece.elements.size()},
                {"measures", piece.meter ? json(measures) : json(nullptr)},
                {"dimension", complex.dimension()},
                {"topology", std::move(topology)},
                {"curvature", summary_json(curvature)},
                {"complex", to_json(complex)},
                {"sequence", to_json(piece.elements)}};

  std::ostringstream notes;
  write_note_csv(notes, piece.events);
  out.notes_csv = notes.str();
  std::ostringstream curv;
  write_curvature_csv(curv, curvature);
  out.curvature_csv = curv.str();
  if (s.matrices) {
    for (int k = 1; k <= complex.dimension(); ++k) {
      std::ostringstream m;
      write_matrix_csv(m, boundary_matrix(complex, k).entries);
      out.matrices.emplace_back("B" + std::to_string(k), m.str());
    }
    for (int k = 0; k <= complex.dimension(); ++k) {
      std::ostringstream m;
      write_matrix_csv(m, hodge_laplacian(complex, k).total);
      out.matrices.emplace_back("L" + std::to_string(k), m.str());
    }
  }
  return out;
}

int cmd_analyze(const std::vector<std::string>& inputs, const Settings& s) {
  ensure_out_dir(s);
  std::vector<std::optional<AnalyzeOutput>> results(inputs.size());
  std::vector<std::exception_ptr> errors(inputs.size());
  for_each_concurrently(inputs.size(), [&](std::size_t i) {
    try {
      results[i] = analyze_one(inputs[i], s);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  });

  int code = kOk;
  json reports = json::array();
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    if (errors[i]) {
      code = std::max(code, exit_code_for(errors[i]));
      continue;
    }
    const auto& r = *results[i];
    if (s.out.empty()) {
      reports.push_back(r.report);
      continue;
    }
    const std::string stem = stem_of(inputs[i]);
    if (s.formats.count("json")) write_text(s.out / (stem + ".report.json"), r.report.dump(2) + "\n");
    if (s.formats.count("csv")) {
      write_text(s.out / (stem + ".notes.csv"), r.notes_csv);
      write_text(s.out / (stem + ".curvature.csv"), r.curvature_csv);
      for (const auto& [name, text] : r.matrices) write_text(s.out / (stem + "." + name + ".csv"), text);
    }
  }
  if (s.out.empty() && !reports.empty()) {
    std::cout << (reports.size() == 1 ? reports.front() : reports).dump(2) << "\n";
  }
  return code;
}

// ---- evolve ----

PlotSpec euler_plot(const std::string& title, const EvolutionSeries& series) {
  PlotSpec plot;
  plot.title = title;
  plot.x_label = "normalized time";
  plot.y_label = "normalized Euler characteristic";
  plot.series.push_back({"chi_norm", series.normalized.t, series.normalized.euler, false});
  return plot;
}

PlotSpec curvature_plot(const std::string& title, const EvolutionSeries& series) {
  PlotSpec plot;
  plot.title = title;
  plot.x_label = "normalized time";
  plot.y_label = "mean Forman curvature";
  for (int p = 1; p <= series.max_dimension(); ++p) {
    PlotSeries line{"F" + std::to_string(p), {}, {}, false};
    for (std::size_t i = 0; i < series.steps.size(); ++i) {
      const auto& means = series.steps[i].mean_forman;
      if (static_cast<std::size_t>(p) > means.size()) continue;
      line.x.push_back(series.normalized.t[i]);
      line.y.push_back(means[static_cast<std::size_t>(p - 1)]);
    }
    plot.series.push_back(std::move(line));
  }
  return plot;
}

std::int64_t step_units(const Piece& piece, const EvolutionConfig& cfg) {
  if (cfg.step_unit == StepUnit::element) return static_cast<std::int64_t>(piece.elements.size());
  if (!piece.meter) {
    throw UsageError("'" + piece.path + "' has no time signature; pass --beats-per-measure or --step-unit element");
  }
  return *piece.elements.back().measure + 1;
}

EvolutionSeries evolve_piece(const Piece& piece, const Settings& s) {
  const std::int64_t units = step_units(piece, s.evolution);
  if (s.evolution.mode == EvolutionMode::sliding && s.evolution.window > units) {
    throw UsageError("--window " + std::to_string(s.evolution.window) + " exceeds the piece length of " +
                     std::to_string(units) + " step units in '" + piece.path + "'");
  }
  return run_evolution(piece.elements, s.evolution);
}

int cmd_evolve(const std::vector<std::string>& inputs, const Settings& s) {
  if (s.out.empty() && (inputs.size() > 1 || s.formats.size() > 1)) {
    throw UsageError("several inputs or formats need --out DIR");
  }
  ensure_out_dir(s);
  int code = kOk;
  for (const auto& path : inputs) {
    try {
      const Piece piece = load_piece(path, s);
      const EvolutionSeries series = evolve_piece(piece, s);
      const std::string stem = stem_of(path);
      std::ostringstream csv;
      write_series_csv(csv, series);
      const std::string json_text = to_json(series).dump(2) + "\n";
      if (s.out.empty()) {
        const auto& f = *s.formats.begin();
        if (f == "csv") std::cout << csv.str();
        if (f == "json") std::cout << json_text;
        if (f == "svg") std::cout << render_svg(euler_plot(stem, series));
        continue;
      }
      if (s.formats.count("csv")) write_text(s.out / (stem + ".series.csv"), csv.str());
      if (s.formats.count("json")) write_text(s.out / (stem + ".series.json"), json_text);
      if (s.formats.count("svg")) {
        write_text(s.out / (stem + ".euler.svg"), render_svg(euler_plot(stem, series)));
        write_text(s.out / (stem + ".curvature.svg"), render_svg(curvature_plot(stem, series)));
      }
    } catch (...) {
      code = std::max(code, exit_code_for(std::current_exception()));
    }
  }
  return code;
}

// ---- fit ----

std::vector<double> numeric_column(const CsvTable& table, const std::string& name) {
  const std::size_t c = table.column(name);
  std::vector<double> out;
  out.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    if (c >= row.size() || row[c].empty()) throw SchemaError("empty value in CSV column '" + name + "'");
    out.push_back(parse_double(row[c]));
  }
  return out;
}

CsvTable load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return read_csv(in);
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  return out;
}

int cmd_fit(const std::vector<std::string>& inputs, const Settings& s) {
  if (s.out.empty() && (inputs.size() > 1 || s.formats.size() > 1)) {
    throw UsageError("several inputs or formats need --out DIR");
  }
  if (s.formats.count("csv")) throw UsageError("fit writes json and svg only");
  const std::string y_name = s.y_columns.front();
  ensure_out_dir(s);
  int code = kOk;
  for (const auto& path : inputs) {
    try {
      const CsvTable table = load_csv(path);
      const auto x = numeric_column(table, s.x_column);
      const auto y = numeric_column(table, y_name);

      json fits = json::array();
      PlotSpec plot{stem_of(path), s.x_column, y_name, {{"data", x, y, true}}};
      const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
      const auto grid = x.empty() ? std::vector<double>{} : linspace(*lo, *hi, 200);
      for (const auto& spec : s.models) {
        std::optional<FitResult> result;
        json entry;
        try {
          result = fit(spec, x, y, s.exp_options);
          entry = to_json(*result);
        } catch (const ExponentialFitError& e) {
          result = e.best();
          entry = to_json(*result);
          entry["error"] = e.what();
          code = std::max<int>(code, kDataError);
        } catch (const std::exception& e) {
          entry = {{"model", spec.model == FitModel::poly ? "poly:" + std::to_string(spec.degree)
                                                          : (spec.model == FitModel::linear ? "linear" : "exp")},
                   {"error", e.what()}};
          spdlog::error("{}: {}", path, e.what());
          code = std::max<int>(code, kDataError);
        }
        fits.push_back(std::move(entry));
        if (result) {
          PlotSeries curve{result->model_name(), grid, {}, false};
          for (double v : grid) curve.y.push_back(result->evaluate(v));
          plot.series.push_back(std::move(curve));
        }
      }
      const json doc{{"input", path}, {"x", s.x_column}, {"y", y_name}, {"n", x.size()}, {"fits", std::move(fits)}};
      if (s.out.empty()) {
        std::cout << (s.formats.count("svg") ? render_svg(plot) : doc.dump(2) + "\n");
        continue;
      }
      const std::string stem = stem_of(path);
      if (s.formats.count("json")) write_text(s.out / (stem + ".fit.json"), doc.dump(2) + "\n");
      if (s.formats.count("svg")) write_text(s.out / (stem + ".fit.svg"), render_svg(plot));
    } catch (...) {
      code = std::max(code, exit_code_for(std::current_exception()));
    }
  }
  return code;
}

// ---- gauss-bonnet ----

GaussBonnetSeries gauss_bonnet_from_csv(const std::string& path) {
  const CsvTable table = load_csv(path);
  const auto chi = numeric_column(table, "euler");
  const auto total = numeric_column(table, "sumKv");
  const auto nodes = numeric_column(table, "N0");
  if (nodes.empty()) throw DomainError("series '" + path + "' has no rows");
  return gauss_bonnet_series(chi, total, static_cast<std::size_t>(nodes.back()));
}

int cmd_gauss_bonnet(const std::vector<std::string>& inputs, const Settings& s) {
  if (s.out.empty() && (inputs.size() > 1 || s.formats.size() > 1)) {
    throw UsageError("several inputs or formats need --out DIR");
  }
  if (s.formats.count("csv")) throw UsageError("gauss-bonnet writes json and svg only");
  ensure_out_dir(s);
  int code = kOk;
  for (const auto& path : inputs) {
    try {
      GaussBonnetSeries gb;
      if (is_csv(path)) {
        gb = gauss_bonnet_from_csv(path);
      } else {
        Settings cumulative = s;
        cumulative.evolution.mode = EvolutionMode::cumulative;
        gb = gauss_bonnet_series(evolve_piece(load_piece(path, cumulative), cumulative));
      }
      json doc = to_json(gb);
      doc["input"] = path;
      PlotSpec plot{stem_of(path), "Euler characteristic", "total vertex curvature",
                    {{"steps", gb.euler, gb.total_curvature, true}}};
      if (gb.slope_defined) {
        const auto [lo, hi] = std::minmax_element(gb.euler.begin(), gb.euler.end());
        plot.series.push_back({"fit", {*lo, *hi}, {gb.intercept + gb.slope * *lo, gb.intercept + gb.slope * *hi}, false});
        spdlog::info("{}: slope {} ratio {}", path, gb.slope, gb.scaled_ratio);
      }
      if (s.out.empty()) {
        std::cout << (s.formats.count("svg") ? render_svg(plot) : doc.dump(2) + "\n");
        continue;
      }
      const std::string stem = stem_of(path);
      if (s.formats.count("json")) write_text(s.out / (stem + ".gauss_bonnet.json"), doc.dump(2) + "\n");
      if (s.formats.count("svg")) write_text(s.out / (stem + ".gauss_bonnet.svg"), render_svg(plot));
    } catch (...) {
      code = std::max(code, exit_code_for(std::current_exception()));
    }
  }
  return code;
}

// ---- plot ----

int cmd_plot(const std::vector<std::string>& inputs, const Settings& s) {
  if (s.out.empty() && inputs.size() > 1) throw UsageError("several inputs need --out DIR");
  ensure_out_dir(s);
  int code = kOk;
  for (const auto& path : inputs) {
    try {
      const CsvTable table = load_csv(path);
      PlotSpec plot{stem_of(path), s.x_column, s.y_columns.size() == 1 ? s.y_columns.front() : "", {}};
      const auto x = numeric_column(table, s.x_column);
      for (const auto& name : s.y_columns) plot.series.push_back({name, x, numeric_column(table, name), false});
      if (s.out.empty()) {
        std::cout << render_svg(plot);
      } else {
        write_text(s.out / (stem_of(path) + ".plot.svg"), render_svg(plot));
      }
    } catch (...) {
      code = std::max(code, exit_code_for(std::current_exception()));
    }
  }
  return code;
}

void configure_logging() {
  auto logger = spdlog::stderr_color_mt("simploscore");
  logger->set_pattern("%^%l%$: %v");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("SIMPLOSCORE_LOG")) {
    const auto level = spdlog::level::from_str(env);
    if (level == spdlog::level::off && std::string_view(env) != "off") {
      spdlog::warn("SIMPLOSCORE_LOG: unknown level '{}', using warn", env);
    } else {
      spdlog::set_level(level);
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  configure_logging();

  CLI::App app{"Topology and curvature of music as evolving simplicial complexes."};
  app.name("simploscore");
  app.set_config("--config", "", "TOML file with default flag values (command-line flags take precedence)");
  app.require_subcommand(1, 1);
  app.fallthrough();

  RawOptions raw;
  app.add_option("--beats-per-measure", raw.beats_per_measure, "Override the meter, e.g. 3 or 3/2");
  app.add_option("--pickup-beats", raw.pickup_beats, "Length of an anacrusis folded into measure 0")->capture_default_str();
  app.add_option("--epsilon-beats", raw.epsilon_beats, "Onset tolerance for simultaneities")->capture_default_str();
  app.add_option("--mode", raw.mode, "cumulative or sliding")->capture_default_str();
  app.add_option("--step-unit", raw.step_unit, "measure or element")->capture_default_str();
  app.add_option("--window", raw.window, "Sliding window width in step units")->capture_default_str();
  app.add_option("--stride", raw.stride, "Sliding window stride in step units")->capture_default_str();
  app.add_option("--curvature", raw.curvature, "forman_sum, forman_mean or angle_deficit")->capture_default_str();
  app.add_option("--model", raw.models, "linear, exp or poly:N (repeatable; default all three with N=4)")
      ->allow_extra_args(false);
  app.add_flag("--pin-offset", raw.pin_offset, "Fix the exponential offset C at 0");
  app.add_option("--out", raw.out, "Output directory (default: standard output)");
  app.add_option("--format", raw.format, "Comma-separated subset of csv,json,svg");
  app.add_flag("--matrices", raw.matrices, "analyze: also export boundary and Laplacian matrices as CSV");
  app.add_flag("!--no-spectral", raw.spectral, "Skip the Hodge-Laplacian eigenvalue cross-check");
  app.add_option("--x-column", raw.x_column, "fit/plot: abscissa column")->capture_default_str();
  app.add_option("--y-column", raw.y_columns, "fit/plot: ordinate column(s) (default euler_norm)")
      ->allow_extra_args(false);

  std::vector<std::string> inputs;
  auto add_command = [&](const std::string& name, const std::string& help, const std::string& what) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("inputs", inputs, what)->required()->check(CLI::ExistingFile);
    return sub;
  };
  auto* analyze = add_command("analyze", "Full-piece complex, Betti numbers, Euler characteristic and curvature",
                              "MIDI files");
  auto* evolve = add_command("evolve", "Cumulative or sliding-window series of topology and curvature", "MIDI files");
  auto* fitcmd = add_command("fit", "Fit linear, exponential and polynomial trends to a series CSV", "Series CSV files");
  auto* gb = add_command("gauss-bonnet", "Total vertex curvature against Euler characteristic",
                         "MIDI files or series CSV files");
  auto* plot = add_command("plot", "Line plot of series CSV columns as SVG", "Series CSV files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  try {
    if (analyze->parsed()) return cmd_analyze(inputs, validate(raw, "json,csv"));
    if (evolve->parsed()) return cmd_evolve(inputs, validate(raw, "csv"));
    if (fitcmd->parsed()) return cmd_fit(inputs, validate(raw, "json"));
    if (gb->parsed()) return cmd_gauss_bonnet(inputs, validate(raw, "json"));
    if (plot->parsed()) return cmd_plot(inputs, validate(raw, "svg"));
  } catch (...) {
    return exit_code_for(std::current_exception());
  }
  return kUsageError;
}
