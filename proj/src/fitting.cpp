#include "simploscore/fitting.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include "simploscore/errors.hpp"
#include "simploscore/kernels.hpp"

namespace simploscore {

namespace {

void check_sizes(std::span<const double> x, std::span<const double> y, std::size_t min_points) {
  if (x.size() != y.size()) throw DomainError("x and y must have the same length");
  if (x.size() < min_points) {
    throw DomainError("need at least " + std::to_string(min_points) + " points, got " + std::to_string(x.size()));
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(y[i])) throw DomainError("non-finite sample in fit input");
  }
}

double mean(std::span<const double> v) { return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size()); }

double total_sum_of_squares(std::span<const double> y) {
  // Exactly zero for constant data, whatever rounding the mean picks up.
  if (std::adjacent_find(y.begin(), y.end(), std::not_equal_to<>()) == y.end()) return 0.0;
  const double m = mean(y);
  std::vector<double> c(y.begin(), y.end());
  for (double& v : c) v -= m;
  return kernels::active().dot_f64(c.data(), c.data(), c.size());
}

// Fills the residual summary and R^2 from the fitted model.
void finish(FitResult& r, std::span<const double> x, std::span<const double> y) {
  std::vector<double> res(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) res[i] = y[i] - r.evaluate(x[i]);
  r.ss_res = kernels::active().dot_f64(res.data(), res.data(), res.size());
  r.max_abs_residual = 0.0;
  for (double v : res) r.max_abs_residual = std::max(r.max_abs_residual, std::abs(v));
  r.rms_residual = std::sqrt(r.ss_res / static_cast<double>(res.size()));
  const double ss_tot = total_sum_of_squares(y);
  if (ss_tot == 0.0) {
    r.degenerate = true;
    r.r_squared = 1.0;
  } else {
    r.r_squared = 1.0 - r.ss_res / ss_tot;
  }
}

// Solves the 3x3 system by Gaussian elimination with partial pivoting. False if singular.
bool solve3(std::array<std::array<double, 3>, 3> a, std::array<double, 3> b, std::array<double, 3>& out) {
  for (int c = 0; c < 3; ++c) {
    int piv = c;
    for (int r = c + 1; r < 3; ++r) {
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    }
    if (a[piv][c] == 0.0 || !std::isfinite(a[piv][c])) return false;
    std::swap(a[piv], a[c]);
    std::swap(b[piv], b[c]);
    for (int r = c + 1; r < 3; ++r) {
      const double f = a[r][c] / a[c][c];
      for (int j = c; j < 3; ++j) a[r][j] -= f * a[c][j];
      b[r] -= f * b[c];
    }
  }
  for (int r = 2; r >= 0; --r) {
    double s = b[r];
    for (int j = r + 1; j < 3; ++j) s -= a[r][j] * out[j];
    out[r] = s / a[r][r];
  }
  return true;
}

struct ExpState {
  double amplitude;
  double rate;
  double offset;
};

double exp_sse(const ExpState& s, std::span<const double> x, std::span<const double> y) {
  double sse = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (s.amplitude * std::exp(s.rate * x[i]) + s.offset);
    sse += r * r;
  }
  return std::isfinite(sse) ? sse : std::numeric_limits<double>::infinity();
}

struct ExpRun {
  ExpState state;
  double sse;
  bool converged;
  int iterations;
};

// Levenberg-Marquardt damped Gauss-Newton on (A, alpha[, C]).
ExpRun refine_exponential(ExpState s, std::span<const double> x, std::span<const double> y,
                          const ExponentialFitOptions& opt) {
  const int np = opt.pin_offset ? 2 : 3;
  double sse = exp_sse(s, x, y);
  double lambda = 1e-3;
  const double ss_floor = 1e-30 * std::max(total_sum_of_squares(y), 1e-300);
  for (int it = 1; it <= opt.max_iterations; ++it) {
    if (sse <= ss_floor) return {s, sse, true, it - 1};
    std::array<std::array<double, 3>, 3> jtj{};
    std::array<double, 3> jtr{};
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double e = std::exp(s.rate * x[i]);
      const std::array<double, 3> g = {e, s.amplitude * x[i] * e, 1.0};
      const double r = y[i] - (s.amplitude * e + s.offset);
      for (int a = 0; a < np; ++a) {
        jtr[a] += g[a] * r;
        for (int b = 0; b < np; ++b) jtj[a][b] += g[a] * g[b];
      }
    }
    if (np == 2) {
      jtj[2][2] = 1.0;
      jtr[2] = 0.0;
    }
    while (true) {
      auto damped = jtj;
      for (int a = 0; a < np; ++a) damped[a][a] += lambda * std::max(jtj[a][a], 1e-300);
      std::array<double, 3> delta{};
      if (!solve3(damped, jtr, delta)) {
        lambda *= 10.0;
        if (lambda > 1e20) return {s, sse, true, it};
        continue;
      }
      const ExpState trial{s.amplitude + delta[0], s.rate + delta[1], s.offset + (np == 3 ? delta[2] : 0.0)};
      const double trial_sse = exp_sse(trial, x, y);
      if (trial_sse <= sse) {
        const double step = std::sqrt(delta[0] * delta[0] + delta[1] * delta[1] + delta[2] * delta[2]);
        const double size = std::sqrt(trial.amplitude * trial.amplitude + trial.rate * trial.rate +
                                      trial.offset * trial.offset);
        s = trial;
        sse = trial_sse;
        lambda = std::max(lambda / 10.0, 1e-15);
        if (step <= opt.relative_step_tolerance * (size + opt.relative_step_tolerance)) return {s, sse, true, it};
        break;
      }
      lambda *= 10.0;
      // No damping level descends: the current point is a minimum to machine precision.
      if (lambda > 1e20) return {s, sse, true, it};
    }
  }
  return {s, sse, false, opt.max_iterations};
}

// Seeds (A, alpha) by regressing log|y - C| on x.
bool log_linear_seed(std::span<const double> x, std::span<const double> y, double offset, double sign,
                     ExpState& out) {
  std::vector<double> z(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double v = sign * (y[i] - offset);
    if (!(v > 0.0)) return false;
    z[i] = std::log(v);
  }
  try {
    const FitResult lin = fit_linear(x, z);
    out = {sign * std::exp(lin.parameters[1]), lin.parameters[0], offset};
    return std::isfinite(out.amplitude) && std::isfinite(out.rate);
  } catch (const DomainError&) {
    return false;
  }
}

}  // namespace

std::string FitResult::model_name() const {
  switch (model) {
    case FitModel::linear:
      return "linear";
    case FitModel::poly:
      return "poly:" + std::to_string(degree);
    case FitModel::exponential:
      return "exp";
  }
  return "unknown";
}

double FitResult::evaluate(double x) const {
  switch (model) {
    case FitModel::linear:
      return parameters[0] * x + parameters[1];
    case FitModel::poly: {
      double acc = 0.0;
      for (double c : parameters) acc = acc * x + c;
      return acc;
    }
    case FitModel::exponential:
      return parameters[0] * std::exp(parameters[1] * x) + parameters[2];
  }
  return 0.0;
}

FitResult fit_linear(std::span<const double> x, std::span<const double> y) {
  check_sizes(x, y, 2);
  const double mx = mean(x);
  const double my = mean(y);
  std::vector<double> cx(x.begin(), x.end());
  std::vector<double> cy(y.begin(), y.end());
  for (double& v : cx) v -= mx;
  for (double& v : cy) v -= my;
  const auto& k = kernels::active();
  const double sxx = k.dot_f64(cx.data(), cx.data(), cx.size());
  if (sxx == 0.0) throw DomainError("linear fit needs at least two distinct x values");
  const double slope = k.dot_f64(cx.data(), cy.data(), cx.size()) / sxx;
  FitResult r;
  r.model = FitModel::linear;
  r.degree = 1;
  r.parameters = {slope, my - slope * mx};
  finish(r, x, y);
  return r;
}

FitResult fit_poly(std::span<const double> x, std::span<const double> y, int degree) {
  if (degree < 0) throw DomainError("polynomial degree must be nonnegative");
  const auto cols = static_cast<std::size_t>(degree) + 1;
  check_sizes(x, y, 1);
  if (x.size() < cols) {
    throw ComputationError("rank-deficient design matrix: degree " + std::to_string(degree) + " needs " +
                           std::to_string(cols) + " points, got " + std::to_string(x.size()));
  }
  const std::size_t m = x.size();
  const auto& k = kernels::active();

  // Column-major Vandermonde, column j holds x^(degree - j); each column scaled to unit norm.
  std::vector<double> a(m * cols);
  std::vector<double> scale(cols);
  for (std::size_t j = 0; j < cols; ++j) {
    const int power = degree - static_cast<int>(j);
    double* col = a.data() + j * m;
    for (std::size_t i = 0; i < m; ++i) col[i] = std::pow(x[i], power);
    const double norm = std::sqrt(k.dot_f64(col, col, m));
    if (norm == 0.0) throw ComputationError("polynomial design matrix is rank deficient");
    scale[j] = norm;
    for (std::size_t i = 0; i < m; ++i) col[i] /= norm;
  }
  std::vector<double> b(y.begin(), y.end());

  // Householder QR, applying each reflector to the trailing columns and to b.
  std::vector<double> diag(cols);
  std::vector<double> v(m);
  for (std::size_t j = 0; j < cols; ++j) {
    double* col = a.data() + j * m;
    const std::size_t len = m - j;
    const double norm = std::sqrt(k.dot_f64(col + j, col + j, len));
    if (norm <= 1e-10) throw ComputationError("polynomial design matrix is rank deficient");
    const double alpha = col[j] > 0 ? -norm : norm;
    std::copy(col + j, col + m, v.begin());
    v[0] -= alpha;
    const double vnorm2 = k.dot_f64(v.data(), v.data(), len);
    diag[j] = alpha;
    if (vnorm2 == 0.0) continue;
    for (std::size_t c = j + 1; c < cols; ++c) {
      double* other = a.data() + c * m + j;
      k.axpy_f64(-2.0 * k.dot_f64(v.data(), other, len) / vnorm2, v.data(), other, len);
    }
    k.axpy_f64(-2.0 * k.dot_f64(v.data(), b.data() + j, len) / vnorm2, v.data(), b.data() + j, len);
  }

  std::vector<double> coef(cols);
  for (std::size_t jj = cols; jj-- > 0;) {
    double s = b[jj];
    for (std::size_t c = jj + 1; c < cols; ++c) s -= a[c * m + jj] * coef[c];
    coef[jj] = s / diag[jj];
  }
  for (std::size_t j = 0; j < cols; ++j) coef[j] /= scale[j];

  FitResult r;
  r.model = FitModel::poly;
  r.degree = degree;
  r.parameters = std::move(coef);
  finish(r, x, y);
  return r;
}

FitResult fit_exponential(std::span<const double> x, std::span<const double> y, const ExponentialFitOptions& options) {
  check_sizes(x, y, 3);
  FitResult r;
  r.model = FitModel::exponential;
  r.degree = 0;

  const auto [ymin_it, ymax_it] = std::minmax_element(y.begin(), y.end());
  const double ymin = *ymin_it;
  const double ymax = *ymax_it;
  if (ymax == ymin) {
    r.parameters = options.pin_offset ? std::vector<double>{ymin, 0.0, 0.0} : std::vector<double>{0.0, 0.0, ymin};
    finish(r, x, y);
    return r;
  }

  // Try decay toward a floor (A > 0) and toward a ceiling (A < 0); keep the better fit.
  std::vector<ExpState> seeds;
  const double margin = 1e-3 * (ymax - ymin);
  ExpState seed{};
  if (options.pin_offset) {
    if (log_linear_seed(x, y, 0.0, 1.0, seed)) seeds.push_back(seed);
    if (log_linear_seed(x, y, 0.0, -1.0, seed)) seeds.push_back(seed);
  } else {
    if (log_linear_seed(x, y, ymin - margin, 1.0, seed)) seeds.push_back(seed);
    if (log_linear_seed(x, y, ymax + margin, -1.0, seed)) seeds.push_back(seed);
  }
  if (seeds.empty()) {
    // Mixed-sign data with a pinned offset: start from a flat curve.
    seeds.push_back({mean(y), 0.0, 0.0});
  }

  ExpRun best{{}, std::numeric_limits<double>::infinity(), false, 0};
  for (const auto& s : seeds) {
    ExpRun run = refine_exponential(s, x, y, options);
    if (run.sse < best.sse || (run.sse == best.sse && run.converged && !best.converged)) best = run;
  }
  r.parameters = {best.state.amplitude, best.state.rate, best.state.offset};
  r.converged = best.converged;
  r.iterations = best.iterations;
  finish(r, x, y);
  if (!best.converged) {
    throw ExponentialFitError("exponential fit did not converge in " + std::to_string(options.max_iterations) +
                                  " iterations",
                              r);
  }
  return r;
}

ModelSpec parse_model_spec(const std::string& text) {
  if (text == "linear") return {FitModel::linear, 1};
  if (text == "exp" || text == "exponential") return {FitModel::exponential, 0};
  if (text.rfind("poly:", 0) == 0) {
    const std::string digits = text.substr(5);
    if (!digits.empty() && digits.size() <= 2 && std::all_of(digits.begin(), digits.end(), ::isdigit) &&
        std::stoi(digits) >= 1) {
      return {FitModel::poly, std::stoi(digits)};
    }
  }
  throw DomainError("unknown model '" + text + "' (expected linear, exp, or poly:N)");
}

FitResult fit(const ModelSpec& spec, std::span<const double> x, std::span<const double> y,
              const ExponentialFitOptions& exp_options) {
  switch (spec.model) {
    case FitModel::linear:
      return fit_linear(x, y);
    case FitModel::poly:
      return fit_poly(x, y, spec.degree);
    case FitModel::exponential:
      return fit_exponential(x, y, exp_options);
  }
  throw DomainError("unknown fit model");
}

nlohmann::json to_json(const FitResult& result) {
  nlohmann::json j{{"model", result.model_name()},
                   {"params", result.parameters},
                   {"r2", result.r_squared},
                   {"degenerate", result.degenerate},
                   {"residuals", {{"ss_res", result.ss_res},
                                  {"max_abs", result.max_abs_residual},
                                  {"rms", result.rms_residual}}}};
  if (result.model == FitModel::exponential) {
    j["converged"] = result.converged;
    j["iterations"] = result.iterations;
  }
  return j;
}

}  // namespace simploscore
