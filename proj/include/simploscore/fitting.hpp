#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace simploscore {

enum class FitModel { linear, poly, exponential };

struct FitResult {
  FitModel model = FitModel::linear;
  int degree = 1;  // polynomial degree; 1 for linear, 0 for exponential
  // linear: {slope, intercept}; poly: {c_n, ..., c_0}; exponential: {A, alpha, C}
  std::vector<double> parameters;
  double r_squared = 0.0;
  // SS_tot == 0: R^2 is reported as 1 by convention.
  bool degenerate = false;
  bool converged = true;
  int iterations = 0;
  double ss_res = 0.0;
  double max_abs_residual = 0.0;
  double rms_residual = 0.0;

  std::string model_name() const;
  double evaluate(double x) const;
};

// Ordinary least squares in closed form. Throws DomainError if all x are equal.
FitResult fit_linear(std::span<const double> x, std::span<const double> y);

// Least squares on the Vandermonde system via Householder QR.
// Throws ComputationError when the design matrix is rank deficient.
FitResult fit_poly(std::span<const double> x, std::span<const double> y, int degree);

struct ExponentialFitOptions {
  bool pin_offset = false;  // fit y = A exp(alpha x) with C fixed at 0
  int max_iterations = 200;
  double relative_step_tolerance = 1e-10;
};

// y = A exp(alpha x) + C by damped Gauss-Newton from a log-linear seed.
// Throws ExponentialFitError (carrying the best parameters so far) on non-convergence.
FitResult fit_exponential(std::span<const double> x, std::span<const double> y,
                          const ExponentialFitOptions& options = {});

class ExponentialFitError : public std::runtime_error {
 public:
  ExponentialFitError(const std::string& what, FitResult best)
      : std::runtime_error(what), best_(std::move(best)) {}
  const FitResult& best() const { return best_; }

 private:
  FitResult best_;
};

// "linear", "exp", "poly:N"
struct ModelSpec {
  FitModel model = FitModel::linear;
  int degree = 1;
};
ModelSpec parse_model_spec(const std::string& text);

FitResult fit(const ModelSpec& spec, std::span<const double> x, std::span<const double> y,
              const ExponentialFitOptions& exp_options = {});

// {model, params[], r2, ...}
nlohmann::json to_json(const FitResult& result);

}  // namespace simploscore
