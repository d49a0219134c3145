#include <doctest.h>

#include <cmath>
#include <random>

#include "simploscore/errors.hpp"
#include "simploscore/fitting.hpp"

using namespace simploscore;

namespace {

std::vector<double> grid(std::size_t n, double lo = 0.0, double hi = 1.0) {
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  return x;
}

template <class F>
std::vector<double> sample(const std::vector<double>& x, F f) {
  std::vector<double> y;
  for (double v : x) y.push_back(f(v));
  return y;
}

bool close_rel(double got, double want, double tol) { return std::abs(got - want) <= tol * std::max(std::abs(want), 1.0); }

}  // namespace

TEST_CASE("linear fits") {
  const auto x = grid(33);
  SUBCASE("negative slope with intercept") {
    const auto r = fit_linear(x, sample(x, [](double t) { return -1.05 * t + 0.96; }));
    CHECK(r.parameters[0] == doctest::Approx(-1.05).epsilon(1e-12));
    CHECK(r.parameters[1] == doctest::Approx(0.96).epsilon(1e-12));
    CHECK(r.r_squared == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("identity") {
    const auto r = fit_linear(x, x);
    CHECK(r.parameters[0] == doctest::Approx(1.0));
    CHECK(std::abs(r.parameters[1]) < 1e-14);
  }
  SUBCASE("constant y") {
    const auto r = fit_linear(x, std::vector<double>(x.size(), 0.7));
    CHECK(r.parameters[0] == 0.0);
    CHECK(r.r_squared == 1.0);
    CHECK(r.degenerate);
  }
  SUBCASE("constant x") {
    const std::vector<double> same(5, 2.0);
    CHECK_THROWS_AS(fit_linear(same, x), DomainError);
  }
}

TEST_CASE("polynomial fits") {
  const auto x = grid(41);
  SUBCASE("quartic coefficients are recovered") {
    const std::vector<double> c = {-12.87, 22.68, -10.56, -0.36, 1.02};
    const auto y = sample(x, [&](double t) { return (((c[0] * t + c[1]) * t + c[2]) * t + c[3]) * t + c[4]; });
    const auto r = fit_poly(x, y, 4);
    REQUIRE(r.parameters.size() == 5);
    for (std::size_t i = 0; i < 5; ++i) CHECK(close_rel(r.parameters[i], c[i], 1e-6));
    CHECK(r.r_squared >= 0.9999);
  }
  SUBCASE("degree one agrees with the linear fit") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> noise(0.0, 0.1);
    const auto y = sample(x, [&](double t) { return 0.4 - 2.0 * t + noise(rng); });
    const auto p = fit_poly(x, y, 1);
    const auto l = fit_linear(x, y);
    CHECK(std::abs(p.parameters[0] - l.parameters[0]) < 1e-12);
    CHECK(std::abs(p.parameters[1] - l.parameters[1]) < 1e-12);
    CHECK(std::abs(p.r_squared - l.r_squared) < 1e-12);
  }
  SUBCASE("cubic data fitted with a quartic") {
    const auto y = sample(x, [](double t) { return 2.0 * t * t * t - t * t + 0.5 * t - 3.0; });
    const auto r = fit_poly(x, y, 4);
    CHECK(std::abs(r.parameters[0]) < 1e-8);
    CHECK(close_rel(r.parameters[1], 2.0, 1e-6));
  }
  SUBCASE("too few points") {
    const std::vector<double> xs = {0.0, 0.5, 1.0};
    CHECK_THROWS_AS(fit_poly(xs, xs, 3), ComputationError);
  }
  SUBCASE("repeated abscissae") {
    const std::vector<double> xs = {1.0, 1.0, 1.0, 2.0, 2.0};
    const std::vector<double> ys = {1.0, 2.0, 3.0, 4.0, 5.0};
    CHECK_THROWS_AS(fit_poly(xs, ys, 2), ComputationError);
  }
}

TEST_CASE("exponential fits") {
  const auto x = grid(50);
  SUBCASE("pure decays") {
    for (double alpha : {-2.44, -6.24}) {
      const auto r = fit_exponential(x, sample(x, [&](double t) { return std::exp(alpha * t); }));
      CHECK(close_rel(r.parameters[1], alpha, 1e-6));
      CHECK(close_rel(r.parameters[0], 1.0, 1e-6));
      CHECK(std::abs(r.parameters[2]) < 1e-6);
      CHECK(r.r_squared == doctest::Approx(1.0).epsilon(1e-10));
      CHECK(r.converged);
    }
  }
  SUBCASE("offset pinned") {
    ExponentialFitOptions opts;
    opts.pin_offset = true;
    const auto r = fit_exponential(x, sample(x, [](double t) { return 1.3 * std::exp(-2.44 * t); }), opts);
    CHECK(close_rel(r.parameters[1], -2.44, 1e-6));
    CHECK(r.parameters[2] == 0.0);
  }
  SUBCASE("decay toward a nonzero floor") {
    const auto r = fit_exponential(x, sample(x, [](double t) { return 0.8 * std::exp(-4.0 * t) + 0.25; }));
    CHECK(close_rel(r.parameters[0], 0.8, 1e-6));
    CHECK(close_rel(r.parameters[1], -4.0, 1e-6));
    CHECK(close_rel(r.parameters[2], 0.25, 1e-6));
  }
  SUBCASE("negative amplitude growth") {
    const auto r = fit_exponential(x, sample(x, [](double t) { return -0.5 * std::exp(1.7 * t) + 2.0; }));
    CHECK(close_rel(r.parameters[0], -0.5, 1e-6));
    CHECK(close_rel(r.parameters[1], 1.7, 1e-6));
    CHECK(close_rel(r.parameters[2], 2.0, 1e-6));
  }
  SUBCASE("constant y") {
    const auto r = fit_exponential(x, std::vector<double>(x.size(), 0.4));
    CHECK(r.degenerate);
    CHECK((r.parameters[0] == 0.0 || r.parameters[1] == 0.0));
    CHECK(r.evaluate(0.3) == doctest::Approx(0.4));
  }
}

TEST_CASE("R squared is invariant under affine rescaling of x") {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> noise(0.0, 0.05);
  const auto x = grid(30);
  const auto y = sample(x, [&](double t) { return std::exp(-3.0 * t) + noise(rng); });
  std::vector<double> x2;
  for (double v : x) x2.push_back(7.5 * v - 2.0);
  CHECK(fit_linear(x, y).r_squared == doctest::Approx(fit_linear(x2, y).r_squared).epsilon(1e-12));
  CHECK(fit_poly(x, y, 3).r_squared == doctest::Approx(fit_poly(x2, y, 3).r_squared).epsilon(1e-9));
  CHECK(fit_exponential(x, y).r_squared == doctest::Approx(fit_exponential(x2, y).r_squared).epsilon(1e-8));
}

TEST_CASE("R squared definition") {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> noise(0.0, 0.2);
  const auto x = grid(25);
  const auto y = sample(x, [&](double t) { return t * t + noise(rng); });
  const auto r = fit_poly(x, y, 2);
  double mean = 0.0;
  for (double v : y) mean += v;
  mean /= static_cast<double>(y.size());
  double ss_res = 0.0, ss_tot = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    ss_res += std::pow(y[i] - r.evaluate(x[i]), 2);
    ss_tot += std::pow(y[i] - mean, 2);
  }
  CHECK(r.r_squared == doctest::Approx(1.0 - ss_res / ss_tot).epsilon(1e-12));
  CHECK(r.parameters.size() == static_cast<std::size_t>(r.degree + 1));
}

TEST_CASE("model specs") {
  CHECK(parse_model_spec("linear").model == FitModel::linear);
  CHECK(parse_model_spec("exp").model == FitModel::exponential);
  const auto p = parse_model_spec("poly:4");
  CHECK(p.model == FitModel::poly);
  CHECK(p.degree == 4);
  CHECK_THROWS_AS(parse_model_spec("poly:0"), DomainError);
  CHECK_THROWS_AS(parse_model_spec("poly:x"), DomainError);
  CHECK_THROWS_AS(parse_model_spec("cubic"), DomainError);
  const auto x = grid(10);
  const auto j = to_json(fit(parse_model_spec("linear"), x, x));
  CHECK(j["model"] == "linear");
  CHECK(j["params"].size() == 2);
  CHECK(j["r2"] == doctest::Approx(1.0));
}
