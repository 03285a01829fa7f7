#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <vector>

#include "kamsim/numerics.hpp"

using namespace kamsim;

TEST_CASE("log_sum_exp basics") {
  std::vector<double> v = {0.0, 0.0};
  CHECK(log_sum_exp(v) == doctest::Approx(std::log(2.0)).epsilon(1e-14));

  std::vector<double> big = {-10000.0, -10001.0};
  // shifted evaluation keeps the result finite for very negative inputs
  CHECK(log_sum_exp(big) == doctest::Approx(-10000.0 + std::log1p(std::exp(-1.0))).epsilon(1e-14));

  std::vector<double> one = {3.5};
  CHECK(log_sum_exp(one) == doctest::Approx(3.5));
  CHECK_THROWS_AS(log_sum_exp(std::vector<double>{}), std::invalid_argument);
}

TEST_CASE("log1p_exp and sigmoid at extremes") {
  CHECK(log1p_exp(0.0) == doctest::Approx(std::log(2.0)));
  CHECK(log1p_exp(1000.0) == doctest::Approx(1000.0));
  CHECK(log1p_exp(-1000.0) == doctest::Approx(0.0));
  CHECK(std::isfinite(log1p_exp(3199.0)));

  CHECK(sigmoid(0.0) == doctest::Approx(0.5));
  CHECK(sigmoid(800.0) == doctest::Approx(1.0));
  CHECK(sigmoid(-800.0) == doctest::Approx(0.0));
  CHECK(sigmoid(2.0) + sigmoid(-2.0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("adaptive simpson on smooth integrands") {
  auto sq = [](double x) { return x * x; };
  CHECK(adaptive_simpson(sq, 0.0, 1.0, 1e-10) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

  auto e = [](double x) { return std::exp(x); };
  CHECK(adaptive_simpson(e, 0.0, 2.0, 1e-10) ==
        doctest::Approx(std::exp(2.0) - 1.0).epsilon(1e-12));

  // sharp logistic transition, analytically integrable
  auto steep = [](double x) { return sigmoid(200.0 * (x - 0.7)); };
  double expected = (log1p_exp(200.0 * (1.0 - 0.7)) - log1p_exp(200.0 * (0.0 - 0.7))) / 200.0;
  CHECK(adaptive_simpson(steep, 0.0, 1.0, 1e-10) == doctest::Approx(expected).epsilon(1e-9));

  CHECK(adaptive_simpson(sq, 2.0, 2.0) == 0.0);
  CHECK_THROWS_AS(adaptive_simpson(sq, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("adaptive simpson depth exhaustion carries the estimate") {
  auto steep = [](double x) { return sigmoid(5000.0 * (x - 0.3)); };
  try {
    adaptive_simpson(steep, 0.0, 1.0, 1e-13, 3);
    FAIL("expected QuadratureError");
  } catch (const QuadratureError& e) {
    CHECK(std::isfinite(e.estimate()));
    CHECK(e.estimate() > 0.0);
    CHECK(e.estimate() < 1.0);
  }
}

TEST_CASE("trapezoid rule") {
  auto sq = [](double x) { return x * x; };
  CHECK(trapezoid(sq, 0.0, 1.0, 100000) == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
  CHECK_THROWS_AS(trapezoid(sq, 0.0, 1.0, 1), std::invalid_argument);
}
