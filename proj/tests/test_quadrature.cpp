#include <doctest.h>

#include <cmath>
#include <cstring>

#include "tqt/quadrature.hpp"

using namespace tqt;

TEST_CASE("Gauss–Legendre rules on [0,1]") {
  for (int order : {8, 16}) {
    const auto& r = gauss_rule(order);
    REQUIRE(r.nodes.size() == static_cast<std::size_t>(order));
    double w = 0.0, m = 0.0;
    for (std::size_t i = 0; i < r.nodes.size(); ++i) {
      w += r.weights[i];
      m += r.weights[i] * std::pow(r.nodes[i], 2 * order - 1);
      if (i > 0) CHECK(r.nodes[i] > r.nodes[i - 1]);
    }
    CHECK(w == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(m == doctest::Approx(1.0 / (2 * order)).epsilon(1e-13));
  }
  CHECK_THROWS(gauss_rule(5));
}

TEST_CASE("integrate_cube: polynomials and smooth functions") {
  QuadratureSpec spec;
  const auto poly = integrate_cube(
      [](std::span<const double> x) { return std::vector<Complex>{x[0] * x[0] * x[1], Complex(0, 1) * x[1]}; }, 2, 2,
      spec);
  CHECK(std::abs(poly.value[0] - 1.0 / 6.0) < 1e-15);
  CHECK(std::abs(poly.value[1] - Complex(0, 0.5)) < 1e-15);
  CHECK(poly.cells == 1);

  const auto e = integrate_cube(
      [](std::span<const double> x) { return std::vector<Complex>{std::exp(-x[0] - 2.0 * x[1] - 3.0 * x[2])}; }, 3, 1,
      spec);
  const double exact = (1 - std::exp(-1.0)) * (1 - std::exp(-2.0)) / 2.0 * (1 - std::exp(-3.0)) / 3.0;
  CHECK(std::abs(e.value[0] - exact) < 1e-12);

  // a kink forces refinement
  const auto k = integrate_cube([](std::span<const double> x) { return std::vector<Complex>{std::abs(x[0] - 0.3)}; }, 1,
                                1, spec);
  CHECK(std::abs(k.value[0] - (0.3 * 0.3 + 0.7 * 0.7) / 2.0) < 1e-9);
  CHECK(k.cells > 1);
}

TEST_CASE("integrate_cube: the dimension must be positive") {
  CHECK_THROWS(integrate_cube([](std::span<const double>) { return std::vector<Complex>{1.0}; }, 0, 1, QuadratureSpec{}));
}

TEST_CASE("integrate_cube: serial and parallel results are bitwise identical") {
  auto f = [](std::span<const double> x) {
    return std::vector<Complex>{std::sqrt(x[0] + 1e-3) * std::cos(7 * x[1]), std::exp(-20 * (x[0] - x[1]) * (x[0] - x[1]))};
  };
  QuadratureSpec ser, par;
  ser.parallel = false;
  par.parallel = true;
  ser.tolerance = par.tolerance = 1e-11;
  const auto a = integrate_cube(f, 2, 2, ser);
  const auto b = integrate_cube(f, 2, 2, par);
  REQUIRE(a.value.size() == b.value.size());
  CHECK(std::memcmp(a.value.data(), b.value.data(), a.value.size() * sizeof(Complex)) == 0);
  CHECK(std::memcmp(&a.error, &b.error, sizeof(double)) == 0);
  CHECK(a.evaluations == b.evaluations);
  CHECK(a.cells == b.cells);
}

TEST_CASE("integrate_cube: budget exhaustion carries the best estimate") {
  QuadratureSpec spec;
  spec.budget = 2000;
  spec.tolerance = 1e-14;
  try {
    (void)integrate_cube([](std::span<const double> x) { return std::vector<Complex>{1.0 / std::sqrt(x[0] + 1e-12)}; },
                         1, 1, spec);
    FAIL("expected QuadratureError");
  } catch (const QuadratureError& e) {
    CHECK(e.best().evaluations <= 2000);
    CHECK(std::abs(e.best().value[0] - 2.0) < 0.1);
    CHECK(e.best().error > 0.0);
  }
}
