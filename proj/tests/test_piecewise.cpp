#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ncgauss/farey.hpp"
#include "ncgauss/piecewise_affine.hpp"
#include "ncgauss/rng.hpp"
#include "oracles.hpp"

using namespace ncgauss;

namespace {
constexpr double kLn2 = 0.6931471805599453094172321214581766;
}

TEST_CASE("construction validation") {
  CHECK_THROWS_AS(PiecewiseAffineFn({Fraction(0, 1)}, {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(PiecewiseAffineFn({Fraction(1, 2), Fraction(1, 2)}, {1.0, 1.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(PiecewiseAffineFn({Fraction(0, 1), Fraction(1, 1)}, {1.0}),
                  std::invalid_argument);
}

TEST_CASE("closed-form Gauss integrals") {
  CHECK(PiecewiseAffineFn::constant(1.0).integral_mu() == doctest::Approx(1.0).epsilon(1e-15));
  const PiecewiseAffineFn id({Fraction(0, 1), Fraction(1, 1)}, {0.0, 1.0});
  CHECK(id.integral_mu() == doctest::Approx(1.0 / kLn2 - 1.0).epsilon(1e-15));
  CHECK(gauss_measure(0.0, 0.5) == doctest::Approx(0.5849625007211562).epsilon(1e-15));
  CHECK(gauss_measure(0.0, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("integral matches adaptive Simpson on random tents") {
  Rng rng(31);
  const FareyLevel lvl = farey_level(4);
  for (int t = 0; t < 20; ++t) {
    std::vector<double> vals;
    for (std::size_t i = 0; i < lvl.nodes.size(); ++i)
      vals.push_back(rng.uniform(-1.0, 1.0));
    const PiecewiseAffineFn f(lvl.nodes, vals);
    const double direct = f.integral_mu();
    const double quad = oracle::simpson_mu([&](double x) { return f(x); }, 0.0, 1.0);
    REQUIRE(direct == doctest::Approx(quad).epsilon(1e-10));
    // clipped integral sums to the whole
    const double left = f.integral_mu(0.0, 0.37);
    const double right = f.integral_mu(0.37, 1.0);
    REQUIRE(left + right == doctest::Approx(direct).epsilon(1e-12));
  }
}

TEST_CASE("nonnegative functions have nonnegative mass; combine is linear") {
  Rng rng(47);
  const FareyLevel lvl = farey_level(3);
  for (int t = 0; t < 50; ++t) {
    std::vector<double> va, vb;
    for (std::size_t i = 0; i < lvl.nodes.size(); ++i) {
      va.push_back(rng.uniform(0.0, 3.0));
      vb.push_back(rng.uniform(-1.0, 1.0));
    }
    const PiecewiseAffineFn f(lvl.nodes, va), g(lvl.nodes, vb);
    REQUIRE(f.integral_mu() >= 0.0);
    const double a = rng.uniform(-2.0, 2.0), b = rng.uniform(-2.0, 2.0);
    REQUIRE(PiecewiseAffineFn::combine(a, f, b, g).integral_mu() ==
            doctest::Approx(a * f.integral_mu() + b * g.integral_mu()).epsilon(1e-12));
  }
}

TEST_CASE("evaluation: exact at breakpoints, affine between") {
  const FareyLevel lvl = farey_level(3);
  std::vector<double> vals;
  for (std::size_t i = 0; i < lvl.nodes.size(); ++i)
    vals.push_back(static_cast<double>(i % 3));
  const PiecewiseAffineFn f(lvl.nodes, vals);
  for (std::size_t i = 0; i < lvl.nodes.size(); ++i)
    CHECK(f(lvl.nodes[i]) == vals[i]);
  // midpoint of [1/4, 1/3] in exact arithmetic is 7/24
  const double mid = f(Fraction(7, 24));
  CHECK(mid == doctest::Approx(0.5 * (f(Fraction(1, 4)) + f(Fraction(1, 3))))
                   .epsilon(1e-14));
}

TEST_CASE("tents") {
  const PiecewiseAffineFn b11 = hat_function(1, 1);
  CHECK(b11(Fraction(1, 2)) == 1.0);
  CHECK(b11(Fraction(0, 1)) == 0.0);
  CHECK(b11(Fraction(1, 1)) == 0.0);
  CHECK(b11(Fraction(1, 3)) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK_THROWS_AS(hat_function(2, 0), std::invalid_argument);
  CHECK_THROWS_AS(hat_function(2, 4), std::invalid_argument);

  // Against the three-piece closed form, on a scan of points.
  for (int n = 1; n <= 5; ++n) {
    const FareyLevel lvl = farey_level(n);
    for (std::int64_t k = 1; k < static_cast<std::int64_t>(lvl.nodes.size()) - 1; ++k) {
      const PiecewiseAffineFn tent = hat_function(n, k);
      const Fraction &c = lvl.nodes[k], &l = lvl.nodes[k - 1], &r = lvl.nodes[k + 1];
      for (int i = 0; i <= 200; ++i) {
        const double theta = i / 200.0;
        const double want = oracle::tent_closed_form(c.num(), c.den(), l.num(),
                                                     l.den(), r.num(), r.den(), theta);
        REQUIRE(tent(theta) == doctest::Approx(want).epsilon(1e-11));
      }
    }
  }
}
