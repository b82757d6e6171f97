#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include <Eigen/Dense>

#include "ncgauss/quadrature.hpp"
#include "ncgauss/rng.hpp"
#include "ncgauss/transfer.hpp"
#include "oracles.hpp"

using namespace ncgauss;

namespace {
constexpr double kLn2 = 0.6931471805599453094172321214581766;
}

TEST_CASE("gauss-legendre rules integrate polynomials exactly") {
  for (int n : {4, 8, 16, 32}) {
    const GaussLegendre& gl = gauss_legendre(n);
    double wsum = 0.0;
    for (double w : gl.weights) wsum += w;
    REQUIRE(wsum == doctest::Approx(2.0).epsilon(1e-14));
    for (int deg = 1; deg < 2 * n; deg += 2) {
      double odd = 0.0;
      for (std::size_t i = 0; i < gl.nodes.size(); ++i)
        odd += gl.weights[i] * std::pow(gl.nodes[i], deg);
      REQUIRE(std::abs(odd) <= 1e-14);
    }
    double quad = 0.0;
    const int deg = 2 * n - 2;
    for (std::size_t i = 0; i < gl.nodes.size(); ++i)
      quad += gl.weights[i] * std::pow(gl.nodes[i], deg);
    REQUIRE(quad == doctest::Approx(2.0 / (deg + 1)).epsilon(1e-12));
  }
}

TEST_CASE("integrate_mu against adaptive Simpson") {
  const QuadratureSpec spec{6, 24};
  auto f = [](double t) { return std::exp(t) * std::cos(3.0 * t); };
  const double a = integrate_mu(f, spec);
  const double b = oracle::simpson_mu(f, 0.0, 1.0);
  CHECK(a == doctest::Approx(b).epsilon(1e-11));
}

TEST_CASE("branch weights telescope") {
  Rng rng(3);
  for (int t = 0; t < 100; ++t) {
    const double theta = rng.uniform();
    const int S = 1 + static_cast<int>(rng.integer(200));
    double sum = 0.0;
    for (int s = 1; s <= S; ++s) {
      const double w = branch_weight(s, theta);
      REQUIRE(w > 0.0);
      REQUIRE(w < 1.0);
      sum += w;
    }
    REQUIRE(sum == doctest::Approx(1.0 - branch_weight_tail(S, theta)).epsilon(1e-13));
  }
  CHECK_THROWS_AS(branch_weight(0, 0.5), std::invalid_argument);
}

TEST_CASE("apply_transfer") {
  auto onef = [](double) { return 1.0; };
  for (double theta : {0.0, 0.31, 0.99}) {
    const auto r = apply_transfer(onef, theta, 10000);
    REQUIRE(std::abs((1.0 - r.value) - branch_weight_tail(10000, theta)) <= 1e-13);
    const auto rn = apply_transfer(onef, theta, 100, 1.0, TailMode::renormalized);
    REQUIRE(rn.value == doctest::Approx(1.0).epsilon(1e-14));
    const auto rc = apply_transfer(onef, theta, 100, 1.0, TailMode::completed);
    REQUIRE(rc.value == doctest::Approx(1.0).epsilon(1e-14));
  }
  const auto single = apply_transfer([](double u) { return u; }, 0.0, 1);
  CHECK(single.value == doctest::Approx(0.5));
  CHECK_THROWS_AS(apply_transfer(onef, 0.5, 0), std::invalid_argument);

  // positivity
  Rng rng(5);
  for (int t = 0; t < 30; ++t) {
    const double theta = rng.uniform();
    const auto r = apply_transfer([](double u) { return 0.2 + u * u; }, theta, 50);
    REQUIRE(r.value >= 0.0);
  }
}

TEST_CASE("composition operator") {
  CHECK(apply_composition([](double) { return 1.0; }, 0.7) == 1.0);
  CHECK(apply_composition([](double u) { return u; }, 0.4) ==
        doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("invariance of Gauss measure") {
  const QuadratureSpec spec{8, 32};
  const CheckResult one = invariance_check([](double) { return 1.0; }, "one", 20000,
                                           spec, 1e-8);
  CHECK(one.passed());
  CHECK(one.lhs == doctest::Approx(1.0).epsilon(1e-12));

  const CheckResult lin = invariance_check([](double t) { return t; }, "id", 100000,
                                           spec, 1e-8);
  CHECK(lin.passed());
  CHECK(lin.lhs == doctest::Approx(1.0 / kLn2 - 1.0).epsilon(1e-12));

  // independent oracle for the right side at f(t) = t^2: adaptive Simpson of
  // the completed series
  auto f = [](double t) { return t * t; };
  const int S = 20000;
  const double rhs_oracle = oracle::simpson_mu(
      [&](double t) {
        return apply_transfer(f, t, S, 1.0, TailMode::completed).value;
      },
      0.0, 1.0, 1e-11);
  const CheckResult sq = invariance_check(f, "square", S, spec, 1e-8);
  CHECK(sq.passed());
  CHECK(sq.rhs == doctest::Approx(rhs_oracle).epsilon(1e-9));
}

TEST_CASE("composition isometry") {
  const QuadratureSpec spec{8, 32};
  for (int deg = 0; deg <= 6; ++deg) {
    const CheckResult c = composition_isometry_check(
        [deg](double u) { return std::pow(u, deg); }, "monomial", 60, spec, 1e-8);
    REQUIRE(c.passed());
  }
}

TEST_CASE("conjugation identity, weak form") {
  const QuadratureSpec spec{8, 32};
  // f = 1 reduces to invariance of g h
  const CheckResult trivial = conjugation_check(
      [](double) { return 1.0; }, [](double u) { return u; },
      [](double u) { return 1.0 - u; }, "one,id,1-id", 30000, spec, 1e-7);
  CHECK(trivial.passed());
  const double gh = integrate_mu([](double u) { return u * (1.0 - u); }, spec);
  CHECK(trivial.rhs == doctest::Approx(gh).epsilon(1e-9));

  Rng rng(7);
  for (int t = 0; t < 2; ++t) {
    std::vector<double> cf, cg, ch;
    for (int i = 0; i < 4; ++i) {
      cf.push_back(rng.uniform(-1, 1));
      cg.push_back(rng.uniform(-1, 1));
      ch.push_back(rng.uniform(-1, 1));
    }
    auto peval = [](const std::vector<double>& c, double u) {
      double v = 0.0;
      for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * u + *it;
      return v;
    };
    const CheckResult c = conjugation_check(
        [&](double u) { return peval(cf, u); }, [&](double u) { return peval(cg, u); },
        [&](double u) { return peval(ch, u); }, "random", 30000, spec, 1e-7);
    REQUIRE(c.passed());
  }
}

TEST_CASE("collocation eigenvalues against a dense solve") {
  // power iteration vs Eigen's dense eigensolver on a small grid
  const GkwResult small = gkw_estimate(200);
  CHECK(small.lambda1 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(small.lambda1_residual <= 1e-12);

  const int n = 201;
  const double h = 1.0 / 200.0;
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(n, n);
  const int cut = 50 * 200;
  for (int i = 0; i < n; ++i) {
    const double t = i * h;
    for (int s = 1; s <= cut; ++s) {
      const double y = 1.0 / (t + s);
      const double w = branch_weight(s, t);
      const double pos = y / h;
      const int cell = std::min(static_cast<int>(pos), 199);
      const double frac = pos - cell;
      T(i, cell) += w * (1.0 - frac);
      T(i, cell + 1) += w * frac;
    }
    T(i, 0) += branch_weight_tail(cut, t);
  }
  Eigen::EigenSolver<Eigen::MatrixXd> es(T);
  double second = 0.0;
  for (int i = 0; i < n; ++i) {
    const double m = std::abs(es.eigenvalues()(i));
    if (std::abs(m - 1.0) < 1e-9) continue;
    second = std::max(second, m);
  }
  CHECK(small.lambda2 == doctest::Approx(second).epsilon(1e-8));
  CHECK(small.lambda2 == doctest::Approx(0.30366).epsilon(2e-3));
  CHECK_THROWS_AS(gkw_estimate(10), std::invalid_argument);
}
