#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "ncgauss/branch_maps.hpp"
#include "ncgauss/farey.hpp"
#include "ncgauss/rng.hpp"
#include "ncgauss/states.hpp"
#include "oracles.hpp"

using namespace ncgauss;

namespace {
constexpr double kLn2 = 0.6931471805599453094172321214581766;
DiagramPtr main_diagram() { return FareyDiagram::shared_farey(12); }
const QuadratureSpec kSpec{8, 32};
}  // namespace

TEST_CASE("point states") {
  DiagramPtr d = main_diagram();
  Rng rng(111);
  const AfElement one = AfElement::identity(d, 3);
  CHECK(std::abs(tau_point(0.37, one) - std::complex<double>(1.0)) == 0.0);
  CHECK(std::abs(phi_point(0.37, one) - std::complex<double>(1.0)) <= 1e-14);
  CHECK(std::abs(phi_point(0.0, one) - std::complex<double>(1.0)) == 0.0);

  // at node labels tau is the path-block trace
  const AfElement x = random_element(d, 3, rng);
  for (const Fraction& u : d->labels(3)) {
    const NodeIndex at = locate(u);
    REQUIRE(std::abs(tau_point(u, x) -
                     block_trace(x, at.level, at.index)) <= 1e-14);
  }

  // phi at a window node via the compressed corner mean:
  // phi_{g_s(u)}(x) = tau_u(G_s(x)) for x at level >= locate level
  for (int s = 1; s <= 5; ++s) {
    const AfElement y = random_element(d, s + 1, rng);
    const Fraction u(1, 2);
    const Fraction theta = branch_map(s, u);
    const std::complex<double> via_phi = phi_point(theta, y);
    const std::complex<double> via_compress = tau_point(u, branch_compress(y, s));
    REQUIRE(std::abs(via_phi - via_compress) <= 1e-13);
  }
}

TEST_CASE("integrated states") {
  DiagramPtr d = main_diagram();
  const AfElement one = AfElement::identity(d, 2);
  CHECK(std::abs(tau_state(one) - std::complex<double>(1.0)) <= 1e-15);

  const AfElement z = center_embed([](double u) { return u; }, d, 5);
  CHECK(std::abs(tau_state(z) - std::complex<double>(1.0 / kLn2 - 1.0)) <= 1e-14);

  // phi of the identity: sum of the window masses, exactly the telescoped sum
  for (int S : {4, 24}) {
    const auto p = phi_state(one, S, kSpec);
    const double want = 1.0 - std::log2((S + 2.0) / (S + 1.0));
    REQUIRE(std::abs(p.value - std::complex<double>(want)) <= 1e-10);
    REQUIRE(p.tail_bound == doctest::Approx(std::log2((S + 2.0) / (S + 1.0))));
  }

  // tau is tracial; phi generally is not
  Rng rng(113);
  for (int t = 0; t < 10; ++t) {
    const AfElement a = random_element(d, 4, rng);
    const AfElement b = random_element(d, 4, rng);
    REQUIRE(std::abs(tau_state(a * b) - tau_state(b * a)) <= 1e-10);
  }
}

TEST_CASE("gns forms") {
  DiagramPtr d = main_diagram();
  Rng rng(127);
  const State tau{State::Kind::tau_integrated, 0.0, 24, kSpec};
  const AfElement one = AfElement::identity(d, 3);
  CHECK(std::abs(gns_inner(tau, one, one) - std::complex<double>(1.0)) <= 1e-14);

  for (int t = 0; t < 20; ++t) {
    const AfElement x = random_element(d, 3, rng);
    const AfElement y = random_element(d, 3, rng);
    const std::complex<double> xx = gns_inner(tau, x, x);
    const std::complex<double> yy = gns_inner(tau, y, y);
    const std::complex<double> xy = gns_inner(tau, x, y);
    REQUIRE(xx.real() >= 0.0);
    REQUIRE(std::abs(xx.imag()) <= 1e-12);
    REQUIRE(std::norm(xy) <= xx.real() * yy.real() + 1e-10);
    // conjugate symmetry of the tau form
    REQUIRE(std::abs(gns_inner(tau, y, x) - std::conj(xy)) <= 1e-12);
  }

  // Gram matrices are PSD
  const int m = 4;
  Eigen::MatrixXcd gram(m, m);
  std::vector<AfElement> elems;
  for (int i = 0; i < m; ++i) elems.push_back(random_element(d, 2, rng));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) gram(i, j) = gns_inner(tau, elems[i], elems[j]);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (gram + gram.adjoint()));
  CHECK(es.eigenvalues().minCoeff() >= -1e-10);

  // phi-based form at a point state
  const State phi{State::Kind::phi_at, 0.4, 24, kSpec};
  const AfElement x = random_element(d, 2, rng);
  CHECK(gns_inner(phi, x, x).real() >= -1e-12);
}

TEST_CASE("branch isometry identity") {
  DiagramPtr d = main_diagram();
  Rng rng(131);
  for (int s = 1; s <= 5; ++s) {
    const AfElement one = AfElement::identity(d, 2);
    const CheckResult c = isometry_branch_check(one, s, kSpec, 1e-7);
    REQUIRE(c.passed());
    const double window_mass =
        std::log2((s + 1.0) * (s + 1.0) / (static_cast<double>(s) * (s + 2.0)));
    REQUIRE(c.lhs == doctest::Approx(window_mass).epsilon(1e-9));

    const AfElement z = center_embed([](double u) { return 1.0 - 0.3 * u; }, d, 2);
    REQUIRE(isometry_branch_check(z, s, kSpec, 1e-8).passed());

    for (int t = 0; t < 3; ++t) {
      const AfElement x = random_element(d, 2, rng);
      REQUIRE(isometry_branch_check(x, s, kSpec, 1e-8).passed());
    }
  }
}

TEST_CASE("branch intertwining identity") {
  DiagramPtr d = main_diagram();
  Rng rng(137);
  for (int s = 1; s <= 4; ++s) {
    // x = 1 reduces to the isometry polarization
    const AfElement y = random_element(d, 2, rng);
    const AfElement z = random_element(d, 2, rng);
    REQUIRE(intertwine_branch_check(AfElement::identity(d, 2 + s), y, z, s, kSpec,
                                    1e-8)
                .passed());
    // y = z = 1 with central x reduces to the scalar branch invariance
    const AfElement one2 = AfElement::identity(d, 2);
    const AfElement zc =
        center_embed([](double u) { return 0.3 + 0.4 * u; }, d, 2 + s);
    REQUIRE(intertwine_branch_check(zc, one2, one2, s, kSpec, 1e-8).passed());
    for (int t = 0; t < 2; ++t) {
      const AfElement x = random_element(d, 2 + s, rng);
      REQUIRE(intertwine_branch_check(x, y, z, s, kSpec, 1e-7).passed());
    }
  }
}

TEST_CASE("branch state identity: phi vs tau after compression") {
  DiagramPtr d = main_diagram();
  Rng rng(139);
  for (int s = 1; s <= 5; ++s) {
    for (int t = 0; t < 2; ++t) {
      const AfElement x = random_element(d, 3, rng);
      REQUIRE(gauss_state_branch_check(x, s, kSpec, 1e-8).passed());
    }
    // center element reduces to the scalar branch identity
    const AfElement z = center_embed([](double u) { return 0.5 + u * u; }, d, 3);
    REQUIRE(gauss_state_branch_check(z, s, kSpec, 1e-8).passed());
  }
}

TEST_CASE("commutative restriction on the window") {
  const QuadratureSpec spec{8, 32};
  // pinned closed form: f = id, test = 1, s = 1:
  // int_{1/2}^1 (1/theta - 1) dmu = 2 log2(3/2) - 1
  const CheckResult pinned = restriction_branch_check(
      [](double u) { return u; }, [](double) { return 1.0; }, 1, 4, spec, 1e-8);
  CHECK(pinned.passed());
  const double want = 2.0 * std::log2(1.5) - 1.0;
  CHECK(pinned.lhs == doctest::Approx(want).epsilon(1e-9));
  CHECK(pinned.rhs == doctest::Approx(want).epsilon(1e-9));

  // the same integral by adaptive Simpson directly in theta
  const double simpson =
      oracle::simpson_mu([](double th) { return 1.0 / th - 1.0; }, 0.5, 1.0);
  CHECK(pinned.lhs == doctest::Approx(simpson).epsilon(1e-9));

  // f = 1, test = 1: the pairing is the window mass
  for (int s = 1; s <= 3; ++s) {
    const CheckResult mass = restriction_branch_check(
        [](double) { return 1.0; }, [](double) { return 1.0; }, s, 4, spec, 1e-9);
    CHECK(mass.passed());
    const double window_mass =
        std::log2((s + 1.0) * (s + 1.0) / (static_cast<double>(s) * (s + 2.0)));
    CHECK(mass.lhs == doctest::Approx(window_mass).epsilon(1e-9));
  }

  Rng rng(149);
  for (int s = 1; s <= 5; ++s) {
    std::vector<double> c;
    for (int i = 0; i < 5; ++i) c.push_back(rng.uniform(-1, 1));
    auto f = [&](double u) {
      double v = 0.0;
      for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * u + *it;
      return v;
    };
    REQUIRE(restriction_branch_check(f, [](double) { return 1.0; }, s, 4, spec, 1e-8)
                .passed());
    REQUIRE(restriction_branch_check(f, [](double th) { return th * th; }, s, 4, spec,
                                     1e-8)
                .passed());
  }
}

TEST_CASE("branch sums against the noncommutative Gauss map") {
  DiagramPtr d = main_diagram();
  Rng rng(151);
  const int S = 5;
  const AfElement x = 0.5 * (random_element(d, 2, rng) +
                             random_element(d, 2, rng).adjoint());
  const double tail = 2.0 * x.op_norm() / (S + 2.0);
  const auto phis = phi_state(x, S, kSpec);
  const auto g = nc_gauss_map(x, S, x.level() + S);
  CHECK(std::abs(phis.value - tau_state(g.value)) <= tail);
  const auto phis2 = phi_state(x, S + 3, kSpec);
  CHECK(std::abs(phis2.value - phis.value) <= phis.tail_bound + 1e-12);
}
