#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <complex>

#include "ncgauss/af_element.hpp"
#include "ncgauss/branch_maps.hpp"
#include "ncgauss/farey.hpp"
#include "ncgauss/rng.hpp"
#include "ncgauss/transfer.hpp"

using namespace ncgauss;

namespace {
DiagramPtr main_diagram() { return FareyDiagram::shared_farey(12); }
}  // namespace

TEST_CASE("window spans") {
  DiagramPtr d = main_diagram();
  const WindowSpan w = window_span(*d, 1, 1);
  CHECK(w.first == 1);
  CHECK(w.last == 2);
  const WindowSpan w2 = window_span(*d, 2, 5);
  CHECK(d->labels(5)[static_cast<std::size_t>(w2.first)] == Fraction(1, 3));
  CHECK(d->labels(5)[static_cast<std::size_t>(w2.last)] == Fraction(1, 2));
  CHECK(w2.last - w2.first == 8);
  CHECK_THROWS_AS(window_span(*d, 3, 2), std::invalid_argument);
}

TEST_CASE("projection to the quotient") {
  DiagramPtr d = main_diagram();
  Rng rng(61);
  // (a, B, c) at level 1, branch 1: window [1/2, 1] keeps (B, c).
  const AfElement x = random_element(d, 1, rng);
  const AfElement q = quotient_project(x, 1);
  CHECK(q.level() == 0);
  CHECK(q.diagram().labels(0) ==
        std::vector<Fraction>{Fraction(1, 2), Fraction(1, 1)});
  CHECK((q.block(0) - x.block(1)).cwiseAbs().maxCoeff() == 0.0);
  CHECK((q.block(1) - x.block(2)).cwiseAbs().maxCoeff() == 0.0);

  // below level s the element is embedded along the cone first
  const AfElement q2 = quotient_project(x, 2);
  CHECK(q2.level() == 0);
  CHECK(q2.max_diff(quotient_project(embed(x, 2), 2)) == 0.0);

  for (int s = 1; s <= 4; ++s) {
    for (int t = 0; t < 10; ++t) {
      const int n = s + 1 + static_cast<int>(rng.integer(2));
      const AfElement a = random_element(d, n, rng);
      const AfElement b = random_element(d, n, rng);
      REQUIRE(quotient_project(a * b, s).max_diff(quotient_project(a, s) *
                                                  quotient_project(b, s)) == 0.0);
      REQUIRE(quotient_project(AfElement::identity(d, n), s)
                  .max_diff(AfElement::identity(
                      quotient_project(a, s).diagram_ptr(), n - s)) == 0.0);
    }
  }
}

TEST_CASE("projection of a deep embedding via the cone") {
  DiagramPtr d = main_diagram();
  Rng rng(67);
  for (int s = 1; s <= 3; ++s) {
    const AfElement x = random_element(d, 2, rng);
    const AfElement direct = quotient_project(embed(x, 3 + s), s);
    const AfElement cone = quotient_project_embedded(x, s, 3);
    REQUIRE(direct.max_diff(cone) == 0.0);
  }
  // far past anything materializable
  const AfElement y = random_element(d, 1, rng);
  const AfElement deep = quotient_project_embedded(y, 30, 2);
  CHECK(deep.level() == 2);
  CHECK(deep.diagram().branch() == 30);
}

TEST_CASE("inflate: s diagonal copies plus a zero corner") {
  DiagramPtr d = main_diagram();
  Rng rng(71);
  // (a, c) at level 0, branch 1: labels ascending (1/2, 1/1) carry
  // (diag(c, 0), a).
  const AfElement x = random_element(d, 0, rng);
  const AfElement y = quotient_inflate(x, 1);
  CHECK(y.block(1)(0, 0) == x.block(0)(0, 0));
  CHECK(y.block(0)(0, 0) == x.block(1)(0, 0));
  CHECK(std::abs(y.block(0)(1, 1)) == 0.0);
  CHECK(std::abs(y.block(0)(0, 1)) == 0.0);

  for (int s = 1; s <= 4; ++s) {
    const int m = 2;
    const AfElement a = random_element(d, m, rng);
    const AfElement b = random_element(d, m, rng);
    REQUIRE(quotient_inflate(a * b, s).max_diff(quotient_inflate(a, s) *
                                                quotient_inflate(b, s)) <= 1e-14);
    REQUIRE(quotient_inflate(a.adjoint(), s).max_diff(
                quotient_inflate(a, s).adjoint()) == 0.0);
    REQUIRE(quotient_average(quotient_inflate(a, s)).max_diff(a) <= 1e-15);
    // averaging the pinched corners of the quotient identity gives the
    // identity back: the map is unital
    DiagramPtr qd = quotient_inflate(a, s).diagram_ptr();
    REQUIRE(quotient_average(AfElement::identity(qd, m))
                .max_diff(AfElement::identity(d, m)) == 0.0);
    // normalized block trace of sigma~(1) is s q g / size = sq/(p+sq)
    const AfElement one = quotient_inflate(AfElement::identity(d, m), s);
    for (std::int64_t j = 0; j < one.block_count(); ++j) {
      const auto shape = one.diagram().corners(m, j);
      const double got =
          one.block(j).trace().real() / static_cast<double>(one.block(j).rows());
      REQUIRE(got == doctest::Approx(static_cast<double>(shape.copies * shape.q) /
                                     (shape.copies * shape.q + shape.p))
                         .epsilon(1e-14));
    }
  }
}

TEST_CASE("commuting squares hold on the nose") {
  DiagramPtr d = main_diagram();
  Rng rng(73);
  for (int s = 1; s <= 4; ++s) {
    for (int m = 0; m <= 3; ++m) {
      const AfElement x = random_element(d, m, rng);
      REQUIRE(embed(quotient_inflate(x, s), m + 1)
                  .max_diff(quotient_inflate(embed(x, m + 1), s)) == 0.0);
      DiagramPtr qd = FareyDiagram::shared_quotient(s, m + 2);
      const AfElement y = random_element(qd, m, rng);
      REQUIRE(embed(quotient_average(y), m + 1)
                  .max_diff(quotient_average(embed(y, m + 1))) == 0.0);
    }
  }
}

TEST_CASE("expectations work over quotient diagrams too") {
  Rng rng(103);
  for (int s = 1; s <= 3; ++s) {
    DiagramPtr qd = FareyDiagram::shared_quotient(s, 4);
    const AfElement y = random_element(qd, 1, rng);
    const AfElement up = embed(y, 3);
    REQUIRE(conditional_expectation(up, 1).max_diff(y) <= 1e-14);
    const AfElement a = random_element(qd, 1, rng);
    REQUIRE(conditional_expectation(embed(a, 3) * up, 1)
                .max_diff(a * conditional_expectation(up, 1)) <= 1e-13);
  }
}

TEST_CASE("lift is a UCP section") {
  DiagramPtr d = main_diagram();
  Rng rng(79);
  for (int s = 1; s <= 4; ++s) {
    DiagramPtr qd = FareyDiagram::shared_quotient(s, 4);
    const AfElement y = random_element(qd, 2, rng);
    REQUIRE(quotient_project(quotient_lift(y), s).max_diff(y) == 0.0);
    REQUIRE(quotient_lift(AfElement::identity(qd, 2))
                .max_diff(AfElement::identity(d, 2 + s)) == 0.0);
    const AfElement psd = random_element(qd, 2, rng, MatrixClass::psd);
    for (LiftFill fill : {LiftFill::nearest_edge, LiftFill::edge_mean}) {
      const AfElement lifted = quotient_lift(psd, fill);
      for (std::int64_t k = 0; k < lifted.block_count(); ++k) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(
            0.5 * (lifted.block(k) + lifted.block(k).adjoint()));
        REQUIRE(es.eigenvalues().minCoeff() >= -1e-12);
      }
    }
  }
}

TEST_CASE("H_s(1) carries trace s theta on the window") {
  DiagramPtr d = main_diagram();
  for (int s = 1; s <= 4; ++s) {
    const AfElement h1 = branch_expand(AfElement::identity(d, 3), s);
    for (const Fraction& u : d->labels(3)) {
      if (u.is_zero() || u.is_one()) continue;
      const Fraction theta = branch_map(s, u);
      REQUIRE(std::abs(trace_at(theta, h1) -
                       std::complex<double>(s * theta.value())) <= 1e-14);
    }
  }
}

TEST_CASE("compress is a left inverse and a module map") {
  DiagramPtr d = main_diagram();
  Rng rng(83);
  for (int s = 1; s <= 4; ++s) {
    for (int t = 0; t < 8; ++t) {
      const int m = 1 + static_cast<int>(rng.integer(3));
      const AfElement x = random_element(d, m, rng);
      const AfElement y = random_element(d, m, rng);
      REQUIRE(branch_compress(branch_expand(x, s), s).max_diff(x) <= 1e-14);
      REQUIRE(branch_compress(branch_expand(x, s, LiftFill::edge_mean), s)
                  .max_diff(x) <= 1e-14);
      const AfElement xup = random_element(d, m + s, rng);
      REQUIRE(branch_compress(xup * branch_expand(y, s), s)
                  .max_diff(branch_compress(xup, s) * y) <= 1e-13);
    }
    CHECK_THROWS_AS(branch_compress(AfElement::identity(d, s - 1), s),
                    std::invalid_argument);
  }
}

TEST_CASE("compress restricts to composition with g_s on the center") {
  DiagramPtr d = main_diagram();
  for (int s = 1; s <= 4; ++s) {
    auto f = [](double u) { return 0.2 - u + 0.5 * u * u * u; };
    const AfElement lhs = branch_compress(center_embed(f, d, s + 3), s);
    const AfElement rhs =
        center_embed([&](double u) { return f(1.0 / (u + s)); }, d, 3);
    REQUIRE(lhs.max_diff(rhs) <= 1e-14);
  }
}

TEST_CASE("trace relation, hand case and swept windows") {
  DiagramPtr d = main_diagram();
  Rng rng(89);

  // s=1, u=0/1: both sides reduce to a(x) * (block of y at node 1/1).
  const AfElement x0 = random_element(d, 0, rng);
  const AfElement y1 = random_element(d, 1, rng);
  const AfElement lhs_q = quotient_inflate(x0, 1) * quotient_project(y1, 1);
  const std::complex<double> lhs = lhs_q.block(1).trace();  // node 1/1, size 1
  const std::complex<double> want = x0.block(0)(0, 0) * y1.block(2)(0, 0);
  CHECK(std::abs(lhs - want) == 0.0);
  const AfElement rhs_a = x0 * branch_compress(y1, 1);
  CHECK(std::abs(1.0 * 1.0 * block_trace(rhs_a, 0, 0) - want) == 0.0);

  for (int s = 1; s <= 4; ++s) {
    const int m = 6 - s;
    const AfElement x = embed(random_element(d, std::min(3, m), rng), m);
    const AfElement yup = random_element(d, 6, rng);
    const AfElement q = quotient_inflate(x, s) * quotient_project(yup, s);
    const AfElement a = x * branch_compress(yup, s);
    const auto& labels = d->labels(m);
    for (std::size_t k = 1; k + 1 < labels.size(); ++k) {
      const Fraction gu = branch_map(s, labels[k]);
      const std::int64_t qi = q.diagram().index_of(m, gu);
      REQUIRE(qi >= 0);
      const std::complex<double> l =
          q.block(qi).trace() / static_cast<double>(q.block(qi).rows());
      const std::complex<double> r =
          static_cast<double>(s) * gu.value() *
          block_trace(a, m, static_cast<std::int64_t>(k));
      REQUIRE(std::abs(l - r) <= 1e-13);
    }
  }
}

TEST_CASE("vanishing loci transport through the branch maps") {
  DiagramPtr d = main_diagram();
  Rng rng(97);
  for (int s = 1; s <= 4; ++s) {
    const Fraction theta(1, 2);
    const Fraction image = branch_map(s, theta);
    const NodeIndex at = locate(image);
    const int L = std::max(at.level, s + 2);
    const std::int64_t index = at.index << (L - at.level);
    for (int t = 0; t < 10; ++t) {
      AfElement x = random_element(d, L, rng);
      x = x.with_block(index, Eigen::MatrixXcd::Zero(x.block(index).rows(),
                                                     x.block(index).cols()));
      const AfElement gx = branch_compress(x, s);
      REQUIRE(std::abs(trace_at(theta, gx.adjoint() * gx)) <= 1e-13);
    }
    // converse direction through the section
    const NodeIndex t0 = locate(theta);
    const int m = std::max(t0.level, 2);
    AfElement y = random_element(d, m, rng);
    y = y.with_block(t0.index << (m - t0.level),
                     Eigen::MatrixXcd::Zero(2, 2));
    const AfElement hy = branch_expand(y, s);
    REQUIRE(std::abs(trace_at(branch_map(s, theta), hy.adjoint() * hy)) <= 1e-13);
    REQUIRE(branch_compress(hy, s).max_diff(y) <= 1e-14);
  }
}

TEST_CASE("truncated noncommutative Gauss map") {
  DiagramPtr d = main_diagram();
  Rng rng(101);
  const int S = 4;
  const int level = 2;

  CHECK_THROWS_AS(nc_gauss_map(AfElement::identity(d, 2), S, 3),
                  std::invalid_argument);

  const auto gone = nc_gauss_map(AfElement::identity(d, level), S, level + S);
  CHECK(gone.value.level() == level);
  CHECK(gone.tail_bound == doctest::Approx(2.0 / (S + 2)));
  CHECK((gone.value - AfElement::identity(d, level)).op_norm() <=
        gone.tail_bound + 1e-12);

  const AfElement psd = random_element(d, level, rng, MatrixClass::psd);
  const auto gp = nc_gauss_map(psd, S, level + S);
  for (std::int64_t k = 0; k < gp.value.block_count(); ++k) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(
        0.5 * (gp.value.block(k) + gp.value.block(k).adjoint()));
    REQUIRE(es.eigenvalues().minCoeff() >= -1e-10);
  }

  // center route restricts to the scalar transfer operator, node by node
  auto f = [](double u) { return 0.4 + 0.3 * u - u * u; };
  const auto gz = nc_gauss_center(f, 1.0, S, 3);
  for (std::size_t k = 0; k < d->labels(3).size(); ++k) {
    const double u = d->labels(3)[k].value();
    const double want = apply_transfer(f, u, S).value;
    REQUIRE(std::abs(block_trace(gz.value, 3, static_cast<std::int64_t>(k)) -
                     std::complex<double>(want)) <= 1e-14);
  }

  CHECK_THROWS_AS(nc_gauss_map(AfElement::identity(d, 2), 24, 26), resource_error);
}
