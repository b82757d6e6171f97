#include "ncgauss/verify.hpp"

#include <chrono>
#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>

#include "ncgauss/af_element.hpp"
#include "ncgauss/branch_maps.hpp"
#include "ncgauss/diagram.hpp"
#include "ncgauss/farey.hpp"
#include "ncgauss/piecewise_affine.hpp"
#include "ncgauss/quadrature.hpp"
#include "ncgauss/rng.hpp"
#include "ncgauss/states.hpp"
#include "ncgauss/transfer.hpp"

namespace ncgauss {

namespace {

constexpr double kLn2 = 0.6931471805599453094172321214581766;
constexpr double kGkwReference = 0.3036630029;  // subdominant modulus, 3-digit pin

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                     start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

template <typename Fn>
void add_check(std::vector<CheckResult>& out, Fn&& fn) {
  Stopwatch sw;
  CheckResult c = fn();
  c.wall_ms = sw.ms();
  out.push_back(std::move(c));
}

std::string fmt(const char* format, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), format, args...);
  return std::string(buf);
}

double min_eigenvalue(const AfElement& x) {
  double m = 0.0;
  for (std::int64_t k = 0; k < x.block_count(); ++k) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(
        0.5 * (x.block(k) + x.block(k).adjoint()));
    m = std::min(m, es.eigenvalues().minCoeff());
  }
  return m;
}

AfElement hermitize(const AfElement& x) { return 0.5 * (x + x.adjoint()); }

double poly_eval(const std::vector<double>& c, double t) {
  double v = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * t + *it;
  return v;
}

}  // namespace

// ---------------------------------------------------------------------------
// farey: exact integer combinatorics. Every check in this suite compares
// integers, so abs_err is identically zero when the kernel is sound.
// ---------------------------------------------------------------------------
std::vector<CheckResult> run_farey_suite(const RunConfig& cfg) {
  std::vector<CheckResult> out;
  const int deep = std::max(cfg.max_level, 12);

  add_check(out, [&] {
    std::int64_t bad = 0;
    for (int n = 0; n <= deep; ++n) {
      const FareyLevel lvl = farey_level(n);
      for (std::size_t k = 0; k + 1 < lvl.nodes.size(); ++k) {
        const Fraction& a = lvl.nodes[k];
        const Fraction& b = lvl.nodes[k + 1];
        if (b.num() * a.den() - a.num() * b.den() != 1) ++bad;
      }
    }
    return CheckResult::make("farey", "neighbor_determinant",
                             "p'q - pq' = 1 for adjacent nodes",
                             fmt("levels<=%d", deep), static_cast<double>(bad), 0.0,
                             static_cast<double>(bad), 0.0);
  });

  add_check(out, [&] {
    std::int64_t bad = 0;
    for (int n = 0; n <= deep; ++n) {
      const FareyLevel lvl = farey_level(n);
      Fraction max_gap(0, 1);
      for (std::size_t k = 0; k + 1 < lvl.nodes.size(); ++k) {
        // Gap between neighbors is 1/(q q'), exactly.
        const Fraction gap(1, lvl.nodes[k].den() * lvl.nodes[k + 1].den());
        if (max_gap < gap) max_gap = gap;
      }
      if (max_gap != Fraction(1, n + 1)) ++bad;
    }
    return CheckResult::make("farey", "max_gap", "max consecutive gap = 1/(n+1)",
                             fmt("levels<=%d", deep), static_cast<double>(bad), 0.0,
                             static_cast<double>(bad), 0.0);
  });

  add_check(out, [&] {
    const int top = std::min(std::max(cfg.max_level, 10), 10);
    std::int64_t bad = 0;
    for (int n = 0; n <= top; ++n) {
      const FareyLevel lvl = farey_level(n);
      for (std::size_t k = 0; k < lvl.nodes.size(); ++k) {
        const NodeIndex at = locate(lvl.nodes[k]);
        if (at.level > n || (at.index << (n - at.level)) != static_cast<std::int64_t>(k))
          ++bad;
      }
    }
    return CheckResult::make("farey", "locate_roundtrip",
                             "locate o farey_level = id", fmt("levels<=%d", top),
                             static_cast<double>(bad), 0.0, static_cast<double>(bad),
                             0.0);
  });

  add_check(out, [&] {
    Rng rng(cfg.seed ^ 0xfa11e5);
    std::int64_t bad = 0;
    const int trials = 200;
    for (int t = 0; t < trials; ++t) {
      const std::int64_t q = 2 + static_cast<std::int64_t>(rng.integer(999998));
      std::int64_t p = 1 + static_cast<std::int64_t>(rng.integer(q - 1));
      const Fraction x(p, q);
      if (x.is_zero() || x.is_one()) continue;
      const auto digits = cf_expand(x);
      // Gauss map shifts digits; locate level matches the digit sum.
      if (!gauss_map(x).is_zero()) {
        const auto shifted = cf_expand(gauss_map(x));
        if (shifted.size() + 1 != digits.size()) ++bad;
        for (std::size_t i = 0; i < shifted.size(); ++i)
          if (shifted[i] != digits[i + 1]) ++bad;
      } else if (digits.size() != 1) {
        ++bad;
      }
      std::int64_t digit_sum = 0;
      for (auto d : digits) digit_sum += d;
      if (locate(x).level + 1 != digit_sum) ++bad;
    }
    return CheckResult::make("farey", "cf_digit_shift",
                             "G shifts continued fraction digits; level+1 = sum a_i",
                             fmt("trials=%d qmax=1000000", trials),
                             static_cast<double>(bad), 0.0, static_cast<double>(bad),
                             0.0);
  });

  add_check(out, [&] {
    std::int64_t bad = 0;
    const int top = 20;
    std::int64_t fib_a = 1, fib_b = 1;  // F_1, F_2; fib_b = F_{n+2} on entry
    for (int n = 0; n <= top; ++n) {
      std::int64_t maxden = 0;
      for (const Fraction& x : farey_level(n).nodes) maxden = std::max(maxden, x.den());
      if (maxden != fib_b) ++bad;
      const std::int64_t next = fib_a + fib_b;
      fib_a = fib_b;
      fib_b = next;
    }
    return CheckResult::make("farey", "fibonacci_denominator",
                             "max denominator at level n = F(n+2)", "levels<=20",
                             static_cast<double>(bad), 0.0, static_cast<double>(bad),
                             0.0);
  });

  add_check(out, [&] {
    std::int64_t bad = 0;
    if (mediant(Fraction(0, 1), Fraction(1, 1)) != Fraction(1, 2)) ++bad;
    if (mediant(Fraction(1, 3), Fraction(1, 2)) != Fraction(2, 5)) ++bad;
    const FareyLevel l2 = farey_level(2);
    const std::vector<Fraction> want = {Fraction(0, 1), Fraction(1, 3), Fraction(1, 2),
                                        Fraction(2, 3), Fraction(1, 1)};
    if (l2.nodes != want) ++bad;
    if (farey_level(4).nodes[5] != Fraction(3, 8)) ++bad;
    if (locate(Fraction(1, 2)).level != 1 || locate(Fraction(1, 2)).index != 1) ++bad;
    if (locate(Fraction(3, 8)).level != 4 || locate(Fraction(3, 8)).index != 5) ++bad;
    if (gauss_map(Fraction(2, 5)) != Fraction(1, 2)) ++bad;
    if (branch_map(2, Fraction(0, 1)) != Fraction(1, 2)) ++bad;
    if (branch_map(2, Fraction(1, 1)) != Fraction(1, 3)) ++bad;
    if (branch_inverse(1, Fraction(2, 3)) != Fraction(1, 2)) ++bad;
    return CheckResult::make("farey", "pinned_values",
                             "mediants, rows, locate, G, g_s at pinned nodes", "-",
                             static_cast<double>(bad), 0.0, static_cast<double>(bad),
                             0.0);
  });

  return out;
}

// ---------------------------------------------------------------------------
// measure: closed-form Gauss-measure integrals of piecewise affine functions.
// ---------------------------------------------------------------------------
std::vector<CheckResult> run_measure_suite(const RunConfig& cfg) {
  std::vector<CheckResult> out;
  const double tol = 1e-14;

  add_check(out, [&] {
    const double v = PiecewiseAffineFn::constant(1.0).integral_mu();
    return CheckResult::make("measure", "unit_mass", "int 1 dmu = 1", "-", v, 1.0,
                             std::abs(v - 1.0), tol);
  });

  add_check(out, [&] {
    const PiecewiseAffineFn id({Fraction(0, 1), Fraction(1, 1)}, {0.0, 1.0});
    const double v = id.integral_mu();
    const double want = 1.0 / kLn2 - 1.0;
    return CheckResult::make("measure", "identity_integral", "int t dmu = 1/ln2 - 1",
                             "-", v, want, std::abs(v - want), tol);
  });

  add_check(out, [&] {
    const double v = gauss_measure(0.0, 0.5);
    const double want = std::log(1.5) / kLn2;
    return CheckResult::make("measure", "half_interval", "mu([0,1/2]) = log2(3/2)", "-",
                             v, want, std::abs(v - want), tol);
  });

  add_check(out, [&] {
    const PiecewiseAffineFn hat = hat_function(1, 1);
    double err = std::abs(hat(Fraction(1, 2)) - 1.0);
    err = std::max(err, std::abs(hat(Fraction(0, 1))));
    err = std::max(err, std::abs(hat(Fraction(1, 1))));
    err = std::max(err, std::abs(hat(Fraction(1, 3)) - 2.0 / 3.0));
    return CheckResult::make("measure", "hat_values",
                             "tent at (1,1): 1 at 1/2, 0 at ends, 2/3 at 1/3", "-", err,
                             0.0, err, tol);
  });

  add_check(out, [&] {
    Rng rng(cfg.seed ^ 0x9ea5);
    double err = 0.0;
    double min_nonneg = 0.0;
    for (int t = 0; t < 50; ++t) {
      const FareyLevel lvl = farey_level(3);
      std::vector<double> va, vb;
      for (std::size_t i = 0; i < lvl.nodes.size(); ++i) {
        va.push_back(rng.uniform(0.0, 2.0));
        vb.push_back(rng.uniform(-1.0, 1.0));
      }
      const PiecewiseAffineFn f(lvl.nodes, va), g(lvl.nodes, vb);
      min_nonneg = std::min(min_nonneg, f.integral_mu());
      const double a = rng.uniform(-2.0, 2.0), b = rng.uniform(-2.0, 2.0);
      const double lhs = PiecewiseAffineFn::combine(a, f, b, g).integral_mu();
      const double rhs = a * f.integral_mu() + b * g.integral_mu();
      err = std::max(err, std::abs(lhs - rhs));
    }
    err = std::max(err, -min_nonneg);
    return CheckResult::make("measure", "linearity_positivity",
                             "integral is linear and nonnegative on nonneg f",
                             "trials=50 level=3", err, 0.0, err, 1e-12);
  });

  return out;
}

// ---------------------------------------------------------------------------
// af: diagram matrices, embeddings, block traces, trace fields, expectations.
// ---------------------------------------------------------------------------
std::vector<CheckResult> run_af_suite(const RunConfig& cfg) {
  std::vector<CheckResult> out;
  DiagramPtr d = FareyDiagram::shared_farey(std::max(cfg.max_level + 2, 12));
  Rng rng(cfg.seed ^ 0xaf);

  add_check(out, [&] {
    const Eigen::MatrixXi a0 = d->connecting_matrix(0);
    const Eigen::MatrixXi a1 = d->connecting_matrix(1);
    Eigen::MatrixXi w0(3, 2), w1(5, 3);
    w0 << 1, 0, 1, 1, 0, 1;
    w1 << 1, 0, 0, 1, 1, 0, 0, 1, 0, 0, 1, 1, 0, 0, 1;
    const bool ok = a0 == w0 && a1 == w1;
    return CheckResult::make("af", "connecting_matrices_pinned",
                             "A_0 = [[1,0],[1,1],[0,1]]; A_1 interleaves", "-",
                             ok ? 0.0 : 1.0, 0.0, ok ? 0.0 : 1.0, 0.0);
  });

  add_check(out, [&] {
    const int deep = std::max(cfg.max_level, 12);
    std::int64_t bad = 0;
    for (int n = 0; n < deep; ++n) {
      const auto sizes = d->sizes(n);
      const auto next = d->apply_connecting(n, sizes);
      if (next != d->sizes(n + 1)) ++bad;
    }
    return CheckResult::make("af", "connecting_sizes", "A_n sizes(n) = sizes(n+1)",
                             fmt("levels<=%d", deep), static_cast<double>(bad), 0.0,
                             static_cast<double>(bad), 0.0);
  });

  add_check(out, [&] {
    double err = 0.0;
    for (int n = 0; n <= 5; ++n) {
      const AfElement one = AfElement::identity(d, n);
      err = std::max(err, embed(one, n + 2).max_diff(AfElement::identity(d, n + 2)));
    }
    return CheckResult::make("af", "embed_unital", "embed(1) = 1", "levels<=5", err,
                             0.0, err, 0.0);
  });

  add_check(out, [&] {
    double err = 0.0;
    for (int t = 0; t < 20; ++t) {
      const int n = 1 + static_cast<int>(rng.integer(5));
      const AfElement x = random_element(d, n, rng);
      const AfElement y = random_element(d, n, rng);
      const int m = n + 1 + static_cast<int>(rng.integer(2));
      err = std::max(err, embed(x * y, m).max_diff(embed(x, m) * embed(y, m)));
      err = std::max(err, embed(x.adjoint(), m).max_diff(embed(x, m).adjoint()));
    }
    return CheckResult::make("af", "embed_homomorphism",
                             "embed(xy) = embed(x) embed(y); *-compatible",
                             "trials=20 levels<=6", err, 0.0, err, cfg.tol_exact);
  });

  add_check(out, [&] {
    // (a, B, c) at level 1 maps to (a, diag(a,B), B, diag(B,c), c).
    const AfElement x = random_element(d, 1, rng);
    const AfElement y = embed(x, 2);
    double err = (y.block(0) - x.block(0)).cwiseAbs().maxCoeff();
    Eigen::MatrixXcd b1 = Eigen::MatrixXcd::Zero(3, 3);
    b1.block(0, 0, 1, 1) = x.block(0);
    b1.block(1, 1, 2, 2) = x.block(1);
    err = std::max(err, (y.block(1) - b1).cwiseAbs().maxCoeff());
    err = std::max(err, (y.block(2) - x.block(1)).cwiseAbs().maxCoeff());
    Eigen::MatrixXcd b3 = Eigen::MatrixXcd::Zero(3, 3);
    b3.block(0, 0, 2, 2) = x.block(1);
    b3.block(2, 2, 1, 1) = x.block(2);
    err = std::max(err, (y.block(3) - b3).cwiseAbs().maxCoeff());
    err = std::max(err, (y.block(4) - x.block(2)).cwiseAbs().maxCoeff());
    return CheckResult::make("af", "embed_one_step_shape",
                             "level 1 -> 2: blocks (a, a+B, B, B+c, c)", "-", err, 0.0,
                             err, 0.0);
  });

  add_check(out, [&] {
    // Path consistency of block traces under embedding: the same node read
    // at any deeper level, and through any deeper label, gives one number.
    double err = 0.0;
    const int trials = 200;
    for (int t = 0; t < trials; ++t) {
      const int n0 = static_cast<int>(rng.integer(5));
      const int lift = 1 + static_cast<int>(rng.integer(
                               static_cast<std::uint64_t>(std::max(1, 8 - n0))));
      const AfElement x = random_element(d, n0, rng);
      const AfElement y = embed(x, n0 + lift);
      for (std::int64_t k = 0; k <= (std::int64_t{1} << n0); ++k) {
        const std::complex<double> a = block_trace(x, n0, k);
        const std::complex<double> b = block_trace(y, n0, k);
        const std::complex<double> c =
            block_trace(y, n0 + lift, k << lift);  // same path, deeper label
        err = std::max(err, std::abs(a - b));
        err = std::max(err, std::abs(a - c));
      }
    }
    return CheckResult::make("af", "block_trace_paths",
                             "tau_(n,k) = tau_(n+l, 2^l k) across embeddings",
                             fmt("trials=%d levels<=8", trials), err, 0.0, err,
                             cfg.tol_exact);
  });

  add_check(out, [&] {
    std::vector<Eigen::MatrixXcd> blocks(3);
    blocks[0] = Eigen::MatrixXcd::Identity(1, 1);
    blocks[1] = Eigen::MatrixXcd::Zero(2, 2);
    blocks[1](0, 0) = 1.0;
    blocks[2] = Eigen::MatrixXcd::Zero(1, 1);
    const AfElement x(d, 1, blocks);
    const double err = std::abs(block_trace(x, 2, 1) - std::complex<double>(2.0 / 3.0));
    return CheckResult::make("af", "block_trace_pinned",
                             "tau_(2,1)(1, diag(1,0), 0) = 2/3", "-", err, 0.0, err,
                             cfg.tol_exact);
  });

  add_check(out, [&] {
    // Trace field interpolation reproduces deep block traces.
    double err = 0.0;
    for (int t = 0; t < 10; ++t) {
      const int n = 1 + static_cast<int>(rng.integer(4));
      const AfElement x = random_element(d, n, rng, MatrixClass::hermitian);
      const TraceField f = trace_field(x);
      const int deep = n + 4;
      const AfElement y = embed(x, deep);
      const auto& labels = d->labels(deep);
      for (std::int64_t k = 0; k < y.block_count(); ++k) {
        const std::complex<double> direct = block_trace(y, deep, k);
        err = std::max(err,
                       std::abs(direct - f(labels[static_cast<std::size_t>(k)])));
      }
    }
    return CheckResult::make("af", "trace_field_interpolation",
                             "f_x at deep nodes = affine interpolation",
                             "trials=10 depth=+4", err, 0.0, err, cfg.tol_exact);
  });

  add_check(out, [&] {
    double err = 0.0;
    for (int t = 0; t < 100; ++t) {
      const int n = 1 + static_cast<int>(rng.integer(4));
      const AfElement x = random_element(d, n, rng);
      const AfElement y = random_element(d, n, rng);
      const auto& labels = d->labels(n);
      const Fraction r = labels[1 + rng.integer(labels.size() - 2)];
      err = std::max(err, (block_at(x * y, r) - block_at(x, r) * block_at(y, r))
                              .cwiseAbs()
                              .maxCoeff());
      const std::complex<double> via_rep =
          block_at(x, r).trace() / static_cast<double>(r.den());
      err = std::max(err, std::abs(via_rep - trace_at(r, x)));
    }
    return CheckResult::make(
        "af", "path_evaluation",
        "block_at is multiplicative; tau_r = normalized trace of block_at",
        "trials=100 levels<=4", err, 0.0, err, cfg.tol_exact);
  });

  add_check(out, [&] {
    // Conditional expectation: fixes the embedded subalgebra, module map,
    // *-compatible, positive, tower + commuting family.
    double err = 0.0;
    for (int t = 0; t < 15; ++t) {
      const int m = static_cast<int>(rng.integer(3));
      const int n = m + 1 + static_cast<int>(rng.integer(3));
      const AfElement x = random_element(d, n, rng);
      const AfElement a = random_element(d, m, rng);
      const AfElement b = random_element(d, m, rng);
      const AfElement y = random_element(d, m, rng);
      err = std::max(err, conditional_expectation(embed(y, n), m).max_diff(y));
      const AfElement lhs =
          conditional_expectation(embed(a, n) * x * embed(b, n), m);
      const AfElement rhs = a * conditional_expectation(x, m) * b;
      err = std::max(err, lhs.max_diff(rhs));
      err = std::max(err, conditional_expectation(x.adjoint(), m)
                              .max_diff(conditional_expectation(x, m).adjoint()));
      const AfElement p = random_element(d, n, rng, MatrixClass::psd);
      err = std::max(err, -min_eigenvalue(conditional_expectation(p, m)));
      const int mid = m + (n - m) / 2;
      err = std::max(err, conditional_expectation(conditional_expectation(x, mid), m)
                              .max_diff(conditional_expectation(x, m)));
    }
    return CheckResult::make("af", "conditional_expectation",
                             "E_m: UCP module projection; E_m E_n = E_n E_m = E_m",
                             "trials=15 levels<=6", err, 0.0, err, cfg.tol_exact);
  });

  add_check(out, [&] {
    double err = 0.0;
    for (int t = 0; t < 15; ++t) {
      const int n = 1 + static_cast<int>(rng.integer(3));
      const std::int64_t k = rng.integer((std::uint64_t{1} << n) + 1);
      const AfElement one = AfElement::identity(d, n);
      const AfElement ek = block_expectation(one, n, k);
      for (std::int64_t j = 0; j < ek.block_count(); ++j) {
        Eigen::MatrixXcd want =
            Eigen::MatrixXcd::Zero(ek.block(j).rows(), ek.block(j).cols());
        if (j == k) want.setIdentity();
        err = std::max(err, (ek.block(j) - want).cwiseAbs().maxCoeff());
      }
      // Definition of the block traces through E_(n,k), at the element's own
      // level and for elements embedded from it.
      const AfElement x = random_element(d, n, rng);
      const std::complex<double> via_e =
          block_expectation(x, n, k).block(k).trace() /
          static_cast<double>(d->size_of(n, k));
      err = std::max(err, std::abs(via_e - block_trace(x, n, k)));
      const AfElement deep = embed(x, n + 2);
      const std::complex<double> via_e2 =
          block_expectation(deep, n, k).block(k).trace() /
          static_cast<double>(d->size_of(n, k));
      err = std::max(err, std::abs(via_e2 - block_trace(x, n, k)));
      // Commutation with E_n holds by construction; exercise it anyway.
      const AfElement en = conditional_expectation(deep, n);
      err = std::max(err,
                     block_expectation(en, n, k).max_diff(
                         conditional_expectation(block_expectation(deep, n, k), n)));
    }
    return CheckResult::make("af", "block_expectation",
                             "E_(n,k): unit of the summand; traces of embedded "
                             "elements; commutes with E_n",
                             "trials=15 levels<=5", err, 0.0, err, cfg.tol_exact);
  });

  return out;
}

// ---------------------------------------------------------------------------
// center: hat identities and the center expectation.
// ---------------------------------------------------------------------------
std::vector<CheckResult> run_center_suite(const RunConfig& cfg) {
  std::vector<CheckResult> out;
  DiagramPtr d = FareyDiagram::shared_farey(std::max(cfg.max_level + 2, 12));
  Rng rng(cfg.seed ^ 0xce);

  add_check(out, [&] {
    // An element supported on one interior odd summand with unit normalized
    // trace has the matching tent as its trace field: deep block traces
    // against the closed-form tent, five extra levels down.
    double err = 0.0;
    for (int n = 1; n <= 5; ++n) {
      for (std::int64_t k = 1; k < (std::int64_t{1} << n); k += 2) {
        const std::int64_t size = d->size_of(n, k);
        Eigen::MatrixXcd m(size, size);
        for (std::int64_t a = 0; a < size; ++a)
          for (std::int64_t b = 0; b < size; ++b)
            m(a, b) = 0.3 * rng.cnormal();
        // normalize the block trace to one
        m += (std::complex<double>(1.0) - m.trace() / static_cast<double>(size)) *
             Eigen::MatrixXcd::Identity(size, size);
        AfElement x = AfElement::zero(d, n).with_block(k, m);
        const PiecewiseAffineFn tent = hat_function(n, k);
        const int deep = n + 5;
        const AfElement y = embed(x, deep);
        const auto& labels = d->labels(deep);
        for (std::int64_t j = 0; j < y.block_count(); ++j) {
          const std::complex<double> direct = block_trace(y, deep, j);
          err = std::max(err, std::abs(direct - std::complex<double>(tent(
                                                    labels[static_cast<std::size_t>(
                                                        j)]))));
        }
      }
    }
    return CheckResult::make("center", "hat_identity",
                             "f_x = tent(n,k) on odd summands, to level n+5",
                             "n<=5 all odd k", err, 0.0, err, cfg.tol_exact);
  });

  add_check(out, [&] {
    double err = 0.0;
    const AfElement c = center_embed([](double) { return 0.7; }, d, 2);
    err = std::max(err, c.max_diff(0.7 * AfElement::identity(d, 2)));
    const AfElement idf = center_embed([](double t) { return t; }, d, 1);
    err = std::max(err, std::abs(idf.block(0)(0, 0)));
    err = std::max(err, (idf.block(1) - 0.5 * Eigen::MatrixXcd::Identity(2, 2))
                            .cwiseAbs()
                            .maxCoeff());
    err = std::max(err, std::abs(idf.block(2)(0, 0) - 1.0));
    Rng r2(11);
    for (int t = 0; t < 10; ++t) {
      std::vector<double> cf, cg;
      for (int i = 0; i < 4; ++i) {
        cf.push_back(r2.uniform(-1, 1));
        cg.push_back(r2.uniform(-1, 1));
      }
      auto f = [&](double u) { return poly_eval(cf, u); };
      auto g = [&](double u) { return poly_eval(cg, u); };
      const AfElement zf = center_embed(f, d, 3);
      const AfElement zg = center_embed(g, d, 3);
      const AfElement zfg =
          center_embed([&](double u) { return f(u) * g(u); }, d, 3);
      err = std::max(err, zfg.max_diff(zf * zg));
    }
    return CheckResult::make("center", "center_embed",
                             "Z(c) = c 1; Z(t) pinned at level 1; Z(fg) = Z(f) Z(g)",
                             "trials=10", err, 0.0, err, cfg.tol_exact);
  });

  add_check(out, [&] {
    // Center expectation preserves all block traces up to the output level.
    double err = 0.0;
    const int top = std::min(cfg.max_level, 6);
    for (int t = 0; t < 10; ++t) {
      const int m = 1 + static_cast<int>(rng.integer(3));
      const int outl = std::max(m, top);
      const AfElement x = random_element(d, m, rng);
      const AfElement ez = center_expectation(x, outl);
      for (int n = 0; n <= outl; ++n) {
        for (std::int64_t k = 0; k <= (std::int64_t{1} << n); ++k)
          err = std::max(err,
                         std::abs(block_trace(ez, n, k) - block_trace(x, n, k)));
      }
    }
    return CheckResult::make("center", "center_expectation_traces",
                             "tau_(n,k)(E_Z(x)) = tau_(n,k)(x), n <= N",
                             fmt("trials=10 N<=%d", top), err, 0.0, err,
                             cfg.tol_exact);
  });

  add_check(out, [&] {
    double err = 0.0;
    Rng r2(cfg.seed ^ 0x2e);
    for (int t = 0; t < 10; ++t) {
      std::vector<double> c;
      for (int i = 0; i < 5; ++i) c.push_back(r2.uniform(-1, 1));
      const int n = 2 + static_cast<int>(r2.integer(3));
      const AfElement z = center_embed([&](double u) { return poly_eval(c, u); }, d, n);
      err = std::max(err, center_expectation(z, n).max_diff(z));
    }
    return CheckResult::make("center", "center_expectation_fixes_center",
                             "E_Z(Z(f)) = Z(f) at the element's level", "trials=10",
                             err, 0.0, err, cfg.tol_exact);
  });

  add_check(out, [&] {
    std::vector<Eigen::MatrixXcd> blocks(3);
    blocks[0] = Eigen::MatrixXcd::Zero(1, 1);
    blocks[1] = Eigen::MatrixXcd::Identity(2, 2);
    blocks[2] = Eigen::MatrixXcd::Zero(1, 1);
    const AfElement x(d, 1, blocks);
    const AfElement ez = center_expectation(x, 2);
    double err = std::abs(ez.block(0)(0, 0));
    err = std::max(err, (ez.block(1) - (2.0 / 3.0) * Eigen::MatrixXcd::Identity(3, 3))
                            .cwiseAbs()
                            .maxCoeff());
    err = std::max(err,
                   (ez.block(2) - Eigen::MatrixXcd::Identity(2, 2)).cwiseAbs().maxCoeff());
    err = std::max(err, (ez.block(3) - (2.0 / 3.0) * Eigen::MatrixXcd::Identity(3, 3))
                            .cwiseAbs()
                            .maxCoeff());
    err = std::max(err, std::abs(ez.block(4)(0, 0)));
    return CheckResult::make("center", "center_expectation_pinned",
                             "E_Z(0,1_2,0) at N=2: (0, 2/3, 1, 2/3, 0) scalars", "-",
                             err, 0.0, err, cfg.tol_exact);
  });

  add_check(out, [&] {
    // tau_theta basics: node values, unitality, interpolation at an
    // irrational point against the bracketing nodes.
    double err = 0.0;
    const AfElement x = hermitize(random_element(d, 3, rng));
    const TraceField f = trace_field(x);
    const auto& labels = d->labels(3);
    for (std::size_t k = 0; k < labels.size(); ++k)
      err = std::max(err, std::abs(trace_at(labels[k], x) -
                                   block_trace(x, 3, static_cast<std::int64_t>(k))));
    err = std::max(err, std::abs(trace_at(0.25, AfElement::identity(d, 3)) - 1.0));
    const double theta = 1.0 / std::sqrt(2.0);
    // Bracketing level-3 nodes of 1/sqrt(2) are 2/3 and 3/4.
    const double a = 2.0 / 3.0, b = 3.0 / 4.0;
    const double t = (theta - a) / (b - a);
    const std::complex<double> interp =
        f(Fraction(2, 3)) + t * (f(Fraction(3, 4)) - f(Fraction(2, 3)));
    err = std::max(err, std::abs(trace_at(theta, x) - interp));
    return CheckResult::make("center", "point_trace",
                             "tau at nodes = block traces; tau(1) = 1; interpolation",
                             "level=3", err, 0.0, err, cfg.tol_exact);
  });

  return out;
}

// ---------------------------------------------------------------------------
// branch: quotient diagrams and the branch maps.
// ---------------------------------------------------------------------------
std::vector<CheckResult> run_branch_suite(const RunConfig& cfg) {
  std::vector<CheckResult> out;
  DiagramPtr d = FareyDiagram::shared_farey(std::max(cfg.max_level + 2, 12));
  Rng rng(cfg.seed ^ 0xb4a);
  const int smax = std::max(1, cfg.max_branch);

  add_check(out, [&] {
    // The branch-2 quotient diagram rows, pinned.
    DiagramPtr q2 = FareyDiagram::shared_quotient(2, 4);
    std::int64_t bad = 0;
    auto expect = [&](int level, const std::vector<Fraction>& want) {
      if (q2->labels(level) != want) ++bad;
      for (std::size_t k = 0; k < want.size(); ++k)
        if (q2->size_of(level, static_cast<std::int64_t>(k)) != want[k].den()) ++bad;
    };
    expect(0, {Fraction(1, 3), Fraction(1, 2)});
    expect(1, {Fraction(1, 3), Fraction(2, 5), Fraction(1, 2)});
    expect(2, {Fraction(1, 3), Fraction(3, 8), Fraction(2, 5), Fraction(3, 7),
               Fraction(1, 2)});
    expect(3, {Fraction(1, 3), Fraction(4, 11), Fraction(3, 8), Fraction(5, 13),
               Fraction(2, 5), Fraction(5, 12), Fraction(3, 7), Fraction(4, 9),
               Fraction(1, 2)});
    return CheckResult::make("branch", "quotient_rows_pinned",
                             "branch-2 quotient labels/sizes, levels 0..3", "-",
                             static_cast<double>(bad), 0.0, static_cast<double>(bad),
                             0.0);
  });

  add_check(out, [&] {
    double err = 0.0;
    for (int s = 1; s <= smax; ++s) {
      for (int t = 0; t < 8; ++t) {
        const int m = 1 + static_cast<int>(rng.integer(3));
        const AfElement x = random_element(d, m, rng);
        const AfElement y = random_element(d, m, rng);
        err = std::max(err, quotient_inflate(x * y, s).max_diff(
                                quotient_inflate(x, s) * quotient_inflate(y, s)));
        err = std::max(err, quotient_inflate(x.adjoint(), s)
                                .max_diff(quotient_inflate(x, s).adjoint()));
        err = std::max(err, quotient_average(quotient_inflate(x, s)).max_diff(x));
        // normalized block trace of sigma~(1) is sq/(p+sq)
        const AfElement one = quotient_inflate(AfElement::identity(d, m), s);
        for (std::int64_t j = 0; j < one.block_count(); ++j) {
          const auto shape = one.diagram().corners(m, j);
          const double want =
              static_cast<double>(shape.copies * shape.q) /
              static_cast<double>(shape.copies * shape.q + shape.p);
          err = std::max(err, std::abs(one.block(j).trace().real() /
                                           static_cast<double>(one.block(j).rows()) -
                                       want));
        }
      }
    }
    return CheckResult::make("branch", "inflate_average",
                             "sigma~ is a *-monomorphism; V~ o sigma~ = id; "
                             "trace of sigma~(1) = sq/(p+sq)",
                             fmt("s<=%d", smax), err, 0.0, err, cfg.tol_exact);
  });

  add_check(out, [&] {
    double err = 0.0;
    for (int s = 1; s <= smax; ++s) {
      for (int t = 0; t < 8; ++t) {
        const int n = s + 1 + static_cast<int>(rng.integer(3));
        const AfElement x = random_element(d, n, rng);
        const AfElement y = random_element(d, n, rng);
        err = std::max(err, quotient_project(x * y, s).max_diff(
                                quotient_project(x, s) * quotient_project(y, s)));
        const AfElement qone = quotient_project(AfElement::identity(d, n), s);
        err = std::max(err, qone.max_diff(AfElement::identity(qone.diagram_ptr(),
                                                              qone.level())));
      }
    }
    return CheckResult::make("branch", "project_homomorphism",
                             "pi_s is a unital *-homomorphism", fmt("s<=%d", smax),
                             err, 0.0, err, cfg.tol_exact);
  });

  add_check(out, [&] {
    // Commuting squares: embedding commutes with inflate and with average.
    double err = 0.0;
    for (int s = 1; s <= smax; ++s) {
      for (int t = 0; t < 6; ++t) {
        const int m = 1 + static_cast<int>(rng.integer(3));
        const AfElement x = random_element(d, m, rng);
        err = std::max(err, embed(quotient_inflate(x, s), m + 1)
                                .max_diff(quotient_inflate(embed(x, m + 1), s)));
        DiagramPtr qd = FareyDiagram::shared_quotient(s, m + 2);
        const AfElement y = random_element(qd, m, rng);
        err = std::max(err, embed(quotient_average(y), m + 1)
                                .max_diff(quotient_average(embed(y, m + 1))));
      }
    }
    return CheckResult::make("branch", "commuting_squares",
                             "embed o sigma~ = sigma~ o embed; embed o V~ = V~ o embed",
                             fmt("s<=%d", smax), err, 0.0, err, 0.0);
  });

  add_check(out, [&] {
    double err = 0.0;
    for (int s = 1; s <= smax; ++s) {
      for (int t = 0; t < 6; ++t) {
        const int m = 1 + static_cast<int>(rng.integer(3));
        DiagramPtr qd = FareyDiagram::shared_quotient(s, m + 1);
        const AfElement y = random_element(qd, m, rng);
        err = std::max(err, quotient_project(quotient_lift(y), s).max_diff(y));
        const AfElement qone = AfElement::identity(qd, m);
        err = std::max(err, quotient_lift(qone).max_diff(
                                AfElement::identity(d, m + s)));
        const AfElement psd = random_element(qd, m, rng, MatrixClass::psd);
        err = std::max(err, -min_eigenvalue(quotient_lift(psd)));
        err = std::max(err, -min_eigenvalue(quotient_lift(psd, LiftFill::edge_mean)));
      }
      // tau_theta(H_s(1)) = s theta at window-interior nodes.
      const int m = 2;
      const AfElement h1 = branch_expand(AfElement::identity(d, m), s);
      for (const Fraction& u : d->labels(m)) {
        if (u.is_zero() || u.is_one()) continue;
        const Fraction theta = branch_map(s, u);
        const std::complex<double> got = trace_at(theta, h1);
        err = std::max(err, std::abs(got - std::complex<double>(s * theta.value())));
      }
    }
    return CheckResult::make("branch", "lift_section",
                             "pi_s o lift = id; lift is UCP; tau(H_s(1)) = s theta",
                             fmt("s<=%d", smax), err, 0.0, err, cfg.tol_exact);
  });

  add_check(out, [&] {
    double err = 0.0;
    for (int s = 1; s <= smax; ++s) {
      for (int t = 0; t < 6; ++t) {
        const int m = 1 + static_cast<int>(rng.integer(3));  // 1..3
        const AfElement x = random_element(d, m, rng);
        const AfElement y = random_element(d, m, rng);
        err = std::max(err, branch_compress(branch_expand(x, s), s).max_diff(x));
        err = std::max(err, branch_compress(branch_expand(x, s, LiftFill::edge_mean), s)
                                .max_diff(x));
        // module identity: G_s(x' H_s(y)) = G_s(x') y for x' at level m+s
        const AfElement xup = random_element(d, m + s, rng);
        err = std::max(err, branch_compress(xup * branch_expand(y, s), s)
                                .max_diff(branch_compress(xup, s) * y));
      }
    }
    return CheckResult::make("branch", "compress_expand",
                             "G_s H_s = id; G_s(x H_s(y)) = G_s(x) y",
                             fmt("s<=%d levels<=4", smax), err, 0.0, err,
                             cfg.tol_exact);
  });

  add_check(out, [&] {
    double err = 0.0;
    Rng r2(cfg.seed ^ 0x6f);
    for (int s = 1; s <= smax; ++s) {
      std::vector<double> c;
      for (int i = 0; i < 5; ++i) c.push_back(r2.uniform(-1, 1));
      auto f = [&](double u) { return poly_eval(c, u); };
      const int N = s + 3;
      const AfElement zf = center_embed(f, d, N);
      const AfElement lhs = branch_compress(zf, s);
      const AfElement rhs = center_embed(
          [&](double u) { return f(1.0 / (u + s)); }, d, N - s);
      err = std::max(err, lhs.max_diff(rhs));
    }
    return CheckResult::make("branch", "compress_center",
                             "G_s(Z(f)) = Z(f o g_s)", fmt("s<=%d", smax), err, 0.0,
                             err, cfg.tol_exact);
  });

  add_check(out, [&] {
    // Trace relation at every window-interior node down to a fixed depth:
    // quotient trace of sigma~(x) pi(y) at g_s(u) vs s g_s(u) tau_u(x G_s(y)).
    double err = 0.0;
    const int deep = 9;
    for (int s = 1; s <= smax; ++s) {
      const int m = deep - s;
      const AfElement x = embed(random_element(d, 3, rng), m);
      const AfElement yup = random_element(d, deep, rng);
      const AfElement lhs_q = quotient_inflate(x, s) * quotient_project(yup, s);
      const AfElement rhs_a = x * branch_compress(yup, s);
      const auto& labels = d->labels(m);
      for (std::size_t k = 1; k + 1 < labels.size(); ++k) {
        const Fraction& u = labels[k];
        const Fraction gu = branch_map(s, u);
        const std::int64_t qi = lhs_q.diagram().index_of(m, gu);
        const std::complex<double> lhs =
            lhs_q.block(qi).trace() / static_cast<double>(lhs_q.block(qi).rows());
        const std::complex<double> rhs =
            static_cast<double>(s) * gu.value() *
            block_trace(rhs_a, m, static_cast<std::int64_t>(k));
        err = std::max(err, std::abs(lhs - rhs));
      }
    }
    return CheckResult::make(
        "branch", "trace_relation",
        "tau_{g_s(u)}(H_s(x) y) = s g_s(u) tau_u(x G_s(y)), window-interior u",
        fmt("s<=%d depth=%d", smax, deep), err, 0.0, err, cfg.tol_exact);
  });

  add_check(out, [&] {
    // Truncated noncommutative Gauss map: unital within the exact tail,
    // agrees with the scalar transfer operator on center elements, preserves
    // positivity.
    double err = 0.0;
    const int S = std::min(4, smax);
    const int level = 2;
    const int N = level + S;
    const AfElement one = AfElement::identity(d, level);
    const auto gone = nc_gauss_map(one, S, N);
    const double tail_dev =
        (gone.value - AfElement::identity(d, N - S)).op_norm();
    if (tail_dev > gone.tail_bound) err = std::max(err, tail_dev - gone.tail_bound);
    const std::vector<double> c = {0.3, -0.4, 0.8, 0.1};
    auto f = [&](double u) { return poly_eval(c, u); };
    const auto gz = nc_gauss_center(f, 1.6, S, level);
    const auto& labels = d->labels(level);
    for (std::size_t k = 0; k < labels.size(); ++k) {
      const double want =
          apply_transfer(f, labels[k].value(), S, 1.0, TailMode::truncated).value;
      err = std::max(err,
                     std::abs(block_trace(gz.value, level,
                                          static_cast<std::int64_t>(k)) -
                              std::complex<double>(want)));
    }
    const AfElement psd = random_element(d, level, rng, MatrixClass::psd);
    const auto gp = nc_gauss_map(psd, S, N);
    err = std::max(err, std::max(0.0, -min_eigenvalue(gp.value) - 1e-10));
    return CheckResult::make("branch", "nc_gauss_truncation",
                             "sum G_s(.) f_s: unital within tail, restricts to the "
                             "transfer operator, positive",
                             fmt("S=%d level=%d", S, level), err, 0.0, err,
                             cfg.tol_exact);
  });

  return out;
}

// ---------------------------------------------------------------------------
// ideal: vanishing loci map through the branch maps.
// ---------------------------------------------------------------------------
std::vector<CheckResult> run_ideal_suite(const RunConfig& cfg) {
  std::vector<CheckResult> out;
  DiagramPtr d = FareyDiagram::shared_farey(std::max(cfg.max_level + 2, 12));
  Rng rng(cfg.seed ^ 0x1dea);
  const int smax = std::max(1, cfg.max_branch);

  add_check(out, [&] {
    double err = 0.0;
    const std::vector<Fraction> thetas = {Fraction(1, 2), Fraction(1, 3),
                                          Fraction(2, 5)};
    int trials_done = 0;
    for (int s = 1; s <= smax; ++s) {
      for (const Fraction& theta : thetas) {
        const Fraction image = branch_map(s, theta);
        const NodeIndex at = locate(image);
        const int L = std::max(at.level, s + 2);
        const std::int64_t index = at.index << (L - at.level);
        for (int t = 0; t < 50; ++t) {
          AfElement x = random_element(d, L, rng);
          x = x.with_block(index, Eigen::MatrixXcd::Zero(x.block(index).rows(),
                                                         x.block(index).cols()));
          const AfElement gx = branch_compress(x, s);
          const std::complex<double> residual =
              trace_at(theta, gx.adjoint() * gx);
          err = std::max(err, std::abs(residual));
          ++trials_done;
        }
      }
    }
    return CheckResult::make("ideal", "forward_inclusion",
                             "x vanishing at g_s(theta) => G_s(x) vanishes at theta",
                             fmt("s<=%d trials=%d", smax, trials_done), err, 0.0, err,
                             1e-10);
  });

  add_check(out, [&] {
    double err = 0.0;
    for (int s = 1; s <= smax; ++s) {
      const Fraction theta(1, 2);
      const NodeIndex at = locate(theta);
      for (int t = 0; t < 20; ++t) {
        const int m = std::max(at.level, 2);
        const std::int64_t index = at.index << (m - at.level);
        AfElement y = random_element(d, m, rng);
        y = y.with_block(index, Eigen::MatrixXcd::Zero(y.block(index).rows(),
                                                       y.block(index).cols()));
        const AfElement hy = branch_expand(y, s);
        const std::complex<double> vanish =
            trace_at(branch_map(s, theta), hy.adjoint() * hy);
        err = std::max(err, std::abs(vanish));
        err = std::max(err, branch_compress(hy, s).max_diff(y));
      }
    }
    return CheckResult::make("ideal", "converse_inclusion",
                             "y vanishing at theta => H_s(y) vanishes at g_s(theta), "
                             "G_s H_s(y) = y",
                             fmt("s<=%d trials=20", smax), err, 0.0, err, 1e-10);
  });

  return out;
}

// ---------------------------------------------------------------------------
// transfer: the scalar operator.
// ---------------------------------------------------------------------------

namespace {

/// One sweep computing int (transfer u^d) dmu for d = 0..max_deg with the
/// completed tail (f(0) = 1 only for d = 0).
std::vector<double> transfer_monomial_integrals(int max_deg, int S,
                                                const QuadratureSpec& spec) {
  const GaussLegendre& gl = gauss_legendre(spec.points);
  const FareyLevel panels = farey_level(spec.farey_level);
  std::vector<long double> acc(static_cast<std::size_t>(max_deg + 1), 0.0L);
  for (std::size_t i = 0; i + 1 < panels.nodes.size(); ++i) {
    const double a = panels.nodes[i].value();
    const double b = panels.nodes[i + 1].value();
    const double mid = 0.5 * (a + b), rad = 0.5 * (b - a);
    for (std::size_t p = 0; p < gl.nodes.size(); ++p) {
      const double t = mid + rad * gl.nodes[p];
      const double wmu = rad * gl.weights[p] / (kLn2 * (1.0 + t));
      std::vector<long double> pw(static_cast<std::size_t>(max_deg + 1), 0.0L);
      for (int s = 1; s <= S; ++s) {
        const double y = 1.0 / (t + s);
        const double fs = (t + 1.0) * y / (t + s + 1.0);
        long double term = fs;
        pw[0] += term;
        for (int deg = 1; deg <= max_deg; ++deg) {
          term *= y;
          pw[static_cast<std::size_t>(deg)] += term;
        }
      }
      pw[0] += branch_weight_tail(S, t);
      for (int deg = 0; deg <= max_deg; ++deg)
        acc[static_cast<std::size_t>(deg)] += wmu * pw[static_cast<std::size_t>(deg)];
    }
  }
  std::vector<double> outv;
  outv.reserve(acc.size());
  for (long double v : acc) outv.push_back(static_cast<double>(v));
  return outv;
}

}  // namespace

std::vector<CheckResult> run_transfer_suite(const RunConfig& cfg) {
  std::vector<CheckResult> out;
  const QuadratureSpec spec{cfg.quad_level, cfg.quad_points};

  add_check(out, [&] {
    double err = 0.0;
    auto onef = [](double) { return 1.0; };
    for (int i = 0; i <= 100; ++i) {
      const double t = i / 100.0;
      const auto r = apply_transfer(onef, t, 10000, 1.0, TailMode::truncated);
      err = std::max(err, std::abs((1.0 - r.value) - branch_weight_tail(10000, t)));
      err = std::max(err, std::abs(r.tail_bound - branch_weight_tail(10000, t)));
    }
    const auto single = apply_transfer([](double u) { return u; }, 0.0, 1);
    err = std::max(err, std::abs(single.value - 0.5));
    return CheckResult::make("transfer", "unitality_tail",
                             "transfer(1) = 1 - (t+1)/(t+S+1) exactly",
                             "S=10000 grid=101", err, 0.0, err, 1e-12);
  });

  add_check(out, [&] {
    double err = 0.0;
    auto idf = [](double u) { return u; };
    err = std::max(err, std::abs(apply_composition(idf, 0.4) - 0.5));
    err = std::max(err, std::abs(apply_composition([](double) { return 1.0; }, 0.77) -
                                 1.0));
    return CheckResult::make("transfer", "composition_values",
                             "V_G: f o G at pinned points", "-", err, 0.0, err,
                             1e-12);
  });

  add_check(out, [&] {
    const int max_deg = 6;
    const auto rhs = transfer_monomial_integrals(max_deg, cfg.truncation, spec);
    double err = 0.0;
    double worst_lhs = 0.0, worst_rhs = 0.0;
    for (int deg = 0; deg <= max_deg; ++deg) {
      const double lhs =
          integrate_mu([deg](double u) { return std::pow(u, deg); }, spec);
      const double diff = std::abs(lhs - rhs[static_cast<std::size_t>(deg)]);
      if (diff > err) {
        err = diff;
        worst_lhs = lhs;
        worst_rhs = rhs[static_cast<std::size_t>(deg)];
      }
    }
    return CheckResult::make("transfer", "mu_invariance_monomials",
                             "int u^d dmu = int (transfer u^d) dmu, d <= 6",
                             fmt("S=%d", cfg.truncation), worst_lhs, worst_rhs, err,
                             cfg.tol_quad);
  });

  add_check(out, [&] {
    // Closed forms: int 1 dmu = 1 and int t dmu = 1/ln2 - 1.
    const auto rhs = transfer_monomial_integrals(1, cfg.truncation, spec);
    double err = std::abs(rhs[0] - 1.0);
    err = std::max(err, std::abs(rhs[1] - (1.0 / kLn2 - 1.0)));
    return CheckResult::make("transfer", "mu_invariance_closed_forms",
                             "transfer integrals against 1 and 1/ln2 - 1",
                             fmt("S=%d", cfg.truncation), rhs[1], 1.0 / kLn2 - 1.0,
                             err, cfg.tol_quad);
  });

  add_check(out, [&] {
    double err = 0.0;
    for (int deg = 0; deg <= 6; ++deg) {
      const CheckResult c = composition_isometry_check(
          [deg](double u) { return std::pow(u, deg); }, fmt("u^%d", deg), 60, spec,
          cfg.tol_quad);
      err = std::max(err, c.abs_err);
    }
    return CheckResult::make("transfer", "composition_isometry",
                             "int (f o G)^2 dmu = int f^2 dmu, monomials d <= 6",
                             "branches=60", err, 0.0, err, cfg.tol_quad);
  });

  add_check(out, [&] {
    Rng rng(cfg.seed ^ 0xc0);
    double err = 0.0;
    for (int t = 0; t < 3; ++t) {
      std::vector<double> cf, cg, ch;
      for (int i = 0; i < 4; ++i) {
        cf.push_back(rng.uniform(-1, 1));
        cg.push_back(rng.uniform(-1, 1));
        ch.push_back(rng.uniform(-1, 1));
      }
      const CheckResult c = conjugation_check(
          [&](double u) { return poly_eval(cf, u); },
          [&](double u) { return poly_eval(cg, u); },
          [&](double u) { return poly_eval(ch, u); }, fmt("random cubics #%d", t),
          cfg.truncation, spec, cfg.tol_weak);
      err = std::max(err, c.abs_err);
    }
    return CheckResult::make("transfer", "conjugation_weak",
                             "int f (g o G)(h o G) dmu = int (transfer f) g h dmu",
                             fmt("S=%d trials=3", cfg.truncation), err, 0.0, err,
                             cfg.tol_weak);
  });

  return out;
}

std::vector<CheckResult> run_gkw_suite(const RunConfig& cfg) {
  std::vector<CheckResult> out;

  add_check(out, [&] {
    const GkwResult r = gkw_estimate(cfg.gkw_grid);
    return CheckResult::make("gkw", "leading_eigenvalue",
                             "transfer discretization has leading eigenpair (1, 1)",
                             fmt("grid=%d", cfg.gkw_grid), r.lambda1, 1.0,
                             std::max(std::abs(r.lambda1 - 1.0), r.lambda1_residual),
                             1e-8);
  });

  add_check(out, [&] {
    const GkwResult r = gkw_estimate(cfg.gkw_grid);
    return CheckResult::make("gkw", "subdominant_eigenvalue",
                             "|lambda_2| = 0.3036630029 (Gauss-Kuzmin-Wirsing)",
                             fmt("grid=%d", cfg.gkw_grid), r.lambda2, kGkwReference,
                             std::abs(r.lambda2 - kGkwReference), 1e-4);
  });

  add_check(out, [&] {
    const int g = std::max(200, cfg.gkw_grid / 4);
    const GkwResult a = gkw_estimate(g);
    const GkwResult b = gkw_estimate(2 * g);
    const GkwResult c = gkw_estimate(4 * g);
    const double d1 = std::abs(b.lambda2 - a.lambda2);
    const double d2 = std::abs(c.lambda2 - b.lambda2);
    const double err = std::max(d2, std::max(0.0, d2 - d1));
    return CheckResult::make("gkw", "grid_refinement",
                             "lambda_2 stabilizes as the grid doubles",
                             fmt("grids=%d,%d,%d", g, 2 * g, 4 * g), d1, d2, err,
                             1e-4);
  });

  return out;
}

// ---------------------------------------------------------------------------
// states: point states, integrated states, GNS forms, branch identities.
// ---------------------------------------------------------------------------
std::vector<CheckResult> run_states_suite(const RunConfig& cfg) {
  std::vector<CheckResult> out;
  DiagramPtr d = FareyDiagram::shared_farey(std::max(cfg.max_level + 2, 12));
  Rng rng(cfg.seed ^ 0x57a7e5);
  const QuadratureSpec spec{cfg.quad_level, cfg.quad_points};
  const int smax = std::max(1, cfg.max_branch);

  add_check(out, [&] {
    double err = 0.0;
    const AfElement one = AfElement::identity(d, 2);
    err = std::max(err, std::abs(tau_state(one) - std::complex<double>(1.0)));
    const auto phi1 = phi_state(one, 24, spec);
    const double expect = 1.0 - std::log2(26.0 / 25.0);
    err = std::max(err, std::abs(phi1.value - std::complex<double>(expect)));
    // tau on a center element is the Gauss integral of its function.
    const AfElement z = center_embed([](double u) { return u; }, d, 6);
    err = std::max(err, std::abs(tau_state(z) - std::complex<double>(1.0 / kLn2 - 1.0)));
    return CheckResult::make("states", "state_normalization",
                             "tau(1) = 1; phi_S(1) = 1 - log2((S+2)/(S+1)); "
                             "tau(Z(t)) = 1/ln2 - 1",
                             "S=24", err, 0.0, err, 1e-9);
  });

  add_check(out, [&] {
    // phi against a central factor, at a window node the center embedding
    // resolves: g_s(1/2) first appears at level s+1, so Z(f) must live there.
    double err = 0.0;
    for (int s = 1; s <= smax; ++s) {
      const Fraction u(1, 2);
      const Fraction theta = branch_map(s, u);
      const int level = s + 1;
      const AfElement x = random_element(d, level, rng);
      const AfElement zf =
          center_embed([](double t) { return 0.25 + t * t; }, d, level);
      const std::complex<double> lhs = phi_point(theta, zf * x);
      const std::complex<double> rhs =
          (0.25 + theta.value() * theta.value()) * phi_point(theta, x);
      err = std::max(err, std::abs(lhs - rhs));
    }
    return CheckResult::make("states", "phi_central_module",
                             "phi_theta(f x) = f(theta) phi_theta(x)",
                             fmt("s<=%d", smax), err, 0.0, err, 1e-10);
  });

  add_check(out, [&] {
    double err = 0.0;
    const State tau{State::Kind::tau_integrated, 0.0, 24, spec};
    const AfElement one = AfElement::identity(d, 3);
    err = std::max(err, std::abs(gns_inner(tau, one, one) - std::complex<double>(1.0)));
    double min_norm = 0.0;
    for (int t = 0; t < 10; ++t) {
      const AfElement x = random_element(d, 3, rng);
      const AfElement y = random_element(d, 3, rng);
      const std::complex<double> xx = gns_inner(tau, x, x);
      const std::complex<double> yy = gns_inner(tau, y, y);
      const std::complex<double> xy = gns_inner(tau, x, y);
      min_norm = std::min(min_norm, xx.real());
      err = std::max(err, std::abs(xx.imag()));
      const double cs = std::norm(xy) - xx.real() * yy.real();
      err = std::max(err, std::max(0.0, cs));
      // traciality of tau
      err = std::max(err,
                     std::abs(tau_state(x * y) - tau_state(y * x)));
    }
    err = std::max(err, -min_norm);
    return CheckResult::make("states", "gns_form",
                             "<.,.>_tau: unital, PSD, Cauchy-Schwarz; tau tracial",
                             "trials=10 level=3", err, 0.0, err, 1e-10);
  });

  add_check(out, [&] {
    double err = 0.0;
    for (int s = 1; s <= smax; ++s) {
      const AfElement one = AfElement::identity(d, 2);
      const CheckResult c = gauss_state_branch_check(one, s, spec, cfg.tol_weak);
      // both sides must equal mu(window_s) = log2((s+1)^2 / (s(s+2)))
      const double want =
          std::log2((s + 1.0) * (s + 1.0) / (static_cast<double>(s) * (s + 2.0)));
      err = std::max(err, std::abs(c.lhs - want));
      err = std::max(err, std::abs(c.rhs - want));
      err = std::max(err, c.abs_err);
    }
    return CheckResult::make("states", "window_mass",
                             "branch term of phi(1): both sides = mu(window_s)",
                             fmt("s<=%d", smax), err, 0.0, err, cfg.tol_quad);
  });

  add_check(out, [&] {
    double err = 0.0;
    for (int s = 1; s <= smax; ++s) {
      for (int t = 0; t < 2; ++t) {
        const AfElement x = random_element(d, 2, rng);
        err = std::max(err, isometry_branch_check(x, s, spec, cfg.tol_weak).abs_err);
      }
      const AfElement z = center_embed([](double u) { return 1.0 - 0.5 * u; }, d, 2);
      err = std::max(err, isometry_branch_check(z, s, spec, cfg.tol_weak).abs_err);
    }
    return CheckResult::make("states", "isometry_branches",
                             "branch isometry identity for V~_G",
                             fmt("s<=%d trials=3", smax), err, 0.0, err,
                             cfg.tol_weak);
  });

  add_check(out, [&] {
    double err = 0.0;
    for (int s = 1; s <= smax; ++s) {
      for (int t = 0; t < 2; ++t) {
        const AfElement y = random_element(d, 2, rng);
        const AfElement z = random_element(d, 2, rng);
        const AfElement x = random_element(d, 2 + s, rng);
        err = std::max(err,
                       intertwine_branch_check(x, y, z, s, spec, cfg.tol_weak).abs_err);
      }
    }
    return CheckResult::make("states", "intertwine_branches",
                             "branch intertwining identity for V~_G* pi_phi V~_G",
                             fmt("s<=%d trials=2", smax), err, 0.0, err,
                             cfg.tol_weak);
  });

  add_check(out, [&] {
    double err = 0.0;
    for (int s = 1; s <= smax; ++s) {
      for (int t = 0; t < 2; ++t) {
        const AfElement x = random_element(d, 3, rng);
        err = std::max(err,
                       gauss_state_branch_check(x, s, spec, cfg.tol_weak).abs_err);
      }
    }
    return CheckResult::make("states", "gauss_state_branches",
                             "branch terms of phi(x) = tau(nc-Gauss(x))",
                             fmt("s<=%d trials=2", smax), err, 0.0, err,
                             cfg.tol_weak);
  });

  add_check(out, [&] {
    double err = 0.0;
    Rng r2(cfg.seed ^ 0x3e57);
    for (int s = 1; s <= smax; ++s) {
      std::vector<double> c;
      for (int i = 0; i < 5; ++i) c.push_back(r2.uniform(-1, 1));
      err = std::max(err, restriction_branch_check(
                              [&](double u) { return poly_eval(c, u); },
                              [](double) { return 1.0; }, s, 4, spec, cfg.tol_quad)
                              .abs_err);
      err = std::max(err, restriction_branch_check(
                              [&](double u) { return poly_eval(c, u); },
                              [](double th) { return 1.0 + th; }, s, 4, spec,
                              cfg.tol_quad)
                              .abs_err);
    }
    // pinned closed form: f = id, test = 1, s = 1 gives 2 log2(3/2) - 1.
    const CheckResult pinned = restriction_branch_check(
        [](double u) { return u; }, [](double) { return 1.0; }, 1, 4, spec,
        cfg.tol_quad);
    const double want = 2.0 * std::log2(1.5) - 1.0;
    err = std::max(err, std::abs(pinned.lhs - want));
    err = std::max(err, std::abs(pinned.rhs - want));
    return CheckResult::make("states", "restriction_branches",
                             "lifted center functions pair as f(1/theta - s)",
                             fmt("s<=%d deg<=4", smax), err, 0.0, err, cfg.tol_quad);
  });

  add_check(out, [&] {
    // Branch sums: phi_S(x) and tau(nc-Gauss_S(x)) share the same missing
    // branches, so they agree inside the exact tail bound 2||x||/(S+2) (the
    // residue is center-weight quantization at the output level, far
    // smaller); successive phi truncations drift by at most the tail.
    double err = 0.0;
    const int S = std::min(5, smax + 1);
    const AfElement x = hermitize(random_element(d, 2, rng));
    const double tail = 2.0 * x.op_norm() / (S + 2.0);
    const auto phis = phi_state(x, S, spec);
    const auto g = nc_gauss_map(x, S, x.level() + S);
    const std::complex<double> tau_g = tau_state(g.value);
    err = std::max(err, std::max(0.0, std::abs(phis.value - tau_g) - tail));
    const auto phis2 = phi_state(x, S + 2, spec);
    const double drift = std::abs(phis2.value - phis.value);
    err = std::max(err, std::max(0.0, drift - phis.tail_bound));
    err = std::max(err, std::max(0.0, phis.tail_bound - tail));
    return CheckResult::make("states", "branch_sums",
                             "sum of branch terms = tau(nc-Gauss(x)) within the "
                             "exact tail bound",
                             fmt("S=%d", S), std::abs(phis.value - tau_g), tail, err,
                             cfg.tol_weak);
  });

  return out;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {
      "farey", "measure", "af", "center", "branch", "ideal", "transfer", "gkw",
      "states"};
  return names;
}

Report run_suites(const RunConfig& cfg, const std::vector<std::string>& suites) {
  using Runner = std::vector<CheckResult> (*)(const RunConfig&);
  static const std::map<std::string, Runner> runners = {
      {"farey", run_farey_suite},     {"measure", run_measure_suite},
      {"af", run_af_suite},           {"center", run_center_suite},
      {"branch", run_branch_suite},   {"ideal", run_ideal_suite},
      {"transfer", run_transfer_suite}, {"gkw", run_gkw_suite},
      {"states", run_states_suite}};
  Report report;
  report.config = cfg;
  const std::vector<std::string>& todo = suites.empty() ? suite_names() : suites;
  for (const std::string& name : todo) {
    const auto it = runners.find(name);
    if (it == runners.end())
      throw std::invalid_argument("unknown suite: " + name);
    std::vector<CheckResult> results;
    try {
      results = it->second(cfg);
    } catch (const resource_error& e) {
      results.push_back(CheckResult::skipped_check(name, "suite", "-", "-", e.what()));
    } catch (const std::length_error& e) {
      results.push_back(CheckResult::skipped_check(name, "suite", "-", "-", e.what()));
    }
    for (CheckResult& c : results) report.checks.push_back(std::move(c));
  }
  report.sort();
  return report;
}

}  // namespace ncgauss
