#include "ncgauss/states.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ncgauss/farey.hpp"

namespace ncgauss {

namespace {

constexpr double kLn2 = 0.6931471805599453094172321214581766;

/// sigma~_s(1) * pi_s(x) as a quotient element at the given quotient level:
/// exactly the window data entering phi_theta, independent of any lift fill.
AfElement phi_window_product(const AfElement& x, int s, int qlevel) {
  const AfElement one = AfElement::identity(FareyDiagram::shared_farey(qlevel), qlevel);
  return quotient_inflate(one, s) * quotient_project_embedded(x, s, qlevel);
}

std::complex<double> integrate_mu_c(const std::function<std::complex<double>(double)>& f,
                                    const QuadratureSpec& spec) {
  const GaussLegendre& gl = gauss_legendre(spec.points);
  const FareyLevel panels = farey_level(spec.farey_level);
  std::complex<double> total = 0.0;
  for (std::size_t i = 0; i + 1 < panels.nodes.size(); ++i) {
    const double a = panels.nodes[i].value();
    const double b = panels.nodes[i + 1].value();
    const double mid = 0.5 * (a + b), rad = 0.5 * (b - a);
    std::complex<double> panel = 0.0;
    for (std::size_t p = 0; p < gl.nodes.size(); ++p) {
      const double t = mid + rad * gl.nodes[p];
      panel += gl.weights[p] / (kLn2 * (1.0 + t)) * f(t);
    }
    total += rad * panel;
  }
  return total;
}

/// int_{window_s} F(theta) dmu(theta) = int_0^1 F(g_s(u)) f_s(u) dmu(u);
/// the substitution u = 1/theta - s is exact for Gauss measure.
std::complex<double> window_integral(
    const std::function<std::complex<double>(double)>& F, int s,
    const QuadratureSpec& spec) {
  return integrate_mu_c(
      [&](double u) { return branch_weight(s, u) * F(1.0 / (u + s)); }, spec);
}

}  // namespace

std::complex<double> tau_point(double theta, const AfElement& x) {
  return trace_field(x)(theta);
}

std::complex<double> tau_point(const Fraction& theta, const AfElement& x) {
  return trace_field(x)(theta);
}

std::complex<double> phi_point(double theta, const AfElement& x) {
  if (theta <= 0.0) return tau_point(0.0, x);
  const int s = branch_of(theta);
  const TraceField tf = trace_field(phi_window_product(x, s, x.level()));
  return tf(theta) / (s * theta);
}

std::complex<double> phi_point(const Fraction& theta, const AfElement& x) {
  if (theta.is_zero()) return tau_point(theta, x);
  const int s = branch_of(theta);
  const TraceField tf = trace_field(phi_window_product(x, s, x.level()));
  return tf(theta) / (s * theta.value());
}

std::complex<double> tau_state(const AfElement& x) {
  const TraceField tf = trace_field(x);
  return {tf.re.integral_mu(), tf.im.integral_mu()};
}

PhiValue phi_state(const AfElement& x, int S, const QuadratureSpec& spec) {
  std::complex<double> total = 0.0;
  for (int s = 1; s <= S; ++s) {
    const TraceField tf = trace_field(phi_window_product(x, s, x.level()));
    total += window_integral(
        [&](double theta) { return tf(theta) / (s * theta); }, s, spec);
  }
  const double tail = x.op_norm() * std::log2((S + 2.0) / (S + 1.0));
  return {total, tail};
}

std::complex<double> eval_state(const State& st, const AfElement& x) {
  switch (st.kind) {
    case State::Kind::tau_at:
      return tau_point(st.theta, x);
    case State::Kind::phi_at:
      return phi_point(st.theta, x);
    case State::Kind::tau_integrated:
      return tau_state(x);
    case State::Kind::phi_integrated:
      return phi_state(x, st.truncation, st.quad).value;
  }
  return 0.0;
}

std::complex<double> gns_inner(const State& st, const AfElement& x, const AfElement& y) {
  const int level = std::max(x.level(), y.level());
  return eval_state(st, embed(y, level).adjoint() * embed(x, level));
}

CheckResult isometry_branch_check(const AfElement& x, int s, const QuadratureSpec& spec,
                                  double tol) {
  const int m = x.level();
  // Integrand kinks sit at the level-m nodes; panels must refine them.
  const QuadratureSpec q{std::max(spec.farey_level, m), spec.points};
  const AfElement hx = branch_expand(x, s);
  const AfElement one = AfElement::identity(x.diagram_ptr(), m);
  const AfElement h1 = branch_expand(one, s);
  const TraceField num = trace_field(h1 * (hx.adjoint() * hx));
  const std::complex<double> lhs = window_integral(
      [&](double theta) { return num(theta) / (s * theta); }, s, q);
  const TraceField tfx = trace_field(x.adjoint() * x);
  const std::complex<double> rhs = integrate_mu_c(
      [&](double u) { return tfx(u) * branch_weight(s, u); }, q);
  std::ostringstream params;
  params << "s=" << s << " level=" << m;
  return CheckResult::make(
      "states", "isometry_branch",
      "int_window phi(H_s(x)* H_s(x)) dmu = int tau(x* x) f_s dmu", params.str(),
      lhs.real(), rhs.real(), std::abs(lhs - rhs), tol);
}

CheckResult intertwine_branch_check(const AfElement& x, const AfElement& y,
                                    const AfElement& z, int s,
                                    const QuadratureSpec& spec, double tol) {
  const int m = y.level();
  if (z.level() != m)
    throw std::invalid_argument("intertwine_branch_check: y, z levels differ");
  const QuadratureSpec q{std::max(spec.farey_level, m), spec.points};
  const AfElement xe = embed(x, m + s);
  const AfElement hy = branch_expand(y, s);
  const AfElement hz = branch_expand(z, s);
  const AfElement one = AfElement::identity(y.diagram_ptr(), m);
  const AfElement h1 = branch_expand(one, s);
  const TraceField num = trace_field(h1 * (hz.adjoint() * xe * hy));
  const std::complex<double> lhs = window_integral(
      [&](double theta) { return num(theta) / (s * theta); }, s, q);
  const AfElement gx = branch_compress(xe, s);
  const TraceField rhs_field = trace_field(z.adjoint() * gx * y);
  const std::complex<double> rhs = integrate_mu_c(
      [&](double u) { return rhs_field(u) * branch_weight(s, u); }, q);
  std::ostringstream params;
  params << "s=" << s << " level=" << m;
  return CheckResult::make(
      "states", "intertwine_branch",
      "int_window phi(H_s(z)* x H_s(y)) dmu = int tau(z* G_s(x) y) f_s dmu",
      params.str(), lhs.real(), rhs.real(), std::abs(lhs - rhs), tol);
}

CheckResult gauss_state_branch_check(const AfElement& x, int s,
                                     const QuadratureSpec& spec, double tol) {
  const int b = std::max(0, x.level() - s);
  const QuadratureSpec q{std::max(spec.farey_level, b), spec.points};
  const AfElement xe = embed(x, b + s);
  const TraceField num = trace_field(phi_window_product(xe, s, b));
  const std::complex<double> lhs = window_integral(
      [&](double theta) { return num(theta) / (s * theta); }, s, q);
  const TraceField g_field = trace_field(branch_compress(xe, s));
  const std::complex<double> rhs = integrate_mu_c(
      [&](double u) { return g_field(u) * branch_weight(s, u); }, q);
  std::ostringstream params;
  params << "s=" << s << " level=" << x.level();
  return CheckResult::make("states", "gauss_state_branch",
                           "int_window phi(x) dmu = int tau(G_s(x)) f_s dmu",
                           params.str(), lhs.real(), rhs.real(), std::abs(lhs - rhs),
                           tol);
}

CheckResult restriction_branch_check(const RealFn& f, const RealFn& test, int s,
                                     int level, const QuadratureSpec& spec,
                                     double tol) {
  DiagramPtr md = FareyDiagram::shared_farey(level + s);
  const QuadratureSpec q{std::max(spec.farey_level, level), spec.points};
  const AfElement zf = center_embed(f, md, level);
  const AfElement w = branch_expand(zf, s);
  const AfElement one = AfElement::identity(md, level);
  const AfElement h1 = branch_expand(one, s);
  const TraceField num = trace_field(h1 * w);
  const std::complex<double> lhs = window_integral(
      [&](double theta) {
        return test(theta) * num(theta) / (s * theta);
      },
      s, q);
  // The algebra sees f through its level-`level` node values, so the scalar
  // side pairs against the same piecewise-affine interpolant.
  const FareyLevel nodes = farey_level(level);
  std::vector<double> vals;
  vals.reserve(nodes.nodes.size());
  for (const Fraction& u : nodes.nodes) vals.push_back(f(u.value()));
  const PiecewiseAffineFn fhat(nodes.nodes, vals);
  const std::complex<double> rhs = integrate_mu_c(
      [&](double u) {
        return fhat(u) * test(1.0 / (u + s)) * branch_weight(s, u);
      },
      q);
  std::ostringstream params;
  params << "s=" << s << " level=" << level;
  return CheckResult::make(
      "states", "restriction_branch",
      "int_window t phi(H_s(Z(f))) dmu = int f (t o g_s) f_s dmu", params.str(),
      lhs.real(), rhs.real(), std::abs(lhs - rhs), tol);
}

}  // namespace ncgauss
