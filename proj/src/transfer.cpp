#include "ncgauss/transfer.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>

#include "ncgauss/farey.hpp"

namespace ncgauss {

double branch_weight(int s, double t) {
  if (s < 1) throw std::invalid_argument("branch_weight: s >= 1");
  return (t + 1.0) / ((t + s) * (t + s + 1.0));
}

double branch_weight_tail(int S, double t) { return (t + 1.0) / (t + S + 1.0); }

TransferValue apply_transfer(const RealFn& f, double t, int S, double sup_abs_f,
                             TailMode mode) {
  if (S < 1) throw std::invalid_argument("apply_transfer: S >= 1");
  long double acc = 0.0L;
  for (int s = 1; s <= S; ++s)
    acc += f(1.0 / (t + s)) * branch_weight(s, t);
  const double tail = branch_weight_tail(S, t);
  double value = static_cast<double>(acc);
  switch (mode) {
    case TailMode::truncated:
      break;
    case TailMode::completed:
      value += f(0.0) * tail;
      break;
    case TailMode::renormalized:
      value /= (1.0 - tail);
      break;
  }
  return {value, sup_abs_f * tail};
}

double apply_composition(const RealFn& f, double t) { return f(gauss_map(t)); }

CheckResult invariance_check(const RealFn& f, const std::string& fname, int S,
                             const QuadratureSpec& spec, double tol) {
  const double lhs = integrate_mu(f, spec);
  const double rhs = integrate_mu(
      [&](double t) { return apply_transfer(f, t, S, 1.0, TailMode::completed).value; },
      spec);
  std::ostringstream params;
  params << "f=" << fname << " S=" << S;
  return CheckResult::make("transfer", "mu_invariance",
                           "int f dmu = int (transfer f) dmu", params.str(), lhs, rhs,
                           std::abs(lhs - rhs), tol);
}

CheckResult conjugation_check(const RealFn& f, const RealFn& g, const RealFn& h,
                              const std::string& names, int S,
                              const QuadratureSpec& spec, double tol) {
  // Left side in theta coordinates. The integrand jumps at every branch
  // boundary 1/s, so integrate window by window for the first branches and
  // finish with the substituted series; the change of variables
  // u = 1/theta - s turns window s into int_0^1 f(1/(u+s)) g h f_s dmu(u).
  const int direct_branches = 60;
  long double lhs = 0.0L;
  for (int s = 1; s <= direct_branches; ++s) {
    const double lo = 1.0 / (s + 1.0), hi = 1.0 / s;
    lhs += integrate_mu_interval(
        [&](double theta) {
          const double u = 1.0 / theta - s;
          return f(theta) * g(u) * h(u);
        },
        lo, hi, 8, spec.points);
  }
  const int series_cut = 20000;
  lhs += integrate_mu(
      [&](double u) {
        long double acc = 0.0L;
        for (int s = direct_branches + 1; s <= series_cut; ++s)
          acc += f(1.0 / (u + s)) * branch_weight(s, u);
        acc += f(0.0) * branch_weight_tail(series_cut, u);
        return static_cast<double>(acc) * g(u) * h(u);
      },
      spec);
  const double rhs = integrate_mu(
      [&](double u) {
        return apply_transfer(f, u, S, 1.0, TailMode::completed).value * g(u) * h(u);
      },
      spec);
  std::ostringstream params;
  params << "fns=" << names << " S=" << S;
  return CheckResult::make(
      "transfer", "conjugation_weak",
      "int f (g o G)(h o G) dmu = int (transfer f) g h dmu", params.str(),
      static_cast<double>(lhs), rhs, std::abs(static_cast<double>(lhs) - rhs), tol);
}

CheckResult composition_isometry_check(const RealFn& f, const std::string& fname,
                                       int branch_cut, const QuadratureSpec& spec,
                                       double tol) {
  // int (f o G)^2 dmu, windows integrated directly in theta; the remaining
  // branches substitute exactly to int f(u)^2 (u+1)/(u+B+1) dmu(u).
  long double lhs = 0.0L;
  for (int s = 1; s <= branch_cut; ++s) {
    const double lo = 1.0 / (s + 1.0), hi = 1.0 / s;
    lhs += integrate_mu_interval(
        [&](double theta) {
          const double v = f(1.0 / theta - s);
          return v * v;
        },
        lo, hi, 8, spec.points);
  }
  lhs += integrate_mu(
      [&](double u) {
        const double v = f(u);
        return v * v * branch_weight_tail(branch_cut, u);
      },
      spec);
  const double rhs = integrate_mu([&](double u) { return f(u) * f(u); }, spec);
  std::ostringstream params;
  params << "f=" << fname << " branches=" << branch_cut;
  return CheckResult::make("transfer", "composition_isometry",
                           "int (f o G)^2 dmu = int f^2 dmu", params.str(),
                           static_cast<double>(lhs), rhs,
                           std::abs(static_cast<double>(lhs) - rhs), tol);
}

GkwResult gkw_estimate(int grid, int max_iterations) {
  if (grid < 50) throw std::invalid_argument("gkw_estimate: grid >= 50");
  const int n = grid + 1;  // nodes 0..grid
  const double h = 1.0 / grid;
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(n, n);
  const int series_cut = 50 * grid;
  for (int i = 0; i < n; ++i) {
    const double t = i * h;
    for (int s = 1; s <= series_cut; ++s) {
      const double y = 1.0 / (t + s);
      const double w = branch_weight(s, t);
      const double pos = y / h;
      const int cell = std::min(static_cast<int>(pos), grid - 1);
      const double frac = pos - cell;
      T(i, cell) += w * (1.0 - frac);
      T(i, cell + 1) += w * frac;
    }
    // All remaining branches map into [0, 1/(series_cut+1)); lump their
    // exact telescoped mass at the origin node.
    T(i, 0) += branch_weight_tail(series_cut, t);
  }

  GkwResult out;
  out.grid = grid;
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
  out.lambda1_residual = (T * ones - ones).cwiseAbs().maxCoeff();
  out.lambda1 = (ones.dot(T * ones)) / ones.dot(ones);

  // Left leading eigenvector (stationary functional), for deflation.
  Eigen::VectorXd pi = Eigen::VectorXd::Ones(n);
  for (int it = 0; it < max_iterations; ++it) {
    Eigen::VectorXd next = T.transpose() * pi;
    next /= next.lpNorm<1>();
    const double delta = (next - pi).cwiseAbs().maxCoeff();
    pi = next;
    if (delta < 1e-14) break;
  }
  const double pi_dot_ones = pi.dot(ones);

  // Power iteration on the deflated operator v -> T v - 1 (pi.v)/(pi.1).
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = i * h - 0.5;
  v -= ones * (pi.dot(v) / pi_dot_ones);
  double lambda = 0.0;
  int used = 0;
  for (int it = 0; it < max_iterations; ++it) {
    Eigen::VectorXd next = T * v;
    next -= ones * (pi.dot(next) / pi_dot_ones);
    const double num = v.dot(next);
    const double den = v.dot(v);
    const double estimate = num / den;
    const double nrm = next.norm();
    if (nrm == 0.0) break;
    next /= nrm;
    ++used;
    if (it > 3 && std::abs(std::abs(estimate) - std::abs(lambda)) <
                      1e-12 * std::max(1.0, std::abs(estimate))) {
      lambda = estimate;
      break;
    }
    lambda = estimate;
    v = next;
  }
  out.lambda2 = std::abs(lambda);
  out.iterations = used;
  return out;
}

}  // namespace ncgauss
