#pragma once

#include <complex>
#include <functional>

#include "ncgauss/branch_maps.hpp"
#include "ncgauss/check.hpp"
#include "ncgauss/quadrature.hpp"
#include "ncgauss/transfer.hpp"

namespace ncgauss {

/// tau_theta: tracial state extending the Dirac measure at theta.
std::complex<double> tau_point(double theta, const AfElement& x);
std::complex<double> tau_point(const Fraction& theta, const AfElement& x);

/// phi_theta(x) = tau_theta(H_s(1) x) / (s theta) on the branch window
/// 1/(s+1) < theta <= 1/s, phi_0 = tau_0. Evaluated quotient-side: only the
/// window blocks of x enter, so the value is independent of the lift fill.
std::complex<double> phi_point(double theta, const AfElement& x);
std::complex<double> phi_point(const Fraction& theta, const AfElement& x);

/// tau(x) = int tau_theta(x) dmu(theta): exact closed form through the trace
/// field (piecewise affine against the Gauss density).
std::complex<double> tau_state(const AfElement& x);

/// phi(x) = int phi_theta(x) dmu(theta), branch by branch through branch S;
/// the dropped branches are bounded by ||x|| log2((S+2)/(S+1)) <= 2||x||/(S+2).
struct PhiValue {
  std::complex<double> value;
  double tail_bound;
};
PhiValue phi_state(const AfElement& x, int S, const QuadratureSpec& spec);

/// A state usable in GNS pairings.
struct State {
  enum class Kind { tau_at, phi_at, tau_integrated, phi_integrated };
  Kind kind = Kind::tau_integrated;
  double theta = 0.0;       // for the point kinds
  int truncation = 24;      // for phi_integrated
  QuadratureSpec quad{};
};

std::complex<double> eval_state(const State& st, const AfElement& x);

/// GNS form <x, y>_psi = psi(y* x): positive semidefinite, sesquilinear.
std::complex<double> gns_inner(const State& st, const AfElement& x, const AfElement& y);

/// Branch-s isometry identity:
/// int_{window_s} phi_theta(H_s(x)* H_s(x)) dmu(theta)
///   = int_0^1 tau_u(x* x) f_s(u) dmu(u),
/// left side through the lifted product, right side through the trace field
/// of x* x; both integrals share the substitution u = 1/theta - s.
CheckResult isometry_branch_check(const AfElement& x, int s, const QuadratureSpec& spec,
                                  double tol);

/// Branch-s weak intertwining identity:
/// int_{window_s} phi_theta(H_s(z)* x H_s(y)) dmu(theta)
///   = int_0^1 tau_u(z* G_s(x) y) f_s(u) dmu(u).
/// x lives s levels above y and z.
CheckResult intertwine_branch_check(const AfElement& x, const AfElement& y,
                                    const AfElement& z, int s,
                                    const QuadratureSpec& spec, double tol);

/// Branch-s term of phi = tau o (noncommutative Gauss map):
/// int_{window_s} phi_theta(x) dmu(theta) = int_0^1 tau_u(G_s(x)) f_s(u) dmu(u).
CheckResult gauss_state_branch_check(const AfElement& x, int s,
                                     const QuadratureSpec& spec, double tol);

/// Branch-s commutative restriction: the lift of a center function f pairs
/// against a central test function exactly like f(1/theta - s) on the window:
/// int_{window_s} t(theta) phi_theta(H_s(Z(f))) dmu = int f(u) t(g_s(u)) f_s(u) dmu(u).
CheckResult restriction_branch_check(const RealFn& f, const RealFn& test, int s,
                                     int level, const QuadratureSpec& spec, double tol);

}  // namespace ncgauss
