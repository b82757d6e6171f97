#pragma once

#include <functional>

#include "ncgauss/check.hpp"
#include "ncgauss/quadrature.hpp"

namespace ncgauss {

using RealFn = std::function<double(double)>;

/// Branch weight f_s(t) = (t+1)/((t+s)(t+s+1)). The weights telescope:
/// sum_{s=1..S} f_s(t) = 1 - (t+1)/(t+S+1), so the tail after S terms is
/// exactly (t+1)/(t+S+1).
double branch_weight(int s, double t);
double branch_weight_tail(int S, double t);

enum class TailMode {
  truncated,     // plain S-term sum; exact tail reported separately
  completed,     // add f(0) * tail, first-order exact for continuous f
  renormalized,  // divide by the partial sum of weights, restoring unitality
};

struct TransferValue {
  double value = 0.0;
  double tail_bound = 0.0;  // sup|f| * (t+1)/(t+S+1)
};

/// The transfer operator sum_{s=1..S} f(1/(t+s)) f_s(t). `sup_abs_f` scales
/// the reported tail bound; pass a known sup or an estimate.
TransferValue apply_transfer(const RealFn& f, double t, int S, double sup_abs_f = 1.0,
                             TailMode mode = TailMode::truncated);

/// Composition operator f -> f o G.
double apply_composition(const RealFn& f, double t);

/// mu-invariance of the transfer operator: int f dmu = int (transfer f) dmu.
/// The right side uses the completed tail so truncation error sits near
/// mod-continuity(f; 1/S) * tail, far below the quadrature tolerance.
CheckResult invariance_check(const RealFn& f, const std::string& fname, int S,
                             const QuadratureSpec& spec, double tol);

/// Weak form of the conjugation identity:
/// int f (g o G)(h o G) dmu = int (transfer f) g h dmu.
/// The left side is integrated branch-by-branch (the integrand jumps at the
/// branch boundaries 1/s), with the branch tail completed by f(0+).
CheckResult conjugation_check(const RealFn& f, const RealFn& g, const RealFn& h,
                              const std::string& names, int S,
                              const QuadratureSpec& spec, double tol);

/// Isometry of composition: int (f o G)^2 dmu = int f^2 dmu, with the left
/// side integrated branch-by-branch in t (independent of the substitution
/// trick used on the right).
CheckResult composition_isometry_check(const RealFn& f, const std::string& fname,
                                       int branch_cut, const QuadratureSpec& spec,
                                       double tol);

/// Collocation discretization of the transfer operator on a uniform grid of
/// N piecewise-linear hats, with the tail mass lumped exactly at t -> 0 so
/// rows sum to one and the leading eigenpair is (1, constant) by
/// construction. lambda2 is the modulus of the subdominant eigenvalue,
/// found by power iteration after deflating the leading pair.
struct GkwResult {
  double lambda1 = 0.0;        // Rayleigh quotient of the constant vector
  double lambda1_residual = 0.0;  // max |T 1 - 1|
  double lambda2 = 0.0;        // subdominant modulus
  int grid = 0;
  int iterations = 0;
};
GkwResult gkw_estimate(int grid, int max_iterations = 400);

}  // namespace ncgauss
