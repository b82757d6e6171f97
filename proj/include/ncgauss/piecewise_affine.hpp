#pragma once

#include <cstdint>
#include <vector>

#include "ncgauss/fraction.hpp"

namespace ncgauss {

/// Continuous piecewise affine function with exact rational breakpoints and
/// floating point values. Breakpoints are strictly increasing; the domain is
/// [breakpoints.front(), breakpoints.back()] (the full interval [0,1] for
/// everything built from the main diagram; branch-window subintervals occur
/// for quotient trace fields). Evaluation between breakpoints is affine
/// interpolation, so the function is continuous by construction.
class PiecewiseAffineFn {
 public:
  PiecewiseAffineFn(std::vector<Fraction> breakpoints, std::vector<double> values);

  /// f == c on [0,1].
  static PiecewiseAffineFn constant(double c);

  /// a*f + b*g over the merged breakpoint set (domains must agree).
  static PiecewiseAffineFn combine(double a, const PiecewiseAffineFn& f,
                                   double b, const PiecewiseAffineFn& g);

  double operator()(double theta) const;
  double operator()(const Fraction& theta) const;

  /// Exact closed-form integral against Gauss measure dmu = dt/(ln2 (1+t))
  /// over the whole domain: per interval,
  ///   int_a^b (alpha t + beta) dmu = (1/ln2)(alpha (b-a) + (beta-alpha) ln((1+b)/(1+a))).
  double integral_mu() const;

  /// Same, restricted to [a,b] intersected with the domain.
  double integral_mu(double a, double b) const;

  double max_abs() const;

  const std::vector<Fraction>& breakpoints() const { return xs_; }
  const std::vector<double>& values() const { return vs_; }
  const Fraction& domain_lo() const { return xs_.front(); }
  const Fraction& domain_hi() const { return xs_.back(); }

 private:
  std::vector<Fraction> xs_;
  std::vector<double> vs_;
  std::vector<double> xd_;  // breakpoints as doubles, for interpolation
};

/// Gauss measure of [a,b]: log2((1+b)/(1+a)).
double gauss_measure(double a, double b);

/// The tent supported on (r(n,k-1), r(n,k+1)) with value 1 at r(n,k), affine
/// on the two flanking Farey intervals of level n. Interior nodes only
/// (0 < k < 2^n).
PiecewiseAffineFn hat_function(int n, std::int64_t k);

}  // namespace ncgauss
