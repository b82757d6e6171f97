#include "ncgauss/piecewise_affine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ncgauss/farey.hpp"

namespace ncgauss {

namespace {

constexpr long double kLn2 = 0.69314718055994530941723212145817657L;

long double frac_diff(const Fraction& b, const Fraction& a) {
  // b - a as a long double via the exact cross product.
  const __int128 num = static_cast<__int128>(b.num()) * a.den() -
                       static_cast<__int128>(a.num()) * b.den();
  return static_cast<long double>(num) /
         (static_cast<long double>(a.den()) * static_cast<long double>(b.den()));
}

}  // namespace

PiecewiseAffineFn::PiecewiseAffineFn(std::vector<Fraction> breakpoints,
                                     std::vector<double> values)
    : xs_(std::move(breakpoints)), vs_(std::move(values)) {
  if (xs_.size() < 2 || xs_.size() != vs_.size())
    throw std::invalid_argument("PiecewiseAffineFn: need matching breakpoints/values, >= 2");
  for (std::size_t i = 0; i + 1 < xs_.size(); ++i)
    if (!(xs_[i] < xs_[i + 1]))
      throw std::invalid_argument("PiecewiseAffineFn: breakpoints must be strictly increasing");
  xd_.reserve(xs_.size());
  for (const Fraction& x : xs_) xd_.push_back(x.value());
}

PiecewiseAffineFn PiecewiseAffineFn::constant(double c) {
  return PiecewiseAffineFn({Fraction(0, 1), Fraction(1, 1)}, {c, c});
}

PiecewiseAffineFn PiecewiseAffineFn::combine(double a, const PiecewiseAffineFn& f,
                                             double b, const PiecewiseAffineFn& g) {
  if (f.domain_lo() != g.domain_lo() || f.domain_hi() != g.domain_hi())
    throw std::invalid_argument("PiecewiseAffineFn::combine: domains differ");
  std::vector<Fraction> merged;
  merged.reserve(f.xs_.size() + g.xs_.size());
  std::set_union(f.xs_.begin(), f.xs_.end(), g.xs_.begin(), g.xs_.end(),
                 std::back_inserter(merged));
  std::vector<double> vals;
  vals.reserve(merged.size());
  for (const Fraction& x : merged) vals.push_back(a * f(x) + b * g(x));
  return PiecewiseAffineFn(std::move(merged), std::move(vals));
}

double PiecewiseAffineFn::operator()(double theta) const {
  if (theta <= xd_.front()) return vs_.front();
  if (theta >= xd_.back()) return vs_.back();
  const auto it = std::upper_bound(xd_.begin(), xd_.end(), theta);
  const std::size_t i = static_cast<std::size_t>(it - xd_.begin()) - 1;
  const long double a = xs_[i].value_ld();
  const long double b = xs_[i + 1].value_ld();
  const long double t = (static_cast<long double>(theta) - a) / (b - a);
  return static_cast<double>(vs_[i] + t * (vs_[i + 1] - vs_[i]));
}

double PiecewiseAffineFn::operator()(const Fraction& theta) const {
  if (theta <= xs_.front()) return vs_.front();
  if (theta >= xs_.back()) return vs_.back();
  const auto it = std::upper_bound(xs_.begin(), xs_.end(), theta);
  const std::size_t i = static_cast<std::size_t>(it - xs_.begin()) - 1;
  if (xs_[i] == theta) return vs_[i];
  const long double t = frac_diff(theta, xs_[i]) / frac_diff(xs_[i + 1], xs_[i]);
  return static_cast<double>(vs_[i] + t * (vs_[i + 1] - vs_[i]));
}

double PiecewiseAffineFn::integral_mu() const {
  long double total = 0.0L;
  for (std::size_t i = 0; i + 1 < xs_.size(); ++i) {
    const long double a = xs_[i].value_ld();
    const long double b = xs_[i + 1].value_ld();
    const long double h = frac_diff(xs_[i + 1], xs_[i]);
    const long double alpha = (static_cast<long double>(vs_[i + 1]) - vs_[i]) / h;
    const long double beta = vs_[i] - alpha * a;
    total += alpha * h + (beta - alpha) * std::log((1.0L + b) / (1.0L + a));
  }
  return static_cast<double>(total / kLn2);
}

double PiecewiseAffineFn::integral_mu(double a, double b) const {
  if (!(a < b)) return 0.0;
  long double total = 0.0L;
  for (std::size_t i = 0; i + 1 < xs_.size(); ++i) {
    const long double xa = std::max<long double>(xs_[i].value_ld(), a);
    const long double xb = std::min<long double>(xs_[i + 1].value_ld(), b);
    if (!(xa < xb)) continue;
    const long double h = frac_diff(xs_[i + 1], xs_[i]);
    const long double alpha = (static_cast<long double>(vs_[i + 1]) - vs_[i]) / h;
    const long double beta = vs_[i] - alpha * xs_[i].value_ld();
    total += alpha * (xb - xa) + (beta - alpha) * std::log((1.0L + xb) / (1.0L + xa));
  }
  return static_cast<double>(total / kLn2);
}

double PiecewiseAffineFn::max_abs() const {
  double m = 0.0;
  for (double v : vs_) m = std::max(m, std::abs(v));
  return m;
}

double gauss_measure(double a, double b) {
  return static_cast<double>(std::log((1.0L + static_cast<long double>(b)) /
                                      (1.0L + static_cast<long double>(a))) /
                             kLn2);
}

PiecewiseAffineFn hat_function(int n, std::int64_t k) {
  const FareyLevel lvl = farey_level(n);
  const std::int64_t count = static_cast<std::int64_t>(lvl.nodes.size());
  if (k <= 0 || k >= count - 1)
    throw std::invalid_argument("hat_function: interior nodes only (0 < k < 2^n)");
  // Assemble from the displayed three-piece form: 0 up to r(n,k-1), affine up
  // to 1 at r(n,k), affine back to 0 at r(n,k+1), then 0. Collapses to fewer
  // breakpoints when the support touches an endpoint of [0,1].
  std::vector<Fraction> xs;
  std::vector<double> vs;
  auto push = [&](const Fraction& x, double v) {
    if (!xs.empty() && xs.back() == x) return;
    xs.push_back(x);
    vs.push_back(v);
  };
  push(Fraction(0, 1), 0.0);
  push(lvl.nodes[static_cast<std::size_t>(k - 1)], 0.0);
  push(lvl.nodes[static_cast<std::size_t>(k)], 1.0);
  push(lvl.nodes[static_cast<std::size_t>(k + 1)], 0.0);
  push(Fraction(1, 1), 0.0);
  return PiecewiseAffineFn(std::move(xs), std::move(vs));
}

}  // namespace ncgauss
