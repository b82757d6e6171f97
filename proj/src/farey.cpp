#include "ncgauss/farey.hpp"

#include <cmath>
#include <stdexcept>

namespace ncgauss {

Fraction mediant(const Fraction& a, const Fraction& b) {
  if (!(a < b)) throw std::invalid_argument("mediant: requires a < b");
  return Fraction(detail::checked_add(a.num(), b.num()),
                  detail::checked_add(a.den(), b.den()));
}

FareyLevel farey_level(int n) {
  if (n < 0) throw std::invalid_argument("farey_level: level must be >= 0");
  FareyLevel out;
  out.level = n;
  out.nodes = {Fraction(0, 1), Fraction(1, 1)};
  for (int step = 0; step < n; ++step) {
    std::vector<Fraction> next;
    next.reserve(2 * out.nodes.size() - 1);
    for (std::size_t k = 0; k + 1 < out.nodes.size(); ++k) {
      next.push_back(out.nodes[k]);
      next.push_back(mediant(out.nodes[k], out.nodes[k + 1]));
    }
    next.push_back(out.nodes.back());
    out.nodes = std::move(next);
  }
  return out;
}

NodeIndex locate(const Fraction& x) {
  if (x.is_zero()) return {0, 0};
  if (x.is_one()) return {0, 1};
  Fraction lo(0, 1), hi(1, 1);
  std::int64_t lo_index = 0;  // index of lo at the current level
  int level = 0;
  for (;;) {
    const Fraction mid = mediant(lo, hi);
    ++level;
    const std::int64_t mid_index = 2 * lo_index + 1;
    if (mid == x) return {level, mid_index};
    if (x < mid) {
      hi = mid;
      lo_index = 2 * lo_index;
    } else {
      lo = mid;
      lo_index = mid_index;
    }
  }
}

std::vector<std::int64_t> cf_expand(const Fraction& x) {
  if (x.is_zero() || x.is_one())
    throw std::domain_error("cf_expand: requires x in (0,1)");
  std::vector<std::int64_t> digits;
  std::int64_t p = x.num(), q = x.den();
  while (p != 0) {
    digits.push_back(q / p);
    const std::int64_t r = q % p;
    q = p;
    p = r;
  }
  return digits;
}

Fraction gauss_map(const Fraction& x) {
  if (x.is_zero()) return Fraction(0, 1);
  // 1/x - floor(1/x) on p/q is (q mod p)/p.
  return Fraction(x.den() % x.num(), x.num());
}

double gauss_map(double x) {
  if (x <= 0.0) return 0.0;
  const double inv = 1.0 / x;
  return inv - std::floor(inv);
}

Fraction branch_map(int s, const Fraction& t) {
  if (s < 1) throw std::invalid_argument("branch_map: s must be >= 1");
  return Fraction(t.den(),
                  detail::checked_add(t.num(), detail::checked_mul(s, t.den())));
}

double branch_map(int s, double t) {
  if (s < 1) throw std::invalid_argument("branch_map: s must be >= 1");
  return 1.0 / (t + static_cast<double>(s));
}

Fraction branch_inverse(int s, const Fraction& t) {
  if (s < 1) throw std::invalid_argument("branch_inverse: s must be >= 1");
  // 1/t - s = (q - s p)/p for t = p/q; valid only inside the branch window.
  if (t.is_zero()) throw std::domain_error("branch_inverse: t outside [1/(s+1), 1/s]");
  const std::int64_t num = t.den() - detail::checked_mul(s, t.num());
  if (num < 0 || num > t.num())
    throw std::domain_error("branch_inverse: t outside [1/(s+1), 1/s]");
  return Fraction(num, t.num());
}

double branch_inverse(int s, double t) {
  if (s < 1) throw std::invalid_argument("branch_inverse: s must be >= 1");
  const double lo = 1.0 / (s + 1.0), hi = 1.0 / s;
  if (!(t >= lo && t <= hi))
    throw std::domain_error("branch_inverse: t outside [1/(s+1), 1/s]");
  return std::min(1.0, std::max(0.0, 1.0 / t - static_cast<double>(s)));
}

int branch_of(double t) {
  if (!(t > 0.0) || t > 1.0) throw std::domain_error("branch_of: requires t in (0,1]");
  const double s = std::floor(1.0 / t + 1e-12);
  if (s > 1e9) throw std::domain_error("branch_of: branch index out of range");
  return static_cast<int>(s);
}

int branch_of(const Fraction& t) {
  if (t.is_zero()) throw std::domain_error("branch_of: requires t in (0,1]");
  const std::int64_t s = t.den() / t.num();
  if (s > 1'000'000'000) throw std::domain_error("branch_of: branch index out of range");
  return static_cast<int>(s);
}

}  // namespace ncgauss
