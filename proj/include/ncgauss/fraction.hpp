#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace ncgauss {

namespace detail {

inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r))
    throw std::overflow_error("integer overflow in rational arithmetic");
  return r;
}

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r))
    throw std::overflow_error("integer overflow in rational arithmetic");
  return r;
}

}  // namespace detail

/// Exact reduced rational p/q in [0,1] on checked 64-bit integers.
///
/// Node labels of the Farey diagram have Fibonacci-sized denominators, so
/// 64 bits cover every level far beyond what can be materialized as matrix
/// blocks anyway; overflow throws instead of wrapping.
class Fraction {
 public:
  Fraction() : p_(0), q_(1) {}

  Fraction(std::int64_t p, std::int64_t q) : p_(p), q_(q) {
    if (q_ <= 0) throw std::domain_error("Fraction: denominator must be positive");
    if (p_ < 0) throw std::domain_error("Fraction: value must be nonnegative");
    if (p_ > q_) throw std::domain_error("Fraction: value must lie in [0,1]");
    const std::int64_t g = std::gcd(p_, q_);
    if (g > 1) {
      p_ /= g;
      q_ /= g;
    }
  }

  std::int64_t num() const { return p_; }
  std::int64_t den() const { return q_; }

  bool is_zero() const { return p_ == 0; }
  bool is_one() const { return p_ == q_; }

  double value() const { return static_cast<double>(p_) / static_cast<double>(q_); }
  long double value_ld() const {
    return static_cast<long double>(p_) / static_cast<long double>(q_);
  }

  /// 1 - p/q, the mirror symmetry of the Farey diagram.
  Fraction complement() const { return Fraction(q_ - p_, q_); }

  friend bool operator==(const Fraction& a, const Fraction& b) {
    return a.p_ == b.p_ && a.q_ == b.q_;
  }
  friend bool operator!=(const Fraction& a, const Fraction& b) { return !(a == b); }
  friend bool operator<(const Fraction& a, const Fraction& b) {
    return static_cast<__int128>(a.p_) * b.q_ < static_cast<__int128>(b.p_) * a.q_;
  }
  friend bool operator>(const Fraction& a, const Fraction& b) { return b < a; }
  friend bool operator<=(const Fraction& a, const Fraction& b) { return !(b < a); }
  friend bool operator>=(const Fraction& a, const Fraction& b) { return !(a < b); }

  std::string str() const { return std::to_string(p_) + "/" + std::to_string(q_); }

 private:
  std::int64_t p_;
  std::int64_t q_;
};

}  // namespace ncgauss
