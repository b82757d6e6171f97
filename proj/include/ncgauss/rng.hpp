#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace ncgauss {

/// Deterministic random source. Draws go through explicit Box-Muller /
/// ldexp-based conversions rather than std distributions, whose algorithms
/// are implementation-defined; a fixed seed must reproduce the report bytes
/// on rerun.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  /// Uniform in [0,1).
  double uniform() { return std::ldexp(static_cast<double>(eng_() >> 11), -53); }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  std::uint64_t integer(std::uint64_t n) { return eng_() % n; }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u = 0.0;
    while (u == 0.0) u = uniform();
    const double v = uniform();
    const double r = std::sqrt(-2.0 * std::log(u));
    spare_ = r * std::sin(6.283185307179586476925286766559 * v);
    have_spare_ = true;
    return r * std::cos(6.283185307179586476925286766559 * v);
  }

  std::complex<double> cnormal() { return {normal(), normal()}; }

 private:
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace ncgauss
