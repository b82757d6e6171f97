#pragma once

#include <cstdint>
#include <vector>

#include "ncgauss/fraction.hpp"

namespace ncgauss {

/// One level of the Farey / Stern-Brocot refinement of [0,1]:
/// 2^n + 1 strictly increasing reduced fractions from 0/1 to 1/1, where
/// level n+1 inserts the mediant between every adjacent pair of level n.
struct FareyLevel {
  int level = 0;
  std::vector<Fraction> nodes;
};

/// Position of a rational in the diagram: the first level where it appears
/// and its index within that level.
struct NodeIndex {
  int level = 0;
  std::int64_t index = 0;
};

/// Mediant (p+p')/(q+q') of a < b. Reduced on return; for Farey neighbors the
/// raw mediant is already reduced. Throws std::invalid_argument unless a < b,
/// std::overflow_error when the sums leave 64 bits.
Fraction mediant(const Fraction& a, const Fraction& b);

/// Build level n by repeated mediant insertion. n >= 0.
FareyLevel farey_level(int n);

/// Smallest (level, index) at which x appears, by mediant bisection from
/// (0/1, 1/1). Endpoints map to (0,0) and (0,1).
NodeIndex locate(const Fraction& x);

/// Continued fraction digits [a_1,...,a_m] of x in (0,1) via the Euclidean
/// algorithm; the expansion is the unique one with last digit >= 2 when m > 1.
std::vector<std::int64_t> cf_expand(const Fraction& x);

/// Gauss map G(0)=0, G(x) = 1/x - floor(1/x). Exact on rationals; shifts
/// continued fraction digits one place left.
Fraction gauss_map(const Fraction& x);
double gauss_map(double x);

/// Branch inverse g_s(t) = 1/(t+s), the homeomorphism [0,1] -> [1/(s+1), 1/s].
/// On a reduced p/q this is q/(p+sq), again reduced.
Fraction branch_map(int s, const Fraction& t);
double branch_map(int s, double t);

/// g_s^{-1}(t) = 1/t - s; domain error outside [1/(s+1), 1/s].
Fraction branch_inverse(int s, const Fraction& t);
double branch_inverse(int s, double t);

/// The branch index s with t in (1/(s+1), 1/s]; domain error at t <= 0.
int branch_of(double t);
int branch_of(const Fraction& t);

}  // namespace ncgauss
