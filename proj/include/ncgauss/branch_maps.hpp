#pragma once

#include <cstdint>

#include "ncgauss/af_element.hpp"

namespace ncgauss {

/// Thrown when a construction would exceed the configured matrix budget.
class resource_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Indices of the branch-s window nodes (labels in [1/(s+1), 1/s]) within a
/// main-diagram level. Present iff level >= s; exactly 2^(level-s)+1 nodes,
/// contiguous, ascending, in label correspondence with quotient level
/// (level - s).
struct WindowSpan {
  std::int64_t first = 0;
  std::int64_t last = 0;
};
WindowSpan window_span(const FareyDiagram& main, int s, int level);

/// pi_s: coordinate restriction of a level-n main element (n >= s) to its
/// window blocks, relabeled as quotient level n-s. A surjective unital
/// *-homomorphism.
AfElement quotient_project(const AfElement& x, int s);

/// quotient_project(embed(x, quotient_level + s), s), computed along the
/// window's ancestor cone only. Lets branch indices run far past any level
/// that could be materialized (window blocks at level b+s have indices
/// [2^b, 2^{b+1}], independent of s).
AfElement quotient_project_embedded(const AfElement& x, int s, int quotient_level);

/// sigma~_s: block j of the image holds s diagonal copies of the matching
/// main block followed by a zero corner. A non-unital *-monomorphism from
/// main level m into quotient level m; commutes with embedding exactly.
AfElement quotient_inflate(const AfElement& x, int s);

/// V~_s: pinch a quotient element to its s diagonal q x q slots and average
/// them; lands at main level m. UCP, a left inverse of quotient_inflate, and
/// a module map: quotient_average(y * quotient_inflate(x)) =
/// quotient_average(y) * x.
AfElement quotient_average(const AfElement& y);

enum class LiftFill {
  nearest_edge,  // each non-window block gets (nearest boundary block trace) * 1
  edge_mean,     // every non-window block gets the mean of the two boundary traces
};

/// UCP section of quotient_project: window coordinates receive y's blocks;
/// every other block is a scalar fill. All window-interior traced quantities
/// are fill-independent. Output level = quotient level + s.
AfElement quotient_lift(const AfElement& y, LiftFill fill = LiftFill::nearest_edge);

/// H_s = lift after inflate: main level m -> main level m+s.
AfElement branch_expand(const AfElement& x, int s,
                        LiftFill fill = LiftFill::nearest_edge);

/// G_s = average after project: main level n -> main level n-s. UCP; a left
/// inverse of branch_expand (exactly, at finite level), restricts to
/// f -> f o g_s on center elements, and satisfies the module identity
/// G_s(x * H_s(y)) = G_s(x) * y.
AfElement branch_compress(const AfElement& x, int s);

/// Truncation of the noncommutative Gauss map: sum over s <= S of
/// G_s(x) * Z(f_s) at the common output level N-S (each branch consumes s
/// mediant steps, so x is embedded to level N-S+s per branch). The dropped
/// tail has norm at most ||x|| * max_t (t+1)/(t+S+1) = 2||x||/(S+2).
struct NcGaussResult {
  AfElement value;
  double tail_bound;
};
NcGaussResult nc_gauss_map(const AfElement& x, int S, int N);

/// The same truncation applied to a center function: branch s reads the
/// center embedding at its own input level, so the result restricts exactly
/// to the scalar transfer operator (finite-stage center embeddings do not
/// stay central under embedding, which is why center inputs get their own
/// route).
NcGaussResult nc_gauss_center(const std::function<double(double)>& f, double sup_abs_f,
                              int S, int output_level);

}  // namespace ncgauss
