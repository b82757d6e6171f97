#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "ncgauss/diagram.hpp"
#include "ncgauss/piecewise_affine.hpp"
#include "ncgauss/rng.hpp"

namespace ncgauss {

/// An element of one finite stage of the AF algebra attached to a diagram:
/// a level index plus one complex square block per node, block k of the
/// diagram-prescribed size. Values are immutable; every operation returns a
/// fresh element, so unrestricted concurrent reads are safe.
class AfElement {
 public:
  AfElement(DiagramPtr diagram, int level, std::vector<Eigen::MatrixXcd> blocks);

  static AfElement identity(DiagramPtr diagram, int level);
  static AfElement zero(DiagramPtr diagram, int level);

  int level() const { return level_; }
  std::int64_t block_count() const { return static_cast<std::int64_t>(blocks_.size()); }
  const Eigen::MatrixXcd& block(std::int64_t k) const {
    return blocks_[static_cast<std::size_t>(k)];
  }
  const FareyDiagram& diagram() const { return *diagram_; }
  DiagramPtr diagram_ptr() const { return diagram_; }

  /// Copy with block k replaced (shape must match).
  AfElement with_block(std::int64_t k, Eigen::MatrixXcd m) const;

  AfElement adjoint() const;

  /// Operator norm: max over blocks of the largest singular value.
  double op_norm() const;

  /// Max absolute entry difference against another element of equal shape.
  double max_diff(const AfElement& other) const;

  friend AfElement operator+(const AfElement& a, const AfElement& b);
  friend AfElement operator-(const AfElement& a, const AfElement& b);
  friend AfElement operator*(const AfElement& a, const AfElement& b);
  friend AfElement operator*(std::complex<double> c, const AfElement& a);

 private:
  DiagramPtr diagram_;
  int level_;
  std::vector<Eigen::MatrixXcd> blocks_;
};

/// Unital *-homomorphism into a deeper stage: one mediant step maps block k
/// to blocks 2k and 2k+-1; the odd block is the direct sum of its two parents
/// (corner-structured for quotient diagrams, so that the inflate/average maps
/// commute with embedding on the nose).
AfElement embed(const AfElement& x, int to_level);

/// tau_(n,k): normalized trace of x along the path of node (n,k), i.e. of
/// block 2^(N-n) k when x lives at level N >= n (x is embedded first when
/// N < n). Constant along paths by construction.
std::complex<double> block_trace(const AfElement& x, int n, std::int64_t k);

/// Block of embed(x, level) at the given index, computed along the ancestor
/// cone only -- deep levels never get materialized. level >= level(x).
Eigen::MatrixXcd embedded_block(const AfElement& x, int level, std::int64_t index);

/// The trace field of x: breakpoints at the level-m nodes of x's diagram,
/// values tau_(m,k)(x). Affine interpolation reproduces every deeper block
/// trace exactly (mediant traces are the q-weighted averages of their
/// parents). Complex-valued in general, split into real and imaginary parts.
struct TraceField {
  PiecewiseAffineFn re;
  PiecewiseAffineFn im;

  std::complex<double> operator()(double theta) const { return {re(theta), im(theta)}; }
  std::complex<double> operator()(const Fraction& theta) const {
    return {re(theta), im(theta)};
  }
};
TraceField trace_field(const AfElement& x);

/// Evaluation along the path of the node labeled r: the matrix block of x at
/// that node, a *-homomorphism onto M_{den(r)}. Main-diagram elements only.
Eigen::MatrixXcd block_at(const AfElement& x, const Fraction& r);

/// tau_theta: the tracial state extending the Dirac measure at theta;
/// computed as the trace field evaluated at theta. Exact at node labels.
std::complex<double> trace_at(double theta, const AfElement& x);
std::complex<double> trace_at(const Fraction& theta, const AfElement& x);

/// Conditional expectation onto level m <= level(x), the composition of
/// one-step expectations; one step averages every diagonal copy of a block
/// (the even child plus the matching corners of the odd children). UCP,
/// idempotent, a module map over the embedded subalgebra, and the family
/// commutes: E_m E_n = E_n E_m = E_m for m <= n.
AfElement conditional_expectation(const AfElement& x, int m);

/// E_(n,k): conditional_expectation to level n followed by zeroing every
/// block but k.
AfElement block_expectation(const AfElement& x, int n, std::int64_t k);

/// Center embedding Z_n(f) = direct sum of f(label) * identity.
AfElement center_embed(const std::function<double(double)>& f, DiagramPtr diagram,
                       int level);
AfElement center_embed(const PiecewiseAffineFn& f, DiagramPtr diagram, int level);
AfElement center_embed(const TraceField& f, DiagramPtr diagram, int level);

/// Truncated center expectation: Z_N applied to the trace field of x.
/// Preserves every tau_(n,k) with n <= N and fixes center-embedded elements
/// at their own level.
AfElement center_expectation(const AfElement& x, int output_level);

enum class MatrixClass { general, hermitian, psd };

/// Random element with independent complex Gaussian entries per block
/// (symmetrized or squared per MatrixClass).
AfElement random_element(DiagramPtr diagram, int level, Rng& rng,
                         MatrixClass cls = MatrixClass::general);

}  // namespace ncgauss
