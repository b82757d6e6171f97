#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "ncgauss/fraction.hpp"

namespace ncgauss {

enum class DiagramKind { farey, quotient };

/// Leveled Bratteli-type diagram of the Farey refinement. Two flavors share
/// one implementation:
///
///  - farey: level n carries the 2^n+1 Farey nodes of [0,1]; the matrix size
///    at a node is the label's denominator.
///  - quotient (branch s): level m carries the mediant refinement of
///    [1/(s+1), 1/s]; node labels are the images g_s(u) of the Farey nodes u
///    (stored ascending), and sizes are again the label denominators, i.e.
///    p + s q for the preimage u = p/q. Each quotient block additionally
///    carries a corner layout: s diagonal q x q slots followed by a p corner.
///
/// Consecutive labels in either flavor are Farey neighbors (determinant one),
/// so mediant insertion generates both. Immutable after construction; levels
/// 0..max_level are built eagerly.
class FareyDiagram {
 public:
  static std::shared_ptr<const FareyDiagram> farey(int max_level);
  static std::shared_ptr<const FareyDiagram> quotient(int branch, int max_level);

  /// Memoized shared instances (grown on demand); values are immutable.
  static std::shared_ptr<const FareyDiagram> shared_farey(int min_levels);
  static std::shared_ptr<const FareyDiagram> shared_quotient(int branch, int min_levels);

  DiagramKind kind() const { return kind_; }
  int branch() const { return branch_; }
  int max_level() const { return static_cast<int>(levels_.size()) - 1; }

  std::int64_t node_count(int level) const;
  const std::vector<Fraction>& labels(int level) const;
  std::int64_t size_of(int level, std::int64_t k) const;
  std::vector<std::int64_t> sizes(int level) const;

  /// Corner layout of the block at (level, k): `copies` diagonal slots of
  /// size q followed by one corner of size p (so size = copies*q + p).
  /// For the main diagram this degenerates to one slot of the full size.
  struct CornerShape {
    int copies = 1;
    std::int64_t q = 0;
    std::int64_t p = 0;
  };
  CornerShape corners(int level, std::int64_t k) const;

  /// Corner layout determined by a node label alone (labels determine sizes
  /// in both flavors, so deep cone computations need no materialized level).
  static CornerShape corner_shape(DiagramKind kind, int branch, const Fraction& label);

  /// Index of the node labeled x at `level`, or -1 when absent.
  std::int64_t index_of(int level, const Fraction& x) const;

  /// Connecting multiplicity matrix A_n from level n to n+1: row 2k has its
  /// single 1 in column k, row 2k+1 has 1s in columns k and k+1. Dense form,
  /// guarded against silly sizes.
  Eigen::MatrixXi connecting_matrix(int level) const;

  /// Sparse application of A_n to a per-node integer vector.
  std::vector<std::int64_t> apply_connecting(int level,
                                             std::span<const std::int64_t> v) const;

  /// Same family = same kind and branch (instances may differ in depth).
  bool same_family(const FareyDiagram& other) const {
    return kind_ == other.kind_ && branch_ == other.branch_;
  }

  /// DOT and JSON renderings of levels 0..levels (inclusive).
  std::string to_dot(int levels) const;
  std::string to_json(int levels) const;

 private:
  FareyDiagram(DiagramKind kind, int branch, int max_level);

  DiagramKind kind_;
  int branch_;  // 0 for the main diagram
  std::vector<std::vector<Fraction>> levels_;
};

using DiagramPtr = std::shared_ptr<const FareyDiagram>;

/// Validate a JSON rendering produced by to_json against a freshly built
/// diagram; returns the reconstructed (kind, branch, levels) and throws on
/// any mismatch in labels, sizes, or edges.
struct DiagramSummary {
  DiagramKind kind;
  int branch;
  int levels;
};
DiagramSummary diagram_from_json(const std::string& text);

}  // namespace ncgauss
