#include "ncgauss/branch_maps.hpp"

#include <stdexcept>

#include "ncgauss/farey.hpp"
#include "ncgauss/transfer.hpp"

namespace ncgauss {

WindowSpan window_span(const FareyDiagram& main, int s, int level) {
  if (main.kind() != DiagramKind::farey)
    throw std::invalid_argument("window_span: main diagram required");
  if (s < 1) throw std::invalid_argument("window_span: s >= 1");
  if (level < s)
    throw std::invalid_argument("window_span: window absent below level s");
  const std::int64_t first = main.index_of(level, Fraction(1, s + 1));
  const std::int64_t last = main.index_of(level, Fraction(1, s));
  if (first < 0 || last < 0 || last - first != (std::int64_t{1} << (level - s)))
    throw std::logic_error("window_span: malformed window");
  return {first, last};
}

AfElement quotient_project(const AfElement& x, int s) {
  const FareyDiagram& d = x.diagram();
  if (d.kind() != DiagramKind::farey)
    throw std::invalid_argument("quotient_project: main-diagram element required");
  if (s < 1) throw std::invalid_argument("quotient_project: s >= 1");
  // Below level s the window does not exist yet; embed along the cone first.
  if (x.level() < s) return quotient_project_embedded(x, s, 0);
  const int m = x.level() - s;
  const WindowSpan w = window_span(d, s, x.level());
  DiagramPtr qd = FareyDiagram::shared_quotient(s, m);
  std::vector<Eigen::MatrixXcd> blocks;
  blocks.reserve(static_cast<std::size_t>(w.last - w.first + 1));
  for (std::int64_t j = w.first; j <= w.last; ++j) blocks.push_back(x.block(j));
  return AfElement(std::move(qd), m, std::move(blocks));
}

AfElement quotient_project_embedded(const AfElement& x, int s, int quotient_level) {
  const FareyDiagram& d = x.diagram();
  if (d.kind() != DiagramKind::farey)
    throw std::invalid_argument("quotient_project_embedded: main-diagram element");
  if (s < 1 || quotient_level < 0)
    throw std::invalid_argument("quotient_project_embedded: bad parameters");
  const int deep = quotient_level + s;
  if (deep < x.level())
    throw std::invalid_argument("quotient_project_embedded: level below element");
  if (deep <= x.diagram().max_level() && deep <= 9)
    return quotient_project(embed(x, deep), s);
  // Window of branch s at level b+s spans indices [2^b, 2^{b+1}]: the nodes
  // 1/(s+1) and 1/s first appear at (s, 1) and (s-1, 1).
  const std::int64_t w0 = std::int64_t{1} << quotient_level;
  const std::int64_t w1 = std::int64_t{1} << (quotient_level + 1);
  DiagramPtr qd = FareyDiagram::shared_quotient(s, quotient_level);
  std::int64_t entries = 0;
  for (std::int64_t size : qd->sizes(quotient_level)) entries += size * size;
  if (entries > 40'000'000)
    throw resource_error("quotient_project_embedded: branch " + std::to_string(s) +
                         " at quotient level " + std::to_string(quotient_level) +
                         " exceeds the matrix budget");
  std::vector<Eigen::MatrixXcd> blocks;
  blocks.reserve(static_cast<std::size_t>(w1 - w0 + 1));
  for (std::int64_t j = w0; j <= w1; ++j)
    blocks.push_back(embedded_block(x, deep, j));
  return AfElement(std::move(qd), quotient_level, std::move(blocks));
}

AfElement quotient_inflate(const AfElement& x, int s) {
  const FareyDiagram& d = x.diagram();
  if (d.kind() != DiagramKind::farey)
    throw std::invalid_argument("quotient_inflate: main-diagram element required");
  const int m = x.level();
  DiagramPtr qd = FareyDiagram::shared_quotient(s, m);
  const std::int64_t count = x.block_count();
  std::vector<Eigen::MatrixXcd> blocks(static_cast<std::size_t>(count));
  for (std::int64_t j = 0; j < count; ++j) {
    // Ascending quotient node j corresponds to the main node 2^m - j under
    // the order-reversing label map.
    const std::int64_t k = count - 1 - j;
    const auto shape = qd->corners(m, j);
    Eigen::MatrixXcd out =
        Eigen::MatrixXcd::Zero(shape.copies * shape.q + shape.p,
                               shape.copies * shape.q + shape.p);
    const Eigen::MatrixXcd& src = x.block(k);
    if (src.rows() != shape.q)
      throw std::logic_error("quotient_inflate: slot size mismatch");
    for (int i = 0; i < shape.copies; ++i)
      out.block(i * shape.q, i * shape.q, shape.q, shape.q) = src;
    blocks[static_cast<std::size_t>(j)] = std::move(out);
  }
  return AfElement(std::move(qd), m, std::move(blocks));
}

AfElement quotient_average(const AfElement& y) {
  const FareyDiagram& d = y.diagram();
  if (d.kind() != DiagramKind::quotient)
    throw std::invalid_argument("quotient_average: quotient element required");
  const int m = y.level();
  DiagramPtr md = FareyDiagram::shared_farey(m);
  const std::int64_t count = y.block_count();
  std::vector<Eigen::MatrixXcd> blocks(static_cast<std::size_t>(count));
  for (std::int64_t k = 0; k < count; ++k) {
    const std::int64_t j = count - 1 - k;
    const auto shape = d.corners(m, j);
    Eigen::MatrixXcd mean = Eigen::MatrixXcd::Zero(shape.q, shape.q);
    for (int i = 0; i < shape.copies; ++i)
      mean += y.block(j).block(i * shape.q, i * shape.q, shape.q, shape.q);
    blocks[static_cast<std::size_t>(k)] = mean / static_cast<double>(shape.copies);
  }
  return AfElement(std::move(md), m, std::move(blocks));
}

AfElement quotient_lift(const AfElement& y, LiftFill fill) {
  const FareyDiagram& d = y.diagram();
  if (d.kind() != DiagramKind::quotient)
    throw std::invalid_argument("quotient_lift: quotient element required");
  const int s = d.branch();
  const int m = y.level();
  const int out_level = m + s;
  DiagramPtr md = FareyDiagram::shared_farey(out_level);
  const WindowSpan w = window_span(*md, s, out_level);
  auto norm_trace = [&](std::int64_t j) {
    const auto& b = y.block(j);
    return b.trace() / static_cast<double>(b.rows());
  };
  const std::complex<double> lo_fill = norm_trace(0);
  const std::complex<double> hi_fill = norm_trace(y.block_count() - 1);
  const std::complex<double> mean_fill = 0.5 * (lo_fill + hi_fill);
  const Fraction window_lo(1, s + 1);
  const std::int64_t count = md->node_count(out_level);
  const auto& labels = md->labels(out_level);
  std::vector<Eigen::MatrixXcd> blocks(static_cast<std::size_t>(count));
  for (std::int64_t k = 0; k < count; ++k) {
    if (k >= w.first && k <= w.last) {
      blocks[static_cast<std::size_t>(k)] = y.block(k - w.first);
      continue;
    }
    std::complex<double> c = mean_fill;
    if (fill == LiftFill::nearest_edge)
      c = labels[static_cast<std::size_t>(k)] < window_lo ? lo_fill : hi_fill;
    const std::int64_t size = md->size_of(out_level, k);
    blocks[static_cast<std::size_t>(k)] =
        c * Eigen::MatrixXcd::Identity(size, size);
  }
  return AfElement(std::move(md), out_level, std::move(blocks));
}

AfElement branch_expand(const AfElement& x, int s, LiftFill fill) {
  return quotient_lift(quotient_inflate(x, s), fill);
}

AfElement branch_compress(const AfElement& x, int s) {
  if (x.level() < s)
    throw std::invalid_argument("branch_compress: needs level(x) >= s");
  return quotient_average(quotient_project(x, s));
}

namespace {

/// Total matrix entries of a full level-`level` element, computed from the
/// denominator recursion alone and capped: the first level that exceeds the
/// cap stops the iteration, so nothing deep is ever materialized.
std::int64_t level_entries_capped(int level, std::int64_t cap) {
  std::vector<std::int64_t> dens = {1, 1};
  for (int n = 0;; ++n) {
    std::int64_t sum = 0;
    for (std::int64_t q : dens) {
      sum += q * q;
      if (sum > cap) return cap + 1;
    }
    if (n == level) return sum;
    std::vector<std::int64_t> next;
    next.reserve(2 * dens.size() - 1);
    for (std::size_t k = 0; k + 1 < dens.size(); ++k) {
      next.push_back(dens[k]);
      next.push_back(dens[k] + dens[k + 1]);
    }
    next.push_back(dens.back());
    dens = std::move(next);
  }
}

constexpr std::int64_t kEntryBudget = 20'000'000;

}  // namespace

NcGaussResult nc_gauss_map(const AfElement& x, int S, int N) {
  if (S < 1) throw std::invalid_argument("nc_gauss_map: S >= 1");
  if (N < x.level() + S)
    throw std::invalid_argument("nc_gauss_map: need N >= level(x) + S");
  // Fibonacci growth makes anything much deeper than desk scale explode.
  if (level_entries_capped(N, kEntryBudget) > kEntryBudget)
    throw resource_error("nc_gauss_map: level " + std::to_string(N) +
                         " exceeds the matrix budget");
  DiagramPtr md = FareyDiagram::shared_farey(N);
  const int out_level = N - S;
  AfElement acc = AfElement::zero(md, out_level);
  for (int s = 1; s <= S; ++s) {
    const AfElement branch = branch_compress(embed(x, out_level + s), s);
    const AfElement weight = center_embed(
        [s](double t) { return branch_weight(s, t); }, md, out_level);
    acc = acc + branch * weight;
  }
  const double tail = 2.0 * x.op_norm() / static_cast<double>(S + 2);
  return {std::move(acc), tail};
}

NcGaussResult nc_gauss_center(const std::function<double(double)>& f, double sup_abs_f,
                              int S, int output_level) {
  if (S < 1) throw std::invalid_argument("nc_gauss_center: S >= 1");
  if (level_entries_capped(output_level + S, kEntryBudget) > kEntryBudget)
    throw resource_error("nc_gauss_center: level " +
                         std::to_string(output_level + S) +
                         " exceeds the matrix budget");
  DiagramPtr md = FareyDiagram::shared_farey(output_level + S);
  AfElement acc = AfElement::zero(md, output_level);
  for (int s = 1; s <= S; ++s) {
    const AfElement branch = branch_compress(center_embed(f, md, output_level + s), s);
    const AfElement weight = center_embed(
        [s](double t) { return branch_weight(s, t); }, md, output_level);
    acc = acc + branch * weight;
  }
  return {std::move(acc), 2.0 * sup_abs_f / static_cast<double>(S + 2)};
}

}  // namespace ncgauss
