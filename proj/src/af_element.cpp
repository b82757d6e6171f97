#include "ncgauss/af_element.hpp"

#include <map>
#include <stdexcept>
#include <utility>

#include "ncgauss/farey.hpp"

namespace ncgauss {

namespace {

void require_same_shape(const AfElement& a, const AfElement& b, const char* what) {
  if (!a.diagram().same_family(b.diagram()) || a.level() != b.level())
    throw std::invalid_argument(std::string(what) +
                                ": operands must share diagram family and level");
}

/// New-block coordinates of the two parents inside the odd child 2j+1.
///
/// Main diagram: the odd child is diag(parent_j, parent_{j+1}).
/// Quotient diagram: the odd child keeps the corner layout -- slot i is the
/// direct sum of the parents' slot i (higher-label parent leading) and the
/// p corner is the direct sum of the parents' p corners. This is the unitary
/// conjugate of the plain interleave that makes the inflate/average maps
/// commute with embedding exactly.
struct OddChildMaps {
  std::vector<std::int64_t> left;
  std::vector<std::int64_t> right;
};

using CornerShape = FareyDiagram::CornerShape;

OddChildMaps odd_child_maps_from(DiagramKind kind, const CornerShape& L,
                                 const CornerShape& R) {
  OddChildMaps maps;
  maps.left.resize(static_cast<std::size_t>(L.copies * L.q + L.p));
  maps.right.resize(static_cast<std::size_t>(R.copies * R.q + R.p));
  if (kind == DiagramKind::farey) {
    const std::int64_t cL = L.q;
    for (std::int64_t t = 0; t < cL; ++t) maps.left[static_cast<std::size_t>(t)] = t;
    for (std::int64_t t = 0; t < R.q; ++t)
      maps.right[static_cast<std::size_t>(t)] = cL + t;
    return maps;
  }
  const std::int64_t qn = L.q + R.q;  // slot size of the child
  const std::int64_t s = L.copies;
  for (std::int64_t i = 0; i < s; ++i) {
    for (std::int64_t o = 0; o < R.q; ++o)
      maps.right[static_cast<std::size_t>(i * R.q + o)] = i * qn + o;
    for (std::int64_t o = 0; o < L.q; ++o)
      maps.left[static_cast<std::size_t>(i * L.q + o)] = i * qn + R.q + o;
  }
  for (std::int64_t o = 0; o < R.p; ++o)
    maps.right[static_cast<std::size_t>(s * R.q + o)] = s * qn + o;
  for (std::int64_t o = 0; o < L.p; ++o)
    maps.left[static_cast<std::size_t>(s * L.q + o)] = s * qn + R.p + o;
  return maps;
}

OddChildMaps odd_child_maps(const FareyDiagram& d, int level, std::int64_t j) {
  return odd_child_maps_from(d.kind(), d.corners(level, j), d.corners(level, j + 1));
}

void scatter(Eigen::MatrixXcd& dst, const Eigen::MatrixXcd& src,
             const std::vector<std::int64_t>& map) {
  for (std::int64_t a = 0; a < src.rows(); ++a)
    for (std::int64_t b = 0; b < src.cols(); ++b)
      dst(map[static_cast<std::size_t>(a)], map[static_cast<std::size_t>(b)]) =
          src(a, b);
}

Eigen::MatrixXcd gather(const Eigen::MatrixXcd& src,
                        const std::vector<std::int64_t>& map) {
  const std::int64_t n = static_cast<std::int64_t>(map.size());
  Eigen::MatrixXcd out(n, n);
  for (std::int64_t a = 0; a < n; ++a)
    for (std::int64_t b = 0; b < n; ++b)
      out(a, b) = src(map[static_cast<std::size_t>(a)], map[static_cast<std::size_t>(b)]);
  return out;
}

AfElement one_step_embed(const AfElement& x) {
  const FareyDiagram& d = x.diagram();
  const int n = x.level();
  const std::int64_t count = x.block_count();
  std::vector<Eigen::MatrixXcd> blocks(static_cast<std::size_t>(2 * count - 1));
  for (std::int64_t k = 0; k < count; ++k)
    blocks[static_cast<std::size_t>(2 * k)] = x.block(k);
  for (std::int64_t j = 0; j + 1 < count; ++j) {
    const std::int64_t size = d.size_of(n + 1, 2 * j + 1);
    Eigen::MatrixXcd child = Eigen::MatrixXcd::Zero(size, size);
    const OddChildMaps maps = odd_child_maps(d, n, j);
    scatter(child, x.block(j), maps.left);
    scatter(child, x.block(j + 1), maps.right);
    blocks[static_cast<std::size_t>(2 * j + 1)] = std::move(child);
  }
  return AfElement(x.diagram_ptr(), n + 1, std::move(blocks));
}

AfElement one_step_expectation(const AfElement& x) {
  const FareyDiagram& d = x.diagram();
  const int n = x.level() - 1;
  const std::int64_t count = d.node_count(n);
  std::vector<Eigen::MatrixXcd> blocks(static_cast<std::size_t>(count));
  for (std::int64_t k = 0; k < count; ++k) {
    Eigen::MatrixXcd acc = x.block(2 * k);
    int copies = 1;
    if (k > 0) {  // this block's copy sits trailing inside the odd child 2k-1
      acc += gather(x.block(2 * k - 1), odd_child_maps(d, n, k - 1).right);
      ++copies;
    }
    if (k + 1 < count) {  // and leading inside the odd child 2k+1
      acc += gather(x.block(2 * k + 1), odd_child_maps(d, n, k).left);
      ++copies;
    }
    blocks[static_cast<std::size_t>(k)] = acc / static_cast<double>(copies);
  }
  return AfElement(x.diagram_ptr(), n, std::move(blocks));
}

}  // namespace

AfElement::AfElement(DiagramPtr diagram, int level, std::vector<Eigen::MatrixXcd> blocks)
    : diagram_(std::move(diagram)), level_(level), blocks_(std::move(blocks)) {
  if (!diagram_) throw std::invalid_argument("AfElement: null diagram");
  if (level_ < 0 || level_ > diagram_->max_level())
    throw std::length_error("AfElement: level outside the diagram's built depth");
  if (static_cast<std::int64_t>(blocks_.size()) != diagram_->node_count(level_))
    throw std::invalid_argument("AfElement: block count != node count");
  for (std::int64_t k = 0; k < static_cast<std::int64_t>(blocks_.size()); ++k) {
    const std::int64_t size = diagram_->size_of(level_, k);
    const auto& b = blocks_[static_cast<std::size_t>(k)];
    if (b.rows() != size || b.cols() != size)
      throw std::invalid_argument("AfElement: block " + std::to_string(k) +
                                  " has wrong shape");
  }
}

AfElement AfElement::identity(DiagramPtr diagram, int level) {
  std::vector<Eigen::MatrixXcd> blocks;
  const std::int64_t count = diagram->node_count(level);
  blocks.reserve(static_cast<std::size_t>(count));
  for (std::int64_t k = 0; k < count; ++k) {
    const std::int64_t size = diagram->size_of(level, k);
    blocks.push_back(Eigen::MatrixXcd::Identity(size, size));
  }
  return AfElement(std::move(diagram), level, std::move(blocks));
}

AfElement AfElement::zero(DiagramPtr diagram, int level) {
  std::vector<Eigen::MatrixXcd> blocks;
  const std::int64_t count = diagram->node_count(level);
  blocks.reserve(static_cast<std::size_t>(count));
  for (std::int64_t k = 0; k < count; ++k) {
    const std::int64_t size = diagram->size_of(level, k);
    blocks.push_back(Eigen::MatrixXcd::Zero(size, size));
  }
  return AfElement(std::move(diagram), level, std::move(blocks));
}

AfElement AfElement::with_block(std::int64_t k, Eigen::MatrixXcd m) const {
  std::vector<Eigen::MatrixXcd> blocks = blocks_;
  if (k < 0 || k >= block_count()) throw std::out_of_range("with_block: index");
  if (m.rows() != blocks_[static_cast<std::size_t>(k)].rows() ||
      m.cols() != blocks_[static_cast<std::size_t>(k)].cols())
    throw std::invalid_argument("with_block: shape mismatch");
  blocks[static_cast<std::size_t>(k)] = std::move(m);
  return AfElement(diagram_, level_, std::move(blocks));
}

AfElement AfElement::adjoint() const {
  std::vector<Eigen::MatrixXcd> blocks;
  blocks.reserve(blocks_.size());
  for (const auto& b : blocks_) blocks.push_back(b.adjoint());
  return AfElement(diagram_, level_, std::move(blocks));
}

double AfElement::op_norm() const {
  double m = 0.0;
  for (const auto& b : blocks_) {
    if (b.rows() == 1) {
      m = std::max(m, std::abs(b(0, 0)));
    } else {
      Eigen::JacobiSVD<Eigen::MatrixXcd> svd(b);
      m = std::max(m, svd.singularValues()(0));
    }
  }
  return m;
}

double AfElement::max_diff(const AfElement& other) const {
  require_same_shape(*this, other, "max_diff");
  double m = 0.0;
  for (std::size_t k = 0; k < blocks_.size(); ++k)
    m = std::max(m, (blocks_[k] - other.blocks_[k]).cwiseAbs().maxCoeff());
  return m;
}

AfElement operator+(const AfElement& a, const AfElement& b) {
  require_same_shape(a, b, "operator+");
  std::vector<Eigen::MatrixXcd> blocks;
  blocks.reserve(a.blocks_.size());
  for (std::size_t k = 0; k < a.blocks_.size(); ++k)
    blocks.push_back(a.blocks_[k] + b.blocks_[k]);
  return AfElement(a.diagram_, a.level_, std::move(blocks));
}

AfElement operator-(const AfElement& a, const AfElement& b) {
  require_same_shape(a, b, "operator-");
  std::vector<Eigen::MatrixXcd> blocks;
  blocks.reserve(a.blocks_.size());
  for (std::size_t k = 0; k < a.blocks_.size(); ++k)
    blocks.push_back(a.blocks_[k] - b.blocks_[k]);
  return AfElement(a.diagram_, a.level_, std::move(blocks));
}

AfElement operator*(const AfElement& a, const AfElement& b) {
  require_same_shape(a, b, "operator*");
  std::vector<Eigen::MatrixXcd> blocks;
  blocks.reserve(a.blocks_.size());
  for (std::size_t k = 0; k < a.blocks_.size(); ++k)
    blocks.push_back(a.blocks_[k] * b.blocks_[k]);
  return AfElement(a.diagram_, a.level_, std::move(blocks));
}

AfElement operator*(std::complex<double> c, const AfElement& a) {
  std::vector<Eigen::MatrixXcd> blocks;
  blocks.reserve(a.blocks_.size());
  for (const auto& b : a.blocks_) blocks.push_back(c * b);
  return AfElement(a.diagram_, a.level_, std::move(blocks));
}

AfElement embed(const AfElement& x, int to_level) {
  if (to_level < x.level())
    throw std::invalid_argument("embed: target level below element level");
  AfElement out = x;
  if (to_level > x.diagram().max_level()) {
    // Re-root on a deeper shared instance of the same family; labels and
    // sizes are deterministic, so blocks carry over verbatim.
    DiagramPtr deeper = x.diagram().kind() == DiagramKind::farey
                            ? FareyDiagram::shared_farey(to_level)
                            : FareyDiagram::shared_quotient(x.diagram().branch(),
                                                            to_level);
    std::vector<Eigen::MatrixXcd> blocks;
    blocks.reserve(static_cast<std::size_t>(x.block_count()));
    for (std::int64_t k = 0; k < x.block_count(); ++k) blocks.push_back(x.block(k));
    out = AfElement(std::move(deeper), x.level(), std::move(blocks));
  }
  for (int n = x.level(); n < to_level; ++n) out = one_step_embed(out);
  return out;
}

std::complex<double> block_trace(const AfElement& x, int n, std::int64_t k) {
  if (n < 0 || k < 0 || k >= (std::int64_t{1} << n) + 1)
    throw std::out_of_range("block_trace: invalid node");
  if (x.level() < n) {
    const Eigen::MatrixXcd b = embedded_block(x, n, k);
    return b.trace() / static_cast<double>(b.rows());
  }
  const std::int64_t index = k << (x.level() - n);
  const auto& b = x.block(index);
  return b.trace() / static_cast<double>(b.rows());
}

namespace {

/// Labels and blocks along the ancestor cone of one deep node; levels above
/// x's own never get materialized.
class EmbeddingCone {
 public:
  explicit EmbeddingCone(const AfElement& x) : x_(x) {}

  Fraction label(int level, std::int64_t index) {
    if (level <= x_.level())
      return x_.diagram().labels(level)[static_cast<std::size_t>(index)];
    const auto key = std::make_pair(level, index);
    auto it = labels_.find(key);
    if (it != labels_.end()) return it->second;
    Fraction out = index % 2 == 0
                       ? label(level - 1, index / 2)
                       : mediant(label(level - 1, (index - 1) / 2),
                                 label(level - 1, (index + 1) / 2));
    labels_.emplace(key, out);
    return out;
  }

  Eigen::MatrixXcd block(int level, std::int64_t index) {
    if (level == x_.level()) return x_.block(index);
    if (index % 2 == 0) return block(level - 1, index / 2);
    const auto key = std::make_pair(level, index);
    auto it = blocks_.find(key);
    if (it != blocks_.end()) return it->second;
    const DiagramKind kind = x_.diagram().kind();
    const int branch = x_.diagram().branch();
    const CornerShape shape_l =
        FareyDiagram::corner_shape(kind, branch, label(level - 1, (index - 1) / 2));
    const CornerShape shape_r =
        FareyDiagram::corner_shape(kind, branch, label(level - 1, (index + 1) / 2));
    const OddChildMaps maps = odd_child_maps_from(kind, shape_l, shape_r);
    const std::int64_t size =
        static_cast<std::int64_t>(maps.left.size() + maps.right.size());
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(size, size);
    scatter(out, block(level - 1, (index - 1) / 2), maps.left);
    scatter(out, block(level - 1, (index + 1) / 2), maps.right);
    blocks_.emplace(key, out);
    return out;
  }

 private:
  const AfElement& x_;
  std::map<std::pair<int, std::int64_t>, Fraction> labels_;
  std::map<std::pair<int, std::int64_t>, Eigen::MatrixXcd> blocks_;
};

}  // namespace

Eigen::MatrixXcd embedded_block(const AfElement& x, int level, std::int64_t index) {
  if (level < x.level())
    throw std::invalid_argument("embedded_block: level below element level");
  if (index < 0 || index > (std::int64_t{1} << level))
    throw std::out_of_range("embedded_block: index");
  EmbeddingCone cone(x);
  return cone.block(level, index);
}

TraceField trace_field(const AfElement& x) {
  const auto& labels = x.diagram().labels(x.level());
  std::vector<double> re(labels.size()), im(labels.size());
  for (std::size_t k = 0; k < labels.size(); ++k) {
    const auto& b = x.block(static_cast<std::int64_t>(k));
    const std::complex<double> t = b.trace() / static_cast<double>(b.rows());
    re[k] = t.real();
    im[k] = t.imag();
  }
  std::vector<Fraction> xs(labels.begin(), labels.end());
  return TraceField{PiecewiseAffineFn(xs, std::move(re)),
                    PiecewiseAffineFn(std::move(xs), std::move(im))};
}

Eigen::MatrixXcd block_at(const AfElement& x, const Fraction& r) {
  if (x.diagram().kind() != DiagramKind::farey)
    throw std::invalid_argument("block_at: main-diagram elements only");
  const NodeIndex at = locate(r);
  if (at.level > x.level()) return block_at(embed(x, at.level), r);
  return x.block(at.index << (x.level() - at.level));
}

std::complex<double> trace_at(double theta, const AfElement& x) {
  return trace_field(x)(theta);
}

std::complex<double> trace_at(const Fraction& theta, const AfElement& x) {
  return trace_field(x)(theta);
}

AfElement conditional_expectation(const AfElement& x, int m) {
  if (m < 0 || m > x.level())
    throw std::invalid_argument("conditional_expectation: target level above element");
  AfElement out = x;
  for (int n = x.level(); n > m; --n) out = one_step_expectation(out);
  return out;
}

AfElement block_expectation(const AfElement& x, int n, std::int64_t k) {
  AfElement e = conditional_expectation(x, n);
  if (k < 0 || k >= e.block_count()) throw std::out_of_range("block_expectation: index");
  std::vector<Eigen::MatrixXcd> blocks;
  blocks.reserve(static_cast<std::size_t>(e.block_count()));
  for (std::int64_t j = 0; j < e.block_count(); ++j) {
    blocks.push_back(j == k ? e.block(j)
                            : Eigen::MatrixXcd::Zero(e.block(j).rows(), e.block(j).cols())
                                  .eval());
  }
  return AfElement(x.diagram_ptr(), n, std::move(blocks));
}

namespace {

template <typename Eval>
AfElement center_embed_impl(Eval&& value_at, DiagramPtr diagram, int level) {
  const auto& labels = diagram->labels(level);
  std::vector<Eigen::MatrixXcd> blocks;
  blocks.reserve(labels.size());
  for (std::size_t k = 0; k < labels.size(); ++k) {
    const std::int64_t size = labels[k].den();
    blocks.push_back(std::complex<double>(value_at(labels[k])) *
                     Eigen::MatrixXcd::Identity(size, size));
  }
  return AfElement(std::move(diagram), level, std::move(blocks));
}

}  // namespace

AfElement center_embed(const std::function<double(double)>& f, DiagramPtr diagram,
                       int level) {
  return center_embed_impl([&](const Fraction& x) { return f(x.value()); },
                           std::move(diagram), level);
}

AfElement center_embed(const PiecewiseAffineFn& f, DiagramPtr diagram, int level) {
  return center_embed_impl([&](const Fraction& x) { return f(x); }, std::move(diagram),
                           level);
}

AfElement center_embed(const TraceField& f, DiagramPtr diagram, int level) {
  return center_embed_impl([&](const Fraction& x) { return f(x); }, std::move(diagram),
                           level);
}

AfElement center_expectation(const AfElement& x, int output_level) {
  if (output_level < x.level())
    throw std::invalid_argument("center_expectation: output level below element");
  return center_embed(trace_field(x), x.diagram_ptr(), output_level);
}

AfElement random_element(DiagramPtr diagram, int level, Rng& rng, MatrixClass cls) {
  const std::int64_t count = diagram->node_count(level);
  std::vector<Eigen::MatrixXcd> blocks;
  blocks.reserve(static_cast<std::size_t>(count));
  for (std::int64_t k = 0; k < count; ++k) {
    const std::int64_t size = diagram->size_of(level, k);
    Eigen::MatrixXcd m(size, size);
    const double scale = 1.0 / std::sqrt(2.0 * static_cast<double>(size));
    for (std::int64_t a = 0; a < size; ++a)
      for (std::int64_t b = 0; b < size; ++b) m(a, b) = scale * rng.cnormal();
    switch (cls) {
      case MatrixClass::general:
        break;
      case MatrixClass::hermitian:
        m = 0.5 * (m + m.adjoint()).eval();
        break;
      case MatrixClass::psd:
        m = (m.adjoint() * m).eval();
        break;
    }
    blocks.push_back(std::move(m));
  }
  return AfElement(std::move(diagram), level, std::move(blocks));
}

}  // namespace ncgauss
