#include "ncgauss/diagram.hpp"

#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "ncgauss/farey.hpp"

namespace ncgauss {

namespace {

std::vector<Fraction> refine(const std::vector<Fraction>& nodes) {
  std::vector<Fraction> next;
  next.reserve(2 * nodes.size() - 1);
  for (std::size_t k = 0; k + 1 < nodes.size(); ++k) {
    next.push_back(nodes[k]);
    next.push_back(mediant(nodes[k], nodes[k + 1]));
  }
  next.push_back(nodes.back());
  return next;
}

}  // namespace

FareyDiagram::FareyDiagram(DiagramKind kind, int branch, int max_level)
    : kind_(kind), branch_(branch) {
  if (max_level < 0) throw std::invalid_argument("FareyDiagram: max_level >= 0");
  std::vector<Fraction> base;
  if (kind_ == DiagramKind::farey) {
    base = {Fraction(0, 1), Fraction(1, 1)};
  } else {
    if (branch_ < 1) throw std::invalid_argument("FareyDiagram: quotient branch >= 1");
    base = {Fraction(1, branch_ + 1), Fraction(1, branch_)};
  }
  levels_.push_back(base);
  for (int n = 0; n < max_level; ++n) levels_.push_back(refine(levels_.back()));
}

std::shared_ptr<const FareyDiagram> FareyDiagram::farey(int max_level) {
  return std::shared_ptr<const FareyDiagram>(
      new FareyDiagram(DiagramKind::farey, 0, max_level));
}

std::shared_ptr<const FareyDiagram> FareyDiagram::quotient(int branch, int max_level) {
  return std::shared_ptr<const FareyDiagram>(
      new FareyDiagram(DiagramKind::quotient, branch, max_level));
}

std::shared_ptr<const FareyDiagram> FareyDiagram::shared_farey(int min_levels) {
  return shared_quotient(0, min_levels);
}

std::shared_ptr<const FareyDiagram> FareyDiagram::shared_quotient(int branch,
                                                                  int min_levels) {
  static std::mutex mu;
  static std::map<int, std::shared_ptr<const FareyDiagram>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(branch);
  if (it == cache.end() || it->second->max_level() < min_levels) {
    const int depth = std::max(min_levels, 12);
    auto fresh = branch == 0 ? farey(depth) : quotient(branch, depth);
    cache[branch] = fresh;
    return fresh;
  }
  return it->second;
}

std::int64_t FareyDiagram::node_count(int level) const {
  return static_cast<std::int64_t>(labels(level).size());
}

const std::vector<Fraction>& FareyDiagram::labels(int level) const {
  if (level < 0 || level > max_level())
    throw std::out_of_range("FareyDiagram: level " + std::to_string(level) +
                            " outside built depth " + std::to_string(max_level()));
  return levels_[static_cast<std::size_t>(level)];
}

std::int64_t FareyDiagram::size_of(int level, std::int64_t k) const {
  const auto& row = labels(level);
  if (k < 0 || k >= static_cast<std::int64_t>(row.size()))
    throw std::out_of_range("FareyDiagram: node index out of range");
  return row[static_cast<std::size_t>(k)].den();
}

std::vector<std::int64_t> FareyDiagram::sizes(int level) const {
  const auto& row = labels(level);
  std::vector<std::int64_t> out;
  out.reserve(row.size());
  for (const Fraction& x : row) out.push_back(x.den());
  return out;
}

FareyDiagram::CornerShape FareyDiagram::corners(int level, std::int64_t k) const {
  const auto& row = labels(level);
  return corner_shape(kind_, branch_, row[static_cast<std::size_t>(k)]);
}

FareyDiagram::CornerShape FareyDiagram::corner_shape(DiagramKind kind, int branch,
                                                     const Fraction& x) {
  if (kind == DiagramKind::farey) return {1, x.den(), 0};
  // Quotient node g_s(p/q) = q/(p+sq): slots of size q, corner of size p.
  const std::int64_t q = x.num();
  const std::int64_t p = x.den() - static_cast<std::int64_t>(branch) * q;
  return {branch, q, p};
}

std::int64_t FareyDiagram::index_of(int level, const Fraction& x) const {
  const auto& row = labels(level);
  const auto it = std::lower_bound(row.begin(), row.end(), x);
  if (it == row.end() || *it != x) return -1;
  return static_cast<std::int64_t>(it - row.begin());
}

Eigen::MatrixXi FareyDiagram::connecting_matrix(int level) const {
  const std::int64_t cols = node_count(level);
  const std::int64_t rows = 2 * cols - 1;
  if (rows * cols > 40'000'000)
    throw std::length_error("connecting_matrix: dense form too large; use apply_connecting");
  Eigen::MatrixXi a = Eigen::MatrixXi::Zero(rows, cols);
  for (std::int64_t k = 0; k < cols; ++k) {
    a(2 * k, k) = 1;
    if (2 * k + 1 < rows) {
      a(2 * k + 1, k) = 1;
      a(2 * k + 1, k + 1) = 1;
    }
  }
  return a;
}

std::vector<std::int64_t> FareyDiagram::apply_connecting(
    int level, std::span<const std::int64_t> v) const {
  if (static_cast<std::int64_t>(v.size()) != node_count(level))
    throw std::invalid_argument("apply_connecting: size mismatch");
  std::vector<std::int64_t> out(2 * v.size() - 1);
  for (std::size_t k = 0; k < v.size(); ++k) {
    out[2 * k] = v[k];
    if (k + 1 < v.size()) out[2 * k + 1] = v[k] + v[k + 1];
  }
  return out;
}

std::string FareyDiagram::to_dot(int levels) const {
  if (levels > max_level()) throw std::out_of_range("to_dot: level beyond built depth");
  std::ostringstream os;
  os << "digraph bratteli {\n  rankdir=TB;\n  node [shape=circle fontsize=10];\n";
  for (int n = 0; n <= levels; ++n) {
    const auto& row = labels(n);
    os << "  { rank=same;";
    for (std::size_t k = 0; k < row.size(); ++k)
      os << " L" << n << "_" << k;
    os << " }\n";
    for (std::size_t k = 0; k < row.size(); ++k)
      os << "  L" << n << "_" << k << " [label=\"" << row[k].str() << "\\nM_"
         << row[k].den() << "\"];\n";
  }
  for (int n = 0; n < levels; ++n) {
    const std::int64_t cols = node_count(n);
    for (std::int64_t k = 0; k < cols; ++k) {
      os << "  L" << n << "_" << k << " -> L" << n + 1 << "_" << 2 * k << ";\n";
      if (2 * k + 1 < 2 * cols - 1) {
        os << "  L" << n << "_" << k << " -> L" << n + 1 << "_" << 2 * k + 1 << ";\n";
        os << "  L" << n << "_" << k + 1 << " -> L" << n + 1 << "_" << 2 * k + 1
           << ";\n";
      }
    }
  }
  os << "}\n";
  return os.str();
}

std::string FareyDiagram::to_json(int levels) const {
  if (levels > max_level()) throw std::out_of_range("to_json: level beyond built depth");
  nlohmann::ordered_json j;
  j["kind"] = kind_ == DiagramKind::farey ? "farey" : "quotient";
  j["branch"] = branch_;
  j["levels"] = nlohmann::ordered_json::array();
  for (int n = 0; n <= levels; ++n) {
    nlohmann::ordered_json row;
    row["level"] = n;
    row["nodes"] = nlohmann::ordered_json::array();
    for (const Fraction& x : labels(n)) {
      row["nodes"].push_back({{"label", x.str()}, {"size", x.den()}});
    }
    j["levels"].push_back(std::move(row));
  }
  // Edges are determined by the interleave pattern; emit them explicitly so
  // consumers need no knowledge of the construction.
  j["edges"] = nlohmann::ordered_json::array();
  for (int n = 0; n < levels; ++n) {
    const std::int64_t cols = node_count(n);
    for (std::int64_t k = 0; k < cols; ++k) {
      j["edges"].push_back({{"level", n}, {"from", k}, {"to", 2 * k}});
      if (2 * k + 1 < 2 * cols - 1) {
        j["edges"].push_back({{"level", n}, {"from", k}, {"to", 2 * k + 1}});
        j["edges"].push_back({{"level", n}, {"from", k + 1}, {"to", 2 * k + 1}});
      }
    }
  }
  return j.dump(2);
}

DiagramSummary diagram_from_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  const std::string kind_str = j.at("kind").get<std::string>();
  const DiagramKind kind =
      kind_str == "farey" ? DiagramKind::farey : DiagramKind::quotient;
  const int branch = j.at("branch").get<int>();
  const auto& levels = j.at("levels");
  const int depth = static_cast<int>(levels.size()) - 1;
  const DiagramPtr ref = kind == DiagramKind::farey
                             ? FareyDiagram::farey(depth)
                             : FareyDiagram::quotient(branch, depth);
  for (int n = 0; n <= depth; ++n) {
    const auto& row = levels.at(static_cast<std::size_t>(n)).at("nodes");
    if (static_cast<std::int64_t>(row.size()) != ref->node_count(n))
      throw std::runtime_error("diagram_from_json: node count mismatch at level " +
                               std::to_string(n));
    const auto& want = ref->labels(n);
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (row[k].at("label").get<std::string>() != want[k].str() ||
          row[k].at("size").get<std::int64_t>() != want[k].den())
        throw std::runtime_error("diagram_from_json: node mismatch at level " +
                                 std::to_string(n));
    }
  }
  // Edge check: every emitted edge must match the interleave pattern.
  for (const auto& e : j.at("edges")) {
    const std::int64_t from = e.at("from").get<std::int64_t>();
    const std::int64_t to = e.at("to").get<std::int64_t>();
    if (to != 2 * from && to != 2 * from + 1 && to != 2 * from - 1)
      throw std::runtime_error("diagram_from_json: edge outside interleave pattern");
  }
  return {kind, branch, depth};
}

}  // namespace ncgauss
