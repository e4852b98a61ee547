#pragma once

// Labeled forests/trees on the complete graph K_n and the interpolation
// matrices X^F(w) of the forest formula.

#include "lve/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <compare>
#include <cstddef>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

namespace lve {

/// Unordered vertex pair, stored with 1 <= i < j.
struct Edge {
  int i = 0;
  int j = 0;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

inline Edge make_edge(int u, int v) { return u < v ? Edge{u, v} : Edge{v, u}; }

namespace detail {

struct DisjointSets {
  explicit DisjointSets(int n) : parent(static_cast<std::size_t>(n) + 1) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[a] = b;
    return true;
  }
  std::vector<int> parent;
};

}  // namespace detail

/// Acyclic edge set over vertices 1..n. Edges are kept sorted.
class LabeledForest {
 public:
  LabeledForest() = default;

  LabeledForest(int n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
    if (n_ < 1) throw ContractViolation("forest needs at least one vertex");
    for (auto& e : edges_) {
      e = make_edge(e.i, e.j);
      if (e.i < 1 || e.j > n_ || e.i == e.j)
        throw ContractViolation("edge " + std::to_string(e.i) + "-" + std::to_string(e.j) +
                                " invalid for n=" + std::to_string(n_));
    }
    std::sort(edges_.begin(), edges_.end());
    detail::DisjointSets ds(n_);
    for (const auto& e : edges_)
      if (!ds.unite(e.i, e.j)) throw ContractViolation("edge set contains a cycle");
  }

  int vertex_count() const { return n_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::size_t edge_count() const { return edges_.size(); }
  bool is_tree() const { return edges_.size() + 1 == static_cast<std::size_t>(n_); }

  /// Vertex degrees, indexed 1..n (index 0 unused).
  std::vector<int> degrees() const {
    std::vector<int> d(static_cast<std::size_t>(n_) + 1, 0);
    for (const auto& e : edges_) {
      ++d[e.i];
      ++d[e.j];
    }
    return d;
  }

  /// Canonical text form "n;i-j,i-j,..." with edges in lexicographic order.
  std::string to_string() const {
    std::ostringstream os;
    os << n_ << ';';
    for (std::size_t k = 0; k < edges_.size(); ++k)
      os << (k ? "," : "") << edges_[k].i << '-' << edges_[k].j;
    return os.str();
  }

  static LabeledForest parse(const std::string& text) {
    const auto semi = text.find(';');
    if (semi == std::string::npos) throw ContractViolation("forest encoding lacks ';': " + text);
    int n = 0;
    try {
      n = std::stoi(text.substr(0, semi));
    } catch (const std::exception&) {
      throw ContractViolation("bad vertex count in forest encoding: " + text);
    }
    std::vector<Edge> edges;
    std::stringstream rest(text.substr(semi + 1));
    std::string item;
    while (std::getline(rest, item, ',')) {
      if (item.empty()) continue;
      const auto dash = item.find('-');
      if (dash == std::string::npos) throw ContractViolation("bad edge token: " + item);
      try {
        edges.push_back(make_edge(std::stoi(item.substr(0, dash)), std::stoi(item.substr(dash + 1))));
      } catch (const std::invalid_argument&) {
        throw ContractViolation("bad edge token: " + item);
      }
    }
    return LabeledForest(n, std::move(edges));
  }

  friend bool operator==(const LabeledForest&, const LabeledForest&) = default;

 private:
  int n_ = 1;
  std::vector<Edge> edges_;
};

/// Edge indices (into forest.edges()) on the unique path u -> v; empty when
/// u == v, nullopt when u and v lie in different components.
inline std::optional<std::vector<std::size_t>> path_edges(const LabeledForest& f, int u, int v) {
  if (u == v) return std::vector<std::size_t>{};
  const auto n = static_cast<std::size_t>(f.vertex_count());
  std::vector<std::vector<std::pair<int, std::size_t>>> adj(n + 1);
  for (std::size_t k = 0; k < f.edges().size(); ++k) {
    adj[f.edges()[k].i].push_back({f.edges()[k].j, k});
    adj[f.edges()[k].j].push_back({f.edges()[k].i, k});
  }
  std::vector<int> prev_vertex(n + 1, 0);
  std::vector<std::size_t> prev_edge(n + 1, 0);
  std::vector<bool> seen(n + 1, false);
  std::vector<int> stack{u};
  seen[u] = true;
  while (!stack.empty()) {
    const int x = stack.back();
    stack.pop_back();
    for (auto [y, k] : adj[x]) {
      if (seen[y]) continue;
      seen[y] = true;
      prev_vertex[y] = x;
      prev_edge[y] = k;
      stack.push_back(y);
    }
  }
  if (!seen[v]) return std::nullopt;
  std::vector<std::size_t> path;
  for (int x = v; x != u; x = prev_vertex[x]) path.push_back(prev_edge[x]);
  std::reverse(path.begin(), path.end());
  return path;
}

/// Paths for every pair (u < v), row-major in the order (1,2),(1,3),...,(n-1,n).
struct PathTable {
  explicit PathTable(const LabeledForest& f) : n(f.vertex_count()) {
    for (int u = 1; u <= n; ++u)
      for (int v = u + 1; v <= n; ++v) paths.push_back(path_edges(f, u, v));
  }
  const std::optional<std::vector<std::size_t>>& at(int u, int v) const {
    if (u > v) std::swap(u, v);
    // index of pair (u,v) in the lexicographic enumeration
    const int idx = (u - 1) * n - (u - 1) * u / 2 + (v - u - 1);
    return paths[static_cast<std::size_t>(idx)];
  }
  int n;
  std::vector<std::optional<std::vector<std::size_t>>> paths;
};

/// Dense square matrix over an arbitrary scalar (double, exact rationals).
template <class T>
class SquareMatrix {
 public:
  explicit SquareMatrix(int n, T fill = T(0))
      : n_(n), data_(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), fill) {}

  static SquareMatrix identity(int n) {
    SquareMatrix m(n);
    for (int i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  int size() const { return n_; }
  T& operator()(int r, int c) { return data_[static_cast<std::size_t>(r * n_ + c)]; }
  const T& operator()(int r, int c) const { return data_[static_cast<std::size_t>(r * n_ + c)]; }

  friend bool operator==(const SquareMatrix&, const SquareMatrix&) = default;

 private:
  int n_;
  std::vector<T> data_;
};

/// Edge weights aligned with forest.edges(); each in [0, 1].
template <class T>
struct WeightAssignment {
  std::vector<T> values;
};

struct EnumerationLimits {
  int max_vertices = 8;
};

inline void check_cap(int n, const EnumerationLimits& lim) {
  if (n < 1) throw ContractViolation("vertex count must be positive");
  if (n > lim.max_vertices)
    throw SizeLimitError("n=" + std::to_string(n) + " exceeds the enumeration cap " +
                         std::to_string(lim.max_vertices));
}

/// All pairs (i,j), i<j, in lexicographic order.
inline std::vector<Edge> complete_graph_edges(int n) {
  std::vector<Edge> all;
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) all.push_back({i, j});
  return all;
}

/// Every acyclic subset of the edges of K_n, the empty one included.
inline std::vector<LabeledForest> enumerate_forests(int n, const EnumerationLimits& lim = {}) {
  check_cap(n, lim);
  const auto all = complete_graph_edges(n);
  std::vector<LabeledForest> out;
  std::vector<Edge> chosen;
  // component label per vertex; copied on each include step (n <= cap is small)
  std::vector<int> comp(static_cast<std::size_t>(n) + 1);
  std::iota(comp.begin(), comp.end(), 0);

  auto recurse = [&](auto&& self, std::size_t idx, std::vector<int>& labels) -> void {
    if (idx == all.size()) {
      out.emplace_back(n, chosen);
      return;
    }
    self(self, idx + 1, labels);
    const Edge e = all[idx];
    if (labels[e.i] != labels[e.j]) {
      std::vector<int> merged = labels;
      const int from = labels[e.j], to = labels[e.i];
      for (auto& l : merged)
        if (l == from) l = to;
      chosen.push_back(e);
      self(self, idx + 1, merged);
      chosen.pop_back();
    }
  };
  recurse(recurse, 0, comp);
  return out;
}

/// Decode a Prüfer sequence (entries in 1..n, length n-2) into a spanning tree.
inline LabeledForest decode_prufer(int n, std::span<const int> seq) {
  if (n < 2 || seq.size() + 2 != static_cast<std::size_t>(n))
    throw ContractViolation("Prüfer sequence length must be n-2");
  std::vector<int> degree(static_cast<std::size_t>(n) + 1, 1);
  for (int x : seq) {
    if (x < 1 || x > n) throw ContractViolation("Prüfer entry out of range");
    ++degree[x];
  }
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(n) - 1);
  for (int x : seq) {
    int leaf = 1;
    while (degree[leaf] != 1) ++leaf;
    edges.push_back(make_edge(leaf, x));
    --degree[leaf];
    --degree[x];
  }
  int u = 0, v = 0;
  for (int x = 1; x <= n; ++x)
    if (degree[x] == 1) (u == 0 ? u : v) = x;
  edges.push_back(make_edge(u, v));
  return LabeledForest(n, std::move(edges));
}

/// All n^{n-2} labeled spanning trees (one empty tree for n = 1), via Prüfer decoding.
inline std::vector<LabeledForest> enumerate_trees(int n, const EnumerationLimits& lim = {}) {
  check_cap(n, lim);
  if (n == 1) return {LabeledForest(1, {})};
  if (n == 2) return {LabeledForest(2, {{1, 2}})};
  std::vector<LabeledForest> out;
  std::vector<int> seq(static_cast<std::size_t>(n) - 2, 1);
  while (true) {
    out.push_back(decode_prufer(n, seq));
    std::size_t pos = 0;
    while (pos < seq.size() && seq[pos] == n) seq[pos++] = 1;
    if (pos == seq.size()) break;
    ++seq[pos];
  }
  return out;
}

template <class T>
void check_weights(const LabeledForest& f, const WeightAssignment<T>& w) {
  if (w.values.size() != f.edge_count())
    throw ContractViolation("weight assignment has " + std::to_string(w.values.size()) +
                            " entries for " + std::to_string(f.edge_count()) + " edges");
  for (const auto& x : w.values)
    if (x < T(0) || x > T(1)) throw ContractViolation("edge weight outside [0,1]");
}

/// X_ii = 1, X_ij = min weight along the forest path i -> j, 0 across components.
template <class T>
SquareMatrix<T> path_infimum_matrix(const LabeledForest& f, const WeightAssignment<T>& w) {
  check_weights(f, w);
  const int n = f.vertex_count();
  auto x = SquareMatrix<T>::identity(n);
  const PathTable paths(f);
  for (int u = 1; u <= n; ++u)
    for (int v = u + 1; v <= n; ++v) {
      const auto& p = paths.at(u, v);
      if (!p) continue;
      T m = w.values[p->front()];
      for (auto k : *p) m = std::min(m, w.values[k]);
      x(u - 1, v - 1) = x(v - 1, u - 1) = m;
    }
  return x;
}

template <class T>
struct BlockTerm {
  T coefficient;
  SquareMatrix<int> blocks;  // 0/1, 1 iff connected by the leading edges
};

/// Convex decomposition X^F(w) = sum_k (w_{k-1} - w_k) X^{F,k} over the
/// descending weight order (ties by edge index); p+1 terms for p edges.
template <class T>
std::vector<BlockTerm<T>> block_decomposition(const LabeledForest& f, const WeightAssignment<T>& w) {
  check_weights(f, w);
  const int n = f.vertex_count();
  std::vector<std::size_t> order(f.edge_count());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return w.values[b] < w.values[a]; });

  std::vector<BlockTerm<T>> terms;
  detail::DisjointSets ds(n);
  T previous = T(1);
  for (std::size_t k = 0; k <= order.size(); ++k) {
    const T current = k < order.size() ? w.values[order[k]] : T(0);
    SquareMatrix<int> blocks(n, 0);
    for (int u = 1; u <= n; ++u)
      for (int v = 1; v <= n; ++v) blocks(u - 1, v - 1) = ds.find(u) == ds.find(v) ? 1 : 0;
    terms.push_back({previous - current, std::move(blocks)});
    if (k < order.size()) ds.unite(f.edges()[order[k]].i, f.edges()[order[k]].j);
    previous = current;
  }
  return terms;
}

template <class T>
SquareMatrix<T> reconstruct(const std::vector<BlockTerm<T>>& terms) {
  const int n = terms.front().blocks.size();
  SquareMatrix<T> x(n);
  for (const auto& t : terms)
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c)
        if (t.blocks(r, c)) x(r, c) += t.coefficient;
  return x;
}

/// Minimum eigenvalue >= -tol; the input must be symmetric.
inline bool is_positive_semidefinite(const SquareMatrix<double>& m, double tol) {
  const int n = m.size();
  Eigen::MatrixXd e(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      if (m(r, c) != m(c, r)) throw ContractViolation("matrix is not symmetric");
      e(r, c) = m(r, c);
    }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(e, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff() >= -tol;
}

}  // namespace lve
