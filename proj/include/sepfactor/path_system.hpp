#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "certificate.hpp"
#include "factorizer.hpp"
#include "minors.hpp"
#include "permutation.hpp"
#include "separable.hpp"

namespace sepfactor {

// Layers X_0..X_m of n vertices each; vertex (i, x) has id i*n + x, which is
// also its position in the canonical order.
struct path_system {
  int n = 0;
  std::vector<permutation> factors;

  int layers() const { return static_cast<int>(factors.size()) + 1; }
  int vertex(int layer, int x) const { return layer * n + x; }
  int vertex_count() const { return layers() * n; }

  // x in layer i-1 joined to factors[i-1](x) in layer i
  std::vector<std::pair<int, int>> edges() const {
    std::vector<std::pair<int, int>> out;
    for (int i = 1; i < layers(); ++i)
      for (int x = 0; x < n; ++x) out.push_back({vertex(i - 1, x), vertex(i, factors[i - 1][x])});
    return out;
  }

  // Walks each path from X_0 to X_m through the edge list.
  permutation follow() const {
    const int v = vertex_count();
    std::vector<std::vector<int>> adj(v);
    for (auto [a, b] : edges()) {
      adj[a].push_back(b);
      adj[b].push_back(a);
    }
    std::vector<int> img(n);
    for (int x = 0; x < n; ++x) {
      int cur = vertex(0, x), prev = -1;
      for (int i = 1; i < layers(); ++i) {
        int next = -1;
        for (int w : adj[cur])
          if (w != prev && w / n == i) next = w;
        if (next < 0) throw error("path system: broken path");
        prev = cur;
        cur = next;
      }
      img[x] = cur % n;
    }
    return permutation::from_zero_based(std::move(img));
  }

  std::string text() const {
    std::ostringstream os;
    auto e = edges();
    os << vertex_count() << ' ' << e.size() << '\n';
    for (auto [a, b] : e) os << a + 1 << ' ' << b + 1 << '\n';
    return os.str();
  }

  std::string dot() const {
    std::ostringstream os;
    os << "graph paths {\n  rankdir=LR;\n  node [shape=circle];\n";
    for (int i = 0; i < layers(); ++i) {
      os << "  subgraph layer" << i << " {\n    rank=same;\n";
      for (int x = 0; x < n; ++x) os << "    v" << vertex(i, x) << " [label=\"" << x + 1 << "\"];\n";
      os << "  }\n";
    }
    for (auto [a, b] : edges()) os << "  v" << a << " -- v" << b << ";\n";
    os << "}\n";
    return os.str();
  }
};

inline path_system build_path_system(const std::vector<permutation>& factors) {
  if (factors.empty()) throw error("path system: need at least one factor");
  path_system g;
  g.n = factors.front().size();
  for (const auto& f : factors)
    if (f.size() != g.n) throw error("path system: factors differ in size");
  g.factors = factors;
  return g;
}

// Symmetric adjacency matrix under the canonical order; block (i-1, i) is the
// sparse permutation matrix of factor i with a 1 at (x, sigma(x)).
inline matrix01 path_system_matrix(const path_system& g) {
  matrix01 m(g.vertex_count(), g.vertex_count());
  for (auto [a, b] : g.edges()) {
    m.set(a, b, 1);
    m.set(b, a, 1);
  }
  return m;
}

struct grid_report {
  int target = 0;
  bool target_found = false;
  int largest = 0;           // largest k with a k-grid found
  bool largest_capped = false;  // search for largest stopped at the cap
  std::optional<minor_witness> witness;  // a witness for `largest`
};

// Exhaustive search for a (3r+2)-grid, plus the largest grid up to
// largest_limit (defaults to the target).
inline grid_report check_path_system_gridfree(const path_system& g, int r, double cap = default_minor_cap,
                                              int largest_limit = -1) {
  if (r < 0) throw error("grid check: r must be non-negative");
  auto m = path_system_matrix(g);
  grid_report rep;
  rep.target = 3 * r + 2;
  rep.target_found = find_minor(m, rep.target, minor_kind::grid, cap).has_value();
  int limit = largest_limit < 0 ? rep.target : largest_limit;
  for (int k = 1; k <= limit; ++k) {
    std::optional<minor_witness> w;
    try {
      w = find_minor(m, k, minor_kind::grid, cap);
    } catch (const error&) {
      rep.largest_capped = true;
      break;
    }
    if (!w) break;
    rep.largest = k;
    rep.witness = std::move(w);
  }
  return rep;
}

// Vertices 0..n-1 in their order; simple undirected edges.
struct ordered_graph {
  int n = 0;
  std::vector<std::pair<int, int>> edges;

  void validate() const {
    std::set<std::pair<int, int>> seen;
    for (auto [u, v] : edges) {
      if (u < 0 || v < 0 || u >= n || v >= n) throw error("graph: edge endpoint out of range");
      if (u == v) throw error("graph: self-loop");
      if (!seen.insert({std::min(u, v), std::max(u, v)}).second) throw error("graph: repeated edge");
    }
  }

  std::string text() const {
    std::ostringstream os;
    os << n << ' ' << edges.size() << '\n';
    for (auto [u, v] : edges) os << u + 1 << ' ' << v + 1 << '\n';
    return os.str();
  }

  std::string dot() const {
    std::ostringstream os;
    os << "graph g {\n";
    for (int v = 0; v < n; ++v) os << "  v" << v << " [label=\"" << v + 1 << "\"];\n";
    for (auto [u, v] : edges) os << "  v" << u << " -- v" << v << ";\n";
    os << "}\n";
    return os.str();
  }
};

inline ordered_graph parse_ordered_graph(const std::string& text) {
  std::istringstream is(text);
  ordered_graph g;
  long long n = 0, m = 0;
  if (!(is >> n >> m) || n < 0 || m < 0) throw error("graph: expected header 'n m'");
  g.n = static_cast<int>(n);
  for (long long i = 0; i < m; ++i) {
    long long u = 0, v = 0;
    if (!(is >> u >> v)) throw error("graph: expected " + std::to_string(m) + " edges, found " + std::to_string(i));
    g.edges.push_back({static_cast<int>(u - 1), static_cast<int>(v - 1)});
  }
  std::string extra;
  if (is >> extra) throw error("graph: trailing content after the edge list");
  g.validate();
  return g;
}

struct edge_biorder {
  std::vector<std::pair<int, int>> by_source;  // edges sorted by (s, t)
  std::vector<std::pair<int, int>> by_target;  // edges sorted by (t, s)
  permutation sigma;                           // <s position -> <t position
};

// Edges oriented from the smaller to the larger endpoint.
inline edge_biorder make_edge_biorder(const ordered_graph& g) {
  edge_biorder b;
  for (auto [u, v] : g.edges) b.by_source.push_back({std::min(u, v), std::max(u, v)});
  std::sort(b.by_source.begin(), b.by_source.end());
  b.by_target = b.by_source;
  std::sort(b.by_target.begin(), b.by_target.end(),
            [](auto a, auto c) { return std::pair(a.second, a.first) < std::pair(c.second, c.first); });
  std::vector<int> img(b.by_source.size());
  for (std::size_t i = 0; i < b.by_source.size(); ++i)
    img[i] = static_cast<int>(std::lower_bound(b.by_target.begin(), b.by_target.end(), b.by_source[i],
                                               [](auto a, auto c) {
                                                 return std::pair(a.second, a.first) < std::pair(c.second, c.first);
                                               }) -
                              b.by_target.begin());
  b.sigma = permutation::trusted(std::move(img));
  // edges sharing a source appear in the same relative order under <t
  for (std::size_t i = 1; i < b.by_source.size(); ++i)
    if (b.by_source[i].first == b.by_source[i - 1].first && b.sigma[static_cast<int>(i)] < b.sigma[static_cast<int>(i) - 1])
      throw error("edge biorder: source class not increasing in <t");
  return b;
}

inline constexpr int pattern_search_limit = 7;

// Smallest pattern (by size, then lexicographically) that s avoids.
inline permutation smallest_avoided_pattern(const permutation& s) {
  for (int k = 1; k <= pattern_search_limit; ++k)
    for (const auto& p : all_permutations(k))
      if (!contains_pattern(s, p)) return p;
  return permutation::identity(s.size() + 1);
}

struct subdivision_result {
  ordered_graph graph;
  int m = 0;  // every edge became a path with m + 1 edges
  permutation sigma;
  permutation pattern;
  certificate cert;
};

// V keeps its order and comes first, then the path-system layers. The copy of
// edge e in X_0 hangs off s(e), its copy in X_M off t(e).
inline subdivision_result build_subdivision(const ordered_graph& g, factorize_options opt = {}) {
  g.validate();
  subdivision_result r;
  if (g.edges.empty()) {
    r.graph = g;
    return r;
  }
  auto eb = make_edge_biorder(g);
  r.sigma = eb.sigma;
  r.pattern = smallest_avoided_pattern(eb.sigma);
  r.cert = factor_avoiding(eb.sigma, r.pattern, opt);
  auto factors = r.cert.factors;
  const int e = eb.sigma.size();
  if (factors.empty()) factors.push_back(permutation::identity(e));
  auto ps = build_path_system(factors);
  const int layers = ps.layers();
  r.m = layers;
  r.graph.n = g.n + ps.vertex_count();
  for (auto [a, b] : ps.edges()) r.graph.edges.push_back({g.n + a, g.n + b});
  for (int x = 0; x < e; ++x) {
    r.graph.edges.push_back({eb.by_source[x].first, g.n + ps.vertex(0, x)});
    r.graph.edges.push_back({eb.by_target[x].second, g.n + ps.vertex(layers - 1, x)});
  }
  std::sort(r.graph.edges.begin(), r.graph.edges.end());
  return r;
}

}  // namespace sepfactor
