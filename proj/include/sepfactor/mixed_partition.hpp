#pragma once

#include <algorithm>
#include <cstdint>
#include <list>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "permutation.hpp"

namespace sepfactor {

// Consecutive order-1 intervals covering 0..n-1; part i is
// [starts[i], starts[i+1]).
struct interval_partition {
  int n = 0;
  std::vector<int> starts;

  static interval_partition from_sizes(const std::vector<int>& sizes) {
    interval_partition p;
    for (int s : sizes) {
      if (s < 1) throw error("partition: empty part");
      p.starts.push_back(p.n);
      p.n += s;
    }
    return p;
  }

  static interval_partition singletons(int n) { return from_sizes(std::vector<int>(n, 1)); }

  int parts() const { return static_cast<int>(starts.size()); }
  int begin(int i) const { return starts[i]; }
  int end(int i) const { return i + 1 < parts() ? starts[i + 1] : n; }
  int size(int i) const { return end(i) - begin(i); }

  std::vector<int> part_of() const {
    std::vector<int> out(n);
    for (int i = 0; i < parts(); ++i)
      for (int x = begin(i); x < end(i); ++x) out[x] = i;
    return out;
  }

  std::vector<int> elements(int i) const {
    std::vector<int> out;
    for (int x = begin(i); x < end(i); ++x) out.push_back(x);
    return out;
  }
};

enum class pair_relation : std::uint8_t { before, after, first_splits_second, second_splits_first, mixed };

inline const char* relation_name(pair_relation r) {
  switch (r) {
    case pair_relation::before: return "before";
    case pair_relation::after: return "after";
    case pair_relation::first_splits_second: return "first-splits-second";
    case pair_relation::second_splits_first: return "second-splits-first";
    default: return "mixed";
  }
}

// Runs of each part along the second order of the union. first_splits_second
// means the first part is an interval of the union cutting the second in two.
inline pair_relation classify_pair(const permutation& s, const std::vector<int>& p1, const std::vector<int>& p2) {
  if (p1.empty() || p2.empty()) throw error("classify_pair: empty part");
  std::vector<std::pair<int, int>> seq;
  for (int x : p1) seq.push_back({s[x], 1});
  for (int x : p2) seq.push_back({s[x], 2});
  std::sort(seq.begin(), seq.end());
  for (std::size_t i = 1; i < seq.size(); ++i)
    if (seq[i].first == seq[i - 1].first) throw error("classify_pair: parts overlap");
  int runs[3] = {0, 0, 0};
  for (std::size_t i = 0; i < seq.size(); ++i)
    if (i == 0 || seq[i].second != seq[i - 1].second) ++runs[seq[i].second];
  if (runs[1] == 1 && runs[2] == 1) return seq[0].second == 1 ? pair_relation::before : pair_relation::after;
  if (runs[1] == 1) return pair_relation::first_splits_second;
  if (runs[2] == 1) return pair_relation::second_splits_first;
  return pair_relation::mixed;
}

struct closure {
  int lo, hi;  // second-order positions
};

inline std::vector<closure> part_closures(const permutation& s, const interval_partition& p) {
  std::vector<closure> out(p.parts());
  for (int i = 0; i < p.parts(); ++i) {
    int lo = s[p.begin(i)], hi = lo;
    for (int x = p.begin(i); x < p.end(i); ++x) {
      lo = std::min(lo, s[x]);
      hi = std::max(hi, s[x]);
    }
    out[i] = {lo, hi};
  }
  return out;
}

// Laminar forest of closures: parent = smallest strictly larger closure.
// Roots and sibling lists follow the second order.
struct split_forest {
  std::vector<int> parent;
  std::vector<std::vector<int>> children;
  std::vector<int> roots;
};

inline split_forest laminar_forest(const std::vector<closure>& cl, const std::vector<int>& subset) {
  split_forest f;
  const int p = static_cast<int>(cl.size());
  f.parent.assign(p, -1);
  f.children.assign(p, {});
  std::vector<int> idx(subset);
  std::sort(idx.begin(), idx.end(), [&](int a, int b) { return cl[a].lo < cl[b].lo; });
  std::vector<int> stack;
  for (int a : idx) {
    while (!stack.empty() && cl[stack.back()].hi < cl[a].lo) stack.pop_back();
    if (!stack.empty()) {
      if (cl[stack.back()].hi < cl[a].hi) throw error("laminar forest: overlapping closures");
      f.parent[a] = stack.back();
      f.children[stack.back()].push_back(a);
    } else {
      f.roots.push_back(a);
    }
    stack.push_back(a);
  }
  return f;
}

// Requires a non-mixed partition; a mixed pair is reported by name.
inline split_forest build_split_forest(const permutation& s, const interval_partition& p) {
  auto cl = part_closures(s, p);
  std::vector<int> all(p.parts());
  std::iota(all.begin(), all.end(), 0);
  std::vector<int> idx(all);
  std::sort(idx.begin(), idx.end(), [&](int a, int b) { return cl[a].lo < cl[b].lo; });
  std::vector<int> stack;
  for (int a : idx) {
    while (!stack.empty() && cl[stack.back()].hi < cl[a].lo) stack.pop_back();
    if (!stack.empty() && cl[stack.back()].hi < cl[a].hi)
      throw error("split forest: parts " + std::to_string(stack.back() + 1) + " and " + std::to_string(a + 1) +
                  " are mixed");
    stack.push_back(a);
  }
  auto f = laminar_forest(cl, all);
  // every element must lie in no closure smaller than its own part's
  auto part = p.part_of();
  std::vector<int> at(s.size());
  for (int x = 0; x < s.size(); ++x) at[s[x]] = x;
  stack.clear();
  std::size_t next = 0;
  for (int v = 0; v < s.size(); ++v) {
    while (!stack.empty() && cl[stack.back()].hi < v) stack.pop_back();
    while (next < idx.size() && cl[idx[next]].lo == v) stack.push_back(idx[next++]);
    int own = part[at[v]];
    if (stack.back() != own)
      throw error("split forest: parts " + std::to_string(std::min(own, stack.back()) + 1) + " and " +
                  std::to_string(std::max(own, stack.back()) + 1) + " are mixed");
  }
  return f;
}

enum class edge_kind : std::uint8_t { nested, overlap };  // E1, E2

struct part_graph {
  int vertices = 0;
  std::vector<std::pair<int, int>> edges;  // (a,b) with a < b, sorted
  std::vector<edge_kind> kind;

  std::vector<std::vector<int>> adjacency() const {
    std::vector<std::vector<int>> adj(vertices);
    for (auto [a, b] : edges) {
      adj[a].push_back(b);
      adj[b].push_back(a);
    }
    return adj;
  }

  void normalize() {
    std::vector<std::size_t> idx(edges.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (auto& e : edges)
      if (e.first > e.second) std::swap(e.first, e.second);
    std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return edges[a] < edges[b]; });
    std::vector<std::pair<int, int>> e2;
    std::vector<edge_kind> k2;
    for (auto i : idx)
      if (e2.empty() || e2.back() != edges[i]) {
        e2.push_back(edges[i]);
        k2.push_back(kind[i]);
      }
    edges = std::move(e2);
    kind = std::move(k2);
  }

  std::string dot() const {
    std::ostringstream os;
    os << "graph parts {\n";
    for (int v = 0; v < vertices; ++v) os << "  p" << v + 1 << ";\n";
    for (std::size_t i = 0; i < edges.size(); ++i)
      os << "  p" << edges[i].first + 1 << " -- p" << edges[i].second + 1
         << (kind[i] == edge_kind::nested ? " [style=dashed, label=E1]" : " [label=E2]") << ";\n";
    os << "}\n";
    return os.str();
  }
};

// Sweep over left endpoints keeping the active intervals sorted by right
// endpoint; a new interval overlaps exactly the active ones ending strictly
// before it does.
inline part_graph overlap_graph(const std::vector<std::pair<int, int>>& intervals) {
  part_graph g;
  g.vertices = static_cast<int>(intervals.size());
  for (auto [a, b] : intervals)
    if (a > b) throw error("overlap_graph: malformed interval [" + std::to_string(a) + "," + std::to_string(b) + "]");
  std::vector<int> idx(intervals.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](int x, int y) {
    if (intervals[x].first != intervals[y].first) return intervals[x].first < intervals[y].first;
    return intervals[x].second > intervals[y].second;
  });
  std::list<int> active;
  for (int i : idx) {
    auto [a, b] = intervals[i];
    while (!active.empty() && intervals[active.front()].second < a) active.pop_front();
    auto it = active.begin();
    for (; it != active.end() && intervals[*it].second < b; ++it) {
      if (intervals[*it].first < a) {
        g.edges.push_back({std::min(i, *it), std::max(i, *it)});
        g.kind.push_back(edge_kind::overlap);
      }
    }
    active.insert(it, i);
  }
  g.normalize();
  return g;
}

struct coloring {
  std::vector<int> color;  // 1-based
  int colors = 0;
  int degeneracy = 0;
};

// Repeated minimum-degree removal (smallest index on ties), then greedy
// colouring in reverse removal order.
inline coloring greedy_degeneracy_coloring(const part_graph& g) {
  const int p = g.vertices;
  auto adj = g.adjacency();
  std::vector<int> deg(p);
  std::set<std::pair<int, int>> q;
  for (int v = 0; v < p; ++v) {
    deg[v] = static_cast<int>(adj[v].size());
    q.insert({deg[v], v});
  }
  std::vector<char> gone(p, 0);
  std::vector<int> removal;
  coloring c;
  while (!q.empty()) {
    auto [d, v] = *q.begin();
    q.erase(q.begin());
    c.degeneracy = std::max(c.degeneracy, d);
    gone[v] = 1;
    removal.push_back(v);
    for (int u : adj[v])
      if (!gone[u]) {
        q.erase({deg[u], u});
        q.insert({--deg[u], u});
      }
  }
  c.color.assign(p, 0);
  std::vector<int> used;
  for (auto it = removal.rbegin(); it != removal.rend(); ++it) {
    int v = *it;
    used.clear();
    for (int u : adj[v])
      if (c.color[u]) used.push_back(c.color[u]);
    std::sort(used.begin(), used.end());
    int col = 1;
    for (int x : used)
      if (x == col) ++col;
      else if (x > col) break;
    c.color[v] = col;
    c.colors = std::max(c.colors, col);
  }
  return c;
}

inline bool is_proper(const part_graph& g, const coloring& c) {
  for (auto [a, b] : g.edges)
    if (c.color[a] == c.color[b]) return false;
  return true;
}

// Quadratic route: scan each closure for foreign elements. An element of B
// inside clos(A) makes A and B mixed when clos(A) is strictly inside clos(B)
// or the closures overlap.
inline part_graph mixed_graph_slow(const permutation& s, const interval_partition& p) {
  auto cl = part_closures(s, p);
  auto part = p.part_of();
  std::vector<int> at(s.size());
  for (int x = 0; x < s.size(); ++x) at[s[x]] = x;
  part_graph g;
  g.vertices = p.parts();
  std::vector<int> seen(p.parts(), -1);
  for (int a = 0; a < p.parts(); ++a)
    for (int v = cl[a].lo; v <= cl[a].hi; ++v) {
      int b = part[at[v]];
      if (b == a || seen[b] == a) continue;
      seen[b] = a;
      bool inside = cl[b].lo < cl[a].lo && cl[a].hi < cl[b].hi;
      bool overlap = !inside && !(cl[a].lo < cl[b].lo && cl[b].hi < cl[a].hi);
      if (inside) {
        g.edges.push_back({a, b});
        g.kind.push_back(edge_kind::nested);
      } else if (overlap) {
        g.edges.push_back({a, b});
        g.kind.push_back(edge_kind::overlap);
      }
    }
  g.normalize();
  return g;
}

struct fast_mixed_result {
  part_graph graph;
  coloring overlap_coloring;  // colouring of the E2 subgraph
  coloring color;             // product colouring of the whole mixed graph
};

// Overlap graph of closures, coloured; within each colour class closures are
// laminar. E1 edges with an element b of B come from walking up each class
// forest from the smallest closure containing b while staying strictly
// inside clos(B).
inline fast_mixed_result mixed_graph_fast(const permutation& s, const interval_partition& p) {
  const int np = p.parts(), n = s.size();
  auto cl = part_closures(s, p);
  std::vector<std::pair<int, int>> iv;
  for (auto c : cl) iv.push_back({c.lo, c.hi});
  fast_mixed_result r;
  auto e2 = overlap_graph(iv);
  r.overlap_coloring = greedy_degeneracy_coloring(e2);
  const int k2 = r.overlap_coloring.colors;
  std::vector<std::vector<int>> classes(k2);
  for (int a = 0; a < np; ++a) classes[r.overlap_coloring.color[a] - 1].push_back(a);

  std::vector<split_forest> forests;
  // innermost[c][v]: smallest closure of class c containing second-order position v
  std::vector<std::vector<int>> innermost(k2, std::vector<int>(n, -1));
  for (int c = 0; c < k2; ++c) {
    forests.push_back(laminar_forest(cl, classes[c]));
    std::vector<int> idx(classes[c]);
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return cl[a].lo < cl[b].lo; });
    std::vector<int> stack;
    std::size_t next = 0;
    for (int v = 0; v < n; ++v) {
      while (!stack.empty() && cl[stack.back()].hi < v) stack.pop_back();
      while (next < idx.size() && cl[idx[next]].lo == v) stack.push_back(idx[next++]);
      innermost[c][v] = stack.empty() ? -1 : stack.back();
    }
  }

  part_graph e1;
  e1.vertices = np;
  std::vector<int> mark(np, -1);
  for (int b = 0; b < np; ++b)
    for (int c = 0; c < k2; ++c)
      for (int x = p.begin(b); x < p.end(b); ++x) {
        for (int a = innermost[c][s[x]]; a >= 0 && a != b && mark[a] != b; a = forests[c].parent[a]) {
          if (!(cl[b].lo < cl[a].lo && cl[a].hi < cl[b].hi)) break;
          mark[a] = b;
          e1.edges.push_back({a, b});
          e1.kind.push_back(edge_kind::nested);
        }
      }
  e1.normalize();

  // E1 colouring inside each E2 class, then the product pair
  part_graph within;
  within.vertices = np;
  for (auto [a, b] : e1.edges)
    if (r.overlap_coloring.color[a] == r.overlap_coloring.color[b]) {
      within.edges.push_back({a, b});
      within.kind.push_back(edge_kind::nested);
    }
  auto c1 = greedy_degeneracy_coloring(within);
  std::map<std::pair<int, int>, int> compress;
  r.color.color.assign(np, 0);
  for (int a = 0; a < np; ++a) {
    auto key = std::make_pair(r.overlap_coloring.color[a], c1.color[a]);
    auto [it, fresh] = compress.try_emplace(key, static_cast<int>(compress.size()) + 1);
    r.color.color[a] = it->second;
  }
  r.color.colors = static_cast<int>(compress.size());

  r.graph = e2;
  r.graph.edges.insert(r.graph.edges.end(), e1.edges.begin(), e1.edges.end());
  r.graph.kind.insert(r.graph.kind.end(), e1.kind.begin(), e1.kind.end());
  r.graph.normalize();
  r.color.degeneracy = greedy_degeneracy_coloring(r.graph).degeneracy;
  return r;
}

inline constexpr int default_fast_threshold = 512;

inline part_graph mixed_graph(const permutation& s, const interval_partition& p, int fast_threshold = default_fast_threshold) {
  return p.parts() > fast_threshold ? mixed_graph_fast(s, p).graph : mixed_graph_slow(s, p);
}

inline coloring color_mixed_parts(const permutation& s, const interval_partition& p,
                                  int fast_threshold = default_fast_threshold) {
  if (p.parts() > fast_threshold) return mixed_graph_fast(s, p).color;
  return greedy_degeneracy_coloring(mixed_graph_slow(s, p));
}

}  // namespace sepfactor
