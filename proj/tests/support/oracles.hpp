#pragma once

// Brute-force reference implementations used only by the tests. None of
// these call into the library routine they check.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "sepfactor/sepfactor.hpp"

namespace oracle {

using sepfactor::matrix01;
using sepfactor::minor_kind;
using sepfactor::permutation;

inline std::vector<int> images0(const permutation& p) { return p.data(); }

// All k-subsets of 0..n-1 in lexicographic order.
template <class F>
void for_each_subset(int n, int k, F&& f) {
  if (k > n) return;
  std::vector<int> c(k);
  for (int i = 0; i < k; ++i) c[i] = i;
  while (true) {
    if (f(c)) return;
    int i = k - 1;
    while (i >= 0 && c[i] == n - k + i) --i;
    if (i < 0) return;
    ++c[i];
    for (int j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
  }
}

inline bool order_isomorphic(const std::vector<int>& vals, const permutation& pat) {
  for (std::size_t i = 0; i < vals.size(); ++i)
    for (std::size_t j = 0; j < vals.size(); ++j)
      if ((vals[i] < vals[j]) != (pat[static_cast<int>(i)] < pat[static_cast<int>(j)])) return false;
  return true;
}

// First witness in lexicographic order of position sets (one-based).
inline std::optional<std::vector<int>> first_occurrence(const permutation& s, const permutation& pat) {
  std::optional<std::vector<int>> out;
  for_each_subset(s.size(), pat.size(), [&](const std::vector<int>& c) {
    std::vector<int> vals;
    for (int x : c) vals.push_back(s[x]);
    if (order_isomorphic(vals, pat)) {
      std::vector<int> w;
      for (int x : c) w.push_back(x + 1);
      out = w;
      return true;
    }
    return false;
  });
  return out;
}

inline bool contains(const permutation& s, const permutation& pat) { return first_occurrence(s, pat).has_value(); }

inline bool separable_by_patterns(const permutation& s) {
  static const permutation a({2, 4, 1, 3}), b({3, 1, 4, 2});
  return !contains(s, a) && !contains(s, b);
}

inline permutation compose(const permutation& f, const permutation& g) {
  std::vector<int> r;
  for (int i = 1; i <= g.size(); ++i) r.push_back(f(g(i)));
  return permutation(r);
}

inline permutation product(const std::vector<permutation>& factors, int n) {
  auto acc = permutation::identity(n);
  for (const auto& f : factors) acc = oracle::compose(f, acc);
  return acc;
}

// ------------------------------------------------------------------ minors

inline matrix01 matrix_of(const permutation& s) {
  matrix01 m(s.size(), s.size());
  for (int i = 1; i <= s.size(); ++i)
    for (int j = 1; j <= s.size(); ++j) m.set(i - 1, j - 1, s(i) < s(j) ? 1 : 0);
  return m;
}

// Distinct row vectors / column vectors of a cell.
inline bool cell_mixed(const matrix01& m, int r0, int r1, int c0, int c1) {
  std::set<std::vector<int>> rows, cols;
  for (int i = r0; i < r1; ++i) {
    std::vector<int> v;
    for (int j = c0; j < c1; ++j) v.push_back(m.at(i, j));
    rows.insert(v);
  }
  for (int j = c0; j < c1; ++j) {
    std::vector<int> v;
    for (int i = r0; i < r1; ++i) v.push_back(m.at(i, j));
    cols.insert(v);
  }
  return rows.size() > 1 && cols.size() > 1;
}

inline bool cell_has_one(const matrix01& m, int r0, int r1, int c0, int c1) {
  for (int i = r0; i < r1; ++i)
    for (int j = c0; j < c1; ++j)
      if (m.at(i, j)) return true;
  return false;
}

// Every row division against every column division.
inline bool has_minor(const matrix01& m, int k, minor_kind kind) {
  if (k > m.rows() || k > m.cols()) return false;
  bool found = false;
  for_each_subset(m.rows() - 1, k - 1, [&](const std::vector<int>& rc) {
    std::vector<int> rb{0};
    for (int c : rc) rb.push_back(c + 1);
    rb.push_back(m.rows());
    for_each_subset(m.cols() - 1, k - 1, [&](const std::vector<int>& cc) {
      std::vector<int> cb{0};
      for (int c : cc) cb.push_back(c + 1);
      cb.push_back(m.cols());
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
          if (kind == minor_kind::almost_mixed && i == j) continue;
          bool ok = kind == minor_kind::grid ? cell_has_one(m, rb[i], rb[i + 1], cb[j], cb[j + 1])
                                             : cell_mixed(m, rb[i], rb[i + 1], cb[j], cb[j + 1]);
          if (!ok) return false;
        }
      found = true;
      return true;
    });
    return found;
  });
  return found;
}

inline int almost_mixed_number(const permutation& s) {
  auto m = matrix_of(s);
  int k = 2;
  while (has_minor(m, k, minor_kind::almost_mixed)) ++k;
  return k;
}

// Error degree by the definition: two parts are in error for an order when
// some x1 < y1 and y2 < x2 with x's in X and y's in Y.
inline int error_degree_width(const permutation& s, const sepfactor::partition_sequence& seq) {
  const int n = s.size();
  std::vector<std::vector<int>> parts;
  std::vector<char> alive;
  for (int x = 0; x < n; ++x) {
    parts.push_back({x});
    alive.push_back(1);
  }
  auto in_error = [&](const std::vector<int>& a, const std::vector<int>& b, bool second) {
    bool before = false, after = false;
    for (int x : a)
      for (int y : b) {
        int px = second ? s[x] : x, py = second ? s[y] : y;
        (px < py ? before : after) = true;
      }
    return before && after;
  };
  int width = 0;
  for (auto [a, b] : seq.merges) {
    auto merged = parts[a];
    merged.insert(merged.end(), parts[b].begin(), parts[b].end());
    alive[a] = alive[b] = 0;
    parts.push_back(merged);
    alive.push_back(1);
    for (std::size_t x = 0; x < parts.size(); ++x) {
      if (!alive[x]) continue;
      for (bool second : {false, true}) {
        int d = 0;
        for (std::size_t y = 0; y < parts.size(); ++y)
          if (alive[y] && x != y && in_error(parts[x], parts[y], second)) ++d;
        width = std::max(width, d);
      }
    }
  }
  return width;
}

// ---------------------------------------------------------- partitions

// Contiguity of each part in the union read along the second order.
inline sepfactor::pair_relation classify(const permutation& s, const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<std::pair<int, int>> seq;
  for (int x : a) seq.push_back({s[x], 0});
  for (int x : b) seq.push_back({s[x], 1});
  std::sort(seq.begin(), seq.end());
  auto contiguous = [&](int side) {
    int first = -1, last = -1, count = 0;
    for (int i = 0; i < static_cast<int>(seq.size()); ++i)
      if (seq[i].second == side) {
        if (first < 0) first = i;
        last = i;
        ++count;
      }
    return last - first + 1 == count;
  };
  bool ca = contiguous(0), cb = contiguous(1);
  using sepfactor::pair_relation;
  if (ca && cb) return seq[0].second == 0 ? pair_relation::before : pair_relation::after;
  if (ca) return pair_relation::first_splits_second;
  if (cb) return pair_relation::second_splits_first;
  return pair_relation::mixed;
}

inline std::set<std::pair<int, int>> mixed_edges(const permutation& s, const sepfactor::interval_partition& p) {
  std::set<std::pair<int, int>> out;
  for (int a = 0; a < p.parts(); ++a)
    for (int b = a + 1; b < p.parts(); ++b)
      if (classify(s, p.elements(a), p.elements(b)) == sepfactor::pair_relation::mixed) out.insert({a, b});
  return out;
}

inline std::set<std::pair<int, int>> overlap_edges(const std::vector<std::pair<int, int>>& iv) {
  std::set<std::pair<int, int>> out;
  for (int i = 0; i < static_cast<int>(iv.size()); ++i)
    for (int j = i + 1; j < static_cast<int>(iv.size()); ++j) {
      auto [a, b] = iv[i];
      auto [c, d] = iv[j];
      bool meet = !(b < c || d < a);
      bool nested = (a <= c && d <= b) || (c <= a && b <= d);
      if (meet && !nested) out.insert({i, j});
    }
  return out;
}

// Degeneracy by peeling a minimum-degree vertex, quadratic.
inline int degeneracy(int n, const std::set<std::pair<int, int>>& edges) {
  std::vector<std::set<int>> adj(n);
  for (auto [a, b] : edges) {
    adj[a].insert(b);
    adj[b].insert(a);
  }
  std::vector<char> gone(n, 0);
  int best = 0;
  for (int step = 0; step < n; ++step) {
    int v = -1;
    for (int u = 0; u < n; ++u)
      if (!gone[u] && (v < 0 || adj[u].size() < adj[v].size())) v = u;
    best = std::max(best, static_cast<int>(adj[v].size()));
    gone[v] = 1;
    for (int u : adj[v]) adj[u].erase(v);
    adj[v].clear();
  }
  return best;
}

inline bool has_clique(int n, const std::set<std::pair<int, int>>& e, int t) {
  bool found = false;
  for_each_subset(n, t, [&](const std::vector<int>& c) {
    for (int i = 0; i < t; ++i)
      for (int j = i + 1; j < t; ++j)
        if (!e.count({c[i], c[j]})) return false;
    found = true;
    return true;
  });
  return found;
}

// K_{t,t} as a (not necessarily induced) subgraph.
inline bool has_biclique(int n, const std::set<std::pair<int, int>>& e, int t) {
  auto adj = [&](int a, int b) { return e.count({std::min(a, b), std::max(a, b)}) > 0; };
  bool found = false;
  for_each_subset(n, 2 * t, [&](const std::vector<int>& c) {
    // c[0] always on the left side
    for_each_subset(2 * t - 1, t - 1, [&](const std::vector<int>& pick) {
      std::vector<char> left(2 * t, 0);
      left[0] = 1;
      for (int i : pick) left[i + 1] = 1;
      for (int i = 0; i < 2 * t; ++i)
        for (int j = 0; j < 2 * t; ++j)
          if (left[i] && !left[j] && !adj(c[i], c[j])) return false;
      found = true;
      return true;
    });
    return found;
  });
  return found;
}

// Orientation from the density argument for overlap graphs: edge AB points
// to A when A has fewer than t private ancestors (intervals containing A but
// not B, A included). Returns the maximum out-degree.
inline int private_ancestor_outdegree(const std::vector<std::pair<int, int>>& iv, int t) {
  auto contains = [](std::pair<int, int> outer, std::pair<int, int> inner) {
    return outer.first <= inner.first && inner.second <= outer.second;
  };
  auto edges = overlap_edges(iv);
  std::vector<int> out(iv.size(), 0);
  for (auto [a, b] : edges) {
    int pa = 0;
    for (auto c : iv)
      if (contains(c, iv[a]) && !contains(c, iv[b])) ++pa;
    // edge oriented towards a: the tail b gains out-degree
    if (pa < t)
      ++out[b];
    else
      ++out[a];
  }
  return out.empty() ? 0 : *std::max_element(out.begin(), out.end());
}

// ---------------------------------------------------------- delayed trees

// Does an element outside [lo,hi] fall strictly between two values of [a,b]?
inline bool distinguished(const permutation& s, int a, int b, int lo, int hi) {
  int vmin = s[a], vmax = s[a];
  for (int x = a; x <= b; ++x) {
    vmin = std::min(vmin, s[x]);
    vmax = std::max(vmax, s[x]);
  }
  for (int y = 0; y < s.size(); ++y)
    if ((y < lo || y > hi) && vmin < s[y] && s[y] < vmax) return true;
  return false;
}

// Second order of a delayed tree straight from the definition: leaves x, y
// compare by the keys of their grandchildren under the closest ancestor.
inline std::optional<std::vector<int>> realize_by_definition(const sepfactor::delayed_tree& t) {
  const int n = t.n;
  std::vector<int> leaf_of(n, -1);
  for (int v = 0; v < static_cast<int>(t.nodes.size()); ++v)
    if (t.is_leaf(v)) leaf_of[t.nodes[v].lo] = v;
  auto path = [&](int v) {
    std::vector<int> p;
    for (; v >= 0; v = t.nodes[v].parent) p.push_back(v);
    std::reverse(p.begin(), p.end());
    return p;
  };
  // less(x, y) for leaves x != y
  auto less = [&](int x, int y) {
    auto px = path(leaf_of[x]), py = path(leaf_of[y]);
    std::size_t d = 0;
    while (d < px.size() && d < py.size() && px[d] == py[d]) ++d;
    // px[d-1] is the closest common ancestor; grandchildren are px[d+1], py[d+1]
    return t.nodes[px[d + 1]].key < t.nodes[py[d + 1]].key;
  };
  std::vector<int> rank(n, 0);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      if (x != y && less(y, x)) ++rank[x];
  std::vector<int> sorted(rank);
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < n; ++i)
    if (sorted[i] != i) return std::nullopt;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      if (x != y && less(x, y) != (rank[x] < rank[y])) return std::nullopt;
  return rank;
}

// ------------------------------------------------------------ subdivisions

inline sepfactor::ordered_graph naive_subdivision(const sepfactor::ordered_graph& g, int m) {
  sepfactor::ordered_graph out;
  out.n = g.n;
  for (auto [u, v] : g.edges) {
    int prev = u;
    for (int i = 0; i < m; ++i) {
      out.edges.push_back({prev, out.n});
      prev = out.n++;
    }
    out.edges.push_back({prev, v});
  }
  return out;
}

// Isomorphism fixing the original vertices 0..n0-1: every other vertex has
// degree 2, and contracting the degree-2 paths gives the same multiset of
// (endpoint, endpoint, length) triples.
inline std::optional<std::multiset<std::tuple<int, int, int>>> contract_paths(const sepfactor::ordered_graph& g, int n0) {
  std::vector<std::vector<int>> adj(g.n);
  for (auto [u, v] : g.edges) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  for (int v = n0; v < g.n; ++v)
    if (adj[v].size() != 2) return std::nullopt;
  std::multiset<std::tuple<int, int, int>> out;
  std::vector<char> used(g.n, 0);
  for (int u = 0; u < n0; ++u)
    for (int first : adj[u]) {
      int prev = u, cur = first, len = 1;
      while (cur >= n0) {
        used[cur] = 1;
        int next = adj[cur][0] == prev ? adj[cur][1] : adj[cur][0];
        prev = cur;
        cur = next;
        ++len;
      }
      if (u <= cur) out.insert({u, cur, len});
    }
  // a self-returning path (u == cur) is counted from both ends
  for (int v = n0; v < g.n; ++v)
    if (!used[v]) return std::nullopt;
  return out;
}

}  // namespace oracle
