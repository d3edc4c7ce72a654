#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "ordered_tree.hpp"
#include "permutation.hpp"

namespace sepfactor {

enum class sum_kind : std::uint8_t { direct, skew };

// Internal nodes carry a sum tag; leaves are labeled by order1 positions.
// Tags alternate along root-to-leaf paths.
struct separating_tree {
  ordered_tree tree;
  std::vector<sum_kind> tag;  // indexed by node, meaningful for internal nodes

  std::string str() const {
    std::string out;
    auto rec = [&](auto&& self, int v) -> void {
      const auto& nd = tree.nodes[v];
      if (nd.children.empty()) {
        out += std::to_string(nd.label);
        return;
      }
      out += tag[v] == sum_kind::direct ? "(+" : "(-";
      for (int c : nd.children) {
        out += ' ';
        self(self, c);
      }
      out += ')';
    };
    rec(rec, tree.root);
    return out;
  }
};

inline permutation realize_separating_tree(const separating_tree& st) {
  st.tree.validate();
  if (st.tag.size() < st.tree.nodes.size()) throw error("separating tree: missing tags");
  std::map<int, permutation> labels;
  for (int v = 0; v < static_cast<int>(st.tree.nodes.size()); ++v) {
    int k = static_cast<int>(st.tree.nodes[v].children.size());
    if (k == 0) continue;
    if (k == 1) throw error("separating tree: unary internal node");
    std::vector<int> img(k);
    for (int i = 0; i < k; ++i) img[i] = st.tag[v] == sum_kind::direct ? i : k - 1 - i;
    labels.emplace(v, permutation::trusted(std::move(img)));
  }
  // leaf labels must follow the leaf order
  auto lv = st.tree.leaves();
  for (int i = 0; i < static_cast<int>(lv.size()); ++i)
    if (st.tree.nodes[lv[i]].label != i + 1) throw error("separating tree: leaves out of order");
  return substitute_along_tree(st.tree, labels);
}

// Stack-based interval merging. Blocks hold a contiguous range of positions
// whose values form a contiguous range; the top two merge whenever their value
// ranges are adjacent.
inline std::optional<separating_tree> is_separable(const permutation& s) {
  const int n = s.size();
  if (n == 0) return std::nullopt;
  struct block {
    int lo, hi;  // value range
    int node;
  };
  separating_tree st;
  auto& t = st.tree;
  t.nodes.reserve(2 * n);
  st.tag.reserve(2 * n);
  auto new_node = [&](sum_kind k) {
    t.nodes.push_back({});
    st.tag.push_back(k);
    return static_cast<int>(t.nodes.size()) - 1;
  };
  auto adopt = [&](int parent, int child, sum_kind k) {
    // flatten same-tag internal children so tags alternate
    if (!t.nodes[child].children.empty() && st.tag[child] == k) {
      for (int g : t.nodes[child].children) {
        t.nodes[g].parent = parent;
        t.nodes[parent].children.push_back(g);
      }
      t.nodes[child].children.clear();
      t.nodes[child].parent = -2;  // detached, removed below
    } else {
      t.nodes[child].parent = parent;
      t.nodes[parent].children.push_back(child);
    }
  };

  std::vector<block> stack;
  for (int i = 0; i < n; ++i) {
    int leaf = new_node(sum_kind::direct);
    t.nodes[leaf].label = i + 1;
    block cur{s[i], s[i], leaf};
    while (!stack.empty()) {
      const block& top = stack.back();
      sum_kind k;
      if (top.hi + 1 == cur.lo)
        k = sum_kind::direct;
      else if (cur.hi + 1 == top.lo)
        k = sum_kind::skew;
      else
        break;
      int v = new_node(k);
      adopt(v, top.node, k);
      adopt(v, cur.node, k);
      cur = block{std::min(top.lo, cur.lo), std::max(top.hi, cur.hi), v};
      stack.pop_back();
    }
    stack.push_back(cur);
  }
  if (stack.size() != 1) return std::nullopt;

  // compact away detached nodes
  std::vector<int> remap(t.nodes.size(), -1);
  ordered_tree out;
  std::vector<sum_kind> tags;
  std::vector<int> order{stack[0].node};
  for (std::size_t q = 0; q < order.size(); ++q) {
    int v = order[q];
    remap[v] = static_cast<int>(q);
    for (int c : t.nodes[v].children) order.push_back(c);
  }
  out.nodes.resize(order.size());
  tags.resize(order.size());
  for (std::size_t q = 0; q < order.size(); ++q) {
    int v = order[q];
    auto& nd = out.nodes[q];
    nd.label = t.nodes[v].label;
    nd.parent = q == 0 ? -1 : remap[t.nodes[v].parent];
    for (int c : t.nodes[v].children) nd.children.push_back(remap[c]);
    tags[q] = st.tag[v];
  }
  out.root = 0;
  return separating_tree{std::move(out), std::move(tags)};
}

// Cap on the exhaustive separable-index search.
inline constexpr int separable_index_oracle_cap = 7;

inline std::vector<permutation> all_permutations(int n) {
  std::vector<int> v(n);
  std::iota(v.begin(), v.end(), 0);
  std::vector<permutation> out;
  do out.push_back(permutation::trusted(v));
  while (std::next_permutation(v.begin(), v.end()));
  return out;
}

// Lexicographic rank among all permutations of the same size.
inline int permutation_rank(const permutation& s) {
  int n = s.size(), r = 0;
  for (int i = 0; i < n; ++i) {
    int smaller = 0;
    for (int j = i + 1; j < n; ++j)
      if (s[j] < s[i]) ++smaller;
    r = r * (n - i) + smaller;
  }
  return r;
}

// Smallest number of separable factors, by breadth-first closure under
// composition. Zero for the identity (empty product).
inline std::optional<int> separable_index_oracle(const permutation& s, int max_k) {
  const int n = s.size();
  if (n > separable_index_oracle_cap)
    throw error("separable index oracle refuses n = " + std::to_string(n) + " (cap " +
                std::to_string(separable_index_oracle_cap) + ")");
  if (s.is_identity()) return 0;
  auto all = all_permutations(n);
  std::vector<permutation> seps;
  for (auto& p : all)
    if (is_separable(p)) seps.push_back(p);
  std::vector<int> dist(all.size(), -1);
  const int target = permutation_rank(s);
  std::vector<permutation> frontier{permutation::identity(n)};
  dist[0] = 0;
  for (int k = 1; k <= max_k && !frontier.empty(); ++k) {
    std::vector<permutation> next;
    for (const auto& f : frontier)
      for (const auto& g : seps) {
        auto h = compose(g, f);
        int r = permutation_rank(h);
        if (dist[r] >= 0) continue;
        dist[r] = k;
        if (r == target) return k;
        next.push_back(h);
      }
    frontier = std::move(next);
  }
  return std::nullopt;
}

}  // namespace sepfactor
