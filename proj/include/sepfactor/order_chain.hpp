#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include "permutation.hpp"

namespace sepfactor {

// rank[e] = position of element e.
using order = std::vector<int>;

inline order identity_order(int m) {
  order o(m);
  std::iota(o.begin(), o.end(), 0);
  return o;
}

// A factorization written as successive linear orders on one element set.
// Consecutive orders (a, b) contribute the factor taking the a-position of
// each element to its b-position; the product is (front, back).
struct order_chain {
  std::vector<order> orders;

  int size() const { return orders.empty() ? 0 : static_cast<int>(orders.front().size()); }
  int steps() const { return static_cast<int>(orders.size()) - 1; }
  const order& front() const { return orders.front(); }
  const order& back() const { return orders.back(); }
};

inline order_chain single_step(const permutation& p) {
  order_chain c{{identity_order(p.size())}};
  if (!p.is_identity()) c.orders.push_back(p.data());
  return c;
}

inline order_chain trivial_chain(const order& o) { return order_chain{{o}}; }

inline permutation step_permutation(const order& a, const order& b) {
  int m = static_cast<int>(a.size());
  std::vector<int> at(m), img(m);
  for (int e = 0; e < m; ++e) at[a[e]] = e;
  for (int p = 0; p < m; ++p) img[p] = b[at[p]];
  return permutation::trusted(std::move(img));
}

inline std::vector<permutation> chain_factors(const order_chain& c) {
  std::vector<permutation> out;
  for (int i = 1; i < static_cast<int>(c.orders.size()); ++i) out.push_back(step_permutation(c.orders[i - 1], c.orders[i]));
  return out;
}

inline permutation chain_product(const order_chain& c) { return step_permutation(c.front(), c.back()); }

// Drop repeated consecutive orders (identity factors).
inline void elide(order_chain& c) {
  auto last = std::unique(c.orders.begin(), c.orders.end());
  c.orders.erase(last, c.orders.end());
}

inline void pad(order_chain& c, int steps) {
  while (c.steps() < steps) c.orders.push_back(c.orders.back());
}

inline order_chain reversed(order_chain c) {
  std::reverse(c.orders.begin(), c.orders.end());
  return c;
}

inline order_chain concat(order_chain a, const order_chain& b) {
  if (a.back() != b.front()) throw error("chain concat: endpoints differ");
  a.orders.insert(a.orders.end(), b.orders.begin() + 1, b.orders.end());
  return a;
}

// Restriction to a subset of elements; element j of the result is subset[j].
inline order_chain restrict_chain(const order_chain& c, const std::vector<int>& subset) {
  order_chain r;
  r.orders.reserve(c.orders.size());
  std::vector<int> idx(subset.size());
  for (const auto& o : c.orders) {
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return o[subset[a]] < o[subset[b]]; });
    order ro(subset.size());
    for (int k = 0; k < static_cast<int>(idx.size()); ++k) ro[idx[k]] = k;
    r.orders.push_back(std::move(ro));
  }
  return r;
}

// Element e of c becomes element where[e] of an m-element set; the orders are
// otherwise unchanged.
inline order_chain relabel(const order_chain& c, const std::vector<int>& where) {
  order_chain r;
  for (const auto& o : c.orders) {
    order ro(o.size());
    for (int e = 0; e < static_cast<int>(o.size()); ++e) ro[where[e]] = o[e];
    r.orders.push_back(std::move(ro));
  }
  return r;
}

// Tree whose leaves are elements; each internal node with two or more
// children carries a chain of orders on its children (indexed by position in
// the child list). The global orders are the compatible orders obtained by
// sorting children by the i-th label order at every node; shorter labels are
// held at their final order.
struct chain_tree {
  std::vector<std::vector<int>> children;
  std::vector<int> element;  // -1 for internal nodes
  std::vector<order_chain> label;
  int root = 0;

  int add_node(int elem = -1) {
    children.emplace_back();
    element.push_back(elem);
    label.emplace_back();
    return static_cast<int>(children.size()) - 1;
  }
};

inline order_chain substitute_chains(const chain_tree& t, int element_count) {
  int steps = 0;
  for (std::size_t v = 0; v < t.children.size(); ++v)
    if (t.children[v].size() >= 2) {
      if (t.label[v].size() != static_cast<int>(t.children[v].size()))
        throw error("chain substitution: label arity mismatch");
      steps = std::max(steps, t.label[v].steps());
    }
  order_chain out;
  std::vector<int> stack, tmp;
  for (int i = 0; i <= steps; ++i) {
    order o(element_count, -1);
    int k = 0;
    stack.assign(1, t.root);
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      const auto& ch = t.children[v];
      if (ch.empty()) {
        o[t.element[v]] = k++;
        continue;
      }
      if (ch.size() == 1) {
        stack.push_back(ch[0]);
        continue;
      }
      const auto& lab = t.label[v].orders[std::min(i, t.label[v].steps())];
      tmp.assign(ch.size(), -1);
      for (int j = 0; j < static_cast<int>(ch.size()); ++j) tmp[lab[j]] = ch[j];
      for (auto it = tmp.rbegin(); it != tmp.rend(); ++it) stack.push_back(*it);
    }
    if (k != element_count) throw error("chain substitution: leaves do not cover the element set");
    out.orders.push_back(std::move(o));
  }
  return out;
}

}  // namespace sepfactor
