#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <queue>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "order_chain.hpp"
#include "permutation.hpp"
#include "rmq.hpp"

namespace sepfactor {

enum class split_side : std::int8_t { none, left, right };

// An element outside a node's leaf interval separating two consecutive
// children under the second order. Positions are zero-based order-1 indices.
struct split_witness {
  int element = -1;
  split_side side = split_side::none;
};

// l_i / r_i: leftmost and rightmost positions whose values fall strictly
// between sigma(i) and sigma(i+1). Range extrema over these answer "which
// elements distinguish some pair inside [a,b]" for any interval.
class split_oracle {
public:
  explicit split_oracle(const permutation& s) : n_(s.size()) {
    if (n_ < 2) return;
    auto inv = inverse(s);
    rmq_index by_value(inv.data());
    std::vector<int> l(n_ - 1), r(n_ - 1);
    for (int i = 0; i + 1 < n_; ++i) {
      int a = std::min(s[i], s[i + 1]) + 1, b = std::max(s[i], s[i + 1]) - 1;
      if (a > b) {
        l[i] = n_;
        r[i] = -1;
      } else {
        l[i] = inv[by_value.argmin(a, b)];
        r[i] = inv[by_value.argmax(a, b)];
      }
    }
    lmin_ = rmq_index(std::move(l));
    rmax_ = rmq_index(std::move(r));
  }

  int size() const { return n_; }

  // Pair index (i, i+1) with the leftmost / rightmost distinguisher in [a,b].
  int leftmost_pair(int a, int b) const { return lmin_.argmin(a, b - 1); }
  int rightmost_pair(int a, int b) const { return rmax_.argmax(a, b - 1); }
  int l_at(int i) const { return lmin_.value(i); }
  int r_at(int i) const { return rmax_.value(i); }

  // [a,b] is not split by anything outside [lo,hi].
  bool local_module(int a, int b, int lo, int hi) const {
    if (a == b) return true;
    return l_at(leftmost_pair(a, b)) >= lo && r_at(rightmost_pair(a, b)) <= hi;
  }

private:
  int n_;
  rmq_index lmin_, rmax_;
};

struct module_split {
  std::vector<std::pair<int, int>> parts;  // zero-based inclusive
  std::vector<split_witness> witnesses;    // witnesses[i] separates parts i and i+1
};

// Maximal partition of [lo,hi] into local modules, by repeated splitting at a
// pair distinguished from outside. Cost is proportional to the part count.
inline module_split split_local_modules(const split_oracle& o, int lo, int hi) {
  if (lo < 0 || hi >= o.size() || hi - lo < 1) throw error("split_local_modules: need an interval of size >= 2");
  if (o.local_module(lo, hi, lo, hi)) throw error("split_local_modules: interval of both orders, use the arbitrary split");
  module_split out;
  struct piece {
    int a, b;
    split_witness after;
  };
  std::vector<piece> stack{{lo, hi, {}}};
  while (!stack.empty()) {
    piece p = stack.back();
    stack.pop_back();
    int cut = -1, w = -1;
    if (p.a < p.b) {
      int i = o.leftmost_pair(p.a, p.b);
      if (o.l_at(i) < lo) {
        cut = i;
        w = o.l_at(i);
      } else {
        i = o.rightmost_pair(p.a, p.b);
        if (o.r_at(i) > hi) {
          cut = i;
          w = o.r_at(i);
        }
      }
    }
    if (cut < 0) {
      out.parts.emplace_back(p.a, p.b);
      if (p.b != hi) out.witnesses.push_back(p.after);
      continue;
    }
    split_witness sw{w, w < lo ? split_side::left : split_side::right};
    stack.push_back({cut + 1, p.b, p.after});
    stack.push_back({p.a, cut, sw});
  }
  return out;
}

inline module_split split_local_modules(const permutation& s, int lo, int hi) {
  return split_local_modules(split_oracle(s), lo, hi);
}

enum class build_rule : std::uint8_t { leaf, singleton, interval, modules, manual };

inline const char* rule_name(build_rule r) {
  switch (r) {
    case build_rule::leaf: return "leaf";
    case build_rule::singleton: return "singleton";
    case build_rule::interval: return "interval";
    case build_rule::modules: return "modules";
    default: return "manual";
  }
}

// Ordered tree whose leaves are single children, with an order on the
// grandchildren of each node given by keys: key(g) ranks g among the
// grandchildren of its grandparent. Children of a node are stored
// contiguously and always after their parent.
class delayed_tree {
public:
  struct node {
    int parent = -1;
    int lo = 0, hi = 0;  // order-1 leaf interval, zero-based inclusive
    int first_child = -1;
    int child_count = 0;
    int key = 0;
    int witness = -1;  // element separating this node from its next sibling
    build_rule rule = build_rule::manual;
  };

  std::vector<node> nodes;
  int n = 0;

  static constexpr int root = 0;

  // Hand construction: start with the root, append children, set keys on
  // grandchildren, then finalize() to assign leaf intervals.
  static delayed_tree manual() {
    delayed_tree t;
    t.nodes.push_back({});
    return t;
  }

  int add_children(int parent, int count) {
    if (nodes[parent].child_count) throw error("delayed tree: children already added");
    int first = static_cast<int>(nodes.size());
    nodes[parent].first_child = first;
    nodes[parent].child_count = count;
    for (int i = 0; i < count; ++i) {
      node c;
      c.parent = parent;
      nodes.push_back(c);
    }
    return first;
  }

  void set_key(int v, int key) { nodes[v].key = key; }

  void finalize() {
    n = 0;
    for (auto& v : nodes) v.rule = v.child_count ? build_rule::manual : build_rule::leaf;
    // leaf positions follow the depth-first leaf order
    std::vector<int> stack{root};
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      auto& nd = nodes[v];
      if (!nd.child_count) {
        if (nd.parent >= 0 && nodes[nd.parent].child_count != 1) throw error("delayed tree: leaf with siblings");
        if (nd.parent < 0) throw error("delayed tree: root is a leaf");
        nd.lo = nd.hi = n++;
        continue;
      }
      for (int c = nd.first_child + nd.child_count - 1; c >= nd.first_child; --c) stack.push_back(c);
    }
    for (int v = static_cast<int>(nodes.size()) - 1; v >= 0; --v) {
      auto& nd = nodes[v];
      if (!nd.child_count) continue;
      nd.lo = nodes[nd.first_child].lo;
      nd.hi = nodes[nd.first_child + nd.child_count - 1].hi;
    }
    for (int v = 0; v < static_cast<int>(nodes.size()); ++v) {
      auto gc = grandchildren(v);
      std::vector<int> keys;
      for (int g : gc) keys.push_back(nodes[g].key);
      std::sort(keys.begin(), keys.end());
      if (std::adjacent_find(keys.begin(), keys.end()) != keys.end())
        throw error("delayed tree: repeated key among grandchildren of node " + std::to_string(v));
    }
  }

  bool is_leaf(int v) const { return nodes[v].child_count == 0; }
  int child(int v, int i) const { return nodes[v].first_child + i; }

  std::vector<int> children(int v) const {
    std::vector<int> out(nodes[v].child_count);
    for (int i = 0; i < nodes[v].child_count; ++i) out[i] = nodes[v].first_child + i;
    return out;
  }

  // Grandchildren in order-1 order.
  std::vector<int> grandchildren(int v) const {
    std::vector<int> out;
    for (int c : children(v))
      for (int g : children(c)) out.push_back(g);
    return out;
  }

  split_witness witness_of(int v) const {
    const auto& nd = nodes[v];
    if (nd.witness < 0) return {};
    const auto& p = nodes[nd.parent];
    return {nd.witness, nd.witness < p.lo ? split_side::left : split_side::right};
  }

  std::string dump() const {
    std::ostringstream os;
    std::vector<std::pair<int, int>> stack{{root, 0}};
    while (!stack.empty()) {
      auto [v, d] = stack.back();
      stack.pop_back();
      const auto& nd = nodes[v];
      os << std::string(2 * d, ' ') << '[' << nd.lo + 1 << ".." << nd.hi + 1 << "] " << rule_name(nd.rule)
         << " key=" << nd.key;
      if (nd.witness >= 0) os << " witness=" << nd.witness + 1;
      os << '\n';
      for (int c = nd.first_child + nd.child_count - 1; nd.child_count && c >= nd.first_child; --c)
        stack.push_back({c, d + 1});
    }
    return os.str();
  }

  std::string dot() const {
    std::ostringstream os;
    os << "digraph delayed {\n  node [shape=box];\n";
    for (int v = 0; v < static_cast<int>(nodes.size()); ++v) {
      const auto& nd = nodes[v];
      os << "  n" << v << " [label=\"" << nd.lo + 1 << ".." << nd.hi + 1;
      if (nd.witness >= 0) os << "\\nw=" << nd.witness + 1;
      os << "\"];\n";
      if (nd.parent >= 0) os << "  n" << nd.parent << " -> n" << v << ";\n";
    }
    os << "}\n";
    return os.str();
  }
};

// Local-module construction: singleton intervals get a leaf child, intervals
// of both orders split at ceil(size/2), everything else splits into maximal
// local modules. key = sigma(leftmost leaf).
inline delayed_tree build_delayed_tree(const permutation& s) {
  const int n = s.size();
  if (n < 1) throw error("delayed tree: empty permutation");
  delayed_tree t;
  t.n = n;
  t.nodes.reserve(3 * static_cast<std::size_t>(n));
  auto push = [&](int parent, int lo, int hi, build_rule r) {
    delayed_tree::node nd;
    nd.parent = parent;
    nd.lo = lo;
    nd.hi = hi;
    nd.key = s[lo];
    nd.rule = r;
    t.nodes.push_back(nd);
  };
  push(-1, 0, n - 1, build_rule::manual);
  if (n == 1) {
    // root, chain node, leaf
    t.nodes[0].rule = build_rule::singleton;
    t.nodes[0].first_child = 1;
    t.nodes[0].child_count = 1;
    push(0, 0, 0, build_rule::manual);
  }
  split_oracle o(s);
  for (std::size_t v = n == 1 ? 1 : 0; v < t.nodes.size(); ++v) {
    if (t.nodes[v].rule == build_rule::leaf) continue;
    int lo = t.nodes[v].lo, hi = t.nodes[v].hi;
    int first = static_cast<int>(t.nodes.size());
    if (lo == hi) {
      t.nodes[v].rule = build_rule::singleton;
      t.nodes[v].first_child = first;
      t.nodes[v].child_count = 1;
      push(static_cast<int>(v), lo, lo, build_rule::leaf);
    } else if (o.local_module(lo, hi, lo, hi)) {
      int mid = lo + (hi - lo + 2) / 2;
      t.nodes[v].rule = build_rule::interval;
      t.nodes[v].first_child = first;
      t.nodes[v].child_count = 2;
      push(static_cast<int>(v), lo, mid - 1, build_rule::manual);
      push(static_cast<int>(v), mid, hi, build_rule::manual);
    } else {
      auto sp = split_local_modules(o, lo, hi);
      t.nodes[v].rule = build_rule::modules;
      t.nodes[v].first_child = first;
      t.nodes[v].child_count = static_cast<int>(sp.parts.size());
      for (std::size_t i = 0; i < sp.parts.size(); ++i) {
        push(static_cast<int>(v), sp.parts[i].first, sp.parts[i].second, build_rule::manual);
        if (i < sp.witnesses.size()) t.nodes.back().witness = sp.witnesses[i].element;
      }
    }
  }
  return t;
}

// Second order of the realization as order-1 position -> order-2 position.
// Each node's leaf sequence is a merge of its children's sequences keyed by
// the grandchild containing each leaf; an inversion against a child's own
// sequence is a non-transitive triple.
inline permutation realize(const delayed_tree& t) {
  const int n = t.n;
  std::vector<int> buf(n), tmp(n), keyof(n), childof(n), emitted(n);
  using item = std::pair<int, int>;  // key of head, child index
  for (int v = static_cast<int>(t.nodes.size()) - 1; v >= 0; --v) {
    const auto& nd = t.nodes[v];
    if (!nd.child_count) {
      buf[nd.lo] = nd.lo;
      continue;
    }
    if (nd.child_count == 1) continue;
    for (int j = 0; j < nd.child_count; ++j) {
      const auto& c = t.nodes[nd.first_child + j];
      for (int gi = 0; gi < c.child_count; ++gi) {
        const auto& g = t.nodes[c.first_child + gi];
        for (int x = g.lo; x <= g.hi; ++x) {
          keyof[x] = g.key;
          childof[x] = j;
        }
      }
    }
    std::vector<int> head(nd.child_count);
    std::priority_queue<item, std::vector<item>, std::greater<item>> pq;
    for (int j = 0; j < nd.child_count; ++j) {
      const auto& c = t.nodes[nd.first_child + j];
      head[j] = c.lo;
      pq.push({keyof[buf[c.lo]], j});
    }
    int out = nd.lo;
    // largest key emitted so far, and largest from a different child
    int best1 = -1, best1_child = -1, best1_elem = -1, best2 = -1, best2_elem = -1;
    while (!pq.empty()) {
      auto [k, j] = pq.top();
      pq.pop();
      int q = buf[head[j]];
      int other = best1_child != j ? best1 : best2;
      int other_elem = best1_child != j ? best1_elem : best2_elem;
      if (other > k) {
        int p = other_elem, cq = childof[q];
        const auto& c = t.nodes[nd.first_child + cq];
        int r = q;
        for (int i = c.lo; i <= c.hi; ++i) {
          int e = buf[i];
          if (i >= head[j] || emitted[e] > emitted[p]) {
            r = e;
            break;
          }
        }
        throw error("delayed tree is not well-formed: leaves " + std::to_string(p + 1) + " < " + std::to_string(r + 1) +
                    " < " + std::to_string(q + 1) + " < " + std::to_string(p + 1) + " under the realized relation");
      }
      emitted[q] = out;
      tmp[out++] = q;
      if (k > best1) {
        if (best1_child != j) {
          best2 = best1;
          best2_elem = best1_elem;
        }
        best1 = k;
        best1_child = j;
        best1_elem = q;
      } else if (j != best1_child && k > best2) {
        best2 = k;
        best2_elem = q;
      }
      const auto& c = t.nodes[nd.first_child + j];
      if (++head[j] <= c.hi) pq.push({keyof[buf[head[j]]], j});
    }
    std::copy(tmp.begin() + nd.lo, tmp.begin() + nd.hi + 1, buf.begin() + nd.lo);
  }
  std::vector<int> img(n);
  for (int k = 0; k < n; ++k) img[buf[k]] = k;
  return permutation::trusted(std::move(img));
}

// Children of v grouped by indistinguishability: two children are equivalent
// iff no leaf outside L(v) sits between them under the second order. pos2 is
// the realized second order. Classes come out in order-1 order of their first
// member.
inline std::vector<std::vector<int>> indistinguishability_classes(const delayed_tree& t, int v, const permutation& pos2) {
  const auto& nd = t.nodes[v];
  std::vector<std::vector<int>> out;
  if (!nd.child_count) return out;
  std::vector<int> vals;
  vals.reserve(nd.hi - nd.lo + 1);
  for (int x = nd.lo; x <= nd.hi; ++x) vals.push_back(pos2[x]);
  std::sort(vals.begin(), vals.end());
  // outside leaves are never inside a child's block, so one representative
  // per child suffices
  std::vector<std::pair<int, int>> gap;  // (outside leaves before, child)
  for (int c : t.children(v)) {
    int p = pos2[t.nodes[c].lo];
    int inside = static_cast<int>(std::lower_bound(vals.begin(), vals.end(), p) - vals.begin());
    gap.push_back({p - inside, c});
  }
  std::map<int, int> class_of_gap;
  for (auto& [g, c] : gap) {
    auto [it, fresh] = class_of_gap.try_emplace(g, static_cast<int>(out.size()));
    if (fresh) out.emplace_back();
    out[it->second].push_back(c);
  }
  return out;
}

inline std::vector<std::vector<int>> indistinguishability_classes(const delayed_tree& t, int v) {
  return indistinguishability_classes(t, v, realize(t));
}

// (<_v, <_v-keys) on the grandchildren of v, as a permutation.
inline permutation grandchild_label(const delayed_tree& t, int v) {
  std::vector<int> keys;
  for (int g : t.grandchildren(v)) keys.push_back(t.nodes[g].key);
  return permutation::trusted(ranks_of(keys));
}

struct delayed_factors {
  order_chain g1;  // < to <'
  order_chain g2;  // <' to an intermediate order
  order_chain g3;  // intermediate order to the realized order
  permutation p1() const { return chain_product(g1); }
  permutation p2() const { return chain_product(g2); }
  permutation p3() const { return chain_product(g3); }
};

// inner(v, label) returns a chain on the grandchildren of v (indexed in
// order-1 order) from the identity to label. The three layers are: the
// substitution along T ordering children by their leftmost leaf, then the
// substitution along T/~ where each quotient node's label passes through the
// original order on its representatives.
inline delayed_factors factor_delayed(const delayed_tree& t,
                                      const std::function<order_chain(int, const permutation&)>& inner) {
  const int n = t.n;
  const int count = static_cast<int>(t.nodes.size());
  auto pos2 = realize(t);

  std::vector<order_chain> g(count);
  std::vector<int> gc_index(count, -1);  // index among grandchildren of the grandparent
  for (int v = 0; v < count; ++v) {
    auto gc = t.grandchildren(v);
    if (gc.empty()) continue;
    for (int i = 0; i < static_cast<int>(gc.size()); ++i) gc_index[gc[i]] = i;
    auto label = grandchild_label(t, v);
    if (gc.size() == 1) {
      g[v] = trivial_chain(identity_order(1));
      continue;
    }
    g[v] = inner(v, label);
    if (g[v].size() != static_cast<int>(gc.size()) || g[v].front() != identity_order(label.size()) ||
        g[v].back() != label.data())
      throw error("factor_delayed: inner factorization does not match node label");
  }

  delayed_factors out;
  {
    chain_tree ct;
    std::vector<int> id(count);
    for (int v = 0; v < count; ++v) id[v] = ct.add_node(t.is_leaf(v) ? t.nodes[v].lo : -1);
    ct.root = id[delayed_tree::root];
    for (int v = 0; v < count; ++v) {
      const auto& nd = t.nodes[v];
      if (!nd.child_count) continue;
      std::vector<int> reps;
      for (int c : t.children(v)) {
        ct.children[id[v]].push_back(id[c]);
        reps.push_back(gc_index[t.nodes[c].first_child]);
      }
      if (nd.child_count >= 2) ct.label[id[v]] = restrict_chain(g[v], reps);
    }
    out.g1 = substitute_chains(ct, n);
  }

  // quotient tree: one node per class; the root stays alone
  chain_tree qt;
  std::vector<int> qnode_of(count, -1);
  std::vector<int> qparent_tnode;  // T-node whose children form the class
  std::vector<std::vector<int>> members;
  auto new_class = [&](const std::vector<int>& cls) {
    int leaf = cls.size() == 1 && t.is_leaf(cls[0]) ? t.nodes[cls[0]].lo : -1;
    int q = qt.add_node(leaf);
    for (int c : cls) qnode_of[c] = q;
    members.push_back(cls);
    qparent_tnode.push_back(cls[0] == delayed_tree::root ? -1 : t.nodes[cls[0]].parent);
    return q;
  };
  qt.root = new_class({delayed_tree::root});
  for (int v = 0; v < count; ++v) {
    if (!t.nodes[v].child_count) continue;
    for (auto& cls : indistinguishability_classes(t, v, pos2)) {
      int q = new_class(cls);
      int pq = qnode_of[v];
      qt.children[pq].push_back(q);
    }
  }

  // labels: (R,<',<) from g1, then (R,<,realized) from the grandparent's chain
  std::vector<order_chain> first_half(members.size()), second_half(members.size());
  int len_a = 0, len_b = 0;
  for (std::size_t q = 0; q < members.size(); ++q) {
    const auto& ch = qt.children[q];
    if (ch.size() < 2) continue;
    int tnode = qparent_tnode[q];
    if (tnode < 0) throw error("factor_delayed: root class with several child classes");
    std::vector<int> leaves, reps;
    for (int cq : ch) {
      int x = members[cq][0];
      leaves.push_back(t.nodes[x].lo);
      reps.push_back(gc_index[x]);
    }
    first_half[q] = reversed(restrict_chain(out.g1, leaves));
    second_half[q] = restrict_chain(g[tnode], reps);
    len_a = std::max(len_a, first_half[q].steps());
    len_b = std::max(len_b, second_half[q].steps());
  }
  for (std::size_t q = 0; q < members.size(); ++q) {
    if (qt.children[q].size() < 2) continue;
    pad(first_half[q], len_a);
    pad(second_half[q], len_b);
    qt.label[q] = concat(first_half[q], second_half[q]);
  }
  auto rest = substitute_chains(qt, n);
  if (rest.front() != out.g1.back()) throw error("factor_delayed: quotient substitution does not start at <'");
  if (rest.back() != pos2.data()) throw error("factor_delayed: quotient substitution does not reach the realization");
  out.g2.orders.assign(rest.orders.begin(), rest.orders.begin() + len_a + 1);
  out.g3.orders.assign(rest.orders.begin() + len_a, rest.orders.end());
  return out;
}

// One-step inner factorization: every node label taken as a single factor.
inline order_chain single_factor_inner(int, const permutation& label) { return single_step(label); }

}  // namespace sepfactor
