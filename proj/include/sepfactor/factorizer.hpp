#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "certificate.hpp"
#include "delayed_tree.hpp"
#include "minors.hpp"
#include "mixed_partition.hpp"
#include "order_chain.hpp"
#include "permutation.hpp"
#include "separable.hpp"

namespace sepfactor {

inline int ceil_log2(long long k) {
  int c = 0;
  while ((1LL << c) < k) ++c;
  return c;
}

inline long long bound_f(int k) {
  if (k < 2) throw error("bound_f: k must be at least 2");
  if (k > 37) throw error("bound_f: k too large for 64-bit arithmetic");
  long long p = 1;
  for (int i = 0; i < k; ++i) p *= 3;
  return 4 * p - 6 * ceil_log2(k) - 23;
}

inline long long bound_s(long long r, int k) {
  if (r < 0 || k < 2) throw error("bound_s: need r >= 0 and k >= 2");
  return 3 * r + 12 * ceil_log2(k) + 28;
}

struct not_almost_mixed_free : error {
  permutation offending;
  explicit not_almost_mixed_free(permutation p)
      : error("input not k-almost-mixed-free as claimed (offending sub-permutation " + p.str() + ")"),
        offending(std::move(p)) {}
};

struct pattern_contained : error {
  std::vector<int> witness;  // one-based positions
  explicit pattern_contained(std::vector<int> w) : error(message(w)), witness(std::move(w)) {}

 private:
  static std::string message(const std::vector<int>& w) {
    std::string s = "input contains the pattern at positions";
    for (int p : w) s += ' ' + std::to_string(p);
    return s;
  }
};

using chain_fn = std::function<order_chain(const permutation&)>;
using class_inner = std::function<order_chain(int, const permutation&)>;

inline order_chain plain_inner(const permutation& p) { return single_step(p); }

// ---------------------------------------------------------------- shuffles

struct shuffle_chains {
  order_chain left, core, right;
  order_chain full() const { return concat(concat(left, core), right); }
};

namespace detail {

inline order_chain direct_sum_dual(const order_chain& y, const order_chain& z, const std::vector<int>& where_y,
                                   const std::vector<int>& where_z, int total) {
  int steps = std::max(y.steps(), z.steps());
  order_chain a = y, b = z;
  pad(a, steps);
  pad(b, steps);
  const int ny = static_cast<int>(where_y.size()), nz = static_cast<int>(where_z.size());
  order_chain out;
  for (int i = 0; i <= steps; ++i) {
    order o(total);
    for (int e = 0; e < ny; ++e) o[where_y[e]] = a.orders[i][e];
    for (int e = 0; e < nz; ++e) o[where_z[e]] = ny + (nz - 1 - b.orders[i][e]);
    out.orders.push_back(std::move(o));
  }
  return out;
}

// Elements are order-1 positions of s; classes are sorted element lists.
inline shuffle_chains shuffle_rec(const permutation& s, const std::vector<std::vector<int>>& classes, int from, int to,
                                  const class_inner& inner) {
  if (to - from == 1) {
    const auto& cls = classes[from];
    auto r = restrict_positions(s, cls);
    auto c = inner(from, r);
    if (c.orders.empty() || c.size() != r.size() || c.front() != identity_order(r.size()) || c.back() != r.data())
      throw error("shuffle: inner chain does not factor its class");
    return {trivial_chain(c.front()), c, trivial_chain(c.back())};
  }
  int mid = from + (to - from + 1) / 2;
  auto ty = shuffle_rec(s, classes, from, mid, inner);
  auto tz = shuffle_rec(s, classes, mid, to, inner);
  std::vector<int> ey, ez, e;
  for (int c = from; c < mid; ++c) ey.insert(ey.end(), classes[c].begin(), classes[c].end());
  for (int c = mid; c < to; ++c) ez.insert(ez.end(), classes[c].begin(), classes[c].end());
  std::sort(ey.begin(), ey.end());
  std::sort(ez.begin(), ez.end());
  std::merge(ey.begin(), ey.end(), ez.begin(), ez.end(), std::back_inserter(e));
  std::vector<int> wy(ey.size()), wz(ez.size());
  for (std::size_t i = 0; i < ey.size(); ++i) wy[i] = static_cast<int>(std::lower_bound(e.begin(), e.end(), ey[i]) - e.begin());
  for (std::size_t i = 0; i < ez.size(); ++i) wz[i] = static_cast<int>(std::lower_bound(e.begin(), e.end(), ez[i]) - e.begin());
  const int total = static_cast<int>(e.size());
  shuffle_chains out;
  out.left = direct_sum_dual(ty.left, tz.left, wy, wz, total);
  out.left.orders.insert(out.left.orders.begin(), identity_order(total));
  out.core = direct_sum_dual(ty.core, tz.core, wy, wz, total);
  out.right = direct_sum_dual(ty.right, tz.right, wy, wz, total);
  out.right.orders.push_back(restrict_positions(s, e).data());
  return out;
}

}  // namespace detail

// Recursive halving of the classes: left side reaches the order with the first
// half in order-1 order followed by the second half reversed, the core runs the
// class factorizations side by side, the right side undoes the arrangement.
inline shuffle_chains shuffle_chain(const permutation& s, const std::vector<std::vector<int>>& classes,
                                    const class_inner& inner) {
  std::vector<std::vector<int>> cls;
  std::vector<int> seen(s.size(), 0);
  for (const auto& c : classes) {
    if (c.empty()) continue;
    auto sorted = c;
    std::sort(sorted.begin(), sorted.end());
    for (int x : sorted) {
      if (x < 0 || x >= s.size() || seen[x]++) throw error("shuffle: classes do not partition the elements");
    }
    cls.push_back(std::move(sorted));
  }
  if (std::count(seen.begin(), seen.end(), 1) != s.size()) throw error("shuffle: classes do not partition the elements");
  if (cls.empty()) {
    auto id = identity_order(0);
    return {trivial_chain(id), trivial_chain(id), trivial_chain(id)};
  }
  return detail::shuffle_rec(s, cls, 0, static_cast<int>(cls.size()), inner);
}

struct shuffle_factors {
  std::vector<permutation> left;
  permutation core;
  std::vector<permutation> right;
};

inline std::vector<permutation> factors_of(order_chain c) {
  elide(c);
  return chain_factors(c);
}

inline shuffle_factors factor_shuffle(const permutation& s, const std::vector<std::vector<int>>& classes,
                                      const class_inner& inner = [](int, const permutation& p) { return plain_inner(p); }) {
  auto sc = shuffle_chain(s, classes, inner);
  return {factors_of(sc.left), chain_product(sc.core), factors_of(sc.right)};
}

// ------------------------------------------------------ non-mixed partitions

namespace detail {

// Label on a node's children going from the start ranks to the end ranks, as a
// 2-shuffle of the two child classes.
inline order_chain two_class_label(const std::vector<int>& start_key, const std::vector<int>& end_key,
                                   const std::vector<int>& class_of) {
  const int c = static_cast<int>(start_key.size());
  std::vector<int> by_start(c);
  std::iota(by_start.begin(), by_start.end(), 0);
  std::sort(by_start.begin(), by_start.end(), [&](int a, int b) { return start_key[a] < start_key[b]; });
  std::vector<int> ends(c);
  for (int i = 0; i < c; ++i) ends[i] = end_key[by_start[i]];
  auto p = permutation::trusted(ranks_of(ends));
  std::vector<std::vector<int>> classes(2);
  for (int i = 0; i < c; ++i) classes[class_of[by_start[i]]].push_back(i);
  auto chain = shuffle_chain(p, classes, [](int, const permutation& q) { return plain_inner(q); }).full();
  return relabel(chain, by_start);
}

}  // namespace detail

// Parts are intervals of order 1; transversal[i] lies in part i. part_chains[i]
// factors the restriction to part i, transversal_chain the restriction to the
// transversal (elements indexed by part).
inline order_chain non_mixed_chain(const permutation& s, const interval_partition& p, const std::vector<int>& transversal,
                                   const std::vector<order_chain>& part_chains, const order_chain& transversal_chain) {
  const int n = s.size();
  const int np = p.parts();
  if (p.n != n) throw error("non-mixed factorization: partition size differs from input");
  if (static_cast<int>(transversal.size()) != np || static_cast<int>(part_chains.size()) != np)
    throw error("non-mixed factorization: one transversal element and one chain per part required");
  for (int i = 0; i < np; ++i)
    if (transversal[i] < p.begin(i) || transversal[i] >= p.end(i))
      throw error("non-mixed factorization: transversal element outside its part");
  auto forest = build_split_forest(s, p);

  // (X,<,<'): parts inside, transversal outside
  chain_tree t1;
  t1.root = t1.add_node();
  std::vector<int> part_node(np);
  for (int i = 0; i < np; ++i) {
    part_node[i] = t1.add_node();
    t1.children[t1.root].push_back(part_node[i]);
    for (int x = p.begin(i); x < p.end(i); ++x) {
      int leaf = t1.add_node(x);
      t1.children[part_node[i]].push_back(leaf);
    }
    t1.label[part_node[i]] = part_chains[i];
  }
  t1.label[t1.root] = transversal_chain;
  auto chain1 = substitute_chains(t1, n);
  if (chain1.front() != identity_order(n)) throw error("non-mixed factorization: inner chains do not start at order 1");
  const order& mid = chain1.back();

  // (X,<',≺) along the split forest
  chain_tree t2;
  t2.root = t2.add_node();
  std::vector<int> node_of(np);
  for (int i = 0; i < np; ++i) node_of[i] = t2.add_node();
  std::vector<int> rep_of_node(t2.children.size(), -1);
  for (int i = 0; i < np; ++i) rep_of_node[node_of[i]] = transversal[i];
  auto label_node = [&](int v, const std::vector<int>& reps, const std::vector<int>& cls) {
    if (reps.size() < 2) return;
    std::vector<int> a(reps.size()), b(reps.size());
    for (std::size_t j = 0; j < reps.size(); ++j) {
      a[j] = mid[reps[j]];
      b[j] = s[reps[j]];
    }
    t2.label[v] = detail::two_class_label(a, b, cls);
  };
  {
    std::vector<int> reps, cls;
    for (int r : forest.roots) {
      t2.children[t2.root].push_back(node_of[r]);
      reps.push_back(transversal[r]);
      cls.push_back(1);
    }
    label_node(t2.root, reps, cls);
  }
  for (int i = 0; i < np; ++i) {
    std::vector<int> reps, cls;
    for (int x = p.begin(i); x < p.end(i); ++x) {
      int leaf = t2.add_node(x);
      t2.children[node_of[i]].push_back(leaf);
      reps.push_back(x);
      cls.push_back(0);
    }
    for (int c : forest.children[i]) {
      t2.children[node_of[i]].push_back(node_of[c]);
      reps.push_back(transversal[c]);
      cls.push_back(1);
    }
    label_node(node_of[i], reps, cls);
  }
  auto chain2 = substitute_chains(t2, n);
  if (chain2.front() != mid) throw error("non-mixed factorization: intermediate orders disagree");
  if (chain2.back() != s.data()) throw error("non-mixed factorization: result does not reach order 2");
  return concat(std::move(chain1), chain2);
}

inline order_chain factor_non_mixed(const permutation& s, const interval_partition& p, const std::vector<int>& transversal,
                                    const chain_fn& inner = plain_inner) {
  std::vector<order_chain> parts;
  for (int i = 0; i < p.parts(); ++i) parts.push_back(inner(restrict_positions(s, p.elements(i))));
  return non_mixed_chain(s, p, transversal, parts, inner(restrict_positions(s, transversal)));
}

// -------------------------------------------------------- grandchildren step

struct grandchildren_chain {
  order_chain chain;
  int colors = 0;
};

using transversal_fn = std::function<order_chain(const std::vector<int>& parts)>;

// Colours the mixed graph of the parts, factors each colour class as a
// non-mixed partition (transversal = first element of each part) and
// recombines the classes with a shuffle.
inline grandchildren_chain grandchildren_chain_of(const permutation& s, const interval_partition& p,
                                                  const std::vector<order_chain>& part_chains,
                                                  const transversal_fn& transversal_chain,
                                                  int fast_threshold = default_fast_threshold) {
  auto col = color_mixed_parts(s, p, fast_threshold);
  std::vector<std::vector<int>> parts_of(col.colors), classes(col.colors);
  for (int i = 0; i < p.parts(); ++i) {
    parts_of[col.color[i] - 1].push_back(i);
    for (int x = p.begin(i); x < p.end(i); ++x) classes[col.color[i] - 1].push_back(x);
  }
  auto inner = [&](int c, const permutation& r) {
    std::vector<int> sizes, trans;
    std::vector<order_chain> chains;
    int offset = 0;
    for (int i : parts_of[c]) {
      sizes.push_back(p.size(i));
      trans.push_back(offset);
      offset += p.size(i);
      chains.push_back(part_chains[i]);
    }
    return non_mixed_chain(r, interval_partition::from_sizes(sizes), trans, chains, transversal_chain(parts_of[c]));
  };
  return {shuffle_chain(s, classes, inner).full(), col.colors};
}

inline grandchildren_chain factor_grandchildren(const permutation& s, const interval_partition& p,
                                                const chain_fn& inner = plain_inner,
                                                int fast_threshold = default_fast_threshold) {
  std::vector<order_chain> parts;
  std::vector<int> firsts;
  for (int i = 0; i < p.parts(); ++i) {
    parts.push_back(inner(restrict_positions(s, p.elements(i))));
    firsts.push_back(p.begin(i));
  }
  return grandchildren_chain_of(s, p, parts,
                                [&](const std::vector<int>& sub) {
                                  std::vector<int> pos;
                                  for (int i : sub) pos.push_back(firsts[i]);
                                  return inner(restrict_positions(s, pos));
                                },
                                fast_threshold);
}

// ------------------------------------------------------------ main induction

struct factorize_options {
  double cap = default_minor_cap;
  int fast_threshold = default_fast_threshold;
  std::size_t trace_limit = 4096;
};

class main_induction {
public:
  explicit main_induction(factorize_options opt = {}) : opt_(opt) {}

  // Chain from order 1 to order 2 of s.
  order_chain run(int k, const permutation& s) {
    const int n = s.size();
    if (n <= 1 || s.is_identity()) return trivial_chain(identity_order(n));
    if (is_separable(s)) {
      log("base", {{"k", k}, {"n", n}});
      return single_step(s);
    }
    if (k <= 2) throw not_almost_mixed_free(s);
    log("induction", {{"k", k}, {"n", n}});
    // X1 < first, first < X2 < last, X3 > last in order 2 (values)
    int a = std::min(s[0], s[n - 1]), b = std::max(s[0], s[n - 1]);
    std::vector<std::vector<int>> classes(4);
    for (int x = 1; x + 1 < n; ++x) classes[s[x] < a ? 0 : s[x] < b ? 1 : 2].push_back(x);
    classes[3] = {0, n - 1};
    std::vector<std::vector<int>> used;
    std::vector<bool> endpoints;
    for (int c = 0; c < 4; ++c)
      if (!classes[c].empty()) {
        used.push_back(classes[c]);
        endpoints.push_back(c == 3);
      }
    log("shuffle", {{"classes", used.size()}, {"n", n}});
    return shuffle_chain(s, used, [&](int c, const permutation& r) {
             return endpoints[c] ? single_step(r) : delayed_route(k, r);
           }).full();
  }

  bool color_bound_exceeded() const { return color_bound_exceeded_; }
  std::vector<trace_entry>& trace() { return trace_; }

private:
  void log(const char* method, nlohmann::json params) {
    if (trace_.size() < opt_.trace_limit) {
      trace_.push_back({static_cast<int>(trace_.size()), method, std::move(params)});
    } else if (trace_.size() == opt_.trace_limit) {
      trace_.push_back({static_cast<int>(trace_.size()), "truncated", nlohmann::json::object()});
    }
  }

  order_chain delayed_route(int k, const permutation& s) {
    const int n = s.size();
    if (n <= 1 || s.is_identity()) return trivial_chain(identity_order(n));
    if (is_separable(s)) {
      log("base", {{"k", k}, {"n", n}});
      return single_step(s);
    }
    auto t = build_delayed_tree(s);
    log("delayed", {{"k", k}, {"n", n}, {"nodes", t.nodes.size()}});
    const int count = static_cast<int>(t.nodes.size());
    // C(u): chain on the leftmost leaves of u's children, split by witness side
    std::vector<order_chain> c(count);
    for (int v = 0; v < count; ++v) {
      const auto& nd = t.nodes[v];
      if (nd.child_count == 0) continue;
      if (nd.child_count == 1) {
        c[v] = trivial_chain(identity_order(1));
        continue;
      }
      std::vector<int> keys;
      std::vector<std::vector<int>> sides(2);
      for (int j = 0; j < nd.child_count; ++j) {
        int ch = t.child(v, j);
        keys.push_back(s[t.nodes[ch].lo]);
        bool right = j + 1 < nd.child_count && t.witness_of(ch).side == split_side::right;
        sides[right].push_back(j);
      }
      auto r = permutation::trusted(ranks_of(keys));
      c[v] = shuffle_chain(r, sides, [&](int, const permutation& q) { return run(k - 1, q); }).full();
    }
    auto f = factor_delayed(t, [&](int v, const permutation& label) {
      std::vector<int> sizes;
      std::vector<order_chain> parts;
      for (int ch : t.children(v)) {
        sizes.push_back(t.nodes[ch].child_count);
        parts.push_back(c[ch]);
      }
      auto g = grandchildren_chain_of(
          label, interval_partition::from_sizes(sizes), parts,
          [&](const std::vector<int>& sub) { return restrict_chain(c[v], sub); }, opt_.fast_threshold);
      if (g.colors > 4LL * k * k) color_bound_exceeded_ = true;
      log("grandchildren", {{"k", k}, {"parts", sizes.size()}, {"colors", g.colors}});
      return std::move(g.chain);
    });
    return concat(concat(std::move(f.g1), f.g2), f.g3);
  }

  factorize_options opt_;
  std::vector<trace_entry> trace_;
  bool color_bound_exceeded_ = false;
};

namespace detail {

inline void finish(certificate& c, order_chain chain) {
  c.factors = factors_of(std::move(chain));
  attach_trees(c);
}

inline bool claim_verified(const permutation& s, int k, double cap) {
  try {
    return almost_mixed_number(s, cap) <= k;
  } catch (const error&) {
    return false;
  }
}

}  // namespace detail

// Certificate for a permutation claimed k-almost-mixed free. The claim is
// checked by the minor search when it fits under the cap; verified also
// requires every colour count to stay within 4k^2.
inline certificate factor_almost_mixed_free(const permutation& s, int k, factorize_options opt = {}) {
  if (k < 2) throw error("factor_almost_mixed_free: k must be at least 2");
  main_induction ind(opt);
  certificate c;
  c.input = s;
  c.method = "almost-mixed-free";
  c.k = k;
  c.bound = bound_f(k);
  detail::finish(c, ind.run(k, s));
  c.trace = std::move(ind.trace());
  c.verified = detail::claim_verified(s, k, opt.cap) && !ind.color_bound_exceeded() &&
               static_cast<long long>(c.factors.size()) <= *c.bound;
  return c;
}

inline constexpr int max_retry_k = 36;

// Factors sigma = sigma2 o sigma1^-1 through a third order, where both sides
// are almost-mixed free.
inline certificate factor_avoiding(const permutation& s, const permutation& pattern, factorize_options opt = {}) {
  if (auto w = contains_pattern(s, pattern)) throw pattern_contained(*w);
  certificate c;
  c.input = s;
  if (s.size() <= 1 || is_separable(s)) {
    c.method = "separable";
    c.k = 2;
    c.bound = 1;
    c.verified = true;
    c.factors = s.is_identity() ? std::vector<permutation>{} : std::vector<permutation>{s};
    attach_trees(c);
    return c;
  }
  auto mf = mixed_free_order(s, opt.cap);
  auto [s1, s2] = detail::sides(s, mf.order);
  c.method = "avoiding";
  c.trace.push_back({0, "third-order", {{"k", mf.k}, {"verified", mf.verified}, {"width", mf.width}}});
  int k = std::max(mf.k, 2);
  while (true) {
    main_induction ind(opt);
    try {
      auto a = ind.run(k, s1);
      auto b = ind.run(k, s2);
      c.k = k;
      c.bound = k <= max_retry_k ? std::optional<long long>(2 * bound_f(k)) : std::nullopt;
      detail::finish(c, concat(reversed(std::move(a)), b));
      for (auto& e : ind.trace()) {
        e.step = static_cast<int>(c.trace.size());
        c.trace.push_back(std::move(e));
      }
      c.verified = mf.verified && k == mf.k && !ind.color_bound_exceeded() &&
                   (!c.bound || static_cast<long long>(c.factors.size()) <= *c.bound);
      return c;
    } catch (const not_almost_mixed_free&) {
      if (mf.verified || k >= max_retry_k) throw;
      ++k;
      c.trace.push_back({static_cast<int>(c.trace.size()), "retry", {{"k", k}}});
    }
  }
}

}  // namespace sepfactor
