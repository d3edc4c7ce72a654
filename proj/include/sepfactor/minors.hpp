#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "permutation.hpp"

namespace sepfactor {

class matrix01 {
public:
  matrix01() = default;
  matrix01(int rows, int cols) : r_(rows), c_(cols), a_(static_cast<std::size_t>(rows) * cols, 0) {}

  int rows() const { return r_; }
  int cols() const { return c_; }
  int at(int i, int j) const { return a_[static_cast<std::size_t>(i) * c_ + j]; }
  void set(int i, int j, int v) { a_[static_cast<std::size_t>(i) * c_ + j] = static_cast<std::uint8_t>(v); }

  std::string str() const {
    std::string out;
    for (int i = 0; i < r_; ++i) {
      for (int j = 0; j < c_; ++j) out += static_cast<char>('0' + at(i, j));
      out += '\n';
    }
    return out;
  }

  friend bool operator==(const matrix01& a, const matrix01& b) { return a.r_ == b.r_ && a.c_ == b.c_ && a.a_ == b.a_; }

private:
  int r_ = 0, c_ = 0;
  std::vector<std::uint8_t> a_;
};

// Rows and columns in order-1 order, 1 at (x,y) iff sigma(x) < sigma(y).
inline matrix01 adjacency_matrix(const permutation& s) {
  matrix01 m(s.size(), s.size());
  for (int x = 0; x < s.size(); ++x)
    for (int y = 0; y < s.size(); ++y) m.set(x, y, s[x] < s[y]);
  return m;
}

enum class cell_kind : std::uint8_t { horizontal, vertical, constant, mixed };

inline const char* cell_kind_name(cell_kind k) {
  switch (k) {
    case cell_kind::horizontal: return "horizontal";
    case cell_kind::vertical: return "vertical";
    case cell_kind::constant: return "constant";
    default: return "mixed";
  }
}

// Half-open ranges [r0,r1) x [c0,c1).
inline cell_kind cell_class(const matrix01& m, int r0, int r1, int c0, int c1) {
  if (r0 >= r1 || c0 >= c1) throw error("cell_class: empty range");
  bool rows_constant = true, cols_constant = true;
  for (int i = r0; i < r1 && rows_constant; ++i)
    for (int j = c0 + 1; j < c1; ++j)
      if (m.at(i, j) != m.at(i, c0)) {
        rows_constant = false;
        break;
      }
  for (int j = c0; j < c1 && cols_constant; ++j)
    for (int i = r0 + 1; i < r1; ++i)
      if (m.at(i, j) != m.at(r0, j)) {
        cols_constant = false;
        break;
      }
  if (rows_constant && cols_constant) return cell_kind::constant;
  if (rows_constant) return cell_kind::horizontal;
  if (cols_constant) return cell_kind::vertical;
  return cell_kind::mixed;
}

enum class minor_kind : std::uint8_t { grid, mixed, almost_mixed };

inline const char* minor_kind_name(minor_kind k) {
  switch (k) {
    case minor_kind::grid: return "grid";
    case minor_kind::mixed: return "mixed";
    default: return "almost-mixed";
  }
}

// Per-cell evidence. Grid cells: a 1-entry at (row, col). Mixed cells: rows
// row_a/row_b differ at column col_at, columns col_a/col_b differ at row
// row_at. Unused for the diagonal of an almost-mixed minor (present = false).
struct cell_evidence {
  bool present = false;
  int row = -1, col = -1;
  int row_a = -1, row_b = -1, col_at = -1;
  int col_a = -1, col_b = -1, row_at = -1;
};

// Cuts are counts: a cut c separates rows c-1 and c (one-based "after row c").
struct minor_witness {
  minor_kind kind = minor_kind::mixed;
  int k = 0;
  std::vector<int> row_cuts, col_cuts;
  std::vector<std::vector<cell_evidence>> evidence;

  std::vector<int> row_bounds(int rows) const {
    std::vector<int> b{0};
    b.insert(b.end(), row_cuts.begin(), row_cuts.end());
    b.push_back(rows);
    return b;
  }
  std::vector<int> col_bounds(int cols) const {
    std::vector<int> b{0};
    b.insert(b.end(), col_cuts.begin(), col_cuts.end());
    b.push_back(cols);
    return b;
  }
};

inline constexpr double default_minor_cap = 1e8;

inline double binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  double r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

namespace detail {

// Run lengths make "is row i constant on [c0,c1)" an O(1) test.
struct cell_oracle {
  const matrix01& m;
  std::vector<int> row_run, col_run;  // first index where the value changes
  std::vector<int> ones;              // 2D prefix sums

  explicit cell_oracle(const matrix01& mm) : m(mm) {
    int r = m.rows(), c = m.cols();
    row_run.assign(static_cast<std::size_t>(r) * c, c);
    col_run.assign(static_cast<std::size_t>(r) * c, r);
    for (int i = 0; i < r; ++i)
      for (int j = c - 2; j >= 0; --j)
        row_run[i * c + j] = m.at(i, j) != m.at(i, j + 1) ? j + 1 : row_run[i * c + j + 1];
    for (int j = 0; j < c; ++j)
      for (int i = r - 2; i >= 0; --i)
        col_run[i * c + j] = m.at(i, j) != m.at(i + 1, j) ? i + 1 : col_run[(i + 1) * c + j];
    ones.assign(static_cast<std::size_t>(r + 1) * (c + 1), 0);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j)
        ones[(i + 1) * (c + 1) + j + 1] =
            m.at(i, j) + ones[i * (c + 1) + j + 1] + ones[(i + 1) * (c + 1) + j] - ones[i * (c + 1) + j];
  }

  bool has_one(int r0, int r1, int c0, int c1) const {
    int c = m.cols() + 1;
    return ones[r1 * c + c1] - ones[r0 * c + c1] - ones[r1 * c + c0] + ones[r0 * c + c0] > 0;
  }

  bool mixed(int r0, int r1, int c0, int c1) const {
    int c = m.cols();
    bool row_varies = false, col_varies = false;
    for (int i = r0; i < r1; ++i)
      if (row_run[i * c + c0] < c1) {
        row_varies = true;
        break;
      }
    if (!row_varies) return false;
    for (int j = c0; j < c1; ++j)
      if (col_run[r0 * c + j] < r1) {
        col_varies = true;
        break;
      }
    return col_varies;
  }

  bool ok(minor_kind kind, int r0, int r1, int c0, int c1) const {
    return kind == minor_kind::grid ? has_one(r0, r1, c0, c1) : mixed(r0, r1, c0, c1);
  }
};

inline cell_evidence make_evidence(const matrix01& m, minor_kind kind, int r0, int r1, int c0, int c1) {
  cell_evidence e;
  if (kind == minor_kind::grid) {
    for (int i = r0; i < r1 && !e.present; ++i)
      for (int j = c0; j < c1; ++j)
        if (m.at(i, j)) {
          e.present = true;
          e.row = i;
          e.col = j;
          break;
        }
    return e;
  }
  // two rows differing somewhere, two columns differing somewhere
  bool rows_found = false, cols_found = false;
  for (int j = c0; j < c1 && !rows_found; ++j)
    for (int i = r0 + 1; i < r1; ++i)
      if (m.at(i, j) != m.at(r0, j)) {
        e.row_a = r0;
        e.row_b = i;
        e.col_at = j;
        rows_found = true;
        break;
      }
  for (int i = r0; i < r1 && !cols_found; ++i)
    for (int j = c0 + 1; j < c1; ++j)
      if (m.at(i, j) != m.at(i, c0)) {
        e.col_a = c0;
        e.col_b = j;
        e.row_at = i;
        cols_found = true;
        break;
      }
  e.present = rows_found && cols_found;
  return e;
}

inline bool cell_required(minor_kind kind, int i, int j) { return kind != minor_kind::almost_mixed || i != j; }

inline void fill_evidence(const matrix01& m, minor_witness& w) {
  auto rb = w.row_bounds(m.rows()), cb = w.col_bounds(m.cols());
  w.evidence.assign(w.k, std::vector<cell_evidence>(w.k));
  for (int i = 0; i < w.k; ++i)
    for (int j = 0; j < w.k; ++j)
      if (cell_required(w.kind, i, j)) w.evidence[i][j] = make_evidence(m, w.kind, rb[i], rb[i + 1], cb[j], cb[j + 1]);
}

}  // namespace detail

// Re-checks the division and every piece of evidence against the matrix.
inline bool verify_witness(const matrix01& m, const minor_witness& w) {
  if (w.k < 1 || static_cast<int>(w.row_cuts.size()) != w.k - 1 || static_cast<int>(w.col_cuts.size()) != w.k - 1)
    return false;
  auto rb = w.row_bounds(m.rows()), cb = w.col_bounds(m.cols());
  for (int i = 0; i < w.k; ++i)
    if (rb[i] >= rb[i + 1] || cb[i] >= cb[i + 1]) return false;
  if (static_cast<int>(w.evidence.size()) != w.k) return false;
  auto in = [](int v, int lo, int hi) { return lo <= v && v < hi; };
  for (int i = 0; i < w.k; ++i)
    for (int j = 0; j < w.k; ++j) {
      if (!detail::cell_required(w.kind, i, j)) continue;
      const auto& e = w.evidence[i][j];
      if (!e.present) return false;
      if (w.kind == minor_kind::grid) {
        if (!in(e.row, rb[i], rb[i + 1]) || !in(e.col, cb[j], cb[j + 1]) || !m.at(e.row, e.col)) return false;
        continue;
      }
      if (!in(e.row_a, rb[i], rb[i + 1]) || !in(e.row_b, rb[i], rb[i + 1]) || !in(e.col_at, cb[j], cb[j + 1]) ||
          m.at(e.row_a, e.col_at) == m.at(e.row_b, e.col_at))
        return false;
      if (!in(e.col_a, cb[j], cb[j + 1]) || !in(e.col_b, cb[j], cb[j + 1]) || !in(e.row_at, rb[i], rb[i + 1]) ||
          m.at(e.row_at, e.col_a) == m.at(e.row_at, e.col_b))
        return false;
    }
  return true;
}

// Row divisions in lexicographic order of their cuts; for each, column cuts
// are placed greedily as early as possible, which is exact because both
// mixedness and 1-containment survive enlarging a cell.
inline std::optional<minor_witness> find_minor(const matrix01& m, int k, minor_kind kind, double cap = default_minor_cap) {
  if (k < 1) throw error("find_minor: k must be positive");
  const int r = m.rows(), c = m.cols();
  if (k > r || k > c) return std::nullopt;
  double work = binomial(r - 1, k - 1) * binomial(c - 1, k - 1);
  if (work > cap)
    throw error("find_minor: " + std::to_string(k) + "-division search over a " + std::to_string(r) + "x" +
                std::to_string(c) + " matrix exceeds the feasibility cap; use a smaller k or n");
  detail::cell_oracle o(m);
  std::vector<int> cuts(k - 1);
  std::iota(cuts.begin(), cuts.end(), 1);
  std::vector<int> rb(k + 1), cb(k + 1);
  while (true) {
    rb[0] = 0;
    for (int i = 0; i < k - 1; ++i) rb[i + 1] = cuts[i];
    rb[k] = r;
    // greedy columns
    bool ok = true;
    cb[0] = 0;
    for (int j = 0; j < k && ok; ++j) {
      int start = cb[j];
      int last_allowed = j + 1 == k ? c : c - (k - 1 - j);
      int end = j + 1 == k ? c : start + 1;
      for (;; ++end) {
        if (end > last_allowed) {
          ok = false;
          break;
        }
        bool good = true;
        for (int i = 0; i < k && good; ++i)
          if (detail::cell_required(kind, i, j)) good = o.ok(kind, rb[i], rb[i + 1], start, end);
        if (good) break;
        if (j + 1 == k) {
          ok = false;
          break;
        }
      }
      cb[j + 1] = end;
    }
    if (ok) {
      minor_witness w;
      w.kind = kind;
      w.k = k;
      w.row_cuts.assign(rb.begin() + 1, rb.end() - 1);
      w.col_cuts.assign(cb.begin() + 1, cb.end() - 1);
      detail::fill_evidence(m, w);
      return w;
    }
    // next row division
    int i = k - 2;
    while (i >= 0 && cuts[i] == r - (k - 1 - i)) --i;
    if (i < 0) break;
    ++cuts[i];
    for (int j = i + 1; j < k - 1; ++j) cuts[j] = cuts[j - 1] + 1;
  }
  return std::nullopt;
}

inline std::optional<minor_witness> find_minor(const permutation& s, int k, minor_kind kind,
                                               double cap = default_minor_cap) {
  return find_minor(adjacency_matrix(s), k, kind, cap);
}

// Merging consecutive pairs of blocks turns a 2k-almost-mixed minor into a
// k-mixed minor.
inline minor_witness almost_mixed_to_mixed(const matrix01& m, const minor_witness& w) {
  if (w.kind != minor_kind::almost_mixed || w.k % 2) throw error("almost_mixed_to_mixed: need an even almost-mixed minor");
  minor_witness out;
  out.kind = minor_kind::mixed;
  out.k = w.k / 2;
  for (int i = 1; i < out.k; ++i) {
    out.row_cuts.push_back(w.row_cuts[2 * i - 1]);
    out.col_cuts.push_back(w.col_cuts[2 * i - 1]);
  }
  detail::fill_evidence(m, out);
  return out;
}

// Smallest k >= 2 without a k-almost-mixed minor.
inline int almost_mixed_number(const permutation& s, double cap = default_minor_cap) {
  auto m = adjacency_matrix(s);
  for (int k = 2;; ++k)
    if (!find_minor(m, k, minor_kind::almost_mixed, cap)) return k;
}

// Merge steps; step i merges parts a and b into part n + i (ids are
// zero-based, singletons are 0..n-1).
struct partition_sequence {
  int n = 0;
  std::vector<std::pair<int, int>> merges;
};

namespace detail {

struct span {
  int lo, hi;
};

inline bool spans_meet(span a, span b) { return !(a.hi < b.lo || b.hi < a.lo); }

inline span hull(span a, span b) { return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)}; }

}  // namespace detail

// Parts are in error for a linear order exactly when their spans meet; the
// width is the largest error degree over steps, both orders and parts.
inline int sequence_width(const permutation& s, const partition_sequence& seq) {
  const int n = s.size();
  if (seq.n != n || static_cast<int>(seq.merges.size()) != std::max(0, n - 1))
    throw error("sequence_width: sequence does not have n-1 merges over the elements");
  std::vector<detail::span> s1, s2;
  std::vector<char> alive;
  for (int x = 0; x < n; ++x) {
    s1.push_back({x, x});
    s2.push_back({s[x], s[x]});
    alive.push_back(1);
  }
  int width = 0;
  for (auto [a, b] : seq.merges) {
    if (a < 0 || b < 0 || a >= static_cast<int>(alive.size()) || b >= static_cast<int>(alive.size()) || a == b ||
        !alive[a] || !alive[b])
      throw error("sequence_width: merge of a part that does not exist");
    alive[a] = alive[b] = 0;
    s1.push_back(detail::hull(s1[a], s1[b]));
    s2.push_back(detail::hull(s2[a], s2[b]));
    alive.push_back(1);
    std::vector<int> live;
    for (int i = 0; i < static_cast<int>(alive.size()); ++i)
      if (alive[i]) live.push_back(i);
    for (int x : live) {
      int d1 = 0, d2 = 0;
      for (int y : live) {
        if (x == y) continue;
        d1 += detail::spans_meet(s1[x], s1[y]);
        d2 += detail::spans_meet(s2[x], s2[y]);
      }
      width = std::max({width, d1, d2});
    }
  }
  return width;
}

struct mixed_free_result {
  std::vector<int> order;  // order[i] = order-1 position of the i-th element of the third order
  int k = 2;
  bool verified = false;
  int width = 0;  // width of the partition sequence the order came from
  partition_sequence sequence;
};

inline constexpr int exhaustive_order_limit = 8;

namespace detail {

// Greedy merge sequence: among candidate pairs (neighbours in either order,
// parts currently in error), merge the one minimising the resulting width.
inline partition_sequence greedy_sequence(const permutation& s, std::vector<std::vector<int>>& tree_children) {
  const int n = s.size();
  partition_sequence seq;
  seq.n = n;
  std::vector<span> s1, s2;
  std::vector<int> live;
  for (int x = 0; x < n; ++x) {
    s1.push_back({x, x});
    s2.push_back({s[x], s[x]});
    live.push_back(x);
  }
  tree_children.assign(n, {});
  auto degree = [&](int x, span a, span b, int skip1, int skip2) {
    int d1 = 0, d2 = 0;
    for (int y : live)
      if (y != skip1 && y != skip2 && y != x) {
        d1 += spans_meet(a, s1[y]);
        d2 += spans_meet(b, s2[y]);
      }
    return std::max(d1, d2);
  };
  while (live.size() > 1) {
    std::vector<std::pair<int, int>> cand;
    for (int pass = 0; pass < 2; ++pass) {
      auto& sp = pass == 0 ? s1 : s2;
      std::vector<int> idx(live);
      std::sort(idx.begin(), idx.end(), [&](int a, int b) { return sp[a].lo < sp[b].lo; });
      for (std::size_t i = 0; i + 1 < idx.size(); ++i) cand.push_back({std::min(idx[i], idx[i + 1]), std::max(idx[i], idx[i + 1])});
    }
    for (std::size_t i = 0; i < live.size(); ++i)
      for (std::size_t j = i + 1; j < live.size(); ++j) {
        int a = live[i], b = live[j];
        if (spans_meet(s1[a], s1[b]) || spans_meet(s2[a], s2[b])) cand.push_back({std::min(a, b), std::max(a, b)});
      }
    std::sort(cand.begin(), cand.end());
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());

    // current per-part degrees per order
    std::vector<int> d1(s1.size(), 0), d2(s1.size(), 0);
    for (int x : live)
      for (int y : live)
        if (x != y) {
          d1[x] += spans_meet(s1[x], s1[y]);
          d2[x] += spans_meet(s2[x], s2[y]);
        }
    std::tuple<int, int, int, int> best{std::numeric_limits<int>::max(), 0, 0, 0};
    for (auto [a, b] : cand) {
      span h1 = hull(s1[a], s1[b]), h2 = hull(s2[a], s2[b]);
      int merged = degree(-1, h1, h2, a, b);
      int worst = merged;
      for (int y : live) {
        if (y == a || y == b) continue;
        int e1 = d1[y] - spans_meet(s1[y], s1[a]) - spans_meet(s1[y], s1[b]) + spans_meet(s1[y], h1);
        int e2 = d2[y] - spans_meet(s2[y], s2[a]) - spans_meet(s2[y], s2[b]) + spans_meet(s2[y], h2);
        worst = std::max({worst, e1, e2});
      }
      std::tuple<int, int, int, int> key{worst, merged, a, b};
      if (key < best) best = key;
    }
    auto [w, md, a, b] = best;
    (void)w;
    (void)md;
    int id = static_cast<int>(s1.size());
    s1.push_back(hull(s1[a], s1[b]));
    s2.push_back(hull(s2[a], s2[b]));
    // children ordered by their leftmost order-1 position
    if (s1[a].lo < s1[b].lo)
      tree_children.push_back({a, b});
    else
      tree_children.push_back({b, a});
    seq.merges.push_back({a, b});
    live.erase(std::remove_if(live.begin(), live.end(), [&](int x) { return x == a || x == b; }), live.end());
    live.push_back(id);
  }
  return seq;
}

inline std::vector<int> leaf_order(const std::vector<std::vector<int>>& children, int root) {
  std::vector<int> out, stack{root};
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    if (children[v].empty()) {
      out.push_back(v);
      continue;
    }
    for (auto it = children[v].rbegin(); it != children[v].rend(); ++it) stack.push_back(*it);
  }
  return out;
}

// Sides of a third order: (X,<3,<1) and (X,<3,<2).
inline std::pair<permutation, permutation> sides(const permutation& s, const std::vector<int>& order) {
  std::vector<int> a(order.size()), b(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    a[i] = order[i];
    b[i] = s[order[i]];
  }
  return {permutation::trusted(std::move(a)), permutation::trusted(std::move(b))};
}

inline bool almost_mixed_free(const permutation& p, int k, double cap) {
  return !find_minor(adjacency_matrix(p), k, minor_kind::almost_mixed, cap);
}

}  // namespace detail

// Third order from a greedy partition sequence, with the achieved k. When the
// minor search fits under the cap, k is the exact almost-mixed number of the
// worse side (and small inputs are searched exhaustively for a better order);
// otherwise k = 4w+4 from the sequence width w, unverified.
inline mixed_free_result mixed_free_order(const permutation& s, double cap = default_minor_cap) {
  const int n = s.size();
  mixed_free_result r;
  std::vector<std::vector<int>> children;
  r.sequence = detail::greedy_sequence(s, children);
  r.width = n > 1 ? sequence_width(s, r.sequence) : 0;
  r.order = detail::leaf_order(children, static_cast<int>(children.size()) - 1);
  r.k = 4 * r.width + 4;
  r.verified = false;
  try {
    auto [a, b] = detail::sides(s, r.order);
    r.k = std::max(almost_mixed_number(a, cap), almost_mixed_number(b, cap));
    r.verified = true;
  } catch (const error&) {
    return r;
  }
  if (r.k > 2 && n <= exhaustive_order_limit) {
    std::vector<int> o(n);
    std::iota(o.begin(), o.end(), 0);
    do {
      auto [a, b] = detail::sides(s, o);
      if (!detail::almost_mixed_free(a, r.k - 1, cap) || !detail::almost_mixed_free(b, r.k - 1, cap)) continue;
      r.k = std::max(almost_mixed_number(a, cap), almost_mixed_number(b, cap));
      r.order = o;
      if (r.k == 2) break;
    } while (std::next_permutation(o.begin(), o.end()));
  }
  return r;
}

}  // namespace sepfactor
