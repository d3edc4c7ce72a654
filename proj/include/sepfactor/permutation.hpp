#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace sepfactor {

struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Images are stored zero-based; the vector constructor and operator() are
// one-based.
class permutation {
public:
  permutation() = default;

  explicit permutation(const std::vector<int>& one_based) {
    p_.reserve(one_based.size());
    for (int v : one_based) p_.push_back(v - 1);
    check();
  }

  static permutation from_zero_based(std::vector<int> v) {
    permutation r;
    r.p_ = std::move(v);
    r.check();
    return r;
  }

  // No validation: for callers that build bijections by construction.
  static permutation trusted(std::vector<int> v) {
    permutation r;
    r.p_ = std::move(v);
    return r;
  }

  static permutation identity(int n) {
    std::vector<int> v(n);
    std::iota(v.begin(), v.end(), 0);
    return trusted(std::move(v));
  }

  int size() const { return static_cast<int>(p_.size()); }
  int operator[](int i) const { return p_[i]; }
  int operator()(int i) const { return p_[i - 1] + 1; }
  const std::vector<int>& data() const { return p_; }

  std::vector<int> images() const {
    std::vector<int> r(p_);
    for (int& v : r) ++v;
    return r;
  }

  bool is_identity() const {
    for (int i = 0; i < size(); ++i)
      if (p_[i] != i) return false;
    return true;
  }

  std::string str() const {
    std::ostringstream os;
    for (int i = 0; i < size(); ++i) os << (i ? " " : "") << p_[i] + 1;
    return os.str();
  }

  friend bool operator==(const permutation& a, const permutation& b) { return a.p_ == b.p_; }
  friend bool operator<(const permutation& a, const permutation& b) { return a.p_ < b.p_; }

private:
  void check() const {
    std::vector<char> seen(p_.size(), 0);
    for (int v : p_) {
      if (v < 0 || v >= size() || seen[v]) throw error("not a bijection of 1..n");
      seen[v] = 1;
    }
  }

  std::vector<int> p_;
};

// result(i) = f(g(i))
inline permutation compose(const permutation& f, const permutation& g) {
  if (f.size() != g.size()) throw error("compose: size mismatch");
  std::vector<int> r(f.size());
  for (int i = 0; i < f.size(); ++i) r[i] = f[g[i]];
  return permutation::trusted(std::move(r));
}

inline permutation inverse(const permutation& s) {
  std::vector<int> r(s.size());
  for (int i = 0; i < s.size(); ++i) r[s[i]] = i;
  return permutation::trusted(std::move(r));
}

// i -> n+1 - s(n+1-i)
inline permutation symmetry(const permutation& s) {
  int n = s.size();
  std::vector<int> r(n);
  for (int i = 0; i < n; ++i) r[i] = n - 1 - s[n - 1 - i];
  return permutation::trusted(std::move(r));
}

// Zero-based ranks of distinct integers.
inline std::vector<int> ranks_of(const std::vector<int>& values) {
  std::vector<int> idx(values.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](int a, int b) { return values[a] < values[b]; });
  std::vector<int> r(values.size());
  for (int k = 0; k < static_cast<int>(idx.size()); ++k) r[idx[k]] = k;
  return r;
}

// Pattern of s at zero-based positions.
inline permutation restrict_positions(const permutation& s, std::vector<int> positions) {
  std::sort(positions.begin(), positions.end());
  if (std::adjacent_find(positions.begin(), positions.end()) != positions.end())
    throw error("restrict: repeated position");
  std::vector<int> vals;
  vals.reserve(positions.size());
  for (int p : positions) {
    if (p < 0 || p >= s.size()) throw error("restrict: position out of range");
    vals.push_back(s[p]);
  }
  return permutation::trusted(ranks_of(vals));
}

// Two linear orders on elements 1..n, each listed in increasing order.
struct biorder {
  std::vector<int> order1;
  std::vector<int> order2;

  int size() const { return static_cast<int>(order1.size()); }

  static biorder from_permutation(const permutation& s) {
    biorder b;
    int n = s.size();
    b.order1.resize(n);
    b.order2.resize(n);
    for (int i = 0; i < n; ++i) {
      b.order1[i] = i + 1;
      b.order2[s[i]] = i + 1;
    }
    return b;
  }

  // The element at position i of order1 sits at position s(i) of order2.
  permutation to_permutation() const {
    int n = size();
    if (static_cast<int>(order2.size()) != n) throw error("biorder: order sizes differ");
    std::vector<int> pos2(n + 1, -1);
    for (int i = 0; i < n; ++i) {
      int e = order2[i];
      if (e < 1 || e > n || pos2[e] != -1) throw error("biorder: order2 is not a ranking of 1..n");
      pos2[e] = i;
    }
    std::vector<int> r(n);
    std::vector<char> seen(n + 1, 0);
    for (int i = 0; i < n; ++i) {
      int e = order1[i];
      if (e < 1 || e > n || seen[e]) throw error("biorder: order1 is not a ranking of 1..n");
      seen[e] = 1;
      r[i] = pos2[e];
    }
    return permutation::trusted(std::move(r));
  }

  biorder canonical() const { return from_permutation(to_permutation()); }
  biorder swapped() const { return biorder{order2, order1}; }

  friend bool operator==(const biorder& a, const biorder& b) {
    return a.order1 == b.order1 && a.order2 == b.order2;
  }
};

// Restriction to a set of element identifiers, re-canonicalized.
inline biorder restrict(const biorder& b, const std::vector<int>& subset) {
  if (subset.empty()) throw error("restrict: empty subset");
  int n = b.size();
  std::vector<char> in(n + 1, 0);
  for (int e : subset) {
    if (e < 1 || e > n) throw error("restrict: element out of range");
    in[e] = 1;
  }
  biorder r;
  for (int e : b.order1)
    if (in[e]) r.order1.push_back(e);
  for (int e : b.order2)
    if (in[e]) r.order2.push_back(e);
  std::vector<int> label(n + 1, 0);
  for (int i = 0; i < r.size(); ++i) label[r.order1[i]] = i + 1;
  for (int& e : r.order1) e = label[e];
  for (int& e : r.order2) e = label[e];
  return r;
}

// Lexicographically first witness, as one-based positions.
inline std::optional<std::vector<int>> contains_pattern(const permutation& s, const permutation& pat) {
  const int n = s.size(), k = pat.size();
  if (k == 0) return std::vector<int>{};
  if (k > n) return std::nullopt;

  // nearest already-placed pattern entries below / above pat[j] in value
  std::vector<int> below(k, -1), above(k, -1);
  for (int j = 0; j < k; ++j)
    for (int i = 0; i < j; ++i) {
      if (pat[i] < pat[j] && (below[j] < 0 || pat[i] > pat[below[j]])) below[j] = i;
      if (pat[i] > pat[j] && (above[j] < 0 || pat[i] < pat[above[j]])) above[j] = i;
    }

  std::vector<int> pos(k), next(k);
  int j = 0;
  next[0] = 0;
  while (j >= 0) {
    int lo = below[j] >= 0 ? s[pos[below[j]]] : -1;
    int hi = above[j] >= 0 ? s[pos[above[j]]] : n;
    int found = -1;
    for (int p = next[j]; p <= n - (k - j); ++p) {
      int v = s[p];
      if (v <= lo || v >= hi) continue;
      // enough room for the values that must sit below and above v
      if (v < pat[j] || n - 1 - v < k - 1 - pat[j]) continue;
      found = p;
      break;
    }
    if (found < 0) {
      --j;
      continue;
    }
    pos[j] = found;
    next[j] = found + 1;
    if (j + 1 == k) {
      std::vector<int> w(pos);
      for (int& x : w) ++x;
      return w;
    }
    ++j;
    next[j] = found + 1;
  }
  return std::nullopt;
}

// One line of space-separated one-based integers; errors name line and token.
inline permutation parse_permutation(const std::string& line, int line_no = 1) {
  std::istringstream is(line);
  std::vector<int> v;
  std::string tok;
  int idx = 0;
  auto where = [&](int t) { return "line " + std::to_string(line_no) + ", token " + std::to_string(t); };
  while (is >> tok) {
    ++idx;
    std::size_t used = 0;
    int x = 0;
    try {
      x = std::stoi(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size()) throw error(where(idx) + ": not an integer: " + tok);
    v.push_back(x);
  }
  if (v.empty()) throw error("line " + std::to_string(line_no) + ": empty permutation");
  int n = static_cast<int>(v.size());
  std::vector<char> seen(n + 1, 0);
  for (int i = 0; i < n; ++i) {
    if (v[i] < 1 || v[i] > n || seen[v[i]])
      throw error(where(i + 1) + ": value " + std::to_string(v[i]) + " breaks the bijection of 1.." + std::to_string(n));
    seen[v[i]] = 1;
  }
  return permutation(v);
}

}  // namespace sepfactor
