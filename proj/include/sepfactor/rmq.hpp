#pragma once

#include <vector>

#include "permutation.hpp"

namespace sepfactor {

// Static range min/max positions. Block minima and maxima go into a sparse
// table; the partial blocks at either end of a query are scanned. Ties go to
// the leftmost position.
class rmq_index {
public:
  static constexpr int block = 16;

  rmq_index() = default;

  explicit rmq_index(std::vector<int> values) : a_(std::move(values)) {
    if (a_.empty()) throw error("rmq: empty array");
    int n = static_cast<int>(a_.size());
    int nb = (n + block - 1) / block;
    std::vector<int> bmin(nb), bmax(nb);
    for (int b = 0; b < nb; ++b) {
      int lo = b * block, hi = std::min(n, lo + block) - 1;
      bmin[b] = scan_min(lo, hi);
      bmax[b] = scan_max(lo, hi);
    }
    mins_.push_back(std::move(bmin));
    maxs_.push_back(std::move(bmax));
    for (int w = 1; 2 * w <= nb; w *= 2) {
      const auto& pm = mins_.back();
      const auto& px = maxs_.back();
      int len = nb - 2 * w + 1;
      std::vector<int> m(len), x(len);
      for (int i = 0; i < len; ++i) {
        m[i] = better_min(pm[i], pm[i + w]);
        x[i] = better_max(px[i], px[i + w]);
      }
      mins_.push_back(std::move(m));
      maxs_.push_back(std::move(x));
    }
  }

  int size() const { return static_cast<int>(a_.size()); }
  int value(int i) const { return a_[i]; }

  // Zero-based inclusive bounds.
  int argmin(int lo, int hi) const { return query(lo, hi, true); }
  int argmax(int lo, int hi) const { return query(lo, hi, false); }

  // One-based inclusive bounds and result.
  int query_min(int i, int j) const { return argmin(i - 1, j - 1) + 1; }
  int query_max(int i, int j) const { return argmax(i - 1, j - 1) + 1; }

private:
  int better_min(int i, int j) const { return a_[j] < a_[i] ? j : i; }
  int better_max(int i, int j) const { return a_[j] > a_[i] ? j : i; }

  int scan_min(int lo, int hi) const {
    int b = lo;
    for (int i = lo + 1; i <= hi; ++i)
      if (a_[i] < a_[b]) b = i;
    return b;
  }
  int scan_max(int lo, int hi) const {
    int b = lo;
    for (int i = lo + 1; i <= hi; ++i)
      if (a_[i] > a_[b]) b = i;
    return b;
  }

  int query(int lo, int hi, bool want_min) const {
    if (lo < 0 || hi >= size() || lo > hi) throw error("rmq: bad interval");
    int bl = lo / block, bh = hi / block;
    if (bh - bl <= 1) return want_min ? scan_min(lo, hi) : scan_max(lo, hi);
    int best = want_min ? scan_min(lo, (bl + 1) * block - 1) : scan_max(lo, (bl + 1) * block - 1);
    int from = bl + 1, to = bh - 1;
    int lvl = 31 - __builtin_clz(static_cast<unsigned>(to - from + 1));
    const auto& t = want_min ? mins_[lvl] : maxs_[lvl];
    int mid = want_min ? better_min(t[from], t[to - (1 << lvl) + 1]) : better_max(t[from], t[to - (1 << lvl) + 1]);
    best = want_min ? better_min(best, mid) : better_max(best, mid);
    int tail = want_min ? scan_min(bh * block, hi) : scan_max(bh * block, hi);
    return want_min ? better_min(best, tail) : better_max(best, tail);
  }

  std::vector<int> a_;
  std::vector<std::vector<int>> mins_, maxs_;
};

}  // namespace sepfactor
