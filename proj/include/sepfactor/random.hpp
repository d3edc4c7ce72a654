#pragma once

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include "permutation.hpp"
#include "separable.hpp"

namespace sepfactor {

// Generators take the engine explicitly; nothing here seeds itself.
using rng_t = std::mt19937_64;

inline int uniform_int(rng_t& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

inline permutation random_permutation(int n, rng_t& rng) {
  std::vector<int> v(n);
  std::iota(v.begin(), v.end(), 0);
  std::shuffle(v.begin(), v.end(), rng);
  return permutation::trusted(std::move(v));
}

// Random binary separating tree, each node a direct or skew sum.
inline permutation random_separable(int n, rng_t& rng) {
  std::vector<int> img(n);
  auto rec = [&](auto&& self, int pos, int val, int size) -> void {
    if (size == 1) {
      img[pos] = val;
      return;
    }
    int left = uniform_int(rng, 1, size - 1);
    if (uniform_int(rng, 0, 1)) {
      self(self, pos, val, left);
      self(self, pos + left, val + left, size - left);
    } else {
      self(self, pos, val + size - left, left);
      self(self, pos + left, val, size - left);
    }
  };
  if (n > 0) rec(rec, 0, 0, n);
  return permutation::trusted(std::move(img));
}

// Union of two increasing subsequences on random positions and values, so the
// result avoids 321. Separable draws are rejected.
inline permutation random_321_avoider(int n, rng_t& rng, bool reject_separable = true) {
  while (true) {
    int k = uniform_int(rng, 0, n);
    std::vector<int> pos(n), val(n);
    std::iota(pos.begin(), pos.end(), 0);
    std::iota(val.begin(), val.end(), 0);
    std::shuffle(pos.begin(), pos.end(), rng);
    std::shuffle(val.begin(), val.end(), rng);
    std::vector<char> pin(n, 0), vin(n, 0);
    for (int i = 0; i < k; ++i) {
      pin[pos[i]] = 1;
      vin[val[i]] = 1;
    }
    std::vector<int> p1, p2, v1, v2;
    for (int i = 0; i < n; ++i) {
      (pin[i] ? p1 : p2).push_back(i);
      (vin[i] ? v1 : v2).push_back(i);
    }
    std::vector<int> img(n);
    for (std::size_t i = 0; i < p1.size(); ++i) img[p1[i]] = v1[i];
    for (std::size_t i = 0; i < p2.size(); ++i) img[p2[i]] = v2[i];
    auto p = permutation::trusted(std::move(img));
    if (!reject_separable || n < 4 || !is_separable(p)) return p;
  }
}

struct random_shuffle_instance {
  permutation sigma;
  std::vector<std::vector<int>> classes;  // zero-based positions
};

// Shuffle of identities: positions get random non-empty classes and each
// class reads increasing values left to right.
inline random_shuffle_instance random_identity_shuffle(int n, int classes, rng_t& rng) {
  if (classes < 1 || classes > n) throw error("random shuffle: need 1 <= classes <= n");
  std::vector<int> label(n);
  for (int i = 0; i < n; ++i) label[i] = i < classes ? i : uniform_int(rng, 0, classes - 1);
  std::shuffle(label.begin(), label.end(), rng);
  auto base = random_permutation(n, rng).data();
  random_shuffle_instance r;
  r.classes.assign(classes, {});
  for (int i = 0; i < n; ++i) r.classes[label[i]].push_back(i);
  std::vector<int> img(n);
  for (const auto& c : r.classes) {
    std::vector<int> vals;
    for (int x : c) vals.push_back(base[x]);
    std::sort(vals.begin(), vals.end());
    for (std::size_t i = 0; i < c.size(); ++i) img[c[i]] = vals[i];
  }
  r.sigma = permutation::trusted(std::move(img));
  return r;
}

}  // namespace sepfactor
