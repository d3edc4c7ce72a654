#include <gtest/gtest.h>

#include <map>

#include "sepfactor/sepfactor.hpp"
#include "support/oracles.hpp"

using namespace sepfactor;

namespace {

// Order-1 sequence of values from the two-level example with 18 leaves.
permutation eighteen_leaf_example() { return permutation({3, 1, 10, 5, 16, 9, 8, 4, 2, 6, 7, 11, 17, 15, 13, 12, 18, 14}); }

// Checks parts, maximality and witnesses of one split against the scan oracle.
void check_split(const permutation& s, int lo, int hi, const module_split& sp) {
  ASSERT_GE(sp.parts.size(), 2u);
  ASSERT_EQ(sp.witnesses.size(), sp.parts.size() - 1);
  ASSERT_EQ(sp.parts.front().first, lo);
  ASSERT_EQ(sp.parts.back().second, hi);
  for (std::size_t i = 0; i < sp.parts.size(); ++i) {
    auto [a, b] = sp.parts[i];
    ASSERT_LE(a, b);
    if (i) {
      ASSERT_EQ(a, sp.parts[i - 1].second + 1);
    }
    EXPECT_FALSE(oracle::distinguished(s, a, b, lo, hi)) << "part " << a << ".." << b;
    if (i + 1 == sp.parts.size()) continue;
    int b2 = sp.parts[i + 1].second;
    EXPECT_TRUE(oracle::distinguished(s, a, b2, lo, hi)) << "parts at " << a << " and " << b + 1;
    int y = sp.witnesses[i].element;
    ASSERT_TRUE(y < lo || y > hi);
    EXPECT_EQ(sp.witnesses[i].side, y < lo ? split_side::left : split_side::right);
    int vmin = s[a], vmax = s[a];
    for (int x = a; x <= b2; ++x) {
      vmin = std::min(vmin, s[x]);
      vmax = std::max(vmax, s[x]);
    }
    EXPECT_LT(vmin, s[y]);
    EXPECT_LT(s[y], vmax);
  }
}

void check_tree_shape(const permutation& s, const delayed_tree& t) {
  for (int v = 0; v < static_cast<int>(t.nodes.size()); ++v) {
    const auto& nd = t.nodes[v];
    if (t.is_leaf(v)) {
      ASSERT_GE(nd.parent, 0);
      EXPECT_EQ(t.nodes[nd.parent].child_count, 1);
      continue;
    }
    // representative: leftmost leaf
    EXPECT_EQ(nd.key, s[nd.lo]);
    if (nd.rule == build_rule::modules) {
      module_split sp;
      for (int c : t.children(v)) {
        sp.parts.push_back({t.nodes[c].lo, t.nodes[c].hi});
        if (c != t.children(v).back()) sp.witnesses.push_back(t.witness_of(c));
      }
      check_split(s, nd.lo, nd.hi, sp);
    } else if (nd.rule == build_rule::interval) {
      EXPECT_EQ(nd.child_count, 2);
      EXPECT_FALSE(oracle::distinguished(s, nd.lo, nd.hi, nd.lo, nd.hi));
      int size = nd.hi - nd.lo + 1;
      EXPECT_EQ(t.nodes[t.child(v, 0)].hi - nd.lo + 1, (size + 1) / 2);
    } else {
      EXPECT_EQ(nd.child_count, 1);
    }
  }
}

}  // namespace

TEST(SplitLocalModules, EighteenLeafExampleFirstTwelve) {
  auto s = eighteen_leaf_example();
  auto sp = split_local_modules(s, 0, 11);
  ASSERT_EQ(sp.parts.size(), 3u);
  EXPECT_EQ(sp.parts[0], std::make_pair(0, 3));
  EXPECT_EQ(sp.parts[1], std::make_pair(4, 4));
  EXPECT_EQ(sp.parts[2], std::make_pair(5, 11));
  check_split(s, 0, 11, sp);
}

TEST(SplitLocalModules, IntervalOfBothOrdersRejected) {
  // values 6,7 adjacent in both orders
  auto s = permutation({3, 6, 7, 1, 5, 2, 4});
  EXPECT_THROW(split_local_modules(s, 1, 2), error);
}

TEST(SplitLocalModules, MaximalOnRandomS10) {
  rng_t rng(41);
  int checked = 0;
  for (int it = 0; it < 300; ++it) {
    auto s = random_permutation(10, rng);
    int lo = uniform_int(rng, 0, 8), hi = uniform_int(rng, lo + 1, 9);
    if (!oracle::distinguished(s, lo, hi, lo, hi)) continue;
    check_split(s, lo, hi, split_local_modules(s, lo, hi));
    ++checked;
  }
  EXPECT_GT(checked, 100);
}

TEST(DelayedTree, SingleElementShape) {
  auto t = build_delayed_tree(permutation::identity(1));
  ASSERT_EQ(t.nodes.size(), 3u);
  EXPECT_EQ(t.nodes[0].child_count, 1);
  EXPECT_EQ(t.nodes[1].child_count, 1);
  EXPECT_TRUE(t.is_leaf(2));
  EXPECT_EQ(realize(t), permutation::identity(1));
}

TEST(DelayedTree, EighteenLeafExampleRootHasTwoChildren) {
  auto s = eighteen_leaf_example();
  auto t = build_delayed_tree(s);
  EXPECT_EQ(t.nodes[0].child_count, 2);
  EXPECT_EQ(t.nodes[0].rule, build_rule::interval);
  EXPECT_EQ(realize(t), s);
  check_tree_shape(s, t);
}

TEST(DelayedTree, RoundTripAllOfS6) {
  for (int n = 1; n <= 6; ++n)
    for (const auto& s : all_permutations(n)) {
      auto t = build_delayed_tree(s);
      ASSERT_EQ(realize(t), s) << s.str();
      auto ref = oracle::realize_by_definition(t);
      ASSERT_TRUE(ref);
      EXPECT_EQ(*ref, s.data());
      check_tree_shape(s, t);
    }
}

TEST(DelayedTree, RoundTripRandomLarge) {
  rng_t rng(42);
  for (int it = 0; it < 60; ++it) {
    int n = it < 50 ? uniform_int(rng, 2, 300) : uniform_int(rng, 1000, 10000);
    auto s = it % 3 == 0 ? random_321_avoider(n, rng, false) : random_permutation(n, rng);
    auto t = build_delayed_tree(s);
    ASSERT_EQ(realize(t), s);
    if (n <= 200) check_tree_shape(s, t);
  }
}

TEST(DelayedTree, DefinitionOracleMatchesOnRandomMedium) {
  rng_t rng(43);
  for (int it = 0; it < 40; ++it) {
    auto s = random_permutation(uniform_int(rng, 2, 40), rng);
    auto ref = oracle::realize_by_definition(build_delayed_tree(s));
    ASSERT_TRUE(ref);
    EXPECT_EQ(*ref, s.data());
  }
}

TEST(DelayedTree, CousinOrdersViolatingTransitivityRejected) {
  // root over A, B; each has two chain children over one leaf
  int failing = 0;
  std::vector<int> root_keys{0, 1, 2, 3};
  do {
    for (int a_swap = 0; a_swap < 2; ++a_swap)
      for (int b_swap = 0; b_swap < 2; ++b_swap) {
        auto t = delayed_tree::manual();
        int a = t.add_children(0, 2);
        int b = a + 1;
        int a1 = t.add_children(a, 2), b1 = t.add_children(b, 2);
        int ids[4] = {a1, a1 + 1, b1, b1 + 1};
        for (int i = 0; i < 4; ++i) {
          int leaf = t.add_children(ids[i], 1);
          t.set_key(ids[i], root_keys[i]);
          bool swap = i < 2 ? a_swap : b_swap;
          t.set_key(leaf, swap ? 1 - i % 2 : i % 2);
        }
        t.finalize();
        auto ref = oracle::realize_by_definition(t);
        if (ref) {
          EXPECT_EQ(realize(t).data(), *ref);
        } else {
          ++failing;
          try {
            realize(t);
            ADD_FAILURE() << "accepted a non-transitive tree";
          } catch (const error& e) {
            EXPECT_NE(std::string(e.what()).find("not well-formed"), std::string::npos);
          }
        }
      }
  } while (std::next_permutation(root_keys.begin(), root_keys.end()));
  EXPECT_GT(failing, 0);
}

TEST(DelayedTree, IndistinguishabilityClasses) {
  rng_t rng(44);
  for (int it = 0; it < 100; ++it) {
    auto s = random_permutation(uniform_int(rng, 2, 30), rng);
    auto t = build_delayed_tree(s);
    for (int v = 0; v < static_cast<int>(t.nodes.size()); ++v) {
      const auto& nd = t.nodes[v];
      if (nd.child_count < 2) continue;
      auto cls = indistinguishability_classes(t, v, s);
      std::size_t total = 0;
      for (const auto& c : cls) {
        total += c.size();
        // leaf union of each class is an interval of the second order
        std::vector<int> vals;
        for (int ch : c)
          for (int x = t.nodes[ch].lo; x <= t.nodes[ch].hi; ++x) vals.push_back(s[x]);
        std::sort(vals.begin(), vals.end());
        EXPECT_EQ(vals.back() - vals.front() + 1, static_cast<int>(vals.size()));
      }
      EXPECT_EQ(total, static_cast<std::size_t>(nd.child_count));
      if (nd.rule == build_rule::interval) {
        ASSERT_EQ(cls.size(), 1u);
        EXPECT_EQ(cls[0].size(), 2u);
      } else if (nd.rule == build_rule::modules) {
        // adjacent parts are distinguished, otherwise their union would be a larger local module
        std::map<int, std::size_t> class_of;
        for (std::size_t i = 0; i < cls.size(); ++i)
          for (int ch : cls[i]) class_of[ch] = i;
        auto ch = t.children(v);
        for (std::size_t i = 1; i < ch.size(); ++i)
          if (nd.child_count >= 3) {
            EXPECT_NE(class_of[ch[i - 1]], class_of[ch[i]]);
          }
      }
      // definition: two children equivalent iff no outside leaf sits between them
      for (std::size_t i = 0; i < cls.size(); ++i)
        for (std::size_t j = 0; j < cls.size(); ++j) {
          if (i == j) continue;
          int x = cls[i][0], y = cls[j][0];
          int lo = std::min(s[t.nodes[x].lo], s[t.nodes[y].lo]), hi = std::max(s[t.nodes[x].lo], s[t.nodes[y].lo]);
          bool outside_between = false;
          for (int z = 0; z < s.size(); ++z)
            if ((z < nd.lo || z > nd.hi) && lo < s[z] && s[z] < hi) outside_between = true;
          EXPECT_TRUE(outside_between);
        }
    }
  }
}

TEST(DelayedTree, DeterministicBuild) {
  rng_t rng(45);
  auto s = random_permutation(500, rng);
  auto a = build_delayed_tree(s), b = build_delayed_tree(s);
  EXPECT_EQ(a.dump(), b.dump());
  EXPECT_EQ(a.dot(), b.dot());
}

TEST(FactorDelayed, EighteenLeafExamplePassthrough) {
  auto s = eighteen_leaf_example();
  auto t = build_delayed_tree(s);
  auto f = factor_delayed(t, single_factor_inner);
  EXPECT_EQ(compose(f.p3(), compose(f.p2(), f.p1())), s);
}

TEST(FactorDelayed, SeparableInputKeepsSeparableLayers) {
  rng_t rng(46);
  for (int it = 0; it < 50; ++it) {
    auto s = random_separable(uniform_int(rng, 2, 40), rng);
    auto t = build_delayed_tree(s);
    auto f = factor_delayed(t, single_factor_inner);
    EXPECT_EQ(compose(f.p3(), compose(f.p2(), f.p1())), s);
    for (const auto& g : {f.g1, f.g2, f.g3})
      for (const auto& p : chain_factors(g)) EXPECT_TRUE(is_separable(p)) << p.str();
  }
}

TEST(FactorDelayed, RandomS50ProductCheck) {
  rng_t rng(47);
  for (int it = 0; it < 100; ++it) {
    auto s = random_permutation(50, rng);
    auto t = build_delayed_tree(s);
    auto f = factor_delayed(t, single_factor_inner);
    ASSERT_EQ(compose(f.p3(), compose(f.p2(), f.p1())), s);
  }
}

TEST(FactorDelayed, InnerMismatchReported) {
  auto t = build_delayed_tree(eighteen_leaf_example());
  auto bad = [](int, const permutation& label) { return trivial_chain(identity_order(label.size())); };
  EXPECT_THROW(factor_delayed(t, bad), error);
}
