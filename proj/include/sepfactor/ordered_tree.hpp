#pragma once

#include <map>
#include <string>
#include <vector>

#include "permutation.hpp"

namespace sepfactor {

// Rooted tree with ordered child lists. The leaf order (order1) is the
// left-to-right leaf order of a depth-first traversal.
struct ordered_tree {
  struct node {
    int parent = -1;
    std::vector<int> children;
    int label = 0;  // element identifier for leaves
  };

  std::vector<node> nodes;
  int root = -1;

  int add_root() {
    nodes.push_back({});
    root = static_cast<int>(nodes.size()) - 1;
    return root;
  }

  int add_child(int parent, int label = 0) {
    nodes.push_back({parent, {}, label});
    int id = static_cast<int>(nodes.size()) - 1;
    nodes[parent].children.push_back(id);
    return id;
  }

  bool is_leaf(int v) const { return nodes[v].children.empty(); }

  // Nodes in depth-first preorder.
  std::vector<int> preorder() const {
    std::vector<int> out, stack{root};
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      out.push_back(v);
      const auto& ch = nodes[v].children;
      for (auto it = ch.rbegin(); it != ch.rend(); ++it) stack.push_back(*it);
    }
    return out;
  }

  std::vector<int> leaves() const {
    std::vector<int> out;
    for (int v : preorder())
      if (is_leaf(v)) out.push_back(v);
    return out;
  }

  // Parent links agree with child lists, every node is reached once, leaf
  // labels are a bijection onto 1..#leaves.
  void validate() const {
    if (root < 0 || root >= static_cast<int>(nodes.size())) throw error("tree: missing root");
    if (nodes[root].parent != -1) throw error("tree: root has a parent");
    std::vector<char> seen(nodes.size(), 0);
    std::vector<int> stack{root};
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      if (seen[v]) throw error("tree: node reached twice");
      seen[v] = 1;
      for (int c : nodes[v].children) {
        if (c < 0 || c >= static_cast<int>(nodes.size()) || nodes[c].parent != v)
          throw error("tree: inconsistent parent link");
        stack.push_back(c);
      }
    }
    for (char s : seen)
      if (!s) throw error("tree: unreachable node");
    auto lv = leaves();
    std::vector<char> lab(lv.size() + 1, 0);
    for (int v : lv) {
      int l = nodes[v].label;
      if (l < 1 || l > static_cast<int>(lv.size()) || lab[l]) throw error("tree: leaf labels are not 1..n");
      lab[l] = 1;
    }
  }
};

// Second order on the leaves: at every internal node, children are ranked by
// the node's permutation (child i goes to position perm[i]). The result maps
// the order1 position of each leaf to its position in the second order.
inline permutation substitute_along_tree(const ordered_tree& t, const std::map<int, permutation>& node_perms) {
  t.validate();
  std::vector<int> order1_pos(t.nodes.size(), -1);
  {
    int k = 0;
    for (int v : t.leaves()) order1_pos[v] = k++;
  }
  std::vector<int> seq;
  std::vector<int> stack{t.root};
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    const auto& ch = t.nodes[v].children;
    if (ch.empty()) {
      seq.push_back(v);
      continue;
    }
    std::vector<int> ordered(ch.size());
    if (ch.size() == 1) {
      ordered[0] = ch[0];
    } else {
      auto it = node_perms.find(v);
      if (it == node_perms.end()) throw error("substitution: missing label for node " + std::to_string(v));
      if (it->second.size() != static_cast<int>(ch.size()))
        throw error("substitution: label arity mismatch at node " + std::to_string(v));
      for (int i = 0; i < static_cast<int>(ch.size()); ++i) ordered[it->second[i]] = ch[i];
    }
    for (auto r = ordered.rbegin(); r != ordered.rend(); ++r) stack.push_back(*r);
  }
  std::vector<int> img(seq.size());
  for (int k = 0; k < static_cast<int>(seq.size()); ++k) img[order1_pos[seq[k]]] = k;
  return permutation::trusted(std::move(img));
}

}  // namespace sepfactor
