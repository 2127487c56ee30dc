#include "easyfirst/tree.h"

#include <algorithm>
#include <functional>
#include <string>

#include <fmt/format.h>

namespace easyfirst {

const std::string& ConstTree::label(Ref r) const {
  return r.is_terminal() ? tokens[r.index].pos : nodes[r.index].label;
}

std::vector<int> ConstTree::yield(Ref r) const {
  if (r.is_terminal()) return {r.index};
  return nodes[r.index].yield;
}

int ConstTree::min_index(Ref r) const {
  if (r.is_terminal()) return r.index;
  const auto& y = nodes[r.index].yield;
  return y.empty() ? -1 : y.front();
}

int ConstTree::parent(Ref r) const {
  return r.is_terminal() ? token_parent[r.index] : nodes[r.index].parent;
}

void FinalizeTree(ConstTree& tree) {
  const int n = tree.size();
  const int m = static_cast<int>(tree.nodes.size());
  for (int i = 0; i < n; ++i) tree.tokens[i].index = i;
  if (tree.root < 0 || tree.root >= m) {
    throw InvalidTree(fmt::format("sentence {}: no root node", tree.id));
  }
  tree.token_parent.assign(n, -1);
  for (auto& node : tree.nodes) node.parent = -1;

  for (int k = 0; k < m; ++k) {
    auto& node = tree.nodes[k];
    if (node.children.empty()) {
      throw InvalidTree(fmt::format("sentence {}: node {} ({}) has no children",
                                    tree.id, k, node.label));
    }
    for (const Ref c : node.children) {
      if (c.is_terminal()) {
        if (c.index < 0 || c.index >= n) {
          throw InvalidTree(fmt::format("sentence {}: terminal {} out of range",
                                        tree.id, c.index));
        }
        if (tree.token_parent[c.index] != -1) {
          throw InvalidTree(fmt::format(
              "sentence {}: terminal {} has two parents", tree.id, c.index));
        }
        tree.token_parent[c.index] = k;
      } else {
        if (c.index < 0 || c.index >= m) {
          throw InvalidTree(fmt::format("sentence {}: node {} out of range",
                                        tree.id, c.index));
        }
        if (tree.nodes[c.index].parent != -1) {
          throw InvalidTree(fmt::format("sentence {}: node {} has two parents",
                                        tree.id, c.index));
        }
        tree.nodes[c.index].parent = k;
      }
    }
  }
  if (tree.nodes[tree.root].parent != -1) {
    throw InvalidTree(fmt::format("sentence {}: cycle through root", tree.id));
  }

  std::vector<int> state(m, 0);  // 0 = new, 1 = on stack, 2 = done
  std::function<void(int)> visit = [&](int k) {
    if (state[k] == 1) {
      throw InvalidTree(fmt::format("sentence {}: cycle at node {}", tree.id, k));
    }
    if (state[k] == 2) return;
    state[k] = 1;
    auto& node = tree.nodes[k];
    std::vector<int> y;
    for (const Ref c : node.children) {
      if (c.is_terminal()) {
        y.push_back(c.index);
      } else {
        visit(c.index);
        const auto& cy = tree.nodes[c.index].yield;
        y.insert(y.end(), cy.begin(), cy.end());
      }
    }
    std::sort(y.begin(), y.end());
    node.yield = std::move(y);
    std::sort(node.children.begin(), node.children.end(),
              [&](Ref a, Ref b) { return tree.min_index(a) < tree.min_index(b); });
    state[k] = 2;
  };
  visit(tree.root);

  for (int k = 0; k < m; ++k) {
    if (state[k] != 2) {
      throw InvalidTree(fmt::format(
          "sentence {}: node {} ({}) not reachable from the root (cycle?)",
          tree.id, k, tree.nodes[k].label));
    }
  }
  for (int i = 0; i < n; ++i) {
    if (tree.token_parent[i] == -1) {
      throw InvalidTree(
          fmt::format("sentence {}: terminal {} is not attached", tree.id, i));
    }
  }
}

void ValidateTree(const ConstTree& tree) {
  const int n = tree.size();
  const int m = static_cast<int>(tree.nodes.size());
  if (tree.root < 0 || tree.root >= m) {
    throw InvalidTree("tree has no root");
  }
  const auto& root_yield = tree.nodes[tree.root].yield;
  if (static_cast<int>(root_yield.size()) != n) {
    throw InvalidTree("root yield does not cover the sentence");
  }
  for (int i = 0; i < n; ++i) {
    if (root_yield[i] != i) throw InvalidTree("root yield does not cover the sentence");
  }
  int roots = 0;
  for (int k = 0; k < m; ++k) {
    const auto& node = tree.nodes[k];
    if (node.parent == -1) ++roots;
    if (node.children.empty()) {
      throw InvalidTree(fmt::format("node {} has no children", k));
    }
    std::vector<int> uni;
    for (const Ref c : node.children) {
      auto cy = tree.yield(c);
      uni.insert(uni.end(), cy.begin(), cy.end());
    }
    std::sort(uni.begin(), uni.end());
    if (std::adjacent_find(uni.begin(), uni.end()) != uni.end()) {
      throw InvalidTree(fmt::format("node {}: sibling yields overlap", k));
    }
    if (uni != node.yield) {
      throw InvalidTree(fmt::format("node {}: yield is not the union of its children", k));
    }
  }
  if (roots != 1) throw InvalidTree("tree must have exactly one root");
}

int BlockDegree(std::span<const int> sorted_yield) {
  if (sorted_yield.empty()) return 0;
  int blocks = 1;
  for (std::size_t i = 1; i < sorted_yield.size(); ++i) {
    if (sorted_yield[i] != sorted_yield[i - 1] + 1) ++blocks;
  }
  return blocks;
}

std::string CanonicalString(const ConstTree& tree) {
  std::string out;
  for (const auto& t : tree.tokens) {
    out += fmt::format("{}|{}|{}|{}|{}\x1f", t.form, t.lemma, t.pos, t.morph, t.edge);
  }
  out += '\n';
  std::function<void(int)> emit = [&](int k) {
    const auto& node = tree.nodes[k];
    out += '(';
    out += node.label;
    out += '^';
    out += node.edge;
    for (const Ref c : node.children) {
      out += ' ';
      if (c.is_terminal()) {
        out += std::to_string(c.index);
      } else {
        emit(c.index);
      }
    }
    out += ')';
  };
  if (tree.root >= 0) emit(tree.root);
  return out;
}

bool StructurallyEqual(const ConstTree& a, const ConstTree& b) {
  return CanonicalString(a) == CanonicalString(b);
}

void ValidateDependencies(const DepSentence& s) {
  const int n = s.size();
  if (static_cast<int>(s.heads.size()) != n) {
    throw InvalidTree("head column length differs from token count");
  }
  for (int i = 0; i < n; ++i) {
    if (s.heads[i] < 0 || s.heads[i] > n) {
      throw InvalidTree(fmt::format("token {}: head {} out of range", i + 1, s.heads[i]));
    }
    if (s.heads[i] == i + 1) {
      throw InvalidTree(fmt::format("not a tree: token {} governs itself", i + 1));
    }
  }
  // Every token must reach the root within n steps.
  std::vector<int> state(n, 0);  // 0 = unknown, 1 = in progress, 2 = reaches root
  for (int i = 0; i < n; ++i) {
    std::vector<int> path;
    int cur = i;
    while (cur >= 0 && state[cur] == 0) {
      state[cur] = 1;
      path.push_back(cur);
      cur = s.heads[cur] - 1;
    }
    if (cur >= 0 && state[cur] == 1) {
      throw InvalidTree(fmt::format("not a tree: cycle through token {}", cur + 1));
    }
    for (int p : path) state[p] = 2;
  }
}

}  // namespace easyfirst
