#ifndef EASYFIRST_TREE_H_
#define EASYFIRST_TREE_H_

#include <compare>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace easyfirst {

// Raised when a tree, dependency sentence or corpus violates its structural
// invariants.
class InvalidTree : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Token {
  int index = 0;
  std::string form;
  std::string lemma;
  std::string pos;
  std::string morph = "--";
  std::string cpos;         // coarse tag (CoNLL column 4)
  std::string edge = "--";  // function label on the edge to the parent node

  bool operator==(const Token&) const = default;
};

// A child slot of a constituent: either a terminal (token index) or another
// constituent (node index).
struct Ref {
  enum class Kind : std::uint8_t { kTerminal, kNode };

  Kind kind = Kind::kTerminal;
  int index = 0;

  static constexpr Ref Terminal(int i) { return {Kind::kTerminal, i}; }
  static constexpr Ref Node(int i) { return {Kind::kNode, i}; }
  constexpr bool is_terminal() const { return kind == Kind::kTerminal; }

  auto operator<=>(const Ref&) const = default;
};

struct Node {
  std::string label;
  std::string edge = "--";
  std::vector<Ref> children;
  std::vector<int> yield;  // sorted token indices
  int parent = -1;         // -1 for the root
};

// A constituent tree whose node yields are arbitrary (possibly
// discontinuous) sets of token indices. Preterminals are implicit: the POS
// tag of a token plays the role of its preterminal label.
struct ConstTree {
  std::string id;
  std::vector<Token> tokens;
  std::vector<Node> nodes;
  std::vector<int> token_parent;  // node index per token
  int root = -1;

  int size() const { return static_cast<int>(tokens.size()); }

  // POS tag for terminals, constituent label for nodes.
  const std::string& label(Ref r) const;
  std::vector<int> yield(Ref r) const;
  int min_index(Ref r) const;
  int parent(Ref r) const;
};

// Fills `nodes[*].yield`, `nodes[*].parent` and `token_parent` from the
// children lists and sorts every child list by its minimal token index.
// Throws InvalidTree on cycles, shared children or unreachable material.
void FinalizeTree(ConstTree& tree);

// Checks every structural invariant: single root covering all tokens,
// yield = union of children, disjoint siblings, non-empty child lists.
void ValidateTree(const ConstTree& tree);

// Number of maximal runs of consecutive indices in a sorted index set.
int BlockDegree(std::span<const int> sorted_yield);

// Canonical serialization of node structure, labels, edges and tokens;
// two trees are structurally equal iff their canonical strings match.
std::string CanonicalString(const ConstTree& tree);
bool StructurallyEqual(const ConstTree& a, const ConstTree& b);

// CoNLL-style dependency view of a sentence. `heads[i]` is the 1-based
// governor of token i, 0 meaning the artificial root.
struct DepSentence {
  std::vector<Token> tokens;
  std::vector<int> heads;
  std::vector<std::string> deprels;
  std::vector<std::vector<std::string>> extra_columns;  // columns 9.. verbatim

  int size() const { return static_cast<int>(tokens.size()); }
  // 0-based governor of token i, or -1 for root attachment.
  int governor(int i) const { return heads[i] - 1; }
};

// Throws InvalidTree unless the head graph is a tree rooted at 0.
void ValidateDependencies(const DepSentence& sentence);

struct AlignedPair {
  ConstTree tree;
  DepSentence deps;
};

struct AlignedCorpus {
  std::vector<AlignedPair> sentences;
};

}  // namespace easyfirst

#endif  // EASYFIRST_TREE_H_
