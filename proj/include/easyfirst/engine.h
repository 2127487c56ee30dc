#ifndef EASYFIRST_ENGINE_H_
#define EASYFIRST_ENGINE_H_

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "easyfirst/features.h"
#include "easyfirst/headrules.h"
#include "easyfirst/learner.h"
#include "easyfirst/tree.h"

namespace easyfirst {

inline constexpr std::string_view kFallbackRootLabel = "VROOT";

enum class ActionKind : std::uint8_t { kBuild = 0, kAttach = 1, kUnary = 2, kSwap = 3 };
enum class Side : std::uint8_t { kLeft = 0, kRight = 1 };

// BUILD(label, head side) and ATTACH(direction) act on roots (i, i+1);
// UNARY(label) wraps root i; SWAP exchanges roots i and i+1.
// ATTACH(left) makes root i a child of root i+1, ATTACH(right) makes root
// i+1 a child of root i.
struct Action {
  ActionKind kind = ActionKind::kBuild;
  int label = -1;  // index into Grammar::labels for BUILD/UNARY
  Side side = Side::kLeft;
  int position = 0;

  bool operator==(const Action&) const = default;
};

// Label inventory and the per-action identifiers used in feature hashing.
struct Grammar {
  std::vector<std::string> labels;  // sorted
  std::vector<char> buildable;      // seen with two or more children
  std::vector<char> unary;          // seen with exactly one child below the root
  std::string root_label = std::string(kFallbackRootLabel);

  static Grammar FromTreebank(std::span<const ConstTree> trees);
  int LabelIndex(std::string_view label) const;  // -1 if unknown
  std::string ActionId(const Action& a) const;
  std::string Describe(const Action& a) const;
};

// One item of the parser's working sequence. Items are immutable once
// created; ATTACH and UNARY create new items.
struct ParseNode {
  std::string label;  // POS tag for preterminals
  bool preterminal = false;
  int token = -1;
  std::vector<int> children;  // item ids
  std::vector<int> yield;     // sorted original token indices
  int head_token = -1;
  int min_orig = 0;
  int unary_depth = 0;
  bool in_progress = false;
  Side build_side = Side::kLeft;

  // Training only: the gold material this item reproduces. `gold` is the
  // gold child reference; for partially built gold nodes, [first, last] is
  // the covered range of that node's ordered children.
  std::optional<Ref> gold;
  int first = 0;
  int last = 0;
  bool complete = false;
  int proj_order = -1;  // smallest gold linearization rank in the yield
};

struct ParserState {
  std::vector<ParseNode> items;
  std::vector<NodeView> views;  // per item
  std::vector<int> roots;       // current working sequence (item ids)
  int swaps = 0;

  int size() const { return static_cast<int>(roots.size()); }
  const ParseNode& root(int i) const { return items[roots[i]]; }
};

// Everything needed to parse: grammar, head machinery, features, weights.
struct ParserModel {
  Grammar grammar;
  HeadTable heads;
  TagClassification tags;
  FeatureConfig features;
  WeightStore weights;
  // Resources referenced by `features`; reattached by the caller on load.
  std::string clusters_path;
  std::string bigram_path;

  // Magic line, one JSON header line, then the raw weight arrays.
  void Save(std::ostream& out, bool with_accumulators = false) const;
  static ParserModel Load(std::istream& in);
  std::string Digest() const;
};

// Gold-tree linearization: depth-first traversal visiting children by their
// smallest original token index; rank per token. Every gold constituent is
// a contiguous block of ranks.
std::vector<int> LinearizeGold(const ConstTree& gold);

// Gold action sets for one training tree. Items created by gold actions
// carry the gold reference they reproduce (see ParseNode).
class GoldOracle {
 public:
  GoldOracle(const ConstTree& gold, const Grammar& grammar, const HeadTable& heads);

  const ConstTree& tree() const { return gold_; }
  const std::vector<int>& proj_order() const { return proj_; }
  // Marks the initial preterminals; call once on Transitions::Initial().
  void Annotate(ParserState& state) const;
  bool IsGold(const ParserState& state, const Action& action) const;
  // Bookkeeping after applying a gold `action`; `created` is the item id
  // returned by Transitions::Apply.
  void Observe(ParserState& state, const Action& action, int created) const;
  Side GoldSide(int label, const ParseNode& left, const ParseNode& right) const;

 private:
  bool Started(const ParserState& state, int gold_node) const;
  int ChildCount(Ref r) const;

  const ConstTree& gold_;
  const Grammar& grammar_;
  const HeadTable& heads_;
  std::vector<int> proj_;
  std::vector<int> token_pos_;  // per token, position among its parent's children
  std::vector<int> node_pos_;   // per node, position among its parent's children
};

// Incremental parsing machinery shared by inference and training.
class Transitions {
 public:
  Transitions(const ParserModel& model) : model_(model) {}

  ParserState Initial(std::span<const Token> tokens) const;
  void AppendActionsAt(const ParserState& state, int i, std::vector<Action>& out) const;
  std::vector<Action> Applicable(const ParserState& state) const;
  bool IsApplicable(const ParserState& state, const Action& a) const;
  // Returns the id of the item created (or -1 for SWAP). Throws
  // std::logic_error when the action is not applicable.
  int Apply(ParserState& state, const Action& a, std::span<const Token> tokens) const;
  Window WindowAt(const ParserState& state, int i) const;
  ConstTree ToTree(const ParserState& state, std::span<const Token> tokens) const;

 private:
  int AddItem(ParserState& state, ParseNode node, std::span<const Token> tokens) const;
  void SetHead(ParserState& state, ParseNode& node) const;

  const ParserModel& model_;
};

struct ScoredAction {
  Action action;
  double score = 0;
};

// Cached per-position action scores over a parser state.
class ScoreCache {
 public:
  ScoreCache(const ParserModel& model, const Transitions& transitions);

  void Reset(const ParserState& state);
  // Call after applying `action` (whose position refers to the state before
  // the apply) to refresh the positions within distance 2.
  void Refresh(const ParserState& state, const Action& applied);
  std::optional<ScoredAction> Best() const;
  const std::vector<ScoredAction>& At(int i) const { return cache_[i]; }
  int size() const { return static_cast<int>(cache_.size()); }
  std::vector<ScoredAction> Compute(const ParserState& state, int i) const;
  FeatureVector Features(const ParserState& state, const Action& a) const;
  long extractions() const { return extractions_; }

 private:
  const std::string& IdOf(const Action& a) const;
  void Store(int i, std::vector<ScoredAction> scored);

  const ParserModel& model_;
  const Transitions& transitions_;
  FeatureExtractor extractor_;
  std::vector<std::string> build_ids_;  // 2 * label + side
  std::vector<std::string> unary_ids_;
  std::array<std::string, 2> attach_ids_;
  std::string swap_id_;
  std::vector<std::vector<ScoredAction>> cache_;
  std::vector<int> best_;  // per position, index into cache_[i] or -1
  mutable long extractions_ = 0;
};

// Strict preference used for argmax tie-breaking: higher score, then
// leftmost position, then BUILD < ATTACH < UNARY < SWAP, then label order,
// then left before right.
bool Precedes(const ScoredAction& a, const ScoredAction& b);

struct ParseStats {
  int actions = 0;
  int swaps = 0;
  long extractions = 0;
  bool fallback_root = false;
};

// Greedy easy-first parse of one sentence. Tokens need form and POS.
ConstTree Parse(const ParserModel& model, std::span<const Token> tokens,
                ParseStats* stats = nullptr);

struct TrainOptions {
  int epochs = 15;
  std::uint64_t seed = 42;
  bool early_stop = true;  // abandon a sentence after its first error
  // Numerator c of lambda = c / N; negative keeps the learner's lambda.
  double lambda_numerator = 0.001;
  std::function<void(int epoch, const ParserModel& model, long updates)> on_epoch;
};

struct TrainStats {
  long updates = 0;
  long decisions = 0;
  long unreachable = 0;  // sentences whose gold set ran empty before completion
};

// Builds grammar from the treebank and trains `model.weights` in place.
// `model` must carry heads, tags and features; weights are (re)allocated.
TrainStats Train(std::span<const ConstTree> treebank, ParserModel& model,
                 const TrainOptions& options, const LearnerParams& params = {});

// Replays the gold oracle, picking among gold actions with `choose`
// (default: first). Returns the resulting tree; used to verify that gold
// derivations reconstruct the treebank.
ConstTree ReplayGold(const ConstTree& gold, const ParserModel& model,
                     const std::function<std::size_t(std::size_t)>& choose = {},
                     int* steps = nullptr);

// Total gold actions over a treebank (decisions per epoch).
long CountGoldDecisions(std::span<const ConstTree> treebank, const ParserModel& model);

}  // namespace easyfirst

#endif  // EASYFIRST_ENGINE_H_
