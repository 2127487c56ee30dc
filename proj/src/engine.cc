#include "easyfirst/engine.h"

#include <algorithm>
#include <bit>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include <fmt/format.h>
#include <json.hpp>
#include <spdlog/spdlog.h>

#include "easyfirst/treebank_io.h"
#include "easyfirst/util.h"

namespace easyfirst {
namespace {

constexpr std::string_view kModelMagic = "easyfirst-model 1";

std::vector<int> MergeYields(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  out.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::string_view SideName(Side s) { return s == Side::kLeft ? "left" : "right"; }

}  // namespace

// ---------------------------------------------------------------- Grammar

Grammar Grammar::FromTreebank(std::span<const ConstTree> trees) {
  std::map<std::string, std::pair<bool, bool>> seen;  // label -> (buildable, unary)
  std::map<std::string, long> root_counts;
  for (const auto& t : trees) {
    for (int k = 0; k < static_cast<int>(t.nodes.size()); ++k) {
      const auto& node = t.nodes[k];
      auto& flags = seen[node.label];
      if (node.children.size() >= 2) flags.first = true;
      if (node.children.size() == 1 && k != t.root) flags.second = true;
    }
    if (t.root >= 0) ++root_counts[t.nodes[t.root].label];
  }
  Grammar g;
  for (const auto& [label, flags] : seen) {
    g.labels.push_back(label);
    g.buildable.push_back(flags.first);
    g.unary.push_back(flags.second);
  }
  long best = 0;
  for (const auto& [label, count] : root_counts) {
    if (count > best) {
      best = count;
      g.root_label = label;
    }
  }
  return g;
}

int Grammar::LabelIndex(std::string_view label) const {
  const auto it = std::lower_bound(labels.begin(), labels.end(), label);
  if (it == labels.end() || *it != label) return -1;
  return static_cast<int>(it - labels.begin());
}

std::string Grammar::ActionId(const Action& a) const {
  switch (a.kind) {
    case ActionKind::kBuild:
      return fmt::format("B:{}:{}", a.side == Side::kLeft ? 'L' : 'R', labels.at(a.label));
    case ActionKind::kAttach:
      return a.side == Side::kLeft ? "A:L" : "A:R";
    case ActionKind::kUnary:
      return "U:" + labels.at(a.label);
    case ActionKind::kSwap:
      return "W";
  }
  return {};
}

std::string Grammar::Describe(const Action& a) const {
  switch (a.kind) {
    case ActionKind::kBuild:
      return fmt::format("BUILD({},{})@{}", labels.at(a.label), SideName(a.side), a.position);
    case ActionKind::kAttach:
      return fmt::format("ATTACH({})@{}", SideName(a.side), a.position);
    case ActionKind::kUnary:
      return fmt::format("UNARY({})@{}", labels.at(a.label), a.position);
    case ActionKind::kSwap:
      return fmt::format("SWAP@{}", a.position);
  }
  return {};
}

// ------------------------------------------------------------ Transitions

int Transitions::AddItem(ParserState& state, ParseNode node, std::span<const Token> tokens) const {
  const Token& head = tokens[node.head_token];
  std::string category =
      node.preterminal ? PreterminalCategory(tokens[node.token], model_.tags) : node.label;
  state.views.push_back(
      MakeNodeView(std::move(category), head, BlockDegree(node.yield), model_.features));
  state.items.push_back(std::move(node));
  return static_cast<int>(state.items.size()) - 1;
}

ParserState Transitions::Initial(std::span<const Token> tokens) const {
  ParserState state;
  state.items.reserve(tokens.size() * 3);
  state.views.reserve(tokens.size() * 3);
  for (int i = 0; i < static_cast<int>(tokens.size()); ++i) {
    ParseNode node;
    node.label = tokens[i].pos;
    node.preterminal = true;
    node.token = i;
    node.yield = {i};
    node.head_token = i;
    node.min_orig = i;
    state.roots.push_back(AddItem(state, std::move(node), tokens));
  }
  return state;
}

void Transitions::AppendActionsAt(const ParserState& state, int i, std::vector<Action>& out) const {
  const auto& g = model_.grammar;
  const int n = state.size();
  const int labels = static_cast<int>(g.labels.size());
  const ParseNode& x = state.root(i);
  const bool pair = i + 1 < n;
  if (pair) {
    for (int l = 0; l < labels; ++l) {
      if (!g.buildable[l]) continue;
      out.push_back({ActionKind::kBuild, l, Side::kLeft, i});
      out.push_back({ActionKind::kBuild, l, Side::kRight, i});
    }
    if (state.root(i + 1).in_progress) out.push_back({ActionKind::kAttach, -1, Side::kLeft, i});
    if (x.in_progress) out.push_back({ActionKind::kAttach, -1, Side::kRight, i});
  }
  if (x.unary_depth < 2) {
    for (int l = 0; l < labels; ++l) {
      if (g.unary[l]) out.push_back({ActionKind::kUnary, l, Side::kLeft, i});
    }
  }
  if (pair && x.min_orig < state.root(i + 1).min_orig) {
    out.push_back({ActionKind::kSwap, -1, Side::kLeft, i});
  }
}

std::vector<Action> Transitions::Applicable(const ParserState& state) const {
  std::vector<Action> out;
  for (int i = 0; i < state.size(); ++i) AppendActionsAt(state, i, out);
  return out;
}

bool Transitions::IsApplicable(const ParserState& state, const Action& a) const {
  const auto& g = model_.grammar;
  const int n = state.size();
  if (a.position < 0 || a.position >= n) return false;
  const bool pair = a.position + 1 < n;
  const auto label_ok = [&](const std::vector<char>& allowed) {
    return a.label >= 0 && a.label < static_cast<int>(g.labels.size()) && allowed[a.label];
  };
  const ParseNode& x = state.root(a.position);
  switch (a.kind) {
    case ActionKind::kBuild:
      return pair && label_ok(g.buildable);
    case ActionKind::kAttach:
      if (!pair) return false;
      return a.side == Side::kLeft ? state.root(a.position + 1).in_progress : x.in_progress;
    case ActionKind::kUnary:
      return x.unary_depth < 2 && label_ok(g.unary);
    case ActionKind::kSwap:
      return pair && x.min_orig < state.root(a.position + 1).min_orig;
  }
  return false;
}

int Transitions::Apply(ParserState& state, const Action& a, std::span<const Token> tokens) const {
  if (!IsApplicable(state, a)) {
    throw std::logic_error("action not applicable: " + model_.grammar.Describe(a));
  }
  const int i = a.position;
  const auto& g = model_.grammar;
  if (a.kind == ActionKind::kSwap) {
    std::swap(state.roots[i], state.roots[i + 1]);
    ++state.swaps;
    return -1;
  }
  if (a.kind == ActionKind::kUnary) {
    const ParseNode& x = state.root(i);
    ParseNode node;
    node.label = g.labels[a.label];
    node.children = {state.roots[i]};
    node.yield = x.yield;
    node.min_orig = x.min_orig;
    node.head_token = x.head_token;
    node.unary_depth = x.unary_depth + 1;
    const int id = AddItem(state, std::move(node), tokens);
    state.roots[i] = id;
    return id;
  }

  const int left_id = state.roots[i];
  const int right_id = state.roots[i + 1];
  const ParseNode& x = state.items[left_id];
  const ParseNode& y = state.items[right_id];
  ParseNode node;
  if (a.kind == ActionKind::kBuild) {
    node.label = g.labels[a.label];
    node.children = {left_id, right_id};
    node.build_side = a.side;
    const std::string child_labels[2] = {x.label, y.label};
    const auto h = model_.heads.FindHead(node.label, child_labels);
    const bool head_left = h ? *h == 0 : a.side == Side::kLeft;
    node.head_token = head_left ? x.head_token : y.head_token;
  } else {
    const bool left = a.side == Side::kLeft;  // root i joins root i+1
    node = left ? y : x;
    if (left) {
      node.children.insert(node.children.begin(), left_id);
    } else {
      node.children.push_back(right_id);
    }
    std::vector<std::string> child_labels;
    child_labels.reserve(node.children.size());
    for (const int c : node.children) child_labels.push_back(state.items[c].label);
    if (const auto h = model_.heads.FindHead(node.label, child_labels)) {
      node.head_token = state.items[node.children[*h]].head_token;
    }
  }
  node.yield = MergeYields(x.yield, y.yield);
  node.min_orig = std::min(x.min_orig, y.min_orig);
  node.unary_depth = 0;
  node.in_progress = true;
  const int id = AddItem(state, std::move(node), tokens);
  state.roots[i] = id;
  state.roots.erase(state.roots.begin() + i + 1);
  return id;
}

Window Transitions::WindowAt(const ParserState& state, int i) const {
  const int n = state.size();
  if (i < 0 || i >= n) throw std::out_of_range(fmt::format("window position {} outside [0, {})", i, n));
  Window w;
  for (int k = 0; k < 4; ++k) {
    const int j = i - 1 + k;
    w[k] = (j >= 0 && j < n) ? &state.views[state.roots[j]] : &BoundaryView();
  }
  return w;
}

ConstTree Transitions::ToTree(const ParserState& state, std::span<const Token> tokens) const {
  ConstTree tree;
  tree.tokens.assign(tokens.begin(), tokens.end());
  for (int i = 0; i < tree.size(); ++i) tree.tokens[i].index = i;

  const auto emit = [&](const auto& self, int item) -> Ref {
    const ParseNode& p = state.items[item];
    if (p.preterminal) return Ref::Terminal(p.token);
    const int k = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();
    tree.nodes[k].label = p.label;
    std::vector<Ref> children;
    for (const int c : p.children) children.push_back(self(self, c));
    tree.nodes[k].children = std::move(children);
    return Ref::Node(k);
  };

  const auto& root_label = model_.grammar.root_label;
  if (state.size() == 1 && !state.root(0).preterminal && state.root(0).label == root_label) {
    tree.root = emit(emit, state.roots[0]).index;
  } else {
    tree.root = 0;
    tree.nodes.emplace_back();
    tree.nodes[0].label = root_label;
    std::vector<Ref> children;
    for (const int r : state.roots) children.push_back(emit(emit, r));
    tree.nodes[0].children = std::move(children);
  }
  FinalizeTree(tree);
  return tree;
}

// ------------------------------------------------------------------ Oracle

std::vector<int> LinearizeGold(const ConstTree& gold) {
  std::vector<int> proj(gold.tokens.size(), -1);
  int rank = 0;
  const auto visit = [&](const auto& self, Ref r) -> void {
    if (r.is_terminal()) {
      proj[r.index] = rank++;
      return;
    }
    std::vector<Ref> children = gold.nodes[r.index].children;
    std::stable_sort(children.begin(), children.end(),
                     [&](Ref a, Ref b) { return gold.min_index(a) < gold.min_index(b); });
    for (const Ref c : children) self(self, c);
  };
  visit(visit, Ref::Node(gold.root));
  return proj;
}

GoldOracle::GoldOracle(const ConstTree& gold, const Grammar& grammar, const HeadTable& heads)
    : gold_(gold), grammar_(grammar), heads_(heads), proj_(LinearizeGold(gold)) {
  token_pos_.assign(gold.tokens.size(), -1);
  node_pos_.assign(gold.nodes.size(), -1);
  for (const auto& node : gold.nodes) {
    for (int k = 0; k < static_cast<int>(node.children.size()); ++k) {
      const Ref c = node.children[k];
      (c.is_terminal() ? token_pos_ : node_pos_)[c.index] = k;
    }
  }
}

void GoldOracle::Annotate(ParserState& state) const {
  for (auto& item : state.items) {
    if (!item.preterminal) continue;
    item.gold = Ref::Terminal(item.token);
    item.complete = true;
    item.proj_order = proj_[item.token];
  }
}

int GoldOracle::ChildCount(Ref r) const {
  return r.is_terminal() ? 0 : static_cast<int>(gold_.nodes[r.index].children.size());
}

bool GoldOracle::Started(const ParserState& state, int gold_node) const {
  for (const int r : state.roots) {
    const auto& g = state.items[r].gold;
    if (g && !g->is_terminal() && g->index == gold_node) return true;
  }
  return false;
}

Side GoldOracle::GoldSide(int label, const ParseNode& left, const ParseNode& right) const {
  const std::string child_labels[2] = {left.label, right.label};
  if (const auto h = heads_.FindHead(grammar_.labels.at(label), child_labels)) {
    return *h == 0 ? Side::kLeft : Side::kRight;
  }
  return heads_.fallback == Direction::kLeftToRight ? Side::kLeft : Side::kRight;
}

bool GoldOracle::IsGold(const ParserState& state, const Action& a) const {
  const int n = state.size();
  const int i = a.position;
  if (i < 0 || i >= n) return false;
  const ParseNode& x = state.root(i);
  const auto position = [this](Ref r) { return r.is_terminal() ? token_pos_[r.index] : node_pos_[r.index]; };
  const auto done = [](const ParseNode& p) { return p.gold.has_value() && p.complete; };

  switch (a.kind) {
    case ActionKind::kBuild: {
      if (i + 1 >= n) return false;
      const ParseNode& y = state.root(i + 1);
      if (!done(x) || !done(y)) return false;
      const int parent = gold_.parent(*x.gold);
      if (parent < 0 || parent != gold_.parent(*y.gold)) return false;
      if (gold_.nodes[parent].label != grammar_.labels.at(a.label)) return false;
      if (position(*y.gold) != position(*x.gold) + 1) return false;
      if (Started(state, parent)) return false;
      return a.side == GoldSide(a.label, x, y);
    }
    case ActionKind::kAttach: {
      if (i + 1 >= n) return false;
      const ParseNode& y = state.root(i + 1);
      const bool left = a.side == Side::kLeft;
      const ParseNode& host = left ? y : x;
      const ParseNode& dep = left ? x : y;
      if (!host.in_progress || !host.gold || host.gold->is_terminal() || host.complete) return false;
      if (!done(dep) || gold_.parent(*dep.gold) != host.gold->index) return false;
      return position(*dep.gold) == (left ? host.first - 1 : host.last + 1);
    }
    case ActionKind::kUnary: {
      if (!done(x) || x.unary_depth >= 2) return false;
      const int parent = gold_.parent(*x.gold);
      if (parent < 0 || parent == gold_.root) return false;
      return gold_.nodes[parent].children.size() == 1 &&
             gold_.nodes[parent].label == grammar_.labels.at(a.label);
    }
    case ActionKind::kSwap: {
      if (i + 1 >= n) return false;
      const ParseNode& y = state.root(i + 1);
      return x.min_orig < y.min_orig && x.proj_order > y.proj_order;
    }
  }
  return false;
}

void GoldOracle::Observe(ParserState& state, const Action& a, int created) const {
  if (created < 0) return;
  ParseNode& item = state.items[created];
  const auto position = [this](Ref r) { return r.is_terminal() ? token_pos_[r.index] : node_pos_[r.index]; };
  switch (a.kind) {
    case ActionKind::kBuild: {
      const Ref left = *state.items[item.children[0]].gold;
      const Ref right = *state.items[item.children[1]].gold;
      item.gold = Ref::Node(gold_.parent(left));
      item.first = position(left);
      item.last = position(right);
      break;
    }
    case ActionKind::kAttach:
      if (a.side == Side::kLeft) {
        --item.first;
      } else {
        ++item.last;
      }
      break;
    case ActionKind::kUnary:
      item.gold = Ref::Node(gold_.parent(*state.items[item.children[0]].gold));
      item.first = item.last = 0;
      break;
    case ActionKind::kSwap:
      return;
  }
  item.complete = item.last - item.first + 1 == ChildCount(*item.gold);
  int proj = static_cast<int>(proj_.size());
  for (const int t : item.yield) proj = std::min(proj, proj_[t]);
  item.proj_order = proj;
}

// ------------------------------------------------------------- ScoreCache

bool Precedes(const ScoredAction& a, const ScoredAction& b) {
  if (a.score != b.score) return a.score > b.score;
  const auto key = [](const Action& x) {
    return std::tuple(x.position, static_cast<int>(x.kind), x.label, static_cast<int>(x.side));
  };
  return key(a.action) < key(b.action);
}

ScoreCache::ScoreCache(const ParserModel& model, const Transitions& transitions)
    : model_(model), transitions_(transitions), extractor_(model.features) {
  const auto& g = model.grammar;
  for (int l = 0; l < static_cast<int>(g.labels.size()); ++l) {
    build_ids_.push_back(g.ActionId({ActionKind::kBuild, l, Side::kLeft, 0}));
    build_ids_.push_back(g.ActionId({ActionKind::kBuild, l, Side::kRight, 0}));
    unary_ids_.push_back(g.ActionId({ActionKind::kUnary, l, Side::kLeft, 0}));
  }
  attach_ids_ = {g.ActionId({ActionKind::kAttach, -1, Side::kLeft, 0}),
                 g.ActionId({ActionKind::kAttach, -1, Side::kRight, 0})};
  swap_id_ = g.ActionId({ActionKind::kSwap, -1, Side::kLeft, 0});
}

const std::string& ScoreCache::IdOf(const Action& a) const {
  const int side = a.side == Side::kLeft ? 0 : 1;
  switch (a.kind) {
    case ActionKind::kBuild:
      return build_ids_[2 * a.label + side];
    case ActionKind::kAttach:
      return attach_ids_[side];
    case ActionKind::kUnary:
      return unary_ids_[a.label];
    case ActionKind::kSwap:
      break;
  }
  return swap_id_;
}

std::vector<ScoredAction> ScoreCache::Compute(const ParserState& state, int i) const {
  std::vector<Action> actions;
  transitions_.AppendActionsAt(state, i, actions);
  std::vector<ScoredAction> scored;
  if (actions.empty()) return scored;
  const auto prefixes = extractor_.Prefixes(transitions_.WindowAt(state, i));
  ++extractions_;
  scored.reserve(actions.size());
  FeatureVector fv;
  for (const auto& a : actions) {
    extractor_.Conjoin(prefixes, IdOf(a), fv);
    scored.push_back({a, model_.weights.Score(fv)});
  }
  return scored;
}

FeatureVector ScoreCache::Features(const ParserState& state, const Action& a) const {
  return extractor_.Extract(transitions_.WindowAt(state, a.position), IdOf(a));
}

void ScoreCache::Store(int i, std::vector<ScoredAction> scored) {
  int best = -1;
  for (int k = 0; k < static_cast<int>(scored.size()); ++k) {
    if (best < 0 || Precedes(scored[k], scored[best])) best = k;
  }
  cache_[i] = std::move(scored);
  best_[i] = best;
}

void ScoreCache::Reset(const ParserState& state) {
  const int n = state.size();
  cache_.assign(n, {});
  best_.assign(n, -1);
  for (int i = 0; i < n; ++i) Store(i, Compute(state, i));
}

void ScoreCache::Refresh(const ParserState& state, const Action& applied) {
  const int n = state.size();
  const int shift = static_cast<int>(cache_.size()) - n;  // 1 after BUILD/ATTACH
  const int j = applied.position;
  auto old_cache = std::move(cache_);
  auto old_best = std::move(best_);
  cache_.assign(n, {});
  best_.assign(n, -1);
  for (int p = 0; p < n; ++p) {
    if (p >= j - 2 && p <= j + 2) {
      Store(p, Compute(state, p));
      continue;
    }
    const int from = p < j ? p : p + shift;
    cache_[p] = std::move(old_cache[from]);
    best_[p] = old_best[from];
    for (auto& s : cache_[p]) s.action.position = p;
  }
}

std::optional<ScoredAction> ScoreCache::Best() const {
  std::optional<ScoredAction> best;
  for (int i = 0; i < size(); ++i) {
    if (best_[i] < 0) continue;
    const auto& candidate = cache_[i][best_[i]];
    if (!best || Precedes(candidate, *best)) best = candidate;
  }
  return best;
}

// ------------------------------------------------------------------- Parse

ConstTree Parse(const ParserModel& model, std::span<const Token> tokens, ParseStats* stats) {
  if (tokens.empty()) throw std::invalid_argument("cannot parse an empty sentence");
  const Transitions transitions(model);
  ScoreCache cache(model, transitions);
  ParserState state = transitions.Initial(tokens);
  cache.Reset(state);
  const long n = static_cast<long>(tokens.size());
  const long cap = 4 * (n + 2) * (n + 2);
  int actions = 0;
  while (state.size() > 1 && actions < cap) {
    const auto best = cache.Best();
    if (!best) break;
    transitions.Apply(state, best->action, tokens);
    cache.Refresh(state, best->action);
    ++actions;
  }
  if (stats) {
    stats->actions = actions;
    stats->swaps = state.swaps;
    stats->extractions = cache.extractions();
    stats->fallback_root = state.size() > 1;
  }
  return transitions.ToTree(state, tokens);
}

// ---------------------------------------------------------------- Training

TrainStats Train(std::span<const ConstTree> treebank, ParserModel& model,
                 const TrainOptions& options, const LearnerParams& params) {
  if (treebank.empty()) throw std::invalid_argument("training corpus is empty");
  model.grammar = Grammar::FromTreebank(treebank);
  model.weights = WeightStore(model.features.dims(), params);
  if (options.lambda_numerator >= 0) {
    model.weights.SetLambdaFromCorpus(static_cast<long>(treebank.size()), options.lambda_numerator);
  }
  spdlog::debug("training on {} sentences, {} labels, lambda={}", treebank.size(),
                model.grammar.labels.size(), model.weights.params().lambda);

  const Transitions transitions(model);
  std::vector<std::size_t> order(treebank.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(options.seed);
  TrainStats stats;

  for (int epoch = 1; epoch <= options.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    long epoch_updates = 0;
    for (const std::size_t s : order) {
      const ConstTree& gold = treebank[s];
      const GoldOracle oracle(gold, model.grammar, model.heads);
      ScoreCache cache(model, transitions);
      ParserState state = transitions.Initial(gold.tokens);
      oracle.Annotate(state);
      cache.Reset(state);
      while (state.size() > 1) {
        const auto best = cache.Best();
        if (!best) break;
        std::optional<ScoredAction> best_gold;
        for (int i = 0; i < cache.size(); ++i) {
          for (const auto& sa : cache.At(i)) {
            if (oracle.IsGold(state, sa.action) && (!best_gold || Precedes(sa, *best_gold))) {
              best_gold = sa;
            }
          }
        }
        if (!best_gold) {
          ++stats.unreachable;
          spdlog::debug("sentence {}: no gold action left", gold.id);
          break;
        }
        ++stats.decisions;
        Action next = best->action;
        if (!oracle.IsGold(state, best->action)) {
          model.weights.Update(cache.Features(state, best->action),
                               cache.Features(state, best_gold->action));
          ++stats.updates;
          ++epoch_updates;
          if (options.early_stop) break;
          next = best_gold->action;
        }
        const int created = transitions.Apply(state, next, gold.tokens);
        oracle.Observe(state, next, created);
        if (next == best->action) {
          cache.Refresh(state, next);
        } else {
          cache.Reset(state);
        }
      }
    }
    spdlog::debug("epoch {}: {} updates", epoch, epoch_updates);
    if (options.on_epoch) options.on_epoch(epoch, model, epoch_updates);
  }
  return stats;
}

ConstTree ReplayGold(const ConstTree& gold, const ParserModel& model,
                     const std::function<std::size_t(std::size_t)>& choose, int* steps) {
  const Transitions transitions(model);
  const GoldOracle oracle(gold, model.grammar, model.heads);
  ParserState state = transitions.Initial(gold.tokens);
  oracle.Annotate(state);
  int count = 0;
  while (state.size() > 1) {
    std::vector<Action> gold_actions;
    for (const auto& a : transitions.Applicable(state)) {
      if (oracle.IsGold(state, a)) gold_actions.push_back(a);
    }
    if (gold_actions.empty()) {
      throw std::logic_error(fmt::format("no gold action for sentence '{}' after {} steps", gold.id, count));
    }
    const std::size_t pick = choose ? choose(gold_actions.size()) : 0;
    const Action a = gold_actions.at(pick);
    oracle.Observe(state, a, transitions.Apply(state, a, gold.tokens));
    ++count;
  }
  if (steps) *steps = count;
  return transitions.ToTree(state, gold.tokens);
}

long CountGoldDecisions(std::span<const ConstTree> treebank, const ParserModel& model) {
  long total = 0;
  for (const auto& t : treebank) {
    int steps = 0;
    ReplayGold(t, model, {}, &steps);
    total += steps;
  }
  return total;
}

// ------------------------------------------------------------- Model file

namespace {

nlohmann::json ModelHeader(const ParserModel& m, bool with_accumulators) {
  std::ostringstream heads;
  m.heads.Write(heads);
  std::ostringstream tags;
  m.tags.Write(tags);
  const auto& f = m.features;
  nlohmann::json j;
  j["labels"] = m.grammar.labels;
  j["buildable"] = std::vector<bool>(m.grammar.buildable.begin(), m.grammar.buildable.end());
  j["unary"] = std::vector<bool>(m.grammar.unary.begin(), m.grammar.unary.end());
  j["root_label"] = m.grammar.root_label;
  j["head_table"] = heads.str();
  j["tags"] = tags.str();
  j["features"] = {{"dim_bits", f.dim_bits},
                   {"cluster_full", f.cluster_full},
                   {"cluster_6", f.cluster_6},
                   {"cluster_4", f.cluster_4},
                   {"left_context_pair", f.left_context_pair},
                   {"literal_duplicate_ww", f.literal_duplicate_ww},
                   {"lemma_templates", f.lemma_templates},
                   {"bigram_kind", f.bigram_kind},
                   {"digest", f.Digest()}};
  j["clusters_path"] = m.clusters_path;
  j["bigram_path"] = m.bigram_path;
  const auto& p = m.weights.params();
  j["learner"] = {{"eta", p.eta}, {"lambda", p.lambda}, {"delta", p.delta}};
  j["dims"] = m.weights.dims();
  j["accumulators"] = with_accumulators;
  return j;
}

}  // namespace

std::string ParserModel::Digest() const {
  std::uint64_t h = Fnv1a64::Mix(Fnv1a64::kOffset, ModelHeader(*this, false).dump());
  for (const float w : weights.weights()) {
    const auto bits = std::bit_cast<std::uint32_t>(w);
    for (int b = 0; b < 4; ++b) h = Fnv1a64::MixByte(h, static_cast<unsigned char>(bits >> (8 * b)));
  }
  return fmt::format("{:016x}", h);
}

void ParserModel::Save(std::ostream& out, bool with_accumulators) const {
  out << kModelMagic << '\n' << ModelHeader(*this, with_accumulators).dump() << '\n';
  WriteWeightArrays(out, weights, with_accumulators);
  if (!out) throw IoError("error writing model");
}

ParserModel ParserModel::Load(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kModelMagic) throw FormatError("not a model file", 1);
  if (!std::getline(in, line)) throw FormatError("missing model header", 2);
  ParserModel m;
  bool accumulators = false;
  std::size_t dims = 0;
  try {
    const auto j = nlohmann::json::parse(line);
    m.grammar.labels = j.at("labels").get<std::vector<std::string>>();
    for (const bool b : j.at("buildable").get<std::vector<bool>>()) m.grammar.buildable.push_back(b);
    for (const bool b : j.at("unary").get<std::vector<bool>>()) m.grammar.unary.push_back(b);
    m.grammar.root_label = j.at("root_label").get<std::string>();
    if (m.grammar.buildable.size() != m.grammar.labels.size() ||
        m.grammar.unary.size() != m.grammar.labels.size() ||
        !std::is_sorted(m.grammar.labels.begin(), m.grammar.labels.end())) {
      throw FormatError("inconsistent label inventory in model header", 2);
    }
    std::istringstream heads(j.at("head_table").get<std::string>());
    m.heads = HeadTable::Read(heads);
    std::istringstream tags(j.at("tags").get<std::string>());
    m.tags = TagClassification::Read(tags);
    const auto& f = j.at("features");
    m.features.dim_bits = f.at("dim_bits").get<int>();
    m.features.cluster_full = f.at("cluster_full").get<bool>();
    m.features.cluster_6 = f.at("cluster_6").get<bool>();
    m.features.cluster_4 = f.at("cluster_4").get<bool>();
    m.features.left_context_pair = f.at("left_context_pair").get<bool>();
    m.features.literal_duplicate_ww = f.at("literal_duplicate_ww").get<bool>();
    m.features.lemma_templates = f.at("lemma_templates").get<bool>();
    m.features.bigram_kind = f.at("bigram_kind").get<std::string>();
    m.clusters_path = j.at("clusters_path").get<std::string>();
    m.bigram_path = j.at("bigram_path").get<std::string>();
    const auto& p = j.at("learner");
    const LearnerParams params{p.at("eta").get<double>(), p.at("lambda").get<double>(),
                               p.at("delta").get<double>()};
    dims = j.at("dims").get<std::size_t>();
    accumulators = j.at("accumulators").get<bool>();
    if (m.features.dim_bits < 1 || m.features.dim_bits > 31 || dims != m.features.dims()) {
      throw FormatError(fmt::format("model dims {} do not match dim_bits {}", dims, m.features.dim_bits), 2);
    }
    m.weights = WeightStore(dims, params);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("bad model header: ") + e.what(), 2);
  }
  ReadWeightArrays(in, m.weights, accumulators);
  return m;
}

}  // namespace easyfirst
