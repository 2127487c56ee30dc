#include "easyfirst/headrules.h"

#include <algorithm>
#include <istream>
#include <ostream>
#include <set>
#include <stdexcept>

#include <fmt/format.h>
#include <spdlog/spdlog.h>
#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include "easyfirst/util.h"

namespace easyfirst {

std::string_view TagClassName(TagClass c) {
  switch (c) {
    case TagClass::kNormal:
      return "normal";
    case TagClass::kClosedClass:
      return "closed_class";
    case TagClass::kPunctuation:
      return "punctuation";
  }
  return "normal";
}

std::optional<TagClass> ParseTagClass(std::string_view name) {
  if (name == "normal") return TagClass::kNormal;
  if (name == "closed_class") return TagClass::kClosedClass;
  if (name == "punctuation") return TagClass::kPunctuation;
  return std::nullopt;
}

TagClass TagClassification::Get(std::string_view tag) const {
  auto it = classes_.find(tag);
  return it == classes_.end() ? TagClass::kNormal : it->second;
}

void TagClassification::Write(std::ostream& out) const {
  for (const auto& [tag, c] : classes_) out << tag << '\t' << TagClassName(c) << '\n';
}

TagClassification TagClassification::Read(std::istream& in) {
  TagClassification tc;
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = Trim(raw);
    if (line.empty() || line.starts_with("%%")) continue;
    const auto f = SplitWhitespace(line);
    std::optional<TagClass> c;
    if (f.size() == 2) c = ParseTagClass(f[1]);
    if (!c) throw std::runtime_error(fmt::format("tag classification line {}: bad entry", line_no));
    tc.Set(std::string(f[0]), *c);
  }
  return tc;
}

std::string_view DirectionName(Direction d) {
  return d == Direction::kLeftToRight ? "left-to-right" : "right-to-left";
}

namespace {

std::optional<Direction> ParseDirection(std::string_view s) {
  if (s == "left-to-right" || s == "left") return Direction::kLeftToRight;
  if (s == "right-to-left" || s == "right") return Direction::kRightToLeft;
  return std::nullopt;
}

std::optional<int> ScanFor(std::span<const std::string> labels, std::string_view wanted,
                           Direction d) {
  const int n = static_cast<int>(labels.size());
  for (int k = 0; k < n; ++k) {
    const int i = d == Direction::kLeftToRight ? k : n - 1 - k;
    if (labels[i] == wanted) return i;
  }
  return std::nullopt;
}

}  // namespace

std::optional<int> HeadTable::FindHead(std::string_view parent,
                                       std::span<const std::string> child_labels) const {
  auto it = rules.find(parent);
  if (it == rules.end()) return std::nullopt;
  for (const auto& entry : it->second) {
    if (auto i = ScanFor(child_labels, entry.child_label, entry.direction)) return i;
  }
  return std::nullopt;
}

int HeadTable::HeadChild(std::string_view parent, std::span<const std::string> child_labels,
                         const TagClassification* tags, std::optional<Direction> silent) const {
  if (child_labels.empty()) return -1;
  if (auto i = FindHead(parent, child_labels)) return *i;
  const Direction d = silent.value_or(fallback);
  const int n = static_cast<int>(child_labels.size());
  for (int k = 0; k < n; ++k) {
    const int i = d == Direction::kLeftToRight ? k : n - 1 - k;
    if (tags == nullptr || !tags->IsPunctuation(child_labels[i])) return i;
  }
  return 0;
}

void HeadTable::Write(std::ostream& out) const {
  out << "%% fallback " << DirectionName(fallback) << '\n';
  for (const auto& [parent, entries] : rules) {
    std::size_t i = 0;
    while (i < entries.size()) {
      const Direction d = entries[i].direction;
      out << parent << ' ' << DirectionName(d);
      for (; i < entries.size() && entries[i].direction == d; ++i) {
        out << ' ' << entries[i].child_label;
      }
      out << '\n';
    }
  }
}

HeadTable HeadTable::Read(std::istream& in) {
  HeadTable table;
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = Trim(raw);
    if (line.empty()) continue;
    const auto f = SplitWhitespace(line);
    if (line.starts_with("%%")) {
      if (f.size() == 3 && f[1] == "fallback") {
        if (auto d = ParseDirection(f[2])) table.fallback = *d;
      }
      continue;
    }
    if (line.starts_with('%')) continue;
    auto d = f.size() >= 2 ? ParseDirection(f[1]) : std::nullopt;
    if (!d) throw std::runtime_error(fmt::format("head table line {}: bad direction", line_no));
    auto& entries = table.rules[std::string(f[0])];
    for (std::size_t i = 2; i < f.size(); ++i) {
      entries.push_back({std::string(f[i]), *d});
    }
  }
  return table;
}

ObservedHeads ComputeObservedHeads(const ConstTree& tree, const DepSentence& deps) {
  ObservedHeads out;
  out.head_tokens.resize(tree.nodes.size());
  out.head_children.resize(tree.nodes.size());
  std::vector<char> inside(tree.size(), 0);
  for (std::size_t k = 0; k < tree.nodes.size(); ++k) {
    const auto& node = tree.nodes[k];
    for (int t : node.yield) inside[t] = 1;
    for (int t : node.yield) {
      const int gov = deps.governor(t);
      if (gov < 0 || !inside[gov]) out.head_tokens[k].push_back(t);
    }
    for (int t : node.yield) inside[t] = 0;
    for (std::size_t c = 0; c < node.children.size(); ++c) {
      const auto cy = tree.yield(node.children[c]);
      const bool has_head = std::any_of(cy.begin(), cy.end(), [&](int t) {
        return std::binary_search(out.head_tokens[k].begin(), out.head_tokens[k].end(), t);
      });
      if (has_head) out.head_children[k].push_back(static_cast<int>(c));
    }
  }
  return out;
}

namespace {

// One phrase of a given parent label, reduced to its candidate daughters.
struct Phrase {
  std::vector<std::string> labels;  // candidate daughters, left to right
  std::vector<char> is_head;
};

struct Score {
  long wins = 0;
  long losses = 0;
};

bool Contains(const Phrase& p, const std::string& label) {
  return std::find(p.labels.begin(), p.labels.end(), label) != p.labels.end();
}

std::vector<HeadRuleEntry> InduceRule(std::vector<Phrase> phrases, std::set<std::string> candidates,
                                      Direction fallback, long& conflicts) {
  for (auto& p : phrases) {
    Phrase reduced;
    for (std::size_t i = 0; i < p.labels.size(); ++i) {
      if (candidates.count(p.labels[i])) {
        reduced.labels.push_back(p.labels[i]);
        reduced.is_head.push_back(p.is_head[i]);
      }
    }
    p = std::move(reduced);
    std::set<std::string> distinct(p.labels.begin(), p.labels.end());
    if (distinct.size() >= 2) ++conflicts;
  }

  std::vector<HeadRuleEntry> rule;
  while (!candidates.empty()) {
    std::map<std::string, Score> scores;
    for (const auto& c : candidates) scores[c];
    for (const auto& p : phrases) {
      std::set<std::string> present(p.labels.begin(), p.labels.end());
      if (present.size() < 2) continue;
      std::set<std::string> heads;
      for (std::size_t i = 0; i < p.labels.size(); ++i) {
        if (p.is_head[i]) heads.insert(p.labels[i]);
      }
      for (const auto& a : present) {
        if (heads.count(a)) {
          ++scores[a].wins;
        } else if (!heads.empty()) {
          ++scores[a].losses;
        }
      }
    }
    // Highest wins - losses; ties by raw wins, then label order.
    const std::string* best = nullptr;
    for (const auto& c : candidates) {
      const auto& s = scores[c];
      if (best == nullptr) {
        best = &c;
        continue;
      }
      const auto& b = scores[*best];
      const long ds = s.wins - s.losses;
      const long db = b.wins - b.losses;
      if (ds > db || (ds == db && s.wins > b.wins)) best = &c;
    }
    const std::string label = *best;

    long left = 0;
    long right = 0;
    for (const auto& p : phrases) {
      std::vector<std::size_t> inst;
      for (std::size_t i = 0; i < p.labels.size(); ++i) {
        if (p.labels[i] == label) inst.push_back(i);
      }
      if (inst.size() < 2) continue;
      if (p.is_head[inst.front()]) {
        ++left;
      } else if (p.is_head[inst.back()]) {
        ++right;
      }
    }
    Direction d = Direction::kLeftToRight;
    if (left == 0 && right == 0) {
      d = fallback;
    } else if (right > left) {
      d = Direction::kRightToLeft;
    }
    rule.push_back({label, d});

    candidates.erase(label);
    std::erase_if(phrases, [&](const Phrase& p) { return Contains(p, label); });
  }
  return rule;
}

}  // namespace

HeadTable InduceHeadTable(const AlignedCorpus& corpus, const TagClassification& tags,
                          InductionStats* stats) {
  if (corpus.sentences.empty()) throw std::invalid_argument("head induction: empty corpus");
  HeadTable table;

  std::map<std::string, std::vector<Phrase>> by_parent;
  std::map<std::string, std::set<std::string>> candidates;
  InductionStats local;
  for (const auto& pair : corpus.sentences) {
    const auto& tree = pair.tree;
    const auto observed = ComputeObservedHeads(tree, pair.deps);
    for (std::size_t k = 0; k < tree.nodes.size(); ++k) {
      const auto& node = tree.nodes[k];
      Phrase p;
      for (const Ref c : node.children) {
        p.labels.push_back(tree.label(c));
        p.is_head.push_back(0);
      }
      for (int c : observed.head_children[k]) {
        p.is_head[c] = 1;
        if (!tags.IsPunctuation(p.labels[c])) candidates[node.label].insert(p.labels[c]);
      }
      candidates[node.label];
      by_parent[node.label].push_back(std::move(p));
      ++local.phrases;
    }
  }
  for (auto& [parent, phrases] : by_parent) {
    auto rule = InduceRule(std::move(phrases), candidates[parent], table.fallback, local.conflicts);
    if (!rule.empty()) table.rules[parent] = std::move(rule);
  }
  local.parent_labels = static_cast<int>(by_parent.size());
  if (stats != nullptr) *stats = local;
  return table;
}

namespace {

template <typename Pred>
bool AnyCodePoint(std::string_view s, Pred pred) {
  int32_t i = 0;
  const auto len = static_cast<int32_t>(s.size());
  const auto* bytes = reinterpret_cast<const uint8_t*>(s.data());
  while (i < len) {
    UChar32 c = 0;
    U8_NEXT(bytes, i, len, c);
    if (c >= 0 && pred(c)) return true;
  }
  return false;
}

}  // namespace

bool ContainsLetter(std::string_view utf8) {
  return AnyCodePoint(utf8, [](UChar32 c) { return (U_GET_GC_MASK(c) & U_GC_L_MASK) != 0; });
}

bool ContainsPunctuation(std::string_view utf8) {
  return AnyCodePoint(utf8, [](UChar32 c) { return (U_GET_GC_MASK(c) & U_GC_P_MASK) != 0; });
}

std::map<std::string, TagStats> CollectTagStats(std::span<const ConstTree> trees) {
  std::map<std::string, TagStats> stats;
  std::map<std::string, std::set<std::string>> forms;
  for (const auto& tree : trees) {
    for (const auto& t : tree.tokens) {
      auto& s = stats[t.pos];
      ++s.tokens;
      if (ContainsLetter(t.form)) ++s.with_letter;
      if (ContainsPunctuation(t.form)) ++s.with_punctuation;
      forms[t.pos].insert(t.form);
    }
  }
  for (auto& [tag, s] : stats) s.distinct_forms = static_cast<long>(forms[tag].size());
  return stats;
}

TagClassification ClassifyTagsHeuristic(const std::map<std::string, TagStats>& stats) {
  TagClassification tc;
  for (const auto& [tag, s] : stats) {
    TagClass c = TagClass::kNormal;
    if (s.with_punctuation > s.with_letter && s.with_letter < 5) {
      c = TagClass::kPunctuation;
    } else if (s.tokens > 100 && s.distinct_forms < 40) {
      c = TagClass::kClosedClass;
    }
    tc.Set(tag, c);
  }
  return tc;
}

UniversalMap ReadUniversalMap(std::istream& in) {
  UniversalMap map;
  std::string raw;
  while (std::getline(in, raw)) {
    const auto line = Trim(raw);
    if (line.empty() || line.starts_with('#')) continue;
    const auto f = SplitWhitespace(line);
    if (f.size() < 2) {
      spdlog::warn("universal tag map: skipping malformed line '{}'", line);
      continue;
    }
    map.emplace(std::string(f[0]), std::string(f[1]));
  }
  return map;
}

TagClassification ClassifyTagsUniversal(const std::map<std::string, long>& tag_counts,
                                        const UniversalMap& upos) {
  TagClassification tc;
  for (const auto& [tag, count] : tag_counts) {
    auto it = upos.find(tag);
    TagClass c = TagClass::kNormal;
    if (it == upos.end()) {
      spdlog::info("tag '{}' ({} tokens) missing from the universal map; treated as normal", tag,
                   count);
    } else if (it->second == "ADP" || it->second == "CONJ") {
      c = TagClass::kClosedClass;
    } else if (it->second == ".") {
      c = TagClass::kPunctuation;
    }
    tc.Set(tag, c);
  }
  return tc;
}

}  // namespace easyfirst
