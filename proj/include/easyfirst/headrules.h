#ifndef EASYFIRST_HEADRULES_H_
#define EASYFIRST_HEADRULES_H_

#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "easyfirst/tree.h"

namespace easyfirst {

enum class TagClass { kNormal, kClosedClass, kPunctuation };

std::string_view TagClassName(TagClass c);
std::optional<TagClass> ParseTagClass(std::string_view name);

// normal / closed-class / punctuation per POS tag. Unknown tags are normal.
class TagClassification {
 public:
  void Set(const std::string& tag, TagClass c) { classes_[tag] = c; }
  TagClass Get(std::string_view tag) const;
  bool IsPunctuation(std::string_view tag) const { return Get(tag) == TagClass::kPunctuation; }
  bool IsClosedClass(std::string_view tag) const { return Get(tag) == TagClass::kClosedClass; }
  const std::map<std::string, TagClass, std::less<>>& classes() const { return classes_; }

  void Write(std::ostream& out) const;
  static TagClassification Read(std::istream& in);

 private:
  std::map<std::string, TagClass, std::less<>> classes_;
};

enum class Direction { kLeftToRight, kRightToLeft };

std::string_view DirectionName(Direction d);

struct HeadRuleEntry {
  std::string child_label;
  Direction direction = Direction::kLeftToRight;

  bool operator==(const HeadRuleEntry&) const = default;
};

// Per parent label, a prioritized list of child labels each with its own scan
// direction. Entries are tried in order; the first entry matching some child
// picks the first such child in the entry's direction.
class HeadTable {
 public:
  std::map<std::string, std::vector<HeadRuleEntry>, std::less<>> rules;
  Direction fallback = Direction::kLeftToRight;

  // Index of the head child, or nullopt when no rule entry matches.
  std::optional<int> FindHead(std::string_view parent,
                              std::span<const std::string> child_labels) const;

  // Total head function. When the rules are silent, scans in `silent`
  // (default: the table's fallback) for the first non-punctuation child; an
  // all-punctuation phrase takes its leftmost child.
  int HeadChild(std::string_view parent, std::span<const std::string> child_labels,
                const TagClassification* tags = nullptr,
                std::optional<Direction> silent = std::nullopt) const;

  // rparse/DiscoDop text format: "PARENT direction child1 child2 ...".
  // Consecutive entries sharing a direction share a line.
  void Write(std::ostream& out) const;
  static HeadTable Read(std::istream& in);

  bool operator==(const HeadTable&) const = default;
};

// Per internal node of one tree (indexed like tree.nodes): the tokens in the
// yield whose governor lies outside the yield, and the children (indices into
// node.children) whose yields contain such a token.
struct ObservedHeads {
  std::vector<std::vector<int>> head_tokens;
  std::vector<std::vector<int>> head_children;
};

ObservedHeads ComputeObservedHeads(const ConstTree& tree, const DepSentence& deps);

struct InductionStats {
  int parent_labels = 0;
  long phrases = 0;
  long conflicts = 0;  // phrases with two or more candidate daughters
};

// Derives a head table from observed heads: for each parent label, repeatedly
// appends the candidate label with the best wins-minus-losses score over the
// remaining conflict phrases. Punctuation tags never become candidates.
// Throws std::invalid_argument on an empty corpus.
HeadTable InduceHeadTable(const AlignedCorpus& corpus, const TagClassification& tags = {},
                          InductionStats* stats = nullptr);

struct TagStats {
  long tokens = 0;
  long distinct_forms = 0;
  long with_letter = 0;
  long with_punctuation = 0;
};

// Unicode general category L / P tests over a UTF-8 string.
bool ContainsLetter(std::string_view utf8);
bool ContainsPunctuation(std::string_view utf8);

std::map<std::string, TagStats> CollectTagStats(std::span<const ConstTree> trees);

TagClassification ClassifyTagsHeuristic(const std::map<std::string, TagStats>& stats);

// Fine tag -> universal tag, read from two whitespace-separated columns.
using UniversalMap = std::map<std::string, std::string, std::less<>>;
UniversalMap ReadUniversalMap(std::istream& in);

TagClassification ClassifyTagsUniversal(const std::map<std::string, long>& tag_counts,
                                        const UniversalMap& upos);

}  // namespace easyfirst

#endif  // EASYFIRST_HEADRULES_H_
