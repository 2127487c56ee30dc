#ifndef EASYFIRST_EVAL_H_
#define EASYFIRST_EVAL_H_

#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "easyfirst/headrules.h"
#include "easyfirst/tree.h"

namespace easyfirst {

class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct EvalConfig {
  int max_length = 0;  // sentences longer than this are skipped; 0 = no cutoff
  bool drop_punctuation = false;
  bool exclude_root = true;
  std::vector<std::string> report_labels = {"NP", "PP", "VP"};
  TagClassification tags;  // consulted for punctuation and head percolation
};

// (label, yield) of one constituent.
using Bracket = std::pair<std::string, std::vector<int>>;

// Sorted bracket multiset of a tree after punctuation handling.
std::vector<Bracket> Brackets(const ConstTree& tree, const EvalConfig& config);

struct BracketCounts {
  long gold = 0;
  long predicted = 0;
  long matched = 0;

  void Add(const BracketCounts& o) {
    gold += o.gold;
    predicted += o.predicted;
    matched += o.matched;
  }
  double Precision() const;
  double Recall() const;
  double F1() const;
};

// Matched counts of two sorted bracket multisets, overall and per label.
BracketCounts CompareBrackets(const std::vector<Bracket>& gold, const std::vector<Bracket>& pred,
                              std::map<std::string, BracketCounts>* per_label = nullptr);

// Induced governor per token (-1 for the head of the whole tree): the head
// token of the smallest constituent properly containing the token whose
// head differs from it.
std::vector<int> PercolatedGovernors(const ConstTree& tree, const HeadTable& heads,
                                     const TagClassification& tags);

struct EvalReport {
  long sentences = 0;  // after the length cutoff
  long skipped = 0;
  BracketCounts brackets;
  std::map<std::string, BracketCounts> per_label;
  long exact = 0;
  long uas_correct = 0;
  long uas_total = 0;

  double precision() const { return brackets.Precision(); }
  double recall() const { return brackets.Recall(); }
  double f1() const { return brackets.F1(); }
  double ExactMatch() const;
  double Uas() const;
  double LabelF1(const std::string& label) const;
};

// Throws EvalError on differing sentence counts or tokenizations. UAS is
// only computed when `heads` is given.
EvalReport Evaluate(std::span<const ConstTree> gold, std::span<const ConstTree> pred,
                    const EvalConfig& config, const HeadTable* heads = nullptr);

// Human-readable table followed by key=value lines.
std::string FormatReport(const EvalReport& report, const EvalConfig& config);

}  // namespace easyfirst

#endif  // EASYFIRST_EVAL_H_
