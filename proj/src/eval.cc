#include "easyfirst/eval.h"

#include <algorithm>

#include <fmt/format.h>

namespace easyfirst {
namespace {

double Ratio(long num, long den, long other) {
  if (den > 0) return 100.0 * static_cast<double>(num) / static_cast<double>(den);
  return other == 0 ? 100.0 : 0.0;
}

}  // namespace

double BracketCounts::Precision() const { return Ratio(matched, predicted, gold); }
double BracketCounts::Recall() const { return Ratio(matched, gold, predicted); }

double BracketCounts::F1() const {
  const double p = Precision();
  const double r = Recall();
  return p + r > 0 ? 2 * p * r / (p + r) : 0.0;
}

std::vector<Bracket> Brackets(const ConstTree& tree, const EvalConfig& config) {
  std::vector<Bracket> out;
  for (int k = 0; k < static_cast<int>(tree.nodes.size()); ++k) {
    if (config.exclude_root && k == tree.root) continue;
    const auto& node = tree.nodes[k];
    std::vector<int> yield;
    for (const int t : node.yield) {
      if (config.drop_punctuation && config.tags.IsPunctuation(tree.tokens[t].pos)) continue;
      yield.push_back(t);
    }
    if (yield.empty()) continue;
    out.emplace_back(node.label, std::move(yield));
  }
  std::sort(out.begin(), out.end());
  return out;
}

BracketCounts CompareBrackets(const std::vector<Bracket>& gold, const std::vector<Bracket>& pred,
                              std::map<std::string, BracketCounts>* per_label) {
  BracketCounts c;
  c.gold = static_cast<long>(gold.size());
  c.predicted = static_cast<long>(pred.size());
  if (per_label) {
    for (const auto& b : gold) ++(*per_label)[b.first].gold;
    for (const auto& b : pred) ++(*per_label)[b.first].predicted;
  }
  auto g = gold.begin();
  auto p = pred.begin();
  while (g != gold.end() && p != pred.end()) {
    if (*g < *p) {
      ++g;
    } else if (*p < *g) {
      ++p;
    } else {
      ++c.matched;
      if (per_label) ++(*per_label)[g->first].matched;
      ++g;
      ++p;
    }
  }
  return c;
}

std::vector<int> PercolatedGovernors(const ConstTree& tree, const HeadTable& heads,
                                     const TagClassification& tags) {
  const int m = static_cast<int>(tree.nodes.size());
  std::vector<int> head(m, -1);
  const auto head_of = [&](const auto& self, int k) -> int {
    if (head[k] >= 0) return head[k];
    const auto& node = tree.nodes[k];
    std::vector<std::string> labels;
    labels.reserve(node.children.size());
    for (const Ref c : node.children) labels.push_back(tree.label(c));
    const Ref h = node.children[heads.HeadChild(node.label, labels, &tags)];
    head[k] = h.is_terminal() ? h.index : self(self, h.index);
    return head[k];
  };
  for (int k = 0; k < m; ++k) head_of(head_of, k);

  std::vector<int> governor(tree.tokens.size(), -1);
  for (int t = 0; t < tree.size(); ++t) {
    for (int k = tree.token_parent[t]; k >= 0; k = tree.nodes[k].parent) {
      if (head[k] != t) {
        governor[t] = head[k];
        break;
      }
    }
  }
  return governor;
}

double EvalReport::ExactMatch() const { return Ratio(exact, sentences, 0); }
double EvalReport::Uas() const { return Ratio(uas_correct, uas_total, 0); }

double EvalReport::LabelF1(const std::string& label) const {
  const auto it = per_label.find(label);
  return it == per_label.end() ? BracketCounts{}.F1() : it->second.F1();
}

EvalReport Evaluate(std::span<const ConstTree> gold, std::span<const ConstTree> pred,
                    const EvalConfig& config, const HeadTable* heads) {
  if (config.max_length < 0) throw EvalError("length cutoff must be positive");
  if (gold.size() != pred.size()) {
    throw EvalError(fmt::format("sentence count mismatch: {} gold vs {} predicted", gold.size(), pred.size()));
  }
  EvalReport r;
  for (std::size_t s = 0; s < gold.size(); ++s) {
    const auto& g = gold[s];
    const auto& p = pred[s];
    if (g.size() != p.size()) {
      throw EvalError(fmt::format("sentence {}: {} gold vs {} predicted tokens", s + 1, g.size(), p.size()));
    }
    for (int t = 0; t < g.size(); ++t) {
      if (g.tokens[t].form != p.tokens[t].form) {
        throw EvalError(fmt::format("sentence {} token {}: '{}' vs '{}'", s + 1, t + 1,
                                    g.tokens[t].form, p.tokens[t].form));
      }
    }
    if (config.max_length > 0 && g.size() > config.max_length) {
      ++r.skipped;
      continue;
    }
    ++r.sentences;
    const auto gb = Brackets(g, config);
    const auto pb = Brackets(p, config);
    const auto c = CompareBrackets(gb, pb, &r.per_label);
    r.brackets.Add(c);
    if (gb == pb) ++r.exact;

    if (heads) {
      const auto gg = PercolatedGovernors(g, *heads, config.tags);
      const auto pg = PercolatedGovernors(p, *heads, config.tags);
      for (int t = 0; t < g.size(); ++t) {
        if (config.drop_punctuation && config.tags.IsPunctuation(g.tokens[t].pos)) continue;
        ++r.uas_total;
        if (gg[t] == pg[t]) ++r.uas_correct;
      }
    }
  }
  return r;
}

std::string FormatReport(const EvalReport& r, const EvalConfig& config) {
  std::string out;
  out += fmt::format("sentences  {} (skipped {})\n", r.sentences, r.skipped);
  out += fmt::format("brackets   gold {} predicted {} matched {}\n", r.brackets.gold,
                     r.brackets.predicted, r.brackets.matched);
  out += fmt::format("P {:.2f}  R {:.2f}  F1 {:.2f}  EX {:.2f}  UAS {:.2f}\n", r.precision(),
                     r.recall(), r.f1(), r.ExactMatch(), r.Uas());
  for (const auto& label : config.report_labels) {
    out += fmt::format("  {:<6} F1 {:.2f}\n", label, r.LabelF1(label));
  }
  out += fmt::format("precision={:.4f}\nrecall={:.4f}\nf1={:.4f}\nex={:.4f}\nuas={:.4f}\n", r.precision(),
                     r.recall(), r.f1(), r.ExactMatch(), r.Uas());
  for (const auto& label : config.report_labels) {
    out += fmt::format("f1.{}={:.4f}\n", label, r.LabelF1(label));
  }
  return out;
}

}  // namespace easyfirst
