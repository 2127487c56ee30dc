#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include <doctest.h>

#include "easyfirst/eval.h"
#include "easyfirst/treebank_io.h"
#include "support/generators.h"

using namespace easyfirst;

namespace {

// Random pred tree over the same tokens; sometimes a copy of gold with one
// label changed.
ConstTree Perturb(const ConstTree& gold, std::mt19937_64& rng) {
  if (rng() % 3 == 0) {
    auto t = gold;
    if (t.nodes.size() > 1) {
      const auto k = rng() % t.nodes.size();
      if (static_cast<int>(k) != t.root) t.nodes[k].label = "ZP";
    }
    return t;
  }
  auto t = testing::RandomDiscTree(rng, {.min_tokens = gold.size(), .max_tokens = gold.size()});
  t.tokens = gold.tokens;
  return t;
}

// Matched count by removing each gold bracket from a copy of pred.
long BruteMatched(const std::vector<Bracket>& gold, std::vector<Bracket> pred) {
  long m = 0;
  for (const auto& g : gold) {
    auto it = std::find(pred.begin(), pred.end(), g);
    if (it != pred.end()) {
      ++m;
      pred.erase(it);
    }
  }
  return m;
}

}  // namespace

TEST_CASE("identical trees score 100 everywhere") {
  std::mt19937_64 rng(61);
  std::vector<ConstTree> bank;
  for (int k = 0; k < 20; ++k) bank.push_back(testing::RandomDiscTree(rng));
  const auto r = Evaluate(bank, bank, {}, nullptr);
  CHECK(r.f1() == 100.0);
  CHECK(r.precision() == 100.0);
  CHECK(r.recall() == 100.0);
  CHECK(r.ExactMatch() == 100.0);
  HeadTable heads;
  CHECK(Evaluate(bank, bank, {}, &heads).Uas() == 100.0);
}

TEST_CASE("one mislabeled bracket of ten gives F1 90") {
  const std::string gold_text =
      "(VROOT (S (NP 0=a 1=b) (VP 2=c 3=d) (AP 4=e 5=f) (CNP 6=g 7=h) (PP 8=i 9=j) (NP 10=k 11=l) "
      "(VP 12=m 13=n) (AP 14=o 15=p) (NP 16=q 17=r)))";
  std::string pred_text = gold_text;
  pred_text.replace(pred_text.find("(NP 0=a"), 3, "(PP");
  const std::vector<ConstTree> gold = {ParseDiscBracket(gold_text)};
  const std::vector<ConstTree> pred = {ParseDiscBracket(pred_text)};
  const auto r = Evaluate(gold, pred, {});
  CHECK(r.brackets.gold == 10);
  CHECK(r.brackets.matched == 9);
  CHECK(r.f1() == doctest::Approx(90.0).epsilon(1e-12));
  CHECK(r.ExactMatch() == 0.0);
  CHECK(r.per_label.at("NP").matched == 2);
  CHECK(r.per_label.at("PP").predicted == 2);
}

TEST_CASE("discontinuous brackets match only on the full index set") {
  const std::vector<ConstTree> gold = {ParseDiscBracket("(VROOT (VP (V 0=a) (V 2=c)) (N 1=b) (N 3=d))")};
  const std::vector<ConstTree> pred = {ParseDiscBracket("(VROOT (VP (V 0=a) (N 1=b) (V 2=c)) (N 3=d))")};
  const auto r = Evaluate(gold, pred, {});
  CHECK(r.brackets.matched == 0);
  CHECK(r.f1() == 0.0);
}

TEST_CASE("exact match") {
  const auto a = ParseDiscBracket("(VROOT (S (NP 0=a) (VP 1=b)))");
  const auto b = ParseDiscBracket("(VROOT (S (NP 0=a 1=b)))");
  const std::vector<ConstTree> gold = {a, a};
  const std::vector<ConstTree> pred = {a, b};
  CHECK(Evaluate(gold, pred, {}).ExactMatch() == 50.0);

  std::mt19937_64 rng(62);
  for (int k = 0; k < 200; ++k) {
    const auto g = testing::RandomDiscTree(rng);
    const std::vector<ConstTree> gs = {g};
    const std::vector<ConstTree> ps = {Perturb(g, rng)};
    const auto r = Evaluate(gs, ps, {});
    if (r.ExactMatch() == 100.0) REQUIRE(r.f1() == 100.0);
  }
}

TEST_CASE("UAS by head percolation") {
  HeadTable heads;
  heads.rules["S"] = {{"V", Direction::kLeftToRight}};
  heads.rules["NP"] = {{"N", Direction::kLeftToRight}};
  const auto gold = ParseDiscBracket("(VROOT (S (NP (D 0=der) (N 1=Hund)) (V 2=bellt) (ADV 3=laut)))");
  const auto pred = ParseDiscBracket("(VROOT (S (NP (D 0=der) (N 1=Hund) (ADV 3=laut)) (V 2=bellt)))");
  CHECK(PercolatedGovernors(gold, heads, {}) == std::vector<int>{1, 2, -1, 2});
  CHECK(PercolatedGovernors(pred, heads, {}) == std::vector<int>{1, 2, -1, 1});
  const std::vector<ConstTree> g = {gold};
  const std::vector<ConstTree> p = {pred};
  CHECK(Evaluate(g, p, {}, &heads).Uas() == 75.0);

  const std::vector<ConstTree> single = {ParseDiscBracket("(VROOT (N 0=ja))")};
  CHECK(Evaluate(single, single, {}, &heads).Uas() == 100.0);
}

TEST_CASE("random pairs: brute-force bracket oracle, symmetry, per-label sums") {
  std::mt19937_64 rng(63);
  for (int k = 0; k < 300; ++k) {
    const auto g = testing::RandomDiscTree(rng);
    const auto p = Perturb(g, rng);
    const EvalConfig config;
    const auto gb = Brackets(g, config);
    const auto pb = Brackets(p, config);
    std::map<std::string, BracketCounts> labels;
    const auto c = CompareBrackets(gb, pb, &labels);
    REQUIRE(c.matched == BruteMatched(gb, pb));
    REQUIRE(c.gold == static_cast<long>(g.nodes.size()) - 1);

    const auto swapped = CompareBrackets(pb, gb);
    REQUIRE(swapped.Precision() == c.Recall());
    REQUIRE(swapped.Recall() == c.Precision());
    REQUIRE(swapped.F1() == doctest::Approx(c.F1()).epsilon(1e-12));

    BracketCounts sum;
    for (const auto& [label, counts] : labels) sum.Add(counts);
    REQUIRE(sum.gold == c.gold);
    REQUIRE(sum.predicted == c.predicted);
    REQUIRE(sum.matched == c.matched);
  }
}

TEST_CASE("filtering") {
  TagClassification tags;
  tags.Set("$.", TagClass::kPunctuation);
  const auto t = ParseDiscBracket("(VROOT (S (NP (N 0=a)) (V 1=b)) (P ($. 2=.)) ($. 3=.))");
  SUBCASE("punctuation dropped and emptied brackets removed") {
    EvalConfig c;
    c.tags = tags;
    c.drop_punctuation = true;
    const auto b = Brackets(t, c);
    REQUIRE(b.size() == 2);
    CHECK(b[0] == Bracket{"NP", {0}});
    CHECK(b[1] == Bracket{"S", {0, 1}});
    c.drop_punctuation = false;
    CHECK(Brackets(t, c).size() == 3);
    c.exclude_root = false;
    CHECK(Brackets(t, c).size() == 4);
  }
  SUBCASE("length cutoff") {
    std::mt19937_64 rng(64);
    std::vector<ConstTree> bank;
    for (int k = 0; k < 60; ++k) bank.push_back(testing::RandomDiscTree(rng, {.max_tokens = 20}));
    EvalConfig c;
    c.max_length = 10;
    const auto r = Evaluate(bank, bank, c);
    long longer = std::count_if(bank.begin(), bank.end(), [](const ConstTree& x) { return x.size() > 10; });
    CHECK(r.skipped == longer);
    CHECK(r.sentences == 60 - longer);
  }
  SUBCASE("no cutoff and punctuation kept equals the plain computation") {
    std::mt19937_64 rng(65);
    std::vector<ConstTree> gold, pred;
    for (int k = 0; k < 50; ++k) {
      gold.push_back(testing::RandomDiscTree(rng));
      pred.push_back(Perturb(gold.back(), rng));
    }
    EvalConfig c;
    c.tags = tags;
    const auto r = Evaluate(gold, pred, c);
    BracketCounts plain;
    for (std::size_t s = 0; s < gold.size(); ++s) {
      std::vector<Bracket> gb, pb;
      for (int k = 0; k < static_cast<int>(gold[s].nodes.size()); ++k) {
        if (k != gold[s].root) gb.emplace_back(gold[s].nodes[k].label, gold[s].nodes[k].yield);
      }
      for (int k = 0; k < static_cast<int>(pred[s].nodes.size()); ++k) {
        if (k != pred[s].root) pb.emplace_back(pred[s].nodes[k].label, pred[s].nodes[k].yield);
      }
      plain.gold += static_cast<long>(gb.size());
      plain.predicted += static_cast<long>(pb.size());
      plain.matched += BruteMatched(gb, pb);
    }
    CHECK(r.brackets.gold == plain.gold);
    CHECK(r.brackets.predicted == plain.predicted);
    CHECK(r.brackets.matched == plain.matched);
  }
}

TEST_CASE("tokenization mismatches are errors") {
  const std::vector<ConstTree> a = {ParseDiscBracket("(VROOT (N 0=a) (N 1=b))")};
  const std::vector<ConstTree> b = {ParseDiscBracket("(VROOT (N 0=a) (N 1=c))")};
  const std::vector<ConstTree> c = {ParseDiscBracket("(VROOT (N 0=a))")};
  CHECK_THROWS_AS(Evaluate(a, b, {}), EvalError);
  CHECK_THROWS_AS(Evaluate(a, c, {}), EvalError);
  CHECK_THROWS_AS(Evaluate(a, {}, {}), EvalError);
}

TEST_CASE("empty bracket sets and report text") {
  BracketCounts none;
  CHECK(none.Precision() == 100.0);
  CHECK(none.Recall() == 100.0);
  BracketCounts missing{3, 0, 0};
  CHECK(missing.Precision() == 0.0);
  CHECK(missing.F1() == 0.0);

  const std::vector<ConstTree> bank = {ParseDiscBracket("(VROOT (NP (N 0=a)) (VP (V 1=b)))")};
  const EvalConfig config;
  const auto text = FormatReport(Evaluate(bank, bank, config), config);
  CHECK(text.find("f1=100.0000") != std::string::npos);
  CHECK(text.find("f1.VP=100.0000") != std::string::npos);
  CHECK(text.find("ex=100.0000") != std::string::npos);
}
