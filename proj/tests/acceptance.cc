// Acceptance suite: one PASS/FAIL line per criterion; exit status 1 if any
// criterion fails that was not listed with --known-failure N.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <fmt/format.h>

#include "easyfirst/bigram_lm.h"
#include "easyfirst/engine.h"
#include "easyfirst/eval.h"
#include "easyfirst/headrules.h"
#include "easyfirst/learner.h"
#include "easyfirst/treebank_io.h"
#include "support/generators.h"

using namespace easyfirst;
namespace ts = easyfirst::testing;

namespace {

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

int failures = 0;
std::set<int> failed;

void Report(int id, std::string_view name, bool pass, const std::string& detail) {
  if (!pass) {
    ++failures;
    failed.insert(id);
  }
  fmt::print("{} {:>2} {}: {}\n", pass ? "PASS" : "FAIL", id, name, detail);
  std::fflush(stdout);
}

// ---------------------------------------------------------------- 1

void OracleCompleteness() {
  constexpr int kTrees = 500;
  const auto start = Clock::now();
  std::mt19937_64 rng(1001);
  std::mt19937_64 pick(1002);
  const auto choose = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(pick); };
  int ok = 0;
  int max_degree = 0;
  for (int k = 0; k < kTrees; ++k) {
    const auto gold = ts::RandomDiscTree(rng, {.max_tokens = 12, .max_block_degree = 3});
    for (const auto& n : gold.nodes) max_degree = std::max(max_degree, BlockDegree(n.yield));
    const std::vector<ConstTree> bank = {gold};
    ParserModel m;
    m.grammar = Grammar::FromTreebank(bank);
    try {
      ok += StructurallyEqual(ReplayGold(gold, m, choose), gold);
    } catch (const std::exception&) {
    }
  }
  const double secs = Seconds(start);
  Report(1, "oracle completeness", ok == kTrees && secs < 10.0,
         fmt::format("{}/{} trees reconstructed (max block degree {}), {:.2f} s (limit 10 s)", ok, kTrees,
                     max_degree, secs));
}

// ------------------------------------------------------------- 2 and 3

struct ToySplit {
  std::vector<ConstTree> train;
  std::vector<ConstTree> heldout;
};

ToySplit MakeToySplit(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const ts::ToyGrammar g;
  return {g.Sample(rng, 200), g.Sample(rng, 50)};
}

double F1On(const ParserModel& m, std::span<const ConstTree> gold) {
  std::vector<ConstTree> pred;
  pred.reserve(gold.size());
  for (const auto& t : gold) pred.push_back(Parse(m, t.tokens));
  EvalConfig config;
  config.tags = m.tags;
  return Evaluate(gold, pred, config).f1();
}

ParserModel TrainToy(const ToySplit& split, double lambda_numerator, std::uint64_t seed) {
  ParserModel m;
  m.heads = ts::ToyGrammar::Heads();
  m.tags = ts::ToyGrammar::Tags();
  Train(split.train, m, {.epochs = 15, .seed = seed, .lambda_numerator = lambda_numerator});
  return m;
}

ParserModel Trainability() {
  const auto start = Clock::now();
  const ToySplit split = MakeToySplit(2024);
  ParserModel m = TrainToy(split, 0.001, 42);
  const double train_f1 = F1On(m, split.train);
  const double heldout_f1 = F1On(m, split.heldout);
  const double secs = Seconds(start);
  int discontinuous = 0;
  for (const auto& t : split.train) {
    discontinuous += std::any_of(t.nodes.begin(), t.nodes.end(), [](const Node& n) { return BlockDegree(n.yield) > 1; });
  }
  Report(2, "trainability", train_f1 >= 99.0 && heldout_f1 >= 90.0 && secs < 60.0,
         fmt::format("train F1 {:.2f} (>= 99), held-out F1 {:.2f} (>= 90), {} of 200 training trees "
                     "discontinuous, {:.1f} s (limit 60 s)",
                     train_f1, heldout_f1, discontinuous, secs));
  return m;
}

void RegularizationDirection() {
  double small_sum = 0;
  double large_sum = 0;
  int seeds_ok = 0;
  std::string per_seed;
  for (const std::uint64_t seed : {11u, 12u, 13u}) {
    const ToySplit split = MakeToySplit(seed);
    const double small = F1On(TrainToy(split, 0.001, seed), split.heldout);
    const double large = F1On(TrainToy(split, 0.1, seed), split.heldout);
    small_sum += small;
    large_sum += large;
    seeds_ok += small >= large;
    per_seed += fmt::format(" seed {}: {:.2f} vs {:.2f};", seed, small, large);
  }
  const double small_mean = small_sum / 3;
  const double large_mean = large_sum / 3;
  Report(3, "regularization direction", small_mean >= large_mean,
         fmt::format("mean held-out F1 lambda=0.001/N {:.2f} >= lambda=0.1/N {:.2f};{} {}/3 seeds individually",
                     small_mean, large_mean, per_seed, seeds_ok));
}

// ---------------------------------------------------------------- 4

// Straight-line evaluation of the update formulas, one coordinate at a time.
template <typename Scalar>
struct ScalarOracle {
  double eta, lambda, delta;
  std::vector<Scalar> w, gs;

  void Apply(int i, double g) {
    const double acc = static_cast<double>(gs[i]) + g * g;
    gs[i] = static_cast<Scalar>(acc);
    const double root = std::sqrt(static_cast<double>(gs[i]) + delta);
    const double z = static_cast<double>(w[i]) - eta * g / root;
    double v = std::abs(z) - eta * lambda / root;
    if (v < 0) v = 0;
    w[i] = static_cast<Scalar>(z > 0 ? v : (z < 0 ? -v : 0.0));
  }
};

void LearnerEquivalence() {
  constexpr int kDims = 5;
  constexpr int kSteps = 20;
  const LearnerParams params{0.1, 0.01, 1.0};
  std::mt19937_64 rng(404);
  std::uniform_int_distribution<int> coord(0, kDims - 1);
  std::uniform_int_distribution<int> count(0, 3);

  BasicWeightStore<double> store(kDims, params);
  WeightStore fstore(kDims, params);
  ScalarOracle<double> oracle{params.eta, params.lambda, params.delta, std::vector<double>(kDims, 0),
                              std::vector<double>(kDims, 0)};
  ScalarOracle<float> foracle{params.eta, params.lambda, params.delta, std::vector<float>(kDims, 0),
                              std::vector<float>(kDims, 0)};
  double max_err = 0;
  double max_ferr = 0;
  for (int step = 0; step < kSteps; ++step) {
    std::vector<std::uint32_t> wrong;
    std::vector<std::uint32_t> right;
    for (int k = count(rng) + 1; k > 0; --k) wrong.push_back(static_cast<std::uint32_t>(coord(rng)));
    for (int k = count(rng) + 1; k > 0; --k) right.push_back(static_cast<std::uint32_t>(coord(rng)));
    store.Update(wrong, right);
    fstore.Update(wrong, right);
    std::vector<int> g(kDims, 0);
    for (const auto i : wrong) ++g[i];
    for (const auto i : right) --g[i];
    for (int i = 0; i < kDims; ++i) {
      if (g[i] == 0) continue;
      oracle.Apply(i, g[i]);
      foracle.Apply(i, g[i]);
    }
    for (int i = 0; i < kDims; ++i) {
      max_err = std::max(max_err, std::abs(store.weights()[i] - oracle.w[i]));
      max_ferr = std::max(max_ferr, std::abs(static_cast<double>(fstore.weights()[i]) - foracle.w[i]));
    }
  }
  Report(4, "learner equivalence", max_err <= 1e-12 && max_ferr <= 1e-12,
         fmt::format("max |w - oracle| over {} steps x {} coords: double store {:.3g}, float store {:.3g} "
                     "(tolerance 1e-12)",
                     kSteps, kDims, max_err, max_ferr));
}

// ---------------------------------------------------------------- 5

using High = boost::multiprecision::cpp_bin_float_50;

High HighPrecisionG2(long o11, long o12, long o21, long o22) {
  const High n = High(o11 + o12 + o21 + o22);
  const High rows[2] = {High(o11 + o12), High(o21 + o22)};
  const High cols[2] = {High(o11 + o21), High(o12 + o22)};
  const long cells[2][2] = {{o11, o12}, {o21, o22}};
  High sum = 0;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      if (cells[i][j] == 0) continue;
      const High o(cells[i][j]);
      sum += o * boost::multiprecision::log(o * n / (rows[i] * cols[j]));
    }
  }
  return 2 * sum;
}

void G2Correctness() {
  std::mt19937_64 rng(505);
  double max_rel = 0;
  for (int k = 0; k < 100; ++k) {
    std::uniform_int_distribution<long> cell(0, k % 2 ? 1000 : 40);
    long o[4];
    for (auto& x : o) x = cell(rng);
    if (k % 10 == 0) o[k / 10 % 4] = 0;  // zero cells
    if (o[0] + o[1] + o[2] + o[3] == 0) o[3] = 1;
    const double got = LogLikelihoodRatio(o[0], o[0] + o[1], o[0] + o[2], o[0] + o[1] + o[2] + o[3]);
    const double want = static_cast<double>(HighPrecisionG2(o[0], o[1], o[2], o[3]));
    const double rel = want == 0 ? std::abs(got) : std::abs(got - want) / std::abs(want);
    max_rel = std::max(max_rel, rel);
  }
  double max_indep = 0;
  for (int k = 0; k < 100; ++k) {
    std::uniform_int_distribution<long> part(1, 50);
    const long r1 = part(rng), r2 = part(rng), c1 = part(rng), c2 = part(rng);
    const long o11 = r1 * c1, o12 = r1 * c2, o21 = r2 * c1, o22 = r2 * c2;
    max_indep = std::max(max_indep, std::abs(LogLikelihoodRatio(o11, o11 + o12, o11 + o21, o11 + o12 + o21 + o22)));
  }
  Report(5, "G2 correctness", max_rel <= 1e-9 && max_indep < 1e-9,
         fmt::format("100 random tables: max relative error {:.3g} (tolerance 1e-9); 100 independence tables: "
                     "max |G2| {:.3g} (tolerance 1e-9)",
                     max_rel, max_indep));
}

// ---------------------------------------------------------------- 6

void BucketLaws() {
  std::mt19937_64 rng(606);
  int ok_lists = 0;
  int ok_tied = 0;
  constexpr int kLists = 1000;
  for (int k = 0; k < 2 * kLists; ++k) {
    const bool tied = k >= kLists;
    const int size = std::uniform_int_distribution<int>(1, 80)(rng);
    BigramAssocModel model;
    std::vector<double> scores;
    std::set<double> used;
    while (static_cast<int>(scores.size()) < size) {
      const double s = tied ? std::uniform_int_distribution<int>(1, 6)(rng)
                            : std::uniform_real_distribution<double>(1e-6, 100.0)(rng);
      if (!tied && !used.insert(s).second) continue;
      scores.push_back(s);
    }
    for (int i = 0; i < size; ++i) model.SetScore("h", "d" + std::to_string(i), scores[i]);
    model.Bucketize();
    std::vector<AssocBucket> b(size);
    long hi = 0, mi = 0, nz = 0;
    for (int i = 0; i < size; ++i) {
      b[i] = model.Query("h", "d" + std::to_string(i));
      hi += b[i] == AssocBucket::kHi;
      mi += b[i] >= AssocBucket::kMi;
      nz += b[i] >= AssocBucket::kLo;
    }
    bool monotone = true;
    for (int i = 0; i < size; ++i) {
      for (int j = 0; j < size; ++j) {
        if (scores[i] >= scores[j] && b[i] < b[j]) monotone = false;
      }
    }
    const bool absent_no = model.Query("h", "absent") == AssocBucket::kNo && model.Query("x", "d0") == AssocBucket::kNo;
    const long k_hi = (size + 9) / 10;  // ceil(0.1 k), integer form
    const long k_mi = (3L * size + 9) / 10;
    const bool sizes = tied ? (hi >= k_hi && mi >= k_mi && nz == size) : (hi == k_hi && mi == k_mi && nz == size);
    const bool ok = monotone && absent_no && sizes && hi <= mi && mi <= nz;
    (tied ? ok_tied : ok_lists) += ok;
  }
  Report(6, "bucket laws", ok_lists == kLists && ok_tied == kLists,
         fmt::format("{}/{} distinct-score lists with |HI|=ceil(0.1k), |MI|=ceil(0.3k), |nonzero|=k and exact "
                     "monotonicity; {}/{} tied lists monotone with ties sharing the better bucket",
                     ok_lists, kLists, ok_tied, kLists));
}

// ---------------------------------------------------------------- 7

void HeadInductionRecovery() {
  std::mt19937_64 rng(707);
  const auto planted = ts::MakePlantedCorpus(rng, 500);
  TagClassification tags;
  tags.Set("$.", TagClass::kPunctuation);
  const HeadTable induced = InduceHeadTable(planted.corpus, tags);
  long phrases = 0;
  long agree = 0;
  std::set<std::string> labels;
  for (const auto& pair : planted.corpus.sentences) {
    const auto& tree = pair.tree;
    for (int k = 0; k < static_cast<int>(tree.nodes.size()); ++k) {
      const auto& node = tree.nodes[k];
      labels.insert(node.label);
      std::vector<std::string> child_labels;
      for (const Ref c : node.children) child_labels.push_back(tree.label(c));
      const auto h = induced.FindHead(node.label, child_labels);
      ++phrases;
      agree += h && *h == ts::PlantedHeadChild(planted.table, tree, k);
    }
  }
  Report(7, "head induction recovery", agree == phrases && labels.size() == 6,
         fmt::format("{}/{} phrases over {} labels in 500 sentences get the planted head child", agree, phrases,
                     labels.size()));
}

// ---------------------------------------------------------------- 8

void LocalityAndComplexity(const ParserModel& trained) {
  // Locality: incremental refresh against full rescoring on random states.
  std::mt19937_64 rng(808);
  long positions = 0;
  long mismatches = 0;
  for (int k = 0; k < 100; ++k) {
    const auto t = ts::RandomDiscTree(rng, {.min_tokens = 6, .max_tokens = 12});
    const std::vector<ConstTree> bank = {t};
    ParserModel m;
    m.features.dim_bits = 14;
    m.grammar = Grammar::FromTreebank(bank);
    m.weights = WeightStore(m.features.dims());
    std::normal_distribution<float> normal(0, 1);
    for (auto& w : m.weights.weights()) w = normal(rng);
    const Transitions tr(m);
    ScoreCache cache(m, tr);
    auto s = tr.Initial(t.tokens);
    cache.Reset(s);
    while (s.size() > 1) {
      const auto acts = tr.Applicable(s);
      const auto a = acts[std::uniform_int_distribution<std::size_t>(0, acts.size() - 1)(rng)];
      // Snapshot of positions outside [j-2, j+2], keyed by the root items
      // they look at; those must be reused verbatim.
      tr.Apply(s, a, t.tokens);
      cache.Refresh(s, a);
      ScoreCache fresh(m, tr);
      fresh.Reset(s);
      for (int i = 0; i < s.size(); ++i) {
        if (i >= a.position - 2 && i <= a.position + 2) continue;
        ++positions;
        const auto& x = cache.At(i);
        const auto& y = fresh.At(i);
        bool same = x.size() == y.size();
        for (std::size_t j = 0; same && j < x.size(); ++j) {
          same = x[j].action == y[j].action && x[j].score == y[j].score;
        }
        mismatches += !same;
      }
    }
  }

  // Complexity: parse time of the trained toy model over random sentences.
  const std::vector<int> lengths = {10, 20, 40, 80};
  std::vector<double> times;
  for (const int n : lengths) {
    std::mt19937_64 srng(8080 + n);
    std::vector<std::vector<Token>> sentences;
    for (int k = 0; k < 40; ++k) sentences.push_back(ts::RandomToySentence(srng, n));
    double best = 1e30;
    for (int rep = 0; rep < 3; ++rep) {
      const auto start = Clock::now();
      for (const auto& s : sentences) Parse(trained, s);
      best = std::min(best, Seconds(start));
    }
    times.push_back(best / static_cast<double>(sentences.size()));
  }
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    mx += std::log(lengths[i]);
    my += std::log(times[i]);
  }
  mx /= lengths.size();
  my /= lengths.size();
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    sxy += (std::log(lengths[i]) - mx) * (std::log(times[i]) - my);
    sxx += (std::log(lengths[i]) - mx) * (std::log(lengths[i]) - mx);
  }
  const double exponent = sxy / sxx;
  Report(8, "score locality / complexity", mismatches == 0 && exponent < 1.5,
         fmt::format("{} cached positions outside [j-2, j+2] checked, {} differ from rescoring; per-sentence "
                     "parse ms at n=10/20/40/80: {:.3f}/{:.3f}/{:.3f}/{:.3f}, fitted exponent {:.3f} (< 1.5)",
                     positions, mismatches, times[0] * 1e3, times[1] * 1e3, times[2] * 1e3, times[3] * 1e3,
                     exponent));
}

// ---------------------------------------------------------------- 9

// Brute force: brackets as strings, multisets as count maps, heads by
// scanning rule entries, governors by sorting ancestors by yield size.
struct BruteCounts {
  long gold = 0, pred = 0, match = 0, exact = 0, sentences = 0, uas_ok = 0, uas_all = 0;
};

std::map<std::string, long> BruteBrackets(const ConstTree& t) {
  std::map<std::string, long> out;
  for (int k = 0; k < static_cast<int>(t.nodes.size()); ++k) {
    if (k == t.root) continue;
    std::set<int> y;
    for (const int i : t.yield(Ref::Node(k))) y.insert(i);
    std::string key = t.nodes[k].label + ":";
    for (const int i : y) key += std::to_string(i) + ",";
    ++out[key];
  }
  return out;
}

int BruteHeadToken(const ConstTree& t, int k, const HeadTable& heads, const TagClassification& tags) {
  const auto& node = t.nodes[k];
  const int n = static_cast<int>(node.children.size());
  int chosen = -1;
  const auto rule = heads.rules.find(node.label);
  if (rule != heads.rules.end()) {
    for (const auto& e : rule->second) {
      for (int j = 0; j < n && chosen < 0; ++j) {
        const int c = e.direction == Direction::kLeftToRight ? j : n - 1 - j;
        if (t.label(node.children[c]) == e.child_label) chosen = c;
      }
      if (chosen >= 0) break;
    }
  }
  if (chosen < 0) {
    for (int j = 0; j < n && chosen < 0; ++j) {
      const int c = heads.fallback == Direction::kLeftToRight ? j : n - 1 - j;
      const Ref r = node.children[c];
      if (!(r.is_terminal() && tags.IsPunctuation(t.tokens[r.index].pos))) chosen = c;
    }
  }
  if (chosen < 0) chosen = 0;
  const Ref r = node.children[chosen];
  return r.is_terminal() ? r.index : BruteHeadToken(t, r.index, heads, tags);
}

std::vector<int> BruteGovernors(const ConstTree& t, const HeadTable& heads, const TagClassification& tags) {
  std::vector<int> gov(t.tokens.size(), -1);
  for (int tok = 0; tok < t.size(); ++tok) {
    std::vector<std::pair<std::size_t, int>> containing;
    for (int k = 0; k < static_cast<int>(t.nodes.size()); ++k) {
      const auto y = t.yield(Ref::Node(k));
      if (std::find(y.begin(), y.end(), tok) != y.end()) containing.emplace_back(y.size(), k);
    }
    std::sort(containing.begin(), containing.end());
    for (const auto& [size, k] : containing) {
      const int h = BruteHeadToken(t, k, heads, tags);
      if (h != tok) {
        gov[tok] = h;
        break;
      }
    }
  }
  return gov;
}

void MetricOracle() {
  std::mt19937_64 rng(909);
  HeadTable heads;
  heads.rules["S"] = {{"VP", Direction::kLeftToRight}, {"VV", Direction::kLeftToRight}};
  heads.rules["VP"] = {{"VV", Direction::kRightToLeft}, {"NP", Direction::kLeftToRight}};
  heads.rules["NP"] = {{"NN", Direction::kRightToLeft}, {"ART", Direction::kLeftToRight}};
  heads.rules["PP"] = {{"APPR", Direction::kLeftToRight}};
  heads.fallback = Direction::kRightToLeft;
  TagClassification tags;
  tags.Set("$.", TagClass::kPunctuation);

  std::vector<ConstTree> gold;
  std::vector<ConstTree> pred;
  for (int k = 0; k < 50; ++k) {
    ConstTree g = ts::RandomDiscTree(rng);
    ConstTree p;
    switch (k % 3) {
      case 0:  // identical
        p = g;
        break;
      case 1: {  // relabel some nodes
        p = g;
        for (auto& n : p.nodes) {
          if (std::bernoulli_distribution(0.3)(rng)) n.label = n.label == "NP" ? "PP" : "NP";
        }
        break;
      }
      default: {  // unrelated structure over the same tokens
        p = ts::RandomDiscTree(rng, {.min_tokens = g.size(), .max_tokens = g.size()});
        p.tokens = g.tokens;
        break;
      }
    }
    gold.push_back(std::move(g));
    pred.push_back(std::move(p));
  }

  EvalConfig config;
  config.tags = tags;
  const EvalReport r = Evaluate(gold, pred, config, &heads);

  BruteCounts b;
  for (std::size_t s = 0; s < gold.size(); ++s) {
    const auto gb = BruteBrackets(gold[s]);
    const auto pb = BruteBrackets(pred[s]);
    for (const auto& [key, c] : gb) b.gold += c;
    for (const auto& [key, c] : pb) b.pred += c;
    for (const auto& [key, c] : gb) {
      const auto it = pb.find(key);
      if (it != pb.end()) b.match += std::min(c, it->second);
    }
    b.exact += gb == pb;
    ++b.sentences;
    const auto gg = BruteGovernors(gold[s], heads, tags);
    const auto pg = BruteGovernors(pred[s], heads, tags);
    for (std::size_t i = 0; i < gg.size(); ++i) {
      ++b.uas_all;
      b.uas_ok += gg[i] == pg[i];
    }
  }
  const double p = b.pred ? 100.0 * b.match / b.pred : 100.0;
  const double rc = b.gold ? 100.0 * b.match / b.gold : 100.0;
  const double f1 = p + rc > 0 ? 2 * p * rc / (p + rc) : 0.0;
  const double ex = 100.0 * b.exact / b.sentences;
  const double uas = 100.0 * b.uas_ok / b.uas_all;
  const bool counts = r.brackets.gold == b.gold && r.brackets.predicted == b.pred && r.brackets.matched == b.match &&
                      r.exact == b.exact && r.uas_correct == b.uas_ok && r.uas_total == b.uas_all;
  const bool values = r.f1() == f1 && r.ExactMatch() == ex && r.Uas() == uas;
  Report(9, "metric oracle", counts && values,
         fmt::format("50 tree pairs: F1 {:.4f}/{:.4f}, EX {:.2f}/{:.2f}, UAS {:.4f}/{:.4f} (module/brute force, "
                     "exact equality), matched {} of {} gold {} predicted",
                     r.f1(), f1, r.ExactMatch(), ex, r.Uas(), uas, r.brackets.matched, r.brackets.gold,
                     r.brackets.predicted));
}

// ---------------------------------------------------------------- 10

void FormatRoundTrips() {
  std::mt19937_64 rng(1010);
  int export_ok = 0;
  int bracket_ok = 0;
  for (int k = 0; k < 100; ++k) {
    const auto rich = ts::RandomDiscTree(rng, {.edges = true, .lemmas = true});
    std::stringstream ex;
    WriteExport(ex, std::span(&rich, 1));
    const auto back = ReadExport(ex, ReadOptions{true});
    export_ok += back.size() == 1 && StructurallyEqual(back[0], rich);

    const auto plain = ts::RandomDiscTree(rng);
    std::stringstream db;
    WriteDiscBracket(db, std::span(&plain, 1));
    const auto again = ReadDiscBracket(db, ReadOptions{true});
    bracket_ok += again.size() == 1 && StructurallyEqual(again[0], plain);
  }
  Report(10, "format round-trips", export_ok == 100 && bracket_ok == 100,
         fmt::format("export {}/100, discbracket {}/100 random discontinuous trees re-read structurally equal",
                     export_ok, bracket_ok));
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> known;
  for (int i = 1; i + 1 < argc; i += 2) {
    if (std::string_view(argv[i]) == "--known-failure") known.insert(std::atoi(argv[i + 1]));
  }
  OracleCompleteness();
  const ParserModel trained = Trainability();
  RegularizationDirection();
  LearnerEquivalence();
  G2Correctness();
  BucketLaws();
  HeadInductionRecovery();
  LocalityAndComplexity(trained);
  MetricOracle();
  FormatRoundTrips();
  fmt::print("{} of 10 criteria passed\n", 10 - failures);
  int unexpected = 0;
  for (const int id : failed) {
    if (known.count(id)) {
      fmt::print("criterion {} failed as recorded (--known-failure)\n", id);
    } else {
      ++unexpected;
    }
  }
  return unexpected == 0 ? 0 : 1;
}
