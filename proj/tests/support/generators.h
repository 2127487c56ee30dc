#ifndef EASYFIRST_TESTS_GENERATORS_H_
#define EASYFIRST_TESTS_GENERATORS_H_

#include <random>
#include <string>
#include <vector>

#include "easyfirst/headrules.h"
#include "easyfirst/tree.h"

namespace easyfirst::testing {

struct RandomTreeOptions {
  int min_tokens = 2;
  int max_tokens = 12;
  int max_block_degree = 3;
  double unary_rate = 0.15;
  bool edges = false;        // random function labels on edges
  bool lemmas = false;       // random lemma/morph fields
  bool punctuation = true;   // some tokens tagged "$."
};

// Random valid tree with a VROOT root of two or more children, at most two
// stacked unary nodes and every node's block degree within the bound.
ConstTree RandomDiscTree(std::mt19937_64& rng, const RandomTreeOptions& options = {});

// German-like toy language: V2 clauses with auxiliary + participle whose
// object may be topicalized, which splits the VP around the finite verb.
struct ToyGrammar {
  ConstTree Sample(std::mt19937_64& rng) const;
  std::vector<ConstTree> Sample(std::mt19937_64& rng, int count) const;
  static HeadTable Heads();
  static TagClassification Tags();
};

// Corpus for head induction generated from a known head table: trees over
// six phrase labels whose dependencies are the planted heads' percolation.
struct PlantedCorpus {
  HeadTable table;
  AlignedCorpus corpus;
};
PlantedCorpus MakePlantedCorpus(std::mt19937_64& rng, int sentences);

// Independent head percolation with the planted semantics: first rule
// entry that matches, scanned in its own direction.
int PlantedHeadChild(const HeadTable& table, const ConstTree& tree, int node);

// Token sequence of random length drawn from the toy vocabulary.
std::vector<Token> RandomToySentence(std::mt19937_64& rng, int length);

}  // namespace easyfirst::testing

#endif  // EASYFIRST_TESTS_GENERATORS_H_
