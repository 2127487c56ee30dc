#include "easyfirst/cli.h"

#include <filesystem>
#include <map>
#include <memory>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "easyfirst/bigram_lm.h"
#include "easyfirst/cluster_lex.h"
#include "easyfirst/engine.h"
#include "easyfirst/eval.h"
#include "easyfirst/headrules.h"
#include "easyfirst/log.h"
#include "easyfirst/treebank_io.h"
#include "easyfirst/util.h"

namespace easyfirst {
namespace {

namespace fs = std::filesystem;

struct InduceArgs {
  std::string treebank;
  std::string conll;
  std::string heads_out;
  std::string tags_out;
  std::string upos;
};

struct TrainArgs {
  std::string treebank;
  std::string heads;
  std::string tags;
  std::string model;
  std::string dev;
  std::string clusters;
  std::string bigram;
  std::vector<std::string> cluster_features;
  int epochs = 15;
  std::uint64_t seed = 42;
  std::string l1 = "0.001/N";
  double eta = 0.1;
  double delta = 1.0;
  int dim_bits = 24;
  bool no_left_pair = false;
  bool literal_ww = false;
  bool lemma = false;
  bool continue_after_error = false;
  bool accumulators = false;
  int monitor = 100;
};

struct ParseArgs {
  std::string model;
  std::string input;
  std::string output;
  std::string input_format = "auto";
  std::string output_format = "export";
  std::string clusters;
  std::string bigram;
};

struct EvalArgs {
  std::string gold;
  std::string pred;
  int maxlen = 0;
  bool drop_punct = false;
  bool include_root = false;
  std::string tags;
  std::string heads;
  std::vector<std::string> labels = {"NP", "PP", "VP"};
};

struct BigramArgs {
  std::string conll;
  std::string out;
  std::string score = "ll";
  long min_count = 2;
};

struct ClusterArgs {
  std::string clusters;
  std::string treebank;
};

HeadTable ReadHeadTableFile(const fs::path& path) {
  auto in = OpenInput(path);
  return HeadTable::Read(in);
}

TagClassification ReadTagsFile(const fs::path& path) {
  auto in = OpenInput(path);
  return TagClassification::Read(in);
}

std::shared_ptr<const ClusterLexicon> LoadClusters(const fs::path& path, bool strict) {
  auto in = OpenInput(path);
  ClusterLexicon::LoadStats stats;
  auto lex = std::make_shared<ClusterLexicon>(ClusterLexicon::Load(in, strict, &stats));
  spdlog::info("clusters {}: {} entries, {} malformed, {} duplicates", path.string(), stats.entries,
               stats.malformed, stats.duplicates);
  return lex;
}

std::shared_ptr<const BigramAssocModel> LoadBigram(const fs::path& path) {
  auto in = OpenInput(path);
  auto model = BigramAssocModel::Read(in);
  if (!model.bucketized()) model.Bucketize();
  return std::make_shared<BigramAssocModel>(std::move(model));
}

std::string Absolute(const std::string& path) {
  return path.empty() ? path : fs::absolute(path).lexically_normal().string();
}

// "c/N" -> lambda = c / sentences, "c/D" -> c / dims, plain number -> lambda.
struct L1Setting {
  double value = 0;
  char per = 0;  // 'N', 'D' or 0
};

L1Setting ParseL1(const std::string& text) {
  L1Setting s;
  std::string number = text;
  if (text.size() > 2 && text[text.size() - 2] == '/') {
    s.per = text.back();
    number = text.substr(0, text.size() - 2);
    if (s.per != 'N' && s.per != 'D') throw std::invalid_argument("--l1 suffix must be /N or /D: " + text);
  }
  std::size_t used = 0;
  try {
    s.value = std::stod(number, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != number.size() || s.value < 0) throw std::invalid_argument("bad --l1 value: " + text);
  return s;
}

void SetupFeatures(FeatureConfig& f, const std::vector<std::string>& kinds) {
  for (const auto& k : kinds) {
    if (k == "full") {
      f.cluster_full = true;
    } else if (k == "6") {
      f.cluster_6 = true;
    } else if (k == "4") {
      f.cluster_4 = true;
    } else {
      throw std::invalid_argument("unknown cluster feature kind '" + k + "' (full, 6, 4)");
    }
  }
}

std::vector<ConstTree> StripForParsing(std::vector<ConstTree> trees) {
  for (auto& t : trees) {
    for (auto& tok : t.tokens) tok.edge = "--";
  }
  return trees;
}

// Sentences to parse, as token sequences with ids.
std::vector<std::pair<std::string, std::vector<Token>>> ReadParseInput(const ParseArgs& a) {
  std::vector<std::pair<std::string, std::vector<Token>>> out;
  if (a.input_format == "conll") {
    int id = 0;
    for (auto& s : ReadConllFile(a.input, ReadOptions{true})) {
      for (auto& tok : s.tokens) tok.edge = "--";
      out.emplace_back(std::to_string(++id), std::move(s.tokens));
    }
    return out;
  }
  if (a.input_format != "auto" && a.input_format != "export" && a.input_format != "discbracket") {
    throw std::invalid_argument("unknown input format " + a.input_format);
  }
  for (auto& t : StripForParsing(ReadTreebankFile(a.input, ReadOptions{true}))) {
    out.emplace_back(t.id, std::move(t.tokens));
  }
  return out;
}

TreebankFormat ParseFormatName(const std::string& name) {
  if (name == "export") return TreebankFormat::kExport;
  if (name == "discbracket") return TreebankFormat::kDiscBracket;
  throw std::invalid_argument("unknown treebank format " + name);
}

std::string ConfigDigest(const CLI::App& sub) { return HexDigest(sub.config_to_str(true, false)); }

void EchoConfig(const CLI::App& sub) {
  spdlog::info("{} effective config (digest {}):\n{}", sub.get_name(), ConfigDigest(sub),
               sub.config_to_str(true, false));
}

int InduceHeads(const InduceArgs& a, bool strict, const CLI::App& sub, std::ostream& out) {
  ReadOptions options{strict};
  auto trees = ReadTreebankFile(a.treebank, options);
  auto deps = ReadConllFile(a.conll, options);
  TagClassification tags;
  if (!a.upos.empty()) {
    auto in = OpenInput(a.upos);
    const auto map = ReadUniversalMap(in);
    std::map<std::string, long> counts;
    for (const auto& t : trees) {
      for (const auto& tok : t.tokens) ++counts[tok.pos];
    }
    tags = ClassifyTagsUniversal(counts, map);
  } else {
    tags = ClassifyTagsHeuristic(CollectTagStats(trees));
  }
  const AlignedCorpus corpus = Align(std::move(trees), std::move(deps));
  InductionStats stats;
  const HeadTable table = InduceHeadTable(corpus, tags, &stats);

  const std::string header = fmt::format("%% easyfirst induce-heads config {}\n", ConfigDigest(sub));
  auto heads_out = OpenOutput(a.heads_out);
  heads_out << header;
  table.Write(heads_out);
  auto tags_out = OpenOutput(a.tags_out);
  tags_out << header;
  tags.Write(tags_out);
  if (!heads_out || !tags_out) throw IoError("error writing head table or tag classification");

  long punct = 0;
  long closed = 0;
  for (const auto& [tag, c] : tags.classes()) {
    punct += c == TagClass::kPunctuation;
    closed += c == TagClass::kClosedClass;
  }
  out << fmt::format("sentences\t{}\nparent_labels\t{}\nphrases\t{}\nconflicts\t{}\n",
                     corpus.sentences.size(), stats.parent_labels, stats.phrases, stats.conflicts);
  out << fmt::format("punctuation_tags\t{}\nclosed_class_tags\t{}\n", punct, closed);
  return kExitOk;
}

int TrainCmd(const TrainArgs& a, bool strict, const CLI::App& sub) {
  const ReadOptions options{strict};
  const auto treebank = ReadTreebankFile(a.treebank, options);
  if (treebank.empty()) throw std::invalid_argument("training treebank is empty");
  if (a.epochs < 1) throw std::invalid_argument("--epochs must be positive");
  if (a.dim_bits < 1 || a.dim_bits > 31) throw std::invalid_argument("--dim-bits must be in [1, 31]");

  ParserModel model;
  model.heads = ReadHeadTableFile(a.heads);
  model.tags = a.tags.empty() ? ClassifyTagsHeuristic(CollectTagStats(treebank)) : ReadTagsFile(a.tags);
  model.features.dim_bits = a.dim_bits;
  model.features.left_context_pair = !a.no_left_pair;
  model.features.literal_duplicate_ww = a.literal_ww;
  model.features.lemma_templates = a.lemma;
  SetupFeatures(model.features, a.cluster_features);
  const bool wants_clusters =
      model.features.cluster_full || model.features.cluster_6 || model.features.cluster_4;
  if (wants_clusters && a.clusters.empty()) {
    throw std::invalid_argument("--cluster-features needs --clusters");
  }
  if (!a.clusters.empty()) {
    model.features.clusters = LoadClusters(a.clusters, strict);
    model.clusters_path = Absolute(a.clusters);
  }
  if (!a.bigram.empty()) {
    model.features.bigram = LoadBigram(a.bigram);
    model.features.bigram_kind = std::string(AssocKindName(model.features.bigram->kind()));
    model.bigram_path = Absolute(a.bigram);
  }

  const L1Setting l1 = ParseL1(a.l1);
  LearnerParams params{a.eta, 0.0, a.delta};
  TrainOptions train;
  train.epochs = a.epochs;
  train.seed = a.seed;
  train.early_stop = !a.continue_after_error;
  if (l1.per == 'N') {
    train.lambda_numerator = l1.value;
  } else {
    train.lambda_numerator = -1;
    params.lambda = l1.per == 'D' ? l1.value / static_cast<double>(model.features.dims()) : l1.value;
  }

  std::vector<ConstTree> monitor;
  if (!a.dev.empty()) {
    monitor = ReadTreebankFile(a.dev, options);
  } else {
    const std::size_t k = std::min<std::size_t>(treebank.size(), std::max(a.monitor, 0));
    monitor.assign(treebank.begin(), treebank.begin() + static_cast<long>(k));
  }
  const std::string monitor_name = a.dev.empty() ? "training slice" : "dev";
  EvalConfig eval_config;
  eval_config.tags = model.tags;
  train.on_epoch = [&](int epoch, const ParserModel& m, long updates) {
    if (monitor.empty()) {
      spdlog::info("epoch {}: {} updates", epoch, updates);
      return;
    }
    std::vector<ConstTree> parsed;
    parsed.reserve(monitor.size());
    for (const auto& t : monitor) parsed.push_back(Parse(m, t.tokens));
    const auto report = Evaluate(monitor, parsed, eval_config);
    spdlog::info("epoch {}: {} updates, {} F1 {:.2f}", epoch, updates, monitor_name, report.f1());
  };

  const auto stats = Train(treebank, model, train, params);
  spdlog::info("trained: {} updates over {} decisions; {} non-zero weights", stats.updates, stats.decisions,
               model.weights.NonZeroWeights());
  if (stats.unreachable > 0) {
    spdlog::warn("{} sentence passes ran out of gold actions", stats.unreachable);
  }
  auto out = OpenOutput(a.model);
  model.Save(out, a.accumulators);
  spdlog::info("model {} written to {} (config {})", model.Digest(), a.model, ConfigDigest(sub));
  return kExitOk;
}

int ParseCmd(const ParseArgs& a, const CLI::App& sub) {
  auto in = OpenInput(a.model);
  ParserModel model = ParserModel::Load(in);
  const std::string clusters = a.clusters.empty() ? model.clusters_path : a.clusters;
  const std::string bigram = a.bigram.empty() ? model.bigram_path : a.bigram;
  if (!clusters.empty()) model.features.clusters = LoadClusters(clusters, false);
  if (!bigram.empty()) model.features.bigram = LoadBigram(bigram);
  if (!model.bigram_path.empty() && bigram.empty()) {
    throw std::invalid_argument("model was trained with a bigram model; pass --bigram");
  }

  const auto sentences = ReadParseInput(a);
  std::vector<ConstTree> parsed;
  parsed.reserve(sentences.size());
  long fallbacks = 0;
  for (const auto& [id, tokens] : sentences) {
    ParseStats stats;
    parsed.push_back(Parse(model, tokens, &stats));
    parsed.back().id = id;
    fallbacks += stats.fallback_root;
  }
  if (fallbacks > 0) spdlog::warn("{} sentences ended with the fallback root", fallbacks);
  const std::string header =
      fmt::format("easyfirst parse model {} features {} config {}", model.Digest(),
                  model.features.Digest(), ConfigDigest(sub));
  WriteTreebankFile(a.output, parsed, ParseFormatName(a.output_format), header);
  spdlog::info("parsed {} sentences into {}", parsed.size(), a.output);
  return kExitOk;
}

int EvalCmd(const EvalArgs& a, std::ostream& out) {
  const auto gold = ReadTreebankFile(a.gold, ReadOptions{true});
  const auto pred = ReadTreebankFile(a.pred, ReadOptions{true});
  if (a.maxlen < 0) throw std::invalid_argument("--maxlen must be positive");
  EvalConfig config;
  config.max_length = a.maxlen;
  config.drop_punctuation = a.drop_punct;
  config.exclude_root = !a.include_root;
  config.report_labels = a.labels;
  config.tags = a.tags.empty() ? ClassifyTagsHeuristic(CollectTagStats(gold)) : ReadTagsFile(a.tags);
  std::optional<HeadTable> heads;
  if (!a.heads.empty()) heads = ReadHeadTableFile(a.heads);
  const auto report = Evaluate(gold, pred, config, heads ? &*heads : nullptr);
  out << FormatReport(report, config);
  return kExitOk;
}

int BigramCmd(const BigramArgs& a, const CLI::App& sub) {
  const auto kind = ParseAssocKind(a.score);
  if (!kind) throw std::invalid_argument("--score must be raw, l1 or ll");
  auto in = OpenInput(a.conll);
  const PairCounts counts = CountPairs(in);
  ScoreOptions options;
  options.min_count = a.min_count;
  auto model = BigramAssocModel::Score(counts, *kind, options);
  if (!model.bucketized()) model.Bucketize();
  auto out = OpenOutput(a.out);
  out << "%% easyfirst bigram-build config " << ConfigDigest(sub) << '\n';
  model.Write(out);
  if (!out) throw IoError("error writing " + a.out);
  spdlog::info("{} heads, {} scored pairs from {} pair tokens", model.head_count(), model.pair_count(),
               counts.total);
  return kExitOk;
}

int ClusterCheckCmd(const ClusterArgs& a, std::ostream& out) {
  auto in = OpenInput(a.clusters);
  ClusterLexicon::LoadStats stats;
  const auto lex = ClusterLexicon::Load(in, false, &stats);
  out << fmt::format("entries\t{}\nmalformed\t{}\nduplicates\t{}\n", stats.entries, stats.malformed,
                     stats.duplicates);
  if (!a.treebank.empty()) {
    long tokens = 0;
    long covered = 0;
    std::set<std::string, std::less<>> c6;
    std::set<std::string, std::less<>> c4;
    for (const auto& t : ReadTreebankFile(a.treebank, ReadOptions{true})) {
      for (const auto& tok : t.tokens) {
        ++tokens;
        const auto path = lex.Lookup(tok.form);
        if (path != kUnknownCluster) ++covered;
        c6.emplace(ClusterPrefix(path, 6));
        c4.emplace(ClusterPrefix(path, 4));
      }
    }
    out << fmt::format("tokens\t{}\ncovered\t{}\ncoverage\t{:.2f}\nprefix6_clusters\t{}\nprefix4_clusters\t{}\n",
                       tokens, covered, tokens ? 100.0 * covered / tokens : 0.0, c6.size(), c4.size());
  }
  return kExitOk;
}

}  // namespace

int RunCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  InitLogging();
  CLI::App app{"Easy-first discontinuous constituent parser", "easyfirst"};
  app.set_config("--config", "", "INI/TOML file with option defaults (flags override it)");
  app.require_subcommand(1);
  bool strict = false;
  app.add_flag("--strict", strict, "Fail on the first malformed input record");

  InduceArgs induce;
  auto* s_induce = app.add_subcommand("induce-heads", "Induce a head table from aligned treebank + CoNLL");
  s_induce->add_option("--treebank", induce.treebank, "Constituency treebank (export or discbracket)")->required();
  s_induce->add_option("--conll", induce.conll, "Dependency version of the same sentences")->required();
  s_induce->add_option("--heads-out", induce.heads_out, "Output head table")->required();
  s_induce->add_option("--tags-out", induce.tags_out, "Output tag classification")->required();
  s_induce->add_option("--upos", induce.upos, "Fine-to-universal POS map; enables the mapping path");

  TrainArgs train;
  auto* s_train = app.add_subcommand("train", "Train a parser model");
  s_train->add_option("--treebank", train.treebank, "Training treebank")->required();
  s_train->add_option("--heads", train.heads, "Head table file")->required();
  s_train->add_option("--tags", train.tags, "Tag classification file (default: heuristic)");
  s_train->add_option("--model", train.model, "Output model file")->required();
  s_train->add_option("--dev", train.dev, "Treebank for per-epoch F1 logging");
  s_train->add_option("--monitor", train.monitor, "Training sentences used for per-epoch F1 without --dev")
      ->capture_default_str();
  s_train->add_option("--epochs", train.epochs, "Training epochs")->capture_default_str();
  s_train->add_option("--seed", train.seed, "Shuffle seed")->capture_default_str();
  s_train->add_option("--l1", train.l1, "L1 strength: c/N, c/D or an absolute value")->capture_default_str();
  s_train->add_option("--eta", train.eta, "AdaGrad learning rate")->capture_default_str();
  s_train->add_option("--delta", train.delta, "AdaGrad smoothing term")->capture_default_str();
  s_train->add_option("--dim-bits", train.dim_bits, "log2 of the weight vector size")->capture_default_str();
  s_train->add_option("--clusters", train.clusters, "Brown cluster paths file");
  s_train->add_option("--cluster-features", train.cluster_features, "Cluster templates: full, 6, 4")
      ->delimiter(',');
  s_train->add_option("--bigram", train.bigram, "Bigram association model");
  s_train->add_flag("--no-left-pair", train.no_left_pair, "Drop the (n-1, n0) pair templates");
  s_train->add_flag("--literal-ww", train.literal_ww, "Fourth pair template repeats the word pair");
  s_train->add_flag("--lemma", train.lemma, "Add lemma templates");
  s_train->add_flag("--continue-after-error", train.continue_after_error,
                    "Keep parsing a sentence after an update (gold action applied)");
  s_train->add_flag("--save-accumulators", train.accumulators, "Also store AdaGrad accumulators");

  ParseArgs parse;
  auto* s_parse = app.add_subcommand("parse", "Parse sentences with a trained model");
  s_parse->add_option("--model", parse.model, "Model file")->required();
  s_parse->add_option("--input", parse.input, "Input sentences (treebank or CoNLL)")->required();
  s_parse->add_option("--output", parse.output, "Output treebank")->required();
  s_parse->add_option("--input-format", parse.input_format, "auto, export, discbracket or conll")
      ->capture_default_str();
  s_parse->add_option("--format", parse.output_format, "export or discbracket")->capture_default_str();
  s_parse->add_option("--clusters", parse.clusters, "Override the model's cluster file");
  s_parse->add_option("--bigram", parse.bigram, "Override the model's bigram model");

  EvalArgs eval;
  auto* s_eval = app.add_subcommand("eval", "Score predicted trees against gold");
  s_eval->add_option("--gold", eval.gold, "Gold treebank")->required();
  s_eval->add_option("--pred", eval.pred, "Predicted treebank")->required();
  s_eval->add_option("--maxlen", eval.maxlen, "Skip sentences longer than this (0 = all)")->capture_default_str();
  s_eval->add_flag("--drop-punct", eval.drop_punct, "Remove punctuation terminals from yields");
  s_eval->add_flag("--include-root", eval.include_root, "Count the root bracket");
  s_eval->add_option("--tags", eval.tags, "Tag classification for punctuation (default: heuristic)");
  s_eval->add_option("--heads", eval.heads, "Head table; enables UAS");
  s_eval->add_option("--labels", eval.labels, "Labels with their own F1")->delimiter(',')->capture_default_str();

  BigramArgs bigram;
  auto* s_bigram = app.add_subcommand("bigram-build", "Build a head-dependent association model");
  s_bigram->add_option("--conll", bigram.conll, "Dependency corpus")->required();
  s_bigram->add_option("--out", bigram.out, "Output model")->required();
  s_bigram->add_option("--score", bigram.score, "raw, l1 or ll")->capture_default_str();
  s_bigram->add_option("--min-count", bigram.min_count, "Drop pairs seen fewer times")->capture_default_str();

  ClusterArgs cluster;
  auto* s_cluster = app.add_subcommand("cluster-check", "Validate a cluster file");
  s_cluster->add_option("--clusters", cluster.clusters, "Cluster paths file")->required();
  s_cluster->add_option("--treebank", cluster.treebank, "Report token coverage on this treebank");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (s_induce->parsed()) {
      EchoConfig(*s_induce);
      return InduceHeads(induce, strict, *s_induce, out);
    }
    if (s_train->parsed()) {
      EchoConfig(*s_train);
      return TrainCmd(train, strict, *s_train);
    }
    if (s_parse->parsed()) {
      EchoConfig(*s_parse);
      return ParseCmd(parse, *s_parse);
    }
    if (s_eval->parsed()) {
      EchoConfig(*s_eval);
      return EvalCmd(eval, out);
    }
    if (s_bigram->parsed()) {
      EchoConfig(*s_bigram);
      return BigramCmd(bigram, *s_bigram);
    }
    if (s_cluster->parsed()) {
      EchoConfig(*s_cluster);
      return ClusterCheckCmd(cluster, out);
    }
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const FormatError& e) {
    err << "error: " << e.what();
    if (e.line() > 0) err << " (line " << e.line() << ")";
    err << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return kExitValidation;
}

}  // namespace easyfirst
