#include "easyfirst/features.h"

#include <initializer_list>
#include <stdexcept>

#include <fmt/format.h>

#include "easyfirst/util.h"

namespace easyfirst {
namespace {

constexpr unsigned char kSeparator = 0x1F;
constexpr std::array<std::string_view, 4> kPositionNames = {"-1", "0", "1", "2"};

struct Pair {
  int m;
  int n;
  std::string_view name;
};

// Window slots: 0 = n-1, 1 = n0, 2 = n1, 3 = n2.
constexpr Pair kLeftContextPair = {0, 1, "-1,0"};
constexpr std::array<Pair, 4> kCorePairs = {{{1, 2, "0,1"}, {2, 3, "1,2"}, {0, 3, "-1,2"}, {1, 3, "0,2"}}};
constexpr std::array<Pair, 3> kBigramPairs = {{{1, 2, "0,1"}, {2, 3, "1,2"}, {1, 3, "0,2"}}};

class PrefixSink {
 public:
  explicit PrefixSink(std::vector<std::uint64_t>& out) : out_(out) {}

  void Add(std::string_view template_id, std::initializer_list<std::string_view> parts) {
    std::uint64_t h = Fnv1a64::Mix(Fnv1a64::kOffset, template_id);
    for (const auto p : parts) {
      h = Fnv1a64::MixByte(h, kSeparator);
      h = Fnv1a64::Mix(h, p);
    }
    out_.push_back(h);
  }

 private:
  std::vector<std::uint64_t>& out_;
};

std::vector<Pair> ActivePairs(const FeatureConfig& config) {
  std::vector<Pair> pairs;
  if (config.left_context_pair) pairs.push_back(kLeftContextPair);
  pairs.insert(pairs.end(), kCorePairs.begin(), kCorePairs.end());
  return pairs;
}

struct ClusterKind {
  std::string_view name;
  std::string NodeView::*field;
};

std::vector<ClusterKind> ActiveClusterKinds(const FeatureConfig& config) {
  std::vector<ClusterKind> kinds;
  if (config.cluster_full) kinds.push_back({"K", &NodeView::cluster_full});
  if (config.cluster_6) kinds.push_back({"K6", &NodeView::cluster_6});
  if (config.cluster_4) kinds.push_back({"K4", &NodeView::cluster_4});
  return kinds;
}

}  // namespace

const NodeView& BoundaryView() {
  static const NodeView kView{"<B>", "<B>", "<B>", "<B>", "<B>", "<B>", 0};
  return kView;
}

std::string FeatureConfig::Describe() const {
  return fmt::format("dim_bits={};cluster_full={};cluster_6={};cluster_4={};left_pair={};"
                     "literal_ww={};lemma={};bigram={}",
                     dim_bits, cluster_full, cluster_6, cluster_4, left_context_pair,
                     literal_duplicate_ww, lemma_templates, bigram ? bigram_kind : "none");
}

std::string FeatureConfig::Digest() const { return HexDigest(Describe()); }

std::string PreterminalCategory(const Token& token, const TagClassification& tags) {
  if (tags.IsClosedClass(token.pos)) return token.pos + "_" + token.form;
  return token.pos;
}

NodeView MakeNodeView(std::string category, const Token& head, int block_degree,
                      const FeatureConfig& config) {
  NodeView v;
  v.category = std::move(category);
  v.head_form = head.form;
  v.head_lemma = head.lemma;
  v.block_degree = block_degree;
  const std::string_view path =
      config.clusters ? config.clusters->Lookup(head.form) : kUnknownCluster;
  v.cluster_full = path;
  v.cluster_6 = ClusterPrefix(path, 6);
  v.cluster_4 = ClusterPrefix(path, 4);
  return v;
}

Window MakeWindow(std::span<const NodeView* const> sequence, int i) {
  const int n = static_cast<int>(sequence.size());
  if (i < 0 || i >= n) {
    throw std::out_of_range(fmt::format("window position {} outside [0, {})", i, n));
  }
  Window w;
  for (int k = 0; k < 4; ++k) {
    const int j = i - 1 + k;
    w[k] = (j >= 0 && j < n) ? sequence[j] : &BoundaryView();
  }
  return w;
}

std::uint32_t HashIndex(std::string_view template_id, std::span<const std::string_view> parts,
                        std::string_view action_id, std::uint64_t dims) {
  std::uint64_t h = Fnv1a64::Mix(Fnv1a64::kOffset, template_id);
  for (const auto p : parts) {
    h = Fnv1a64::MixByte(h, kSeparator);
    h = Fnv1a64::Mix(h, p);
  }
  h = Fnv1a64::MixByte(h, kSeparator);
  h = Fnv1a64::Mix(h, action_id);
  return static_cast<std::uint32_t>(h & (dims - 1));
}

std::vector<std::uint64_t> FeatureExtractor::Prefixes(const Window& w) const {
  std::vector<std::uint64_t> out;
  out.reserve(TemplateCount());
  PrefixSink sink(out);
  std::string id;
  auto tid = [&id](std::string_view family, std::string_view where) -> std::string_view {
    id.assign(family);
    id += ':';
    id += where;
    return id;
  };

  for (int p = 0; p < 4; ++p) {
    const auto& v = *w[p];
    const auto name = kPositionNames[p];
    sink.Add(tid("C", name), {v.category});
    sink.Add(tid("W", name), {v.head_form});
    sink.Add(tid("CW", name), {v.category, v.head_form});
    if (config_.lemma_templates) sink.Add(tid("L", name), {v.head_lemma});
  }

  const auto pairs = ActivePairs(config_);
  for (const auto& pr : pairs) {
    const auto& a = *w[pr.m];
    const auto& b = *w[pr.n];
    sink.Add(tid("WW", pr.name), {a.head_form, b.head_form});
    sink.Add(tid("WC", pr.name), {a.head_form, b.category});
    sink.Add(tid("CW", pr.name), {a.category, b.head_form});
    if (config_.literal_duplicate_ww) {
      sink.Add(tid("WW", pr.name), {a.head_form, b.head_form});
    } else {
      sink.Add(tid("CC", pr.name), {a.category, b.category});
    }
    if (config_.lemma_templates) sink.Add(tid("LL", pr.name), {a.head_lemma, b.head_lemma});
  }

  for (const auto& kind : ActiveClusterKinds(config_)) {
    for (const auto& pr : pairs) {
      const auto& a = *w[pr.m];
      const auto& b = *w[pr.n];
      const std::string& ka = a.*kind.field;
      const std::string& kb = b.*kind.field;
      const std::string family(kind.name);
      sink.Add(tid("C" + family, pr.name), {a.category, kb});
      sink.Add(tid(family + "C", pr.name), {ka, b.category});
      sink.Add(tid("C" + family + "C", pr.name), {a.category, ka, b.category});
      sink.Add(tid("CC" + family, pr.name), {a.category, b.category, ka});
      sink.Add(tid("C" + family + "C" + family, pr.name), {a.category, ka, b.category, kb});
    }
  }

  if (config_.bigram) {
    const auto& model = *config_.bigram;
    for (const auto& pr : kBigramPairs) {
      const NodeView* a = w[pr.m];
      const NodeView* b = w[pr.n];
      const bool boundary = a == &BoundaryView() || b == &BoundaryView();
      const auto forward =
          boundary ? AssocBucket::kNo : model.Query(a->head_form, b->head_form);
      const auto backward =
          boundary ? AssocBucket::kNo : model.Query(b->head_form, a->head_form);
      for (const auto& [dir, bucket] : {std::pair{">", forward}, std::pair{"<", backward}}) {
        const auto bname = AssocBucketName(bucket);
        sink.Add(tid(std::string("BG") + dir, pr.name), {bname});
        sink.Add(tid(std::string("BGC") + dir, pr.name), {bname, a->category, b->category});
      }
    }
  }
  return out;
}

void FeatureExtractor::Conjoin(std::span<const std::uint64_t> prefixes,
                               std::string_view action_id, FeatureVector& out) const {
  const std::uint64_t mask = config_.dims() - 1;
  out.clear();
  out.reserve(prefixes.size());
  for (const std::uint64_t p : prefixes) {
    std::uint64_t h = Fnv1a64::MixByte(p, kSeparator);
    h = Fnv1a64::Mix(h, action_id);
    out.push_back(static_cast<std::uint32_t>(h & mask));
  }
}

FeatureVector FeatureExtractor::Extract(const Window& window, std::string_view action_id) const {
  FeatureVector fv;
  Conjoin(Prefixes(window), action_id, fv);
  return fv;
}

std::size_t FeatureExtractor::TemplateCount() const {
  const std::size_t pairs = config_.left_context_pair ? 5 : 4;
  std::size_t n = 4 * (config_.lemma_templates ? 4 : 3);
  n += pairs * (config_.lemma_templates ? 5 : 4);
  n += ActiveClusterKinds(config_).size() * pairs * 5;
  if (config_.bigram) n += kBigramPairs.size() * 2 * 2;
  return n;
}

}  // namespace easyfirst
