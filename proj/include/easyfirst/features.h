#ifndef EASYFIRST_FEATURES_H_
#define EASYFIRST_FEATURES_H_

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "easyfirst/bigram_lm.h"
#include "easyfirst/cluster_lex.h"
#include "easyfirst/headrules.h"
#include "easyfirst/tree.h"

namespace easyfirst {

// What the classifier sees of one parser item.
struct NodeView {
  std::string category;  // label, or POS (+ "_" + form for closed-class tags)
  std::string head_form;
  std::string head_lemma;
  std::string cluster_full;
  std::string cluster_6;
  std::string cluster_4;
  int block_degree = 0;
};

// Stands in for positions outside the sequence.
const NodeView& BoundaryView();

// Hashed indicator features, one index per active feature.
using FeatureVector = std::vector<std::uint32_t>;

struct FeatureConfig {
  int dim_bits = 24;  // D = 2^dim_bits
  bool cluster_full = false;
  bool cluster_6 = false;
  bool cluster_4 = false;
  bool left_context_pair = true;      // include the (n-1, n0) pair
  bool literal_duplicate_ww = false;  // fourth pair template repeats WmWn
  bool lemma_templates = false;
  std::string bigram_kind;            // informational; "" when no model

  std::shared_ptr<const ClusterLexicon> clusters;
  std::shared_ptr<const BigramAssocModel> bigram;

  std::uint64_t dims() const { return std::uint64_t{1} << dim_bits; }
  // Stable text form of the template configuration (excludes resources).
  std::string Describe() const;
  std::string Digest() const;
};

// Category attribute of a preterminal.
std::string PreterminalCategory(const Token& token, const TagClassification& tags);

NodeView MakeNodeView(std::string category, const Token& head, int block_degree,
                      const FeatureConfig& config);

// Views of the items at relative positions -1, 0, 1, 2.
using Window = std::array<const NodeView*, 4>;

// Window around the pair (i, i+1) of `sequence`. i may also be the last
// index (single-item actions); absent positions get BoundaryView(). Throws
// std::out_of_range when i is not an index of `sequence`.
Window MakeWindow(std::span<const NodeView* const> sequence, int i);

// FNV-1a 64 of template_id, parts and action_id joined by 0x1F, masked to
// `dims` (a power of two).
std::uint32_t HashIndex(std::string_view template_id, std::span<const std::string_view> parts,
                        std::string_view action_id, std::uint64_t dims);

class FeatureExtractor {
 public:
  explicit FeatureExtractor(const FeatureConfig& config) : config_(config) {}

  // Running hash states of every template instance for a window, before the
  // action is appended. Extract() == Conjoin(Prefixes(window), action).
  std::vector<std::uint64_t> Prefixes(const Window& window) const;
  void Conjoin(std::span<const std::uint64_t> prefixes, std::string_view action_id,
               FeatureVector& out) const;
  FeatureVector Extract(const Window& window, std::string_view action_id) const;

  // Number of indices emitted per extraction under the current config.
  std::size_t TemplateCount() const;

  const FeatureConfig& config() const { return config_; }

 private:
  const FeatureConfig& config_;
};

}  // namespace easyfirst

#endif  // EASYFIRST_FEATURES_H_
