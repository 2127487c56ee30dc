#ifndef EASYFIRST_BIGRAM_LM_H_
#define EASYFIRST_BIGRAM_LM_H_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>

#include "easyfirst/tree.h"

namespace easyfirst {

inline constexpr std::string_view kRootForm = "*ROOT*";

enum class AssocKind { kRaw, kL1, kLL };

std::string_view AssocKindName(AssocKind kind);
std::optional<AssocKind> ParseAssocKind(std::string_view name);  // raw | l1 | ll

// Ordered HI > MI > LO > NO.
enum class AssocBucket : std::uint8_t { kNo = 0, kLo = 1, kMi = 2, kHi = 3 };

std::string_view AssocBucketName(AssocBucket b);

namespace detail {
struct StringHash {
  using is_transparent = void;
  std::size_t operator()(std::string_view s) const { return std::hash<std::string_view>{}(s); }
};
template <typename V>
using StringMap = std::unordered_map<std::string, V, StringHash, std::equal_to<>>;
}  // namespace detail

// Governor/dependent form co-occurrence counts with marginals.
struct PairCounts {
  detail::StringMap<detail::StringMap<long>> pairs;  // head -> dep -> c(h,d)
  detail::StringMap<long> head_totals;               // c(h,.)
  detail::StringMap<long> dep_totals;                // c(.,d)
  long total = 0;                                    // N

  // Every token contributes one (governor form, token form) pair; root
  // attachments use kRootForm as the governor.
  void Add(const DepSentence& sentence);
  void Merge(const PairCounts& other);
  long Count(std::string_view head, std::string_view dep) const;
};

PairCounts CountPairs(std::span<const DepSentence> corpus);
PairCounts CountPairs(std::istream& conll);

// G^2 log-likelihood ratio of the 2x2 table built from c(h,d), c(h,.),
// c(.,d) and N. Throws std::invalid_argument when n == 0.
double LogLikelihoodRatio(long joint, long head_total, long dep_total, long n);

struct ScoreOptions {
  long min_count = 2;  // pairs seen fewer times are dropped before scoring
};

// Head form -> dependent form association scores with per-head quantile
// cut-offs. Stored scores are strictly positive; absence means zero.
class BigramAssocModel {
 public:
  struct Thresholds {
    double hi_cut = 0;
    double mi_cut = 0;
  };

  BigramAssocModel() = default;
  explicit BigramAssocModel(AssocKind kind) : kind_(kind) {}

  // Scores every retained pair. Throws std::invalid_argument on an empty
  // table.
  static BigramAssocModel Score(const PairCounts& counts, AssocKind kind,
                                const ScoreOptions& options = {});

  // Direct insertion; non-positive scores are ignored.
  void SetScore(const std::string& head, const std::string& dep, double score);

  // Per head with k non-zero dependents sorted by descending score, the
  // cut-offs are the scores at ranks ceil(0.1k) and ceil(0.3k).
  void Bucketize();
  bool bucketized() const { return bucketized_; }

  double ScoreOf(std::string_view head, std::string_view dep) const;
  // NO when absent; HI when score >= hi_cut; MI when >= mi_cut; else LO.
  // Requires Bucketize().
  AssocBucket Query(std::string_view head, std::string_view dep) const;
  std::optional<Thresholds> ThresholdsOf(std::string_view head) const;

  AssocKind kind() const { return kind_; }
  std::size_t head_count() const { return scores_.size(); }
  std::size_t pair_count() const;

  // Sorted "head<TAB>dep<TAB>score" lines followed by a "#thresholds"
  // section of "head<TAB>hi_cut<TAB>mi_cut" lines.
  void Write(std::ostream& out) const;
  static BigramAssocModel Read(std::istream& in);

 private:
  AssocKind kind_ = AssocKind::kRaw;
  detail::StringMap<detail::StringMap<double>> scores_;
  detail::StringMap<Thresholds> thresholds_;
  bool bucketized_ = false;
};

// Number of top-ranked entries per bucket for k non-zero dependents.
inline long HiRank(long k) { return (k + 9) / 10; }
inline long MiRank(long k) { return (3 * k + 9) / 10; }

}  // namespace easyfirst

#endif  // EASYFIRST_BIGRAM_LM_H_
