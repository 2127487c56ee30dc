#ifndef EASYFIRST_CLUSTER_LEX_H_
#define EASYFIRST_CLUSTER_LEX_H_

#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_map>

namespace easyfirst {

inline constexpr std::string_view kUnknownCluster = "*UNK*";

// Brown-cluster lexicon: word form -> bit-string path.
class ClusterLexicon {
 public:
  struct LoadStats {
    long entries = 0;
    long malformed = 0;
    long duplicates = 0;
  };

  // Lines are "path<TAB>word[<TAB>count]". Malformed lines are skipped (or
  // throw std::runtime_error when `strict`); duplicate words keep the first
  // occurrence.
  static ClusterLexicon Load(std::istream& in, bool strict = false, LoadStats* stats = nullptr);

  // Path for `form`, or kUnknownCluster. Keys are raw forms.
  std::string_view Lookup(std::string_view form) const;
  long Count(std::string_view form) const;
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

 private:
  struct Entry {
    std::string path;
    long count = 0;
  };
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const { return std::hash<std::string_view>{}(s); }
  };
  std::unordered_map<std::string, Entry, Hash, std::equal_to<>> entries_;
};

// First min(len, bits) characters of a path; the unknown sentinel maps to
// itself. `bits` must be positive.
std::string_view ClusterPrefix(std::string_view path, int bits);

}  // namespace easyfirst

#endif  // EASYFIRST_CLUSTER_LEX_H_
