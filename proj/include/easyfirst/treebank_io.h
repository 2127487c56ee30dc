#ifndef EASYFIRST_TREEBANK_IO_H_
#define EASYFIRST_TREEBANK_IO_H_

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "easyfirst/tree.h"

namespace easyfirst {

// Malformed input. `line()` is the 1-based line number in the stream, 0 when
// the error is not tied to a line.
class FormatError : public std::runtime_error {
 public:
  FormatError(const std::string& what, int line)
      : std::runtime_error(what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

class AlignmentError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ReadOptions {
  // Without `strict`, sentences that fail validation are skipped with a
  // warning; with it, the first failure throws FormatError.
  bool strict = false;
};

// NEGRA export, versions 3 (word tag morph edge parent) and 4 (word lemma tag
// morph edge parent). The version comes from a "#FORMAT n" line when present,
// otherwise from the parity of the column count. Secondary edges are dropped.
// Every tree gets a VROOT root node standing for parent 0.
std::vector<ConstTree> ReadExport(std::istream& in, const ReadOptions& options = {});
void WriteExport(std::ostream& out, std::span<const ConstTree> trees, int version = 4);

// One tree per line, terminals written as "index=form". A bracket holding a
// single terminal is a preterminal and its label is the token's POS tag.
std::vector<ConstTree> ReadDiscBracket(std::istream& in, const ReadOptions& options = {});
ConstTree ParseDiscBracket(const std::string& line);
std::string ToDiscBracket(const ConstTree& tree);
void WriteDiscBracket(std::ostream& out, std::span<const ConstTree> trees);

// CoNLL-X: ID FORM LEMMA CPOSTAG POSTAG FEATS HEAD DEPREL [PHEAD PDEPREL].
std::vector<DepSentence> ReadConll(std::istream& in, const ReadOptions& options = {});
// Streaming variant: calls `sink` once per valid sentence.
void ForEachConllSentence(std::istream& in, const std::function<void(DepSentence&&)>& sink,
                          const ReadOptions& options = {});
void WriteConll(std::ostream& out, std::span<const DepSentence> sentences);

// Pairs constituent and dependency views of the same corpus. Throws
// AlignmentError on a count mismatch or a form mismatch.
AlignedCorpus Align(std::vector<ConstTree> trees, std::vector<DepSentence> deps);

enum class TreebankFormat { kExport, kDiscBracket };

// Sniffs the first non-comment line: "#BOS"/"#FORMAT" means export.
TreebankFormat DetectFormat(std::istream& in);

std::vector<ConstTree> ReadTreebankFile(const std::filesystem::path& path,
                                        const ReadOptions& options = {});
void WriteTreebankFile(const std::filesystem::path& path, std::span<const ConstTree> trees,
                       TreebankFormat format, const std::string& header_comment = {});
std::vector<DepSentence> ReadConllFile(const std::filesystem::path& path,
                                       const ReadOptions& options = {});

}  // namespace easyfirst

#endif  // EASYFIRST_TREEBANK_IO_H_
