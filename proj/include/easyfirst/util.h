#ifndef EASYFIRST_UTIL_H_
#define EASYFIRST_UTIL_H_

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace easyfirst {

// File could not be opened, read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::ifstream OpenInput(const std::filesystem::path& path);
std::ofstream OpenOutput(const std::filesystem::path& path);

// Splits on runs of spaces and tabs.
std::vector<std::string_view> SplitWhitespace(std::string_view line);
// Splits on every occurrence of `sep`, keeping empty fields.
std::vector<std::string_view> Split(std::string_view line, char sep);
std::string_view Trim(std::string_view s);
bool ParseInt(std::string_view s, int& out);
bool ParseInt(std::string_view s, long& out);

// FNV-1a 64. `Fnv1a64::kOffset` is the empty-input state; `Mix` continues a
// running state with more bytes.
struct Fnv1a64 {
  static constexpr std::uint64_t kOffset = 14695981039346656037ULL;
  static constexpr std::uint64_t kPrime = 1099511628211ULL;

  static constexpr std::uint64_t Mix(std::uint64_t h, std::string_view bytes) {
    for (const char c : bytes) {
      h ^= static_cast<unsigned char>(c);
      h *= kPrime;
    }
    return h;
  }
  static constexpr std::uint64_t MixByte(std::uint64_t h, unsigned char b) {
    h ^= b;
    h *= kPrime;
    return h;
  }
};

// 16 hex digit digest used in output headers.
std::string HexDigest(std::string_view text);

}  // namespace easyfirst

#endif  // EASYFIRST_UTIL_H_
