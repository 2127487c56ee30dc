#include "easyfirst/cluster_lex.h"

#include <algorithm>
#include <istream>
#include <stdexcept>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "easyfirst/util.h"

namespace easyfirst {

ClusterLexicon ClusterLexicon::Load(std::istream& in, bool strict, LoadStats* stats) {
  ClusterLexicon lex;
  LoadStats local;
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    if (raw.empty()) continue;
    const auto f = Split(raw, '\t');
    const bool bits_ok = !f[0].empty() && f[0].find_first_not_of("01") == std::string_view::npos;
    long count = 0;
    bool count_ok = true;
    if (f.size() >= 3) {
      count_ok = ParseInt(f[2], count);
    }
    if (f.size() < 2 || f.size() > 3 || !bits_ok || f[1].empty() || !count_ok) {
      ++local.malformed;
      if (strict) throw std::runtime_error(fmt::format("cluster file line {}: malformed", line_no));
      spdlog::warn("cluster file line {}: malformed, skipped", line_no);
      continue;
    }
    auto [it, inserted] = lex.entries_.try_emplace(std::string(f[1]), Entry{std::string(f[0]), count});
    if (!inserted) {
      ++local.duplicates;
      spdlog::debug("cluster file line {}: duplicate word '{}' ignored", line_no, f[1]);
    }
  }
  local.entries = static_cast<long>(lex.entries_.size());
  if (local.duplicates > 0) {
    spdlog::info("cluster lexicon: {} duplicate words kept at first occurrence", local.duplicates);
  }
  if (stats != nullptr) *stats = local;
  return lex;
}

std::string_view ClusterLexicon::Lookup(std::string_view form) const {
  auto it = entries_.find(form);
  return it == entries_.end() ? kUnknownCluster : std::string_view(it->second.path);
}

long ClusterLexicon::Count(std::string_view form) const {
  auto it = entries_.find(form);
  return it == entries_.end() ? 0 : it->second.count;
}

std::string_view ClusterPrefix(std::string_view path, int bits) {
  if (path == kUnknownCluster || bits <= 0) return path;
  return path.substr(0, std::min<std::size_t>(path.size(), static_cast<std::size_t>(bits)));
}

}  // namespace easyfirst
