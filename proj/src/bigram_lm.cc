#include "easyfirst/bigram_lm.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <vector>

#include <fmt/format.h>

#include "easyfirst/treebank_io.h"
#include "easyfirst/util.h"

namespace easyfirst {

std::string_view AssocKindName(AssocKind kind) {
  switch (kind) {
    case AssocKind::kRaw:
      return "raw";
    case AssocKind::kL1:
      return "l1";
    case AssocKind::kLL:
      return "ll";
  }
  return "raw";
}

std::optional<AssocKind> ParseAssocKind(std::string_view name) {
  if (name == "raw") return AssocKind::kRaw;
  if (name == "l1") return AssocKind::kL1;
  if (name == "ll") return AssocKind::kLL;
  return std::nullopt;
}

std::string_view AssocBucketName(AssocBucket b) {
  switch (b) {
    case AssocBucket::kHi:
      return "HI";
    case AssocBucket::kMi:
      return "MI";
    case AssocBucket::kLo:
      return "LO";
    case AssocBucket::kNo:
      return "NO";
  }
  return "NO";
}

void PairCounts::Add(const DepSentence& sentence) {
  for (int i = 0; i < sentence.size(); ++i) {
    const int gov = sentence.governor(i);
    const std::string& head = gov < 0 ? std::string(kRootForm) : sentence.tokens[gov].form;
    const std::string& dep = sentence.tokens[i].form;
    ++pairs[head][dep];
    ++head_totals[head];
    ++dep_totals[dep];
    ++total;
  }
}

void PairCounts::Merge(const PairCounts& other) {
  for (const auto& [h, deps] : other.pairs) {
    auto& mine = pairs[h];
    for (const auto& [d, c] : deps) mine[d] += c;
  }
  for (const auto& [h, c] : other.head_totals) head_totals[h] += c;
  for (const auto& [d, c] : other.dep_totals) dep_totals[d] += c;
  total += other.total;
}

long PairCounts::Count(std::string_view head, std::string_view dep) const {
  auto h = pairs.find(head);
  if (h == pairs.end()) return 0;
  auto d = h->second.find(dep);
  return d == h->second.end() ? 0 : d->second;
}

PairCounts CountPairs(std::span<const DepSentence> corpus) {
  PairCounts counts;
  for (const auto& s : corpus) counts.Add(s);
  return counts;
}

PairCounts CountPairs(std::istream& conll) {
  PairCounts counts;
  ForEachConllSentence(conll, [&](DepSentence&& s) { counts.Add(s); });
  return counts;
}

double LogLikelihoodRatio(long joint, long head_total, long dep_total, long n) {
  if (n <= 0) throw std::invalid_argument("G^2 needs a non-empty table");
  using Real = long double;
  const Real observed[2][2] = {
      {Real(joint), Real(head_total - joint)},
      {Real(dep_total - joint), Real(n - head_total - dep_total + joint)}};
  const Real rows[2] = {Real(head_total), Real(n - head_total)};
  const Real cols[2] = {Real(dep_total), Real(n - dep_total)};
  Real g2 = 0;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const Real o = observed[i][j];
      if (o <= 0) continue;  // 0 * ln(0 / E) = 0
      const Real e = rows[i] * cols[j] / Real(n);
      g2 += o * std::log(o / e);
    }
  }
  return static_cast<double>(std::max<Real>(0, 2 * g2));
}

BigramAssocModel BigramAssocModel::Score(const PairCounts& counts, AssocKind kind,
                                         const ScoreOptions& options) {
  if (counts.total <= 0 || counts.pairs.empty()) {
    throw std::invalid_argument("cannot score an empty pair table");
  }
  BigramAssocModel model(kind);
  for (const auto& [h, deps] : counts.pairs) {
    const long head_total = counts.head_totals.at(h);
    for (const auto& [d, c] : deps) {
      if (c < options.min_count) continue;
      double s = 0;
      switch (kind) {
        case AssocKind::kRaw:
          s = static_cast<double>(c);
          break;
        case AssocKind::kL1:
          s = static_cast<double>(c) / static_cast<double>(head_total);
          break;
        case AssocKind::kLL:
          s = LogLikelihoodRatio(c, head_total, counts.dep_totals.at(d), counts.total);
          break;
      }
      model.SetScore(h, d, s);
    }
  }
  return model;
}

void BigramAssocModel::SetScore(const std::string& head, const std::string& dep, double score) {
  if (!(score > 0)) return;
  scores_[head][dep] = score;
  bucketized_ = false;
}

void BigramAssocModel::Bucketize() {
  thresholds_.clear();
  std::vector<double> sorted;
  for (const auto& [h, deps] : scores_) {
    sorted.clear();
    for (const auto& [d, s] : deps) sorted.push_back(s);
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    const long k = static_cast<long>(sorted.size());
    if (k == 0) continue;
    thresholds_[h] = {sorted[HiRank(k) - 1], sorted[MiRank(k) - 1]};
  }
  bucketized_ = true;
}

double BigramAssocModel::ScoreOf(std::string_view head, std::string_view dep) const {
  auto h = scores_.find(head);
  if (h == scores_.end()) return 0;
  auto d = h->second.find(dep);
  return d == h->second.end() ? 0 : d->second;
}

AssocBucket BigramAssocModel::Query(std::string_view head, std::string_view dep) const {
  if (!bucketized_) throw std::logic_error("BigramAssocModel::Query before Bucketize");
  const double s = ScoreOf(head, dep);
  if (s <= 0) return AssocBucket::kNo;
  const auto& t = thresholds_.find(head)->second;
  if (s >= t.hi_cut) return AssocBucket::kHi;
  if (s >= t.mi_cut) return AssocBucket::kMi;
  return AssocBucket::kLo;
}

std::optional<BigramAssocModel::Thresholds> BigramAssocModel::ThresholdsOf(
    std::string_view head) const {
  auto it = thresholds_.find(head);
  if (it == thresholds_.end()) return std::nullopt;
  return it->second;
}

std::size_t BigramAssocModel::pair_count() const {
  std::size_t n = 0;
  for (const auto& [h, deps] : scores_) n += deps.size();
  return n;
}

namespace {

std::string FormatScore(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

double ParseScore(std::string_view s, int line_no) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw FormatError(fmt::format("bigram model line {}: bad number '{}'", line_no, s), line_no);
  }
  return v;
}

}  // namespace

void BigramAssocModel::Write(std::ostream& out) const {
  out << "#kind\t" << AssocKindName(kind_) << '\n';
  std::vector<std::string_view> heads;
  for (const auto& [h, _] : scores_) heads.push_back(h);
  std::sort(heads.begin(), heads.end());
  std::vector<std::pair<std::string_view, double>> deps;
  for (const auto h : heads) {
    deps.clear();
    for (const auto& [d, s] : scores_.find(h)->second) deps.emplace_back(d, s);
    std::sort(deps.begin(), deps.end());
    for (const auto& [d, s] : deps) out << h << '\t' << d << '\t' << FormatScore(s) << '\n';
  }
  if (bucketized_) {
    out << "#thresholds\n";
    for (const auto h : heads) {
      const auto& t = thresholds_.find(h)->second;
      out << h << '\t' << FormatScore(t.hi_cut) << '\t' << FormatScore(t.mi_cut) << '\n';
    }
  }
}

BigramAssocModel BigramAssocModel::Read(std::istream& in) {
  BigramAssocModel model;
  std::string raw;
  int line_no = 0;
  bool in_thresholds = false;
  while (std::getline(in, raw)) {
    ++line_no;
    if (raw.empty() || raw.starts_with("%%")) continue;
    const auto f = Split(raw, '\t');
    if (f[0] == "#kind") {
      auto kind = f.size() == 2 ? ParseAssocKind(f[1]) : std::nullopt;
      if (!kind) throw FormatError(fmt::format("bigram model line {}: bad kind", line_no), line_no);
      model.kind_ = *kind;
      continue;
    }
    if (f[0] == "#thresholds") {
      in_thresholds = true;
      continue;
    }
    if (f.size() != 3) {
      throw FormatError(fmt::format("bigram model line {}: expected 3 columns", line_no), line_no);
    }
    if (in_thresholds) {
      model.thresholds_[std::string(f[0])] = {ParseScore(f[1], line_no), ParseScore(f[2], line_no)};
    } else {
      model.scores_[std::string(f[0])][std::string(f[1])] = ParseScore(f[2], line_no);
    }
  }
  const bool complete = std::all_of(model.scores_.begin(), model.scores_.end(), [&](const auto& e) {
    return model.thresholds_.count(e.first) > 0;
  });
  if (in_thresholds && complete) {
    model.bucketized_ = true;
  } else {
    model.Bucketize();
  }
  return model;
}

}  // namespace easyfirst
