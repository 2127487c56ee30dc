#include "easyfirst/treebank_io.h"

#include <algorithm>
#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "easyfirst/util.h"

namespace easyfirst {
namespace {

constexpr std::string_view kRootLabel = "VROOT";

bool IsNodeNumber(std::string_view field, int& number) {
  return field.size() > 1 && field[0] == '#' && ParseInt(field.substr(1), number);
}

std::string_view StripExportComment(std::string_view line) {
  const auto pos = line.find("%%");
  if (pos != std::string_view::npos) line = line.substr(0, pos);
  return Trim(line);
}

// Accumulates the lines of one #BOS ... #EOS block.
struct ExportBlock {
  std::string id;
  int bos_line = 0;
  struct Line {
    int line_no;
    std::vector<std::string> fields;
  };
  std::vector<Line> lines;
};

ConstTree BuildExportTree(const ExportBlock& block, int version) {
  ConstTree tree;
  tree.id = block.id;
  tree.nodes.push_back(Node{std::string(kRootLabel), "--", {}, {}, -1});
  tree.root = 0;

  struct Pending {
    Ref ref;
    int parent_number;
    int line_no;
  };
  std::vector<Pending> pending;
  std::map<int, int> number_to_node;  // export node number -> node index

  const std::size_t min_cols = version == 4 ? 6 : 5;
  for (const auto& l : block.lines) {
    const auto& f = l.fields;
    if (f.size() < min_cols) {
      throw FormatError(fmt::format("sentence {}: line {}: expected at least {} columns, got {}",
                                    block.id, l.line_no, min_cols, f.size()),
                        l.line_no);
    }
    int parent_number = 0;
    const std::string& parent_field = version == 4 ? f[5] : f[4];
    if (!ParseInt(parent_field, parent_number) || parent_number < 0) {
      throw FormatError(fmt::format("sentence {}: line {}: bad parent '{}'", block.id,
                                    l.line_no, parent_field),
                        l.line_no);
    }
    int number = 0;
    if (IsNodeNumber(f[0], number)) {
      if (number_to_node.count(number)) {
        throw FormatError(
            fmt::format("sentence {}: line {}: node #{} defined twice", block.id, l.line_no, number),
            l.line_no);
      }
      Node node;
      node.label = version == 4 ? f[2] : f[1];
      node.edge = version == 4 ? f[4] : f[3];
      const int k = static_cast<int>(tree.nodes.size());
      tree.nodes.push_back(std::move(node));
      number_to_node[number] = k;
      pending.push_back({Ref::Node(k), parent_number, l.line_no});
    } else {
      if (!number_to_node.empty()) {
        throw FormatError(fmt::format("sentence {}: line {}: terminal after nonterminal lines",
                                      block.id, l.line_no),
                          l.line_no);
      }
      Token t;
      t.index = tree.size();
      t.form = f[0];
      if (version == 4) {
        t.lemma = f[1] == "--" ? std::string() : f[1];
        t.pos = f[2];
        t.morph = f[3];
        t.edge = f[4];
      } else {
        t.pos = f[1];
        t.morph = f[2];
        t.edge = f[3];
      }
      pending.push_back({Ref::Terminal(t.index), parent_number, l.line_no});
      tree.tokens.push_back(std::move(t));
    }
  }
  if (tree.tokens.empty()) {
    throw FormatError(fmt::format("sentence {}: no terminals", block.id), block.bos_line);
  }
  for (const auto& p : pending) {
    int parent = 0;
    if (p.parent_number != 0) {
      auto it = number_to_node.find(p.parent_number);
      if (it == number_to_node.end()) {
        throw FormatError(fmt::format("sentence {}: line {}: dangling parent reference #{}",
                                      block.id, p.line_no, p.parent_number),
                          p.line_no);
      }
      parent = it->second;
    }
    tree.nodes[parent].children.push_back(p.ref);
  }
  try {
    FinalizeTree(tree);
  } catch (const InvalidTree& e) {
    throw FormatError(fmt::format("sentence {}: line {}: {}", block.id, block.bos_line, e.what()),
                      block.bos_line);
  }
  return tree;
}

void HandleSentenceError(const FormatError& e, const ReadOptions& options) {
  if (options.strict) throw e;
  spdlog::warn("skipping sentence: {}", e.what());
}

}  // namespace

std::vector<ConstTree> ReadExport(std::istream& in, const ReadOptions& options) {
  std::vector<ConstTree> trees;
  std::optional<int> version;
  std::optional<ExportBlock> block;
  bool in_table = false;
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = StripExportComment(raw);
    if (line.empty()) continue;
    auto fields = SplitWhitespace(line);
    const auto head = fields[0];

    if (!block) {
      if (head == "#FORMAT" && fields.size() > 1) {
        int v = 0;
        if (ParseInt(fields[1], v) && (v == 3 || v == 4)) version = v;
      } else if (head.starts_with("#BOT")) {
        in_table = true;
      } else if (head.starts_with("#EOT")) {
        in_table = false;
      } else if (head == "#BOS" && !in_table) {
        if (fields.size() < 2) throw FormatError("#BOS without sentence id", line_no);
        block = ExportBlock{std::string(fields[1]), line_no, {}};
      } else if (head == "#EOS") {
        throw FormatError(fmt::format("line {}: #EOS without #BOS", line_no), line_no);
      }
      continue;
    }

    if (head == "#EOS") {
      try {
        const std::string eos_id = fields.size() > 1 ? std::string(fields[1]) : std::string();
        if (eos_id != block->id) {
          throw FormatError(fmt::format("sentence {}: line {}: #EOS id '{}' does not match #BOS",
                                        block->id, line_no, eos_id),
                            line_no);
        }
        if (!version) {
          // v4 lines have 6 + 2k columns, v3 lines 5 + 2k.
          version = block->lines.empty() || block->lines.front().fields.size() % 2 == 0 ? 4 : 3;
        }
        trees.push_back(BuildExportTree(*block, *version));
      } catch (const FormatError& e) {
        HandleSentenceError(e, options);
      }
      block.reset();
      continue;
    }
    if (head == "#BOS") {
      const FormatError e(
          fmt::format("sentence {}: line {}: #BOS before #EOS", block->id, line_no), line_no);
      HandleSentenceError(e, options);
      block = ExportBlock{fields.size() > 1 ? std::string(fields[1]) : std::string(), line_no, {}};
      continue;
    }
    ExportBlock::Line l{line_no, {}};
    l.fields.assign(fields.begin(), fields.end());
    block->lines.push_back(std::move(l));
  }
  if (block) {
    HandleSentenceError(
        FormatError(fmt::format("sentence {}: missing #EOS at end of input", block->id), line_no),
        options);
  }
  return trees;
}

void WriteExport(std::ostream& out, std::span<const ConstTree> trees, int version) {
  int counter = 0;
  for (const auto& tree : trees) {
    ++counter;
    const std::string id = tree.id.empty() ? std::to_string(counter) : tree.id;
    const bool implicit_root =
        tree.nodes[tree.root].label == kRootLabel && tree.nodes[tree.root].edge == "--";

    // Post-order numbering so every node line follows its children.
    std::vector<int> number(tree.nodes.size(), 0);
    std::vector<int> order;
    int next = 500;
    std::function<void(int)> visit = [&](int k) {
      for (const Ref c : tree.nodes[k].children) {
        if (!c.is_terminal()) visit(c.index);
      }
      if (k == tree.root && implicit_root) return;
      number[k] = next++;
      order.push_back(k);
    };
    visit(tree.root);
    auto parent_number = [&](int parent) { return parent < 0 ? 0 : number[parent]; };

    out << "#BOS " << id << '\n';
    for (const auto& t : tree.tokens) {
      const int p = parent_number(tree.token_parent[t.index]);
      if (version == 4) {
        out << fmt::format("{}\t{}\t{}\t{}\t{}\t{}\n", t.form, t.lemma.empty() ? "--" : t.lemma,
                           t.pos, t.morph, t.edge, p);
      } else {
        out << fmt::format("{}\t{}\t{}\t{}\t{}\n", t.form, t.pos, t.morph, t.edge, p);
      }
    }
    for (const int k : order) {
      const auto& node = tree.nodes[k];
      const int p = parent_number(node.parent);
      if (version == 4) {
        out << fmt::format("#{}\t--\t{}\t--\t{}\t{}\n", number[k], node.label, node.edge, p);
      } else {
        out << fmt::format("#{}\t{}\t--\t{}\t{}\n", number[k], node.label, node.edge, p);
      }
    }
    out << "#EOS " << id << '\n';
  }
}

// ---------------------------------------------------------------------------
// discbracket

namespace {

std::string EscapeForm(std::string_view form) {
  std::string out;
  for (const char c : form) {
    if (c == '(') {
      out += "-LRB-";
    } else if (c == ')') {
      out += "-RRB-";
    } else {
      out += c;
    }
  }
  return out;
}

std::string UnescapeForm(std::string_view form) {
  std::string out(form);
  for (const auto& [from, to] : {std::pair{"-LRB-", "("}, std::pair{"-RRB-", ")"}}) {
    std::size_t pos = 0;
    while ((pos = out.find(from, pos)) != std::string::npos) {
      out.replace(pos, 5, to);
      pos += 1;
    }
  }
  return out;
}

bool IsTerminalAtom(std::string_view atom, int& index, std::string_view& form) {
  const auto eq = atom.find('=');
  if (eq == std::string_view::npos || eq == 0) return false;
  if (!ParseInt(atom.substr(0, eq), index) || index < 0) return false;
  form = atom.substr(eq + 1);
  return true;
}

class BracketParser {
 public:
  explicit BracketParser(std::string_view text) : text_(text) {}

  ConstTree Parse() {
    SkipSpace();
    Expect('(');
    Item top = ParseBracket();
    SkipSpace();
    if (pos_ != text_.size()) Fail("trailing material after tree");

    int max_index = -1;
    for (const auto& [index, _] : tokens_) max_index = std::max(max_index, index);
    tree_.tokens.resize(max_index + 1);
    std::vector<bool> seen(max_index + 1, false);
    for (auto& [index, token] : tokens_) {
      seen[index] = true;
      tree_.tokens[index] = std::move(token);
    }
    for (int i = 0; i <= max_index; ++i) {
      if (!seen[i]) Fail(fmt::format("missing terminal index {}", i));
    }
    if (top.ref.is_terminal()) {
      tree_.nodes.push_back(Node{std::string(kRootLabel), "--", {top.ref}, {}, -1});
      tree_.root = static_cast<int>(tree_.nodes.size()) - 1;
    } else {
      tree_.root = top.ref.index;
    }
    FinalizeTree(tree_);
    return std::move(tree_);
  }

 private:
  struct Item {
    Ref ref;
  };

  [[noreturn]] void Fail(const std::string& msg) const {
    throw InvalidTree(fmt::format("{} (at column {})", msg, pos_ + 1));
  }

  void SkipSpace() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
  }

  void Expect(char c) {
    if (pos_ >= text_.size() || text_[pos_] != c) Fail(fmt::format("expected '{}'", c));
    ++pos_;
  }

  std::string_view Atom() {
    const auto start = pos_;
    while (pos_ < text_.size() && text_[pos_] != ' ' && text_[pos_] != '\t' &&
           text_[pos_] != '(' && text_[pos_] != ')') {
      ++pos_;
    }
    if (pos_ == start) Fail("expected a label or terminal");
    return text_.substr(start, pos_ - start);
  }

  Ref AddTerminal(int index, std::string_view form, std::string pos) {
    if (tokens_.count(index)) Fail(fmt::format("duplicate terminal index {}", index));
    Token t;
    t.index = index;
    t.form = UnescapeForm(form);
    t.pos = std::move(pos);
    tokens_.emplace(index, std::move(t));
    return Ref::Terminal(index);
  }

  // Called after the opening parenthesis.
  Item ParseBracket() {
    SkipSpace();
    const std::string label(Atom());
    std::vector<Ref> children;
    std::vector<std::pair<int, std::string_view>> bare;
    while (true) {
      SkipSpace();
      if (pos_ >= text_.size()) Fail("unbalanced brackets: missing ')'");
      if (text_[pos_] == ')') {
        ++pos_;
        break;
      }
      if (text_[pos_] == '(') {
        ++pos_;
        children.push_back(ParseBracket().ref);
        continue;
      }
      int index = 0;
      std::string_view form;
      if (!IsTerminalAtom(Atom(), index, form)) Fail("expected 'index=form' terminal");
      bare.emplace_back(index, form);
      children.push_back(Ref::Terminal(-1 - static_cast<int>(bare.size() - 1)));
    }
    if (children.empty()) Fail(fmt::format("empty bracket '{}'", label));
    if (children.size() == 1 && bare.size() == 1) {
      return {AddTerminal(bare[0].first, bare[0].second, label)};
    }
    for (auto& c : children) {
      if (c.is_terminal() && c.index < 0) {
        const auto& [index, form] = bare[-1 - c.index];
        c = AddTerminal(index, form, "");
      }
    }
    tree_.nodes.push_back(Node{label, "--", std::move(children), {}, -1});
    return {Ref::Node(static_cast<int>(tree_.nodes.size()) - 1)};
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  ConstTree tree_;
  std::map<int, Token> tokens_;
};

}  // namespace

ConstTree ParseDiscBracket(const std::string& line) {
  return BracketParser(line).Parse();
}

std::vector<ConstTree> ReadDiscBracket(std::istream& in, const ReadOptions& options) {
  std::vector<ConstTree> trees;
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = Trim(raw);
    if (line.empty() || line.starts_with("%%") || line.starts_with('#')) continue;
    try {
      ConstTree tree = ParseDiscBracket(std::string(line));
      tree.id = std::to_string(trees.size() + 1);
      trees.push_back(std::move(tree));
    } catch (const InvalidTree& e) {
      HandleSentenceError(FormatError(fmt::format("line {}: {}", line_no, e.what()), line_no),
                          options);
    }
  }
  return trees;
}

std::string ToDiscBracket(const ConstTree& tree) {
  std::string out;
  auto terminal = [&](int i) {
    const auto& t = tree.tokens[i];
    if (t.pos.empty()) {
      out += fmt::format("{}={}", i, EscapeForm(t.form));
    } else {
      out += fmt::format("({} {}={})", t.pos, i, EscapeForm(t.form));
    }
  };
  std::function<void(int)> emit = [&](int k) {
    const auto& node = tree.nodes[k];
    out += '(';
    out += node.label;
    for (const Ref c : node.children) {
      out += ' ';
      if (c.is_terminal()) {
        terminal(c.index);
      } else {
        emit(c.index);
      }
    }
    out += ')';
  };
  emit(tree.root);
  return out;
}

void WriteDiscBracket(std::ostream& out, std::span<const ConstTree> trees) {
  for (const auto& tree : trees) out << ToDiscBracket(tree) << '\n';
}

// ---------------------------------------------------------------------------
// CoNLL-X

namespace {

DepSentence BuildConllSentence(const std::vector<std::pair<int, std::string>>& lines) {
  DepSentence s;
  for (const auto& [line_no, raw] : lines) {
    auto cols = Split(raw, '\t');
    if (cols.size() < 8) cols = SplitWhitespace(raw);
    if (cols.size() < 8) {
      throw FormatError(
          fmt::format("line {}: expected at least 8 columns, got {}", line_no, cols.size()),
          line_no);
    }
    int id = 0;
    if (!ParseInt(cols[0], id) || id != s.size() + 1) {
      throw FormatError(fmt::format("line {}: bad token id '{}'", line_no, cols[0]), line_no);
    }
    int head = 0;
    if (!ParseInt(cols[6], head)) {
      throw FormatError(fmt::format("line {}: non-integer head '{}'", line_no, cols[6]), line_no);
    }
    Token t;
    t.index = s.size();
    t.form = cols[1];
    t.lemma = cols[2];
    t.cpos = cols[3];
    t.pos = cols[4];
    t.morph = cols[5];
    s.tokens.push_back(std::move(t));
    s.heads.push_back(head);
    s.deprels.emplace_back(cols[7]);
    s.extra_columns.emplace_back(cols.begin() + 8, cols.end());
  }
  const int n = s.size();
  for (int i = 0; i < n; ++i) {
    if (s.heads[i] < 0 || s.heads[i] > n) {
      const int line_no = lines[i].first;
      throw FormatError(fmt::format("line {}: head {} out of range [0, {}]", line_no, s.heads[i], n),
                        line_no);
    }
  }
  try {
    ValidateDependencies(s);
  } catch (const InvalidTree& e) {
    throw FormatError(fmt::format("line {}: {}", lines.front().first, e.what()),
                      lines.front().first);
  }
  return s;
}

}  // namespace

std::vector<DepSentence> ReadConll(std::istream& in, const ReadOptions& options) {
  std::vector<DepSentence> out;
  ForEachConllSentence(in, [&](DepSentence&& s) { out.push_back(std::move(s)); }, options);
  return out;
}

void ForEachConllSentence(std::istream& in, const std::function<void(DepSentence&&)>& sink,
                          const ReadOptions& options) {
  std::vector<std::pair<int, std::string>> block;
  auto flush = [&] {
    if (block.empty()) return;
    try {
      sink(BuildConllSentence(block));
    } catch (const FormatError& e) {
      HandleSentenceError(e, options);
    }
    block.clear();
  };
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    if (Trim(raw).empty()) {
      flush();
      continue;
    }
    if (block.empty() && raw.starts_with('#')) continue;
    block.emplace_back(line_no, raw);
  }
  flush();
}

void WriteConll(std::ostream& out, std::span<const DepSentence> sentences) {
  for (const auto& s : sentences) {
    for (int i = 0; i < s.size(); ++i) {
      const auto& t = s.tokens[i];
      out << i + 1 << '\t' << t.form << '\t' << t.lemma << '\t' << t.cpos << '\t' << t.pos << '\t'
          << t.morph << '\t' << s.heads[i] << '\t' << s.deprels[i];
      if (i < static_cast<int>(s.extra_columns.size())) {
        for (const auto& c : s.extra_columns[i]) out << '\t' << c;
      }
      out << '\n';
    }
    out << '\n';
  }
}

AlignedCorpus Align(std::vector<ConstTree> trees, std::vector<DepSentence> deps) {
  if (trees.size() != deps.size()) {
    throw AlignmentError(fmt::format("sentence count mismatch: {} trees vs {} dependency sentences",
                                     trees.size(), deps.size()));
  }
  AlignedCorpus corpus;
  corpus.sentences.reserve(trees.size());
  for (std::size_t i = 0; i < trees.size(); ++i) {
    if (trees[i].size() != deps[i].size()) {
      throw AlignmentError(fmt::format("sentence {}: token count mismatch ({} vs {})", i,
                                       trees[i].size(), deps[i].size()));
    }
    for (int j = 0; j < trees[i].size(); ++j) {
      if (trees[i].tokens[j].form != deps[i].tokens[j].form) {
        throw AlignmentError(fmt::format("form mismatch at ({},{}): '{}' vs '{}'", i, j,
                                         trees[i].tokens[j].form, deps[i].tokens[j].form));
      }
    }
    corpus.sentences.push_back({std::move(trees[i]), std::move(deps[i])});
  }
  return corpus;
}

TreebankFormat DetectFormat(std::istream& in) {
  const auto start = in.tellg();
  std::string raw;
  TreebankFormat format = TreebankFormat::kDiscBracket;
  while (std::getline(in, raw)) {
    const auto line = Trim(raw);
    if (line.empty() || line.starts_with("%%")) continue;
    if (line.starts_with("#BOS") || line.starts_with("#FORMAT") || line.starts_with("#BOT")) {
      format = TreebankFormat::kExport;
    }
    break;
  }
  in.clear();
  in.seekg(start);
  return format;
}

std::vector<ConstTree> ReadTreebankFile(const std::filesystem::path& path,
                                        const ReadOptions& options) {
  auto in = OpenInput(path);
  return DetectFormat(in) == TreebankFormat::kExport ? ReadExport(in, options)
                                                     : ReadDiscBracket(in, options);
}

void WriteTreebankFile(const std::filesystem::path& path, std::span<const ConstTree> trees,
                       TreebankFormat format, const std::string& header_comment) {
  auto out = OpenOutput(path);
  if (!header_comment.empty()) out << "%% " << header_comment << '\n';
  if (format == TreebankFormat::kExport) {
    WriteExport(out, trees);
  } else {
    WriteDiscBracket(out, trees);
  }
  if (!out) throw IoError(fmt::format("error writing {}", path.string()));
}

std::vector<DepSentence> ReadConllFile(const std::filesystem::path& path,
                                       const ReadOptions& options) {
  auto in = OpenInput(path);
  return ReadConll(in, options);
}

}  // namespace easyfirst
