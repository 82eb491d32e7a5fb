#include "osf/newick.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "osf/errors.hpp"

namespace osf {

namespace {

bool is_label_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_';
}

class Cursor {
 public:
  Cursor(std::string_view text, std::size_t first_line) : text_(text), line_(first_line) {}

  bool done() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }
  void skip_space() {
    while (!done() && std::isspace(static_cast<unsigned char>(peek())) != 0) advance();
  }
  std::string take_while(bool (*pred)(char)) {
    std::string out;
    while (!done() && pred(peek())) {
      out.push_back(peek());
      advance();
    }
    return out;
  }
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(message, line_, column_);
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_;
  std::size_t column_ = 1;
};

bool is_length_char(char c) {
  return std::isdigit(static_cast<unsigned char>(c)) != 0 || c == '.' || c == '-' || c == '+' ||
         c == 'e' || c == 'E';
}

void skip_branch_length(Cursor& in, std::vector<ParseWarning>* warnings) {
  in.skip_space();
  if (in.done() || in.peek() != ':') return;
  const std::size_t line = in.line(), column = in.column();
  in.advance();
  in.skip_space();
  std::string digits = in.take_while(is_length_char);
  if (digits.empty()) in.fail("expected branch length after ':'");
  if (warnings) warnings->push_back({line, column, "branch length ignored"});
}

PhyloTree parse_tree_at(std::string_view text, std::size_t first_line,
                        std::vector<ParseWarning>* warnings) {
  struct Open {
    std::size_t node;
    std::size_t line, column;
  };
  Cursor in(text, first_line);
  TreeDraft draft;
  std::vector<Open> stack;
  std::set<std::string, std::less<>> labels;
  bool expect_element = true;

  in.skip_space();
  if (in.done()) in.fail("empty tree");
  while (true) {
    in.skip_space();
    if (in.done()) in.fail("unexpected end of input");
    const char c = in.peek();
    if (expect_element) {
      if (c == '(') {
        std::size_t v = draft.add_node();
        if (!stack.empty()) draft.add_arc(stack.back().node, v);
        stack.push_back({v, in.line(), in.column()});
        in.advance();
      } else if (is_label_char(c)) {
        const std::size_t line = in.line(), column = in.column();
        std::string name = in.take_while(is_label_char);
        if (!labels.insert(name).second)
          throw ParseError("duplicate leaf label '" + name + "'", line, column);
        std::size_t v = draft.add_node(name);
        if (!stack.empty()) draft.add_arc(stack.back().node, v);
        skip_branch_length(in, warnings);
        expect_element = false;
      } else {
        in.fail(std::string("expected '(' or a leaf label, found '") + c + "'");
      }
      continue;
    }
    if (c == ',') {
      if (stack.empty()) in.fail("',' outside parentheses");
      in.advance();
      expect_element = true;
    } else if (c == ')') {
      if (stack.empty()) in.fail("unbalanced ')'");
      const Open open = stack.back();
      if (draft.children[open.node].size() < 2) {
        if (stack.size() == 1) in.fail("root has outdegree < 2");
        in.fail("vertex with a single child");
      }
      in.advance();
      in.skip_space();
      in.take_while(is_label_char);  // interior label, ignored
      skip_branch_length(in, warnings);
      stack.pop_back();
    } else if (c == ';') {
      if (!stack.empty())
        throw ParseError("unclosed '('", stack.back().line, stack.back().column);
      in.advance();
      break;
    } else {
      in.fail(std::string("unexpected character '") + c + "'");
    }
  }
  in.skip_space();
  if (!in.done()) in.fail("trailing characters after ';'");
  if (draft.size() == 1) throw ParseError("tree has fewer than 2 leaves", first_line, 1);
  return PhyloTree::from_draft(draft);
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  return lines;
}

bool blank_or_comment(std::string_view line) {
  auto first = std::find_if(line.begin(), line.end(),
                            [](char c) { return std::isspace(static_cast<unsigned char>(c)) == 0; });
  return first == line.end() || *first == '#';
}

}  // namespace

PhyloTree parse_tree(std::string_view text, std::vector<ParseWarning>* warnings) {
  return parse_tree_at(text, 1, warnings);
}

Forest parse_forest(std::string_view text, std::vector<ParseWarning>* warnings) {
  std::vector<PhyloTree> trees;
  std::map<std::string, std::size_t> owner;
  const auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (blank_or_comment(lines[i])) continue;
    PhyloTree tree = parse_tree_at(lines[i], i + 1, warnings);
    for (NodeId leaf : tree.leaves()) {
      auto [it, fresh] = owner.emplace(tree.label(leaf), i + 1);
      if (!fresh)
        throw ParseError("leaf label '" + tree.label(leaf) + "' already used on line " +
                             std::to_string(it->second),
                         i + 1, lines[i].find(tree.label(leaf)) + 1);
    }
    trees.push_back(std::move(tree));
  }
  if (trees.empty()) throw ParseError("forest file contains no trees", 1, 1);
  return Forest(std::move(trees));
}

LeafMap parse_leaf_map(std::string_view text, const PhyloTree& gene, const Forest& forest) {
  LeafMap phi(gene.size());
  const auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (blank_or_comment(lines[i])) continue;
    std::istringstream fields{std::string(lines[i])};
    std::string from, to, extra;
    fields >> from >> to;
    if (to.empty()) throw ParseError("expected two columns", i + 1, 1);
    if (fields >> extra) throw ParseError("unexpected third column", i + 1, lines[i].find(extra) + 1);
    auto g = gene.find_leaf(from);
    if (!g) throw ParseError("unknown gene leaf '" + from + "'", i + 1, lines[i].find(from) + 1);
    const std::size_t to_column = lines[i].find(to, lines[i].find(from) + from.size()) + 1;
    auto s = forest.find_leaf(to);
    if (!s) throw ParseError("unknown species leaf '" + to + "'", i + 1, to_column);
    if (phi[index(*g)]) throw ParseError("duplicate row for gene leaf '" + from + "'", i + 1, 1);
    phi[index(*g)] = *s;
  }
  for (NodeId leaf : gene.leaves())
    if (!phi[index(leaf)])
      throw ParseError("gene leaf '" + gene.label(leaf) + "' missing from leaf map",
                       lines.size(), 1);
  return phi;
}

namespace {

void write_subtree(const PhyloTree& t, NodeId v, std::ostream& out) {
  if (t.is_leaf(v)) {
    out << t.label(v);
    return;
  }
  out << '(';
  bool first = true;
  for (NodeId c : t.children(v)) {
    if (!first) out << ',';
    first = false;
    write_subtree(t, c, out);
  }
  out << ')';
}

std::string canonical_subtree(const PhyloTree& t, NodeId v, std::string& min_label) {
  if (t.is_leaf(v)) {
    min_label = t.label(v);
    return t.label(v);
  }
  std::vector<std::pair<std::string, std::string>> parts;
  for (NodeId c : t.children(v)) {
    std::string key;
    std::string text = canonical_subtree(t, c, key);
    parts.emplace_back(std::move(key), std::move(text));
  }
  std::sort(parts.begin(), parts.end());
  min_label = parts.front().first;
  std::string out = "(";
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += ',';
    out += parts[i].second;
  }
  return out + ")";
}

}  // namespace

std::string write_newick(const PhyloTree& tree) {
  std::ostringstream out;
  write_subtree(tree, tree.root(), out);
  out << ';';
  return out.str();
}

std::string canonical_newick(const PhyloTree& tree) {
  std::string key;
  return canonical_subtree(tree, tree.root(), key) + ";";
}

std::string write_forest(const Forest& forest) {
  std::string out;
  for (const auto& t : forest.trees()) out += write_newick(t) + "\n";
  return out;
}

std::string write_leaf_map(const ForestTriple& triple) {
  std::string out;
  for (NodeId leaf : triple.gene().leaves())
    out += triple.gene().label(leaf) + "\t" + triple.species().label(triple.phi(leaf)) + "\n";
  return out;
}

}  // namespace osf
