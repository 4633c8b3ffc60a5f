#include "bncut/format.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <set>
#include <sstream>

namespace bncut {

bool operator==(const NetworkDocument& a, const NetworkDocument& b) {
  auto node_eq = [](const NodeDef& x, const NodeDef& y) {
    return x.name == y.name && x.values == y.values;
  };
  auto arc_eq = [](const ArcSpec& x, const ArcSpec& y) {
    return x.parent == y.parent && x.child == y.child;
  };
  auto cpt_eq = [](const CptSpec& x, const CptSpec& y) {
    return x.child == y.child && x.parents == y.parents && x.rows == y.rows;
  };
  return std::equal(a.nodes.begin(), a.nodes.end(), b.nodes.begin(),
                    b.nodes.end(), node_eq) &&
         std::equal(a.arcs.begin(), a.arcs.end(), b.arcs.begin(),
                    b.arcs.end(), arc_eq) &&
         std::equal(a.cpts.begin(), a.cpts.end(), b.cpts.begin(),
                    b.cpts.end(), cpt_eq) &&
         a.evidence == b.evidence;
}

namespace {

enum class TokKind { Ident, Number, Symbol, End };

struct Token {
  TokKind kind = TokKind::End;
  std::string text;
  double number = 0.0;
  int line = 0;
  int col = 0;
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) { advance(); }

  const Token& peek() const { return current_; }

  Token next() {
    Token t = current_;
    advance();
    return t;
  }

  [[noreturn]] void error(const Token& at, const std::string& msg) const {
    std::ostringstream os;
    os << "line " << at.line << ", column " << at.col << ": " << msg;
    fail(ErrorCode::SyntaxError, os.str());
  }

 private:
  void advance() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
        continue;
      }
      if (c == '\n') {
        ++line_;
        col_ = 1;
        ++pos_;
        continue;
      }
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++col_;
        ++pos_;
        continue;
      }
      break;
    }
    current_ = Token{TokKind::End, "", 0.0, line_, col_};
    if (pos_ >= text_.size()) return;

    const int line = line_;
    const int col = col_;
    char c = text_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
              text_[pos_] == '_')) {
        ++pos_;
        ++col_;
      }
      current_ = Token{TokKind::Ident, text_.substr(start, pos_ - start), 0.0,
                       line, col};
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isdigit(static_cast<unsigned char>(text_[pos_])) ||
              text_[pos_] == '.' || text_[pos_] == 'e' || text_[pos_] == 'E' ||
              ((text_[pos_] == '+' || text_[pos_] == '-') && pos_ > start &&
               (text_[pos_ - 1] == 'e' || text_[pos_ - 1] == 'E')))) {
        ++pos_;
        ++col_;
      }
      std::string lit = text_.substr(start, pos_ - start);
      double value = 0.0;
      auto [ptr, ec] =
          std::from_chars(lit.data(), lit.data() + lit.size(), value);
      if (ec != std::errc() || ptr != lit.data() + lit.size()) {
        current_ = Token{TokKind::Number, lit, 0.0, line, col};
        error(current_, "malformed number '" + lit + "'");
      }
      current_ = Token{TokKind::Number, lit, value, line, col};
      return;
    }
    if (c == '-' && pos_ + 1 < text_.size() &&
        (text_[pos_ + 1] == '>' || text_[pos_ + 1] == '-')) {
      std::string sym = text_.substr(pos_, 2);
      pos_ += 2;
      col_ += 2;
      current_ = Token{TokKind::Symbol, sym, 0.0, line, col};
      return;
    }
    if (c == '{' || c == '}' || c == ',' || c == '|' || c == ':' || c == '=') {
      ++pos_;
      ++col_;
      current_ = Token{TokKind::Symbol, std::string(1, c), 0.0, line, col};
      return;
    }
    current_ = Token{TokKind::Symbol, std::string(1, c), 0.0, line, col};
    error(current_, std::string("unexpected character '") + c + "'");
  }

  const std::string& text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  Token current_;
};

class NetworkParser {
 public:
  explicit NetworkParser(const std::string& text) : lex_(text) {}

  NetworkDocument parse() {
    while (lex_.peek().kind != TokKind::End) {
      Token head = expect_ident("statement keyword");
      if (head.text == "node") {
        parse_node();
      } else if (head.text == "arc") {
        parse_arc();
      } else if (head.text == "cpt") {
        parse_cpt();
      } else if (head.text == "evidence") {
        parse_evidence();
      } else {
        lex_.error(head, "expected node, arc, cpt or evidence, got '" +
                             head.text + "'");
      }
    }
    finish();
    return std::move(doc_);
  }

 private:
  Token expect_ident(const std::string& what) {
    Token t = lex_.next();
    if (t.kind != TokKind::Ident) {
      lex_.error(t, "expected " + what);
    }
    return t;
  }

  Token expect_symbol(const std::string& sym) {
    Token t = lex_.next();
    if (t.kind != TokKind::Symbol || t.text != sym) {
      lex_.error(t, "expected '" + sym + "'");
    }
    return t;
  }

  const NodeDef& lookup(const Token& name) const {
    auto it = node_index_.find(name.text);
    if (it == node_index_.end()) {
      std::ostringstream os;
      os << "line " << name.line << ", column " << name.col
         << ": reference to undeclared node '" << name.text << "'";
      fail(ErrorCode::UnknownNodeReference, os.str());
    }
    return doc_.nodes[it->second];
  }

  void parse_node() {
    Token name = expect_ident("node name");
    if (node_index_.count(name.text)) {
      fail(ErrorCode::DuplicateDeclaration,
           "node '" + name.text + "' declared twice");
    }
    expect_symbol("{");
    NodeDef def{name.text, {}};
    while (true) {
      def.values.push_back(expect_ident("value label").text);
      Token t = lex_.next();
      if (t.kind == TokKind::Symbol && t.text == ",") continue;
      if (t.kind == TokKind::Symbol && t.text == "}") break;
      lex_.error(t, "expected ',' or '}' in value list");
    }
    node_index_[def.name] = doc_.nodes.size();
    doc_.nodes.push_back(std::move(def));
  }

  void parse_arc() {
    Token parent = expect_ident("parent node");
    lookup(parent);
    expect_symbol("->");
    Token child = expect_ident("child node");
    lookup(child);
    doc_.arcs.push_back({parent.text, child.text});
  }

  std::size_t value_index(const NodeDef& def, const Token& label) const {
    auto it = std::find(def.values.begin(), def.values.end(), label.text);
    if (it == def.values.end()) {
      lex_.error(label, "node '" + def.name + "' has no value '" +
                            label.text + "'");
    }
    return static_cast<std::size_t>(it - def.values.begin());
  }

  void parse_cpt() {
    Token child = expect_ident("cpt node");
    const NodeDef& child_def = lookup(child);
    if (!cpt_declared_.insert(child.text).second) {
      fail(ErrorCode::DuplicateDeclaration,
           "cpt for node '" + child.text + "' declared twice");
    }
    CptSpec spec;
    spec.child = child.text;
    std::vector<const NodeDef*> parent_defs;
    Token t = lex_.next();
    if (t.kind == TokKind::Symbol && t.text == "|") {
      while (true) {
        Token p = expect_ident("parent node");
        parent_defs.push_back(&lookup(p));
        spec.parents.push_back(p.text);
        Token sep = lex_.next();
        if (sep.kind == TokKind::Symbol && sep.text == ",") continue;
        if (sep.kind == TokKind::Symbol && sep.text == "{") break;
        lex_.error(sep, "expected ',' or '{' after parent list");
      }
    } else if (!(t.kind == TokKind::Symbol && t.text == "{")) {
      lex_.error(t, "expected '|' or '{' after cpt node");
    }

    const std::size_t card = child_def.values.size();
    if (spec.parents.empty()) {
      std::vector<double> row;
      while (true) {
        Token num = lex_.next();
        if (num.kind != TokKind::Number) {
          lex_.error(num, "expected probability");
        }
        row.push_back(num.number);
        Token sep = lex_.next();
        if (sep.kind == TokKind::Symbol && sep.text == ",") continue;
        if (sep.kind == TokKind::Symbol && sep.text == "}") break;
        lex_.error(sep, "expected ',' or '}' in prior row");
      }
      if (row.size() != card) {
        fail(ErrorCode::SyntaxError,
             "prior of '" + spec.child + "' has " +
                 std::to_string(row.size()) + " entries, expected " +
                 std::to_string(card));
      }
      spec.rows.push_back(std::move(row));
      doc_.cpts.push_back(std::move(spec));
      return;
    }

    std::size_t total_rows = 1;
    for (const NodeDef* p : parent_defs) total_rows *= p->values.size();
    spec.rows.assign(total_rows, {});
    std::vector<bool> filled(total_rows, false);
    while (true) {
      if (lex_.peek().kind == TokKind::Symbol && lex_.peek().text == "}") {
        lex_.next();
        break;
      }
      // Row label: one value per parent, in parent-list order.
      std::size_t row_index = 0;
      std::string label_text;
      for (std::size_t k = 0; k < parent_defs.size(); ++k) {
        Token label = expect_ident("parent value label");
        if (k) label_text += ", ";
        label_text += label.text;
        row_index = row_index * parent_defs[k]->values.size() +
                    value_index(*parent_defs[k], label);
        Token sep = lex_.next();
        const bool last = k + 1 == parent_defs.size();
        if (!last && sep.kind == TokKind::Symbol && sep.text == ",") continue;
        if (last && sep.kind == TokKind::Symbol && sep.text == ":") break;
        lex_.error(sep, last ? "expected ':' after row label"
                             : "expected ',' in row label");
      }
      if (filled[row_index]) {
        fail(ErrorCode::DuplicateDeclaration,
             "cpt of '" + spec.child + "' repeats row '" + label_text + "'");
      }
      std::vector<double> row;
      while (true) {
        Token num = lex_.next();
        if (num.kind != TokKind::Number) {
          lex_.error(num, "expected probability in row '" + label_text + "'");
        }
        row.push_back(num.number);
        if (lex_.peek().kind == TokKind::Symbol && lex_.peek().text == ",") {
          lex_.next();
          continue;
        }
        break;
      }
      if (row.size() != card) {
        fail(ErrorCode::SyntaxError,
             "cpt of '" + spec.child + "' row '" + label_text + "' has " +
                 std::to_string(row.size()) + " entries, expected " +
                 std::to_string(card));
      }
      spec.rows[row_index] = std::move(row);
      filled[row_index] = true;
    }
    for (std::size_t r = 0; r < total_rows; ++r) {
      if (!filled[r]) {
        fail(ErrorCode::SyntaxError, "cpt of '" + spec.child +
                                         "' is missing row " +
                                         std::to_string(r));
      }
    }
    doc_.cpts.push_back(std::move(spec));
  }

  void parse_evidence() {
    Token name = expect_ident("evidence node");
    const NodeDef& def = lookup(name);
    expect_symbol("=");
    Token label = expect_ident("evidence value");
    value_index(def, label);
    for (const auto& [n, v] : doc_.evidence) {
      (void)v;
      if (n == name.text) {
        fail(ErrorCode::DuplicateDeclaration,
             "evidence for node '" + name.text + "' declared twice");
      }
    }
    doc_.evidence.emplace_back(name.text, label.text);
  }

  void finish() const {
    for (const NodeDef& def : doc_.nodes) {
      if (!cpt_declared_.count(def.name)) {
        fail(ErrorCode::SyntaxError,
             "node '" + def.name + "' has no cpt declaration");
      }
    }
  }

  Lexer lex_;
  NetworkDocument doc_;
  std::map<std::string, std::size_t> node_index_;
  std::set<std::string> cpt_declared_;
};

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  std::string s = os.str();
  // Keep a decimal marker so values re-lex as numbers unambiguously.
  if (s.find('.') == std::string::npos && s.find('e') == std::string::npos) {
    s += ".0";
  }
  return s;
}

}  // namespace

NetworkDocument parse_network(const std::string& text) {
  return NetworkParser(text).parse();
}

std::string print_network(const NetworkDocument& doc) {
  std::ostringstream os;
  std::map<std::string, const NodeDef*> defs;
  for (const NodeDef& def : doc.nodes) {
    defs[def.name] = &def;
    os << "node " << def.name << " { ";
    for (std::size_t i = 0; i < def.values.size(); ++i) {
      if (i) os << ", ";
      os << def.values[i];
    }
    os << " }\n";
  }
  for (const ArcSpec& arc : doc.arcs) {
    os << "arc " << arc.parent << " -> " << arc.child << "\n";
  }
  for (const CptSpec& cpt : doc.cpts) {
    os << "cpt " << cpt.child;
    if (cpt.parents.empty()) {
      os << " { ";
      for (std::size_t i = 0; i < cpt.rows[0].size(); ++i) {
        if (i) os << ", ";
        os << format_double(cpt.rows[0][i]);
      }
      os << " }\n";
      continue;
    }
    os << " | ";
    for (std::size_t i = 0; i < cpt.parents.size(); ++i) {
      if (i) os << ", ";
      os << cpt.parents[i];
    }
    os << " {\n";
    std::vector<const NodeDef*> parent_defs;
    for (const auto& p : cpt.parents) parent_defs.push_back(defs.at(p));
    std::vector<std::size_t> digits(cpt.parents.size(), 0);
    for (const auto& row : cpt.rows) {
      os << "  ";
      for (std::size_t k = 0; k < digits.size(); ++k) {
        if (k) os << ", ";
        os << parent_defs[k]->values[digits[k]];
      }
      os << ": ";
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) os << ", ";
        os << format_double(row[i]);
      }
      os << "\n";
      for (std::size_t k = digits.size(); k-- > 0;) {
        if (++digits[k] < parent_defs[k]->values.size()) break;
        digits[k] = 0;
      }
    }
    os << "}\n";
  }
  for (const auto& [node, value] : doc.evidence) {
    os << "evidence " << node << " = " << value << "\n";
  }
  return os.str();
}

BeliefNetwork document_to_network(const NetworkDocument& doc) {
  return build_network(doc.nodes, doc.arcs, doc.cpts);
}

EvidenceSet document_evidence(const NetworkDocument& doc,
                              const BeliefNetwork& net) {
  EvidenceSet evidence;
  for (const auto& [name, label] : doc.evidence) {
    NodeId id = net.node_or_fail(name);
    const auto& values = net.node(id).values;
    auto it = std::find(values.begin(), values.end(), label);
    if (it == values.end()) {
      fail(ErrorCode::UnknownNodeReference,
           "node '" + name + "' has no value '" + label + "'");
    }
    evidence.set(net, id, static_cast<std::size_t>(it - values.begin()));
  }
  return evidence;
}

UndirectedGraph parse_graph(const std::string& text) {
  Lexer lex(text);
  UndirectedGraph graph;
  std::map<std::string, std::size_t> index;
  while (lex.peek().kind != TokKind::End) {
    Token head = lex.next();
    if (head.kind != TokKind::Ident) {
      lex.error(head, "expected vertex or edge");
    }
    if (head.text == "vertex") {
      Token name = lex.next();
      if (name.kind != TokKind::Ident) lex.error(name, "expected vertex name");
      if (index.count(name.text)) {
        fail(ErrorCode::DuplicateDeclaration,
             "vertex '" + name.text + "' declared twice");
      }
      index[name.text] = graph.vertices.size();
      graph.vertices.push_back(name.text);
    } else if (head.text == "edge") {
      Token a = lex.next();
      if (a.kind != TokKind::Ident) lex.error(a, "expected vertex name");
      Token dash = lex.next();
      if (dash.kind != TokKind::Symbol || dash.text != "--") {
        lex.error(dash, "expected '--'");
      }
      Token b = lex.next();
      if (b.kind != TokKind::Ident) lex.error(b, "expected vertex name");
      auto ia = index.find(a.text);
      auto ib = index.find(b.text);
      if (ia == index.end() || ib == index.end()) {
        fail(ErrorCode::UnknownNodeReference,
             "edge references undeclared vertex '" +
                 (ia == index.end() ? a.text : b.text) + "'");
      }
      graph.edges.emplace_back(ia->second, ib->second);
    } else {
      lex.error(head, "expected vertex or edge, got '" + head.text + "'");
    }
  }
  validate_graph(graph);
  return graph;
}

std::string print_graph(const UndirectedGraph& graph) {
  std::ostringstream os;
  for (const auto& v : graph.vertices) os << "vertex " << v << "\n";
  for (auto [a, b] : graph.edges) {
    os << "edge " << graph.vertices[a] << " -- " << graph.vertices[b] << "\n";
  }
  return os.str();
}

}  // namespace bncut
