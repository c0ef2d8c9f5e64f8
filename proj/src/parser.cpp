#include "dfo/parser.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <sstream>

namespace dfo {

namespace {

enum class Tok {
  Ident,
  Int,
  LParen,
  RParen,
  LBracket,
  RBracket,
  LBrace,
  RBrace,
  Dot,
  Comma,
  Equal,
  NotEqual,
  Amp,
  Pipe,
  Bang,
  End
};

struct Token {
  Tok kind;
  std::string text;
  SourceSpan span;
};

class Lexer {
public:
  explicit Lexer(const std::string& text) : text_(text) { advance(); }

  const Token& peek() const { return current_; }

  Token take() {
    Token t = current_;
    advance();
    return t;
  }

private:
  const std::string& text_;
  size_t pos_ = 0;
  int line_ = 1, col_ = 1;
  Token current_;

  void bump(char c) {
    ++pos_;
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
  }

  void advance() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
      bump(text_[pos_]);
    SourceSpan span{line_, col_, 1};
    if (pos_ >= text_.size()) {
      current_ = {Tok::End, "end of input", span};
      return;
    }
    char c = text_[pos_];
    auto single = [&](Tok k) {
      bump(c);
      current_ = {k, std::string(1, c), span};
    };
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string word;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
              text_[pos_] == '_')) {
        word += text_[pos_];
        bump(text_[pos_]);
      }
      span.length = static_cast<int>(word.size());
      current_ = {Tok::Ident, word, span};
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string num;
      while (pos_ < text_.size() &&
             std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        num += text_[pos_];
        bump(text_[pos_]);
      }
      span.length = static_cast<int>(num.size());
      current_ = {Tok::Int, num, span};
      return;
    }
    switch (c) {
      case '(': single(Tok::LParen); return;
      case ')': single(Tok::RParen); return;
      case '[': single(Tok::LBracket); return;
      case ']': single(Tok::RBracket); return;
      case '{': single(Tok::LBrace); return;
      case '}': single(Tok::RBrace); return;
      case '.': single(Tok::Dot); return;
      case ',': single(Tok::Comma); return;
      case '=': single(Tok::Equal); return;
      case '&': single(Tok::Amp); return;
      case '|': single(Tok::Pipe); return;
      case '!':
        if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '=') {
          bump('!');
          bump('=');
          span.length = 2;
          current_ = {Tok::NotEqual, "!=", span};
          return;
        }
        single(Tok::Bang);
        return;
      default:
        throw ParseError(span, "a valid token", std::string(1, c));
    }
  }
};

bool is_keyword(const std::string& w) {
  return w == "exists" || w == "forall" || w == "loc" || w == "rel" ||
         w == "dstruct" || w == "predicates" || w == "elem";
}

class FormulaParser {
public:
  explicit FormulaParser(const std::string& text) : lex_(text) {}

  FormulaPtr parse() {
    FormulaPtr f = formula();
    expect(Tok::End, "end of input");
    return f;
  }

private:
  Lexer lex_;

  [[noreturn]] void fail(const std::string& expected) {
    throw ParseError(lex_.peek().span, expected, lex_.peek().text);
  }

  Token expect(Tok kind, const std::string& what) {
    if (lex_.peek().kind != kind) fail(what);
    return lex_.take();
  }

  std::string variable() {
    if (lex_.peek().kind != Tok::Ident || is_keyword(lex_.peek().text))
      fail("variable");
    return lex_.take().text;
  }

  int integer() {
    Token t = expect(Tok::Int, "integer");
    try {
      return std::stoi(t.text);
    } catch (const std::out_of_range&) {
      throw ParseError(t.span, "a representable integer", t.text);
    }
  }

  FormulaPtr formula() {
    if (lex_.peek().kind == Tok::Ident &&
        (lex_.peek().text == "exists" || lex_.peek().text == "forall")) {
      bool ex = lex_.take().text == "exists";
      std::string v = variable();
      expect(Tok::Dot, "'.'");
      FormulaPtr body = formula();
      return ex ? mk_exists(v, body) : mk_forall(v, body);
    }
    return disj();
  }

  FormulaPtr disj() {
    FormulaPtr f = conj();
    while (lex_.peek().kind == Tok::Pipe) {
      lex_.take();
      f = mk_or(f, conj());
    }
    return f;
  }

  FormulaPtr conj() {
    FormulaPtr f = neg();
    while (lex_.peek().kind == Tok::Amp) {
      lex_.take();
      f = mk_and(f, neg());
    }
    return f;
  }

  FormulaPtr neg() {
    if (lex_.peek().kind == Tok::Bang) {
      lex_.take();
      return mk_not(neg());
    }
    return atom();
  }

  FormulaPtr atom() {
    const Token& t = lex_.peek();
    if (t.kind == Tok::LParen) {
      lex_.take();
      FormulaPtr f = formula();
      expect(Tok::RParen, "')'");
      return f;
    }
    if (t.kind != Tok::Ident) fail("formula atom");
    if (t.text == "rel") {
      lex_.take();
      expect(Tok::LParen, "'('");
      int i = integer();
      expect(Tok::Comma, "','");
      int j = integer();
      expect(Tok::Comma, "','");
      std::string x = variable();
      expect(Tok::Comma, "','");
      std::string y = variable();
      expect(Tok::RParen, "')'");
      return mk_rel(i, j, x, y);
    }
    if (t.text == "loc") {
      lex_.take();
      expect(Tok::LBracket, "'['");
      int r = integer();
      expect(Tok::RBracket, "']'");
      expect(Tok::LParen, "'('");
      std::string x = variable();
      expect(Tok::RParen, "')'");
      expect(Tok::LBrace, "'{'");
      FormulaPtr body = formula();
      expect(Tok::RBrace, "'}'");
      return mk_loc(r, x, body);
    }
    if (is_keyword(t.text)) fail("formula atom");
    std::string name = lex_.take().text;
    if (lex_.peek().kind == Tok::LParen) {
      lex_.take();
      std::string x = variable();
      expect(Tok::RParen, "')'");
      return mk_pred(name, x);
    }
    if (lex_.peek().kind == Tok::Equal) {
      lex_.take();
      return mk_eq(name, variable());
    }
    if (lex_.peek().kind == Tok::NotEqual) {
      lex_.take();
      return mk_neq(name, variable());
    }
    fail("'(', '=' or '!='");
  }
};

} // namespace

FormulaPtr parse_formula(const std::string& text) {
  return FormulaParser(text).parse();
}

namespace {

// Print levels: 0 formula, 1 disjunction, 2 conjunction, 3 negation, 4 atom.
int natural_level(const Formula& f) {
  switch (f.kind) {
    case NodeKind::Exists:
    case NodeKind::Forall:
      return 0;
    case NodeKind::Or:
      return 1;
    case NodeKind::And:
      return 2;
    case NodeKind::Not:
      return f.lhs->kind == NodeKind::Eq ? 4 : 3; // `x != y` reads as an atom
    default:
      return 4;
  }
}

void ser(const FormulaPtr& f, int min_level, std::string& out) {
  if (natural_level(*f) < min_level) {
    out += "(";
    ser(f, 0, out);
    out += ")";
    return;
  }
  switch (f->kind) {
    case NodeKind::Pred:
      out += f->name + "(" + f->var + ")";
      break;
    case NodeKind::Rel:
      out += "rel(" + std::to_string(f->i) + "," + std::to_string(f->j) + "," +
             f->var + "," + f->var2 + ")";
      break;
    case NodeKind::Eq:
      out += f->var + " = " + f->var2;
      break;
    case NodeKind::Or:
      ser(f->lhs, 1, out);
      out += " | ";
      ser(f->rhs, 2, out);
      break;
    case NodeKind::And:
      ser(f->lhs, 2, out);
      out += " & ";
      ser(f->rhs, 3, out);
      break;
    case NodeKind::Not:
      if (f->lhs->kind == NodeKind::Eq) {
        out += f->lhs->var + " != " + f->lhs->var2;
      } else {
        out += "!";
        ser(f->lhs, 3, out);
      }
      break;
    case NodeKind::Exists:
    case NodeKind::Forall:
      out += (f->kind == NodeKind::Exists ? "exists " : "forall ") + f->var +
             ". ";
      ser(f->lhs, 0, out);
      break;
    case NodeKind::Loc:
      out += "loc[" + std::to_string(f->radius) + "](" + f->var + "){ ";
      ser(f->lhs, 0, out);
      out += " }";
      break;
  }
}

} // namespace

std::string serialize_formula(const FormulaPtr& f) {
  std::string out;
  ser(f, 0, out);
  return out;
}

namespace {

struct Line {
  int number = 0;
  std::string text;
};

std::vector<Line> content_lines(const std::string& text) {
  std::vector<Line> lines;
  std::istringstream in(text);
  std::string raw;
  int number = 0;
  while (std::getline(in, raw)) {
    ++number;
    size_t first = raw.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    if (raw[first] == '#') continue;
    lines.push_back({number, raw});
  }
  return lines;
}

struct WordCursor {
  const Line& line;
  size_t pos = 0;

  SourceSpan span_at(size_t start, size_t len) const {
    return SourceSpan{line.number, static_cast<int>(start) + 1,
                      static_cast<int>(len == 0 ? 1 : len)};
  }

  std::optional<std::pair<std::string, SourceSpan>> next() {
    while (pos < line.text.size() &&
           std::isspace(static_cast<unsigned char>(line.text[pos])))
      ++pos;
    if (pos >= line.text.size()) return std::nullopt;
    size_t start = pos;
    while (pos < line.text.size() &&
           !std::isspace(static_cast<unsigned char>(line.text[pos])))
      ++pos;
    return std::make_pair(line.text.substr(start, pos - start),
                          span_at(start, pos - start));
  }

  std::string rest() {
    while (pos < line.text.size() &&
           std::isspace(static_cast<unsigned char>(line.text[pos])))
      ++pos;
    std::string r = line.text.substr(pos);
    while (!r.empty() && std::isspace(static_cast<unsigned char>(r.back())))
      r.pop_back();
    return r;
  }
};

long long parse_nonneg(const std::string& word, const SourceSpan& span) {
  if (word.empty() ||
      word.find_first_not_of("0123456789") != std::string::npos)
    throw ParseError(span, "nonnegative integer", word);
  try {
    return std::stoll(word);
  } catch (const std::out_of_range&) {
    throw ParseError(span, "a representable integer", word);
  }
}

} // namespace

DataStructure parse_structure(const std::string& text) {
  auto lines = content_lines(text);
  size_t li = 0;
  auto eof_span = [&]() {
    int last = lines.empty() ? 1 : lines.back().number;
    return SourceSpan{last, 1, 1};
  };
  if (li >= lines.size())
    throw ParseError(eof_span(), "dstruct header", "end of input");

  WordCursor header{lines[li++]};
  auto w = header.next();
  if (!w || w->first != "dstruct")
    throw ParseError(w ? w->second : header.span_at(0, 1), "'dstruct'",
                     w ? w->first : "end of line");
  auto dim_word = header.next();
  if (!dim_word || dim_word->first.rfind("D=", 0) != 0)
    throw ParseError(dim_word ? dim_word->second : header.span_at(0, 1),
                     "'D=<int>'", dim_word ? dim_word->first : "end of line");
  int dim = static_cast<int>(
      parse_nonneg(dim_word->first.substr(2), dim_word->second));

  if (li >= lines.size())
    throw ParseError(eof_span(), "predicates line", "end of input");
  WordCursor preds_line{lines[li++]};
  w = preds_line.next();
  if (!w || w->first != "predicates")
    throw ParseError(w ? w->second : preds_line.span_at(0, 1), "'predicates'",
                     w ? w->first : "end of line");
  std::vector<std::string> pred_names;
  while (auto p = preds_line.next()) pred_names.push_back(p->first);

  std::vector<std::string> universe;
  std::vector<Value> values;
  std::vector<std::vector<std::string>> elem_preds;
  while (li < lines.size()) {
    WordCursor cur{lines[li++]};
    auto kw = cur.next();
    if (!kw || kw->first != "elem")
      throw ParseError(kw ? kw->second : cur.span_at(0, 1), "'elem'",
                       kw ? kw->first : "end of line");
    auto id = cur.next();
    if (!id) throw ParseError(cur.span_at(cur.pos, 1), "element id", "end of line");
    for (const auto& seen : universe)
      if (seen == id->first)
        throw ParseError(id->second, "fresh element id",
                         "duplicate '" + id->first + "'");
    auto colon = cur.next();
    if (!colon || colon->first != ":")
      throw ParseError(colon ? colon->second : cur.span_at(cur.pos, 1), "':'",
                       colon ? colon->first : "end of line");
    for (int f = 0; f < dim; ++f) {
      auto v = cur.next();
      if (!v || v->first[0] == '[')
        throw ParseError(v ? v->second : cur.span_at(cur.pos, 1),
                         std::to_string(dim) + " data values",
                         v ? v->first : "end of line");
      values.push_back(parse_nonneg(v->first, v->second));
    }
    std::string tail = cur.rest();
    std::vector<std::string> preds_here;
    if (!tail.empty()) {
      if (tail.front() != '[' || tail.back() != ']')
        throw ParseError(cur.span_at(cur.pos, tail.size()),
                         "'[pred,...]' or end of line", tail);
      std::string inner = tail.substr(1, tail.size() - 2);
      std::string item;
      std::istringstream items(inner);
      while (std::getline(items, item, ',')) {
        size_t a = item.find_first_not_of(" \t");
        size_t b = item.find_last_not_of(" \t");
        if (a == std::string::npos)
          throw ParseError(cur.span_at(cur.pos, tail.size()), "predicate name",
                           tail);
        item = item.substr(a, b - a + 1);
        bool declared = std::find(pred_names.begin(), pred_names.end(),
                                  item) != pred_names.end();
        if (!declared)
          throw ParseError(cur.span_at(cur.pos, tail.size()),
                           "declared predicate", item);
        preds_here.push_back(item);
      }
    }
    universe.push_back(id->first);
    elem_preds.push_back(std::move(preds_here));
  }

  if (universe.empty())
    throw ParseError(eof_span(), "at least one elem line", "end of input");

  std::map<std::string, std::vector<bool>> predicates;
  for (const auto& p : pred_names)
    predicates.emplace(p, std::vector<bool>(universe.size(), false));
  for (size_t e = 0; e < universe.size(); ++e)
    for (const auto& p : elem_preds[e]) predicates[p][e] = true;
  return DataStructure(std::move(universe), dim, std::move(values),
                       std::move(predicates));
}

std::string serialize_structure(const DataStructure& s) {
  std::ostringstream out;
  out << "dstruct D=" << s.dim() << "\n";
  out << "predicates";
  for (const auto& [name, members] : s.predicates()) out << " " << name;
  out << "\n";
  for (int e = 0; e < s.size(); ++e) {
    out << "elem " << s.elem_name(e) << " :";
    for (int f = 1; f <= s.dim(); ++f) out << " " << s.value(e, f);
    std::string preds;
    for (const auto& [name, members] : s.predicates()) {
      if (members[e]) {
        if (!preds.empty()) preds += ",";
        preds += name;
      }
    }
    if (!preds.empty()) out << " [" << preds << "]";
    out << "\n";
  }
  return out.str();
}

std::string serialize_with_centers(const DataStructure& s,
                                   const std::vector<std::string>& centers) {
  std::string head = "# centers: ";
  for (size_t k = 0; k < centers.size(); ++k) {
    if (k) head += ",";
    head += centers[k];
  }
  return head + "\n" + serialize_structure(s);
}

std::pair<DataStructure, std::vector<std::string>> parse_with_centers(
    const std::string& text) {
  std::istringstream in(text);
  std::string raw;
  int number = 0;
  std::vector<std::string> centers;
  bool found = false;
  while (std::getline(in, raw)) {
    ++number;
    size_t first = raw.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    if (raw.compare(first, 10, "# centers:") == 0) {
      std::string list = raw.substr(first + 10);
      std::istringstream items(list);
      std::string item;
      while (std::getline(items, item, ',')) {
        size_t a = item.find_first_not_of(" \t\r");
        size_t b = item.find_last_not_of(" \t\r");
        if (a == std::string::npos) continue;
        centers.push_back(item.substr(a, b - a + 1));
      }
      found = true;
      break;
    }
    if (raw[first] != '#') break; // structure body starts before any header
  }
  if (!found || centers.empty())
    throw ParseError(SourceSpan{number, 1, 1}, "'# centers: a,b' header",
                     "none");
  return {parse_structure(text), centers};
}

} // namespace dfo
