#include <cctype>
#include <map>
#include <optional>

#include "redalert/builtins.hpp"
#include "redalert/errors.hpp"
#include "redalert/program.hpp"

namespace redalert {
namespace {

struct Token {
  enum class Kind { Atom, QuotedAtom, Var, Int, Punct, End, Eof };
  Kind kind = Kind::Eof;
  std::string text;
  std::int64_t value = 0;
  int line = 1;
  int column = 1;
  bool layout_before = false;  // whitespace or comment precedes the token
};

bool symbol_char(char c) { return std::string_view("+-*/\\^<>=~:.?@#&$").find(c) != std::string_view::npos; }
bool alnum(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    bool layout = skip_layout();
    Token t;
    t.line = line_;
    t.column = col_;
    t.layout_before = layout;
    if (pos_ >= src_.size()) return t;
    char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) advance();
      t.kind = Token::Kind::Int;
      t.text = std::string(src_.substr(start, pos_ - start));
      try {
        t.value = std::stoll(t.text);
      } catch (const std::out_of_range&) {
        throw ParseError("integer literal out of range", t.line, t.column);
      }
      return t;
    }
    if (c == '_' || std::isupper(static_cast<unsigned char>(c))) {
      t.kind = Token::Kind::Var;
      t.text = take_while(alnum);
      return t;
    }
    if (std::islower(static_cast<unsigned char>(c))) {
      t.kind = Token::Kind::Atom;
      t.text = take_while(alnum);
      return t;
    }
    if (c == '\'') return quoted(t);
    if (c == '"') throw ParseError("strings are not supported", t.line, t.column);
    if (std::string_view("()[]{},|").find(c) != std::string_view::npos) {
      advance();
      t.kind = Token::Kind::Punct;
      t.text = std::string(1, c);
      return t;
    }
    if (c == '!' || c == ';') {
      advance();
      t.kind = Token::Kind::Atom;
      t.text = std::string(1, c);
      return t;
    }
    if (c == '.') {
      char n = pos_ + 1 < src_.size() ? src_[pos_ + 1] : ' ';
      if (std::isspace(static_cast<unsigned char>(n)) || n == '%') {
        advance();
        t.kind = Token::Kind::End;
        t.text = ".";
        return t;
      }
    }
    if (symbol_char(c)) {
      t.kind = Token::Kind::Atom;
      t.text = take_while(symbol_char);
      return t;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", t.line, t.column);
  }

  int line() const { return line_; }
  int column() const { return col_; }

 private:
  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  template <class Pred>
  std::string take_while(Pred p) {
    std::size_t start = pos_;
    while (pos_ < src_.size() && p(src_[pos_])) advance();
    return std::string(src_.substr(start, pos_ - start));
  }

  bool skip_layout() {
    bool any = false;
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == '%') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '*') {
        int l = line_, k = col_;
        advance();
        advance();
        while (pos_ + 1 < src_.size() && !(src_[pos_] == '*' && src_[pos_ + 1] == '/')) advance();
        if (pos_ + 1 >= src_.size()) throw ParseError("unterminated block comment", l, k);
        advance();
        advance();
      } else {
        break;
      }
      any = true;
    }
    return any;
  }

  Token quoted(Token t) {
    advance();
    std::string s;
    while (true) {
      if (pos_ >= src_.size()) throw ParseError("unterminated quoted atom", t.line, t.column);
      char c = src_[pos_];
      if (c == '\'') {
        if (pos_ + 1 < src_.size() && src_[pos_ + 1] == '\'') {
          s += '\'';
          advance();
          advance();
          continue;
        }
        advance();
        break;
      }
      if (c == '\\' && pos_ + 1 < src_.size()) {
        advance();
        char e = src_[pos_];
        s += e == 'n' ? '\n' : e == 't' ? '\t' : e;
        advance();
        continue;
      }
      s += c;
      advance();
    }
    t.kind = Token::Kind::QuotedAtom;
    t.text = std::move(s);
    return t;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

enum class Assoc { XFX, XFY, YFX };
struct InfixOp {
  int priority;
  Assoc assoc;
};

const std::map<std::string, InfixOp>& infix_ops() {
  static const std::map<std::string, InfixOp> ops = {
      {":-", {1200, Assoc::XFX}}, {"-->", {1200, Assoc::XFX}}, {";", {1100, Assoc::XFY}},
      {"|", {1100, Assoc::XFY}},  {"->", {1050, Assoc::XFY}},  {",", {1000, Assoc::XFY}},
      {"=", {700, Assoc::XFX}},   {"\\=", {700, Assoc::XFX}},  {"==", {700, Assoc::XFX}},
      {"\\==", {700, Assoc::XFX}}, {"=<", {700, Assoc::XFX}},  {"<", {700, Assoc::XFX}},
      {">=", {700, Assoc::XFX}},  {">", {700, Assoc::XFX}},    {"=:=", {700, Assoc::XFX}},
      {"=\\=", {700, Assoc::XFX}}, {"is", {700, Assoc::XFX}},  {"=..", {700, Assoc::XFX}},
      {"+", {500, Assoc::YFX}},   {"-", {500, Assoc::YFX}},    {"*", {400, Assoc::YFX}},
      {"/", {400, Assoc::YFX}},   {"//", {400, Assoc::YFX}},   {"mod", {400, Assoc::YFX}}};
  return ops;
}

const std::map<std::string, int>& prefix_ops() {
  static const std::map<std::string, int> ops = {{"-", 200}, {"\\+", 900}, {":-", 1200}};
  return ops;
}

class Parser {
 public:
  explicit Parser(std::string_view src) : lex_(src) { tok_ = lex_.next(); }

  bool at_eof() const { return tok_.kind == Token::Kind::Eof; }

  /// One '.'-terminated term; anonymous variables get clause-unique names.
  Term read_clause_term() {
    anon_ = 0;
    Term t = parse(1200);
    expect_end();
    return t;
  }

  Term read_standalone() {
    anon_ = 0;
    Term t = parse(1200);
    if (tok_.kind == Token::Kind::End) advance();
    if (!at_eof()) error("unexpected trailing input");
    return t;
  }

  [[noreturn]] void error(const std::string& msg) const {
    if (tok_.kind == Token::Kind::Eof) throw ParseError(msg + " at end of input", tok_.line, tok_.column);
    throw ParseError(msg + " near '" + tok_.text + "'", tok_.line, tok_.column);
  }

  int line() const { return tok_.line; }

 private:
  void advance() { tok_ = lex_.next(); }

  void expect_end() {
    if (tok_.kind != Token::Kind::End) error("operator expected or missing '.'");
    advance();
  }

  void expect_punct(const char* p) {
    if (tok_.kind != Token::Kind::Punct || tok_.text != p) error(std::string("expected '") + p + "'");
    advance();
  }

  bool is_punct(const char* p) const { return tok_.kind == Token::Kind::Punct && tok_.text == p; }

  bool starts_term() const {
    switch (tok_.kind) {
      case Token::Kind::Atom:
        return !infix_ops().count(tok_.text) || prefix_ops().count(tok_.text);
      case Token::Kind::QuotedAtom:
      case Token::Kind::Var:
      case Token::Kind::Int: return true;
      case Token::Kind::Punct: return tok_.text == "(" || tok_.text == "[" || tok_.text == "{";
      default: return false;
    }
  }

  Term parse(int max_prec) {
    auto [left, left_prec] = parse_primary(max_prec);
    while (true) {
      std::string name;
      if (tok_.kind == Token::Kind::Atom) name = tok_.text;
      else if (tok_.kind == Token::Kind::Punct && (tok_.text == "," || tok_.text == "|")) name = tok_.text;
      else break;
      auto it = infix_ops().find(name);
      if (it == infix_ops().end()) break;
      const InfixOp op = it->second;
      if (op.priority > max_prec) break;
      int left_max = op.assoc == Assoc::YFX ? op.priority : op.priority - 1;
      int right_max = op.assoc == Assoc::XFY ? op.priority : op.priority - 1;
      if (left_prec > left_max) break;
      advance();
      Term right = parse(right_max);
      if (name == "|") name = ";";
      left = Term::compound(name, {std::move(left), std::move(right)});
      left_prec = op.priority;
    }
    return left;
  }

  std::vector<Term> parse_args() {
    std::vector<Term> args;
    expect_punct("(");
    args.push_back(parse(999));
    while (is_punct(",")) {
      advance();
      args.push_back(parse(999));
    }
    expect_punct(")");
    return args;
  }

  std::pair<Term, int> parse_primary(int max_prec) {
    Token t = tok_;
    switch (t.kind) {
      case Token::Kind::Int: advance(); return {Term::integer(t.value), 0};
      case Token::Kind::Var:
        advance();
        if (t.text == "_") return {Term::var("_G" + std::to_string(++anon_)), 0};
        return {Term::var(t.text), 0};
      case Token::Kind::Punct:
        if (t.text == "(") {
          advance();
          Term inner = parse(1200);
          expect_punct(")");
          return {inner, 0};
        }
        if (t.text == "[") return {parse_list(), 0};
        if (t.text == "{") {
          advance();
          if (is_punct("}")) {
            advance();
            return {Term::atom("{}"), 0};
          }
          Term inner = parse(1200);
          expect_punct("}");
          return {Term::compound("{}", {inner}), 0};
        }
        error("unexpected '" + t.text + "'");
      case Token::Kind::Atom:
      case Token::Kind::QuotedAtom: {
        advance();
        if (is_punct("(") && !tok_.layout_before) return {Term::compound(t.text, parse_args()), 0};
        if (t.kind == Token::Kind::Atom) {
          if (t.text == "-" && tok_.kind == Token::Kind::Int && !tok_.layout_before) {
            std::int64_t v = tok_.value;
            advance();
            return {Term::integer(-v), 0};
          }
          auto pit = prefix_ops().find(t.text);
          if (pit != prefix_ops().end() && starts_term()) {
            int p = pit->second;
            if (p > max_prec) p = 999;
            Term arg = parse(p);
            return {Term::compound(t.text, {arg}), p};
          }
          int p = 0;
          if (auto it = infix_ops().find(t.text); it != infix_ops().end()) p = std::min(it->second.priority, max_prec);
          return {Term::atom(t.text), p};
        }
        return {Term::atom(t.text), 0};
      }
      case Token::Kind::End:
      case Token::Kind::Eof: error("unexpected end of clause");
    }
    error("unexpected token");
  }

  Term parse_list() {
    expect_punct("[");
    if (is_punct("]")) {
      advance();
      return Term::nil();
    }
    std::vector<Term> elems{parse(999)};
    while (is_punct(",")) {
      advance();
      elems.push_back(parse(999));
    }
    Term tail = Term::nil();
    if (is_punct("|")) {
      advance();
      tail = parse(999);
    }
    expect_punct("]");
    return Term::list(elems, tail);
  }

  Lexer lex_;
  Token tok_;
  int anon_ = 0;
};

bool unsupported_control(const std::string& name, std::size_t arity) {
  static const std::map<std::string, std::vector<std::size_t>> names = {
      {"\\+", {1}},    {"not", {1}},     {"call", {1, 2, 3, 4}}, {"assert", {1}},  {"asserta", {1}},
      {"assertz", {1}}, {"retract", {1}}, {"findall", {3}},       {"bagof", {3}},   {"setof", {3}},
      {"catch", {3}},  {"throw", {1}},   {"->", {2}},            {"*->", {2}},     {"forall", {2}},
      {"=..", {2}},    {"-->", {2}}};
  auto it = names.find(name);
  if (it == names.end()) return false;
  for (auto a : it->second)
    if (a == arity) return true;
  return false;
}

Goal term_to_goal(const Term& t, const std::string& where) {
  switch (t.kind) {
    case Term::Kind::Var: throw UnsupportedError("call/1 (variable goal " + t.name + ")", where);
    case Term::Kind::Int: throw UnsupportedError("integer goal " + std::to_string(t.value), where);
    case Term::Kind::Atom:
      if (t.name == "!") return Goal::cut();
      if (t.name == "true") return Goal::truth();
      if (t.name == "fail" || t.name == "false") return Goal::fail();
      if (unsupported_control(t.name, 0)) throw UnsupportedError(t.name, where);
      return Goal::call(t.name, {});
    case Term::Kind::Compound: break;
  }
  const std::string& f = t.name;
  if (f == "," && t.arity() == 2)
    return Goal::conj({term_to_goal(t.args[0], where), term_to_goal(t.args[1], where)});
  if (f == ";" && t.arity() == 2) {
    if (t.args[0].is_compound() && t.args[0].name == "->" && t.args[0].arity() == 2)
      throw UnsupportedError("-> (if-then-else)", where);
    return Goal::disj(term_to_goal(t.args[0], where), term_to_goal(t.args[1], where));
  }
  if (f == "{}" && t.arity() == 1) return term_to_goal(t.args[0], where);
  if (f == "=" && t.arity() == 2) return Goal::post(t.args[0], t.args[1]);
  if (unsupported_control(f, t.arity())) throw UnsupportedError(f + "/" + std::to_string(t.arity()), where);
  if (is_builtin(PredKey{f, t.arity()})) return Goal::builtin(f, t.args);
  return Goal::call(f, t.args);
}

Clause term_to_clause(const Term& t, int line) {
  Term head = t;
  Goal body = Goal::truth();
  if (t.is_compound() && t.name == ":-") {
    if (t.arity() == 1) throw UnsupportedError(":- directive", "line " + std::to_string(line));
    head = t.args[0];
  }
  std::string where = "line " + std::to_string(line);
  if (head.is_var() || head.is_int())
    throw ParseError("clause head must be an atom or compound term", line, 1);
  PredKey k{head.name, head.arity()};
  static const std::vector<std::string> control = {",", ";", "!", "{}", "true", "fail", "false", "->"};
  if (is_builtin(k) || std::find(control.begin(), control.end(), head.name) != control.end() ||
      unsupported_control(head.name, head.arity()))
    throw UnsupportedError("redefinition of " + k.str(), where);
  where = k.str() + " (" + where + ")";
  if (t.is_compound() && t.name == ":-") body = term_to_goal(t.args[1], where);
  return Clause{std::move(head), std::move(body), line};
}

}  // namespace

Program parse_program(std::string_view source) {
  Parser p(source);
  Program prog;
  while (!p.at_eof()) {
    int line = p.line();
    Term t = p.read_clause_term();
    prog.add(term_to_clause(t, line));
  }
  return prog;
}

Goal parse_goal(std::string_view source) {
  Parser p(source);
  if (p.at_eof()) p.error("empty goal");
  return term_to_goal(p.read_standalone(), "query");
}

Term parse_term(std::string_view source) {
  Parser p(source);
  if (p.at_eof()) p.error("empty term");
  return p.read_standalone();
}

}  // namespace redalert
