#include "causat/parser.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <set>

#include "causat/errors.hpp"

namespace causat {
namespace {

enum class Tok { Ident, Number, Sym, End };

struct Token {
  Tok kind;
  std::string text;
  int line;
  int column;
};

bool identStart(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool identChar(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

std::vector<Token> lex(std::string_view s) {
  std::vector<Token> out;
  int line = 1;
  int column = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < s.size(); ++k, ++i) {
      unsigned char c = static_cast<unsigned char>(s[i]);
      if (c == '\n') {
        ++line;
        column = 1;
      } else if ((c & 0xC0) != 0x80) {
        ++column;
      }
    }
  };
  static const std::pair<std::string_view, std::string_view> symbols[] = {
      {"\xE2\x89\xA4", "<="}, {"\xE2\x89\xA5", ">="}, {"\xE2\x89\xA0", "!="},
      {"&&", "&&"}, {"||", "||"}, {"<=", "<="}, {">=", ">="}, {"!=", "!="},
      {"(", "("}, {")", ")"}, {"[", "["}, {"]", "]"}, {",", ","}, {".", "."},
      {"|", "|"}, {"!", "!"}, {"=", "="}, {"<", "<"}, {">", ">"},
      {"+", "+"}, {"-", "-"}, {"*", "*"},
  };
  while (i < s.size()) {
    char c = s[i];
    if (c == '#') {
      while (i < s.size() && s[i] != '\n') advance(1);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    int l = line;
    int col = column;
    if (identStart(c)) {
      std::size_t j = i;
      while (j < s.size() && identChar(s[j])) ++j;
      out.push_back({Tok::Ident, std::string(s.substr(i, j - i)), l, col});
      advance(j - i);
      continue;
    }
    if (digit(c)) {
      std::size_t j = i;
      while (j < s.size() && digit(s[j])) ++j;
      if (j + 1 < s.size() && (s[j] == '/' || s[j] == '.') && digit(s[j + 1])) {
        ++j;
        while (j < s.size() && digit(s[j])) ++j;
      }
      out.push_back({Tok::Number, std::string(s.substr(i, j - i)), l, col});
      advance(j - i);
      continue;
    }
    bool matched = false;
    for (const auto& [spelling, canonical] : symbols) {
      if (s.substr(i, spelling.size()) == spelling) {
        out.push_back({Tok::Sym, std::string(canonical), l, col});
        advance(spelling.size());
        matched = true;
        break;
      }
    }
    if (!matched) {
      std::string shown = (static_cast<unsigned char>(c) < 0x80) ? std::string(1, c) : "non-ASCII character";
      throw ParseError("unexpected character '" + shown + "'", l, col);
    }
  }
  out.push_back({Tok::End, "end of input", line, column});
  return out;
}

// Event tree as written, before bracket-free regions are collapsed into
// observational leaves.
struct RawEvent;
using RawPtr = std::shared_ptr<const RawEvent>;
struct RawEvent {
  enum class Kind { Atom, Bracket, Not, And, Or };
  Kind kind;
  PropPtr prop;  // Atom (the atom itself), Bracket (its body)
  Intervention intervention;
  RawPtr lhs;
  RawPtr rhs;
};

bool hasBracket(const RawPtr& r) {
  if (r->kind == RawEvent::Kind::Bracket) return true;
  if (r->kind == RawEvent::Kind::Atom) return false;
  return hasBracket(r->lhs) || (r->rhs && hasBracket(r->rhs));
}

PropPtr toProp(const RawPtr& r) {
  switch (r->kind) {
    case RawEvent::Kind::Atom: return r->prop;
    case RawEvent::Kind::Not: return propNot(toProp(r->lhs));
    case RawEvent::Kind::And: return propAnd(toProp(r->lhs), toProp(r->rhs));
    case RawEvent::Kind::Or: return propOr(toProp(r->lhs), toProp(r->rhs));
    case RawEvent::Kind::Bracket: break;
  }
  throw Error("internal: bracket inside propositional event");
}

CfPtr collapse(const RawPtr& r) {
  if (!hasBracket(r)) return obs(toProp(r));
  switch (r->kind) {
    case RawEvent::Kind::Bracket: return leaf(r->intervention, r->prop);
    case RawEvent::Kind::Not: return cfNot(collapse(r->lhs));
    case RawEvent::Kind::And: return cfAnd(collapse(r->lhs), collapse(r->rhs));
    case RawEvent::Kind::Or: return cfOr(collapse(r->lhs), collapse(r->rhs));
    case RawEvent::Kind::Atom: break;
  }
  throw Error("internal: unreachable event kind");
}

class Parser {
 public:
  Parser(std::string_view text, const Signature& sig, const ParseOptions& options)
      : tokens_(lex(text)), sig_(sig), options_(options) {
    for (const auto& v : sig.vars) {
      if (isKeyword(v)) throw ParseError("variable name '" + v + "' is a reserved word", 1, 1);
    }
  }

  FormulaPtr formulaDocument() {
    FormulaPtr f = formula();
    expectEnd();
    return f;
  }
  TermPtr termDocument() {
    TermPtr t = term();
    expectEnd();
    return t;
  }
  CfPtr eventDocument() {
    CfPtr e = collapse(event(true));
    expectEnd();
    return e;
  }

 private:
  struct DepthGuard {
    Parser& p;
    explicit DepthGuard(Parser& parser) : p(parser) {
      if (++p.depth_ > p.options_.maxDepth) {
        p.fail("nesting deeper than " + std::to_string(p.options_.maxDepth));
      }
    }
    ~DepthGuard() { --p.depth_; }
  };

  const Token& peek(std::size_t ahead = 0) const {
    return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
  }
  bool isSym(std::string_view s, std::size_t ahead = 0) const {
    return peek(ahead).kind == Tok::Sym && peek(ahead).text == s;
  }
  bool isWord(std::string_view s) const { return peek().kind == Tok::Ident && peek().text == s; }
  bool accept(std::string_view s) {
    if (isSym(s)) {
      ++pos_;
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, peek().line, peek().column); }
  [[noreturn]] void failAt(const Token& t, const std::string& msg) const { throw ParseError(msg, t.line, t.column); }
  void expect(std::string_view s) {
    if (!accept(s)) fail("expected '" + std::string(s) + "' but found '" + peek().text + "'");
  }
  void expectEnd() {
    if (peek().kind != Tok::End) fail("unexpected '" + peek().text + "' after complete input");
  }
  bool isRelop(std::size_t ahead = 0) const {
    for (auto op : {"<=", "<", "=", "!=", ">=", ">"}) {
      if (isSym(op, ahead)) return true;
    }
    return false;
  }

  // ------------------------------------------------------------- formulas

  FormulaPtr formula() {
    FormulaPtr f = conjunction();
    while (isWord("OR")) {
      ++pos_;
      f = fOr(f, conjunction());
    }
    return f;
  }

  FormulaPtr conjunction() {
    FormulaPtr f = negation();
    while (isWord("AND")) {
      ++pos_;
      f = fAnd(f, negation());
    }
    return f;
  }

  FormulaPtr negation() {
    DepthGuard guard(*this);
    if (isWord("NOT")) {
      ++pos_;
      return fNot(negation());
    }
    std::optional<ParseError> groupError;
    if (isSym("(") && !failedGroup_.count(pos_)) {
      // "(" opens either a parenthesized formula or a term; try the formula
      // reading first and fall back when it does not end a formula.
      std::size_t start = pos_;
      try {
        ++pos_;
        FormulaPtr f = formula();
        expect(")");
        if (!isRelop() && !isSym("+") && !isSym("-") && !isSym("*")) return f;
      } catch (const ParseError& e) {
        if (std::string_view(e.detail()).starts_with("nesting deeper")) throw;
        groupError = e;
      }
      failedGroup_.insert(start);
      pos_ = start;
    }
    try {
      return comparison();
    } catch (const ParseError& e) {
      if (groupError && std::pair(groupError->line(), groupError->column()) > std::pair(e.line(), e.column())) {
        throw *groupError;
      }
      throw;
    }
  }

  FormulaPtr comparison() {
    TermPtr left = term();
    RelOp op;
    if (accept("<=")) {
      op = RelOp::Le;
    } else if (accept("<")) {
      op = RelOp::Lt;
    } else if (accept("=")) {
      op = RelOp::Eq;
    } else if (accept("!=")) {
      op = RelOp::Ne;
    } else if (accept(">=")) {
      op = RelOp::Ge;
    } else if (accept(">")) {
      op = RelOp::Gt;
    } else {
      fail("expected a comparison operator but found '" + peek().text + "'");
    }
    return cmp(left, op, term());
  }

  // ---------------------------------------------------------------- terms

  TermPtr term() {
    TermPtr t = unary();
    while (true) {
      if (accept("+")) {
        t = add(t, unary());
      } else if (accept("-")) {
        t = sub(t, unary());
      } else {
        return t;
      }
    }
  }

  TermPtr unary() {
    DepthGuard guard(*this);
    if (isSym("-") && peek(1).kind != Tok::Number) {
      ++pos_;
      return neg(unary());
    }
    TermPtr t = primary();
    while (accept("*")) t = mul(t, primary());
    return t;
  }

  TermPtr primary() {
    DepthGuard guard(*this);
    const Token& tok = peek();
    if (tok.kind == Tok::Number || (isSym("-") && peek(1).kind == Tok::Number)) {
      bool negative = accept("-");
      const Token& num = peek();
      ++pos_;
      Rational r;
      try {
        r = parseRational(num.text);
      } catch (const Error& e) {
        failAt(num, e.what());
      }
      return constant(negative ? Rational(-r) : r);
    }
    if (tok.kind == Tok::Ident && tok.text == "P") {
      ++pos_;
      expect("(");
      CfPtr e = collapse(event(true));
      if (accept("|")) {
        CfPtr d = collapse(event(true));
        expect(")");
        return condProb(e, d);
      }
      expect(")");
      return prob(e);
    }
    if (tok.kind == Tok::Ident && tok.text == "sum") {
      ++pos_;
      const Token& name = peek();
      if (name.kind != Tok::Ident) fail("expected a dummy name after 'sum'");
      if (isKeyword(name.text)) failAt(name, "'" + name.text + "' is a reserved word");
      if (declared(name.text)) failAt(name, "dummy '" + name.text + "' clashes with a declared variable");
      if (std::find(scope_.begin(), scope_.end(), name.text) != scope_.end()) {
        failAt(name, "dummy '" + name.text + "' shadows an enclosing sum");
      }
      ++pos_;
      expect(".");
      scope_.push_back(name.text);
      TermPtr body = term();
      scope_.pop_back();
      return sum(name.text, body);
    }
    if (accept("(")) {
      TermPtr t = term();
      expect(")");
      return t;
    }
    fail("expected a term but found '" + tok.text + "'");
  }

  // --------------------------------------------------------------- events

  bool declared(const std::string& name) const {
    return std::find(sig_.vars.begin(), sig_.vars.end(), name) != sig_.vars.end();
  }

  std::string variable() {
    const Token& tok = peek();
    if (tok.kind != Tok::Ident || isKeyword(tok.text)) fail("expected a variable but found '" + tok.text + "'");
    if (!declared(tok.text)) {
      if (std::find(scope_.begin(), scope_.end(), tok.text) != scope_.end()) {
        fail("dummy '" + tok.text + "' used where a variable is expected");
      }
      fail("undeclared variable '" + tok.text + "'");
    }
    ++pos_;
    return tok.text;
  }

  ValueRef valueRef() {
    const Token& tok = peek();
    if (tok.kind == Tok::Number) {
      std::size_t digits = std::count_if(tok.text.begin(), tok.text.end(), digit);
      if (digits != tok.text.size()) fail("value '" + tok.text + "' is not an integer");
      if (tok.text.size() > 9 || !sig_.domain.contains(std::stoi(tok.text))) {
        fail("value " + tok.text + " outside Val = {0.." + std::to_string(sig_.domain.card - 1) + "}");
      }
      ++pos_;
      return ValueRef::literal(std::stoi(tok.text));
    }
    if (tok.kind == Tok::Ident) {
      if (std::find(scope_.begin(), scope_.end(), tok.text) == scope_.end()) {
        fail("unbound dummy '" + tok.text + "'");
      }
      ++pos_;
      return ValueRef::ofDummy(tok.text);
    }
    fail("expected a value but found '" + tok.text + "'");
  }

  RawPtr rawAtom() {
    std::string var = variable();
    bool negated = false;
    if (accept("!=")) {
      negated = true;
    } else {
      expect("=");
    }
    PropPtr a = atom(var, valueRef());
    if (negated) a = propNot(a);
    return std::make_shared<const RawEvent>(RawEvent{RawEvent::Kind::Atom, a, {}, nullptr, nullptr});
  }

  RawPtr event(bool allowBrackets) {
    RawPtr e = eventConjunction(allowBrackets);
    while (accept("||")) {
      e = std::make_shared<const RawEvent>(RawEvent{RawEvent::Kind::Or, nullptr, {}, e, eventConjunction(allowBrackets)});
    }
    return e;
  }

  RawPtr eventConjunction(bool allowBrackets) {
    RawPtr e = eventUnary(allowBrackets);
    while (accept("&&") || accept(",")) {
      e = std::make_shared<const RawEvent>(RawEvent{RawEvent::Kind::And, nullptr, {}, e, eventUnary(allowBrackets)});
    }
    return e;
  }

  RawPtr eventUnary(bool allowBrackets) {
    DepthGuard guard(*this);
    if (accept("!")) {
      return std::make_shared<const RawEvent>(RawEvent{RawEvent::Kind::Not, nullptr, {}, eventUnary(allowBrackets), nullptr});
    }
    if (accept("(")) {
      RawPtr e = event(allowBrackets);
      expect(")");
      return e;
    }
    if (isSym("[")) {
      if (!allowBrackets) fail("interventions cannot be nested inside a post-interventional event");
      Intervention alpha = intervention();
      RawPtr body;
      if (accept("(")) {
        body = event(false);
        expect(")");
      } else {
        body = rawAtom();
      }
      return std::make_shared<const RawEvent>(RawEvent{RawEvent::Kind::Bracket, toProp(body), std::move(alpha), nullptr, nullptr});
    }
    return rawAtom();
  }

  Intervention intervention() {
    expect("[");
    Intervention alpha;
    if (accept("]")) return alpha;
    do {
      const Token& at = peek();
      std::string var = variable();
      expect("=");
      ValueRef v = valueRef();
      for (const auto& it : alpha) {
        if (it.var == var) failAt(at, "variable " + var + " intervened twice");
      }
      alpha.push_back({var, v});
    } while (accept(","));
    expect("]");
    return alpha;
  }

  std::vector<Token> tokens_;
  const Signature& sig_;
  ParseOptions options_;
  std::size_t pos_ = 0;
  int depth_ = 0;
  std::vector<std::string> scope_;
  std::set<std::size_t> failedGroup_;

  friend Intervention causat::parseInterventionList(std::string_view, const Signature&);
};

}  // namespace

bool isKeyword(std::string_view word) {
  return word == "sum" || word == "P" || word == "AND" || word == "OR" || word == "NOT";
}

FormulaPtr parseFormula(std::string_view text, const Signature& sig, const ParseOptions& options) {
  return Parser(text, sig, options).formulaDocument();
}

TermPtr parseTerm(std::string_view text, const Signature& sig, const ParseOptions& options) {
  return Parser(text, sig, options).termDocument();
}

CfPtr parseEvent(std::string_view text, const Signature& sig, const ParseOptions& options) {
  return Parser(text, sig, options).eventDocument();
}

Intervention parseInterventionList(std::string_view text, const Signature& sig) {
  std::string bracketed = "[" + std::string(text) + "]";
  Parser p(bracketed, sig, ParseOptions{});
  Intervention alpha = p.intervention();
  p.expectEnd();
  return alpha;
}

}  // namespace causat
