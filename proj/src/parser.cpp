#include "mcl/parser.hpp"

#include <cctype>
#include <cstdlib>
#include <functional>
#include <vector>

namespace mcl {

namespace {

enum class Tok {
  End, Ident, Number, At, Dot, Bang, AndAnd, OrOr, Arrow, LParen, RParen,
  LBracket, RBracket, Comma, Semi, Caret, Plus, Minus, Star,
  Lt, Le, Eq, Ne, Gt, Ge,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  double number = 0.0;
  int line = 1;
  int col = 1;
};

class Lexer {
 public:
  explicit Lexer(const std::string& src) : src_(src) { scan_all(); }
  const std::vector<Token>& tokens() const { return toks_; }

 private:
  void scan_all() {
    while (true) {
      skip_ws();
      if (pos_ >= src_.size()) break;
      toks_.push_back(scan_one());
    }
    Token end;
    end.kind = Tok::End;
    end.line = line_;
    end.col = col_;
    toks_.push_back(end);
  }

  void skip_ws() {
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '/') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  [[noreturn]] void fail(const std::string& msg) {
    throw ParseError(msg, line_, col_);
  }

  Token scan_one() {
    Token t;
    t.line = line_;
    t.col = col_;
    const char c = src_[pos_];
    auto two = [&](char second) {
      return pos_ + 1 < src_.size() && src_[pos_ + 1] == second;
    };
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string id;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
              src_[pos_] == '_')) {
        id += src_[pos_];
        advance();
      }
      t.kind = Tok::Ident;
      t.text = std::move(id);
      return t;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string num;
      bool seen_exp = false;
      while (pos_ < src_.size()) {
        const char d = src_[pos_];
        if (std::isdigit(static_cast<unsigned char>(d)) || d == '.') {
          num += d;
          advance();
        } else if ((d == 'e' || d == 'E') && !seen_exp) {
          seen_exp = true;
          num += d;
          advance();
          if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) {
            num += src_[pos_];
            advance();
          }
        } else {
          break;
        }
      }
      t.kind = Tok::Number;
      t.text = num;
      t.number = std::strtod(num.c_str(), nullptr);
      return t;
    }
    switch (c) {
      case '@': advance(); t.kind = Tok::At; return t;
      case '.': advance(); t.kind = Tok::Dot; return t;
      case '(': advance(); t.kind = Tok::LParen; return t;
      case ')': advance(); t.kind = Tok::RParen; return t;
      case '[': advance(); t.kind = Tok::LBracket; return t;
      case ']': advance(); t.kind = Tok::RBracket; return t;
      case ',': advance(); t.kind = Tok::Comma; return t;
      case ';': advance(); t.kind = Tok::Semi; return t;
      case '^': advance(); t.kind = Tok::Caret; return t;
      case '+': advance(); t.kind = Tok::Plus; return t;
      case '*': advance(); t.kind = Tok::Star; return t;
      case '=': advance(); t.kind = Tok::Eq; return t;
      case '-':
        advance();
        if (pos_ < src_.size() && src_[pos_] == '>') {
          advance();
          t.kind = Tok::Arrow;
        } else {
          t.kind = Tok::Minus;
        }
        return t;
      case '!':
        advance();
        if (pos_ < src_.size() && src_[pos_] == '=') {
          advance();
          t.kind = Tok::Ne;
        } else {
          t.kind = Tok::Bang;
        }
        return t;
      case '&':
        if (!two('&')) fail("single '&'");
        advance();
        advance();
        t.kind = Tok::AndAnd;
        return t;
      case '|':
        if (!two('|')) fail("single '|'");
        advance();
        advance();
        t.kind = Tok::OrOr;
        return t;
      case '<':
        advance();
        if (pos_ < src_.size() && src_[pos_] == '=') {
          advance();
          t.kind = Tok::Le;
        } else {
          t.kind = Tok::Lt;
        }
        return t;
      case '>':
        advance();
        if (pos_ < src_.size() && src_[pos_] == '=') {
          advance();
          t.kind = Tok::Ge;
        } else {
          t.kind = Tok::Gt;
        }
        return t;
      default:
        fail(std::string("unexpected character '") + c + "'");
    }
  }

  const std::string& src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  std::vector<Token> toks_;
};

class Parser {
 public:
  explicit Parser(const std::string& src) : lex_(src), toks_(lex_.tokens()) {}

  GlobalPtr run() {
    GlobalPtr f = global_implies();
    expect(Tok::End, "trailing input after formula");
    return f;
  }

 private:
  const Token& cur() const { return toks_[idx_]; }
  const Token& peek(std::size_t n = 1) const {
    return toks_[std::min(idx_ + n, toks_.size() - 1)];
  }
  Token eat() { return toks_[idx_++]; }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, cur().line, cur().col);
  }

  void expect(Tok k, const char* msg) {
    if (cur().kind != k) fail(msg);
    ++idx_;
  }

  bool accept(Tok k) {
    if (cur().kind != k) return false;
    ++idx_;
    return true;
  }

  bool at_keyword(const char* kw) const {
    return cur().kind == Tok::Ident && cur().text == kw;
  }

  // ---- global syntax ----

  GlobalPtr global_implies() {
    GlobalPtr f = global_or();
    while (cur().kind == Tok::Arrow) {
      eat();
      f = GlobalFormula::binary(GlobalFormula::Kind::Implies, f, global_or());
    }
    return f;
  }

  GlobalPtr global_or() {
    GlobalPtr f = global_and();
    while (cur().kind == Tok::OrOr) {
      eat();
      f = GlobalFormula::binary(GlobalFormula::Kind::Or, f, global_and());
    }
    return f;
  }

  GlobalPtr global_and() {
    GlobalPtr f = global_unary();
    while (cur().kind == Tok::AndAnd) {
      eat();
      f = GlobalFormula::binary(GlobalFormula::Kind::And, f, global_unary());
    }
    return f;
  }

  GlobalPtr global_unary() {
    if (accept(Tok::Bang)) return GlobalFormula::negate(global_unary());
    if (accept(Tok::At)) {
      if (cur().kind != Tok::Ident) fail("clock name expected after '@'");
      std::string clock = eat().text;
      expect(Tok::Dot, "'.' expected after clock binder");
      const Token at_body = cur();
      LocalPtr body = local_implies();
      check_clock_pairs(body, clock, at_body);
      return GlobalFormula::bind(std::move(clock), std::move(body));
    }
    if (accept(Tok::LParen)) {
      GlobalPtr f = global_implies();
      expect(Tok::RParen, "')' expected");
      return f;
    }
    fail("global formula expected ('@clock.', '!' or '(')");
  }

  void check_clock_pairs(const LocalPtr& f, const std::string& binder,
                         const Token& where) {
    std::function<void(const TermPtr&)> walk_term = [&](const TermPtr& t) {
      if (!t) return;
      if (t->kind == Term::Kind::ClockPair && t->name == binder)
        throw ParseError("clock pair '" + t->name + "^" + t->pair_target +
                             "' uses the binding clock as middle clock",
                         where.line, where.col);
      walk_term(t->traj_time);
      walk_term(t->lhs);
      walk_term(t->rhs);
    };
    std::function<void(const LocalPtr&)> walk = [&](const LocalPtr& g) {
      if (!g) return;
      for (const auto& a : g->args) walk_term(a);
      for (const auto& p : g->params) walk_term(p);
      walk_term(g->tl);
      walk_term(g->tr);
      walk(g->a);
      walk(g->b);
      walk(g->c);
    };
    walk(f);
  }

  // ---- local syntax ----

  LocalPtr local_implies() {
    LocalPtr f = local_or();
    while (cur().kind == Tok::Arrow) {
      eat();
      f = LocalFormula::binary(LocalFormula::Kind::Implies, f, local_or());
    }
    return f;
  }

  LocalPtr local_or() {
    LocalPtr f = local_and();
    while (cur().kind == Tok::OrOr) {
      eat();
      f = LocalFormula::binary(LocalFormula::Kind::Or, f, local_and());
    }
    return f;
  }

  LocalPtr local_and() {
    LocalPtr f = local_unary();
    while (cur().kind == Tok::AndAnd) {
      eat();
      f = LocalFormula::binary(LocalFormula::Kind::And, f, local_unary());
    }
    return f;
  }

  LocalPtr local_unary() {
    if (accept(Tok::Bang)) return LocalFormula::negate(local_unary());
    if ((at_keyword("F") || at_keyword("G")) &&
        peek().kind == Tok::LBracket) {
      const bool eventually = cur().text == "F";
      eat();
      eat();  // '['
      const std::int64_t lo = parse_int("interval lower bound expected");
      expect(Tok::Comma, "',' expected in interval");
      std::int64_t hi = 0;
      bool unbounded = false;
      if (at_keyword("inf")) {
        eat();
        unbounded = true;
      } else {
        hi = parse_int("interval upper bound or 'inf' expected");
      }
      expect(Tok::RBracket, "']' expected");
      if (!unbounded && lo > hi) fail("interval bounds must satisfy lo <= hi");
      return LocalFormula::modal(eventually ? LocalFormula::Kind::Eventually
                                            : LocalFormula::Kind::Globally,
                                 lo, hi, unbounded, local_unary());
    }
    if (at_keyword("if")) {
      eat();
      LocalPtr cond = local_implies();
      if (!at_keyword("then")) fail("'then' expected");
      eat();
      LocalPtr then_f = local_implies();
      if (!at_keyword("else")) fail("'else' expected");
      eat();
      LocalPtr else_f = local_implies();
      return LocalFormula::ite(std::move(cond), std::move(then_f),
                               std::move(else_f));
    }
    return local_primary();
  }

  LocalPtr local_primary() {
    if (at_keyword("true")) {
      eat();
      return LocalFormula::lit(true);
    }
    if (at_keyword("false")) {
      eat();
      return LocalFormula::lit(false);
    }
    if (cur().kind == Tok::LParen) {
      // '(... )' is a parenthesized local formula unless the matching ')'
      // is followed by a comparison or arithmetic operator, in which case
      // it opens a term.
      if (!paren_opens_term()) {
        eat();
        LocalPtr f = local_implies();
        expect(Tok::RParen, "')' expected");
        return f;
      }
      return comparison();
    }
    if (cur().kind == Tok::Ident && peek().kind == Tok::LParen &&
        call_has_semicolon()) {
      return predicate_atom();
    }
    return comparison();
  }

  // Scans from the current '(' to its match; reports whether the token after
  // the match continues a term.
  bool paren_opens_term() const {
    std::size_t i = idx_;
    int depth = 0;
    for (; i < toks_.size() && toks_[i].kind != Tok::End; ++i) {
      if (toks_[i].kind == Tok::LParen) ++depth;
      if (toks_[i].kind == Tok::RParen && --depth == 0) break;
    }
    if (i >= toks_.size()) return false;
    switch (toks_[i + 1].kind) {
      case Tok::Plus: case Tok::Minus: case Tok::Star:
      case Tok::Lt: case Tok::Le: case Tok::Eq:
      case Tok::Ne: case Tok::Gt: case Tok::Ge:
        return true;
      default:
        return false;
    }
  }

  // For IDENT '(' ...: a top-level ';' inside the parens marks a named
  // predicate; otherwise it is a variable/clock term.
  bool call_has_semicolon() const {
    std::size_t i = idx_ + 1;  // at '('
    int depth = 0;
    for (; i < toks_.size() && toks_[i].kind != Tok::End; ++i) {
      if (toks_[i].kind == Tok::LParen) ++depth;
      if (toks_[i].kind == Tok::RParen && --depth == 0) return false;
      if (toks_[i].kind == Tok::Semi && depth == 1) return true;
    }
    return false;
  }

  LocalPtr predicate_atom() {
    std::string name = eat().text;
    expect(Tok::LParen, "'(' expected");
    std::vector<TermPtr> args;
    if (cur().kind != Tok::Semi) {
      args.push_back(term());
      while (accept(Tok::Comma)) args.push_back(term());
    }
    expect(Tok::Semi, "';' expected between predicate arguments and parameters");
    std::vector<TermPtr> params;
    if (cur().kind != Tok::RParen) {
      params.push_back(term());
      while (accept(Tok::Comma)) params.push_back(term());
    }
    expect(Tok::RParen, "')' expected after predicate parameters");
    return LocalFormula::atom(std::move(name), std::move(args),
                              std::move(params));
  }

  LocalPtr comparison() {
    TermPtr l = term();
    CmpOp op;
    switch (cur().kind) {
      case Tok::Lt: op = CmpOp::Lt; break;
      case Tok::Le: op = CmpOp::Le; break;
      case Tok::Eq: op = CmpOp::Eq; break;
      case Tok::Ne: op = CmpOp::Ne; break;
      case Tok::Gt: op = CmpOp::Gt; break;
      case Tok::Ge: op = CmpOp::Ge; break;
      default: fail("comparison operator expected");
    }
    eat();
    return LocalFormula::cmp(op, std::move(l), term());
  }

  std::int64_t parse_int(const char* msg) {
    bool neg = false;
    if (cur().kind == Tok::Minus) {
      neg = true;
      eat();
    }
    if (cur().kind != Tok::Number) fail(msg);
    const Token t = eat();
    for (char c : t.text)
      if (!std::isdigit(static_cast<unsigned char>(c)))
        throw ParseError("integer expected", t.line, t.col);
    const std::int64_t v = std::strtoll(t.text.c_str(), nullptr, 10);
    return neg ? -v : v;
  }

  // ---- terms ----

  TermPtr term() { return term_addsub(); }

  TermPtr term_addsub() {
    TermPtr t = term_mul();
    while (cur().kind == Tok::Plus || cur().kind == Tok::Minus) {
      const bool add = eat().kind == Tok::Plus;
      t = Term::arith(add ? Term::Kind::Add : Term::Kind::Sub, t, term_mul());
    }
    return t;
  }

  TermPtr term_mul() {
    TermPtr t = term_factor();
    while (cur().kind == Tok::Star) {
      eat();
      t = Term::arith(Term::Kind::Mul, t, term_factor());
    }
    return t;
  }

  TermPtr term_factor() {
    if (cur().kind == Tok::Number) return Term::constant(eat().number);
    if (accept(Tok::LParen)) {
      TermPtr t = term();
      expect(Tok::RParen, "')' expected in term");
      return t;
    }
    if (cur().kind != Tok::Ident) fail("term expected");
    std::string name = eat().text;
    if (accept(Tok::Caret)) {
      if (cur().kind != Tok::Ident) fail("clock name expected after '^'");
      std::string target = eat().text;
      expect(Tok::LParen, "'(' expected after clock pair");
      const std::int64_t off = parse_int("clock pair offset expected");
      expect(Tok::RParen, "')' expected after clock pair offset");
      return Term::clock_pair(std::move(name), std::move(target), off);
    }
    std::int64_t off = 0;
    TermPtr traj;
    if (cur().kind == Tok::LParen && offset_paren()) {
      eat();
      off = parse_int("offset expected");
      expect(Tok::RParen, "')' expected after offset");
      if (accept(Tok::LParen)) {
        traj = term();
        expect(Tok::RParen, "')' expected after trajectory time");
      }
    }
    return Term::symbol(std::move(name), off, std::move(traj));
  }

  // IDENT '(' INT ')': offsets are a bare (possibly signed) integer.
  bool offset_paren() const {
    std::size_t i = idx_ + 1;
    if (toks_[i].kind == Tok::Minus) ++i;
    if (toks_[i].kind != Tok::Number) return false;
    for (char c : toks_[i].text)
      if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return toks_[i + 1].kind == Tok::RParen;
  }

  Lexer lex_;
  const std::vector<Token>& toks_;
  std::size_t idx_ = 0;
};

}  // namespace

GlobalPtr parse(const std::string& text) { return Parser(text).run(); }

}  // namespace mcl
