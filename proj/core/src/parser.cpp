#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <limits>
#include <set>

#include "sprw/dsl.hpp"
#include "sprw/errors.hpp"

namespace sprw {

namespace {

enum class Tok {
  Ident,
  Label,   // `name:` keyword-list key
  Symbol,  // `:name`
  Number,
  String,
  LBrace, RBrace, LBracket, RBracket, LParen, RParen, Comma,
  Assign,  // =
  Eq, Ne, Lt, Le, Gt, Ge, Plus, Minus, Star, Slash,
  Alias,   // ~>
  Pipe,    // |>
  Arrow,   // ->
  At, Bang,
  End,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  int line = 1;
  int column = 1;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

const std::set<std::string, std::less<>>& reserved() {
  static const std::set<std::string, std::less<>> words = {
      "pattern", "as", "and", "or", "not", "when", "react_to", "fn", "end", "true", "false"};
  return words;
}

std::string describe(const Token& t) {
  switch (t.kind) {
    case Tok::End: return "end of input";
    case Tok::String: return "string \"" + t.text + "\"";
    case Tok::Label: return "'" + t.text + ":'";
    case Tok::Symbol: return "':" + t.text + "'";
    default: return "'" + t.text + "'";
  }
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      Token t;
      t.line = line_;
      t.column = col_;
      if (pos_ >= src_.size()) {
        t.kind = Tok::End;
        out.push_back(t);
        return out;
      }
      char c = src_[pos_];
      if (ident_start(c)) {
        std::size_t start = pos_;
        while (pos_ < src_.size() && ident_char(src_[pos_])) advance();
        t.text = std::string(src_.substr(start, pos_ - start));
        t.kind = Tok::Ident;
        if (peek(0) == ':' && peek(1) != ':' && !ident_char(peek(1))) {
          advance();
          t.kind = Tok::Label;
        }
      } else if (c == ':' && ident_start(peek(1))) {
        advance();
        std::size_t start = pos_;
        while (pos_ < src_.size() && ident_char(src_[pos_])) advance();
        t.text = std::string(src_.substr(start, pos_ - start));
        t.kind = Tok::Symbol;
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        lex_number(t);
      } else if (c == '"') {
        lex_string(t);
      } else {
        lex_punct(t);
      }
      out.push_back(std::move(t));
    }
  }

 private:
  char peek(std::size_t ahead) const {
    return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
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

  void skip_space() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  [[noreturn]] void fail(const std::string& what) {
    throw SyntaxError(line_, col_, {}, what);
  }

  void lex_number(Token& t) {
    std::size_t start = pos_;
    while (std::isdigit(static_cast<unsigned char>(peek(0)))) advance();
    if (peek(0) == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
      advance();
      while (std::isdigit(static_cast<unsigned char>(peek(0)))) advance();
    }
    if ((peek(0) == 'e' || peek(0) == 'E') &&
        (std::isdigit(static_cast<unsigned char>(peek(1))) ||
         ((peek(1) == '+' || peek(1) == '-') && std::isdigit(static_cast<unsigned char>(peek(2)))))) {
      advance();
      if (peek(0) == '+' || peek(0) == '-') advance();
      while (std::isdigit(static_cast<unsigned char>(peek(0)))) advance();
    }
    t.kind = Tok::Number;
    t.text = std::string(src_.substr(start, pos_ - start));
  }

  void lex_string(Token& t) {
    advance();
    std::string out;
    for (;;) {
      if (pos_ >= src_.size()) fail("unterminated string");
      char c = src_[pos_];
      if (c == '"') {
        advance();
        break;
      }
      if (c == '\\') {
        advance();
        if (pos_ >= src_.size()) fail("unterminated string");
        char e = src_[pos_];
        switch (e) {
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          case 'r': out += '\r'; break;
          case '"': out += '"'; break;
          case '\\': out += '\\'; break;
          default: fail(std::string("unknown escape \\") + e);
        }
        advance();
        continue;
      }
      out += c;
      advance();
    }
    t.kind = Tok::String;
    t.text = std::move(out);
  }

  void lex_punct(Token& t) {
    char c = peek(0);
    char n = peek(1);
    auto two = [&](Tok k, const char* text) {
      t.kind = k;
      t.text = text;
      advance();
      advance();
    };
    auto one = [&](Tok k) {
      t.kind = k;
      t.text = std::string(1, c);
      advance();
    };
    switch (c) {
      case '{': return one(Tok::LBrace);
      case '}': return one(Tok::RBrace);
      case '[': return one(Tok::LBracket);
      case ']': return one(Tok::RBracket);
      case '(': return one(Tok::LParen);
      case ')': return one(Tok::RParen);
      case ',': return one(Tok::Comma);
      case '+': return one(Tok::Plus);
      case '*': return one(Tok::Star);
      case '/': return one(Tok::Slash);
      case '@': return one(Tok::At);
      case '=': return n == '=' ? two(Tok::Eq, "==") : one(Tok::Assign);
      case '!': return n == '=' ? two(Tok::Ne, "!=") : one(Tok::Bang);
      case '<': return n == '=' ? two(Tok::Le, "<=") : one(Tok::Lt);
      case '>': return n == '=' ? two(Tok::Ge, ">=") : one(Tok::Gt);
      case '-': return n == '>' ? two(Tok::Arrow, "->") : one(Tok::Minus);
      case '~':
        if (n == '>') return two(Tok::Alias, "~>");
        break;
      case '|':
        if (n == '>') return two(Tok::Pipe, "|>");
        break;
      default: break;
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

class Parser {
 public:
  Parser(std::vector<Token> toks, GrammarCoverage* cov) : toks_(std::move(toks)), cov_(cov) {}

  Program program() {
    Program prog;
    std::set<std::string> names;
    while (!at(Tok::End)) {
      if (at_word("pattern")) {
        const Token& start = cur();
        PatternAst p = pattern_definition();
        if (!names.insert(p.name).second) {
          (void)start;
          throw ProgramError(ProgramError::Kind::DuplicatePattern, p.name);
        }
        prog.patterns.push_back(std::move(p));
      } else if (at_word("react_to")) {
        prog.bindings.push_back(react_to());
      } else {
        fail({"pattern", "react_to"});
      }
    }
    for (const auto& b : prog.bindings)
      if (!names.count(b.pattern)) throw ProgramError(ProgramError::Kind::UnknownPattern, b.pattern);
    return prog;
  }

  Duration duration_only() {
    Duration d = time();
    expect_end();
    return d;
  }

  Expr expr_only() {
    Expr e = expr();
    expect_end();
    return e;
  }

 private:
  const Token& cur() const { return toks_[pos_]; }
  bool at(Tok k) const { return cur().kind == k; }
  bool at_word(std::string_view w) const { return at(Tok::Ident) && cur().text == w; }
  bool at_label(std::string_view w) const { return at(Tok::Label) && cur().text == w; }

  void hit(const char* production) {
    if (cov_) cov_->hit(production);
  }

  [[noreturn]] void fail(std::vector<std::string> expected) {
    throw SyntaxError(cur().line, cur().column, std::move(expected), describe(cur()));
  }

  [[noreturn]] void fail_at(const Token& t, std::vector<std::string> expected) {
    throw SyntaxError(t.line, t.column, std::move(expected), describe(t));
  }

  Token take() { return toks_[pos_++]; }

  Token expect(Tok k, const char* what) {
    if (!at(k)) fail({what});
    return take();
  }

  void expect_word(const char* w) {
    if (!at_word(w)) fail({std::string("'") + w + "'"});
    ++pos_;
  }

  void expect_end() {
    if (!at(Tok::End)) fail({"end of input"});
  }

  std::string identifier(const char* what = "identifier") {
    if (!at(Tok::Ident) || reserved().count(cur().text)) fail({what});
    return take().text;
  }

  PatternAst pattern_definition() {
    hit("pattern-definition");
    expect_word("pattern");
    PatternAst p;
    p.name = identifier("pattern name");
    expect_word("as");
    hit("pattern");
    p.alternatives.push_back({});
    p.alternatives.back().push_back(elem_pattern());
    for (;;) {
      if (at_word("and")) {
        hit("and");
        ++pos_;
        p.alternatives.back().push_back(elem_pattern());
      } else if (at_word("or")) {
        hit("or");
        ++pos_;
        p.alternatives.push_back({});
        p.alternatives.back().push_back(elem_pattern());
      } else {
        break;
      }
    }
    if (at_word("when")) {
      hit("guard");
      ++pos_;
      p.guard = expr();
    }
    if (at(Tok::Comma)) {
      ++pos_;
      if (!at_label("options")) fail({"'options:'"});
      ++pos_;
      p.options = options();
    }
    return p;
  }

  PatternOptions options() {
    expect(Tok::LBracket, "'['");
    PatternOptions o;
    std::set<std::string> seen;
    for (;;) {
      if (!at(Tok::Label)) fail({"'seq:'", "'interval:'", "'last:'", "'debounce:'"});
      const Token label = cur();
      if (!seen.insert(label.text).second) fail_at(label, {"distinct option"});
      ++pos_;
      if (label.text == "seq") {
        hit("option-seq");
        o.seq = boolean();
      } else if (label.text == "interval") {
        hit("option-interval");
        o.interval = time();
      } else if (label.text == "last") {
        hit("option-last");
        o.last = boolean();
      } else if (label.text == "debounce") {
        hit("option-debounce");
        o.debounce = time();
      } else {
        fail_at(label, {"'seq:'", "'interval:'", "'last:'", "'debounce:'"});
      }
      if (at(Tok::Comma)) {
        ++pos_;
        continue;
      }
      expect(Tok::RBracket, "']'");
      return o;
    }
  }

  bool boolean() {
    if (at_word("true")) {
      ++pos_;
      return true;
    }
    if (at_word("false")) {
      ++pos_;
      return false;
    }
    fail({"boolean"});
  }

  Duration time() {
    hit("time");
    expect(Tok::LBrace, "'{' (time)");
    const Token amount_tok = cur();
    std::int64_t amount = integer();
    if (amount <= 0) fail_at(amount_tok, {"positive amount"});
    expect(Tok::Comma, "','");
    if (!at(Tok::Symbol)) fail({":secs", ":mins", ":hours", ":days", ":weeks"});
    Token unit = take();
    Duration d;
    d.amount = amount;
    if (unit.text == "secs") d.unit = TimeUnit::Secs;
    else if (unit.text == "mins") d.unit = TimeUnit::Mins;
    else if (unit.text == "hours") d.unit = TimeUnit::Hours;
    else if (unit.text == "days") d.unit = TimeUnit::Days;
    else if (unit.text == "weeks") d.unit = TimeUnit::Weeks;
    else fail_at(unit, {":secs", ":mins", ":hours", ":days", ":weeks"});
    hit((std::string("unit-") + unit.text).c_str());
    // Keeps the canonical millisecond value representable.
    constexpr std::int64_t kMaxAmount = std::numeric_limits<std::int64_t>::max() / 604800000 / 2;
    if (amount > kMaxAmount) fail_at(amount_tok, {"smaller amount"});
    expect(Tok::RBrace, "'}'");
    return d;
  }

  std::int64_t integer() {
    if (!at(Tok::Number)) fail({"integer"});
    Token t = cur();
    Value v = number_value(t, false);
    if (!v.is_int()) fail({"integer"});
    ++pos_;
    return v.as_int();
  }

  Value number_value(const Token& t, bool negative) {
    std::string text = (negative ? "-" : "") + t.text;
    bool is_float = t.text.find_first_of(".eE") != std::string::npos;
    if (!is_float) {
      std::int64_t v = 0;
      auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
      if (ec != std::errc() || p != text.data() + text.size()) fail_at(t, {"integer in range"});
      return Value(v);
    }
    char* endp = nullptr;
    double d = std::strtod(text.c_str(), &endp);
    return Value(d);
  }

  ElemPattern elem_pattern() {
    hit("elem-pattern");
    ElemPattern e;
    if (at_word("not")) {
      hit("not");
      ++pos_;
      e.negated = true;
    }
    if (at(Tok::LBrace)) {
      hit("selector-literal");
      e.base = selector_literal();
    } else if (at(Tok::Ident) && !reserved().count(cur().text)) {
      hit("selector-ref");
      e.base = named_ref();
    } else {
      fail({"elem-pattern"});
    }
    if (at(Tok::LBracket)) {
      ++pos_;
      for (;;) {
        const Token start = cur();
        ElemOperator op = elem_operator();
        if (e.find_operator(op.kind)) fail_at(start, {"distinct operator"});
        e.operators.push_back(op);
        if (at(Tok::Comma)) {
          ++pos_;
          continue;
        }
        expect(Tok::RBracket, "']'");
        break;
      }
    }
    bool seen_fold = false;
    while (at(Tok::Pipe)) {
      ++pos_;
      if (at_word("fold")) {
        hit("transformer-fold");
        e.transformers.push_back(fold());
        seen_fold = true;
      } else if (at_word("bind")) {
        hit("transformer-bind");
        if (!seen_fold) fail({"fold before bind"});
        ++pos_;
        expect(Tok::LParen, "'('");
        Bind b{identifier()};
        expect(Tok::RParen, "')'");
        e.transformers.push_back(b);
      } else {
        fail({"fold", "bind"});
      }
    }
    return e;
  }

  ElemOperator elem_operator() {
    if (!at(Tok::Label)) fail({"'window:'", "'debounce:'", "'every:'", "'count:'"});
    const Token label = take();
    ElemOperator op;
    if (label.text == "window") {
      hit("operator-window");
      op.kind = ElemOperator::Kind::Window;
      op.duration = time();
    } else if (label.text == "debounce") {
      hit("operator-debounce");
      op.kind = ElemOperator::Kind::Debounce;
      op.duration = time();
    } else if (label.text == "every" || label.text == "count") {
      hit(label.text == "every" ? "operator-every" : "operator-count");
      op.kind = label.text == "every" ? ElemOperator::Kind::Every : ElemOperator::Kind::Count;
      const Token n = cur();
      op.n = integer();
      if (op.n <= 0) fail_at(n, {"positive number"});
    } else {
      fail_at(label, {"'window:'", "'debounce:'", "'every:'", "'count:'"});
    }
    return op;
  }

  Fold fold() {
    ++pos_;  // fold
    expect(Tok::LParen, "'('");
    Fold f;
    f.init = expr();
    expect(Tok::Comma, "','");
    expect_word("fn");
    expect(Tok::LParen, "'('");
    expect(Tok::LBrace, "'{' (tuple pattern)");
    for (;;) {
      if (at(Tok::Ident) && cur().text == "_") {
        ++pos_;
        f.fn.params.push_back(std::nullopt);
      } else {
        f.fn.params.push_back(identifier("identifier or '_'"));
      }
      if (at(Tok::Comma)) {
        ++pos_;
        continue;
      }
      expect(Tok::RBrace, "'}'");
      break;
    }
    expect(Tok::Comma, "','");
    f.fn.acc = identifier("accumulator name");
    expect(Tok::RParen, "')'");
    expect(Tok::Arrow, "'->'");
    f.fn.body = expr();
    expect_word("end");
    expect(Tok::RParen, "')'");
    return f;
  }

  Selector selector_literal() {
    expect(Tok::LBrace, "'{'");
    Selector s;
    if (!at(Tok::Symbol)) fail({"message type symbol"});
    s.type = Symbol{take().text};
    while (at(Tok::Comma)) {
      ++pos_;
      s.terms.push_back(attribute());
    }
    expect(Tok::RBrace, "'}'");
    return s;
  }

  Term attribute() {
    if (at(Tok::At) || at(Tok::Bang)) {
      bool must = at(Tok::Bang);
      hit(must ? "logic-var-must" : "logic-var-may");
      ++pos_;
      std::string name = identifier();
      return must ? Term::must_distinct(std::move(name)) : Term::may_distinct(std::move(name));
    }
    if (at(Tok::Symbol)) {
      hit("attribute-symbol");
      return Term::constant(Value::sym(take().text));
    }
    if (at(Tok::Ident) && !reserved().count(cur().text)) {
      hit("logic-var");
      return Term::var(take().text);
    }
    if (at(Tok::Number) || at(Tok::String) || at(Tok::Minus) || at_word("true") || at_word("false")) {
      hit("attribute-value");
      return Term::constant(literal());
    }
    fail({"attribute"});
  }

  Value literal() {
    if (at(Tok::Minus)) {
      ++pos_;
      if (!at(Tok::Number)) fail({"number"});
      return number_value(take(), true);
    }
    if (at(Tok::Number)) return number_value(take(), false);
    if (at(Tok::String)) return Value(take().text);
    if (at_word("true")) {
      ++pos_;
      return Value(true);
    }
    if (at_word("false")) {
      ++pos_;
      return Value(false);
    }
    if (at(Tok::Symbol)) return Value::sym(take().text);
    fail({"value"});
  }

  NamedRef named_ref() {
    NamedRef r;
    r.name = take().text;
    if (!at(Tok::LBrace)) return r;
    ++pos_;
    for (;;) {
      Refinement ref;
      if (at(Tok::At) || at(Tok::Bang)) {
        hit("distinct-mark");
        ref.kind = Refinement::Kind::Mark;
        ref.mark = at(Tok::Bang) ? Term::Kind::MustDistinct : Term::Kind::MayDistinct;
        ++pos_;
        ref.var = identifier();
      } else {
        ref.var = identifier("refinement");
        if (at(Tok::Assign)) {
          hit("inline-guard");
          ++pos_;
          ref.kind = Refinement::Kind::InlineGuard;
          ref.expr = expr();
        } else if (at(Tok::Alias)) {
          hit("alias-op");
          ++pos_;
          ref.kind = Refinement::Kind::Alias;
          ref.target = identifier();
        } else {
          fail({"'='", "'~>'"});
        }
      }
      r.refinements.push_back(std::move(ref));
      if (at(Tok::Comma)) {
        ++pos_;
        continue;
      }
      expect(Tok::RBrace, "'}'");
      return r;
    }
  }

  // Expressions. Precedence, loosest first: or, and, not, comparison,
  // additive, multiplicative.
  Expr expr() { return or_expr(); }

  Expr or_expr() {
    Expr lhs = and_expr();
    while (at_word("or")) {
      ++pos_;
      lhs = Expr::binary(Expr::Op::Or, std::move(lhs), and_expr());
    }
    return lhs;
  }

  Expr and_expr() {
    Expr lhs = not_expr();
    while (at_word("and")) {
      ++pos_;
      lhs = Expr::binary(Expr::Op::And, std::move(lhs), not_expr());
    }
    return lhs;
  }

  Expr not_expr() {
    if (at_word("not")) {
      ++pos_;
      return Expr::negate(not_expr());
    }
    return cmp_expr();
  }

  Expr cmp_expr() {
    Expr lhs = add_expr();
    for (;;) {
      Expr::Op op;
      switch (cur().kind) {
        case Tok::Eq: op = Expr::Op::Eq; break;
        case Tok::Ne: op = Expr::Op::Ne; break;
        case Tok::Lt: op = Expr::Op::Lt; break;
        case Tok::Le: op = Expr::Op::Le; break;
        case Tok::Gt: op = Expr::Op::Gt; break;
        case Tok::Ge: op = Expr::Op::Ge; break;
        default: return lhs;
      }
      ++pos_;
      lhs = Expr::binary(op, std::move(lhs), add_expr());
    }
  }

  Expr add_expr() {
    Expr lhs = mul_expr();
    while (at(Tok::Plus) || at(Tok::Minus)) {
      Expr::Op op = at(Tok::Plus) ? Expr::Op::Add : Expr::Op::Sub;
      ++pos_;
      lhs = Expr::binary(op, std::move(lhs), mul_expr());
    }
    return lhs;
  }

  Expr mul_expr() {
    Expr lhs = primary();
    while (at(Tok::Star) || at(Tok::Slash)) {
      Expr::Op op = at(Tok::Star) ? Expr::Op::Mul : Expr::Op::Div;
      ++pos_;
      lhs = Expr::binary(op, std::move(lhs), primary());
    }
    return lhs;
  }

  Expr primary() {
    if (at(Tok::LParen)) {
      ++pos_;
      Expr e = expr();
      expect(Tok::RParen, "')'");
      return e;
    }
    if (at(Tok::Ident) && !reserved().count(cur().text)) return Expr::var(take().text);
    if (at(Tok::Number) || at(Tok::String) || at(Tok::Symbol) || at(Tok::Minus) || at_word("true") ||
        at_word("false"))
      return Expr::constant(literal());
    fail({"expression"});
  }

  ReactionBinding react_to() {
    hit("react-to");
    ++pos_;
    ReactionBinding b;
    b.pattern = identifier("pattern name");
    expect(Tok::Comma, "','");
    if (!at_label("with")) fail({"'with:'"});
    ++pos_;
    if (at_word("emit") && toks_[pos_ + 1].kind == Tok::LParen) {
      pos_ += 2;
      b.label = identifier("reaction label");
      expect(Tok::RParen, "')'");
    } else {
      b.label = identifier("reaction label");
    }
    return b;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  GrammarCoverage* cov_;
};

}  // namespace

const std::vector<std::string>& GrammarCoverage::productions() {
  static const std::vector<std::string> all = {
      "pattern-definition", "pattern",          "and",              "or",
      "elem-pattern",       "not",              "selector-literal", "selector-ref",
      "attribute-value",    "attribute-symbol", "logic-var",        "logic-var-may",
      "logic-var-must",     "guard",            "inline-guard",     "alias-op",
      "distinct-mark",      "operator-window",  "operator-debounce", "operator-every",
      "operator-count",     "transformer-fold", "transformer-bind", "option-seq",
      "option-interval",    "option-last",      "option-debounce",  "time",
      "unit-secs",          "unit-mins",        "unit-hours",       "unit-days",
      "unit-weeks",         "react-to",
  };
  return all;
}

Program parse_program(std::string_view text, GrammarCoverage* coverage) {
  Parser p(Lexer(text).run(), coverage);
  return p.program();
}

Duration parse_duration(std::string_view text) {
  Parser p(Lexer(text).run(), nullptr);
  return p.duration_only();
}

Expr parse_expr(std::string_view text) {
  Parser p(Lexer(text).run(), nullptr);
  return p.expr_only();
}

}  // namespace sprw
