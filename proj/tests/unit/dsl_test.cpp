#include <doctest.h>

#include <random>

#include "sprw/dsl.hpp"
#include "sprw/errors.hpp"
#include "test_data.hpp"

using namespace sprw;
using sprw::test::corpus;
using sprw::test::sym;

TEST_CASE("elementary pattern parses to one selector leaf") {
  Program prog = parse_program("pattern open_window as {:window, id, :open, location}");
  REQUIRE(prog.patterns.size() == 1);
  const PatternAst& p = prog.patterns[0];
  CHECK(p.name == "open_window");
  REQUIRE(p.alternatives.size() == 1);
  REQUIRE(p.alternatives[0].size() == 1);
  const Selector& s = p.alternatives[0][0].selector();
  CHECK(s.type == Symbol{"window"});
  CHECK(s.arity() == 3);
  CHECK(s.terms[0] == Term::var("id"));
  CHECK(s.terms[1] == Term::constant(sym("open")));
  CHECK(s.terms[2] == Term::var("location"));
}

TEST_CASE("empty body is a syntax error at end of input") {
  try {
    parse_program("pattern p as");
    FAIL("expected SyntaxError");
  } catch (const SyntaxError& e) {
    CHECK(e.line() == 1);
    CHECK(e.found() == "end of input");
    CHECK(!e.expected().empty());
  }
}

TEST_CASE("interval and seq options") {
  Program prog = parse_program(corpus("interval"));
  const PatternAst* p = prog.find("occupied_home");
  REQUIRE(p);
  REQUIRE(p->alternatives.size() == 1);
  CHECK(p->alternatives[0].size() == 3);
  CHECK(p->options.seq);
  REQUIRE(p->options.interval);
  CHECK(p->options.interval->millis() == 60000);
  CHECK_FALSE(p->options.last);
}

TEST_CASE("unknown option lists the valid ones") {
  try {
    parse_program("pattern p as {:a, x}, options: [ordered: true]");
    FAIL("expected SyntaxError");
  } catch (const SyntaxError& e) {
    const auto& exp = e.expected();
    for (const char* o : {"'seq:'", "'interval:'", "'last:'", "'debounce:'"})
      CHECK(std::find(exp.begin(), exp.end(), o) != exp.end());
  }
}

TEST_CASE("program-level errors") {
  CHECK_THROWS_AS(parse_program("pattern a as {:x, y}\npattern a as {:z}"), ProgramError);
  CHECK_THROWS_AS(parse_program("pattern a as {:x, y}\nreact_to b, with: f"), ProgramError);
  CHECK_THROWS_AS(parse_program("pattern a as {:x, y}[count: 0]"), Error);
  CHECK_THROWS_AS(parse_program("pattern a as {x, y}"), SyntaxError);
}

TEST_CASE("durations") {
  CHECK(parse_duration("{2, :mins}").millis() == 120000);
  CHECK(parse_duration("{3, :weeks}").millis() == 3LL * 7 * 24 * 3600 * 1000);
  CHECK(parse_duration("{1, :days}").millis() == 86400000);
  CHECK_THROWS_AS(parse_duration("{2, :fortnights}"), SyntaxError);
}

TEST_CASE("corpus round-trips byte-stably") {
  for (const auto& path : test::list_dir(test::data_dir() / "corpus", ".sprw")) {
    CAPTURE(path.filename().string());
    Program first = parse_program(test::read_file(path));
    std::string printed = pretty_print(first);
    Program second = parse_program(printed);
    CHECK(second == first);
    CHECK(pretty_print(second) == printed);
  }
}

TEST_CASE("corpus exercises every grammar production") {
  GrammarCoverage cov;
  for (const auto& path : test::list_dir(test::data_dir() / "corpus", ".sprw"))
    parse_program(test::read_file(path), &cov);
  for (const auto& prod : GrammarCoverage::productions()) {
    CAPTURE(prod);
    CHECK(cov.counts[prod] > 0);
  }
}

namespace {

// Independent AST generator for print/parse round-trips.
class AstGen {
 public:
  explicit AstGen(std::uint64_t seed) : rng_(seed) {}

  Program program() {
    Program prog;
    int n = pick(1, 4);
    for (int i = 0; i < n; ++i) prog.patterns.push_back(pattern("p" + std::to_string(i), i));
    for (const auto& p : prog.patterns)
      if (chance(0.5)) prog.bindings.push_back({p.name, "r_" + p.name});
    return prog;
  }

 private:
  int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool chance(double p) { return std::bernoulli_distribution(p)(rng_); }
  std::string ident() { return std::string(1, static_cast<char>('a' + pick(0, 5))) + std::to_string(pick(0, 2)); }

  Value value() {
    switch (pick(0, 4)) {
      case 0: return sym(ident());
      case 1: return Value(std::int64_t{pick(-50, 500)});
      case 2: return Value(pick(-400, 400) / 8.0);
      case 3: return Value(std::string(chance(0.3) ? "say \"hi\"\\" : "lab"));
      default: return Value(chance(0.5));
    }
  }

  Expr expr(int depth) {
    if (depth == 0 || chance(0.3)) return chance(0.5) ? Expr::var(ident()) : Expr::constant(value());
    if (chance(0.15)) return Expr::negate(expr(depth - 1));
    auto op = static_cast<Expr::Op>(pick(0, 11));
    return Expr::binary(op, expr(depth - 1), expr(depth - 1));
  }

  Duration duration() { return Duration{pick(1, 90), static_cast<TimeUnit>(pick(0, 4))}; }

  Term term() {
    switch (pick(0, 3)) {
      case 0: return Term::constant(value());
      case 1: return Term::must_distinct(ident());
      case 2: return Term::may_distinct(ident());
      default: return Term::var(ident());
    }
  }

  ElemPattern elem(int index) {
    ElemPattern e;
    e.negated = chance(0.15);
    if (index > 0 && chance(0.3)) {
      NamedRef ref{"p" + std::to_string(pick(0, index - 1)), {}};
      int k = pick(0, 2);
      for (int i = 0; i < k; ++i) {
        Refinement r;
        r.kind = static_cast<Refinement::Kind>(pick(0, 2));
        r.var = ident();
        if (r.kind == Refinement::Kind::InlineGuard) r.expr = expr(1);
        if (r.kind == Refinement::Kind::Alias) r.target = ident();
        if (r.kind == Refinement::Kind::Mark) r.mark = chance(0.5) ? Term::Kind::MustDistinct : Term::Kind::MayDistinct;
        ref.refinements.push_back(std::move(r));
      }
      e.base = std::move(ref);
    } else {
      Selector s{Symbol{ident()}, {}};
      int arity = pick(0, 4);
      for (int i = 0; i < arity; ++i) s.terms.push_back(term());
      e.base = std::move(s);
    }
    for (int k = 0; k < 4; ++k) {
      if (!chance(0.25)) continue;
      ElemOperator op;
      op.kind = static_cast<ElemOperator::Kind>(k);
      if (k == 0 || k == 1) op.duration = duration();
      else op.n = pick(1, 9);
      e.operators.push_back(op);
    }
    int folds = pick(0, 2);
    for (int i = 0; i < folds; ++i) {
      FoldFn fn;
      int width = pick(1, 4);
      for (int j = 0; j < width; ++j) fn.params.push_back(chance(0.5) ? std::optional<std::string>(ident()) : std::nullopt);
      fn.acc = "acc";
      fn.body = expr(2);
      e.transformers.push_back(Fold{expr(1), std::move(fn)});
      if (chance(0.7)) e.transformers.push_back(Bind{ident()});
    }
    return e;
  }

  PatternAst pattern(std::string name, int index) {
    PatternAst p;
    p.name = std::move(name);
    int alts = pick(1, 3);
    for (int a = 0; a < alts; ++a) {
      Alternative alt;
      int leaves = pick(1, 3);
      for (int l = 0; l < leaves; ++l) alt.push_back(elem(index));
      p.alternatives.push_back(std::move(alt));
    }
    if (chance(0.5)) p.guard = expr(3);
    p.options.seq = chance(0.3);
    p.options.last = chance(0.3);
    if (chance(0.3)) p.options.interval = duration();
    if (chance(0.2)) p.options.debounce = duration();
    return p;
  }

  std::mt19937_64 rng_;
};

}  // namespace

TEST_CASE("random ASTs survive print and parse") {
  for (std::uint64_t seed = 1; seed <= 400; ++seed) {
    Program prog = AstGen(seed).program();
    std::string text = pretty_print(prog);
    CAPTURE(seed);
    CAPTURE(text);
    Program back = parse_program(text);
    CHECK(back == prog);
  }
}

TEST_CASE("expressions print with the parentheses they need") {
  Expr e = Expr::binary(Expr::Op::Mul, Expr::binary(Expr::Op::Add, Expr::var("a"), Expr::var("b")), Expr::var("c"));
  CHECK(parse_expr(pretty_print(e)) == e);
  Expr left = Expr::binary(Expr::Op::Sub, Expr::var("a"), Expr::binary(Expr::Op::Sub, Expr::var("b"), Expr::var("c")));
  CHECK(parse_expr(pretty_print(left)) == left);
  CHECK(parse_expr("a - b - c") ==
        Expr::binary(Expr::Op::Sub, Expr::binary(Expr::Op::Sub, Expr::var("a"), Expr::var("b")), Expr::var("c")));
}
