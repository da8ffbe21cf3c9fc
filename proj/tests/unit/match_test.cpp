#include <doctest.h>

#include "sprw/dsl.hpp"
#include "sprw/errors.hpp"
#include "sprw/match.hpp"
#include "test_data.hpp"

using namespace sprw;
using sprw::test::msg;
using sprw::test::sym;

namespace {

PatternSpec spec_of(const std::string& text, const std::string& name) {
  Program p = expand(parse_program(text));
  return compile_pattern(*p.find(name));
}

// Owns candidates and exposes them as per-leaf views.
struct Buffers {
  std::vector<std::vector<Candidate>> owned;
  std::vector<std::vector<const Candidate*>> views;

  Buffers(const AlternativeSpec& alt, const std::vector<Message>& msgs) : owned(alt.leaves.size()) {
    for (const auto& m : msgs) {
      auto ptr = std::make_shared<const Message>(m);
      for (std::size_t l = 0; l < alt.leaves.size(); ++l) {
        if (!alt.leaves[l].alpha.constant_tests_pass(m)) continue;
        if (auto b = unify_selector(alt.leaves[l].selector, m, {})) owned[l].push_back({ptr, *b});
      }
    }
    for (auto& buf : owned) {
      auto& v = views.emplace_back();
      for (auto& c : buf) v.push_back(&c);
    }
  }
  LeafBuffers span() const { return LeafBuffers(views); }
};

std::vector<MsgId> ids(const Combination& c) {
  std::vector<MsgId> out;
  for (const auto& g : c.groups)
    for (const auto* cand : g) out.push_back(cand->msg->id);
  return out;
}

const std::string kHome = test::corpus("home_presence");

}  // namespace

TEST_CASE("last picks the newest hall motion") {
  PatternSpec s = spec_of(kHome, "occupied_home");
  std::vector<Message> msgs = {
      msg(1, 1000, "motion", {"m2", sym("on"), sym("entrance_hall")}),
      msg(2, 2000, "motion", {"m2", sym("on"), sym("entrance_hall")}),
      msg(3, 10000, "motion", {"m1", sym("on"), sym("front_door")}),
      msg(4, 12000, "contact", {"c1", sym("open"), sym("front_door")}),
      msg(5, 20000, "motion", {"m2", sym("on"), sym("entrance_hall")}),
  };
  Buffers b(s.alternatives[0], msgs);
  auto c = select_combination(s, 0, b.span(), 20000);
  REQUIRE(c);
  CHECK(ids(*c) == std::vector<MsgId>{3, 4, 5});
}

TEST_CASE("seq rejects the wrong arrival order") {
  PatternSpec s = spec_of(kHome, "occupied_home");
  std::vector<Message> msgs = {
      msg(1, 0, "motion", {"m2", sym("on"), sym("entrance_hall")}),
      msg(2, 5000, "contact", {"c1", sym("open"), sym("front_door")}),
      msg(3, 10000, "motion", {"m1", sym("on"), sym("front_door")}),
  };
  Buffers b(s.alternatives[0], msgs);
  CHECK_FALSE(select_combination(s, 0, b.span(), 10000));
}

TEST_CASE("interval boundary") {
  const std::string text = "pattern p as {:a, x} and {:b, y}, options: [interval: {60, :secs}]";
  PatternSpec s = spec_of(text, "p");
  Buffers within(s.alternatives[0], {msg(1, 0, "a", {1}), msg(2, 59000, "b", {2})});
  CHECK(select_combination(s, 0, within.span(), 59000));
  Buffers edge(s.alternatives[0], {msg(1, 0, "a", {1}), msg(2, 60000, "b", {2})});
  CHECK(select_combination(s, 0, edge.span(), 60000));
  Buffers beyond(s.alternatives[0], {msg(1, 0, "a", {1}), msg(2, 61000, "b", {2})});
  CHECK_FALSE(select_combination(s, 0, beyond.span(), 61000));
}

TEST_CASE("messages in a combination are distinct") {
  PatternSpec s = spec_of("pattern p as {:a, x} and {:a, y}", "p");
  Buffers one(s.alternatives[0], {msg(1, 0, "a", {1})});
  CHECK_FALSE(select_combination(s, 0, one.span(), 0));
  Buffers two(s.alternatives[0], {msg(1, 0, "a", {1}), msg(2, 1, "a", {2})});
  auto c = select_combination(s, 0, two.span(), 1);
  REQUIRE(c);
  CHECK(ids(*c) == std::vector<MsgId>{1, 2});
}

TEST_CASE("count groups are strictly ordered") {
  PatternSpec s = spec_of("pattern p as {:h, id, @code}[count: 3]", "p");
  Buffers b(s.alternatives[0], {msg(1, 0, "h", {"b1", "c1"}), msg(2, 1, "h", {"b1", "c2"}),
                                msg(3, 2, "h", {"b2", "c3"}), msg(4, 3, "h", {"b1", "c1"})});
  auto c = select_combination(s, 0, b.span(), 3);
  REQUIRE(c);
  CHECK(ids(*c) == std::vector<MsgId>{1, 2, 4});
}

TEST_CASE("pure window takes every consistent candidate") {
  PatternSpec s = spec_of("pattern p as {:c, meter, @v}[window: {1, :hours}]", "p");
  Buffers b(s.alternatives[0], {msg(1, 0, "c", {"m1", 1}), msg(2, 1, "c", {"m2", 2}), msg(3, 2, "c", {"m1", 3})});
  auto c = select_combination(s, 0, b.span(), 2);
  REQUIRE(c);
  CHECK(ids(*c) == std::vector<MsgId>{1, 3});
}

TEST_CASE("compile errors") {
  CHECK_THROWS_AS(spec_of("pattern p as {:a, x} and not {:b, x}[count: 2]", "p"), CompileError);
  CHECK_THROWS_AS(spec_of("pattern p as not {:b, x}", "p"), CompileError);
  Program unexpanded = parse_program("pattern a as {:x, y}\npattern b as a");
  CHECK_THROWS_AS(compile_pattern(*unexpanded.find("b")), CompileError);
}

TEST_CASE("negation is checked once its variables are bound") {
  PatternSpec s = spec_of("pattern p as not {:m, room}[window: {2, :mins}] and {:l, room} and {:x, y}", "p");
  const auto& alt = s.alternatives[0];
  CHECK(alt.positive == std::vector<std::size_t>{1, 2});
  CHECK(alt.negative == std::vector<std::size_t>{0});
  CHECK(alt.negation_check_after == std::vector<int>{0});
  CHECK(s.negation_windows == std::vector<TimeMs>{120000});

  PatternSpec free = spec_of("pattern p as {:l, room} and not {:m, other}[window: {2, :mins}]", "p");
  CHECK(free.alternatives[0].negation_check_after == std::vector<int>{-1});
}

TEST_CASE("expiry edges") {
  PatternSpec s = spec_of("pattern p as {:a, x}[window: {1, :secs}]", "p");
  const LeafSpec& leaf = s.alternatives[0].leaves[0];
  CHECK_FALSE(expired(leaf, 0, 999, std::nullopt));
  CHECK(expired(leaf, 0, 1000, std::nullopt));
  CHECK(*expiry_due(leaf, 0, std::nullopt) == 1000);

  PatternSpec plain = spec_of("pattern p as {:a, x}", "p");
  const LeafSpec& unbounded = plain.alternatives[0].leaves[0];
  CHECK_FALSE(expiry_due(unbounded, 0, std::nullopt));
  CHECK_FALSE(expired(unbounded, 0, 3600000, 3600000));
  CHECK(expired(unbounded, 0, 3600001, 3600000));
  CHECK(*expiry_due(unbounded, 0, 3600000) == 3600001);
}

TEST_CASE("alpha signatures carry constant tests only") {
  PatternSpec a = spec_of("pattern p as {:motion, id, :on, room} when room == :hall", "p");
  PatternSpec b = spec_of("pattern q as {:motion, mid, :on, r} when r == :kitchen", "q");
  CHECK(a.alternatives[0].leaves[0].alpha == b.alternatives[0].leaves[0].alpha);
  CHECK(a.alternatives[0].leaves[0].alpha.describe() == "{:motion, _, :on, _}");
}
