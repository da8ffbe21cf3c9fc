#include <doctest.h>

#include <thread>

#include "sprw/actor.hpp"
#include "sprw/dsl.hpp"
#include "sprw/errors.hpp"
#include "test_data.hpp"

using namespace sprw;
using sprw::test::sym;

namespace {

Program program(const std::string& text) { return parse_program(text); }

Envelope window_open(TimeMs ts) { return Envelope{Symbol{"window"}, {"w1", sym("open"), sym("kitchen")}, ts}; }

std::vector<std::string> labels(const std::vector<FiredReaction>& fired) {
  std::vector<std::string> out;
  for (const auto& f : fired) out.push_back(f.label.value_or("-"));
  return out;
}

HostCallback counter(const std::string& key) {
  return [key](const MatchResult&, const State& s) {
    State next = s;
    next[key] = s.value(key, 0) + 1;
    return next;
  };
}

}  // namespace

TEST_CASE("program bindings become emit reactions") {
  Actor actor(program(test::corpus("lighting")));
  CHECK(actor.reactions("on_motion") == std::vector<std::string>{"turn_on_light"});
  CHECK(actor.reactions("no_motion") == std::vector<std::string>{"turn_off_light"});
  CHECK_THROWS_AS(actor.reactions("motion"), ReactionError);
}

TEST_CASE("reactions fire in binding order and can be removed") {
  Actor actor(program(test::corpus("reactions")));
  actor.deliver(window_open(0));
  CHECK(labels(actor.step(0)) == std::vector<std::string>{"turn_off_heating", "turn_off_cooling"});

  actor.remove("turn_off_cooling", "open_window");
  actor.deliver(window_open(1));
  CHECK(labels(actor.step(1)) == std::vector<std::string>{"turn_off_heating"});

  actor.remove_reactions("open_window");
  actor.deliver(window_open(2));
  auto fired = actor.step(2);
  REQUIRE(fired.size() == 1);
  CHECK_FALSE(fired[0].label);
  CHECK(fired[0].match.pattern == "open_window");
}

TEST_CASE("reaction table errors") {
  Actor actor(program(test::corpus("reactions")));
  CHECK_THROWS_AS(actor.react_to("nope", ReactionRef::emit("x")), ReactionError);
  CHECK_THROWS_AS(actor.react_to("open_window", ReactionRef::emit("turn_off_heating")), ReactionError);
  CHECK_THROWS_AS(actor.remove("missing", "open_window"), ReactionError);
}

TEST_CASE("state threads through callbacks") {
  Actor actor(program("pattern open_window as {:window, id, :open, location}"), State{{"opened", 0}});
  actor.react_to("open_window", ReactionRef::callback("count", counter("opened")));
  actor.react_to("open_window", ReactionRef::callback("double", [](const MatchResult&, const State& s) {
    State next = s;
    next["opened"] = s["opened"].get<int>() * 2;
    return next;
  }));
  actor.deliver(window_open(0));
  auto fired = actor.step(0);
  REQUIRE(fired.size() == 2);
  CHECK(fired[0].before["opened"] == 0);
  CHECK(fired[0].after["opened"] == 1);
  CHECK(fired[1].before["opened"] == 1);
  CHECK(actor.state()["opened"] == 2);
}

TEST_CASE("a failing callback stops the remaining reactions") {
  Actor actor(program("pattern open_window as {:window, id, :open, location}"), State{{"n", 0}});
  actor.react_to("open_window", ReactionRef::callback("boom", [](const MatchResult&, const State&) -> State {
    throw std::runtime_error("sensor offline");
  }));
  actor.react_to("open_window", ReactionRef::callback("count", counter("n")));
  actor.deliver(window_open(0));
  CHECK(actor.step(0).empty());
  CHECK(actor.state()["n"] == 0);
  auto diags = actor.take_diagnostics();
  REQUIRE(diags.size() == 1);
  CHECK(diags[0].message.find("sensor offline") != std::string::npos);
}

TEST_CASE("rebinding inside a reaction takes effect afterwards") {
  Actor actor(program("pattern open_window as {:window, id, :open, location}"));
  bool rebound = false;
  actor.react_to("open_window", ReactionRef::callback("first", [&](const MatchResult&, const State& s) {
    if (!rebound) {
      actor.react_to("open_window", ReactionRef::emit("late"));
      actor.remove("first", "open_window");
      rebound = true;
    }
    return s;
  }));
  actor.deliver(window_open(0));
  actor.deliver(window_open(1));
  CHECK(labels(actor.step(1)) == std::vector<std::string>{"first", "first"});
  actor.deliver(window_open(2));
  CHECK(labels(actor.step(2)) == std::vector<std::string>{"late"});
}

TEST_CASE("two patterns matching one message fire in declaration order") {
  Actor actor(program("pattern b as {:x, v}\npattern a as {:x, w} when w > 0\n"
                      "react_to a, with: ra\nreact_to b, with: rb"));
  actor.deliver(Envelope{Symbol{"x"}, {5}, 0});
  CHECK(labels(actor.step(0)) == std::vector<std::string>{"rb", "ra"});
}

TEST_CASE("arrival and departure orderings") {
  Actor actor(program(test::corpus("home_presence")));
  auto motion = [](const char* id, const char* where, TimeMs ts) {
    return Envelope{Symbol{"motion"}, {sym(id), sym("on"), sym(where)}, ts};
  };
  actor.deliver(motion("m1", "front_door", 0));
  actor.deliver(Envelope{Symbol{"contact"}, {sym("c1"), sym("open"), sym("front_door")}, 5000});
  actor.deliver(motion("m2", "entrance_hall", 20000));
  CHECK(labels(actor.step(20000)) == std::vector<std::string>{"activate_home_scene"});
  actor.deliver(motion("m2", "entrance_hall", 300000));
  actor.deliver(Envelope{Symbol{"contact"}, {sym("c1"), sym("open"), sym("front_door")}, 310000});
  actor.deliver(motion("m1", "front_door", 330000));
  CHECK(labels(actor.step(330000)) == std::vector<std::string>{"activate_leave_scene"});
}

TEST_CASE("stamping and lifetime") {
  Actor actor(program("pattern p as {:a, x} and {:b, x}"), State::object(), 3600000);
  actor.deliver(Envelope{Symbol{"a"}, {1}, std::nullopt});
  CHECK(actor.step(100).empty());
  CHECK(actor.network().retained() == 1);
  actor.deliver(Envelope{Symbol{"b"}, {1}, 50});
  {
    auto fired = actor.step(200);
    REQUIRE(fired.size() == 1);
    CHECK(fired[0].match.messages[0]->ts == 0);
    CHECK(fired[0].match.messages[1]->ts == 100);
    CHECK(fired[0].match.messages[1]->id == 2);
  }

  actor.deliver(Envelope{Symbol{"a"}, {2}, 1000});
  actor.step(1000);
  actor.step(1000 + 3600001);
  CHECK(actor.network().retained() == 0);
  CHECK(actor.step(actor.clock()).empty());
  CHECK_THROWS_AS(actor.step(0), TimeRegression);
}

TEST_CASE("sends between two actors keep their order") {
  ActorSystem system;
  std::size_t rx = system.spawn(program("pattern pair as {:n, a} and {:n, b} when b == a + 1\nreact_to pair, with: ok"));
  std::thread sender([&] {
    for (int i = 0; i < 200; ++i) system.send(rx, Envelope{Symbol{"n"}, {i}, std::nullopt});
  });
  sender.join();
  auto fired = system.step_all(0);
  REQUIRE(fired.size() == 100);
  for (std::size_t k = 0; k < fired.size(); ++k) {
    const auto& m = fired[k].second.match.messages;
    CHECK(m[0]->attrs[0] == Value(static_cast<int>(2 * k)));
    CHECK(m[1]->attrs[0] == Value(static_cast<int>(2 * k + 1)));
  }
}
