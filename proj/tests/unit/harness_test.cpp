#include <doctest.h>

#include "sprw/dsl.hpp"
#include "sprw/harness.hpp"
#include "test_data.hpp"

using namespace sprw;
using sprw::test::sym;

namespace {

std::size_t trace_error_line(const std::string& text) {
  try {
    parse_trace(text);
  } catch (const TraceError& e) {
    return e.line();
  }
  FAIL("expected TraceError");
  return 0;
}

}  // namespace

TEST_CASE("trace parsing") {
  auto trace = parse_trace(
      "{\"ts\":0,\"type\":\":a\",\"attrs\":[\":on\",1,2.5,\"\\\\:lit\",true]}\n"
      "\n"
      "{\"advance\":10}\n"
      "{\"ts\":10,\"type\":\"b\"}\n");
  REQUIRE(trace.size() == 3);
  const auto& m = std::get<Message>(trace[0]);
  CHECK(m.id == 1);
  CHECK(m.type == Symbol{"a"});
  CHECK(m.attrs == std::vector<Value>{sym("on"), Value(1), Value(2.5), Value(":lit"), Value(true)});
  CHECK(std::get<Advance>(trace[1]).to == 10);
  const auto& b = std::get<Message>(trace[2]);
  CHECK(b.id == 2);
  CHECK(b.attrs.empty());
  CHECK(parse_trace(render_trace(trace)) == trace);
}

TEST_CASE("trace errors carry the line") {
  CHECK(trace_error_line("{\"ts\":5,\"type\":\":a\"}\n{\"ts\":4,\"type\":\":a\"}\n") == 2);
  CHECK(trace_error_line("{\"ts\":5,\"type\":\":a\"}\n{\"advance\":1}\n") == 2);
  CHECK(trace_error_line("not json\n") == 1);
  CHECK(trace_error_line("{\"type\":\":a\"}\n") == 1);
  CHECK(trace_error_line("{\"ts\":1,\"type\":\":a\",\"attrs\":[[1]]}\n") == 1);
  try {
    parse_trace("{\"ts\":5,\"type\":\":a\"}\n{\"ts\":4,\"type\":\":a\"}\n");
  } catch (const TraceError& e) {
    CHECK(std::string(e.what()).find("timestamp regression at line 2") != std::string::npos);
  }
}

TEST_CASE("value encoding round-trips") {
  for (const Value& v : {sym("x"), Value("plain"), Value(":looks_like_symbol"), Value("\\back"), Value(-3),
                         Value(0.25), Value(false)})
    CHECK(decode_value(encode_value(v)) == v);
  CHECK(encode_value(sym("on")).get<std::string>() == ":on");
  CHECK(encode_value(Value(":on")).get<std::string>() == "\\:on");
}

TEST_CASE("lifetime flag") {
  CHECK(parse_lifetime("{1, :hours}") == 3600000);
  CHECK(parse_lifetime("2500") == 2500);
  CHECK_THROWS(parse_lifetime("soon"));
}

TEST_CASE("records render with ordered keys") {
  OutputRecord r;
  r.at = 7;
  r.pattern = "p";
  r.message_ids = {3, 1};
  r.bindings = {{"id", sym("b1")}};
  r.intermediates = {{"total", Value(210)}};
  CHECK(render_record(r) ==
        "{\"at\":7,\"pattern\":\"p\",\"reaction\":null,\"messageIds\":[3,1],\"bindings\":{\"id\":\":b1\"},"
        "\"intermediates\":{\"total\":210}}");
}

TEST_CASE("records leave out distinctness sets") {
  Program prog = parse_program("pattern p as {:h, id, !code}[count: 2]");
  auto trace = parse_trace("{\"ts\":0,\"type\":\":h\",\"attrs\":[\":b1\",1]}\n{\"ts\":1,\"type\":\":h\",\"attrs\":[\":b1\",2]}\n");
  auto out = replay_engine(prog, trace);
  REQUIRE(out.records.size() == 1);
  CHECK(out.records[0].bindings.size() == 1);
  CHECK(out.records[0].bindings[0].first == "id");
}

TEST_CASE("one record per reaction, or one bare record") {
  Program prog = parse_program(test::corpus("reactions") + "pattern other as {:door, d}\n");
  auto trace = parse_trace("{\"ts\":0,\"type\":\":window\",\"attrs\":[\":w\",\":open\",\":hall\"]}\n"
                           "{\"ts\":1,\"type\":\":door\",\"attrs\":[\":d\"]}\n");
  auto engine = replay_engine(prog, trace);
  auto oracle = replay_oracle(prog, trace);
  REQUIRE(engine.records.size() == 3);
  CHECK(engine.records[0].reaction == "turn_off_heating");
  CHECK(engine.records[1].reaction == "turn_off_cooling");
  CHECK_FALSE(engine.records[2].reaction);
  CHECK_FALSE(first_divergence(engine.records, oracle.records));
}

TEST_CASE("first divergence") {
  OutputRecord a;
  a.pattern = "p";
  OutputRecord b = a;
  b.at = 1;
  auto d = first_divergence({a, a}, {a, b});
  REQUIRE(d);
  CHECK(d->index == 1);
  CHECK(d->engine);
  CHECK(d->oracle);
  auto shorter = first_divergence({a}, {a, a});
  REQUIRE(shorter);
  CHECK_FALSE(shorter->engine);
  CHECK_FALSE(first_divergence({a}, {a}));
}

TEST_CASE("random cases are deterministic and well-formed") {
  for (std::uint64_t seed : {1u, 2u, 99u}) {
    RandomCase one = random_case(seed, 300);
    RandomCase two = random_case(seed, 300);
    CHECK(one.program_text == two.program_text);
    CHECK(one.trace == two.trace);
    CHECK(one.trace.size() <= 300);
    CHECK_NOTHROW(Network(expand(parse_program(one.program_text))));
  }
}

TEST_CASE("check report") {
  std::string report = check_report(parse_program(test::corpus("lighting")));
  CHECK(report.find("alpha nodes: 3") != std::string::npos);
  CHECK(report.find("(shared by 2 patterns)") != std::string::npos);
}
