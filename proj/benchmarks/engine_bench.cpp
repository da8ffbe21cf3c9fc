#include <benchmark/benchmark.h>

#include <random>

#include "sprw/actor.hpp"
#include "sprw/dsl.hpp"
#include "sprw/engine.hpp"
#include "sprw/harness.hpp"
#include "sprw/oracle.hpp"

namespace {

constexpr const char* kLighting = R"(pattern motion as {:motion, id, status, room}
pattern light as {:light, id, status, room}
pattern lights_on as motion{status= :on, id ~> mid}
  and light{status= :off, id ~> lid}
  and {:amb_light, aid, value, room} when value < 40,
  options: [last: true, interval: {30, :secs}]
pattern lights_off as not motion{status= :on, id ~> mid}[window: {2, :mins}]
  and light{status= :on},
  options: [last: true]
react_to lights_on, with: turn_on_light
react_to lights_off, with: turn_off_light
)";

std::vector<sprw::Message> lighting_trace(std::size_t n) {
  std::mt19937_64 rng(7);
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  const char* rooms[] = {"hall", "kitchen", "bedroom"};
  std::vector<sprw::Message> out;
  sprw::TimeMs ts = 0;
  for (std::size_t i = 1; i <= n; ++i) {
    ts += pick(0, 2000);
    sprw::Message m;
    m.id = m.seq = i;
    m.ts = ts;
    auto room = sprw::Value::sym(rooms[pick(0, 2)]);
    auto status = sprw::Value::sym(pick(0, 1) ? "on" : "off");
    switch (pick(0, 2)) {
      case 0: m.type = {"motion"}; m.attrs = {sprw::Value::sym("m" + std::to_string(pick(1, 3))), status, room}; break;
      case 1: m.type = {"light"}; m.attrs = {sprw::Value::sym("l" + std::to_string(pick(1, 3))), status, room}; break;
      default: m.type = {"amb_light"}; m.attrs = {sprw::Value::sym("a1"), sprw::Value(pick(0, 80)), room}; break;
    }
    out.push_back(std::move(m));
  }
  return out;
}

void BM_ParseExpand(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(sprw::expand(sprw::parse_program(kLighting)));
}
BENCHMARK(BM_ParseExpand);

void BM_NetworkInsert(benchmark::State& state) {
  auto trace = lighting_trace(static_cast<std::size_t>(state.range(0)));
  sprw::Program prog = sprw::expand_active(sprw::parse_program(kLighting));
  for (auto _ : state) {
    sprw::Network net(prog, 600000);
    std::size_t matches = 0;
    for (const auto& m : trace) matches += net.insert(m).size();
    benchmark::DoNotOptimize(matches);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_NetworkInsert)->Arg(1000)->Arg(10000);

void BM_ActorStep(benchmark::State& state) {
  auto trace = lighting_trace(static_cast<std::size_t>(state.range(0)));
  sprw::Program prog = sprw::parse_program(kLighting);
  for (auto _ : state) {
    sprw::Actor actor(prog, sprw::State::object(), 600000);
    for (const auto& m : trace) {
      actor.deliver({m.type, m.attrs, m.ts});
      benchmark::DoNotOptimize(actor.step(m.ts));
    }
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ActorStep)->Arg(10000);

void BM_OracleReplay(benchmark::State& state) {
  auto trace = lighting_trace(static_cast<std::size_t>(state.range(0)));
  std::vector<sprw::TraceEvent> events(trace.begin(), trace.end());
  sprw::Program prog = sprw::expand_active(sprw::parse_program(kLighting));
  for (auto _ : state) benchmark::DoNotOptimize(sprw::oracle_run(prog, events, 600000));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_OracleReplay)->Arg(1000);

void BM_RandomCase(benchmark::State& state) {
  std::uint64_t seed = 1;
  for (auto _ : state) {
    sprw::RandomCase rc = sprw::random_case(seed++, 1000);
    benchmark::DoNotOptimize(sprw::replay_engine(sprw::parse_program(rc.program_text), rc.trace, rc.lifetime));
  }
}
BENCHMARK(BM_RandomCase);

}  // namespace
BENCHMARK_MAIN();
