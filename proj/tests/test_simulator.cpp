#include <doctest.h>

#include <sstream>

#include <json.hpp>

#include "oracles.hpp"
#include "ringgather/checker.hpp"
#include "ringgather/simulator.hpp"

using namespace ringgather;

namespace {

RingConfig block15() { return parse_occupancy("1111111111....."); }
RingConfig terminal15() { return parse_occupancy("11111.11111...."); }

int robot_at(const SimState& s, int node) {
  for (int r = 0; r < s.robots(); ++r)
    if (s.positions[r] == node) return r;
  return -1;
}

}  // namespace

TEST_CASE("fire on a Stay intent changes nothing but the intent") {
  auto s = SimState::initial(block15());
  int mid = robot_at(s, 5);
  auto a = step(s, SchedulerAction::activate(mid));
  REQUIRE(a.pending[mid]);
  CHECK(a.pending[mid]->stay());
  auto b = step(a, SchedulerAction::fire(mid));
  CHECK(b.cfg == s.cfg);
  CHECK_FALSE(b.pending[mid]);
  CHECK(b.moves == 0);
}

TEST_CASE("activate then fire moves a Block border robot outward") {
  auto s = SimState::initial(block15());
  int r = robot_at(s, 0);
  auto b = step(step(s, SchedulerAction::activate(r)), SchedulerAction::fire(r));
  CHECK(b.positions[r] == 14);
  CHECK(to_occupancy_string(b.cfg) == ".111111111....1");
  CHECK(b.moves == 1);
}

TEST_CASE("an outdated intent fires with its old target") {
  // both Terminal movers look, one moves: the other still heads for node 5
  auto s = SimState::initial(terminal15());
  int a = robot_at(s, 4), b = robot_at(s, 6);
  s = step(s, std::vector<SchedulerAction>{SchedulerAction::activate(a), SchedulerAction::activate(b)});
  s = step(s, SchedulerAction::fire(a));
  REQUIRE(s.pending[b]);
  CHECK(s.outdated(*s.pending[b]));
  CHECK(s.pending[b]->targets == std::vector<int>{5});
  s = step(s, SchedulerAction::fire(b));
  CHECK(s.cfg.occ[5] == 2);
  CHECK(classify_protocol_state(s.cfg).tag == Tag::Target);
}

TEST_CASE("batch activations all see the configuration before the fires") {
  auto s = SimState::initial(terminal15());
  int a = robot_at(s, 4), b = robot_at(s, 6);
  s = step(s, SchedulerAction::activate(a));
  s = step(s, std::vector<SchedulerAction>{SchedulerAction::activate(b), SchedulerAction::fire(a)});
  // b looked before a's move, so it is not outdated by the batch's own fire
  REQUIRE(s.pending[b]);
  CHECK(s.pending[b]->targets == std::vector<int>{5});
  CHECK(s.pending[b]->moves_seen == 0);
  CHECK(s.step == 2);
}

TEST_CASE("scheduler contract violations") {
  auto s = SimState::initial(terminal15());
  int a = robot_at(s, 4);
  auto act = step(s, SchedulerAction::activate(a));
  CHECK_THROWS_WITH_AS(step(act, SchedulerAction::activate(a)), "scheduler contract violation", SimulationError);
  CHECK_THROWS_AS(step(s, SchedulerAction::fire(a)), SimulationError);
  CHECK_THROWS_AS(step(act, SchedulerAction::fire(a, 3)), SimulationError);
  CHECK_THROWS_AS(step(s, SchedulerAction::activate(99)), SimulationError);
  CHECK_THROWS_AS(step(s, std::vector<SchedulerAction>{}), SimulationError);
  CHECK_THROWS_AS(step(act, std::vector<SchedulerAction>{SchedulerAction::fire(a), SchedulerAction::activate(0)}),
                  SimulationError);
  CHECK_THROWS_AS(step(s, std::vector<SchedulerAction>{SchedulerAction::activate(0), SchedulerAction::activate(0)}),
                  SimulationError);
}

TEST_CASE("rounds count completed move phases of every robot") {
  auto s = SimState::initial(block15());
  SynchronousScheduler sync;
  s = step(s, sync.next(s));
  CHECK(s.round == 0);
  s = step(s, sync.next(s));
  CHECK(s.round == 1);
  // one robot cycling alone never completes a round
  for (int i = 0; i < 5; ++i) s = step(step(s, SchedulerAction::activate(0)), SchedulerAction::fire(0));
  CHECK(s.round == 1);
}

TEST_CASE("run: basic outcomes and rejections") {
  SynchronousScheduler sync;
  auto t = run(terminal15(), sync, {});
  CHECK(t.outcome == Outcome::Gathered);
  CHECK(t.initial == terminal15());

  auto g = run(parse_occupancy("a.............."), sync, {});
  CHECK(g.outcome == Outcome::Gathered);
  CHECK(g.steps == 0);
  CHECK(g.events.empty());

  CHECK_THROWS_WITH_AS(run(parse_occupancy("1..1..1.."), sync, {}), doctest::Contains("periodic"), SimulationError);
  CHECK_THROWS_WITH_AS(run(parse_occupancy("2111111111....."), sync, {}), doctest::Contains("tower"), SimulationError);
  CHECK_THROWS_WITH_AS(run(parse_occupancy("111111111......"), sync, {}), doctest::Contains("k even"), SimulationError);
  CHECK_THROWS_WITH_AS(run(parse_occupancy("1111111111...."), sync, {}), doctest::Contains("n odd"), SimulationError);
}

TEST_CASE("step limit is reported") {
  RandomFairScheduler r(1);
  auto t = run(terminal15(), r, {5, 0});
  CHECK(t.outcome == Outcome::StepLimit);
  CHECK(t.steps == 5);
}

TEST_CASE("synchronous runs keep symmetric configurations symmetric") {
  int checked = 0;
  for (const auto& c : enumerate_initial_configs(15, 10)) {
    if (classify_symmetry(c).cfg_class != SymmetryClass::Symmetric) continue;
    SynchronousScheduler sync;
    auto t = run(c, sync, {});
    CHECK(t.outcome == Outcome::Gathered);
    for (const auto& e : t.events) {
      if (e.kind != SchedulerAction::Kind::Fire) continue;
      auto cfg = parse_occupancy(e.occ);
      if (cfg.occupied_count() == 1) continue;
      // only whole batches count: look at the last event of each step
      if (&e != &t.events.back() && (&e + 1)->step == e.step) continue;
      CHECK(classify_symmetry(cfg).cfg_class == SymmetryClass::Symmetric);
    }
    ++checked;
  }
  CHECK(checked > 5);
}

TEST_CASE("lazy on Terminal produces TerminalSkew first") {
  LazyScheduler lazy(3);
  auto t = run(terminal15(), lazy, {});
  CHECK(t.outcome == Outcome::Gathered);
  Tag first = Tag::Unknown;
  for (const auto& e : t.events)
    if (e.to) {
      first = e.tag;
      break;
    }
  CHECK(first == Tag::TerminalSkew);
}

TEST_CASE("exhaustive depth 1 from Terminal lists every single action") {
  ExhaustiveScheduler ex(1);
  auto s = SimState::initial(terminal15());
  auto succ = ex.successors(s);
  CHECK(succ.size() == 10);
  for (int r = 0; r < 10; ++r) CHECK(succ[r] == SchedulerAction::activate(r));
  s = step(s, SchedulerAction::activate(robot_at(s, 4)));
  succ = ex.successors(s);
  CHECK(succ.size() == 10);
  CHECK(std::count(succ.begin(), succ.end(), SchedulerAction::fire(robot_at(s, 4))) == 1);
  CHECK(ex.next(s).size() == 1);
}

TEST_CASE("builtin_scheduler names") {
  CHECK(builtin_scheduler({"synchronous"})->name() == "synchronous");
  CHECK(builtin_scheduler({"random", 4})->seed() == 4u);
  CHECK(builtin_scheduler({"random_fair", 4})->name() == "random");
  CHECK(builtin_scheduler({"lazy", 2})->name() == "lazy");
  CHECK(builtin_scheduler({"exhaustive", 0, 3})->name() == "exhaustive");
  CHECK_THROWS_AS(builtin_scheduler({"fifo"}), SimulationError);
}

TEST_CASE("fairness bound holds in every trace") {
  auto start = parse_occupancy("..1.111.1.1.111.1");
  for (const char* name : {"random", "lazy", "synchronous"}) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      auto sched = builtin_scheduler({name, seed});
      auto t = run(start, *sched, {});
      std::vector<long long> last(10, -1);
      for (const auto& e : t.events) {
        if (e.kind != SchedulerAction::Kind::Fire) continue;
        CHECK(e.step - last[e.robot] <= t.fairness_bound);
        last[e.robot] = e.step;
      }
      // conservation
      for (const auto& e : t.events) REQUIRE(parse_occupancy(e.occ).robots() == 10);
    }
  }
}

TEST_CASE("identical inputs give byte-identical traces; replay reproduces them") {
  auto start = parse_occupancy("..111.1.111.111");
  for (const char* name : {"random", "lazy", "synchronous"}) {
    auto a = builtin_scheduler({name, 9});
    auto b = builtin_scheduler({name, 9});
    auto ta = run(start, *a, {});
    auto tb = run(start, *b, {});
    CHECK(trace_to_jsonl(ta) == trace_to_jsonl(tb));
    CHECK_FALSE(replay_mismatch(ta));
  }
  auto r = builtin_scheduler({"random", 9});
  auto t = run(start, *r, {});
  REQUIRE(t.events.size() > 20);
  t.events[20].occ[0] = t.events[20].occ[0] == '.' ? '1' : '.';
  auto bad = replay_mismatch(t);
  REQUIRE(bad);
  CHECK(*bad == 20);
}

TEST_CASE("trace JSONL format and round trip") {
  RandomFairScheduler r(5);
  auto t = run(terminal15(), r, {});
  auto text = trace_to_jsonl(t);
  std::istringstream in(text);
  auto back = read_trace(in);
  CHECK(back == t);

  std::istringstream lines(text);
  std::string header, first;
  std::getline(lines, header);
  std::getline(lines, first);
  auto h = nlohmann::json::parse(header);
  for (const char* f : {"n", "k", "scheduler", "seed", "fairness_bound"}) CHECK(h.contains(f));
  CHECK(h["n"] == 15);
  CHECK(h["seed"] == 5);
  auto e = nlohmann::json::parse(first);
  std::vector<std::string> keys;
  for (auto it = e.begin(); it != e.end(); ++it) keys.push_back(it.key());
  std::sort(keys.begin(), keys.end());
  CHECK(keys == std::vector<std::string>{"from", "kind", "occ", "robot", "round", "step", "tag", "to"});
  CHECK(e["kind"] == "activate");
  CHECK(e["to"].is_null());
  auto footer = nlohmann::json::parse(text.substr(text.rfind('\n', text.size() - 2) + 1));
  CHECK(footer["outcome"] == "Gathered");
  CHECK(footer["rounds"] == t.rounds);

  std::istringstream junk("{\"n\":3}\n");
  CHECK_THROWS_AS(read_trace(junk), SimulationError);
}
