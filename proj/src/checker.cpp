#include "ringgather/checker.hpp"

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <set>
#include <unordered_set>

namespace ringgather {

namespace {

bool is_periodic(const RingConfig& cfg) {
  return classify_symmetry(cfg).cfg_class == SymmetryClass::Periodic;
}

int max_count(const RingConfig& cfg) { return cfg.occ.empty() ? 0 : *std::max_element(cfg.occ.begin(), cfg.occ.end()); }

// Configuration reached after every event, paired with the event step.
// The initial configuration comes first with step -1.
struct Frame {
  long long step;
  const std::string* occ;
  Tag tag;
};

}  // namespace

// ------------------------------------------------------------ enumeration

void for_each_initial_config(int n, int k, bool relaxed, const std::function<void(const RingConfig&)>& fn) {
  if (relaxed) {
    if (n < 1 || k < 0 || k > n) throw CheckerError("invalid parameters: need 1 <= n and 0 <= k <= n");
  } else {
    auto v = parameter_violation(n, k);
    if (!v.empty()) throw CheckerError("invalid parameters: " + v);
  }
  if (n > 62) throw CheckerError("invalid parameters: n above 62");
  if (k == 0) return;
  // Gosper's hack over k-subsets in increasing mask order.
  const std::uint64_t limit = std::uint64_t{1} << n;
  std::uint64_t mask = (std::uint64_t{1} << k) - 1;
  RingConfig cfg(std::vector<int>(n, 0));
  std::string occ(n, '.');
  while (mask < limit) {
    for (int i = 0; i < n; ++i) {
      bool on = (mask >> i) & 1;
      cfg.occ[i] = on;
      occ[i] = on ? '1' : '.';
    }
    if (canonical_form(cfg) == occ && !is_periodic(cfg)) fn(cfg);
    std::uint64_t c = mask & (~mask + 1);
    std::uint64_t r = mask + c;
    if (r == 0) break;
    mask = (((r ^ mask) >> 2) / c) | r;
  }
}

std::vector<RingConfig> enumerate_initial_configs(int n, int k, bool relaxed) {
  std::vector<RingConfig> out;
  for_each_initial_config(n, k, relaxed, [&](const RingConfig& c) { out.push_back(c); });
  return out;
}

// --------------------------------------------------------- trace checks

namespace {

std::vector<Frame> frames(const Trace& t, const std::string& initial_occ) {
  std::vector<Frame> out;
  out.push_back({-1, &initial_occ, classify_protocol_state(t.initial).tag});
  for (const auto& e : t.events) out.push_back({e.step, &e.occ, e.tag});
  return out;
}

bool phase3_or_done(Tag t) {
  auto p = phase_of(t);
  return p == Phase::Phase3 || p == Phase::Done;
}

}  // namespace

Verdict check_no_tower_before_target(const Trace& trace) {
  const std::string init = to_occupancy_string(trace.initial);
  for (const auto& f : frames(trace, init)) {
    if (phase3_or_done(f.tag)) break;
    if (max_count(parse_occupancy(*f.occ)) >= 2)
      return Verdict::fail(f.step, std::string("tower before Target in a ") + to_string(f.tag) + " configuration",
                           *f.occ);
  }
  return Verdict::pass();
}

Verdict check_never_periodic(const Trace& trace) {
  const std::string init = to_occupancy_string(trace.initial);
  const std::string* last = nullptr;
  for (const auto& f : frames(trace, init)) {
    if (last && *last == *f.occ) continue;
    last = f.occ;
    auto cfg = parse_occupancy(*f.occ);
    if (cfg.towerless() && is_periodic(cfg)) return Verdict::fail(f.step, "periodic configuration", *f.occ);
  }
  return Verdict::pass();
}

Verdict check_outdated_bound(const Trace& trace) {
  struct Intent {
    std::vector<int> targets;
    long long moves_seen;
  };
  RingConfig cfg = trace.initial;
  std::map<int, Intent> pending;
  std::map<int, int> where;
  long long moves = 0;
  const auto& ev = trace.events;
  for (size_t i = 0; i < ev.size(); ++i) {
    const Event& e = ev[i];
    if (e.kind == SchedulerAction::Kind::Activate) {
      // activations of a batch all see the configuration before its fires
      pending[e.robot] = Intent{current_targets(cfg, e.from), moves};
    } else {
      pending.erase(e.robot);
      if (e.to) {
        cfg.occ[e.from] -= 1;
        cfg.occ[*e.to] += 1;
        moves += 1;
      }
    }
    where[e.robot] = e.to ? *e.to : e.from;
    if (i + 1 < ev.size() && ev[i + 1].step == e.step) continue;
    auto ph = phase_of(classify_protocol_state(cfg).tag);
    if (ph != Phase::Phase1 && ph != Phase::Phase2) continue;
    int wrong = 0;
    std::string who;
    for (const auto& [r, in] : pending) {
      if (in.targets.empty() || moves <= in.moves_seen) continue;
      if (current_targets(cfg, where[r]) != in.targets) {
        ++wrong;
        who += (who.empty() ? "" : ", ") + std::to_string(r);
      }
    }
    if (wrong > 1)
      return Verdict::fail(e.step, std::to_string(wrong) + " outdated robots with incorrect targets (" + who + ")",
                           to_occupancy_string(cfg));
  }
  return Verdict::pass();
}

Verdict check_round_bound(const Trace& trace, double c) {
  const double n = trace.initial.size();
  const std::string last = trace.events.empty() ? to_occupancy_string(trace.initial) : trace.events.back().occ;
  if (trace.outcome != Outcome::Gathered)
    return Verdict::fail(trace.steps, std::string("run ended ") + to_string(trace.outcome), last);
  if (static_cast<double>(trace.rounds) > c * n * n)
    return Verdict::fail(trace.steps, std::to_string(trace.rounds) + " rounds exceed the bound", last);
  return Verdict::pass();
}

Verdict check_replay(const Trace& trace) {
  auto bad = replay_mismatch(trace);
  if (!bad) return Verdict::pass();
  const Event& e = trace.events[*bad];
  return Verdict::fail(e.step, "replay diverges at event " + std::to_string(*bad), e.occ);
}

Verdict check_phase_monotonic(const Trace& trace) {
  const std::string init = to_occupancy_string(trace.initial);
  bool late = false;
  for (const auto& f : frames(trace, init)) {
    auto p = phase_of(f.tag);
    if (p == Phase::Phase3 || p == Phase::Done)
      late = true;
    else if (late && (p == Phase::Phase1 || p == Phase::Phase2))
      return Verdict::fail(f.step, std::string("back to ") + to_string(p) + " after Phase 3", *f.occ);
  }
  return Verdict::pass();
}

std::optional<std::string> local_global_mismatch(const RingConfig& cfg) {
  std::map<int, std::vector<int>> global;
  bool global_rule = true;
  try {
    for (const auto& m : enabled_moves(cfg)) global[m.robot_node] = m.targets;
  } catch (const ProtocolError&) {
    global_rule = false;
  }
  for (int v : cfg.occupied_nodes()) {
    auto o = observe(cfg, v);
    std::vector<int> local;
    bool local_rule = true;
    try {
      local = decision_targets(local_decide(o.view), v, o.forward, cfg.size());
    } catch (const ProtocolError&) {
      local_rule = false;
    }
    if (!global_rule) {
      // a tower robot stays put whatever the global state
      if (local_rule && !local.empty())
        return "node " + std::to_string(v) + " moves locally but no global rule applies";
      continue;
    }
    if (!local_rule) return "node " + std::to_string(v) + " has no local rule";
    auto it = global.find(v);
    std::vector<int> g = it == global.end() ? std::vector<int>{} : it->second;
    if (g != local) return "node " + std::to_string(v) + " decides differently from the enabled set";
  }
  return std::nullopt;
}

Verdict check_local_global(const Trace& trace) {
  const std::string init = to_occupancy_string(trace.initial);
  std::unordered_set<std::string> seen;
  for (const auto& f : frames(trace, init)) {
    if (!seen.insert(*f.occ).second) continue;
    if (auto why = local_global_mismatch(parse_occupancy(*f.occ))) return Verdict::fail(f.step, *why, *f.occ);
  }
  return Verdict::pass();
}

// --------------------------------------------------------- views sweep

Verdict check_distinct_views(int n_max) {
  if (n_max > 24) throw CheckerError("n_max above 24");
  for (int n = 1; n <= n_max; ++n) {
    for (std::uint32_t mask = 1; mask < (std::uint32_t{1} << n); ++mask) {
      RingConfig cfg(std::vector<int>(n, 0));
      for (int i = 0; i < n; ++i) cfg.occ[i] = (mask >> i) & 1;
      auto info = classify_symmetry(cfg);
      if (info.cfg_class == SymmetryClass::Periodic) continue;
      std::map<View, int> seen;
      for (int v : cfg.occupied_nodes()) seen[compute_view(cfg, v)] += 1;
      int worst = 0;
      for (const auto& [view, c] : seen) worst = std::max(worst, c);
      const auto occ = to_occupancy_string(cfg);
      if (info.cfg_class == SymmetryClass::Rigid) {
        if (worst > 1) return Verdict::fail(0, "rigid configuration with a repeated view", occ);
        continue;
      }
      if (worst > 2) return Verdict::fail(0, "view shared by more than two robots", occ);
      int axes = 0;
      bool reported = false;
      for (int s = 0; s < n; ++s) {
        bool fixed = true;
        for (int j = 0; j < n && fixed; ++j) fixed = cfg.occ[j] == cfg.occ[((s - j) % n + n) % n];
        if (fixed) {
          ++axes;
          if (info.reflection_sum && ((*info.reflection_sum % n) + n) % n == s) reported = true;
        }
      }
      if (axes != 1 || !reported) return Verdict::fail(0, std::to_string(axes) + " symmetry axes", occ);
    }
  }
  return Verdict::pass();
}

// ------------------------------------------------------ Phase-2 explorer

namespace {

enum class Extra { None, LeaderShrink, SlaveGrow };

struct Transition {
  std::set<Tag> allowed;
  std::set<Tag> targets;
  int rounds;
  Extra extra = Extra::None;
};

std::optional<Transition> transition_for(Tag t, const ExploreOptions& opt, int k) {
  const int c = opt.round_constant;
  const int lk = opt.long_rounds > 0 ? opt.long_rounds : k;
  switch (t) {
    case Tag::EvenT: return Transition{{}, {Tag::SplitS}, 1};
    case Tag::Start: return Transition{{Tag::EvenT}, {Tag::SplitS}, c, Extra::LeaderShrink};
    case Tag::SplitS:
      return Transition{{Tag::SplitA, Tag::OddT, Tag::SplitS}, {Tag::Start, Tag::Terminal}, lk, Extra::SlaveGrow};
    case Tag::SplitA: return Transition{{}, {Tag::SplitS}, 1};
    case Tag::OddT: return Transition{{}, {Tag::Start, Tag::Terminal}, 1};
    case Tag::Block: return Transition{{Tag::Biblock}, {Tag::TriBlockS}, c};
    case Tag::Biblock: return Transition{{}, {Tag::TriBlockS}, 1};
    case Tag::TriBlockS: return Transition{{Tag::TriBlockA, Tag::TriBlockS}, {Tag::Start}, lk};
    case Tag::TriBlockA: return Transition{{}, {Tag::Start, Tag::TriBlockS}, 1};
    case Tag::Terminal: return Transition{{Tag::TerminalSkew}, {Tag::Target}, c};
    default: return std::nullopt;
  }
}

int leader_size(const RingConfig& cfg) {
  auto s = classify_symmetry(cfg);
  return s.leader_hole ? s.leader_hole->size : -1;
}
int slave_size(const RingConfig& cfg) {
  auto s = classify_symmetry(cfg);
  return s.slave_hole ? s.slave_hole->size : -1;
}

// Robot intent in the explorer: -1 none, otherwise an index into a table of
// target lists (index 0 is Stay).
struct XState {
  std::vector<int> pos;
  std::vector<int> intent;
  std::vector<char> fired;
  int rounds = 0;
  int depth = 0;
};

struct Explorer {
  const RingConfig& start;
  const Transition& rule;
  Tag source;
  int base_leader = -1, base_slave = -1;
  std::vector<std::vector<int>> table{{}};
  std::map<std::vector<int>, int> table_index{{{}, 0}};

  int intern(const std::vector<int>& t) {
    auto [it, fresh] = table_index.emplace(t, static_cast<int>(table.size()));
    if (fresh) table.push_back(t);
    return it->second;
  }

  static RingConfig config_of(int n, const std::vector<int>& pos) {
    RingConfig c(std::vector<int>(n, 0));
    for (int p : pos) c.occ[p] += 1;
    return c;
  }

  // nullopt: keep exploring; true: arrived; a violation message otherwise
  std::optional<std::string> judge(const RingConfig& cfg, Tag tag, bool& arrived) const {
    arrived = false;
    if (rule.targets.count(tag)) {
      arrived = true;
      if (rule.extra == Extra::LeaderShrink && tag == Tag::SplitS && leader_size(cfg) != base_leader - 2)
        return "leader hole did not shrink by two";
      if (rule.extra == Extra::SlaveGrow && slave_size(cfg) != base_slave + 2)
        return "slave hole did not grow by two";
      return std::nullopt;
    }
    if (tag == source || rule.allowed.count(tag)) return std::nullopt;
    return std::string(to_string(source)) + " led to " + to_string(tag);
  }
};

std::string key_of(const XState& s, bool with_rounds) {
  std::string k;
  k.reserve(s.pos.size() * 3 + 4);
  for (size_t i = 0; i < s.pos.size(); ++i) {
    k.push_back(static_cast<char>(s.pos[i]));
    k.push_back(static_cast<char>(s.intent[i] + 1));
    if (with_rounds) k.push_back(s.fired[i]);
  }
  if (with_rounds) k.push_back(static_cast<char>(s.rounds));
  return k;
}

}  // namespace

Verdict check_phase2_transition(const RingConfig& instance, const ExploreOptions& opt, ExploreStats* stats) {
  const int n = instance.size();
  const int k = instance.robots();
  const Tag source = classify_protocol_state(instance).tag;
  const std::string occ0 = to_occupancy_string(instance);
  if (source == Tag::Gathered) return Verdict::pass();
  auto rule = transition_for(source, opt, k);
  if (!rule) throw CheckerError(std::string("no transition rule for ") + to_string(source));
  const int depth_limit = opt.depth > 0 ? opt.depth : 2 * k;

  Explorer X{instance, *rule, source};
  X.base_leader = leader_size(instance);
  X.base_slave = slave_size(instance);

  XState init;
  for (int v = 0; v < n; ++v)
    for (int c = 0; c < instance.occ[v]; ++c) init.pos.push_back(v);
  init.intent.assign(k, -1);
  init.fired.assign(k, 0);

  // Safety: movers only, no depth bound. Activations that yield Stay do not
  // change anything a later configuration depends on, so they are skipped.
  std::set<int> relevant;
  {
    std::unordered_set<std::string> seen{key_of(init, false)};
    std::deque<XState> queue{init};
    while (!queue.empty()) {
      XState s = std::move(queue.front());
      queue.pop_front();
      RingConfig cfg = Explorer::config_of(n, s.pos);
      bool any = false;
      auto push = [&](XState nx, bool moved) -> std::optional<Verdict> {
        any = true;
        if (moved) {
          RingConfig c2 = Explorer::config_of(n, nx.pos);
          Tag tag = classify_protocol_state(c2).tag;
          bool arrived = false;
          if (auto why = X.judge(c2, tag, arrived)) return Verdict::fail(nx.depth, *why, to_occupancy_string(c2));
          if (arrived) return std::nullopt;
        }
        if (seen.insert(key_of(nx, false)).second) queue.push_back(std::move(nx));
        return std::nullopt;
      };
      for (int r = 0; r < k; ++r) {
        if (s.intent[r] < 0) {
          if (cfg.occ[s.pos[r]] >= 2) continue;
          auto t = current_targets(cfg, s.pos[r]);
          if (t.empty()) continue;
          relevant.insert(r);
          XState nx = s;
          nx.intent[r] = X.intern(t);
          nx.depth += 1;
          if (auto v = push(std::move(nx), false)) return *v;
        } else {
          for (int to : X.table[s.intent[r]]) {
            XState nx = s;
            nx.intent[r] = -1;
            nx.pos[r] = to;
            nx.depth += 1;
            if (auto v = push(std::move(nx), true)) return *v;
          }
        }
      }
      if (!any) return Verdict::fail(s.depth, "no robot can move before a target tag", to_occupancy_string(cfg));
    }
    if (stats) {
      stats->safety_states = static_cast<long long>(seen.size());
      stats->relevant_robots = static_cast<int>(relevant.size());
    }
  }

  // Rounds: only the relevant robots act. The others only ever hold Stay, and
  // letting them complete their cycles at once can only add rounds.
  {
    std::vector<int> rel(relevant.begin(), relevant.end());
    std::unordered_set<std::string> seen{key_of(init, true)};
    std::deque<XState> queue{init};
    long long worst = 0;
    while (!queue.empty()) {
      XState s = std::move(queue.front());
      queue.pop_front();
      if (s.depth >= depth_limit) continue;
      RingConfig cfg = Explorer::config_of(n, s.pos);
      auto settle = [&](XState& nx, int r) {
        nx.fired[r] = 1;
        bool all = std::all_of(rel.begin(), rel.end(), [&](int q) { return nx.fired[q] != 0; });
        if (all) {
          nx.rounds += 1;
          for (int q : rel) nx.fired[q] = 0;
        }
      };
      auto push = [&](XState nx, bool moved) -> std::optional<Verdict> {
        worst = std::max<long long>(worst, nx.rounds);
        if (moved) {
          RingConfig c2 = Explorer::config_of(n, nx.pos);
          Tag tag = classify_protocol_state(c2).tag;
          bool arrived = false;
          if (auto why = X.judge(c2, tag, arrived)) return Verdict::fail(nx.depth, *why, to_occupancy_string(c2));
          if (arrived) return std::nullopt;
        }
        if (nx.rounds >= X.rule.rounds)
          return Verdict::fail(nx.depth,
                               std::string(to_string(source)) + " not left within " + std::to_string(X.rule.rounds) +
                                   " rounds",
                               to_occupancy_string(Explorer::config_of(n, nx.pos)));
        if (seen.insert(key_of(nx, true)).second) queue.push_back(std::move(nx));
        return std::nullopt;
      };
      for (int r : rel) {
        XState nx = s;
        nx.depth += 1;
        if (s.intent[r] < 0) {
          nx.intent[r] = cfg.occ[s.pos[r]] >= 2 ? 0 : X.intern(current_targets(cfg, s.pos[r]));
          if (auto v = push(std::move(nx), false)) return *v;
          continue;
        }
        const auto& t = X.table[s.intent[r]];
        nx.intent[r] = -1;
        if (t.empty()) {
          settle(nx, r);
          if (auto v = push(std::move(nx), false)) return *v;
          continue;
        }
        for (int to : t) {
          XState m = nx;
          m.pos[r] = to;
          settle(m, r);
          if (auto v = push(std::move(m), true)) return *v;
        }
      }
    }
    if (stats) {
      stats->round_states = static_cast<long long>(seen.size());
      stats->max_rounds_seen = worst;
    }
  }
  return Verdict::pass();
}

Verdict check_phase2_transitions(const std::vector<RingConfig>& instances, const ExploreOptions& opt) {
  for (const auto& inst : instances) {
    auto v = check_phase2_transition(inst, opt);
    if (!v.passed) return v;
  }
  return Verdict::pass();
}

// ----------------------------------------------------------- instances

RingConfig from_runs(int n, const std::vector<int>& sizes) {
  RingConfig cfg(std::vector<int>(n, 0));
  int at = 0;
  for (size_t i = 0; i < sizes.size(); ++i) {
    if (sizes[i] < 0) throw CheckerError("negative run size");
    for (int j = 0; j < sizes[i]; ++j, ++at) {
      if (at >= n) throw CheckerError("runs longer than the ring");
      if (i % 2 == 0) cfg.occ[at] = 1;
    }
  }
  if (at != n) throw CheckerError("runs do not cover the ring");
  return cfg;
}

std::vector<RingConfig> constructed_instances(int n, int k) {
  auto v = parameter_violation(n, k);
  if (!v.empty()) throw CheckerError("invalid parameters: " + v);
  const int h = k / 2, E = n - k;
  std::vector<std::vector<int>> layouts = {
      {h, 1, h, E - 1},                        // Terminal
      {k, E},                                  // Block
      {k - 1, 1, 1, E - 1},                    // Biblock
      {h - 1, 1, 1, 2, h, E - 3},              // EvenT
      {h - 2, 1, 2, 1, 1, 1, h - 1, E - 3},    // SplitA
      {h, 1, h - 1, 1, 1, E - 2},              // OddT
      {2, 1, k - 3, 1, 1, E - 2},              // TriBlockA
  };
  for (int x = 3; E - x >= 2; x += 2) layouts.push_back({h, x, h, E - x});                    // Start
  for (int l = 1; l < h; ++l) layouts.push_back({h - l, 1, l, 1, l, 1, h - l, E - 3});        // SplitS
  for (int a = 1; 2 * a < k; ++a) layouts.push_back({a, 1, k - 2 * a, 1, a, E - 2});         // TriBlockS
  std::vector<RingConfig> out;
  for (const auto& l : layouts) out.push_back(from_runs(n, l));
  return out;
}

}  // namespace ringgather
