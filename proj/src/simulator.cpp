#include "ringgather/simulator.hpp"

#include <algorithm>

namespace ringgather {

namespace {

void fail_contract() { throw SimulationError("scheduler contract violation"); }

bool gathered(const RingConfig& cfg) { return cfg.occupied_count() <= 1; }

bool has_pending_mover(const SimState& s) {
  for (const auto& p : s.pending)
    if (p && !p->stay()) return true;
  return false;
}

bool any_enabled(const RingConfig& cfg) {
  auto st = classify_protocol_state(cfg);
  if (st.tag == Tag::Unknown || st.tag == Tag::Gathered) return false;
  return !enabled_moves(cfg).empty();
}

}  // namespace

const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::Gathered: return "Gathered";
    case Outcome::StepLimit: return "StepLimit";
    case Outcome::Stuck: return "Stuck";
  }
  return "?";
}

Outcome outcome_from_string(std::string_view s) {
  if (s == "Gathered") return Outcome::Gathered;
  if (s == "StepLimit") return Outcome::StepLimit;
  if (s == "Stuck") return Outcome::Stuck;
  throw SimulationError("unknown outcome '" + std::string(s) + "'");
}

SimState SimState::initial(const RingConfig& cfg) {
  SimState s;
  s.cfg = cfg;
  for (int v = 0; v < cfg.size(); ++v)
    for (int c = 0; c < cfg.occ[v]; ++c) s.positions.push_back(v);
  const size_t k = s.positions.size();
  s.pending.assign(k, std::nullopt);
  s.cycle_progress.assign(k, 0);
  s.last_cycle.assign(k, 0);
  return s;
}

std::vector<int> current_targets(const RingConfig& cfg, int node) {
  auto o = observe(cfg, node);
  try {
    return decision_targets(local_decide(o.view), node, o.forward, cfg.size());
  } catch (const ProtocolError&) {
    return {};
  }
}

void apply_batch(SimState& s, const std::vector<SchedulerAction>& batch, std::vector<Event>* log) {
  if (batch.empty()) fail_contract();
  const int k = s.robots();
  std::vector<char> used(k, 0);
  bool seen_fire = false;
  for (const auto& a : batch) {
    if (a.robot < 0 || a.robot >= k || used[a.robot]) fail_contract();
    used[a.robot] = 1;
    if (a.kind == SchedulerAction::Kind::Fire) {
      seen_fire = true;
      if (!s.pending[a.robot]) fail_contract();
      const auto& t = s.pending[a.robot]->targets;
      if (a.choice && std::find(t.begin(), t.end(), *a.choice) == t.end()) fail_contract();
    } else {
      if (seen_fire || s.pending[a.robot]) fail_contract();
    }
  }

  Tag tag = Tag::Unknown;
  bool tag_valid = false;
  auto current_tag = [&] {
    if (!tag_valid) {
      tag = classify_protocol_state(s.cfg).tag;
      tag_valid = true;
    }
    return tag;
  };
  std::string occ;
  bool occ_valid = false;
  auto current_occ = [&]() -> const std::string& {
    if (!occ_valid) {
      occ = to_occupancy_string(s.cfg);
      occ_valid = true;
    }
    return occ;
  };

  for (const auto& a : batch) {
    const int r = a.robot;
    const int from = s.positions[r];
    Event ev;
    ev.step = s.step;
    ev.kind = a.kind;
    ev.robot = r;
    ev.from = from;
    if (a.kind == SchedulerAction::Kind::Activate) {
      s.pending[r] = PendingIntent{r, s.step, current_targets(s.cfg, from), s.moves};
    } else {
      PendingIntent p = *s.pending[r];
      s.pending[r].reset();
      if (!p.stay()) {
        int to = a.choice ? *a.choice : p.targets.front();
        s.cfg.occ[from] -= 1;
        s.cfg.occ[to] += 1;
        s.positions[r] = to;
        s.moves += 1;
        ev.to = to;
        tag_valid = false;
        occ_valid = false;
      }
      s.last_cycle[r] = s.step;
      s.cycle_progress[r] = 1;
      if (std::all_of(s.cycle_progress.begin(), s.cycle_progress.end(), [](char c) { return c != 0; })) {
        s.round += 1;
        std::fill(s.cycle_progress.begin(), s.cycle_progress.end(), 0);
      }
    }
    if (log) {
      ev.occ = current_occ();
      ev.tag = current_tag();
      ev.round = s.round;
      log->push_back(std::move(ev));
    }
  }
  s.step += 1;
}

SimState step(const SimState& state, const SchedulerAction& action) {
  return step(state, std::vector<SchedulerAction>{action});
}

SimState step(const SimState& state, const std::vector<SchedulerAction>& batch) {
  SimState next = state;
  apply_batch(next, batch, nullptr);
  return next;
}

// ------------------------------------------------------------- schedulers

std::vector<SchedulerAction> SynchronousScheduler::next(const SimState& s) {
  std::vector<SchedulerAction> out;
  for (int r = 0; r < s.robots(); ++r)
    if (!s.pending[r]) out.push_back(SchedulerAction::activate(r));
  if (!out.empty()) return out;
  for (int r = 0; r < s.robots(); ++r) out.push_back(SchedulerAction::fire(r));
  return out;
}

std::vector<SchedulerAction> RandomFairScheduler::next(const SimState& s) {
  const int k = s.robots();
  std::uniform_int_distribution<int> pick(0, k - 1);
  int r = pick(rng_);
  if (!s.pending[r]) return {SchedulerAction::activate(r)};
  const auto& t = s.pending[r]->targets;
  if (t.size() == 2) {
    std::uniform_int_distribution<int> coin(0, 1);
    return {SchedulerAction::fire(r, t[coin(rng_)])};
  }
  return {SchedulerAction::fire(r)};
}

std::vector<SchedulerAction> LazyScheduler::next(const SimState& s) {
  const int k = s.robots();
  if (held_ && !(s.pending[*held_] && !s.pending[*held_]->stay())) held_.reset();
  std::vector<int> movers, idle, stays;
  for (int r = 0; r < k; ++r) {
    if (!s.pending[r])
      idle.push_back(r);
    else if (s.pending[r]->stay())
      stays.push_back(r);
    else if (!held_ || *held_ != r)
      movers.push_back(r);
  }
  auto choose = [&](const std::vector<int>& v) {
    std::uniform_int_distribution<size_t> pick(0, v.size() - 1);
    return v[pick(rng_)];
  };
  auto fire = [&](int r) {
    const auto& t = s.pending[r]->targets;
    if (t.size() == 2) {
      std::uniform_int_distribution<int> coin(0, 1);
      return SchedulerAction::fire(r, t[coin(rng_)]);
    }
    return SchedulerAction::fire(r);
  };
  if (!held_ && !movers.empty()) {
    held_ = choose(movers);
    movers.erase(std::find(movers.begin(), movers.end(), *held_));
  }
  if (!movers.empty()) return {fire(choose(movers))};
  if (!idle.empty()) return {SchedulerAction::activate(choose(idle))};
  if (!stays.empty()) return {fire(choose(stays))};
  int r = *held_;
  held_.reset();
  return {fire(r)};
}

std::vector<SchedulerAction> ExhaustiveScheduler::successors(const SimState& s) const {
  std::vector<SchedulerAction> out;
  for (int r = 0; r < s.robots(); ++r) {
    if (!s.pending[r]) {
      out.push_back(SchedulerAction::activate(r));
    } else if (s.pending[r]->targets.size() == 2) {
      for (int t : s.pending[r]->targets) out.push_back(SchedulerAction::fire(r, t));
    } else {
      out.push_back(SchedulerAction::fire(r));
    }
  }
  return out;
}

std::vector<SchedulerAction> ExhaustiveScheduler::next(const SimState& s) {
  return {successors(s).front()};
}

std::unique_ptr<Scheduler> builtin_scheduler(const SchedulerSpec& spec) {
  if (spec.name == "synchronous") return std::make_unique<SynchronousScheduler>();
  if (spec.name == "random" || spec.name == "random_fair")
    return std::make_unique<RandomFairScheduler>(spec.seed);
  if (spec.name == "lazy") return std::make_unique<LazyScheduler>(spec.seed);
  if (spec.name == "exhaustive") return std::make_unique<ExhaustiveScheduler>(spec.depth);
  throw SimulationError("unknown scheduler '" + spec.name + "'");
}

// -------------------------------------------------------------------- run

std::string initial_violation(const RingConfig& cfg) {
  const int k = cfg.robots();
  if (cfg.size() == 0 || k == 0) return "empty configuration";
  if (gathered(cfg)) return "";
  auto tag = classify_protocol_state(cfg).tag;
  if (cfg.towerless()) {
    if (classify_symmetry(cfg).cfg_class == SymmetryClass::Periodic) return "periodic configuration";
    auto v = parameter_violation(cfg.size(), k);
    if (!v.empty()) return "parameter constraint violated: " + v;
  } else if (phase_of(tag) != Phase::Phase3) {
    return "tower in initial configuration";
  }
  if (tag == Tag::Unknown) return "no protocol rule for initial configuration";
  return "";
}

Trace run(const RingConfig& initial, Scheduler& scheduler, const RunLimits& limits) {
  auto why = initial_violation(initial);
  if (!why.empty()) throw SimulationError("invalid initial configuration: " + why);
  Trace trace;
  trace.initial = initial;
  trace.scheduler = scheduler.name();
  trace.seed = scheduler.seed();
  const int k = initial.robots();
  const int bound = limits.fairness_bound > 0 ? limits.fairness_bound : 4 * k;
  if (bound < 2) throw SimulationError("fairness bound must be at least 2");
  trace.fairness_bound = bound;

  SimState s = SimState::initial(initial);
  trace.outcome = Outcome::StepLimit;
  while (true) {
    if (gathered(s.cfg)) {
      trace.outcome = Outcome::Gathered;
      break;
    }
    if (s.step >= limits.max_steps) break;
    if (!has_pending_mover(s) && !any_enabled(s.cfg)) {
      trace.outcome = Outcome::Stuck;
      break;
    }
    std::vector<SchedulerAction> forced_activate, forced_fire;
    for (int r = 0; r < k; ++r) {
      long long waited = s.step - s.last_cycle[r];
      if (!s.pending[r] && waited >= bound - 2)
        forced_activate.push_back(SchedulerAction::activate(r));
      else if (s.pending[r] && waited >= bound - 1)
        forced_fire.push_back(SchedulerAction::fire(r));
    }
    std::vector<SchedulerAction> batch;
    if (forced_activate.empty() && forced_fire.empty()) {
      batch = scheduler.next(s);
    } else {
      batch = std::move(forced_activate);
      batch.insert(batch.end(), forced_fire.begin(), forced_fire.end());
    }
    apply_batch(s, batch, &trace.events);
  }
  trace.rounds = s.round;
  trace.steps = s.step;
  return trace;
}

// ----------------------------------------------------------------- replay

std::optional<std::size_t> replay_mismatch(const Trace& trace) {
  SimState s = SimState::initial(trace.initial);
  std::vector<Event> log;
  size_t i = 0;
  const auto& ev = trace.events;
  try {
    while (i < ev.size()) {
      size_t j = i;
      std::vector<SchedulerAction> batch;
      while (j < ev.size() && ev[j].step == ev[i].step) {
        if (ev[j].kind == SchedulerAction::Kind::Activate)
          batch.push_back(SchedulerAction::activate(ev[j].robot));
        else
          batch.push_back(SchedulerAction::fire(ev[j].robot, ev[j].to));
        ++j;
      }
      if (s.step != ev[i].step) return i;
      log.clear();
      apply_batch(s, batch, &log);
      for (size_t t = 0; t < log.size(); ++t)
        if (!(log[t] == ev[i + t])) return i + t;
      i = j;
    }
  } catch (const SimulationError&) {
    return i;
  }
  return std::nullopt;
}

}  // namespace ringgather
