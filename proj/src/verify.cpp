#include "ringgather/verify.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <mutex>
#include <thread>

#include <json.hpp>

namespace ringgather {

namespace {

constexpr size_t kMaxFailuresKept = 50;

struct Record {
  std::string check;
  bool passed;
  std::optional<Counterexample> cx;
};

struct JobResult {
  long long runs = 0;
  long long max_rounds = 0;
  std::vector<Record> records;
};

void note(JobResult& out, const std::string& check, const Verdict& v, const Trace& t) {
  Record r{check, v.passed, std::nullopt};
  if (!v.passed)
    r.cx = Counterexample{to_occupancy_string(t.initial), t.scheduler, t.seed, v.violation->step,
                          v.violation->description, v.violation->occ};
  out.records.push_back(std::move(r));
}

JobResult run_job(const RingConfig& cfg, const VerifyOptions& opt) {
  JobResult out;
  RunLimits limits{opt.max_steps, opt.fairness_bound};
  std::vector<SchedulerSpec> specs;
  if (opt.synchronous) specs.push_back({"synchronous", 0, 0});
  for (int i = 0; i < opt.random_runs; ++i) specs.push_back({"random", opt.seed_base + i, 0});
  for (int i = 0; i < opt.lazy_runs; ++i) specs.push_back({"lazy", opt.seed_base + i, 0});
  bool determinism_done = false;
  for (const auto& spec : specs) {
    auto sched = builtin_scheduler(spec);
    Trace t = run(cfg, *sched, limits);
    out.runs += 1;
    out.max_rounds = std::max(out.max_rounds, t.rounds);
    note(out, "round_bound", check_round_bound(t, opt.c), t);
    note(out, "no_tower_before_target", check_no_tower_before_target(t), t);
    note(out, "never_periodic", check_never_periodic(t), t);
    note(out, "outdated_bound", check_outdated_bound(t), t);
    note(out, "phase_monotonic", check_phase_monotonic(t), t);
    note(out, "replay", check_replay(t), t);
    if (spec.name == "synchronous") note(out, "local_global", check_local_global(t), t);
    if (!determinism_done && spec.name != "synchronous") {
      determinism_done = true;
      auto again = builtin_scheduler(spec);
      Trace t2 = run(cfg, *again, limits);
      Verdict v = trace_to_jsonl(t) == trace_to_jsonl(t2)
                      ? Verdict::pass()
                      : Verdict::fail(0, "rerun produced a different trace", to_occupancy_string(cfg));
      note(out, "determinism", v, t);
    }
  }
  return out;
}

}  // namespace

bool VerifyReport::all_passed() const {
  for (const auto& [name, t] : checks)
    if (t.passed != t.checked) return false;
  return true;
}

VerifyReport verify_grid(const VerifyOptions& opt, const std::function<void(long long, long long)>& progress) {
  auto t0 = std::chrono::steady_clock::now();
  VerifyReport report;
  std::vector<RingConfig> configs;
  for (auto [n, k] : opt.grid) {
    auto cs = enumerate_initial_configs(n, k, opt.relaxed);
    report.configs_per_grid[{n, k}] = static_cast<long long>(cs.size());
    configs.insert(configs.end(), cs.begin(), cs.end());
  }
  report.configs = static_cast<long long>(configs.size());

  std::vector<JobResult> results(configs.size());
  std::atomic<size_t> next{0};
  std::atomic<long long> done{0};
  std::mutex progress_mu;
  auto worker = [&] {
    for (size_t i = next++; i < configs.size(); i = next++) {
      results[i] = run_job(configs[i], opt);
      long long d = ++done;
      if (progress) {
        std::lock_guard<std::mutex> lock(progress_mu);
        progress(d, static_cast<long long>(configs.size()));
      }
    }
  };
  const int jobs = std::max(1, opt.jobs);
  std::vector<std::thread> pool;
  for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  for (const auto& r : results) {
    report.runs += r.runs;
    report.max_rounds = std::max(report.max_rounds, r.max_rounds);
    for (const auto& rec : r.records) {
      auto& tally = report.checks[rec.check];
      tally.checked += 1;
      if (rec.passed)
        tally.passed += 1;
      else if (tally.failures.size() < kMaxFailuresKept)
        tally.failures.push_back(*rec.cx);
    }
  }
  if (opt.phase2) {
    auto& tally = report.checks["phase2_transitions"];
    for (auto [n, k] : opt.grid) {
      if (!parameter_violation(n, k).empty()) continue;
      for (const auto& inst : constructed_instances(n, k)) {
        Verdict v = check_phase2_transition(inst, opt.explore);
        tally.checked += 1;
        if (v.passed)
          tally.passed += 1;
        else if (tally.failures.size() < kMaxFailuresKept)
          tally.failures.push_back({to_occupancy_string(inst), "exhaustive", std::nullopt, v.violation->step,
                                    v.violation->description, v.violation->occ});
      }
    }
  }
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

std::string report_to_json(const VerifyReport& r, int indent) {
  nlohmann::ordered_json j;
  j["passed"] = r.all_passed();
  j["configs"] = r.configs;
  auto& grid = j["grid"] = nlohmann::ordered_json::array();
  for (const auto& [nk, count] : r.configs_per_grid) grid.push_back({{"n", nk.first}, {"k", nk.second}, {"configs", count}});
  j["runs"] = r.runs;
  j["max_rounds"] = r.max_rounds;
  j["wall_seconds"] = r.wall_seconds;
  auto& checks = j["checks"] = nlohmann::ordered_json::object();
  for (const auto& [name, t] : r.checks) {
    nlohmann::ordered_json c;
    c["checked"] = t.checked;
    c["passed"] = t.passed;
    if (!t.failures.empty()) {
      const auto& f = t.failures.front();
      c["first_counterexample"] = {{"initial", f.initial},
                                   {"scheduler", f.scheduler},
                                   {"seed", f.seed ? nlohmann::ordered_json(*f.seed) : nlohmann::ordered_json(nullptr)},
                                   {"step", f.step},
                                   {"description", f.description},
                                   {"occ", f.occ}};
    }
    checks[name] = c;
  }
  return j.dump(indent);
}

}  // namespace ringgather
