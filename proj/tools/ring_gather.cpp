// ring_gather: simulate, enumerate, verify, classify.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ringgather/checker.hpp"
#include "ringgather/protocol.hpp"
#include "ringgather/ring.hpp"
#include "ringgather/simulator.hpp"
#include "ringgather/verify.hpp"

using namespace ringgather;

namespace {

constexpr int kUsage = 2;

struct Options {
  int n = 0;
  int k = 0;
  std::string occ;
  std::vector<int> nodes;
  std::string scheduler = "synchronous";
  std::optional<std::uint64_t> seed;
  long long max_steps = 1'000'000;
  int fairness_bound = 0;
  double c = 20.0;
  std::string out;
  bool relaxed = false;
  int jobs = 1;
  int depth = 0;
  int random_runs = 50;
  int lazy_runs = 10;
  bool no_phase2 = false;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::uint64_t seed_or_env(const Options& o) {
  if (o.seed) return *o.seed;
  if (const char* env = std::getenv("RING_GATHER_SEED")) {
    try {
      size_t used = 0;
      auto v = std::stoull(env, &used);
      if (used == std::string(env).size()) return v;
    } catch (const std::exception&) {
    }
    throw UsageError("RING_GATHER_SEED is not an unsigned integer");
  }
  return 0;
}

RingConfig config_from(const Options& o) {
  if (!o.occ.empty() && !o.nodes.empty()) throw UsageError("give either --occ or --nodes, not both");
  RingConfig cfg;
  if (!o.occ.empty()) {
    cfg = parse_occupancy(o.occ);
    if (o.n && o.n != cfg.size()) throw UsageError("--n disagrees with the occupancy string");
  } else if (!o.nodes.empty()) {
    if (o.n <= 0) throw UsageError("--nodes needs --n");
    cfg = RingConfig::from_nodes(o.n, o.nodes);
  } else {
    throw UsageError("a configuration is required (--occ or --nodes)");
  }
  if (o.k && o.k != cfg.robots()) throw UsageError("--k disagrees with the configuration");
  return cfg;
}

void check_params(int n, int k, bool relaxed) {
  if (relaxed) return;
  auto v = parameter_violation(n, k);
  if (!v.empty()) throw UsageError("parameter constraint violated: " + v);
}

int cmd_simulate(const Options& o) {
  RingConfig cfg = config_from(o);
  check_params(cfg.size(), cfg.robots(), false);
  auto why = initial_violation(cfg);
  if (!why.empty()) throw UsageError("invalid initial configuration: " + why);
  if (o.max_steps <= 0) throw UsageError("--max-steps must be positive");
  if (o.fairness_bound != 0 && o.fairness_bound < 2) throw UsageError("--fairness-bound must be at least 2");
  auto sched = builtin_scheduler({o.scheduler, seed_or_env(o), o.depth});
  Trace t = run(cfg, *sched, {o.max_steps, o.fairness_bound});
  if (!o.out.empty()) {
    std::ofstream f(o.out);
    if (!f) throw std::runtime_error("cannot write " + o.out);
    write_trace(f, t);
  }
  std::cout << "outcome " << to_string(t.outcome) << "\nrounds " << t.rounds << "\nsteps " << t.steps << "\n";
  return t.outcome == Outcome::Gathered ? 0 : 1;
}

int cmd_enumerate(const Options& o) {
  if (o.n <= 0 || o.k < 0) throw UsageError("--n and --k are required");
  check_params(o.n, o.k, o.relaxed);
  long long count = 0;
  for_each_initial_config(o.n, o.k, o.relaxed, [&](const RingConfig& c) {
    std::cout << to_occupancy_string(c) << '\n';
    ++count;
  });
  std::cout << "count " << count << '\n';
  return 0;
}

int cmd_verify(const Options& o) {
  VerifyOptions v;
  if (o.n > 0 || o.k > 0) {
    if (o.n <= 0 || o.k <= 0) throw UsageError("--n and --k go together");
    check_params(o.n, o.k, o.relaxed);
    v.grid = {{o.n, o.k}};
  } else {
    v.grid = {{15, 10}, {17, 10}};
  }
  if (o.jobs < 1) throw UsageError("--jobs must be at least 1");
  if (o.c <= 0) throw UsageError("--c must be positive");
  v.seed_base = seed_or_env(o);
  v.c = o.c;
  v.max_steps = o.max_steps;
  v.fairness_bound = o.fairness_bound;
  v.jobs = o.jobs;
  v.relaxed = o.relaxed;
  v.random_runs = o.random_runs;
  v.lazy_runs = o.lazy_runs;
  v.phase2 = !o.no_phase2;
  v.explore.depth = o.depth;
  auto report = verify_grid(v, [](long long done, long long total) {
    if (done % 50 == 0 || done == total) std::cerr << "verify " << done << "/" << total << "\n";
  });
  auto json = report_to_json(report);
  if (!o.out.empty()) {
    std::ofstream f(o.out);
    if (!f) throw std::runtime_error("cannot write " + o.out);
    f << json << '\n';
  } else {
    std::cout << json << '\n';
  }
  for (const auto& [name, t] : report.checks)
    std::cerr << name << " " << t.passed << "/" << t.checked << "\n";
  return report.all_passed() ? 0 : 1;
}

std::string join(const std::vector<int>& v) {
  std::ostringstream os;
  for (size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  return os.str();
}

int cmd_classify(const Options& o) {
  RingConfig cfg = config_from(o);
  auto st = classify_protocol_state(cfg);
  std::cout << "occ " << to_occupancy_string(cfg) << "\n";
  std::cout << "tag " << to_string(st.tag) << "\nphase " << to_string(phase_of(st)) << "\n";
  for (const auto& [role, nodes] : st.roles) std::cout << "role " << role << " " << join(nodes) << "\n";
  auto sym = classify_symmetry(cfg);
  std::cout << "symmetry " << to_string(sym.cfg_class) << "\n";
  if (sym.axis_node) std::cout << "axis_node " << *sym.axis_node << "\n";
  if (sym.axis_edge) std::cout << "axis_edge " << sym.axis_edge->first << "," << sym.axis_edge->second << "\n";
  if (sym.leader_hole) std::cout << "leader_hole " << sym.leader_hole->start << "+" << sym.leader_hole->size << "\n";
  if (sym.slave_hole) std::cout << "slave_hole " << sym.slave_hole->start << "+" << sym.slave_hole->size << "\n";
  std::cout << "canonical " << canonical_form(cfg) << "\n";
  if (st.tag != Tag::Unknown && st.tag != Tag::Gathered)
    for (const auto& m : enabled_moves(cfg)) std::cout << "move " << m.robot_node << " -> " << join(m.targets) << "\n";
  auto why = parameter_violation(cfg.size(), cfg.robots());
  if (!why.empty()) std::cout << "note parameter constraint violated: " << why << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ring gathering simulator and checker"};
  app.require_subcommand(1);
  Options o;

  auto add_config = [&](CLI::App* s) {
    s->add_option("--n", o.n, "ring size");
    s->add_option("--k", o.k, "robot count");
    s->add_option("--occ", o.occ, "occupancy string");
    s->add_option("--nodes", o.nodes, "robot nodes (with --n)")->delimiter(',');
  };
  auto add_run = [&](CLI::App* s) {
    s->add_option("--seed", o.seed, "scheduler seed (default RING_GATHER_SEED, else 0)");
    s->add_option("--max-steps", o.max_steps, "step limit");
    s->add_option("--fairness-bound", o.fairness_bound, "steps a robot may wait (default 4k)");
  };

  auto* sim = app.add_subcommand("simulate", "run one execution and write its trace");
  add_config(sim);
  add_run(sim);
  sim->add_option("--scheduler", o.scheduler, "synchronous | random | lazy | exhaustive")
      ->check(CLI::IsMember({"synchronous", "random", "random_fair", "lazy", "exhaustive"}));
  sim->add_option("--depth", o.depth, "exhaustive scheduler depth");
  sim->add_option("--out", o.out, "trace output (JSONL)");

  auto* en = app.add_subcommand("enumerate", "list canonical initial configurations");
  en->add_option("--n", o.n, "ring size")->required();
  en->add_option("--k", o.k, "robot count")->required();
  en->add_flag("--relaxed", o.relaxed, "skip the protocol parameter constraints (testing)");

  auto* ver = app.add_subcommand("verify", "run the checker grid");
  ver->add_option("--n", o.n, "ring size (default grid: n=15,17 with k=10)");
  ver->add_option("--k", o.k, "robot count");
  add_run(ver);
  ver->add_option("--c", o.c, "round bound constant for c*n^2");
  ver->add_option("--jobs", o.jobs, "worker threads");
  ver->add_option("--out", o.out, "report output (JSON)");
  ver->add_option("--random-runs", o.random_runs, "random-fair schedules per configuration");
  ver->add_option("--lazy-runs", o.lazy_runs, "lazy schedules per configuration");
  ver->add_option("--depth", o.depth, "Phase-2 exploration depth (default 2k)");
  ver->add_flag("--no-phase2", o.no_phase2, "skip the Phase-2 exploration");
  ver->add_flag("--relaxed", o.relaxed, "skip the protocol parameter constraints (testing)");

  auto* cl = app.add_subcommand("classify", "print tag, roles and symmetry of a configuration");
  add_config(cl);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*sim) return cmd_simulate(o);
    if (*en) return cmd_enumerate(o);
    if (*ver) return cmd_verify(o);
    if (*cl) return cmd_classify(o);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const RingError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const CheckerError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kUsage;
}
