#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ringgather/protocol.hpp"
#include "ringgather/ring.hpp"
#include "ringgather/simulator.hpp"

namespace ringgather {

class CheckerError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Violation {
  long long step = 0;
  std::string description;
  std::string occ;
};

struct Verdict {
  bool passed = true;
  std::optional<Violation> violation;

  static Verdict pass() { return {}; }
  static Verdict fail(long long step, std::string description, std::string occ) {
    return {false, Violation{step, std::move(description), std::move(occ)}};
  }
};

// One representative (the canonical string itself) per dihedral class of
// towerless k-subsets, periodic classes excluded. Without relaxed the
// protocol constraints on (n, k) are enforced.
std::vector<RingConfig> enumerate_initial_configs(int n, int k, bool relaxed = false);
void for_each_initial_config(int n, int k, bool relaxed, const std::function<void(const RingConfig&)>& fn);

Verdict check_no_tower_before_target(const Trace& trace);
Verdict check_never_periodic(const Trace& trace);
Verdict check_outdated_bound(const Trace& trace);
Verdict check_round_bound(const Trace& trace, double c);
Verdict check_replay(const Trace& trace);
Verdict check_phase_monotonic(const Trace& trace);
// local_decide on every robot's view against enabled_moves, for every state
// of the trace.
Verdict check_local_global(const Trace& trace);
std::optional<std::string> local_global_mismatch(const RingConfig& cfg);

Verdict check_distinct_views(int n_max);

struct ExploreOptions {
  int depth = 0;            // relevant-robot actions; 0 means 2k
  int round_constant = 2;   // rounds allowed for constant-time transitions
  int long_rounds = 0;      // rounds for TriBlockS and SplitS; 0 means k
};

struct ExploreStats {
  long long safety_states = 0;
  long long round_states = 0;
  int relevant_robots = 0;
  long long max_rounds_seen = 0;
};

// Explores every schedule from the instance and checks the successor tags and
// round bound of the transition attached to the instance's tag.
Verdict check_phase2_transition(const RingConfig& instance, const ExploreOptions& opt,
                                ExploreStats* stats = nullptr);
Verdict check_phase2_transitions(const std::vector<RingConfig>& instances, const ExploreOptions& opt = {});

// Configuration from alternating block and hole sizes, starting at node 0.
RingConfig from_runs(int n, const std::vector<int>& sizes);
// Hand-built instances of every special Phase-2 tag and Terminal.
std::vector<RingConfig> constructed_instances(int n, int k);

}  // namespace ringgather
