#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ringgather/checker.hpp"

namespace ringgather {

struct VerifyOptions {
  std::vector<std::pair<int, int>> grid;  // (n, k)
  bool synchronous = true;
  int random_runs = 50;
  int lazy_runs = 10;
  std::uint64_t seed_base = 1;
  double c = 20.0;
  long long max_steps = 1'000'000;
  int fairness_bound = 0;
  int jobs = 1;
  bool relaxed = false;
  // explore the constructed Phase-2 instances of every grid entry
  bool phase2 = true;
  ExploreOptions explore;
};

struct Counterexample {
  std::string initial;
  std::string scheduler;
  std::optional<std::uint64_t> seed;
  long long step = 0;
  std::string description;
  std::string occ;
};

struct CheckTally {
  long long checked = 0;
  long long passed = 0;
  std::vector<Counterexample> failures;  // in job order
};

struct VerifyReport {
  long long configs = 0;
  long long runs = 0;
  long long max_rounds = 0;
  double wall_seconds = 0;
  std::map<std::string, CheckTally> checks;
  std::map<std::pair<int, int>, long long> configs_per_grid;

  bool all_passed() const;
};

// Runs every (config, scheduler) job of the grid and every trace check on it.
// Results are merged in job order, so the report does not depend on jobs.
VerifyReport verify_grid(const VerifyOptions& opt, const std::function<void(long long done, long long total)>& progress = {});

std::string report_to_json(const VerifyReport& report, int indent = 2);

}  // namespace ringgather
