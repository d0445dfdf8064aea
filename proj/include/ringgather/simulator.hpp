#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "ringgather/protocol.hpp"
#include "ringgather/ring.hpp"

namespace ringgather {

class SimulationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using RobotId = int;

struct PendingIntent {
  RobotId robot = 0;
  long long snapshot_step = 0;
  std::vector<int> targets;  // empty: Stay; two entries: Either
  long long moves_seen = 0;  // moves completed before the snapshot

  bool stay() const { return targets.empty(); }
};

struct SimState {
  RingConfig cfg;
  std::vector<int> positions;
  std::vector<std::optional<PendingIntent>> pending;
  long long step = 0;
  long long round = 0;
  std::vector<char> cycle_progress;
  long long moves = 0;
  std::vector<long long> last_cycle;  // step of the robot's last Move phase

  static SimState initial(const RingConfig& cfg);
  int robots() const { return static_cast<int>(positions.size()); }
  bool outdated(const PendingIntent& p) const { return moves > p.moves_seen; }
  bool operator==(const SimState&) const = default;
};

struct SchedulerAction {
  enum class Kind { Activate, Fire };
  Kind kind = Kind::Activate;
  RobotId robot = 0;
  std::optional<int> choice;  // target node for an Either intent

  static SchedulerAction activate(RobotId r) { return {Kind::Activate, r, std::nullopt}; }
  static SchedulerAction fire(RobotId r, std::optional<int> c = std::nullopt) { return {Kind::Fire, r, c}; }
  bool operator==(const SchedulerAction&) const = default;
};

struct Event {
  long long step = 0;
  SchedulerAction::Kind kind = SchedulerAction::Kind::Activate;
  RobotId robot = 0;
  int from = 0;
  std::optional<int> to;
  std::string occ;
  Tag tag = Tag::Unknown;
  long long round = 0;
  bool operator==(const Event&) const = default;
};

enum class Outcome { Gathered, StepLimit, Stuck };
const char* to_string(Outcome o);
Outcome outcome_from_string(std::string_view s);

struct Trace {
  RingConfig initial;
  std::string scheduler;
  std::optional<std::uint64_t> seed;
  int fairness_bound = 0;
  std::vector<Event> events;
  Outcome outcome = Outcome::StepLimit;
  long long rounds = 0;
  long long steps = 0;
  bool operator==(const Trace&) const = default;
};

// Applies one action as a step of its own.
SimState step(const SimState& state, const SchedulerAction& action);
// Applies a batch sharing one step index: activations (listed first) observe
// the configuration before any fire of the batch.
SimState step(const SimState& state, const std::vector<SchedulerAction>& batch);
// In-place variant; appends one event per action when log is given.
void apply_batch(SimState& state, const std::vector<SchedulerAction>& batch, std::vector<Event>* log);

// Ring targets a robot at node would choose now (empty for Stay or no rule).
std::vector<int> current_targets(const RingConfig& cfg, int node);

class Scheduler {
 public:
  virtual ~Scheduler() = default;
  virtual std::string name() const = 0;
  virtual std::optional<std::uint64_t> seed() const { return std::nullopt; }
  virtual std::vector<SchedulerAction> next(const SimState& state) = 0;
};

class SynchronousScheduler : public Scheduler {
 public:
  std::string name() const override { return "synchronous"; }
  std::vector<SchedulerAction> next(const SimState& state) override;
};

class RandomFairScheduler : public Scheduler {
 public:
  explicit RandomFairScheduler(std::uint64_t seed) : seed_(seed), rng_(seed) {}
  std::string name() const override { return "random"; }
  std::optional<std::uint64_t> seed() const override { return seed_; }
  std::vector<SchedulerAction> next(const SimState& state) override;

 private:
  std::uint64_t seed_;
  std::mt19937_64 rng_;
};

// Holds one pending mover back while everything else proceeds; only the
// fairness bound releases it.
class LazyScheduler : public Scheduler {
 public:
  explicit LazyScheduler(std::uint64_t seed) : seed_(seed), rng_(seed) {}
  std::string name() const override { return "lazy"; }
  std::optional<std::uint64_t> seed() const override { return seed_; }
  std::vector<SchedulerAction> next(const SimState& state) override;

 private:
  std::uint64_t seed_;
  std::mt19937_64 rng_;
  std::optional<RobotId> held_;
};

// Enumerates every single-action successor; next() takes the first one.
class ExhaustiveScheduler : public Scheduler {
 public:
  explicit ExhaustiveScheduler(int depth) : depth_(depth) {}
  std::string name() const override { return "exhaustive"; }
  std::vector<SchedulerAction> next(const SimState& state) override;
  std::vector<SchedulerAction> successors(const SimState& state) const;
  int depth() const { return depth_; }

 private:
  int depth_;
};

struct SchedulerSpec {
  std::string name;  // synchronous | random | random_fair | lazy | exhaustive
  std::uint64_t seed = 0;
  int depth = 0;
};

std::unique_ptr<Scheduler> builtin_scheduler(const SchedulerSpec& spec);

struct RunLimits {
  long long max_steps = 1'000'000;
  int fairness_bound = 0;  // 0: 4k
};

// Reason an initial configuration is rejected, or empty when run accepts it.
std::string initial_violation(const RingConfig& cfg);

Trace run(const RingConfig& initial, Scheduler& scheduler, const RunLimits& limits);

// Re-executes the trace through step(); index of the first event whose
// position, occupancy or tag differs, or nullopt when all match.
std::optional<std::size_t> replay_mismatch(const Trace& trace);

void write_trace(std::ostream& out, const Trace& trace);
std::string trace_to_jsonl(const Trace& trace);
Trace read_trace(std::istream& in);

}  // namespace ringgather
