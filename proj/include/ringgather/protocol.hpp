#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "ringgather/ring.hpp"

namespace ringgather {

class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Tag {
  BlockDistance,
  BlockMirror1,
  BlockMirror2,
  BigBlock1_1,
  BigBlock1_2,
  BigBlock2,
  Start,
  EvenT,
  SplitS,
  SplitA,
  OddT,
  Block,
  Biblock,
  TriBlockS,
  TriBlockA,
  Terminal,
  TerminalSkew,
  Target,
  P3Absorb,
  P3SingleBlock,
  P3Skew,
  Gathered,
  Unknown,
};

const char* to_string(Tag t);
Tag tag_from_string(std::string_view s);

enum class Phase { Phase1, Phase2, Phase3, Done, Unknown };
const char* to_string(Phase p);

// Role name -> node indices (holes and blocks listed node by node).
using Roles = std::map<std::string, std::vector<int>>;

struct ProtocolState {
  Tag tag = Tag::Unknown;
  Roles roles;
};

struct MoveIntent {
  int robot_node = 0;
  std::vector<int> targets;  // sorted; two entries only for symmetric views
  bool operator==(const MoveIntent&) const = default;
};

struct LocalDecision {
  enum class Kind { Stay, Move, MoveEither };
  Kind kind = Kind::Stay;
  // For Move: +1 walks the way the view's dists are read, -1 the other way.
  int direction = 0;
  bool operator==(const LocalDecision&) const = default;
};

ProtocolState classify_protocol_state(const RingConfig& cfg);
std::vector<MoveIntent> enabled_moves(const RingConfig& cfg);
LocalDecision local_decide(const View& view);
Phase phase_of(const ProtocolState& state);
Phase phase_of(Tag tag);

// Ring targets for a robot at node whose view was read in direction forward.
std::vector<int> decision_targets(const LocalDecision& d, int node, int forward, int n);

// Protocol preconditions on (n, k); empty string when satisfied, otherwise
// the violated constraint ("k even", "k>8", "n odd", "n>k+3").
std::string parameter_violation(int n, int k);

}  // namespace ringgather
