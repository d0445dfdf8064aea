#pragma once

#include <compare>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ringgather {

class RingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Occupancy of an anonymous ring. Node labels are positional only.
struct RingConfig {
  std::vector<int> occ;

  RingConfig() = default;
  explicit RingConfig(std::vector<int> counts);

  // One robot per listed node; repeated nodes stack into towers.
  static RingConfig from_nodes(int n, const std::vector<int>& nodes);

  int size() const { return static_cast<int>(occ.size()); }
  int robots() const;
  int occupied_count() const;
  bool towerless() const;
  std::vector<int> occupied_nodes() const;
  std::vector<int> tower_nodes() const;
  int wrap(long long i) const;

  bool operator==(const RingConfig&) const = default;
};

// '.' for an empty node, '1'..'9' for counts, 'a'..'z' for 10..35.
std::string to_occupancy_string(const RingConfig& cfg);
RingConfig parse_occupancy(std::string_view s);

struct Segment {
  int from = 0;
  int to = 0;
  int distance = 0;
  bool operator==(const Segment&) const = default;
};

struct Hole {
  int start = 0;
  int size = 0;
  bool operator==(const Hole&) const = default;
  bool contains(int node, int n) const;
};

// Consecutive occupied-node segments in increasing index order.
std::vector<Segment> segments(const RingConfig& cfg);
// Maximal empty runs, sorted by start. A run wrapping past n-1 starts at its
// first node in increasing direction.
std::vector<Hole> holes(const RingConfig& cfg);

struct View {
  std::vector<int> dists;
  bool tower_here = false;

  bool symmetric() const;
  auto operator<=>(const View&) const = default;
};

// View plus the ring direction (+1 or -1) whose reading produced dists.
// Symmetric views report +1.
struct OrientedView {
  View view;
  int forward = 1;
};

View compute_view(const RingConfig& cfg, int node);
OrientedView observe(const RingConfig& cfg, int node);
// Distance sequence read from node walking in direction dir (+1 or -1).
std::vector<int> directional_reading(const RingConfig& cfg, int node, int dir);

enum class SymmetryClass { Rigid, Symmetric, Periodic };
const char* to_string(SymmetryClass c);

struct SymmetryInfo {
  SymmetryClass cfg_class = SymmetryClass::Rigid;
  // Filled only for Symmetric configurations on odd rings.
  std::optional<int> axis_node;
  std::optional<std::pair<int, int>> axis_edge;
  std::optional<Hole> leader_hole;
  std::optional<Hole> slave_hole;
  // Reflection j -> (reflection_sum - j) mod n, when Symmetric.
  std::optional<int> reflection_sum;
};

SymmetryInfo classify_symmetry(const RingConfig& cfg);

int inter_distance(const RingConfig& cfg);

struct Block {
  int start = 0;  // first node in increasing direction
  int size = 0;   // robot count
  std::vector<int> nodes;
  bool operator==(const Block&) const = default;
};

struct BlockDecomposition {
  int d = 0;
  std::vector<Block> blocks;
  std::vector<int> isolated;
  std::vector<Hole> holes;
};

BlockDecomposition decompose_blocks(const RingConfig& cfg);

// Lexicographically least occupancy string over all rotations and reflections.
std::string canonical_form(const RingConfig& cfg);

}  // namespace ringgather
