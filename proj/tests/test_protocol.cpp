#include <doctest.h>

#include <map>
#include <random>
#include <set>

#include "oracles.hpp"
#include "ringgather/checker.hpp"
#include "ringgather/protocol.hpp"
#include "ringgather/simulator.hpp"

using namespace ringgather;

namespace {

RingConfig nodes(int n, std::initializer_list<int> v) { return RingConfig(oracle::from_nodes(n, v)); }

std::map<int, std::vector<int>> moves_of(const RingConfig& c) {
  std::map<int, std::vector<int>> out;
  for (const auto& m : enabled_moves(c)) out[m.robot_node] = m.targets;
  return out;
}

const std::vector<RingConfig>& all_15_10() {
  static const auto v = enumerate_initial_configs(15, 10);
  return v;
}

}  // namespace

TEST_CASE("tag names round trip") {
  for (int t = 0; t <= static_cast<int>(Tag::Unknown); ++t) {
    auto tag = static_cast<Tag>(t);
    CHECK(tag_from_string(to_string(tag)) == tag);
  }
  CHECK(std::string(to_string(Tag::BigBlock1_1)) == "BigBlock1_1");
  CHECK_THROWS_AS(tag_from_string("Nope"), ProtocolError);
}

TEST_CASE("parameter constraints are named") {
  CHECK(parameter_violation(15, 10) == "");
  CHECK(parameter_violation(15, 9) == "k even");
  CHECK(parameter_violation(15, 8) == "k>8");
  CHECK(parameter_violation(16, 10) == "n odd");
  CHECK(parameter_violation(13, 10) == "n>k+3");
}

TEST_CASE("classification examples") {
  auto term = classify_protocol_state(nodes(15, {0, 1, 2, 3, 4, 6, 7, 8, 9, 10}));
  CHECK(term.tag == Tag::Terminal);
  CHECK(term.roles.at("H") == std::vector<int>{5});
  CHECK(term.roles.at("Slave") == std::vector<int>{11, 12, 13, 14});

  CHECK(classify_protocol_state(nodes(15, {0, 1, 2, 3, 4, 5, 6, 7, 8, 9})).tag == Tag::Block);

  auto target = RingConfig::from_nodes(15, {5, 5, 0, 1, 2, 3, 7, 8, 9, 10});
  CHECK(classify_protocol_state(target).tag == Tag::Target);

  // towers off the axis are not a protocol state
  CHECK(classify_protocol_state(RingConfig::from_nodes(15, {0, 0, 2, 4, 6, 8, 10, 12, 14, 1})).tag == Tag::Unknown);
  // a lone even ring is outside the rules
  CHECK(classify_protocol_state(nodes(16, {0, 1, 2, 3, 4, 5, 6, 7, 8, 9})).tag == Tag::Unknown);

  CHECK(classify_protocol_state(parse_occupancy("a..............")).tag == Tag::Gathered);
}

TEST_CASE("enabled_moves examples") {
  CHECK(moves_of(nodes(15, {0, 1, 2, 3, 4, 5, 6, 7, 8, 9})) == std::map<int, std::vector<int>>{{0, {14}}, {9, {10}}});
  CHECK(moves_of(nodes(15, {0, 1, 2, 3, 4, 6, 7, 8, 9, 10})) == std::map<int, std::vector<int>>{{4, {5}}, {6, {5}}});
  CHECK(enabled_moves(parse_occupancy("a..............")).empty());
  CHECK_THROWS_WITH_AS(enabled_moves(RingConfig::from_nodes(15, {0, 0, 2, 4, 6, 8, 10, 12, 14, 1})), "no rule",
                       ProtocolError);
}

TEST_CASE("BigBlock2 enables the closest robot with the biggest view") {
  // biggest block 1111 at 8..11; robots 6 and 13 are both two nodes away,
  // the view of 6 wins
  auto rigid = parse_occupancy("..11.11.1111.11");
  CHECK(classify_protocol_state(rigid).tag == Tag::BigBlock2);
  CHECK(moves_of(rigid) == std::map<int, std::vector<int>>{{6, {7}}});
  CHECK(compute_view(rigid, 6) > compute_view(rigid, 13));
  // symmetric variant: both mirror robots move
  auto sym = parse_occupancy(".1.1.11.1111.11");
  CHECK(classify_protocol_state(sym).tag == Tag::BigBlock2);
  CHECK(moves_of(sym) == std::map<int, std::vector<int>>{{6, {7}}, {13, {12}}});
}

TEST_CASE("constructed Phase-2 instances carry their tags") {
  std::vector<std::pair<std::vector<int>, Tag>> cases = {
      {{5, 1, 5, 4}, Tag::Terminal},          {{10, 5}, Tag::Block},
      {{9, 1, 1, 4}, Tag::Biblock},           {{4, 1, 1, 2, 5, 2}, Tag::EvenT},
      {{3, 1, 2, 1, 1, 1, 4, 2}, Tag::SplitA}, {{5, 1, 4, 1, 1, 3}, Tag::OddT},
      {{2, 1, 7, 1, 1, 3}, Tag::TriBlockA},   {{5, 3, 5, 2}, Tag::Start},
      {{4, 1, 1, 1, 1, 1, 4, 2}, Tag::SplitS}, {{1, 1, 8, 1, 1, 3}, Tag::TriBlockS},
  };
  for (const auto& [runs, tag] : cases) {
    auto c = from_runs(15, runs);
    CAPTURE(to_occupancy_string(c));
    CHECK(classify_protocol_state(c).tag == tag);
    CHECK(phase_of(tag) == (tag == Tag::Terminal ? Phase::Phase3 : Phase::Phase2));
  }
  for (int n : {15, 17, 21})
    for (const auto& c : constructed_instances(n, 10)) {
      auto t = classify_protocol_state(c).tag;
      CAPTURE(to_occupancy_string(c));
      CHECK((phase_of(t) == Phase::Phase2 || t == Tag::Terminal));
    }
}

TEST_CASE("phase_of") {
  CHECK(phase_of(Tag::Block) == Phase::Phase2);
  CHECK(phase_of(Tag::BigBlock2) == Phase::Phase1);
  CHECK(phase_of(Tag::Gathered) == Phase::Done);
  CHECK(phase_of(Tag::TerminalSkew) == Phase::Phase3);
  CHECK(phase_of(Tag::P3Absorb) == Phase::Phase3);
  CHECK(phase_of(Tag::Unknown) == Phase::Unknown);
}

TEST_CASE("local_decide examples") {
  auto block = nodes(15, {0, 1, 2, 3, 4, 5, 6, 7, 8, 9});
  auto o0 = observe(block, 0);
  auto d0 = local_decide(o0.view);
  CHECK(d0.kind == LocalDecision::Kind::Move);
  CHECK(decision_targets(d0, 0, o0.forward, 15) == std::vector<int>{14});
  CHECK(local_decide(compute_view(block, 5)).kind == LocalDecision::Kind::Stay);

  auto target = RingConfig::from_nodes(15, {5, 5, 0, 1, 2, 3, 7, 8, 9, 10});
  CHECK(local_decide(compute_view(target, 5)).kind == LocalDecision::Kind::Stay);
}

TEST_CASE("every initial configuration has a rule and a mover") {
  for (const auto& c : all_15_10()) {
    auto st = classify_protocol_state(c);
    CAPTURE(to_occupancy_string(c));
    REQUIRE(st.tag != Tag::Unknown);
    REQUIRE_FALSE(enabled_moves(c).empty());
  }
}

TEST_CASE("local and global decisions agree") {
  for (const auto& c : all_15_10()) {
    auto why = local_global_mismatch(c);
    CAPTURE(to_occupancy_string(c));
    REQUIRE_FALSE(why);
  }
  for (const auto& c : constructed_instances(21, 10)) REQUIRE_FALSE(local_global_mismatch(c));
  std::mt19937_64 rng(3);
  int checked = 0;
  for_each_initial_config(19, 10, false, [&](const RingConfig& c) {
    if (rng() % 20 != 0) return;
    ++checked;
    REQUIRE_FALSE(local_global_mismatch(c));
  });
  CHECK(checked > 100);
}

TEST_CASE("targets are neighbours; MoveEither only for symmetric views") {
  for (const auto& c : all_15_10()) {
    for (const auto& m : enabled_moves(c)) {
      for (int t : m.targets) CHECK((t == oracle::md(m.robot_node + 1, 15) || t == oracle::md(m.robot_node - 1, 15)));
      auto v = compute_view(c, m.robot_node);
      auto d = local_decide(v);
      if (m.targets.size() == 2) {
        CHECK(d.kind == LocalDecision::Kind::MoveEither);
        CHECK(v.symmetric());
      } else {
        CHECK(d.kind == LocalDecision::Kind::Move);
      }
    }
  }
}

TEST_CASE("symmetric configurations enable mirror-closed move sets") {
  for (const auto& c : all_15_10()) {
    auto info = classify_symmetry(c);
    if (info.cfg_class != SymmetryClass::Symmetric) continue;
    auto mv = moves_of(c);
    CAPTURE(to_occupancy_string(c));
    CHECK(mv.size() <= 2);
    const int s = *info.reflection_sum;
    for (const auto& [v, targets] : mv) {
      auto it = mv.find(oracle::md(s - v, 15));
      REQUIRE(it != mv.end());
      std::set<int> mirrored;
      for (int t : targets) mirrored.insert(oracle::md(s - t, 15));
      CHECK(std::set<int>(it->second.begin(), it->second.end()) == mirrored);
    }
  }
}

TEST_CASE("single-mover rules enable exactly one robot") {
  std::set<Tag> single = {Tag::BlockMirror1, Tag::SplitA, Tag::OddT, Tag::EvenT, Tag::Biblock, Tag::TriBlockA};
  std::map<Tag, int> seen;
  auto check = [&](const RingConfig& c) {
    auto t = classify_protocol_state(c).tag;
    if (!single.count(t)) return;
    seen[t] += 1;
    CAPTURE(to_occupancy_string(c));
    CHECK(enabled_moves(c).size() == 1);
  };
  for (const auto& c : all_15_10()) check(c);
  for (int n : {15, 17, 21})
    for (const auto& c : constructed_instances(n, 10)) check(c);
  for (Tag t : single)
    if (t != Tag::BlockMirror1) CHECK(seen[t] > 0);
}

TEST_CASE("Terminal has a unit leader hole and two halves") {
  for (const auto& c : all_15_10()) {
    if (classify_protocol_state(c).tag != Tag::Terminal) continue;
    auto info = classify_symmetry(c);
    REQUIRE(info.leader_hole);
    CHECK(info.leader_hole->size == 1);
    auto b = decompose_blocks(c);
    REQUIRE(b.blocks.size() == 2);
    CHECK(b.blocks[0].size == 5);
    CHECK(b.blocks[1].size == 5);
  }
}

TEST_CASE("classification is deterministic and rotation invariant") {
  std::mt19937_64 rng(11);
  const auto& all = all_15_10();
  for (int it = 0; it < 200; ++it) {
    const auto& c = all[rng() % all.size()];
    int r = static_cast<int>(rng() % 15);
    RingConfig rot(oracle::image(c.occ, r, +1));
    CHECK(classify_protocol_state(rot).tag == classify_protocol_state(c).tag);
    CHECK(enabled_moves(c) == enabled_moves(c));
    auto a = moves_of(c);
    auto b = moves_of(rot);
    REQUIRE(a.size() == b.size());
    for (const auto& [v, t] : a) {
      auto it = b.find(oracle::md(v + r, 15));
      REQUIRE(it != b.end());
      std::vector<int> shifted;
      for (int x : t) shifted.push_back(oracle::md(x + r, 15));
      std::sort(shifted.begin(), shifted.end());
      CHECK(it->second == shifted);
    }
  }
}
