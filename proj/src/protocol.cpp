#include "ringgather/protocol.hpp"

#include <algorithm>
#include <array>
#include <memory>
#include <optional>
#include <unordered_map>

namespace ringgather {

namespace {

constexpr std::array<const char*, 23> kTagNames = {
    "BlockDistance", "BlockMirror1", "BlockMirror2", "BigBlock1_1", "BigBlock1_2", "BigBlock2",
    "Start",         "EvenT",        "SplitS",       "SplitA",      "OddT",        "Block",
    "Biblock",       "TriBlockS",    "TriBlockA",    "Terminal",    "TerminalSkew", "Target",
    "P3Absorb",      "P3SingleBlock", "P3Skew",      "Gathered",    "Unknown"};

int mod(long long a, int n) {
  long long r = a % n;
  return static_cast<int>(r < 0 ? r + n : r);
}

// Result of the rules on a support (set of occupied nodes). Tower robots are
// filtered out later, since the support does not show multiplicities.
struct Analysis {
  Tag tag = Tag::Unknown;
  Roles roles;
  std::vector<MoveIntent> moves;
  std::vector<int> tower_sites;  // nodes where a tower may stand
};

struct Run {
  std::vector<int> members;  // robot indices in increasing ring order
  int front() const { return members.front(); }
  int back() const { return members.back(); }
  int size() const { return static_cast<int>(members.size()); }
};

struct Layout {
  int n = 0;
  int m = 0;
  std::vector<int> pos;
  std::vector<int> gap;
  std::vector<int> index;
  RingConfig support;
  SymmetryInfo sym;

  explicit Layout(const RingConfig& s) : support(s) {
    n = s.size();
    index.assign(n, -1);
    for (int v = 0; v < n; ++v)
      if (s.occ[v] > 0) {
        index[v] = static_cast<int>(pos.size());
        pos.push_back(v);
      }
    m = static_cast<int>(pos.size());
    gap.resize(m);
    for (int i = 0; i < m; ++i) gap[i] = m == 1 ? n : mod(pos[(i + 1) % m] - pos[i], n);
    if (m > 0) sym = classify_symmetry(s);
  }

  int next(int i) const { return (i + 1) % m; }
  int prev(int i) const { return (i + m - 1) % m; }
  int node(long long v) const { return mod(v, n); }
  bool occupied(long long v) const { return index[node(v)] >= 0; }

  std::vector<int> reading(int i, int dir) const {
    std::vector<int> r(m);
    for (int t = 0; t < m; ++t) r[t] = dir > 0 ? gap[(i + t) % m] : gap[mod(i - 1 - t, m)];
    return r;
  }
  std::vector<int> view(int i) const { return std::max(reading(i, +1), reading(i, -1)); }
  bool symmetric_view(int i) const { return reading(i, +1) == reading(i, -1); }
  bool is_symmetric() const { return sym.cfg_class == SymmetryClass::Symmetric; }

  std::vector<int> hole_nodes(int i) const {
    std::vector<int> out;
    for (int t = 1; t < gap[i]; ++t) out.push_back(node(pos[i] + t));
    return out;
  }
  std::vector<int> run_nodes(const Run& r) const {
    std::vector<int> out;
    for (int i : r.members) out.push_back(pos[i]);
    return out;
  }
  // Index i such that the axis node lies strictly inside the gap after pos[i].
  int axis_gap() const {
    int x = *sym.axis_node;
    for (int i = 0; i < m; ++i) {
      int off = mod(x - pos[i], n);
      if (off > 0 && off < gap[i]) return i;
    }
    return -1;
  }
};

// Maximal runs of robots spaced exactly s apart. Empty when every gap is s.
std::vector<Run> make_runs(const Layout& L, int s) {
  std::vector<Run> runs;
  int first = -1;
  for (int i = 0; i < L.m; ++i)
    if (L.gap[L.prev(i)] != s) {
      first = i;
      break;
    }
  if (first < 0) return runs;
  Run cur;
  for (int t = 0; t < L.m; ++t) {
    int i = (first + t) % L.m;
    cur.members.push_back(i);
    if (L.gap[i] != s) {
      runs.push_back(cur);
      cur.members.clear();
    }
  }
  return runs;
}

void add_move(const Layout& L, Analysis& A, int robot, int dir) {
  int from = L.pos[robot];
  int to = L.node(from + dir);
  for (auto& mv : A.moves)
    if (mv.robot_node == from) {
      if (std::find(mv.targets.begin(), mv.targets.end(), to) == mv.targets.end())
        mv.targets.push_back(to);
      return;
    }
  A.moves.push_back({from, {to}});
}

int run_of(const std::vector<Run>& runs, int robot) {
  for (size_t r = 0; r < runs.size(); ++r)
    for (int i : runs[r].members)
      if (i == robot) return static_cast<int>(r);
  return -1;
}

// ---------------------------------------------------------------- Phase 3

// Symmetric odd support with the axis node occupied.
bool phase3_symmetric(const Layout& L, Analysis& A) {
  if (!L.is_symmetric() || !L.sym.axis_node) return false;
  int c = *L.sym.axis_node;
  int ci = L.index[c];
  if (ci < 0) return false;
  auto runs = make_runs(L, 1);
  A.tower_sites = {c};
  A.roles["tower"] = {c};
  if (runs.empty()) return false;
  int r0 = run_of(runs, ci);
  const Run& b0 = runs[r0];
  if (runs.size() == 1) {
    if (b0.size() < 3) return false;
    A.tag = Tag::P3SingleBlock;
    A.roles["B0"] = L.run_nodes(b0);
    add_move(L, A, L.prev(ci), +1);
    add_move(L, A, L.next(ci), -1);
    return true;
  }
  A.tag = b0.size() == 1 ? Tag::Target : Tag::P3Absorb;
  A.roles["B0"] = L.run_nodes(b0);
  add_move(L, A, L.prev(b0.front()), +1);
  add_move(L, A, L.next(b0.back()), -1);
  return true;
}

// One of a symmetric pair has already moved: find the symmetric predecessor
// and enable the lagging partner.
bool phase3_skew(const Layout& L, Analysis& A) {
  std::optional<Analysis> found;
  for (int vi = 0; vi < L.m; ++vi) {
    int v = L.pos[vi];
    for (int dir : {+1, -1}) {
      int u = L.node(v - dir);
      if (L.occupied(u)) continue;
      RingConfig prior = L.support;
      prior.occ[v] = 0;
      prior.occ[u] = 1;
      Layout P(prior);
      Analysis pa;
      if (!phase3_symmetric(P, pa)) continue;
      bool has_move = false;
      for (const auto& mv : pa.moves)
        if (mv.robot_node == u && mv.targets == std::vector<int>{v}) has_move = true;
      if (!has_move) continue;
      for (const auto& mv : pa.moves) {
        if (mv.robot_node == u) continue;
        if (!L.occupied(mv.robot_node) || mv.targets.size() != 1) continue;
        int t = mv.targets[0];
        if (L.occupied(t)) continue;
        Analysis cand;
        cand.tag = Tag::P3Skew;
        cand.tower_sites = pa.tower_sites;
        cand.roles["tower"] = pa.tower_sites;
        cand.roles["moved"] = {v};
        cand.moves.push_back({mv.robot_node, {t}});
        if (found && found->moves != cand.moves) return false;
        if (!found) found = cand;
      }
    }
  }
  if (!found) return false;
  A = *found;
  return true;
}

bool phase3_odd(const Layout& L, Analysis& A) {
  if (L.sym.cfg_class == SymmetryClass::Periodic) return false;
  if (L.is_symmetric()) return phase3_symmetric(L, A);
  return phase3_skew(L, A);
}

// -------------------------------------------------- Terminal and its skew

bool terminal(const Layout& L, const std::vector<Run>& runs, Analysis& A) {
  if (runs.size() != 2 || runs[0].size() != runs[1].size()) return false;
  int h1 = L.gap[runs[0].back()] - 1;
  int h2 = L.gap[runs[1].back()] - 1;
  if ((h1 == 1) == (h2 == 1)) return false;
  int r = h1 == 1 ? 0 : 1;
  const Run& a = runs[r];
  const Run& b = runs[1 - r];
  A.tag = Tag::Terminal;
  A.roles["H"] = L.hole_nodes(a.back());
  A.roles["Slave"] = L.hole_nodes(b.back());
  A.roles["B1"] = L.run_nodes(a);
  A.roles["B2"] = L.run_nodes(b);
  add_move(L, A, a.back(), +1);
  add_move(L, A, b.front(), -1);
  return true;
}

bool terminal_skew(const Layout& L, const std::vector<Run>& runs, Analysis& A) {
  if (runs.size() != 2) return false;
  int h1 = L.gap[runs[0].back()] - 1;
  int h2 = L.gap[runs[1].back()] - 1;
  if ((h1 == 1) == (h2 == 1)) return false;
  int big = runs[0].size() > runs[1].size() ? 0 : 1;
  const Run& b1 = runs[big];
  const Run& b2 = runs[1 - big];
  if (b1.size() != b2.size() + 2) return false;
  // r1 is the border of B1 next to the size-1 hole.
  bool hole_after_b1 = (big == 0 ? h1 : h2) == 1;
  int r1 = hole_after_b1 ? b1.back() : b1.front();
  int mover = hole_after_b1 ? L.prev(r1) : L.next(r1);
  A.tag = Tag::TerminalSkew;
  A.roles["r1"] = {L.pos[r1]};
  A.roles["B1"] = L.run_nodes(b1);
  A.roles["B2"] = L.run_nodes(b2);
  A.tower_sites = {L.pos[r1]};
  add_move(L, A, mover, hole_after_b1 ? +1 : -1);
  return true;
}

// ------------------------------------------------------------ Phase-2 shapes

struct Shape {
  const Layout& L;
  const std::vector<Run>& runs;
  int R() const { return static_cast<int>(runs.size()); }
  int size(int r) const { return runs[mod(r, R())].size(); }
  // empty nodes after run r
  int hole(int r) const { return L.gap[runs[mod(r, R())].back()] - 1; }
  std::vector<int> hole_nodes(int r) const { return L.hole_nodes(runs[mod(r, R())].back()); }
  std::vector<int> nodes(int r) const { return L.run_nodes(runs[mod(r, R())]); }
  const Run& run(int r) const { return runs[mod(r, R())]; }
  // hole between two neighbouring runs
  int hole_between(int a, int b) const { return mod(b - a, R()) == 1 ? hole(a) : hole(b); }
  // border of run a facing neighbouring run b, with the direction toward b
  std::pair<int, int> border_toward(int a, int b) const {
    if (mod(b - a, R()) == 1) return {run(a).back(), +1};
    return {run(a).front(), -1};
  }
};

bool start(const Shape& S, Analysis& A) {
  const Layout& L = S.L;
  if (S.R() != 2 || S.size(0) != S.size(1) || !L.is_symmetric()) return false;
  if (S.hole(0) == 1 || S.hole(1) == 1) return false;
  int h = S.hole(0) % 2 == 1 ? 0 : 1;
  A.tag = Tag::Start;
  A.roles["H"] = S.hole_nodes(h);
  A.roles["Slave"] = S.hole_nodes(h + 1);
  A.roles["B1"] = S.nodes(h);
  A.roles["B2"] = S.nodes(h + 1);
  add_move(L, A, S.run(h).back(), +1);
  add_move(L, A, S.run(h + 1).front(), -1);
  return true;
}

// Runs of sizes 1, m/2-1 and m/2 as (x, y, z), when the sizes fit.
std::optional<std::array<int, 3>> t_shape(const Shape& S) {
  const int m = S.L.m;
  if (S.R() != 3) return std::nullopt;
  int x = -1, y = -1, z = -1;
  for (int r = 0; r < 3; ++r) {
    if (S.size(r) == 1)
      x = r;
    else if (S.size(r) == m / 2 - 1)
      y = r;
    else if (S.size(r) == m / 2)
      z = r;
  }
  if (x < 0 || y < 0 || z < 0) return std::nullopt;
  if (S.hole_between(x, y) != 1) return std::nullopt;
  return std::array<int, 3>{x, y, z};
}

bool even_t(const Shape& S, Analysis& A) {
  if (S.L.is_symmetric()) return false;
  auto t = t_shape(S);
  if (!t) return false;
  auto [x, y, z] = *t;
  if (S.hole_between(x, z) % 2 != 0) return false;
  A.tag = Tag::EvenT;
  A.roles["B1"] = S.nodes(x);
  A.roles["B2"] = S.nodes(y);
  A.roles["B3"] = S.nodes(z);
  auto [robot, dir] = S.border_toward(z, x);
  add_move(S.L, A, robot, dir);
  return true;
}

bool odd_t(const Shape& S, Analysis& A) {
  if (S.L.is_symmetric()) return false;
  auto t = t_shape(S);
  if (!t) return false;
  for (int r = 0; r < 3; ++r)
    if (S.hole(r) % 2 == 0) return false;
  auto [x, y, z] = *t;
  A.tag = Tag::OddT;
  A.roles["B1"] = S.nodes(x);
  A.roles["B2"] = S.nodes(y);
  A.roles["B3"] = S.nodes(z);
  auto [robot, dir] = S.border_toward(x, y);
  add_move(S.L, A, robot, dir);
  return true;
}

bool split_s(const Shape& S, Analysis& A) {
  const Layout& L = S.L;
  if (S.R() != 4 || !L.is_symmetric()) return false;
  int g = L.axis_gap();
  if (g < 0) return false;
  int h = run_of(S.runs, g);
  if (S.run(h).back() != g) return false;
  if (S.hole(h + 1) != 1 || S.hole(h + 3) != 1) return false;
  A.tag = Tag::SplitS;
  A.roles["H"] = S.hole_nodes(h);
  A.roles["Slave"] = S.hole_nodes(h + 2);
  A.roles["L1"] = S.nodes(h);
  A.roles["L2"] = S.nodes(h + 1);
  A.roles["S2"] = S.nodes(h + 2);
  A.roles["S1"] = S.nodes(h + 3);
  add_move(L, A, S.run(h + 2).front(), -1);
  add_move(L, A, S.run(h + 3).back(), +1);
  return true;
}

bool split_a(const Shape& S, Analysis& A) {
  const Layout& L = S.L;
  if (S.R() != 4 || L.is_symmetric()) return false;
  int e = -1;
  for (int r = 0; r < 4; ++r)
    if (S.hole(r) % 2 == 0) {
      if (e >= 0) return false;
      e = r;
    }
  if (e < 0) return false;
  int s1, s2, l1, l2;
  if (S.size(e) == S.size(e + 1) + 1) {
    s1 = e, s2 = e + 1, l1 = e - 1, l2 = e + 2;
  } else if (S.size(e + 1) == S.size(e) + 1) {
    s1 = e + 1, s2 = e, l1 = e + 2, l2 = e - 1;
  } else {
    return false;
  }
  if (S.hole_between(s1, l1) != 1 || S.hole_between(s2, l2) != 1) return false;
  if (S.size(l2) != S.size(l1) + 1 || S.size(s1) + S.size(l1) != L.m / 2) return false;
  A.tag = Tag::SplitA;
  A.roles["S1"] = S.nodes(s1);
  A.roles["S2"] = S.nodes(s2);
  A.roles["L1"] = S.nodes(l1);
  A.roles["L2"] = S.nodes(l2);
  auto [robot, dir] = S.border_toward(mod(s1, 4), mod(l1, 4));
  add_move(L, A, robot, dir);
  return true;
}

bool block(const Shape& S, Analysis& A) {
  if (S.R() != 1) return false;
  A.tag = Tag::Block;
  A.roles["B1"] = S.nodes(0);
  add_move(S.L, A, S.run(0).front(), -1);
  add_move(S.L, A, S.run(0).back(), +1);
  return true;
}

bool biblock(const Shape& S, Analysis& A) {
  const Layout& L = S.L;
  if (S.R() != 2 || L.is_symmetric()) return false;
  int big = S.size(0) == L.m - 1 ? 0 : (S.size(1) == L.m - 1 ? 1 : -1);
  if (big < 0 || S.size(big + 1) != 1) return false;
  if ((S.hole(0) == 1) == (S.hole(1) == 1)) return false;
  A.tag = Tag::Biblock;
  A.roles["B1"] = S.nodes(big);
  A.roles["B2"] = S.nodes(big + 1);
  if (S.hole(big) == 1)
    add_move(L, A, S.run(big).front(), -1);
  else
    add_move(L, A, S.run(big).back(), +1);
  return true;
}

bool tri_block_s(const Shape& S, Analysis& A) {
  const Layout& L = S.L;
  if (S.R() != 3 || !L.is_symmetric()) return false;
  int e = L.sym.axis_edge->first;
  if (!L.occupied(e)) return false;
  int mid = run_of(S.runs, L.index[e]);
  if (S.hole(mid - 1) != 1 || S.hole(mid) != 1) return false;
  A.tag = Tag::TriBlockS;
  A.roles["B1"] = S.nodes(mid);
  A.roles["H"] = S.hole_nodes(mid + 1);
  add_move(L, A, S.run(mid).front(), -1);
  add_move(L, A, S.run(mid).back(), +1);
  return true;
}

bool tri_block_a(const Shape& S, Analysis& A) {
  const Layout& L = S.L;
  if (S.R() != 3 || L.is_symmetric()) return false;
  int b1 = -1;
  for (int r = 0; r < 3; ++r)
    if (S.hole(r - 1) == 1 && S.hole(r) == 1) {
      if (b1 >= 0) return false;
      b1 = r;
    }
  if (b1 < 0) return false;
  int b2, b3;
  if (S.size(b1 + 1) == S.size(b1 + 2) + 1) {
    b2 = b1 + 1, b3 = b1 + 2;
  } else if (S.size(b1 + 2) == S.size(b1 + 1) + 1) {
    b2 = b1 + 2, b3 = b1 + 1;
  } else {
    return false;
  }
  A.tag = Tag::TriBlockA;
  A.roles["B1"] = S.nodes(b1);
  A.roles["B2"] = S.nodes(b2);
  A.roles["B3"] = S.nodes(b3);
  auto [robot, dir] = S.border_toward(b1, mod(b3, 3));
  add_move(L, A, robot, dir);
  return true;
}

bool special(const Layout& L, const std::vector<Run>& runs, Analysis& A) {
  Shape S{L, runs};
  return start(S, A) || even_t(S, A) || split_s(S, A) || split_a(S, A) || tri_block_a(S, A) ||
         odd_t(S, A) || block(S, A) || biblock(S, A) || tri_block_s(S, A);
}

// ---------------------------------------------------------------- Phase 1

void enable_best_views(const Layout& L, Analysis& A, const std::vector<std::pair<int, int>>& cands) {
  std::vector<int> best;
  for (const auto& [robot, dir] : cands) best = std::max(best, L.view(robot));
  for (const auto& [robot, dir] : cands)
    if (L.view(robot) == best) add_move(L, A, robot, dir);
}

bool block_distance(const Layout& L, int d, const std::vector<Run>& runs, Analysis& A) {
  if (d <= 1 || !L.is_symmetric()) return false;
  for (const auto& r : runs)
    if (r.size() < 2) return false;
  if (!(runs.size() == 1 || (runs.size() == 2 && runs[0].size() == runs[1].size()))) return false;
  int i = L.axis_gap();
  if (i < 0) return false;
  A.tag = Tag::BlockDistance;
  A.roles["H"] = L.hole_nodes(i);
  add_move(L, A, i, -1);
  add_move(L, A, L.next(i), +1);
  return true;
}

bool block_mirror(const Layout& L, const std::vector<Run>& runs, Analysis& A) {
  if (runs.size() <= 2) return false;
  for (const auto& r : runs)
    if (r.size() < 2 || r.size() != runs[0].size()) return false;
  const int R = static_cast<int>(runs.size());
  if (!L.is_symmetric()) {
    int best_gap = L.n + 1;
    for (const auto& r : runs) best_gap = std::min(best_gap, L.gap[r.back()]);
    std::vector<std::pair<int, int>> cands;
    for (int r = 0; r < R; ++r)
      if (L.gap[runs[r].back()] == best_gap) {
        cands.push_back({runs[r].back(), +1});
        cands.push_back({runs[(r + 1) % R].front(), -1});
      }
    A.tag = Tag::BlockMirror1;
    enable_best_views(L, A, cands);
    return true;
  }
  int i = L.axis_gap();
  if (i < 0) return false;
  std::vector<int> guides{run_of(runs, i)};
  if (runs[guides[0]].back() == i) guides.push_back(run_of(runs, L.next(i)));
  A.tag = Tag::BlockMirror2;
  A.roles["H"] = L.hole_nodes(i);
  for (size_t g = 0; g < guides.size(); ++g) {
    const Run& gr = runs[guides[g]];
    A.roles["G" + std::to_string(g + 1)] = L.run_nodes(gr);
    auto is_guide = [&](int robot) {
      int r = run_of(runs, robot);
      return std::find(guides.begin(), guides.end(), r) != guides.end();
    };
    int before = L.prev(gr.front());
    if (before != i && !is_guide(before)) add_move(L, A, before, +1);
    int after = L.next(gr.back());
    if (gr.back() != i && !is_guide(after)) add_move(L, A, after, -1);
  }
  return true;
}

bool big_block(const Layout& L, int d, const std::vector<Run>& runs, Analysis& A) {
  int smax = 0;
  for (const auto& r : runs) smax = std::max(smax, r.size());
  if (smax < 2) return false;
  std::vector<char> in_big(L.m, 0);
  std::vector<char> isolated(L.m, 0);
  std::vector<int> big_nodes;
  for (const auto& r : runs) {
    if (r.size() == 1) isolated[r.front()] = 1;
    if (r.size() == smax)
      for (int i : r.members) in_big[i] = 1;
  }
  bool type1 = false;
  int iso_count = 0;
  for (int i = 0; i < L.m; ++i)
    if (isolated[i]) {
      ++iso_count;
      if (in_big[L.next(i)] || in_big[L.prev(i)]) type1 = true;
    }
  for (const auto& r : runs)
    if (r.size() == smax) {
      auto nodes = L.run_nodes(r);
      big_nodes.insert(big_nodes.end(), nodes.begin(), nodes.end());
    }
  std::sort(big_nodes.begin(), big_nodes.end());
  A.roles["D"] = big_nodes;

  if (type1 && d == 1 && L.sym.cfg_class == SymmetryClass::Rigid && iso_count == 2) {
    int a = -1;
    for (int i = 0; i < L.m; ++i)
      if (isolated[i] && isolated[L.next(i)]) a = i;
    if (a >= 0) {
      int b = L.next(a);
      std::vector<int> sizes;
      for (const auto& r : runs)
        if (r.size() >= 2) sizes.push_back(r.size());
      bool shape_ok = (sizes.size() == 1 && sizes[0] == L.m - 2) ||
                      (sizes.size() == 2 && sizes[0] == (L.m - 2) / 2 && sizes[1] == sizes[0]);
      int ga = L.gap[L.prev(a)];
      int gb = L.gap[b];
      if (shape_ok && ga != gb) {
        A.tag = Tag::BigBlock1_1;
        if (ga > gb)
          add_move(L, A, a, -1);
        else
          add_move(L, A, b, +1);
        return true;
      }
    }
  }

  int best = L.n + 1;
  struct Cand {
    int robot;
    int dist;
    std::vector<int> dirs;
  };
  std::vector<Cand> cands;
  for (int i = 0; i < L.m; ++i) {
    if (in_big[i] || (type1 && !isolated[i])) continue;
    Cand c{i, L.n + 1, {}};
    if (in_big[L.next(i)]) c = {i, L.gap[i], {+1}};
    if (in_big[L.prev(i)]) {
      int g = L.gap[L.prev(i)];
      if (g < c.dist)
        c = {i, g, {-1}};
      else if (g == c.dist)
        c.dirs.push_back(-1);
    }
    if (c.dirs.empty()) continue;
    best = std::min(best, c.dist);
    cands.push_back(c);
  }
  if (cands.empty()) return false;
  std::vector<int> best_view;
  for (const auto& c : cands)
    if (c.dist == best) best_view = std::max(best_view, L.view(c.robot));
  A.tag = type1 ? Tag::BigBlock1_2 : Tag::BigBlock2;
  for (const auto& c : cands) {
    if (c.dist != best || L.view(c.robot) != best_view) continue;
    if (c.dirs.size() == 1 || L.symmetric_view(c.robot)) {
      for (int dir : c.dirs) add_move(L, A, c.robot, dir);
    } else {
      int dir = L.reading(c.robot, +1) > L.reading(c.robot, -1) ? +1 : -1;
      add_move(L, A, c.robot, dir);
    }
  }
  return true;
}

bool phase1(const Layout& L, Analysis& A) {
  int d = *std::min_element(L.gap.begin(), L.gap.end());
  auto runs = make_runs(L, d);
  if (runs.empty()) return false;
  return block_distance(L, d, runs, A) || block_mirror(L, runs, A) || big_block(L, d, runs, A);
}

// ------------------------------------------------------------- dispatch

Analysis analyze(const RingConfig& support) {
  Layout L(support);
  Analysis A;
  if (L.m == 0) return A;
  if (L.m == 1) {
    A.tag = Tag::Gathered;
    A.tower_sites = {L.pos[0]};
    return A;
  }
  if (L.n % 2 == 0) return A;
  bool ok = false;
  if (L.m % 2 == 1) {
    ok = phase3_odd(L, A);
  } else if (L.m == 2) {
    if (L.gap[0] == 1 || L.gap[1] == 1) {
      A.tag = Tag::P3Skew;
      A.tower_sites = L.pos;
      A.moves.push_back({L.pos[0], {L.pos[1]}});
      A.moves.push_back({L.pos[1], {L.pos[0]}});
      ok = true;
    }
  } else {
    auto runs = make_runs(L, 1);
    ok = terminal(L, runs, A) || terminal_skew(L, runs, A);
    if (!ok && L.m > 8 && L.sym.cfg_class != SymmetryClass::Periodic) {
      if (!runs.empty()) ok = special(L, runs, A);
      if (!ok) {
        A = Analysis{};
        ok = phase1(L, A);
      }
    }
  }
  if (!ok) return Analysis{};
  // A robot with a symmetric view cannot tell its two sides apart.
  for (auto& mv : A.moves) {
    int i = L.index[mv.robot_node];
    if (mv.targets.size() == 1 && L.symmetric_view(i)) {
      int other = L.node(2 * mv.robot_node - mv.targets[0]);
      if (other != mv.targets[0]) mv.targets.push_back(other);
    }
    std::sort(mv.targets.begin(), mv.targets.end());
  }
  std::sort(A.moves.begin(), A.moves.end(),
            [](const MoveIntent& a, const MoveIntent& b) { return a.robot_node < b.robot_node; });
  return A;
}

std::string support_key(const RingConfig& cfg) {
  std::string key(cfg.occ.size(), '0');
  for (size_t i = 0; i < cfg.occ.size(); ++i)
    if (cfg.occ[i] > 0) key[i] = '1';
  return key;
}

const Analysis& analyze_cached(const RingConfig& cfg) {
  thread_local std::unordered_map<std::string, std::unique_ptr<Analysis>> cache;
  std::string key = support_key(cfg);
  auto it = cache.find(key);
  if (it != cache.end()) return *it->second;
  if (cache.size() > (1u << 20)) cache.clear();
  RingConfig support(cfg.occ);
  for (auto& c : support.occ) c = c > 0 ? 1 : 0;
  auto res = std::make_unique<Analysis>(analyze(support));
  const Analysis& ref = *res;
  cache.emplace(std::move(key), std::move(res));
  return ref;
}

bool is_phase3_tag(Tag t) {
  return t == Tag::TerminalSkew || t == Tag::Target || t == Tag::P3Absorb ||
         t == Tag::P3SingleBlock || t == Tag::P3Skew;
}

}  // namespace

const char* to_string(Tag t) { return kTagNames[static_cast<size_t>(t)]; }

Tag tag_from_string(std::string_view s) {
  for (size_t i = 0; i < kTagNames.size(); ++i)
    if (s == kTagNames[i]) return static_cast<Tag>(i);
  throw ProtocolError("unknown tag '" + std::string(s) + "'");
}

const char* to_string(Phase p) {
  switch (p) {
    case Phase::Phase1: return "Phase1";
    case Phase::Phase2: return "Phase2";
    case Phase::Phase3: return "Phase3";
    case Phase::Done: return "Done";
    case Phase::Unknown: return "Unknown";
  }
  return "?";
}

Phase phase_of(Tag t) {
  switch (t) {
    case Tag::BlockDistance:
    case Tag::BlockMirror1:
    case Tag::BlockMirror2:
    case Tag::BigBlock1_1:
    case Tag::BigBlock1_2:
    case Tag::BigBlock2:
      return Phase::Phase1;
    case Tag::Start:
    case Tag::EvenT:
    case Tag::SplitS:
    case Tag::SplitA:
    case Tag::OddT:
    case Tag::Block:
    case Tag::Biblock:
    case Tag::TriBlockS:
    case Tag::TriBlockA:
      return Phase::Phase2;
    case Tag::Terminal:
    case Tag::TerminalSkew:
    case Tag::Target:
    case Tag::P3Absorb:
    case Tag::P3SingleBlock:
    case Tag::P3Skew:
      return Phase::Phase3;
    case Tag::Gathered:
      return Phase::Done;
    case Tag::Unknown:
      return Phase::Unknown;
  }
  return Phase::Unknown;
}

Phase phase_of(const ProtocolState& state) { return phase_of(state.tag); }

std::string parameter_violation(int n, int k) {
  if (k % 2 != 0) return "k even";
  if (k <= 8) return "k>8";
  if (n % 2 == 0) return "n odd";
  if (n <= k + 3) return "n>k+3";
  return "";
}

ProtocolState classify_protocol_state(const RingConfig& cfg) {
  ProtocolState out;
  if (cfg.size() == 0 || cfg.robots() == 0) return out;
  const Analysis& A = analyze_cached(cfg);
  if (A.tag == Tag::Gathered) {
    out.tag = Tag::Gathered;
    return out;
  }
  if (A.tag == Tag::Unknown) return out;
  const int n = cfg.size();
  const int k = cfg.robots();
  if (n % 2 == 0 || k % 2 != 0) return out;
  auto towers = cfg.tower_nodes();
  if (towers.empty()) {
    bool needs_tower = is_phase3_tag(A.tag) && A.tag != Tag::TerminalSkew;
    if (needs_tower || !parameter_violation(n, k).empty()) return out;
  } else {
    if (towers.size() != 1 || !is_phase3_tag(A.tag)) return out;
    if (std::find(A.tower_sites.begin(), A.tower_sites.end(), towers[0]) == A.tower_sites.end())
      return out;
  }
  out.tag = A.tag;
  out.roles = A.roles;
  if (!towers.empty()) out.roles["tower"] = towers;
  return out;
}

std::vector<MoveIntent> enabled_moves(const RingConfig& cfg) {
  auto st = classify_protocol_state(cfg);
  if (st.tag == Tag::Unknown) throw ProtocolError("no rule");
  if (st.tag == Tag::Gathered) return {};
  std::vector<MoveIntent> out;
  for (const auto& mv : analyze_cached(cfg).moves)
    if (cfg.occ[mv.robot_node] == 1) out.push_back(mv);
  return out;
}

LocalDecision local_decide(const View& view) {
  int n = 0;
  for (int d : view.dists) n += d;
  if (n <= 0) throw ProtocolError("no rule");
  std::vector<int> occ(n, 0);
  int at = 0;
  for (int d : view.dists) {
    occ[at % n] = 1;
    at += d;
  }
  RingConfig support(std::move(occ));
  const Analysis& A = analyze_cached(support);
  if (A.tag == Tag::Unknown) throw ProtocolError("no rule");
  LocalDecision out;
  if (view.tower_here) return out;
  for (const auto& mv : A.moves) {
    if (mv.robot_node != 0) continue;
    if (mv.targets.size() == 2) {
      out.kind = LocalDecision::Kind::MoveEither;
    } else {
      out.kind = LocalDecision::Kind::Move;
      out.direction = mv.targets[0] == 1 % n ? +1 : -1;
    }
  }
  return out;
}

std::vector<int> decision_targets(const LocalDecision& d, int node, int forward, int n) {
  switch (d.kind) {
    case LocalDecision::Kind::Stay: return {};
    case LocalDecision::Kind::Move: return {mod(node + static_cast<long long>(d.direction) * forward, n)};
    case LocalDecision::Kind::MoveEither: {
      std::vector<int> t{mod(node + 1, n), mod(node - 1, n)};
      std::sort(t.begin(), t.end());
      return t;
    }
  }
  return {};
}

}  // namespace ringgather
