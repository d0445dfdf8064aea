#include "ringgather/ring.hpp"

#include <algorithm>
#include <numeric>

namespace ringgather {

namespace {

int mod(long long a, int n) {
  long long r = a % n;
  return static_cast<int>(r < 0 ? r + n : r);
}

void require_nonempty(const RingConfig& cfg) {
  if (cfg.size() == 0) throw RingError("empty ring");
  if (cfg.occupied_count() == 0) throw RingError("configuration has no robots");
}

// Gaps between consecutive occupied nodes, gaps[i] from nodes[i] to nodes[i+1].
std::vector<int> gaps_of(const std::vector<int>& nodes, int n) {
  const int m = static_cast<int>(nodes.size());
  std::vector<int> g(m);
  for (int i = 0; i < m; ++i) {
    int next = nodes[(i + 1) % m];
    g[i] = m == 1 ? n : mod(next - nodes[i], n);
  }
  return g;
}

std::vector<int> prefix_function(const std::vector<int>& s) {
  std::vector<int> pi(s.size(), 0);
  for (size_t i = 1; i < s.size(); ++i) {
    int j = pi[i - 1];
    while (j > 0 && s[i] != s[j]) j = pi[j - 1];
    if (s[i] == s[j]) ++j;
    pi[i] = j;
  }
  return pi;
}

// First offset in [0, limit) where pattern occurs in text, or -1.
int kmp_find(const std::vector<int>& text, const std::vector<int>& pattern, int limit) {
  auto pi = prefix_function(pattern);
  const int m = static_cast<int>(pattern.size());
  int j = 0;
  for (int i = 0; i < static_cast<int>(text.size()); ++i) {
    while (j > 0 && text[i] != pattern[j]) j = pi[j - 1];
    if (text[i] == pattern[j]) ++j;
    if (j == m) {
      int start = i - m + 1;
      if (start < limit) return start;
      return -1;
    }
  }
  return -1;
}

Hole hole_around(const RingConfig& cfg, int node) {
  const int n = cfg.size();
  int lo = node;
  int size = 1;
  while (size < n && cfg.occ[mod(lo - 1, n)] == 0) {
    lo = mod(lo - 1, n);
    ++size;
  }
  int hi = node;
  while (size < n && cfg.occ[mod(hi + 1, n)] == 0) {
    hi = mod(hi + 1, n);
    ++size;
  }
  return Hole{lo, size};
}

int least_rotation(const std::string& s) {
  const int n = static_cast<int>(s.size());
  int i = 0, j = 1, k = 0;
  while (i < n && j < n && k < n) {
    char a = s[(i + k) % n];
    char b = s[(j + k) % n];
    if (a == b) {
      ++k;
      continue;
    }
    if (a > b)
      i += k + 1;
    else
      j += k + 1;
    if (i == j) ++j;
    k = 0;
  }
  return std::min(i, j);
}

}  // namespace

RingConfig::RingConfig(std::vector<int> counts) : occ(std::move(counts)) {
  for (int c : occ)
    if (c < 0) throw RingError("negative robot count");
}

RingConfig RingConfig::from_nodes(int n, const std::vector<int>& nodes) {
  if (n <= 0) throw RingError("ring size must be positive");
  std::vector<int> occ(n, 0);
  for (int v : nodes) occ[mod(v, n)] += 1;
  return RingConfig(std::move(occ));
}

int RingConfig::robots() const { return std::accumulate(occ.begin(), occ.end(), 0); }

int RingConfig::occupied_count() const {
  return static_cast<int>(std::count_if(occ.begin(), occ.end(), [](int c) { return c > 0; }));
}

bool RingConfig::towerless() const {
  return std::all_of(occ.begin(), occ.end(), [](int c) { return c <= 1; });
}

std::vector<int> RingConfig::occupied_nodes() const {
  std::vector<int> out;
  for (int i = 0; i < size(); ++i)
    if (occ[i] > 0) out.push_back(i);
  return out;
}

std::vector<int> RingConfig::tower_nodes() const {
  std::vector<int> out;
  for (int i = 0; i < size(); ++i)
    if (occ[i] > 1) out.push_back(i);
  return out;
}

int RingConfig::wrap(long long i) const { return mod(i, size()); }

std::string to_occupancy_string(const RingConfig& cfg) {
  std::string s(cfg.occ.size(), '.');
  for (size_t i = 0; i < cfg.occ.size(); ++i) {
    int c = cfg.occ[i];
    if (c > 35) throw RingError("node count above 35 is not supported by the occupancy encoding");
    if (c > 9)
      s[i] = static_cast<char>('a' + c - 10);
    else if (c > 0)
      s[i] = static_cast<char>('0' + c);
  }
  return s;
}

RingConfig parse_occupancy(std::string_view s) {
  if (s.empty()) throw RingError("empty occupancy string");
  std::vector<int> occ;
  occ.reserve(s.size());
  for (char ch : s) {
    if (ch == '.')
      occ.push_back(0);
    else if (ch >= '1' && ch <= '9')
      occ.push_back(ch - '0');
    else if (ch >= 'a' && ch <= 'z')
      occ.push_back(ch - 'a' + 10);
    else
      throw RingError(std::string("invalid occupancy character '") + ch + "'");
  }
  return RingConfig(std::move(occ));
}

bool Hole::contains(int node, int n) const { return mod(node - start, n) < size; }

std::vector<Segment> segments(const RingConfig& cfg) {
  auto nodes = cfg.occupied_nodes();
  auto g = gaps_of(nodes, cfg.size());
  std::vector<Segment> out;
  for (size_t i = 0; i < nodes.size(); ++i)
    out.push_back({nodes[i], nodes[(i + 1) % nodes.size()], g[i]});
  return out;
}

std::vector<Hole> holes(const RingConfig& cfg) {
  std::vector<Hole> out;
  for (const auto& seg : segments(cfg))
    if (seg.distance > 1) out.push_back({cfg.wrap(seg.from + 1), seg.distance - 1});
  std::sort(out.begin(), out.end(), [](const Hole& a, const Hole& b) { return a.start < b.start; });
  return out;
}

bool View::symmetric() const {
  return std::equal(dists.begin(), dists.end(), dists.rbegin());
}

std::vector<int> directional_reading(const RingConfig& cfg, int node, int dir) {
  const int n = cfg.size();
  if (node < 0 || node >= n || cfg.occ[node] == 0) throw RingError("no robot at node");
  std::vector<int> out;
  int last = 0;
  for (int step = 1; step <= n; ++step) {
    if (cfg.occ[mod(node + static_cast<long long>(dir) * step, n)] > 0) {
      out.push_back(step - last);
      last = step;
    }
  }
  return out;
}

OrientedView observe(const RingConfig& cfg, int node) {
  auto fwd = directional_reading(cfg, node, +1);
  auto bwd = directional_reading(cfg, node, -1);
  OrientedView o;
  o.view.tower_here = cfg.occ[node] >= 2;
  if (bwd > fwd) {
    o.view.dists = std::move(bwd);
    o.forward = -1;
  } else {
    o.view.dists = std::move(fwd);
    o.forward = +1;
  }
  return o;
}

View compute_view(const RingConfig& cfg, int node) { return observe(cfg, node).view; }

const char* to_string(SymmetryClass c) {
  switch (c) {
    case SymmetryClass::Rigid: return "Rigid";
    case SymmetryClass::Symmetric: return "Symmetric";
    case SymmetryClass::Periodic: return "Periodic";
  }
  return "?";
}

SymmetryInfo classify_symmetry(const RingConfig& cfg) {
  require_nonempty(cfg);
  const int n = cfg.size();
  SymmetryInfo info;
  auto pi = prefix_function(cfg.occ);
  int period = n - pi[n - 1];
  if (period < n && n % period == 0) {
    info.cfg_class = SymmetryClass::Periodic;
    return info;
  }
  std::vector<int> text(cfg.occ);
  text.insert(text.end(), cfg.occ.begin(), cfg.occ.end() - 1);
  std::vector<int> rev(cfg.occ.rbegin(), cfg.occ.rend());
  int s = kmp_find(text, rev, n);
  if (s < 0) {
    info.cfg_class = SymmetryClass::Rigid;
    return info;
  }
  info.cfg_class = SymmetryClass::Symmetric;
  int c = mod(n - 1 + s, n);
  info.reflection_sum = c;
  if (n % 2 == 1) {
    int x = mod(static_cast<long long>(c) * ((n + 1) / 2), n);
    int e1 = mod(x + (n - 1) / 2, n);
    int e2 = mod(x + (n + 1) / 2, n);
    info.axis_node = x;
    info.axis_edge = std::make_pair(e1, e2);
    if (cfg.occ[x] == 0) info.leader_hole = hole_around(cfg, x);
    if (cfg.occ[e1] == 0) info.slave_hole = hole_around(cfg, e1);
  }
  return info;
}

int inter_distance(const RingConfig& cfg) {
  auto nodes = cfg.occupied_nodes();
  if (nodes.size() < 2) throw RingError("inter-distance undefined");
  auto g = gaps_of(nodes, cfg.size());
  return *std::min_element(g.begin(), g.end());
}

BlockDecomposition decompose_blocks(const RingConfig& cfg) {
  if (!cfg.towerless()) throw RingError("decomposition on tower configuration");
  BlockDecomposition out;
  out.d = inter_distance(cfg);
  out.holes = holes(cfg);
  auto nodes = cfg.occupied_nodes();
  auto g = gaps_of(nodes, cfg.size());
  const int m = static_cast<int>(nodes.size());
  int first = -1;
  for (int i = 0; i < m; ++i)
    if (g[mod(i - 1, m)] != out.d) {
      first = i;
      break;
    }
  if (first < 0) {
    out.blocks.push_back({nodes[0], m, nodes});
    return out;
  }
  std::vector<int> run;
  auto flush = [&] {
    if (run.size() >= 2)
      out.blocks.push_back({run.front(), static_cast<int>(run.size()), run});
    else
      out.isolated.push_back(run.front());
    run.clear();
  };
  for (int t = 0; t < m; ++t) {
    int i = (first + t) % m;
    run.push_back(nodes[i]);
    if (g[i] != out.d) flush();
  }
  std::sort(out.isolated.begin(), out.isolated.end());
  return out;
}

std::string canonical_form(const RingConfig& cfg) {
  std::string s = to_occupancy_string(cfg);
  std::string r(s.rbegin(), s.rend());
  int a = least_rotation(s);
  int b = least_rotation(r);
  std::string ra = s.substr(a) + s.substr(0, a);
  std::string rb = r.substr(b) + r.substr(0, b);
  return std::min(ra, rb);
}

}  // namespace ringgather
