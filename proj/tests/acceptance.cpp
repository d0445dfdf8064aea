// Acceptance harness: one PASS/FAIL line per criterion, details after.
// Exit status is 0 only when every criterion passes.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "oracles.hpp"
#include "ringgather/checker.hpp"
#include "ringgather/verify.hpp"

using namespace ringgather;

namespace {

struct Line {
  int id;
  bool pass;
  std::string summary;
  std::vector<std::string> details;
};

std::string cx_text(const Counterexample& c) {
  std::ostringstream os;
  os << "initial=" << c.initial << " scheduler=" << c.scheduler;
  if (c.seed) os << " seed=" << *c.seed;
  os << " step=" << c.step << " occ=" << c.occ << " : " << c.description;
  return os.str();
}

bool tally_ok(const VerifyReport& r, const std::string& name, std::ostringstream& sum, std::vector<std::string>& det) {
  auto it = r.checks.find(name);
  if (it == r.checks.end()) {
    sum << " " << name << "=missing";
    return false;
  }
  const auto& t = it->second;
  sum << " " << name << "=" << t.passed << "/" << t.checked;
  for (const auto& f : t.failures) det.push_back(name + ": " + cx_text(f));
  return t.passed == t.checked && t.checked > 0;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main() {
  std::vector<Line> lines;
  auto t_all = std::chrono::steady_clock::now();

  // ---- criteria 1, 2, 5, 6 share the run grid
  VerifyOptions opt;
  opt.grid = {{15, 10}, {17, 10}};
  opt.random_runs = 50;
  opt.lazy_runs = 10;
  opt.c = 20;
  opt.phase2 = false;
  auto t0 = std::chrono::steady_clock::now();
  auto report = verify_grid(opt);
  const double grid_secs = seconds_since(t0);

  {
    std::ostringstream sum;
    std::vector<std::string> det;
    bool ok = true;
    for (auto [nk, count] : report.configs_per_grid) {
      auto o = oracle::orbits(nk.first, nk.second);
      sum << " configs(n=" << nk.first << ")=" << count << " oracle=" << o.non_periodic;
      ok = ok && count == o.non_periodic;
    }
    ok = tally_ok(report, "round_bound", sum, det) && ok;
    sum << " max_rounds=" << report.max_rounds << " runs=" << report.runs;
    char buf[64];
    std::snprintf(buf, sizeof buf, " %.1fs", grid_secs);
    sum << buf;
    lines.push_back({1, ok, sum.str(), det});
  }
  {
    std::ostringstream sum;
    std::vector<std::string> det;
    bool ok = tally_ok(report, "no_tower_before_target", sum, det);
    ok = tally_ok(report, "never_periodic", sum, det) && ok;
    ok = tally_ok(report, "outdated_bound", sum, det) && ok;
    lines.push_back({2, ok, sum.str(), det});
  }

  // ---- criterion 3
  {
    t0 = std::chrono::steady_clock::now();
    std::ostringstream sum;
    std::vector<std::string> det;
    const std::set<Tag> phase2_tags = {Tag::Start,   Tag::EvenT,   Tag::SplitS,    Tag::SplitA,    Tag::OddT,
                                      Tag::Block,   Tag::Biblock, Tag::TriBlockS, Tag::TriBlockA, Tag::Terminal};
    bool ok = true;
    std::set<Tag> covered;
    long long constructed = 0, enumerated = 0, failed = 0;
    long long terminal_rounds = 0;
    auto explore = [&](const RingConfig& c) {
      ExploreStats st;
      auto v = check_phase2_transition(c, {}, &st);
      Tag t = classify_protocol_state(c).tag;
      if (t == Tag::Terminal) terminal_rounds = std::max(terminal_rounds, st.max_rounds_seen);
      if (!v.passed) {
        ++failed;
        det.push_back("phase2: " + to_occupancy_string(c) + " (" + to_string(t) + ") step=" +
                      std::to_string(v.violation->step) + " occ=" + v.violation->occ + " : " + v.violation->description);
      }
    };
    for (int n : {15, 17, 21}) {
      for (const auto& c : constructed_instances(n, 10)) {
        covered.insert(classify_protocol_state(c).tag);
        ++constructed;
        explore(c);
      }
      // every enumerated configuration carrying one of the tags as well
      for_each_initial_config(n, 10, false, [&](const RingConfig& c) {
        if (!phase2_tags.count(classify_protocol_state(c).tag)) return;
        ++enumerated;
        explore(c);
      });
    }
    ok = failed == 0 && covered == phase2_tags;
    sum << " constructed=" << constructed << " enumerated=" << enumerated << " failed=" << failed
        << " tags_covered=" << covered.size() << "/10 terminal_max_rounds=" << terminal_rounds;
    char buf[64];
    std::snprintf(buf, sizeof buf, " %.1fs", seconds_since(t0));
    sum << buf;
    lines.push_back({3, ok, sum.str(), det});
  }

  // ---- criterion 4
  {
    t0 = std::chrono::steady_clock::now();
    std::ostringstream sum;
    std::vector<std::string> det;
    long long exhaustive = 0, random = 0, bad = 0;
    auto compare = [&](const std::vector<int>& occ) {
      auto got = classify_symmetry(RingConfig(occ));
      auto want = oracle::cls(occ);
      bool same = to_string(got.cfg_class) == want;
      if (same && got.cfg_class == SymmetryClass::Symmetric) {
        auto st = oracle::stabilizer(occ);
        const int n = static_cast<int>(occ.size());
        same = st.reflections == 1 && got.reflection_sum && oracle::md(*got.reflection_sum, n) == st.reflection_sums[0];
      }
      if (!same) {
        ++bad;
        if (det.size() < 20) det.push_back("symmetry: " + oracle::encode(occ) + " oracle=" + want);
      }
    };
    for (int n = 1; n <= 13; ++n)
      for (unsigned mask = 1; mask < (1u << n); ++mask) {
        std::vector<int> occ(n);
        for (int i = 0; i < n; ++i) occ[i] = (mask >> i) & 1;
        compare(occ);
        ++exhaustive;
      }
    std::mt19937_64 rng(2024);
    while (random < 100000) {
      int n = 1 + static_cast<int>(rng() % 21);
      std::vector<int> occ(n);
      // mix sparse, dense and structured patterns
      int density = 1 + static_cast<int>(rng() % 4);
      for (auto& x : occ) x = static_cast<int>(rng() % 4) < density ? 1 : 0;
      if (rng() % 4 == 0) {
        int p = 1 + static_cast<int>(rng() % n);
        if (n % p == 0)
          for (int i = p; i < n; ++i) occ[i] = occ[i % p];
      } else if (rng() % 3 == 0) {
        for (int i = 0; i < n; ++i) occ[oracle::md(-i, n)] = occ[i];
      }
      if (std::count(occ.begin(), occ.end(), 1) == 0) continue;
      compare(occ);
      ++random;
    }
    auto views_ok = check_distinct_views(11);
    if (!views_ok.passed) det.push_back("views: " + views_ok.violation->occ + " : " + views_ok.violation->description);
    sum << " exhaustive(n<=13)=" << exhaustive << " random(n<=21)=" << random << " mismatches=" << bad
        << " distinct_views(n<=11)=" << (views_ok.passed ? "pass" : "fail");
    char buf[64];
    std::snprintf(buf, sizeof buf, " %.1fs", seconds_since(t0));
    sum << buf;
    lines.push_back({4, bad == 0 && views_ok.passed, sum.str(), det});
  }

  // ---- criterion 5
  {
    std::ostringstream sum;
    std::vector<std::string> det;
    bool ok = tally_ok(report, "local_global", sum, det);
    lines.push_back({5, ok, sum.str(), det});
  }

  // ---- criterion 6
  {
    std::ostringstream sum;
    std::vector<std::string> det;
    bool ok = tally_ok(report, "determinism", sum, det);
    ok = tally_ok(report, "replay", sum, det) && ok;
    // a second pass over a slice of the grid must reproduce the report
    VerifyOptions small = opt;
    small.grid = {{15, 10}};
    small.random_runs = 3;
    small.lazy_runs = 2;
    auto a = report_to_json(verify_grid(small));
    auto b = report_to_json(verify_grid(small));
    auto strip = [](std::string s) {
      auto p = s.find("\"wall_seconds\"");
      auto e = s.find('\n', p);
      return s.erase(p, e - p);
    };
    bool same = strip(a) == strip(b);
    sum << " rerun_report=" << (same ? "identical" : "different");
    lines.push_back({6, ok && same, sum.str(), det});
  }

  bool all = true;
  for (const auto& l : lines) {
    std::cout << (l.pass ? "PASS" : "FAIL") << " criterion " << l.id << ":" << l.summary << "\n";
    all = all && l.pass;
  }
  for (const auto& l : lines)
    for (const auto& d : l.details) std::cout << "  [" << l.id << "] " << d << "\n";
  std::printf("total %.1fs\n", seconds_since(t_all));
  return all ? 0 : 1;
}
