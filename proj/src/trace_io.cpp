#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "ringgather/simulator.hpp"

namespace ringgather {

namespace {

using ojson = nlohmann::ordered_json;

ojson event_json(const Event& e) {
  ojson j;
  j["step"] = e.step;
  j["kind"] = e.kind == SchedulerAction::Kind::Activate ? "activate" : "fire";
  j["robot"] = e.robot;
  j["from"] = e.from;
  if (e.to)
    j["to"] = *e.to;
  else
    j["to"] = nullptr;
  j["occ"] = e.occ;
  j["tag"] = to_string(e.tag);
  j["round"] = e.round;
  return j;
}

}  // namespace

void write_trace(std::ostream& out, const Trace& t) {
  ojson header;
  header["n"] = t.initial.size();
  header["k"] = t.initial.robots();
  header["scheduler"] = t.scheduler;
  if (t.seed)
    header["seed"] = *t.seed;
  else
    header["seed"] = nullptr;
  header["fairness_bound"] = t.fairness_bound;
  header["initial"] = to_occupancy_string(t.initial);
  out << header.dump() << '\n';
  for (const auto& e : t.events) out << event_json(e).dump() << '\n';
  ojson footer;
  footer["outcome"] = to_string(t.outcome);
  footer["rounds"] = t.rounds;
  footer["steps"] = t.steps;
  out << footer.dump() << '\n';
}

std::string trace_to_jsonl(const Trace& t) {
  std::ostringstream os;
  write_trace(os, t);
  return os.str();
}

Trace read_trace(std::istream& in) {
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) lines.push_back(line);
  if (lines.size() < 2) throw SimulationError("trace needs a header and a footer line");
  Trace t;
  try {
    auto header = ojson::parse(lines.front());
    t.initial = parse_occupancy(header.at("initial").get<std::string>());
    if (header.at("n").get<int>() != t.initial.size() || header.at("k").get<int>() != t.initial.robots())
      throw SimulationError("trace header disagrees with its initial configuration");
    t.scheduler = header.at("scheduler").get<std::string>();
    if (!header.at("seed").is_null()) t.seed = header.at("seed").get<std::uint64_t>();
    t.fairness_bound = header.at("fairness_bound").get<int>();
    for (size_t i = 1; i + 1 < lines.size(); ++i) {
      auto j = ojson::parse(lines[i]);
      Event e;
      e.step = j.at("step").get<long long>();
      auto kind = j.at("kind").get<std::string>();
      if (kind == "activate")
        e.kind = SchedulerAction::Kind::Activate;
      else if (kind == "fire")
        e.kind = SchedulerAction::Kind::Fire;
      else
        throw SimulationError("unknown event kind '" + kind + "'");
      e.robot = j.at("robot").get<int>();
      e.from = j.at("from").get<int>();
      if (!j.at("to").is_null()) e.to = j.at("to").get<int>();
      e.occ = j.at("occ").get<std::string>();
      e.tag = tag_from_string(j.at("tag").get<std::string>());
      e.round = j.at("round").get<long long>();
      t.events.push_back(std::move(e));
    }
    auto footer = ojson::parse(lines.back());
    t.outcome = outcome_from_string(footer.at("outcome").get<std::string>());
    t.rounds = footer.at("rounds").get<long long>();
    t.steps = footer.value("steps", 0LL);
  } catch (const nlohmann::json::exception& e) {
    throw SimulationError(std::string("malformed trace: ") + e.what());
  }
  return t;
}

}  // namespace ringgather
