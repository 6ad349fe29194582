#include "powercast/json_io.hpp"

#include <fstream>
#include <sstream>

namespace powercast {

Json scalar_json(const Scalar& v, const ScalarFormat& fmt) {
  return fmt.decimal ? format_decimal(v, *fmt.decimal) : format_scalar(v);
}

Json location_json(const Configuration& arena, const Location& loc, const ScalarFormat& fmt) {
  switch (loc.kind) {
    case Location::Kind::Line:
      return Json{{"x", scalar_json(loc.offset, fmt)}};
    case Location::Kind::Node:
      return Json{{"node", std::get<Network>(arena).name(loc.index)}};
    case Location::Kind::Edge: {
      const Network& g = std::get<Network>(arena);
      const Edge& e = g.edge(loc.index);
      return Json{{"edge", {g.name(e.u), g.name(e.v)}}, {"offset", scalar_json(loc.offset, fmt)}};
    }
  }
  return {};
}

namespace {

Scalar scalar_of(const Json& j) {
  if (j.is_string()) return parse_scalar(j.get<std::string>());
  if (j.is_number_integer()) return Scalar(j.get<long>());
  throw ModelError("expected a scalar string or integer");
}

}  // namespace

Location parse_location(const Configuration& arena, const Json& j) {
  if (!j.is_object()) throw ModelError("location must be an object");
  if (j.contains("x")) {
    if (!std::holds_alternative<LineConfig>(arena)) throw ModelError("{\"x\": ...} locations need a line instance");
    return Location::line(scalar_of(j["x"]));
  }
  if (!std::holds_alternative<Network>(arena)) throw ModelError("line instances take {\"x\": ...} locations");
  const Network& g = std::get<Network>(arena);
  if (j.contains("node")) return Location::node(g.node_index(j["node"].get<std::string>()));
  if (j.contains("edge")) {
    const Json& ends = j["edge"];
    if (!ends.is_array() || ends.size() != 2) throw ModelError("edge must list two nodes");
    std::size_t a = g.node_index(ends[0].get<std::string>());
    std::size_t b = g.node_index(ends[1].get<std::string>());
    auto e = g.edge_between(a, b);
    if (!e) throw ModelError("no edge between '" + g.name(a) + "' and '" + g.name(b) + "'");
    if (!j.contains("offset")) throw ModelError("edge location needs an offset");
    Scalar off = scalar_of(j["offset"]);
    const Edge& ed = g.edge(*e);
    return edge_point(g, *e, a == ed.u ? off : Scalar(ed.w - off));
  }
  throw ModelError("location needs one of node, edge, x");
}

Json strategy_json(const Configuration& arena, const Strategy& s, const ScalarFormat& fmt) {
  Json moves = Json::array();
  for (const TimedMove& m : s.moves) {
    moves.push_back({{"agent", m.agent},
                     {"depart", scalar_json(m.depart, fmt)},
                     {"from", location_json(arena, m.from, fmt)},
                     {"to", location_json(arena, m.to, fmt)}});
  }
  return Json{{"moves", moves}};
}

Strategy parse_strategy(const Configuration& arena, const Json& doc) {
  if (!doc.is_object() || !doc.contains("moves") || !doc["moves"].is_array()) {
    throw ModelError("strategy needs a 'moves' array");
  }
  Strategy s;
  for (const Json& m : doc["moves"]) {
    for (const char* key : {"agent", "depart", "from", "to"}) {
      if (!m.contains(key)) throw ModelError(std::string("move lacks '") + key + "'");
    }
    s.moves.push_back({m["agent"].get<int>(), scalar_of(m["depart"]), parse_location(arena, m["from"]),
                       parse_location(arena, m["to"])});
  }
  return s;
}

Strategy load_strategy_file(const Configuration& arena, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ModelError("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  Json doc;
  try {
    doc = Json::parse(buf.str());
  } catch (const nlohmann::json::exception& e) {
    throw ModelError(std::string("strategy parse error: ") + e.what());
  }
  return parse_strategy(arena, doc);
}

Json trace_json(const Configuration& arena, const Trace& tr, const ScalarFormat& fmt) {
  Json meetings = Json::array();
  for (const Meeting& m : tr.meetings) {
    meetings.push_back({{"time", scalar_json(m.time, fmt)}, {"where", location_json(arena, m.where, fmt)}, {"agents", m.agents}});
  }
  Json power = Json::array();
  for (const Scalar& p : tr.power) power.push_back(scalar_json(p, fmt));
  Json info = Json::array();
  for (const AgentSet& a : tr.final_info) info.push_back(a.ids());
  Json finals = Json::array();
  for (const Location& l : tr.final_location) finals.push_back(location_json(arena, l, fmt));
  Json timeline = Json::array();
  for (const InfoEvent& e : tr.timeline) {
    timeline.push_back({{"time", scalar_json(e.time, fmt)},
                        {"agent", e.agent},
                        {"where", location_json(arena, e.where, fmt)},
                        {"info", e.info}});
  }
  return Json{{"meetings", meetings}, {"power", power}, {"final_info", info}, {"final_location", finals}, {"timeline", timeline}};
}

Json outcome_json(const Configuration& arena, const DistOutcome& o, bool with_log, const ScalarFormat& fmt) {
  Json out;
  out["achieved"] = o.achieved;
  Json power = Json::array();
  Scalar top(0);
  for (const Scalar& p : o.power) {
    power.push_back(scalar_json(p, fmt));
    top = max(top, p);
  }
  out["power"] = power;
  out["max_power"] = scalar_json(top, fmt);
  out["completion_time"] = scalar_json(o.completion_time, fmt);
  out["end_time"] = scalar_json(o.end_time, fmt);
  if (!o.failure.empty()) out["failure"] = o.failure;
  if (with_log) {
    Json log = Json::array();
    for (const DistEvent& e : o.log) {
      log.push_back({{"time", scalar_json(e.time, fmt)}, {"kind", e.kind}, {"agents", e.agents}, {"where", location_json(arena, e.where, fmt)}});
    }
    out["log"] = log;
    out["moves"] = strategy_json(arena, o.moves, fmt)["moves"];
  }
  return out;
}

}  // namespace powercast
