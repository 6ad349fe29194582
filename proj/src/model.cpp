#include "powercast/model.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

namespace powercast {

using nlohmann::ordered_json;

LineConfig make_line(std::vector<Scalar> positions, std::optional<int> source) {
  if (positions.empty()) throw ModelError("line needs at least one agent");
  for (std::size_t i = 1; i < positions.size(); ++i) {
    if (!(positions[i - 1] < positions[i])) {
      throw ModelError("positions not strictly increasing at index " + std::to_string(i + 1));
    }
  }
  if (source && (*source < 1 || static_cast<std::size_t>(*source) > positions.size())) {
    throw ModelError("source agent out of range");
  }
  return LineConfig{std::move(positions), source};
}

LineConfig reflect(const LineConfig& c) {
  LineConfig out;
  out.positions.reserve(c.size());
  for (auto it = c.positions.rbegin(); it != c.positions.rend(); ++it) out.positions.push_back(-*it);
  if (c.source) out.source = static_cast<int>(c.size()) + 1 - *c.source;
  return out;
}

Network::Network(Kind kind, std::vector<std::string> node_names, std::vector<Edge> edges,
                 std::vector<std::size_t> agent_nodes, std::optional<int> source)
    : kind_(kind),
      names_(std::move(node_names)),
      edges_(std::move(edges)),
      agent_nodes_(std::move(agent_nodes)),
      source_(source) {
  const std::size_t n = names_.size();
  if (n == 0) throw ModelError("network has no nodes");
  for (std::size_t i = 0; i < n; ++i) {
    if (!index_.emplace(names_[i], i).second) throw ModelError("duplicate node '" + names_[i] + "'");
  }
  adj_.assign(n, {});
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    const Edge& ed = edges_[e];
    if (ed.u >= n || ed.v >= n) throw ModelError("edge references unknown node");
    if (ed.u == ed.v) throw ModelError("self-loop at '" + names_[ed.u] + "'");
    if (ed.w <= 0) throw ModelError("edge weight must be positive");
    if (!seen.emplace(std::min(ed.u, ed.v), std::max(ed.u, ed.v)).second) {
      throw ModelError("parallel edge between '" + names_[ed.u] + "' and '" + names_[ed.v] + "'");
    }
    adj_[ed.u].push_back({e, ed.v});
    adj_[ed.v].push_back({e, ed.u});
  }

  // connectivity
  std::vector<bool> seen_node(n, false);
  std::vector<std::size_t> todo{0};
  seen_node[0] = true;
  std::size_t reached = 1;
  while (!todo.empty()) {
    std::size_t x = todo.back();
    todo.pop_back();
    for (const Port& p : adj_[x]) {
      if (!seen_node[p.neighbor]) {
        seen_node[p.neighbor] = true;
        ++reached;
        todo.push_back(p.neighbor);
      }
    }
  }
  if (reached != n) throw ModelError("network is disconnected");
  if (kind_ == Kind::Tree && edges_.size() != n - 1) throw ModelError("tree must have n-1 edges");

  agent_at_.assign(n, 0);
  for (std::size_t a = 0; a < agent_nodes_.size(); ++a) {
    std::size_t node = agent_nodes_[a];
    if (node >= n) throw ModelError("agent placed on unknown node");
    if (agent_at_[node] != 0) throw ModelError("two agents start at node '" + names_[node] + "'");
    agent_at_[node] = static_cast<int>(a + 1);
  }
  if (source_ && (*source_ < 1 || static_cast<std::size_t>(*source_) > agent_nodes_.size())) {
    throw ModelError("source agent out of range");
  }
}

std::size_t Network::node_index(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) throw ModelError("unknown node '" + name + "'");
  return it->second;
}

std::optional<std::size_t> Network::edge_between(std::size_t a, std::size_t b) const {
  for (const Port& p : adj_[a]) {
    if (p.neighbor == b) return p.edge;
  }
  return std::nullopt;
}

Network Network::with_port_orders(const std::vector<std::vector<std::size_t>>& permutations) const {
  Network out = *this;
  for (std::size_t v = 0; v < adj_.size(); ++v) {
    const auto& perm = permutations.at(v);
    if (perm.size() != adj_[v].size()) throw ModelError("port permutation size mismatch");
    for (std::size_t i = 0; i < perm.size(); ++i) out.adj_[v][i] = adj_[v][perm[i]];
  }
  return out;
}

Network line_to_path(const LineConfig& c) {
  std::vector<std::string> names;
  std::vector<Edge> edges;
  std::vector<std::size_t> agents;
  for (std::size_t i = 0; i < c.size(); ++i) {
    names.push_back("p" + std::to_string(i + 1));
    agents.push_back(i);
    if (i > 0) edges.push_back({i - 1, i, c.positions[i] - c.positions[i - 1]});
  }
  return Network(Network::Kind::Tree, std::move(names), std::move(edges), std::move(agents), c.source);
}

Location edge_point(const Network& net, std::size_t e, const Scalar& offset) {
  const Edge& ed = net.edge(e);
  if (offset < 0 || offset > ed.w) throw ModelError("offset outside edge");
  if (offset == 0) return Location::node(ed.u);
  if (offset == ed.w) return Location::node(ed.v);
  return Location::on_edge(e, offset);
}

TreeCheck validate_tree_for_distributed(const Network& tree) {
  TreeCheck out;
  if (tree.kind() != Network::Kind::Tree) throw ModelError("distributed algorithms need a tree");
  for (std::size_t v = 0; v < tree.node_count(); ++v) {
    if (tree.degree(v) == 1 && tree.agent_at(v) == 0) {
      out.ok = false;
      out.leaves_without_agent.push_back(tree.name(v));
    }
  }
  return out;
}

namespace {

Scalar scalar_field(const ordered_json& j, const char* what) {
  if (j.is_string()) return parse_scalar(j.get<std::string>());
  if (j.is_number_integer()) return Scalar(mpz_class(std::to_string(j.get<long long>())));
  throw ModelError(std::string(what) + " must be a string rational");
}

std::optional<int> source_field(const ordered_json& doc) {
  if (!doc.contains("source") || doc["source"].is_null()) return std::nullopt;
  if (!doc["source"].is_number_integer()) throw ModelError("source must be an integer");
  return doc["source"].get<int>();
}

}  // namespace

Configuration load_configuration(const std::string& text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ModelError(std::string("JSON parse error: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("kind") || !doc["kind"].is_string()) {
    throw ModelError("document needs a string 'kind'");
  }
  const std::string kind = doc["kind"];
  try {
    if (kind == "line") {
      if (!doc.contains("positions") || !doc["positions"].is_array()) {
        throw ModelError("line needs 'positions'");
      }
      std::vector<Scalar> pos;
      for (const auto& p : doc["positions"]) pos.push_back(scalar_field(p, "position"));
      return make_line(std::move(pos), source_field(doc));
    }
    if (kind == "graph" || kind == "tree") {
      for (const char* key : {"nodes", "edges", "agents"}) {
        if (!doc.contains(key) || !doc[key].is_array()) throw ModelError(std::string("missing '") + key + "'");
      }
      std::vector<std::string> names;
      std::unordered_map<std::string, std::size_t> idx;
      for (const auto& n : doc["nodes"]) {
        if (!n.is_string()) throw ModelError("node ids must be strings");
        idx.emplace(n.get<std::string>(), names.size());
        names.push_back(n.get<std::string>());
      }
      auto lookup = [&](const ordered_json& j) {
        if (!j.is_string()) throw ModelError("node reference must be a string");
        auto it = idx.find(j.get<std::string>());
        if (it == idx.end()) throw ModelError("unknown node '" + j.get<std::string>() + "'");
        return it->second;
      };
      std::vector<Edge> edges;
      for (const auto& e : doc["edges"]) {
        if (!e.is_object() || !e.contains("u") || !e.contains("v") || !e.contains("w")) {
          throw ModelError("edge needs u, v, w");
        }
        edges.push_back({lookup(e["u"]), lookup(e["v"]), scalar_field(e["w"], "weight")});
      }
      std::vector<std::pair<int, std::size_t>> placed;
      for (const auto& a : doc["agents"]) {
        if (!a.is_object() || !a.contains("id") || !a["id"].is_number_integer() || !a.contains("node")) {
          throw ModelError("agent needs integer id and node");
        }
        placed.emplace_back(a["id"].get<int>(), lookup(a["node"]));
      }
      std::sort(placed.begin(), placed.end());
      std::vector<std::size_t> agent_nodes;
      for (std::size_t i = 0; i < placed.size(); ++i) {
        if (placed[i].first != static_cast<int>(i + 1)) throw ModelError("agent ids must be 1..k without gaps");
        agent_nodes.push_back(placed[i].second);
      }
      return Network(kind == "tree" ? Network::Kind::Tree : Network::Kind::Graph, std::move(names),
                     std::move(edges), std::move(agent_nodes), source_field(doc));
    }
  } catch (const std::invalid_argument& e) {
    throw ModelError(e.what());
  }
  throw ModelError("unknown kind '" + kind + "'");
}

Configuration load_configuration_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ModelError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return load_configuration(ss.str());
}

std::string serialize_configuration(const Configuration& config) {
  ordered_json doc;
  if (const auto* line = std::get_if<LineConfig>(&config)) {
    doc["kind"] = "line";
    doc["positions"] = ordered_json::array();
    for (const auto& p : line->positions) doc["positions"].push_back(format_scalar(p));
    if (line->source) doc["source"] = *line->source;
  } else {
    const auto& net = std::get<Network>(config);
    doc["kind"] = net.kind() == Network::Kind::Tree ? "tree" : "graph";
    doc["nodes"] = net.names();
    doc["edges"] = ordered_json::array();
    for (const auto& e : net.edges()) {
      doc["edges"].push_back({{"u", net.name(e.u)}, {"v", net.name(e.v)}, {"w", format_scalar(e.w)}});
    }
    doc["agents"] = ordered_json::array();
    for (std::size_t a = 0; a < net.agent_count(); ++a) {
      doc["agents"].push_back({{"id", static_cast<int>(a + 1)}, {"node", net.name(net.agent_nodes()[a])}});
    }
    if (net.source()) doc["source"] = *net.source();
  }
  return doc.dump();
}

}  // namespace powercast
