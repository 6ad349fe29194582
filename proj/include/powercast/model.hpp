#pragma once

#include "powercast/scalar.hpp"

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

namespace powercast {

/// Raised for malformed documents and violated instance invariants.
class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Agents on a line, sorted by position. Agent i (1-based) sits at pos(i).
struct LineConfig {
  std::vector<Scalar> positions;
  std::optional<int> source;

  std::size_t size() const { return positions.size(); }
  const Scalar& pos(std::size_t i) const { return positions[i - 1]; }
};

/// Validates strict ordering and returns the configuration.
LineConfig make_line(std::vector<Scalar> positions, std::optional<int> source = std::nullopt);

/// Mirror image x -> -x. Agent i becomes agent n+1-i.
LineConfig reflect(const LineConfig& c);

struct Edge {
  std::size_t u = 0;
  std::size_t v = 0;
  Scalar w;
};

/// One incident edge of a node, in port order.
struct Port {
  std::size_t edge = 0;
  std::size_t neighbor = 0;
};

/// Weighted undirected graph with agents at distinct nodes.
/// Ports of a node are its incident edges in edge-list order.
class Network {
 public:
  enum class Kind { Graph, Tree };

  Network() = default;
  /// Validates and builds adjacency. Agent ids are 1..agent_nodes.size().
  Network(Kind kind, std::vector<std::string> node_names, std::vector<Edge> edges,
          std::vector<std::size_t> agent_nodes, std::optional<int> source = std::nullopt);

  Kind kind() const { return kind_; }
  std::size_t node_count() const { return names_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  std::size_t agent_count() const { return agent_nodes_.size(); }

  const std::string& name(std::size_t node) const { return names_[node]; }
  const std::vector<std::string>& names() const { return names_; }
  std::size_t node_index(const std::string& name) const;
  bool has_node(const std::string& name) const { return index_.count(name) > 0; }

  const Edge& edge(std::size_t e) const { return edges_[e]; }
  const std::vector<Edge>& edges() const { return edges_; }
  /// Edge joining a and b, if any.
  std::optional<std::size_t> edge_between(std::size_t a, std::size_t b) const;

  const std::vector<Port>& ports(std::size_t node) const { return adj_[node]; }
  std::size_t degree(std::size_t node) const { return adj_[node].size(); }

  /// Node of agent `id` (1-based).
  std::size_t agent_node(int id) const { return agent_nodes_[static_cast<std::size_t>(id - 1)]; }
  const std::vector<std::size_t>& agent_nodes() const { return agent_nodes_; }
  /// Agent id at `node`, or 0.
  int agent_at(std::size_t node) const { return agent_at_[node]; }

  const std::optional<int>& source() const { return source_; }

  /// Same network with every node's port order permuted.
  Network with_port_orders(const std::vector<std::vector<std::size_t>>& permutations) const;

 private:
  Kind kind_ = Kind::Graph;
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<Edge> edges_;
  std::vector<std::vector<Port>> adj_;
  std::vector<std::size_t> agent_nodes_;
  std::vector<int> agent_at_;
  std::optional<int> source_;
};

/// Builds a path network whose nodes are the agent positions.
Network line_to_path(const LineConfig& c);

/// A point of a network or of the line.
/// Node: `index` is a node. Edge: `index` is an edge, `offset` measured from edge.u,
/// strictly inside. Line: `offset` is the coordinate.
struct Location {
  enum class Kind { Node, Edge, Line };
  Kind kind = Kind::Node;
  std::size_t index = 0;
  Scalar offset;

  static Location node(std::size_t n) { return {Kind::Node, n, Scalar(0)}; }
  static Location on_edge(std::size_t e, Scalar off) { return {Kind::Edge, e, std::move(off)}; }
  static Location line(Scalar x) { return {Kind::Line, 0, std::move(x)}; }

  friend bool operator==(const Location& a, const Location& b) {
    if (a.kind != b.kind) return false;
    if (a.kind == Kind::Line) return a.offset == b.offset;
    if (a.kind == Kind::Node) return a.index == b.index;
    return a.index == b.index && a.offset == b.offset;
  }
  friend bool operator<(const Location& a, const Location& b) {
    if (a.kind != b.kind) return a.kind < b.kind;
    if (a.index != b.index) return a.index < b.index;
    return a.offset < b.offset;
  }
};

/// Point on edge e at `offset` from edge.u, mapped to a node at either end.
/// Throws ModelError when offset is outside [0, w].
Location edge_point(const Network& net, std::size_t e, const Scalar& offset);

/// Leaves without an agent; empty means the tree suits the distributed algorithms.
struct TreeCheck {
  bool ok = true;
  std::vector<std::string> leaves_without_agent;
};
TreeCheck validate_tree_for_distributed(const Network& tree);

using Configuration = std::variant<LineConfig, Network>;

/// Parses and validates a JSON instance document.
Configuration load_configuration(const std::string& text);
Configuration load_configuration_file(const std::string& path);
std::string serialize_configuration(const Configuration& config);

}  // namespace powercast
