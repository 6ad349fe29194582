#pragma once

#include "powercast/model.hpp"
#include "powercast/strategy.hpp"

#include <cstddef>
#include <vector>

namespace powercast {

/// All-pairs shortest paths over the nodes of a network.
struct DistanceMatrix {
  std::vector<std::vector<Scalar>> dist;
  /// pred[s][v]: node before v on the chosen shortest path from s (pred[s][s] == s).
  std::vector<std::vector<std::size_t>> pred;

  const Scalar& operator()(std::size_t a, std::size_t b) const { return dist[a][b]; }
  /// Node sequence from `from` to `to`, both included.
  std::vector<std::size_t> path(std::size_t from, std::size_t to) const;
};

/// One Dijkstra run per source, exact.
DistanceMatrix apsp(const Network& g);

/// Max over agent bipartitions of the min cross distance, as the bottleneck of a
/// minimum spanning tree over the agents' metric closure.
Scalar separation(const Network& g);
Scalar separation(const Network& g, const DistanceMatrix& d);

/// Same quantity by enumerating all bipartitions; at most 20 agents.
Scalar brute_force_separation(const Network& g);
Scalar brute_force_separation(const Network& g, const DistanceMatrix& d);

struct KnownGraphResult {
  Strategy strategy;
  int collector = 1;
  Scalar max_move;
  /// (mover, receiver, distance) in the order the accretion chose them.
  struct Link {
    int mover = 0;
    int receiver = 0;
    Scalar distance;
  };
  std::vector<Link> links;
};

/// Nearest-agent accretion from agent 1, replayed in reverse: each agent walks once
/// to the agent it was attached to.
KnownGraphResult known_graph_convergecast(const Network& g);
KnownGraphResult known_graph_convergecast(const Network& g, const DistanceMatrix& d);

/// Gathering strategy followed by its time mirror; informs every agent from any source.
Strategy graph_broadcast_4approx(const Network& g, int source);

}  // namespace powercast
