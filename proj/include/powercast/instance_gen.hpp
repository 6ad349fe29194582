#pragma once

#include "powercast/model.hpp"
#include "powercast/strategy.hpp"

#include <cstdint>
#include <vector>

namespace powercast {

/// Multiset of 3m positive integers with R/4 < x < R/2, where R = sum/m.
struct ThreePartitionInstance {
  std::size_t m = 0;
  std::vector<long> items;
  long R = 0;
};

/// Validates the multiset; throws std::invalid_argument.
ThreePartitionInstance make_three_partition(std::vector<long> items);

/// Star built from a multiset. Agents are ids 1..k, numbered A-leaves first, then B, then C.
struct StarInstance {
  Network star;
  Scalar power;
  std::vector<int> a_agents;
  std::vector<int> b_agents;  // b_agents[i] sits on the leaf built from items[i]
  std::vector<int> c_agents;
};

/// m+1 leaves of weight 1, one leaf 2R+1+x per item, one leaf 4R+1; P = 2R+1.
StarInstance gen_3p_convergecast_star(const ThreePartitionInstance& inst);

/// m leaves of weight 1, one leaf 4R+1+x per item, m leaves 6R+1; P = 4R+1; source a_1.
StarInstance gen_3p_broadcast_star(const ThreePartitionInstance& inst);

enum class Task { Convergecast, Broadcast };

/// Timed moves solving the star from a partition into triples summing to R.
/// Each group lists item values; throws std::invalid_argument when the groups are not a 3-partition.
Strategy proof_strategy_for_partition(const ThreePartitionInstance& inst,
                                      const std::vector<std::vector<long>>& groups, Task task);

/// Exhaustive search for a split of the items into m triples summing to R.
bool has_three_partition(const ThreePartitionInstance& inst);

/// Exact search restricted to simple strategies on a star with agents at leaves: every agent
/// first walks to the centre, then agents with spare power fetch from the stranded ones.
/// Convergecast: every stranded agent except possibly one is fetched by a round trip, the last
/// one by a one-way trip. Broadcast: each collector's last visit may be one-way.
bool simple_star_feasible(const Network& star, const Scalar& power, Task task, int source = 1);

struct LowerBoundFamily {
  Scalar delta;
  Scalar power;
  Scalar epsilon;
  Scalar sigma;
  std::size_t l = 0;
  std::size_t k = 0;
  std::size_t n = 0;
  Scalar s(std::size_t i) const;
  Scalar s_prime(std::size_t i) const;
  LineConfig line;
};

/// Line with a_1 at 0, groups of k agents inside [s_i, s'_i] for i = 1..2l, and a_n at s_{2l+1}.
LowerBoundFamily gen_lower_bound_line(const Scalar& delta, const Scalar& power);

/// Strictly increasing rational positions starting at 0.
LineConfig gen_random_line(std::size_t n, std::uint64_t seed);

/// Random tree with rational weights in (0, 100) and an agent at every leaf.
Network gen_random_tree(std::size_t n, std::uint64_t seed);

/// Connected graph: random spanning tree plus `extra` random edges; `agents` agents at distinct nodes.
Network gen_random_graph(std::size_t n, std::size_t extra, std::size_t agents, std::uint64_t seed);

/// Star whose leaves have the given weights, one agent per leaf in order.
Network make_star(const std::vector<Scalar>& leaf_weights, std::optional<int> source = std::nullopt);

/// Path with the given edge weights and agents at both ends.
Network make_path(const std::vector<Scalar>& edge_weights);

}  // namespace powercast
