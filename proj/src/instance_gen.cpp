#include "powercast/instance_gen.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>

namespace powercast {

ThreePartitionInstance make_three_partition(std::vector<long> items) {
  if (items.empty() || items.size() % 3 != 0) throw std::invalid_argument("item count must be a positive multiple of 3");
  ThreePartitionInstance inst;
  inst.m = items.size() / 3;
  long sum = 0;
  for (long x : items) {
    if (x <= 0) throw std::invalid_argument("items must be positive");
    sum += x;
  }
  if (sum % static_cast<long>(inst.m) != 0) throw std::invalid_argument("sum is not a multiple of m");
  inst.R = sum / static_cast<long>(inst.m);
  for (long x : items) {
    // R/4 < x < R/2, kept in integers
    if (!(4 * x > inst.R && 2 * x < inst.R)) {
      throw std::invalid_argument("item " + std::to_string(x) + " outside (R/4, R/2) with R = " + std::to_string(inst.R));
    }
  }
  inst.items = std::move(items);
  return inst;
}

namespace {

struct StarBuilder {
  std::vector<std::string> names{"o"};
  std::vector<Edge> edges;
  std::vector<std::size_t> agents;

  int leaf(const std::string& name, Scalar w) {
    names.push_back(name);
    edges.push_back({0, names.size() - 1, std::move(w)});
    agents.push_back(names.size() - 1);
    return static_cast<int>(agents.size());
  }
};

}  // namespace

StarInstance gen_3p_convergecast_star(const ThreePartitionInstance& inst) {
  make_three_partition(inst.items);
  const Scalar R(inst.R);
  StarBuilder b;
  StarInstance out;
  for (std::size_t i = 0; i <= inst.m; ++i) out.a_agents.push_back(b.leaf("a" + std::to_string(i + 1), 1));
  for (std::size_t i = 0; i < inst.items.size(); ++i) {
    out.b_agents.push_back(b.leaf("b" + std::to_string(i + 1), 2 * R + 1 + inst.items[i]));
  }
  out.c_agents.push_back(b.leaf("c1", 4 * R + 1));
  out.star = Network(Network::Kind::Tree, b.names, b.edges, b.agents);
  out.power = 2 * R + 1;
  return out;
}

StarInstance gen_3p_broadcast_star(const ThreePartitionInstance& inst) {
  make_three_partition(inst.items);
  const Scalar R(inst.R);
  StarBuilder b;
  StarInstance out;
  for (std::size_t i = 0; i < inst.m; ++i) out.a_agents.push_back(b.leaf("a" + std::to_string(i + 1), 1));
  for (std::size_t i = 0; i < inst.items.size(); ++i) {
    out.b_agents.push_back(b.leaf("b" + std::to_string(i + 1), 4 * R + 1 + inst.items[i]));
  }
  for (std::size_t i = 0; i < inst.m; ++i) out.c_agents.push_back(b.leaf("c" + std::to_string(i + 1), 6 * R + 1));
  out.star = Network(Network::Kind::Tree, b.names, b.edges, b.agents, out.a_agents.front());
  out.power = 4 * R + 1;
  return out;
}

Strategy proof_strategy_for_partition(const ThreePartitionInstance& inst,
                                      const std::vector<std::vector<long>>& groups, Task task) {
  if (groups.size() != inst.m) throw std::invalid_argument("partition must have m groups");
  // Match each group value to an unused item index.
  std::vector<bool> taken(inst.items.size(), false);
  std::vector<std::vector<std::size_t>> triples;
  for (const auto& g : groups) {
    if (g.size() != 3) throw std::invalid_argument("every group must hold three items");
    long sum = 0;
    std::vector<std::size_t> idx;
    for (long x : g) {
      sum += x;
      std::size_t found = inst.items.size();
      for (std::size_t i = 0; i < inst.items.size(); ++i) {
        if (!taken[i] && inst.items[i] == x) {
          found = i;
          break;
        }
      }
      if (found == inst.items.size()) throw std::invalid_argument("group value " + std::to_string(x) + " not in the multiset");
      taken[found] = true;
      idx.push_back(found);
    }
    if (sum != inst.R) {
      throw std::invalid_argument("group sums to " + std::to_string(sum) + ", expected " + std::to_string(inst.R));
    }
    triples.push_back(idx);
  }

  const StarInstance si = task == Task::Convergecast ? gen_3p_convergecast_star(inst) : gen_3p_broadcast_star(inst);
  const Network& g = si.star;
  const Scalar& P = si.power;
  const Scalar R(inst.R);
  Strategy s;
  auto leaf_edge = [&](int agent) { return g.ports(g.agent_node(agent)).front().edge; };
  auto stop_point = [&](int agent) {
    std::size_t e = leaf_edge(agent);
    const Scalar& w = g.edge(e).w;
    return w <= P ? Location::node(0) : edge_point(g, e, w - P);
  };

  // Everyone walks towards the centre as far as power allows.
  for (std::size_t id = 1; id <= g.agent_count(); ++id) {
    int a = static_cast<int>(id);
    s.moves.push_back({a, Scalar(0), Location::node(g.agent_node(a)), stop_point(a)});
  }
  // From time P every stranded b sits at distance x from the centre; each a_i fetches its triple.
  for (std::size_t i = 0; i < inst.m; ++i) {
    int a = si.a_agents[i];
    Scalar t = P;
    for (std::size_t item : triples[i]) {
      int b = si.b_agents[item];
      Location there = stop_point(b);
      Scalar x(inst.items[item]);
      s.moves.push_back({a, t, Location::node(0), there});
      s.moves.push_back({a, t + x, there, Location::node(0)});
      t += 2 * x;
    }
    if (task == Task::Broadcast) s.moves.push_back({a, t, Location::node(0), stop_point(si.c_agents[i])});
  }
  if (task == Task::Convergecast) {
    // The spare A agent carries everything to the stranded c once all fetches are back.
    s.moves.push_back({si.a_agents.back(), P + 2 * R, Location::node(0), stop_point(si.c_agents.front())});
  }
  return s;
}

bool has_three_partition(const ThreePartitionInstance& inst) {
  std::vector<long> xs = inst.items;
  std::sort(xs.rbegin(), xs.rend());
  std::vector<bool> used(xs.size(), false);
  std::function<bool()> solve = [&]() -> bool {
    std::size_t first = 0;
    while (first < xs.size() && used[first]) ++first;
    if (first == xs.size()) return true;
    used[first] = true;
    for (std::size_t j = first + 1; j < xs.size(); ++j) {
      if (used[j]) continue;
      for (std::size_t k = j + 1; k < xs.size(); ++k) {
        if (used[k] || xs[first] + xs[j] + xs[k] != inst.R) continue;
        used[j] = used[k] = true;
        if (solve()) return true;
        used[j] = used[k] = false;
      }
    }
    used[first] = false;
    return false;
  };
  return solve();
}

bool simple_star_feasible(const Network& star, const Scalar& power, Task task, int source) {
  const std::size_t k = star.agent_count();
  if (k <= 1) return true;
  std::vector<Scalar> spare;     // power left at the centre
  std::vector<Scalar> stranded;  // distance from the centre
  std::optional<std::size_t> source_stranded;
  for (std::size_t id = 1; id <= k; ++id) {
    std::size_t node = star.agent_node(static_cast<int>(id));
    if (star.degree(node) != 1) throw std::invalid_argument("star agents must sit on leaves");
    const Scalar& w = star.edge(star.ports(node).front().edge).w;
    if (w <= power) {
      spare.push_back(power - w);
    } else {
      if (task == Task::Broadcast && static_cast<int>(id) == source) source_stranded = stranded.size();
      stranded.push_back(w - power);
    }
  }
  if (stranded.empty()) return !spare.empty();
  if (spare.empty()) return false;

  std::vector<std::size_t> order(stranded.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return stranded[b] < stranded[a]; });

  if (task == Task::Convergecast) {
    // One stranded agent (or none) is reached last by a one-way trip; the rest by round trips.
    for (std::size_t last = 0; last <= stranded.size(); ++last) {
      std::vector<Scalar> load(spare.size(), Scalar(0));
      std::function<bool(std::size_t)> place = [&](std::size_t pos) -> bool {
        if (pos == order.size()) {
          if (last == stranded.size()) return true;
          for (std::size_t c = 0; c < spare.size(); ++c) {
            if (load[c] + stranded[last] <= spare[c]) return true;
          }
          return false;
        }
        std::size_t j = order[pos];
        if (j == last) return place(pos + 1);
        for (std::size_t c = 0; c < spare.size(); ++c) {
          Scalar next = load[c] + 2 * stranded[j];
          if (next > spare[c]) continue;
          std::swap(load[c], next);
          if (place(pos + 1)) return true;
          std::swap(load[c], next);
        }
        return false;
      };
      if (place(0)) return true;
    }
    return false;
  }

  // Broadcast: a collector's farthest visit can be its last, one-way. A stranded source needs a
  // round trip before anything else, so it never counts as the one-way visit.
  std::vector<Scalar> sum(spare.size(), Scalar(0));
  std::vector<Scalar> far(spare.size(), Scalar(0));
  std::function<bool(std::size_t)> place = [&](std::size_t pos) -> bool {
    if (pos == order.size()) return true;
    std::size_t j = order[pos];
    for (std::size_t c = 0; c < spare.size(); ++c) {
      Scalar s2 = sum[c] + stranded[j];
      Scalar f2 = source_stranded == j ? far[c] : max(far[c], stranded[j]);
      if (2 * s2 - f2 > spare[c]) continue;
      std::swap(sum[c], s2);
      std::swap(far[c], f2);
      if (place(pos + 1)) return true;
      std::swap(sum[c], s2);
      std::swap(far[c], f2);
    }
    return false;
  };
  return place(0);
}

Scalar LowerBoundFamily::s(std::size_t i) const { return (2 * power - 3 * sigma) * static_cast<unsigned long>(i) - sigma; }
Scalar LowerBoundFamily::s_prime(std::size_t i) const { return (2 * power - 3 * sigma) * static_cast<unsigned long>(i); }

LowerBoundFamily gen_lower_bound_line(const Scalar& delta, const Scalar& power) {
  if (!(delta > 0 && delta < 2)) throw std::invalid_argument("delta must lie in (0, 2)");
  if (!(power > 0)) throw std::invalid_argument("power must be positive");
  LowerBoundFamily f;
  f.delta = delta;
  f.power = power;
  f.epsilon = delta * power / 4;
  f.sigma = f.epsilon / 2;
  const Scalar ratio = Scalar(8) / delta;
  // largest l with 2^l <= 8/delta; 8/delta > 4 so l >= 2
  std::size_t l = 0;
  while (times_pow2(Scalar(1), l + 1) <= ratio) ++l;
  f.l = l;
  f.k = l + 2;
  f.n = 2 * l * (l + 2) + 2;
  std::vector<Scalar> pos{Scalar(0)};
  for (std::size_t i = 1; i <= 2 * l; ++i) {
    const Scalar base = f.s(i);
    for (std::size_t j = 1; j <= f.k; ++j) {
      pos.push_back(base + f.sigma * static_cast<unsigned long>(j) / static_cast<unsigned long>(f.k + 1));
    }
  }
  pos.push_back(f.s(2 * l + 1));
  f.line = make_line(std::move(pos));
  return f;
}

namespace {

Scalar random_weight(std::mt19937_64& rng, long max_value) {
  std::uniform_int_distribution<long> den_d(1, 8);
  long den = den_d(rng);
  std::uniform_int_distribution<long> num_d(1, max_value * den - 1);
  Scalar w(num_d(rng), den);
  w.canonicalize();
  return w;
}

std::vector<std::string> numbered(std::size_t n) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("v" + std::to_string(i));
  return names;
}

}  // namespace

LineConfig gen_random_line(std::size_t n, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("n must be at least 1");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> den_d(1, 4);
  std::vector<Scalar> pos{Scalar(0)};
  for (std::size_t i = 1; i < n; ++i) {
    long den = den_d(rng);
    std::uniform_int_distribution<long> num_d(1, 10 * den);
    Scalar gap(num_d(rng), den);
    gap.canonicalize();
    pos.push_back(pos.back() + gap);
  }
  return make_line(std::move(pos));
}

Network gen_random_tree(std::size_t n, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("n must be at least 1");
  std::mt19937_64 rng(seed);
  std::vector<Edge> edges;
  std::vector<std::size_t> degree(n, 0);
  for (std::size_t v = 1; v < n; ++v) {
    std::uniform_int_distribution<std::size_t> parent_d(0, v - 1);
    std::size_t p = parent_d(rng);
    edges.push_back({p, v, random_weight(rng, 100)});
    ++degree[p];
    ++degree[v];
  }
  std::vector<std::size_t> agents;
  for (std::size_t v = 0; v < n; ++v) {
    if (degree[v] <= 1) agents.push_back(v);
  }
  return Network(Network::Kind::Tree, numbered(n), std::move(edges), std::move(agents));
}

Network gen_random_graph(std::size_t n, std::size_t extra, std::size_t agents, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("n must be at least 1");
  if (agents == 0 || agents > n) throw std::invalid_argument("agent count must lie in 1..n");
  std::mt19937_64 rng(seed);
  std::vector<Edge> edges;
  std::set<std::pair<std::size_t, std::size_t>> present;
  for (std::size_t v = 1; v < n; ++v) {
    std::uniform_int_distribution<std::size_t> parent_d(0, v - 1);
    std::size_t p = parent_d(rng);
    edges.push_back({p, v, random_weight(rng, 100)});
    present.emplace(p, v);
  }
  std::uniform_int_distribution<std::size_t> node_d(0, n - 1);
  for (std::size_t tries = 0, added = 0; added < extra && tries < 20 * (extra + 1); ++tries) {
    std::size_t a = node_d(rng), b = node_d(rng);
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    if (!present.emplace(a, b).second) continue;
    edges.push_back({a, b, random_weight(rng, 100)});
    ++added;
  }
  std::vector<std::size_t> nodes(n);
  std::iota(nodes.begin(), nodes.end(), 0);
  std::shuffle(nodes.begin(), nodes.end(), rng);
  nodes.resize(agents);
  return Network(Network::Kind::Graph, numbered(n), std::move(edges), std::move(nodes));
}

Network make_star(const std::vector<Scalar>& leaf_weights, std::optional<int> source) {
  StarBuilder b;
  for (std::size_t i = 0; i < leaf_weights.size(); ++i) b.leaf("l" + std::to_string(i + 1), leaf_weights[i]);
  return Network(Network::Kind::Tree, b.names, b.edges, b.agents, source);
}

Network make_path(const std::vector<Scalar>& edge_weights) {
  const std::size_t n = edge_weights.size() + 1;
  std::vector<Edge> edges;
  for (std::size_t i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, edge_weights[i]});
  std::vector<std::size_t> agents{0};
  if (n > 1) agents.push_back(n - 1);
  return Network(Network::Kind::Tree, numbered(n), std::move(edges), std::move(agents));
}

}  // namespace powercast
