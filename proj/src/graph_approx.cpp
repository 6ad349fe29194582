#include "powercast/graph_approx.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <queue>
#include <stdexcept>
#include <tuple>

namespace powercast {

std::vector<std::size_t> DistanceMatrix::path(std::size_t from, std::size_t to) const {
  std::vector<std::size_t> out{to};
  while (out.back() != from) out.push_back(pred[from][out.back()]);
  std::reverse(out.begin(), out.end());
  return out;
}

DistanceMatrix apsp(const Network& g) {
  const std::size_t n = g.node_count();
  DistanceMatrix d;
  d.dist.assign(n, std::vector<Scalar>(n));
  d.pred.assign(n, std::vector<std::size_t>(n, 0));
  using Item = std::pair<Scalar, std::size_t>;
  auto cmp = [](const Item& a, const Item& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second > b.second;
  };
  for (std::size_t s = 0; s < n; ++s) {
    std::vector<bool> done(n, false), seen(n, false);
    auto& dist = d.dist[s];
    auto& pred = d.pred[s];
    std::priority_queue<Item, std::vector<Item>, decltype(cmp)> pq(cmp);
    dist[s] = 0;
    pred[s] = s;
    seen[s] = true;
    pq.emplace(Scalar(0), s);
    while (!pq.empty()) {
      auto [du, u] = pq.top();
      pq.pop();
      if (done[u]) continue;
      done[u] = true;
      for (const Port& p : g.ports(u)) {
        Scalar alt = du + g.edge(p.edge).w;
        if (!seen[p.neighbor] || alt < dist[p.neighbor]) {
          seen[p.neighbor] = true;
          dist[p.neighbor] = alt;
          pred[p.neighbor] = u;
          pq.emplace(alt, p.neighbor);
        }
      }
    }
    for (std::size_t v = 0; v < n; ++v) {
      if (!done[v]) throw ModelError("network is disconnected");
    }
  }
  return d;
}

Scalar separation(const Network& g) { return separation(g, apsp(g)); }

Scalar separation(const Network& g, const DistanceMatrix& d) {
  const auto& A = g.agent_nodes();
  const std::size_t k = A.size();
  if (k < 2) throw std::invalid_argument("separation needs at least two agents");
  // Prim over the metric closure; the heaviest tree edge is the answer.
  std::vector<bool> in(k, false);
  std::vector<Scalar> best(k);
  for (std::size_t i = 1; i < k; ++i) best[i] = d(A[0], A[i]);
  in[0] = true;
  Scalar bottleneck(0);
  for (std::size_t step = 1; step < k; ++step) {
    std::size_t pick = k;
    for (std::size_t i = 0; i < k; ++i) {
      if (!in[i] && (pick == k || best[i] < best[pick])) pick = i;
    }
    in[pick] = true;
    bottleneck = powercast::max(bottleneck, best[pick]);
    for (std::size_t i = 0; i < k; ++i) {
      if (!in[i]) best[i] = powercast::min(best[i], d(A[pick], A[i]));
    }
  }
  return bottleneck;
}

Scalar brute_force_separation(const Network& g) { return brute_force_separation(g, apsp(g)); }

Scalar brute_force_separation(const Network& g, const DistanceMatrix& d) {
  const auto& A = g.agent_nodes();
  const std::size_t k = A.size();
  if (k < 2) throw std::invalid_argument("separation needs at least two agents");
  if (k > 20) throw std::invalid_argument("brute force limited to 20 agents");
  Scalar best(0);
  // Agent 0 is always in X; mask picks the other members of X. X = A is excluded.
  const std::uint64_t full = (std::uint64_t{1} << (k - 1)) - 1;
  for (std::uint64_t mask = 0; mask < full; ++mask) {
    std::optional<Scalar> cross;
    for (std::size_t i = 0; i < k; ++i) {
      bool xi = i == 0 || ((mask >> (i - 1)) & 1);
      if (!xi) continue;
      for (std::size_t j = 1; j < k; ++j) {
        bool xj = (mask >> (j - 1)) & 1;
        if (xj) continue;
        const Scalar& v = d(A[i], A[j]);
        if (!cross || v < *cross) cross = v;
      }
    }
    if (cross && *cross > best) best = *cross;
  }
  return best;
}

KnownGraphResult known_graph_convergecast(const Network& g) { return known_graph_convergecast(g, apsp(g)); }

KnownGraphResult known_graph_convergecast(const Network& g, const DistanceMatrix& d) {
  const auto& A = g.agent_nodes();
  const std::size_t k = A.size();
  KnownGraphResult out;
  out.collector = 1;
  out.max_move = 0;
  if (k <= 1) return out;

  std::vector<bool> in(k, false);
  std::vector<std::size_t> attach(k, 0);  // agent index in V closest to i
  in[0] = true;
  for (std::size_t stepc = 1; stepc < k; ++stepc) {
    std::size_t pick = k;
    for (std::size_t i = 0; i < k; ++i) {
      if (in[i]) continue;
      if (pick == k) {
        pick = i;
        continue;
      }
      const Scalar& di = d(A[attach[i]], A[i]);
      const Scalar& dp = d(A[attach[pick]], A[pick]);
      if (std::make_tuple(di, A[attach[i]], A[i]) < std::make_tuple(dp, A[attach[pick]], A[pick])) pick = i;
    }
    in[pick] = true;
    out.links.push_back({static_cast<int>(pick + 1), static_cast<int>(attach[pick] + 1), d(A[attach[pick]], A[pick])});
    out.max_move = powercast::max(out.max_move, out.links.back().distance);
    for (std::size_t i = 0; i < k; ++i) {
      if (in[i]) continue;
      const Scalar& cur = d(A[attach[i]], A[i]);
      const Scalar& via = d(A[pick], A[i]);
      if (via < cur || (via == cur && A[pick] < A[attach[i]])) attach[i] = pick;
    }
  }

  Scalar now(0);
  for (auto it = out.links.rbegin(); it != out.links.rend(); ++it) {
    std::size_t from = g.agent_node(it->mover);
    std::size_t to = g.agent_node(it->receiver);
    auto route = d.path(from, to);
    for (std::size_t s = 0; s + 1 < route.size(); ++s) {
      Location a = Location::node(route[s]);
      Location b = Location::node(route[s + 1]);
      out.strategy.moves.push_back({it->mover, now, a, b});
      now += g.edge(*g.edge_between(route[s], route[s + 1])).w;
    }
  }
  return out;
}

Strategy graph_broadcast_4approx(const Network& g, int source) {
  if (source < 1 || static_cast<std::size_t>(source) > g.agent_count()) {
    throw std::invalid_argument("source agent out of range");
  }
  Strategy s = known_graph_convergecast(g).strategy;
  const Configuration arena{g};
  const Scalar M = makespan(arena, s);
  const std::size_t forward = s.moves.size();
  for (std::size_t i = forward; i-- > 0;) {
    const TimedMove m = s.moves[i];
    Scalar len = move_length(arena, m.from, m.to);
    s.moves.push_back({m.agent, 2 * M - m.depart - len, m.to, m.from});
  }
  return s;
}

}  // namespace powercast
