#include "powercast/dist_sim.hpp"

#include "powercast/graph_approx.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <queue>
#include <tuple>

namespace powercast {

namespace {

enum class Mode { Waiting, Moving, Stopped, Stranded };

struct Agent {
  int id = 0;
  Mode mode = Mode::Waiting;
  // At a node when !on_edge; otherwise stationary inside `edge` at `offset` from edge.u.
  bool on_edge = false;
  std::size_t node = 0;
  std::size_t edge = 0;
  Scalar offset;
  // While moving: departed `from` at `depart` along `edge` toward `to`.
  std::size_t from = 0;
  std::size_t to = 0;
  Scalar depart;
  Scalar power;  // power used up to `depart` while moving, total otherwise
  std::size_t entry_port = 0;
  Scalar arrival;
  AgentSet info;
};

// Offset from edge.u of a point `along` units from `from` on edge e.
Scalar from_u(const Network& t, std::size_t e, std::size_t from, const Scalar& along) {
  const Edge& ed = t.edge(e);
  return from == ed.u ? along : ed.w - along;
}

Location where_of(const Network& t, const Agent& a, const Scalar& now) {
  if (a.mode == Mode::Moving) return edge_point(t, a.edge, from_u(t, a.edge, a.from, now - a.depart));
  if (a.on_edge) return Location::on_edge(a.edge, a.offset);
  return Location::node(a.node);
}

std::size_t port_index(const Network& t, std::size_t node, std::size_t edge) {
  const auto& ps = t.ports(node);
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (ps[i].edge == edge) return i;
  }
  throw ModelError("edge is not incident to node");
}

struct Phase1 {
  DistOutcome out;
  std::vector<Agent> agents;
  std::vector<std::vector<TimedMove>> paths;  // per agent, in time order
  Scalar quiet;                               // time of the last event
};

class Engine {
 public:
  Engine(const Network& t, const Scalar& budget) : t_(t), budget_(budget) {
    const std::size_t k = t.agent_count();
    agents_.resize(k);
    paths_.resize(k);
    used_.assign(t.node_count(), {});
    for (std::size_t i = 0; i < k; ++i) {
      Agent& a = agents_[i];
      a.id = static_cast<int>(i + 1);
      a.node = t.agent_node(a.id);
      a.power = 0;
      a.arrival = 0;
      a.info = AgentSet(k);
      a.info.insert(a.id);
    }
  }

  Phase1 run() {
    Scalar now(0);
    std::vector<std::size_t> touched;
    for (const Agent& a : agents_) touched.push_back(a.node);
    exchange(now, std::vector<bool>(agents_.size(), true));
    evaluate(now, touched);
    quiet_ = 0;

    std::size_t guard = 0;
    while (true) {
      std::optional<Scalar> next = next_event();
      if (!next) break;
      if (++guard > 100000000) throw std::runtime_error("event loop did not terminate");
      now = *next;
      quiet_ = now;
      step(now);
    }

    Phase1 p;
    p.out.power.reserve(agents_.size());
    for (const Agent& a : agents_) {
      p.out.power.push_back(a.power);
      p.out.info.push_back(a.info);
    }
    p.out.achieved = completion_.has_value();
    p.out.completion_time = completion_.value_or(Scalar(0));
    p.out.end_time = quiet_;
    p.out.log = std::move(log_);
    for (const auto& path : paths_) {
      for (const TimedMove& m : path) p.out.moves.moves.push_back(m);
    }
    std::stable_sort(p.out.moves.moves.begin(), p.out.moves.moves.end(),
                     [](const TimedMove& a, const TimedMove& b) { return a.depart < b.depart; });
    if (!p.out.achieved) p.out.failure = stranded_ ? "an agent ran out of power" : "no agent gathered everything";
    p.agents = agents_;
    p.paths = paths_;
    p.quiet = quiet_;
    return p;
  }

 private:
  struct Hit {
    enum Kind { Meet, Reach, Strand, Arrive } kind;
    std::size_t other = 0;
  };

  // Earliest event of moving agent a, with what happens then.
  std::pair<Scalar, Hit> event_of(std::size_t ai) const {
    const Agent& a = agents_[ai];
    const Scalar L = t_.edge(a.edge).w;
    Scalar best = a.depart + L;
    Hit hit{Hit::Arrive};
    Scalar strand = a.depart + (budget_ - a.power);
    if (strand < best) {
      best = strand;
      hit = {Hit::Strand};
    }
    for (std::size_t bi = 0; bi < agents_.size(); ++bi) {
      if (bi == ai) continue;
      const Agent& b = agents_[bi];
      if (b.mode == Mode::Moving) {
        if (b.edge != a.edge || b.from != a.to) continue;
        Scalar meet = (L + a.depart + b.depart) / 2;
        if (meet <= best) {
          best = meet;
          hit = {Hit::Meet, bi};
        }
      } else if (b.on_edge && b.edge == a.edge) {
        Scalar along = a.from == t_.edge(a.edge).u ? b.offset : L - b.offset;
        Scalar when = a.depart + along;
        if (when < best || (when == best && hit.kind != Hit::Meet)) {
          best = when;
          hit = {Hit::Reach, bi};
        }
      }
    }
    return {best, hit};
  }

  std::optional<Scalar> next_event() const {
    std::optional<Scalar> best;
    for (std::size_t i = 0; i < agents_.size(); ++i) {
      if (agents_[i].mode != Mode::Moving) continue;
      Scalar when = event_of(i).first;
      if (!best || when < *best) best = when;
    }
    return best;
  }

  void end_move(Agent& a, const Scalar& now, const Location& at) {
    paths_[static_cast<std::size_t>(a.id - 1)].push_back({a.id, a.depart, Location::node(a.from), at});
    a.power += now - a.depart;
  }

  void halt_on_edge(Agent& a, const Scalar& now, Mode mode) {
    Scalar off = from_u(t_, a.edge, a.from, now - a.depart);
    Location at = edge_point(t_, a.edge, off);
    end_move(a, now, at);
    a.mode = mode;
    a.on_edge = true;
    a.offset = off;
  }

  void step(const Scalar& now) {
    std::vector<std::pair<Scalar, Hit>> ev(agents_.size());
    std::vector<bool> due(agents_.size(), false);
    for (std::size_t i = 0; i < agents_.size(); ++i) {
      if (agents_[i].mode != Mode::Moving) continue;
      ev[i] = event_of(i);
      due[i] = ev[i].first == now;
    }
    std::vector<std::size_t> arrived_nodes;
    std::vector<bool> active(agents_.size(), false);

    // Head-on meetings first, then reaching stationary agents, then exhaustion, then arrivals.
    for (std::size_t i = 0; i < agents_.size(); ++i) {
      if (!due[i] || ev[i].second.kind != Hit::Meet) continue;
      std::size_t j = ev[i].second.other;
      if (agents_[i].mode != Mode::Moving || agents_[j].mode != Mode::Moving) continue;
      Location at = where_of(t_, agents_[i], now);
      halt_on_edge(agents_[i], now, Mode::Stopped);
      halt_on_edge(agents_[j], now, Mode::Stopped);
      active[i] = active[j] = true;
      log_.push_back({now, "meet-edge", {agents_[i].id, agents_[j].id}, at});
    }
    for (std::size_t i = 0; i < agents_.size(); ++i) {
      if (!due[i] || agents_[i].mode != Mode::Moving) continue;
      Agent& a = agents_[i];
      switch (ev[i].second.kind) {
        case Hit::Meet:
          break;
        case Hit::Reach: {
          Location at = where_of(t_, a, now);
          halt_on_edge(a, now, Mode::Stopped);
          active[i] = active[ev[i].second.other] = true;
          log_.push_back({now, "meet-edge", {a.id, agents_[ev[i].second.other].id}, at});
          break;
        }
        case Hit::Strand: {
          Location at = where_of(t_, a, now);
          halt_on_edge(a, now, Mode::Stranded);
          stranded_ = true;
          active[i] = true;
          log_.push_back({now, "stranded", {a.id}, at});
          break;
        }
        case Hit::Arrive: {
          end_move(a, now, Location::node(a.to));
          a.mode = Mode::Waiting;
          a.on_edge = false;
          a.node = a.to;
          a.entry_port = port_index(t_, a.to, a.edge);
          a.arrival = now;
          used_[a.node].push_back(a.entry_port);
          active[i] = true;
          arrived_nodes.push_back(a.node);
          log_.push_back({now, "arrive", {a.id}, Location::node(a.node)});
          break;
        }
      }
    }
    // A meeting may have been resolved through the partner before its own turn.
    for (std::size_t i = 0; i < agents_.size(); ++i) {
      if (due[i] && agents_[i].mode == Mode::Moving) {
        Agent& a = agents_[i];
        Location at = where_of(t_, a, now);
        halt_on_edge(a, now, Mode::Stopped);
        active[i] = true;
        log_.push_back({now, "stop", {a.id}, at});
      }
    }
    exchange(now, active);
    std::sort(arrived_nodes.begin(), arrived_nodes.end());
    arrived_nodes.erase(std::unique(arrived_nodes.begin(), arrived_nodes.end()), arrived_nodes.end());
    evaluate(now, arrived_nodes);
  }

  void exchange(const Scalar& now, const std::vector<bool>& active) {
    std::map<Location, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < agents_.size(); ++i) {
      if (agents_[i].mode == Mode::Moving) continue;
      groups[where_of(t_, agents_[i], now)].push_back(i);
    }
    for (auto& [loc, members] : groups) {
      if (members.size() < 2) continue;
      bool fresh = std::any_of(members.begin(), members.end(), [&](std::size_t i) { return active[i]; });
      if (!fresh) continue;
      AgentSet all(agents_.size());
      std::vector<int> ids;
      for (std::size_t i : members) {
        all.merge(agents_[i].info);
        ids.push_back(agents_[i].id);
      }
      for (std::size_t i : members) agents_[i].info.merge(all);
      if (loc.kind == Location::Kind::Node) log_.push_back({now, "meet", ids, loc});
    }
    if (!completion_) {
      for (const Agent& a : agents_) {
        if (a.info.full()) {
          completion_ = now;
          break;
        }
      }
    }
  }

  void evaluate(const Scalar& now, const std::vector<std::size_t>& nodes) {
    for (std::size_t v : nodes) {
      std::vector<std::size_t> present;
      for (std::size_t i = 0; i < agents_.size(); ++i) {
        const Agent& a = agents_[i];
        if (a.mode == Mode::Waiting && !a.on_edge && a.node == v) present.push_back(i);
      }
      if (present.empty()) continue;
      const auto& ports = t_.ports(v);
      std::vector<std::size_t> unused;
      for (std::size_t p = 0; p < ports.size(); ++p) {
        if (std::find(used_[v].begin(), used_[v].end(), p) == used_[v].end()) unused.push_back(p);
      }
      if (unused.size() >= 2) continue;
      if (unused.empty()) {
        std::vector<int> ids;
        for (std::size_t i : present) {
          agents_[i].mode = Mode::Stopped;
          ids.push_back(agents_[i].id);
        }
        log_.push_back({now, "saturate-node", ids, Location::node(v)});
        continue;
      }
      std::size_t mover = *std::min_element(present.begin(), present.end(), [&](std::size_t x, std::size_t y) {
        const Agent& a = agents_[x];
        const Agent& b = agents_[y];
        return std::tie(a.power, a.entry_port, a.arrival) < std::tie(b.power, b.entry_port, b.arrival);
      });
      std::vector<int> stopped;
      for (std::size_t i : present) {
        if (i == mover) continue;
        agents_[i].mode = Mode::Stopped;
        stopped.push_back(agents_[i].id);
      }
      if (!stopped.empty()) log_.push_back({now, "stop", stopped, Location::node(v)});
      Agent& a = agents_[mover];
      if (a.power >= budget_) {
        a.mode = Mode::Stranded;
        stranded_ = true;
        log_.push_back({now, "stranded", {a.id}, Location::node(v)});
        continue;
      }
      const Port& port = ports[unused.front()];
      a.mode = Mode::Moving;
      a.from = v;
      a.to = port.neighbor;
      a.edge = port.edge;
      a.depart = now;
      log_.push_back({now, "depart", {a.id}, Location::node(v)});
    }
  }

  const Network& t_;
  Scalar budget_;
  std::vector<Agent> agents_;
  std::vector<std::vector<TimedMove>> paths_;
  std::vector<std::vector<std::size_t>> used_;
  std::vector<DistEvent> log_;
  std::optional<Scalar> completion_;
  Scalar quiet_;
  bool stranded_ = false;
};

void require_tree(const Network& t) {
  if (t.kind() != Network::Kind::Tree) throw ModelError("distributed algorithms need a tree");
  TreeCheck c = validate_tree_for_distributed(t);
  if (!c.ok) {
    std::string names;
    for (const auto& n : c.leaves_without_agent) names += (names.empty() ? "" : ", ") + n;
    throw ModelError("leaves without an agent: " + names);
  }
}

// Distance along a reversed path to `target`, if the path passes through it.
std::optional<Scalar> hit_distance(const Configuration& arena, const std::vector<TimedMove>& back,
                                   const Location& start, const Location& target, const Network& t) {
  if (start == target) return Scalar(0);
  Scalar walked(0);
  for (const TimedMove& m : back) {
    Scalar len = move_length(arena, m.from, m.to);
    if (target.kind == Location::Kind::Node) {
      if (m.to == target) return walked + len;
    } else {
      // The segment lies on one edge; compare offsets from edge.u.
      auto offset_on = [&](const Location& l) -> std::optional<Scalar> {
        if (l.kind == Location::Kind::Edge) {
          if (l.index != target.index) return std::nullopt;
          return l.offset;
        }
        const Edge& e = t.edge(target.index);
        if (l.index == e.u) return Scalar(0);
        if (l.index == e.v) return e.w;
        return std::nullopt;
      };
      auto a = offset_on(m.from);
      auto b = offset_on(m.to);
      if (a && b && *a != *b) {
        const Scalar& x = target.offset;
        if ((*a <= x && x <= *b) || (*b <= x && x <= *a)) return walked + abs(x - *a);
      }
    }
    walked += len;
  }
  return std::nullopt;
}

}  // namespace

DistOutcome run_unknown_tree(const Network& tree, const Scalar& budget) {
  require_tree(tree);
  return Engine(tree, budget).run().out;
}

DistOutcome run_distributed_broadcast(const Network& tree, int source, const Scalar& budget) {
  require_tree(tree);
  const std::size_t k = tree.agent_count();
  if (source < 1 || static_cast<std::size_t>(source) > k) throw ModelError("source agent out of range");
  Phase1 p = Engine(tree, budget).run();
  DistOutcome out = std::move(p.out);
  const Configuration arena{tree};

  std::vector<Location> rest(k);
  std::vector<std::vector<TimedMove>> back(k);
  for (std::size_t i = 0; i < k; ++i) {
    rest[i] = where_of(tree, p.agents[i], p.quiet);
    for (auto it = p.paths[i].rbegin(); it != p.paths[i].rend(); ++it) {
      back[i].push_back({it->agent, Scalar(0), it->to, it->from});
    }
  }

  // Activation spreads like Dijkstra: an active agent reaches others along its reversed path.
  std::vector<std::optional<Scalar>> woke(k);
  std::vector<bool> done(k, false);
  using Item = std::pair<Scalar, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
  for (std::size_t i = 0; i < k; ++i) {
    if (out.info[i].full()) {
      woke[i] = p.quiet;
      pq.emplace(p.quiet, i);
    }
  }
  while (!pq.empty()) {
    auto [when, i] = pq.top();
    pq.pop();
    if (done[i]) continue;
    done[i] = true;
    out.log.push_back({when, "activate", {static_cast<int>(i + 1)}, rest[i]});
    Scalar reach = budget - out.power[i];
    for (std::size_t j = 0; j < k; ++j) {
      if (done[j]) continue;
      auto d = hit_distance(arena, back[i], rest[i], rest[j], tree);
      if (!d || *d > reach) continue;
      Scalar at = when + *d;
      if (!woke[j] || at < *woke[j]) {
        woke[j] = at;
        pq.emplace(at, j);
      }
    }
  }

  AgentSet everything(k);
  for (std::size_t i = 1; i <= k; ++i) everything.insert(static_cast<int>(i));
  Scalar last_wake(0);
  Scalar end = out.end_time;
  bool ran_dry = false;
  for (std::size_t i = 0; i < k; ++i) {
    if (!woke[i]) continue;
    out.info[i] = everything;
    last_wake = max(last_wake, *woke[i]);
    Scalar now = *woke[i];
    Scalar left = budget - out.power[i];
    for (const TimedMove& m : back[i]) {
      Scalar len = move_length(arena, m.from, m.to);
      if (len > left) {
        ran_dry = true;
        break;  // the walk back stops where power runs out; nothing further is reached
      }
      out.moves.moves.push_back({m.agent, now, m.from, m.to});
      now += len;
      left -= len;
      out.power[i] += len;
    }
    end = max(end, now);
  }
  std::stable_sort(out.moves.moves.begin(), out.moves.moves.end(),
                   [](const TimedMove& a, const TimedMove& b) { return a.depart < b.depart; });

  out.achieved = true;
  for (std::size_t i = 0; i < k; ++i) {
    if (!out.info[i].contains(source)) out.achieved = false;
  }
  out.completion_time = last_wake;
  out.end_time = end;
  if (out.achieved) {
    out.failure.clear();
  } else if (out.failure.empty()) {
    out.failure = ran_dry ? "an agent ran out of power on the way back" : "some agent never learned the source";
  }
  return out;
}

CompetitiveReport competitive_report(const Network& tree) {
  CompetitiveReport r;
  r.separation = separation(tree);
  DistOutcome o = run_unknown_tree(tree, r.separation);
  r.max_power = 0;
  for (const Scalar& x : o.power) r.max_power = max(r.max_power, x);
  r.achieved = o.achieved;
  r.ratio = r.max_power / (r.separation / 2);
  r.within_bound = r.max_power <= r.separation;
  return r;
}

}  // namespace powercast
