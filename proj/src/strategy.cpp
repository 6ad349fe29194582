#include "powercast/strategy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <string>

namespace powercast {

BudgetExceeded::BudgetExceeded(int a, Scalar t)
    : std::runtime_error("agent " + std::to_string(a) + " exceeds its budget at time " + format_scalar(t)),
      agent(a),
      time(std::move(t)) {}

namespace {

const Network* as_network(const Configuration& arena) { return std::get_if<Network>(&arena); }

Location canonical(const Configuration& arena, const Location& loc) {
  const Network* net = as_network(arena);
  if (!net) {
    if (loc.kind != Location::Kind::Line) throw StrategyError("line strategies use {\"x\": ...} locations");
    return loc;
  }
  switch (loc.kind) {
    case Location::Kind::Line:
      throw StrategyError("network strategies cannot use line coordinates");
    case Location::Kind::Node:
      if (loc.index >= net->node_count()) throw StrategyError("location names an unknown node");
      return loc;
    case Location::Kind::Edge:
      if (loc.index >= net->edge_count()) throw StrategyError("location names an unknown edge");
      try {
        return edge_point(*net, loc.index, loc.offset);
      } catch (const ModelError&) {
        throw StrategyError("edge offset outside the edge");
      }
  }
  return loc;
}

// Edge carrying a straight move between two canonical graph locations, with the
// offsets of both ends measured from edge.u.
struct Span {
  std::size_t edge = 0;
  Scalar x0, x1;
};

Span graph_span(const Network& net, const Location& a, const Location& b) {
  auto offset_on = [&](const Location& l, std::size_t e) -> std::optional<Scalar> {
    const Edge& ed = net.edge(e);
    if (l.kind == Location::Kind::Edge) return l.index == e ? std::optional<Scalar>(l.offset) : std::nullopt;
    if (l.index == ed.u) return Scalar(0);
    if (l.index == ed.v) return ed.w;
    return std::nullopt;
  };
  std::optional<std::size_t> e;
  if (a.kind == Location::Kind::Edge) e = a.index;
  else if (b.kind == Location::Kind::Edge) e = b.index;
  else e = net.edge_between(a.index, b.index);
  if (!e) throw StrategyError("move endpoints share no edge");
  auto x0 = offset_on(a, *e);
  auto x1 = offset_on(b, *e);
  if (!x0 || !x1) throw StrategyError("move endpoints share no edge");
  return {*e, *x0, *x1};
}

struct Piece {
  Scalar t0;
  std::optional<Scalar> t1;  // nullopt: forever
  bool at_node = false;
  std::size_t node = 0;
  std::size_t track = 0;
  Scalar x0;
  int dir = 0;
  std::optional<std::size_t> start_node, end_node;
  double t0d = 0, t1d = 0, lo = 0, hi = 0;
};

Piece stationary(const Configuration& arena, const Location& at, const Scalar& t0, const std::optional<Scalar>& t1) {
  Piece p;
  p.t0 = t0;
  p.t1 = t1;
  if (at.kind == Location::Kind::Node) {
    p.at_node = true;
    p.node = at.index;
  } else {
    p.track = at.kind == Location::Kind::Edge ? at.index : 0;
    p.x0 = at.offset;
  }
  (void)arena;
  return p;
}

Piece moving(const Configuration& arena, const Location& from, const Location& to, const Scalar& t0,
             const Scalar& len) {
  Piece p;
  p.t0 = t0;
  p.t1 = t0 + len;
  if (const Network* net = as_network(arena)) {
    Span sp = graph_span(*net, from, to);
    p.track = sp.edge;
    p.x0 = sp.x0;
    p.dir = sp.x1 > sp.x0 ? 1 : -1;
    if (from.kind == Location::Kind::Node) p.start_node = from.index;
    if (to.kind == Location::Kind::Node) p.end_node = to.index;
  } else {
    p.x0 = from.offset;
    p.dir = to.offset > from.offset ? 1 : -1;
  }
  return p;
}

void finish_bounds(Piece& p) {
  p.t0d = to_double(p.t0);
  p.t1d = p.t1 ? to_double(*p.t1) : std::numeric_limits<double>::infinity();
  if (!p.at_node) {
    double x = to_double(p.x0);
    double end = p.t1 ? x + p.dir * (p.t1d - p.t0d) : x;
    p.lo = std::min(x, end);
    p.hi = std::max(x, end);
  }
}

Scalar coord_at(const Piece& p, const Scalar& t) { return p.x0 + p.dir * (t - p.t0); }

Location piece_location(const Configuration& arena, const Piece& p, const Scalar& t) {
  if (p.at_node) return Location::node(p.node);
  Scalar x = coord_at(p, t);
  if (const Network* net = as_network(arena)) return edge_point(*net, p.track, x);
  return Location::line(x);
}

bool later(const std::optional<Scalar>& a, const std::optional<Scalar>& b) {
  if (!a) return b.has_value();
  if (!b) return false;
  return *a > *b;
}

bool within(const Scalar& t, const Scalar& lo, const std::optional<Scalar>& hi) {
  return t >= lo && (!hi || t <= *hi);
}

struct Contact {
  int a = 0, b = 0;
  Scalar ts;
  std::optional<Scalar> te;
  Location where;
};

std::optional<Contact> touch(const Configuration& arena, const Piece& A, const Piece& B) {
  Scalar lo = powercast::max(A.t0, B.t0);
  std::optional<Scalar> hi = later(A.t1, B.t1) ? B.t1 : A.t1;
  if (hi && *hi < lo) return std::nullopt;

  auto instant = [&](const Scalar& t) -> std::optional<Contact> {
    if (!within(t, lo, hi)) return std::nullopt;
    return Contact{0, 0, t, t, piece_location(arena, A, t)};
  };

  if (A.at_node && B.at_node) {
    if (A.node != B.node) return std::nullopt;
    return Contact{0, 0, lo, hi, Location::node(A.node)};
  }
  if (A.at_node || B.at_node) {
    const Piece& N = A.at_node ? A : B;
    const Piece& T = A.at_node ? B : A;
    if (T.start_node == N.node) {
      if (auto c = instant(T.t0)) return c;
    }
    if (T.end_node == N.node && T.t1) {
      if (auto c = instant(*T.t1)) return c;
    }
    return std::nullopt;
  }
  if (A.track == B.track) {
    Scalar d = coord_at(A, lo) - coord_at(B, lo);
    int slope = A.dir - B.dir;
    if (slope == 0) {
      if (d != 0) return std::nullopt;
      return Contact{0, 0, lo, hi, piece_location(arena, A, lo)};
    }
    return instant(lo - d / slope);
  }
  // Different edges meet only at a shared node at the same instant.
  std::vector<std::pair<std::size_t, Scalar>> ends_a, ends_b;
  if (A.start_node) ends_a.emplace_back(*A.start_node, A.t0);
  if (A.end_node && A.t1) ends_a.emplace_back(*A.end_node, *A.t1);
  if (B.start_node) ends_b.emplace_back(*B.start_node, B.t0);
  if (B.end_node && B.t1) ends_b.emplace_back(*B.end_node, *B.t1);
  for (const auto& [na, ta] : ends_a) {
    for (const auto& [nb, tb] : ends_b) {
      if (na == nb && ta == tb) {
        if (auto c = instant(ta)) return c;
      }
    }
  }
  return std::nullopt;
}

bool may_touch(const Piece& A, const Piece& B) {
  const double slack = 1e-9;
  auto tol = [&](double v) { return slack * (1.0 + std::abs(v)); };
  if (A.t1d + tol(A.t1d) < B.t0d || B.t1d + tol(B.t1d) < A.t0d) return false;
  if (A.at_node && B.at_node) return A.node == B.node;
  if (A.at_node || B.at_node) {
    const Piece& N = A.at_node ? A : B;
    const Piece& T = A.at_node ? B : A;
    return T.start_node == N.node || T.end_node == N.node;
  }
  if (A.track == B.track) return !(A.hi + tol(A.hi) < B.lo || B.hi + tol(B.hi) < A.lo);
  auto shares = [](const std::optional<std::size_t>& x, const Piece& P) {
    return x && (P.start_node == x || P.end_node == x);
  };
  return shares(A.start_node, B) || shares(A.end_node, B);
}

struct TimePlaceLess {
  bool operator()(const std::pair<Scalar, Location>& x, const std::pair<Scalar, Location>& y) const {
    if (x.first != y.first) return x.first < y.first;
    return x.second < y.second;
  }
};

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

struct Trajectories {
  std::vector<std::vector<Piece>> pieces;
  std::vector<Scalar> power;
};

Trajectories build(const Configuration& arena, const Strategy& s, const std::optional<Scalar>& budget) {
  const std::size_t k = agent_count(arena);
  std::vector<std::vector<const TimedMove*>> per_agent(k);
  for (const auto& m : s.moves) {
    if (m.agent < 1 || static_cast<std::size_t>(m.agent) > k) {
      throw StrategyError("move for unknown agent " + std::to_string(m.agent));
    }
    per_agent[static_cast<std::size_t>(m.agent - 1)].push_back(&m);
  }
  Trajectories tr;
  tr.pieces.resize(k);
  tr.power.assign(k, Scalar(0));
  std::optional<std::pair<Scalar, int>> breach;
  for (std::size_t a = 0; a < k; ++a) {
    auto& moves = per_agent[a];
    std::stable_sort(moves.begin(), moves.end(),
                     [](const TimedMove* x, const TimedMove* y) { return x->depart < y->depart; });
    const int id = static_cast<int>(a + 1);
    Location here = initial_location(arena, id);
    Scalar now(0);
    for (const TimedMove* m : moves) {
      Location from = canonical(arena, m->from);
      Location to = canonical(arena, m->to);
      if (!(from == here)) throw StrategyError("agent " + std::to_string(id) + " move does not start where it stands");
      if (m->depart < now) throw StrategyError("agent " + std::to_string(id) + " moves overlap in time");
      Scalar len = move_length(arena, from, to);
      if (m->depart > now) tr.pieces[a].push_back(stationary(arena, here, now, m->depart));
      if (len > 0) {
        if (budget && tr.power[a] <= *budget && tr.power[a] + len > *budget) {
          Scalar t = m->depart + (*budget - tr.power[a]);
          if (!breach || t < breach->first) breach = std::make_pair(t, id);
        }
        tr.pieces[a].push_back(moving(arena, from, to, m->depart, len));
        tr.power[a] += len;
      }
      here = to;
      now = m->depart + len;
    }
    tr.pieces[a].push_back(stationary(arena, here, now, std::nullopt));
    for (auto& p : tr.pieces[a]) finish_bounds(p);
  }
  if (breach) throw BudgetExceeded(breach->second, breach->first);
  return tr;
}

Location location_at(const Configuration& arena, const std::vector<Piece>& ps, const Scalar& t) {
  // last piece starting at or before t
  std::size_t lo = 0, hi = ps.size();
  while (hi - lo > 1) {
    std::size_t mid = (lo + hi) / 2;
    if (ps[mid].t0 <= t) lo = mid;
    else hi = mid;
  }
  return piece_location(arena, ps[lo], t);
}

}  // namespace

Location initial_location(const Configuration& arena, int id) {
  if (const Network* net = as_network(arena)) return Location::node(net->agent_node(id));
  return Location::line(std::get<LineConfig>(arena).pos(static_cast<std::size_t>(id)));
}

std::size_t agent_count(const Configuration& arena) {
  if (const Network* net = as_network(arena)) return net->agent_count();
  return std::get<LineConfig>(arena).size();
}

Scalar move_length(const Configuration& arena, const Location& from, const Location& to) {
  Location a = canonical(arena, from);
  Location b = canonical(arena, to);
  if (a == b) return Scalar(0);
  const Network* net = as_network(arena);
  if (!net) return powercast::abs(b.offset - a.offset);
  Span sp = graph_span(*net, a, b);
  return powercast::abs(sp.x1 - sp.x0);
}

Trace simulate(const Configuration& arena, const Strategy& s, const std::optional<Scalar>& budget) {
  const std::size_t k = agent_count(arena);
  Trajectories tj = build(arena, s, budget);

  std::vector<Contact> contacts;
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = a + 1; b < k; ++b) {
      const auto& pa = tj.pieces[a];
      const auto& pb = tj.pieces[b];
      std::vector<Contact> pair;
      std::size_t i = 0, j = 0;
      while (i < pa.size() && j < pb.size()) {
        if (may_touch(pa[i], pb[j])) {
          if (auto c = touch(arena, pa[i], pb[j])) pair.push_back(std::move(*c));
        }
        if (later(pa[i].t1, pb[j].t1)) ++j;
        else ++i;
      }
      std::sort(pair.begin(), pair.end(), [](const Contact& x, const Contact& y) { return x.ts < y.ts; });
      // Merge contacts that overlap in time into one continuous meeting.
      for (auto& c : pair) {
        c.a = static_cast<int>(a + 1);
        c.b = static_cast<int>(b + 1);
        if (!contacts.empty() && contacts.back().a == c.a && contacts.back().b == c.b &&
            (!contacts.back().te || c.ts <= *contacts.back().te)) {
          if (later(c.te, contacts.back().te)) contacts.back().te = c.te;
          continue;
        }
        contacts.push_back(std::move(c));
      }
    }
  }

  Trace tr;
  tr.agents = k;
  tr.power = tj.power;

  // Meetings: contacts starting at the same time and place, grouped transitively.
  std::map<std::pair<Scalar, Location>, std::vector<std::size_t>, TimePlaceLess> starts;
  for (std::size_t i = 0; i < contacts.size(); ++i) starts[{contacts[i].ts, contacts[i].where}].push_back(i);
  for (const auto& [key, ids] : starts) {
    UnionFind uf(k);
    std::vector<bool> seen(k, false);
    for (std::size_t i : ids) {
      uf.unite(static_cast<std::size_t>(contacts[i].a - 1), static_cast<std::size_t>(contacts[i].b - 1));
      seen[static_cast<std::size_t>(contacts[i].a - 1)] = seen[static_cast<std::size_t>(contacts[i].b - 1)] = true;
    }
    std::map<std::size_t, std::vector<int>> groups;
    for (std::size_t x = 0; x < k; ++x) {
      if (seen[x]) groups[uf.find(x)].push_back(static_cast<int>(x + 1));
    }
    for (auto& [root, members] : groups) tr.meetings.push_back({key.first, key.second, std::move(members)});
  }

  // Information spreads through every contact active at an event time.
  std::vector<AgentSet> info(k, AgentSet(k));
  for (std::size_t a = 0; a < k; ++a) {
    info[a].insert(static_cast<int>(a + 1));
    tr.timeline.push_back({Scalar(0), static_cast<int>(a + 1), location_at(arena, tj.pieces[a], Scalar(0)),
                           info[a].ids()});
  }
  std::vector<std::size_t> order(contacts.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return contacts[x].ts < contacts[y].ts; });
  std::vector<std::size_t> active;
  std::size_t next = 0;
  while (next < order.size()) {
    const Scalar T = contacts[order[next]].ts;
    while (next < order.size() && contacts[order[next]].ts == T) active.push_back(order[next++]);
    std::erase_if(active, [&](std::size_t i) { return contacts[i].te && *contacts[i].te < T; });
    UnionFind uf(k);
    for (std::size_t i : active) {
      uf.unite(static_cast<std::size_t>(contacts[i].a - 1), static_cast<std::size_t>(contacts[i].b - 1));
    }
    std::map<std::size_t, AgentSet> merged;
    for (std::size_t i : active) {
      for (int who : {contacts[i].a, contacts[i].b}) {
        std::size_t x = static_cast<std::size_t>(who - 1);
        auto [it, fresh] = merged.try_emplace(uf.find(x), AgentSet(k));
        (void)fresh;
        it->second.merge(info[x]);
      }
    }
    std::vector<bool> done(k, false);
    for (std::size_t i : active) {
      for (int who : {contacts[i].a, contacts[i].b}) {
        std::size_t x = static_cast<std::size_t>(who - 1);
        if (done[x]) continue;
        done[x] = true;
        if (info[x].merge(merged.at(uf.find(x)))) {
          tr.timeline.push_back({T, who, location_at(arena, tj.pieces[x], T), info[x].ids()});
        }
      }
    }
  }
  std::stable_sort(tr.timeline.begin(), tr.timeline.end(), [](const InfoEvent& x, const InfoEvent& y) {
    if (x.time != y.time) return x.time < y.time;
    return x.agent < y.agent;
  });
  tr.final_info = std::move(info);
  for (std::size_t a = 0; a < k; ++a) {
    const Piece& last = tj.pieces[a].back();
    tr.final_location.push_back(piece_location(arena, last, last.t0));
  }
  return tr;
}

ConvergecastWitness verify_convergecast(const Trace& tr) {
  ConvergecastWitness w;
  for (const auto& ev : tr.timeline) {
    if (ev.info.size() == tr.agents) {
      w.ok = true;
      w.agent = ev.agent;
      w.time = ev.time;
      w.where = ev.where;
      return w;
    }
  }
  for (std::size_t a = 0; a < tr.final_info.size(); ++a) {
    bool dominated = false;
    for (std::size_t b = 0; b < tr.final_info.size() && !dominated; ++b) {
      if (a == b) continue;
      const auto& x = tr.final_info[a];
      const auto& y = tr.final_info[b];
      bool sub = x.subset_of(y);
      dominated = sub && (!(x == y) || b < a);
    }
    if (!dominated) w.maximal_sets.push_back(tr.final_info[a].ids());
  }
  return w;
}

BroadcastCheck verify_broadcast(const Trace& tr, int source) {
  BroadcastCheck out;
  for (std::size_t a = 0; a < tr.final_info.size(); ++a) {
    if (!tr.final_info[a].contains(source)) out.uninformed.push_back(static_cast<int>(a + 1));
  }
  out.ok = out.uninformed.empty();
  return out;
}

PowerSummary max_power_used(const Trace& tr) {
  PowerSummary out;
  out.per_agent = tr.power;
  out.max = 0;
  for (const auto& p : tr.power) out.max = powercast::max(out.max, p);
  return out;
}

Scalar makespan(const Configuration& arena, const Strategy& s) {
  Scalar end(0);
  for (const auto& m : s.moves) end = powercast::max(end, m.depart + move_length(arena, m.from, m.to));
  return end;
}

}  // namespace powercast
