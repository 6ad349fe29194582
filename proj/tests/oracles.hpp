#pragma once
// Independent reference computations used only by the tests.

#include "powercast/model.hpp"
#include "powercast/strategy.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

namespace oracle {

using powercast::Scalar;

// Push relay rightwards through agents 1..i, written from the recurrence alone.
inline std::optional<Scalar> reach_lr(const std::vector<Scalar>& pos, std::size_t i, const Scalar& P) {
  Scalar f = pos[0] + P;
  for (std::size_t j = 2; j <= i; ++j) {
    const Scalar& x = pos[j - 1];
    if (f + P < x) return std::nullopt;  // agent j cannot walk back far enough
    Scalar b = f < x ? f : x;
    f = 2 * b + P - x;
  }
  return f;
}

inline std::vector<Scalar> mirrored(const std::vector<Scalar>& pos) {
  std::vector<Scalar> m;
  for (auto it = pos.rbegin(); it != pos.rend(); ++it) m.push_back(-*it);
  return m;
}

// Leftmost point reached by agents i..n.
inline std::optional<Scalar> reach_rl(const std::vector<Scalar>& pos, std::size_t i, const Scalar& P) {
  auto r = reach_lr(mirrored(pos), pos.size() + 1 - i, P);
  if (!r) return std::nullopt;
  return Scalar(-*r);
}

inline std::optional<std::size_t> decide(const std::vector<Scalar>& pos, const Scalar& P) {
  for (std::size_t j = 1; j < pos.size(); ++j) {
    auto l = reach_lr(pos, j, P);
    auto r = reach_rl(pos, j + 1, P);
    if (l && r && *l >= *r) return j;
  }
  return std::nullopt;
}

// Shrinks [lo, hi] (pred(lo) false, pred(hi) true) below `tol`.
inline std::pair<Scalar, Scalar> bisect(const std::function<bool(const Scalar&)>& pred, Scalar lo, Scalar hi,
                                        const Scalar& tol) {
  while (hi - lo > tol) {
    Scalar mid = (lo + hi) / 2;
    if (pred(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return {lo, hi};
}

// Convergecast optimum bracketed by bisection on the oracle decision.
inline std::pair<Scalar, Scalar> convergecast_bracket(const std::vector<Scalar>& pos, const Scalar& tol) {
  Scalar hi = pos.back() - pos.front();
  return bisect([&](const Scalar& P) { return decide(pos, P).has_value(); }, Scalar(0), hi, tol);
}

// TH_LR(p): least P with reach_lr(p-1, P) >= Pos[p].
inline std::pair<Scalar, Scalar> threshold_lr(const std::vector<Scalar>& pos, std::size_t p, const Scalar& tol) {
  auto ok = [&](const Scalar& P) {
    auto r = reach_lr(pos, p - 1, P);
    return r && *r >= pos[p - 1];
  };
  return bisect(ok, Scalar(0), pos[p - 1] - pos[0], tol);
}

// {p <= r : every q in (p, r] has a larger threshold}, from bracketed thresholds.
inline std::vector<std::size_t> dominant_indices(const std::vector<Scalar>& th, std::size_t r) {
  std::vector<std::size_t> out;
  for (std::size_t p = 1; p <= r; ++p) {
    bool keep = true;
    for (std::size_t q = p + 1; q <= r; ++q) keep = keep && th[q - 1] > th[p - 1];
    if (keep) out.push_back(p);
  }
  return out;
}

// Final information sets by time-respecting reachability over a meeting list.
inline std::vector<std::set<int>> closure_from_meetings(std::size_t k, const std::vector<powercast::Meeting>& ms) {
  std::vector<std::size_t> order(ms.size());
  for (std::size_t i = 0; i < ms.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return ms[a].time < ms[b].time; });
  std::vector<std::set<int>> info(k);
  for (std::size_t a = 0; a < k; ++a) info[a].insert(static_cast<int>(a + 1));
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j < order.size() && ms[order[j]].time == ms[order[i]].time) ++j;
    // Same-time meetings can relay through each other: repeat until nothing changes.
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t x = i; x < j; ++x) {
        std::set<int> all;
        for (int a : ms[order[x]].agents) all.insert(info[a - 1].begin(), info[a - 1].end());
        for (int a : ms[order[x]].agents) {
          if (info[a - 1].size() != all.size()) {
            info[a - 1] = all;
            changed = true;
          }
        }
      }
    }
    i = j;
  }
  return info;
}

// Position of an agent on the line at time t, from its own moves.
inline Scalar line_position(const powercast::Strategy& s, int agent, const Scalar& start, const Scalar& t) {
  Scalar x = start;
  for (const auto& m : s.moves) {
    if (m.agent != agent || m.depart > t) continue;
    Scalar len = powercast::abs(m.to.offset - m.from.offset);
    Scalar dir = m.to.offset > m.from.offset ? Scalar(1) : Scalar(-1);
    if (t >= m.depart + len) {
      x = m.to.offset;
    } else {
      x = m.from.offset + dir * (t - m.depart);
    }
  }
  return x;
}

// First contact time of two agents on the line, testing every piece boundary and the
// zero of the gap inside each piece.
inline std::optional<Scalar> first_contact(const powercast::Strategy& s, const powercast::LineConfig& c, int a, int b) {
  std::set<Scalar> cuts{Scalar(0)};
  for (const auto& m : s.moves) {
    if (m.agent != a && m.agent != b) continue;
    cuts.insert(m.depart);
    cuts.insert(m.depart + powercast::abs(m.to.offset - m.from.offset));
  }
  auto gap = [&](const Scalar& t) -> Scalar { return line_position(s, a, c.pos(a), t) - line_position(s, b, c.pos(b), t); };
  std::vector<Scalar> ts(cuts.begin(), cuts.end());
  for (std::size_t i = 0; i < ts.size(); ++i) {
    Scalar g0 = gap(ts[i]);
    if (g0 == 0) return ts[i];
    if (i + 1 < ts.size()) {
      Scalar g1 = gap(ts[i + 1]);
      if ((g0 < 0) != (g1 < 0) && g1 != 0) return ts[i] + (ts[i + 1] - ts[i]) * g0 / (g0 - g1);
    }
  }
  return std::nullopt;
}

// Time-stepped rerun of the saturation protocol in doubles. Exact on integer weights for
// dyadic steps, since every event time is then a multiple of the step or half of it.
struct TickResult {
  bool achieved = false;
  std::vector<double> power;
};

inline TickResult tick_unknown_tree(const powercast::Network& t, double budget, double dt) {
  enum { Wait, Move, Stop };
  struct A {
    int mode = Wait;
    bool on_edge = false;
    std::size_t node = 0, edge = 0, from = 0, to = 0, entry = 0;
    double off_u = 0, trav = 0, power = 0, arrival = 0, depart = 0;
    std::set<int> info;
  };
  const std::size_t k = t.agent_count();
  std::vector<A> ag(k);
  std::vector<std::set<std::size_t>> used(t.node_count());
  for (std::size_t i = 0; i < k; ++i) {
    ag[i].node = t.agent_node(static_cast<int>(i + 1));
    ag[i].info.insert(static_cast<int>(i + 1));
  }
  auto w = [&](std::size_t e) { return t.edge(e).w.get_d(); };
  auto pos_u = [&](const A& a) { return a.from == t.edge(a.edge).u ? a.trav : w(a.edge) - a.trav; };
  const double eps = 1e-12;

  auto exchange = [&]() {
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < k; ++j) {
        if (i == j || ag[i].mode == Move || ag[j].mode == Move) continue;
        bool same = ag[i].on_edge == ag[j].on_edge &&
                    (ag[i].on_edge ? ag[i].edge == ag[j].edge && std::abs(ag[i].off_u - ag[j].off_u) < 1e-9
                                   : ag[i].node == ag[j].node);
        if (same) ag[i].info.insert(ag[j].info.begin(), ag[j].info.end());
      }
    }
  };
  auto evaluate = [&](const std::set<std::size_t>& nodes, double now) {
    for (std::size_t v : nodes) {
      std::vector<std::size_t> here;
      for (std::size_t i = 0; i < k; ++i) {
        if (ag[i].mode == Wait && !ag[i].on_edge && ag[i].node == v) here.push_back(i);
      }
      if (here.empty()) continue;
      std::size_t free_count = t.degree(v) - used[v].size();
      if (free_count >= 2) continue;
      if (free_count == 0) {
        for (auto i : here) ag[i].mode = Stop;
        continue;
      }
      std::size_t best = here[0];
      for (auto i : here) {
        const A& x = ag[i];
        const A& y = ag[best];
        if (std::tie(x.power, x.entry, x.arrival) < std::tie(y.power, y.entry, y.arrival)) best = i;
      }
      for (auto i : here) {
        if (i != best) ag[i].mode = Stop;
      }
      std::size_t port = 0;
      while (used[v].count(port)) ++port;
      A& a = ag[best];
      if (a.power >= budget - eps) {
        a.mode = Stop;
        continue;
      }
      a.mode = Move;
      a.from = v;
      a.edge = t.ports(v)[port].edge;
      a.to = t.ports(v)[port].neighbor;
      a.trav = 0;
      a.depart = now;
    }
  };

  std::set<std::size_t> start;
  for (const auto& a : ag) start.insert(a.node);
  exchange();
  evaluate(start, 0);
  double now = 0;
  while (std::any_of(ag.begin(), ag.end(), [](const A& a) { return a.mode == Move; })) {
    now += dt;
    for (auto& a : ag) {
      if (a.mode == Move) a.trav = now - a.depart;
    }
    // Earliest event of each moving agent inside this tick: (time, kind, other).
    std::vector<std::tuple<double, int, std::size_t>> ev(k, {1e300, 9, 0});
    for (std::size_t i = 0; i < k; ++i) {
      A& a = ag[i];
      if (a.mode != Move) continue;
      auto consider = [&](double when, int kind, std::size_t other) {
        if (when <= now + eps && std::make_tuple(when, kind, other) < ev[i]) ev[i] = {when, kind, other};
      };
      double L = w(a.edge);
      consider(a.depart + L, 3, 0);
      // running dry exactly on arrival still counts as arriving
      if (budget - a.power < L) consider(a.depart + (budget - a.power), 2, 0);
      for (std::size_t j = 0; j < k; ++j) {
        if (j == i) continue;
        const A& b = ag[j];
        if (b.mode == Move && b.edge == a.edge && b.from == a.to) {
          consider((L + a.depart + b.depart) / 2, 0, j);
        } else if (b.mode != Move && b.on_edge && b.edge == a.edge) {
          double along = a.from == t.edge(a.edge).u ? b.off_u : L - b.off_u;
          consider(a.depart + along, 1, j);
        }
      }
    }
    std::set<std::size_t> arrived;
    for (std::size_t i = 0; i < k; ++i) {
      auto [when, kind, other] = ev[i];
      if (kind == 9) continue;
      A& a = ag[i];
      double moved = when - a.depart;
      a.trav = moved;
      if (kind == 3) {
        a.power += moved;
        a.mode = Wait;
        a.node = a.to;
        a.on_edge = false;
        a.arrival = when;
        const auto& ps = t.ports(a.node);
        for (std::size_t p = 0; p < ps.size(); ++p) {
          if (ps[p].edge == a.edge) a.entry = p;
        }
        used[a.node].insert(a.entry);
        arrived.insert(a.node);
      } else {
        a.off_u = pos_u(a);
        a.power += moved;
        a.on_edge = true;
        a.mode = Stop;
      }
    }
    exchange();
    // Departures happen at the moment of the arrivals that triggered them.
    double stamp = now;
    for (std::size_t i = 0; i < k; ++i) {
      if (std::get<1>(ev[i]) == 3) stamp = std::min(stamp, std::get<0>(ev[i]));
    }
    evaluate(arrived, stamp);
    if (now > 1e7) break;
  }
  TickResult r;
  for (const auto& a : ag) {
    r.power.push_back(a.power);
    if (a.info.size() == k) r.achieved = true;
  }
  return r;
}

}  // namespace oracle
