#include "powercast/line_broadcast.hpp"

#include <stdexcept>
#include <string>

namespace powercast {

namespace {

void check_source(const LineConfig& c, std::size_t k) {
  if (k < 1 || k > c.size()) throw std::out_of_range("source index out of range");
}

struct Frontiers {
  bool active = true;
  std::optional<Scalar> x;
  std::optional<Scalar> y;
};

Frontiers frontiers(const LineConfig& c, const ActivationProfile& prof, std::size_t k, const Scalar& P) {
  Frontiers fr;
  if (k > 1) {
    if (P < prof.a_lr[k - 2]) fr.active = false;
    else fr.x = prof.reach_lr(k - 1, P);
  }
  if (k < c.size()) {
    if (P < prof.a_rl[k]) fr.active = false;
    else fr.y = prof.reach_rl(k + 1, P);
  }
  return fr;
}

}  // namespace

ActivationProfile activation_profiles(const LineConfig& c, std::size_t k) {
  check_source(c, k);
  const std::size_t n = c.size();
  ActivationProfile prof;
  prof.source = k;
  prof.a_lr.assign(n, Scalar(0));
  prof.r_lr.assign(n, Scalar(0));
  prof.a_rl.assign(n, Scalar(0));
  prof.r_rl.assign(n, Scalar(0));
  if (k > 1) {
    prof.r_lr[0] = c.pos(1);
    for (std::size_t p = 1; p + 1 < k; ++p) {
      const Scalar a = prof.a_lr[p - 1];
      const Scalar r = prof.r_lr[p - 1];
      const Scalar& next = c.pos(p + 1);
      if (next - a <= r) {
        prof.a_lr[p] = a;
        prof.r_lr[p] = (next + a + r) / 2;
      } else {
        prof.a_lr[p] = a + (next - a - r) / 2;
        prof.r_lr[p] = next;
      }
    }
  }
  if (k < n) {
    prof.r_rl[n - 1] = c.pos(n);
    for (std::size_t p = n; p > k + 1; --p) {
      const Scalar a = prof.a_rl[p - 1];
      const Scalar r = prof.r_rl[p - 1];
      const Scalar& next = c.pos(p - 1);
      if (r <= next + a) {
        prof.a_rl[p - 2] = a;
        prof.r_rl[p - 2] = (r + next - a) / 2;
      } else {
        prof.a_rl[p - 2] = a + (r - a - next) / 2;
        prof.r_rl[p - 2] = next;
      }
    }
  }
  return prof;
}

SourceRoute source_route(const Scalar& pos, const std::optional<Scalar>& x, const std::optional<Scalar>& y) {
  SourceRoute route;
  if (x && y) {
    Scalar xe = powercast::min(*x, pos);
    Scalar ye = powercast::max(*y, pos);
    Scalar left_first = (pos - xe) + (ye - xe);
    Scalar right_first = (ye - pos) + (ye - xe);
    if (left_first <= right_first) {
      route = {left_first, Turn::FirstLeft, xe, ye};
    } else {
      route = {right_first, Turn::FirstRight, ye, xe};
    }
  } else if (x) {
    Scalar xe = powercast::min(*x, pos);
    route = {pos - xe, Turn::FirstLeft, xe, xe};
  } else if (y) {
    Scalar ye = powercast::max(*y, pos);
    route = {ye - pos, Turn::FirstRight, ye, ye};
  } else {
    route = {Scalar(0), Turn::FirstLeft, pos, pos};
  }
  return route;
}

bool decide_broadcast(const LineConfig& c, std::size_t k, const Scalar& P) {
  check_source(c, k);
  if (c.size() == 1) return true;
  if (P < 0) return false;
  Frontiers fr = frontiers(c, activation_profiles(c, k), k, P);
  if (!fr.active) return false;
  return source_route(c.pos(k), fr.x, fr.y).cost <= P;
}

bool turning_point_test(const LineConfig& c, std::size_t k, const Scalar& P) {
  check_source(c, k);
  if (c.size() == 1) return true;
  Frontiers fr = frontiers(c, activation_profiles(c, k), k, P);
  if (!fr.active) return false;
  const Scalar& pos = c.pos(k);
  if (fr.x && fr.y) {
    return powercast::abs(2 * *fr.x - pos - *fr.y) <= P || powercast::abs(2 * *fr.y - pos - *fr.x) <= P;
  }
  return source_route(pos, fr.x, fr.y).cost <= P;
}

BroadcastResult compute_optimal_broadcast(const LineConfig& c, std::size_t k) {
  check_source(c, k);
  const std::size_t n = c.size();
  BroadcastResult out;
  if (n == 1) {
    out.power = 0;
    out.plan = broadcast_plan(c, k, out.power);
    return out;
  }
  ActivationProfile prof = activation_profiles(c, k);
  Scalar Q(0);
  if (k > 1) Q = powercast::max(Q, prof.a_lr[k - 2]);
  if (k < n) Q = powercast::max(Q, prof.a_rl[k]);
  Frontiers fr = frontiers(c, prof, k, Q);
  const Scalar& pos = c.pos(k);
  Scalar g = source_route(pos, fr.x, fr.y).cost - Q;

  // Frontiers move by one unit per unit of power. With both sides pending the source's
  // walk shrinks by 3 per unit, so cost - P shrinks by 4; with one side pending, by 2.
  Scalar delta(0);
  if (g > 0) {
    bool left_done = !fr.x || *fr.x >= pos;
    bool right_done = !fr.y || *fr.y <= pos;
    if (left_done || right_done) {
      delta = g / 2;
    } else {
      Scalar dm = powercast::min(pos - *fr.x, *fr.y - pos);
      delta = g <= 4 * dm ? Scalar(g / 4) : Scalar(dm + (g - 4 * dm) / 2);
    }
  }
  out.power = Q + delta;
  out.plan = broadcast_plan(c, k, out.power);
  return out;
}

std::pair<Scalar, Scalar> bisection_oracle_broadcast(const LineConfig& c, std::size_t k, const Scalar& tol) {
  check_source(c, k);
  if (c.size() < 2) throw std::invalid_argument("bisection needs at least two agents");
  if (tol <= 0) throw std::invalid_argument("tolerance must be positive");
  Scalar lo(0), hi(1);
  while (!decide_broadcast(c, k, hi)) {
    lo = hi;
    hi *= 2;
  }
  while (hi - lo > tol) {
    Scalar mid = (lo + hi) / 2;
    if (decide_broadcast(c, k, mid)) hi = mid;
    else lo = mid;
  }
  return {lo, hi};
}

RegularBcastPlan broadcast_plan(const LineConfig& c, std::size_t k, const Scalar& P) {
  check_source(c, k);
  const std::size_t n = c.size();
  RegularBcastPlan plan;
  plan.P = P;
  plan.source = k;
  plan.b.assign(n, Scalar(0));
  plan.f.assign(n, Scalar(0));
  if (k > 1) {
    plan.b[0] = plan.f[0] = c.pos(1) + P;
    for (std::size_t i = 2; i < k; ++i) {
      plan.f[i - 1] = plan.b[i - 2];
      plan.b[i - 1] = (plan.f[i - 1] + c.pos(i) + P) / 2;
    }
  }
  if (k < n) {
    plan.b[n - 1] = plan.f[n - 1] = c.pos(n) - P;
    for (std::size_t i = n - 1; i > k; --i) {
      plan.f[i - 1] = plan.b[i];
      plan.b[i - 1] = (plan.f[i - 1] + c.pos(i) - P) / 2;
    }
  }
  std::optional<Scalar> x, y;
  if (k > 1) x = plan.b[k - 2];
  if (k < n) y = plan.b[k];
  SourceRoute route = source_route(c.pos(k), x, y);
  plan.turn = route.turn;
  plan.first = route.first;
  plan.second = route.second;
  plan.b[k - 1] = route.first;
  plan.f[k - 1] = route.second;
  return plan;
}

void check_broadcast_plan(const LineConfig& c, const RegularBcastPlan& plan) {
  const std::size_t n = c.size();
  const std::size_t k = plan.source;
  const Scalar& P = plan.P;
  auto fail = [](const std::string& what, std::size_t i) {
    throw std::invalid_argument(what + " (agent " + std::to_string(i) + ")");
  };
  if (k < 1 || k > n || plan.b.size() != n || plan.f.size() != n) throw std::invalid_argument("malformed plan");
  if (k > 1) {
    if (plan.b[0] != c.pos(1) + P || plan.f[0] != plan.b[0]) fail("leftmost pickup must be Pos+P", 1);
  }
  for (std::size_t i = 2; i < k; ++i) {
    if (plan.f[i - 1] != plan.b[i - 2] || plan.b[i - 1] != (plan.f[i - 1] + c.pos(i) + P) / 2) {
      fail("left relay condition violated", i);
    }
    if (plan.f[i - 1] < c.pos(i) - P) fail("left agent not activated", i);
  }
  if (k < n) {
    if (plan.b[n - 1] != c.pos(n) - P || plan.f[n - 1] != plan.b[n - 1]) fail("rightmost pickup must be Pos-P", n);
  }
  for (std::size_t i = n - 1; i > k; --i) {
    if (plan.f[i - 1] != plan.b[i] || plan.b[i - 1] != (plan.f[i - 1] + c.pos(i) - P) / 2) {
      fail("right relay condition violated", i);
    }
    if (plan.f[i - 1] > c.pos(i) + P) fail("right agent not activated", i);
  }
  if (n == 1) return;
  std::optional<Scalar> x, y;
  if (k > 1) x = plan.b[k - 2];
  if (k < n) y = plan.b[k];
  if (k > 1 && *x < c.pos(k - 1)) fail("source-adjacent left agent not activated", k - 1);
  if (k < n && *y > c.pos(k + 1)) fail("source-adjacent right agent not activated", k + 1);
  SourceRoute route = source_route(c.pos(k), x, y);
  if (route.first != plan.first || route.second != plan.second) fail("source route does not visit both frontiers", k);
  if (route.cost > P) fail("source cannot reach the frontiers", k);
}

Strategy emit_broadcast_strategy(const LineConfig& c, const RegularBcastPlan& plan) {
  check_broadcast_plan(c, plan);
  const std::size_t n = c.size();
  const std::size_t k = plan.source;
  Strategy s;
  if (n == 1) return s;
  const Scalar& pos = c.pos(k);

  // Pickup points; the agents beside the source stop at the source when the frontier passes it.
  std::vector<Scalar> pick = plan.b;
  if (k > 1) pick[k - 2] = powercast::min(plan.b[k - 2], pos);
  if (k < n) pick[k] = powercast::max(plan.b[k], pos);
  std::vector<Scalar> arrive(n);
  for (std::size_t i = 1; i <= n; ++i) arrive[i - 1] = powercast::abs(pick[i - 1] - c.pos(i));

  std::vector<Scalar> informed(n);
  const int src = static_cast<int>(k);
  if (plan.first != pos) s.moves.push_back({src, Scalar(0), Location::line(pos), Location::line(plan.first)});
  Scalar at_first = powercast::abs(plan.first - pos);
  const bool two_sided = k > 1 && k < n;
  const std::size_t r1 = plan.turn == Turn::FirstLeft ? k - 1 : k + 1;
  informed[r1 - 1] = powercast::max(at_first, arrive[r1 - 1]);
  if (two_sided) {
    const std::size_t r2 = plan.turn == Turn::FirstLeft ? k + 1 : k - 1;
    Scalar leave = informed[r1 - 1];
    if (plan.second != plan.first) {
      s.moves.push_back({src, leave, Location::line(plan.first), Location::line(plan.second)});
    }
    informed[r2 - 1] = powercast::max(leave + powercast::abs(plan.second - plan.first), arrive[r2 - 1]);
  }
  if (k > 1) {
    for (std::size_t i = k - 1; i >= 2; --i) {
      informed[i - 2] = powercast::max(informed[i - 1] + (pick[i - 1] - pick[i - 2]), arrive[i - 2]);
    }
  }
  for (std::size_t i = k + 1; i < n; ++i) {
    informed[i] = powercast::max(informed[i - 1] + (pick[i] - pick[i - 1]), arrive[i]);
  }
  for (std::size_t i = 1; i <= n; ++i) {
    if (i == k) continue;
    const int id = static_cast<int>(i);
    if (pick[i - 1] != c.pos(i)) {
      s.moves.push_back({id, Scalar(0), Location::line(c.pos(i)), Location::line(pick[i - 1])});
    }
    if (i != 1 && i != n && plan.f[i - 1] != pick[i - 1]) {
      s.moves.push_back({id, informed[i - 1], Location::line(pick[i - 1]), Location::line(plan.f[i - 1])});
    }
  }
  return s;
}

}  // namespace powercast
