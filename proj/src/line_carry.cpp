#include "powercast/line_carry.hpp"

#include <algorithm>

namespace powercast {

namespace {

std::string at(const char* what, std::size_t i) { return std::string(what) + " at agent " + std::to_string(i); }

CarryPlan pull_forward(const LineConfig& c, const Scalar& s, const Scalar& t, const Scalar& P) {
  const std::size_t n = c.size();
  CarryPlan plan;
  plan.power = P;
  plan.b.assign(n, Scalar(0));
  plan.f.assign(n, Scalar(0));
  plan.feasible = true;
  std::string first_failure;

  Scalar f = t;
  for (std::size_t i = n; i >= 1; --i) {
    Scalar b = (f + c.pos(i) - P) / 2;
    plan.f[i - 1] = f;
    plan.b[i - 1] = b;
    if (first_failure.empty()) {
      if (b > c.pos(i)) first_failure = at("b_i > Pos[i]", i);
      else if (f < b) first_failure = at("f_i < b_i", i);
    }
    f = b;
  }
  bool start_ok = plan.b[0] <= s;
  if (!first_failure.empty()) {
    plan.feasible = false;
    plan.reason = first_failure;
    plan.intermediate_check_decisive = start_ok;
  } else if (!start_ok) {
    plan.feasible = false;
    plan.reason = "b_1 > s";
  }
  return plan;
}

CarryPlan push_forward(const LineConfig& c, const Scalar& s, const Scalar& t, const Scalar& P) {
  const std::size_t n = c.size();
  CarryPlan plan;
  plan.power = P;
  plan.b.assign(n, Scalar(0));
  plan.f.assign(n, Scalar(0));
  plan.feasible = true;

  Scalar prev_f = s;
  for (std::size_t i = 1; i <= n; ++i) {
    Scalar b = powercast::min(prev_f, c.pos(i));
    Scalar f = P + 2 * b - c.pos(i);
    plan.b[i - 1] = b;
    plan.f[i - 1] = f;
    if (plan.feasible) {
      if (f < b) {
        plan.feasible = false;
        plan.reason = at("f_i < b_i", i);
      } else if (i == 1 && f < s) {
        plan.feasible = false;
        plan.reason = "agent 1 cannot reach s";
      }
    }
    prev_f = f;
  }
  if (plan.feasible && plan.f[n - 1] < t) {
    plan.feasible = false;
    plan.reason = "f_n < t";
  }
  return plan;
}

CarryPlan degenerate(const LineConfig& c, const Scalar& s, const Scalar& P) {
  CarryPlan plan;
  plan.power = P;
  plan.b = c.positions;
  plan.f = c.positions;
  plan.feasible = std::any_of(c.positions.begin(), c.positions.end(),
                              [&](const Scalar& x) { return powercast::abs(x - s) <= P; });
  if (!plan.feasible) plan.reason = "no agent within P of s";
  return plan;
}

CarryPlan mirror_back(CarryPlan plan) {
  std::reverse(plan.b.begin(), plan.b.end());
  std::reverse(plan.f.begin(), plan.f.end());
  for (auto& x : plan.b) x = -x;
  for (auto& x : plan.f) x = -x;
  plan.direction = Direction::Reverse;
  return plan;
}

template <typename Fn>
CarryPlan dispatch(const LineConfig& c, const Scalar& s, const Scalar& t, const Scalar& P, Direction dir,
                   Fn forward) {
  if (c.size() == 0) throw ModelError("empty line");
  if (s == t) {
    CarryPlan plan = degenerate(c, s, P);
    plan.direction = dir;
    return plan;
  }
  if (dir == Direction::Forward) {
    if (!(s < t)) throw ModelError("forward carry needs s < t");
    return forward(c, s, t, P);
  }
  if (!(s > t)) throw ModelError("reverse carry needs s > t");
  return mirror_back(forward(reflect(c), Scalar(-s), Scalar(-t), P));
}

}  // namespace

CarryPlan pull_carry(const LineConfig& c, const Scalar& s, const Scalar& t, const Scalar& P, Direction dir) {
  return dispatch(c, s, t, P, dir, pull_forward);
}

CarryPlan push_carry(const LineConfig& c, const Scalar& s, const Scalar& t, const Scalar& P, Direction dir) {
  return dispatch(c, s, t, P, dir, push_forward);
}

CarryBound min_feasible_source(const LineConfig& c, const Scalar& t, const Scalar& P, Direction dir) {
  if (c.size() == 0) throw ModelError("empty line");
  const LineConfig work = dir == Direction::Forward ? c : reflect(c);
  const Scalar target = dir == Direction::Forward ? t : Scalar(-t);
  // The start check cannot fail with s above t; only per-agent checks decide.
  CarryPlan plan = pull_forward(work, target + 1, target, P);
  CarryBound out;
  out.feasible = plan.feasible || plan.reason == "b_1 > s";
  out.value = plan.b[0];
  if (!out.feasible) out.reason = plan.reason;
  if (dir == Direction::Reverse) out.value = -out.value;
  return out;
}

CarryBound max_feasible_target(const LineConfig& c, const Scalar& s, const Scalar& P, Direction dir) {
  if (c.size() == 0) throw ModelError("empty line");
  const LineConfig work = dir == Direction::Forward ? c : reflect(c);
  const Scalar source = dir == Direction::Forward ? s : Scalar(-s);
  CarryPlan plan = push_forward(work, source, source, P);
  CarryBound out;
  out.value = plan.f.back();
  out.feasible = plan.feasible || plan.reason == "f_n < t";
  if (!out.feasible) out.reason = plan.reason;
  if (dir == Direction::Reverse) out.value = -out.value;
  return out;
}

}  // namespace powercast
