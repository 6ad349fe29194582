#pragma once

#include "powercast/model.hpp"
#include "powercast/strategy.hpp"

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

namespace powercast {

enum class Turn { FirstLeft, FirstRight };

/// Interval plan for broadcast from source k. Agents left of k pick up at b_i and deliver
/// leftwards to f_i; agents right of k mirror that. The source visits `first` then `second`.
struct RegularBcastPlan {
  Scalar P;
  std::size_t source = 1;
  std::vector<Scalar> b;
  std::vector<Scalar> f;
  Turn turn = Turn::FirstLeft;
  Scalar first;
  Scalar second;
};

/// Activation power aB and anchored pickup point rB(., aB(.)) per agent.
/// Left side covers agents 1..k-1, right side k+1..n; other entries are unused.
struct ActivationProfile {
  std::size_t source = 1;
  std::vector<Scalar> a_lr, r_lr;
  std::vector<Scalar> a_rl, r_rl;

  /// Pickup point of agent p (< k) at power P >= a_lr[p].
  Scalar reach_lr(std::size_t p, const Scalar& P) const { return r_lr[p - 1] + (P - a_lr[p - 1]); }
  /// Pickup point of agent p (> k) at power P >= a_rl[p].
  Scalar reach_rl(std::size_t p, const Scalar& P) const { return r_rl[p - 1] - (P - a_rl[p - 1]); }
};

ActivationProfile activation_profiles(const LineConfig& c, std::size_t k);

/// Distance the source walks to meet both frontiers, given the frontier points
/// (absent sides pass std::nullopt). Each side's effective point is clipped to the source.
struct SourceRoute {
  Scalar cost;
  Turn turn = Turn::FirstLeft;
  Scalar first;
  Scalar second;
};
SourceRoute source_route(const Scalar& pos, const std::optional<Scalar>& x, const std::optional<Scalar>& y);

bool decide_broadcast(const LineConfig& c, std::size_t k, const Scalar& P);

/// The alternative source test |2X - Pos - Y| <= P or |2Y - Pos - X| <= P on the raw
/// frontiers. Used to record where it departs from the travel-distance test.
bool turning_point_test(const LineConfig& c, std::size_t k, const Scalar& P);

struct BroadcastResult {
  Scalar power;
  RegularBcastPlan plan;
};
BroadcastResult compute_optimal_broadcast(const LineConfig& c, std::size_t k);

/// [lo, hi] with decide(lo) false, decide(hi) true, hi - lo <= tol.
std::pair<Scalar, Scalar> bisection_oracle_broadcast(const LineConfig& c, std::size_t k, const Scalar& tol);

RegularBcastPlan broadcast_plan(const LineConfig& c, std::size_t k, const Scalar& P);
void check_broadcast_plan(const LineConfig& c, const RegularBcastPlan& plan);
Strategy emit_broadcast_strategy(const LineConfig& c, const RegularBcastPlan& plan);

}  // namespace powercast
