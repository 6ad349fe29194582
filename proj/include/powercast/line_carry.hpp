#pragma once

#include "powercast/model.hpp"

#include <string>
#include <vector>

namespace powercast {

/// Forward carries information rightwards (s < t). Reverse carries it leftwards
/// (s > t) and is evaluated on the mirrored line.
enum class Direction { Forward, Reverse };

/// Relay plan: agent i walks back to b[i-1], then forward to f[i-1].
/// The vectors are filled even when the plan is infeasible.
struct CarryPlan {
  Direction direction = Direction::Forward;
  std::vector<Scalar> b;
  std::vector<Scalar> f;
  Scalar power;
  bool feasible = false;
  std::string reason;
  /// Pull only: b_1 <= s held but an intermediate agent check failed.
  bool intermediate_check_decisive = false;
};

/// Target-anchored relay: f_n = t, b_i = (f_i + Pos[i] - P)/2, f_{i-1} = b_i.
CarryPlan pull_carry(const LineConfig& c, const Scalar& s, const Scalar& t, const Scalar& P,
                     Direction dir = Direction::Forward);

/// Source-anchored relay: b_1 = min(Pos[1], s), b_i = min(f_{i-1}, Pos[i]),
/// f_i = P + 2 b_i - Pos[i].
CarryPlan push_carry(const LineConfig& c, const Scalar& s, const Scalar& t, const Scalar& P,
                     Direction dir = Direction::Forward);

struct CarryBound {
  bool feasible = false;
  Scalar value;
  std::string reason;
};

/// Smallest s from which information reaches t (largest s for Reverse).
CarryBound min_feasible_source(const LineConfig& c, const Scalar& t, const Scalar& P,
                               Direction dir = Direction::Forward);

/// Largest t reachable from s (smallest t for Reverse).
CarryBound max_feasible_target(const LineConfig& c, const Scalar& s, const Scalar& P,
                               Direction dir = Direction::Forward);

}  // namespace powercast
