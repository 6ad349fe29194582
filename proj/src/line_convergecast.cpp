#include "powercast/line_convergecast.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace powercast {

Unreachable::Unreachable(std::size_t i)
    : std::runtime_error("information cannot reach agent " + std::to_string(i)), index(i) {}

PrefixSums::PrefixSums(const LineConfig& c) : pos_(c.positions) {
  const std::size_t n = pos_.size();
  lr_.assign(n, Scalar(0));
  rl_.assign(n, Scalar(0));
  for (std::size_t i = 1; i < n; ++i) lr_[i] = 2 * lr_[i - 1] + pos_[i];
  for (std::size_t i = n - 1; i-- > 0;) rl_[i] = pos_[i] + 2 * rl_[i + 1];
}

Scalar PrefixSums::s_lr(std::size_t p, std::size_t q) const {
  return lr_[q - 1] - times_pow2(lr_[p - 1], q - p);
}

Scalar PrefixSums::s_rl(std::size_t q, std::size_t r) const {
  return rl_[r - 1] - times_pow2(rl_[q - 1], q - r);
}

Scalar PrefixSums::value_lr(std::size_t p, std::size_t q, const Scalar& P) const {
  return times_pow2(pos(p), q - p) + pow2_minus_one(q - p + 1) * P - s_lr(p, q);
}

Scalar PrefixSums::value_rl(std::size_t q, std::size_t r, const Scalar& P) const {
  return times_pow2(pos(q), q - r) - pow2_minus_one(q - r + 1) * P - s_rl(q, r);
}

Scalar PrefixSums::threshold_lr(std::size_t p, std::size_t q) const {
  return (pos(q + 1) + s_lr(p, q) - times_pow2(pos(p), q - p)) / pow2_minus_one(q - p + 1);
}

Scalar PrefixSums::threshold_rl(std::size_t p, std::size_t q) const {
  return (times_pow2(pos(p), p - q) - s_rl(p, q) - pos(q - 1)) / pow2_minus_one(p - q + 1);
}

namespace {

struct Chain {
  std::vector<Scalar> reach;
  std::vector<bool> intact;
};

Chain chain_lr(const LineConfig& c, const Scalar& P) {
  const std::size_t n = c.size();
  Chain ch{std::vector<Scalar>(n), std::vector<bool>(n, true)};
  ch.reach[0] = c.pos(1) + P;
  for (std::size_t i = 2; i <= n; ++i) {
    const Scalar& prev = ch.reach[i - 2];
    ch.intact[i - 1] = ch.intact[i - 2] && prev >= c.pos(i) - P;
    ch.reach[i - 1] = 2 * powercast::min(prev, c.pos(i)) + P - c.pos(i);
  }
  return ch;
}

Chain chain_rl(const LineConfig& c, const Scalar& P) {
  const std::size_t n = c.size();
  Chain ch{std::vector<Scalar>(n), std::vector<bool>(n, true)};
  ch.reach[n - 1] = c.pos(n) - P;
  for (std::size_t i = n - 1; i >= 1; --i) {
    const Scalar& prev = ch.reach[i];
    ch.intact[i - 1] = ch.intact[i] && prev <= c.pos(i) + P;
    ch.reach[i - 1] = 2 * powercast::max(prev, c.pos(i)) - P - c.pos(i);
  }
  return ch;
}

void check_index(const LineConfig& c, std::size_t i) {
  if (i < 1 || i > c.size()) throw std::out_of_range("agent index out of range");
}

ThresholdStack stack_lr(const PrefixSums& ps, std::size_t r) {
  ThresholdStack st;
  st.push(1, Scalar(0));
  for (std::size_t q = 1; q < r; ++q) {
    while (ps.value_lr(st.top().first, q, st.top().second) >= ps.pos(q + 1)) st.pop();
    std::size_t p = st.top().first;
    st.push(q + 1, ps.threshold_lr(p, q));
  }
  return st;
}

ThresholdStack stack_rl(const PrefixSums& ps, std::size_t r) {
  const std::size_t n = ps.size();
  ThresholdStack st;
  st.push(n, Scalar(0));
  for (std::size_t q = n; q > r; --q) {
    while (ps.value_rl(st.top().first, q, st.top().second) <= ps.pos(q - 1)) st.pop();
    std::size_t p = st.top().first;
    st.push(q - 1, ps.threshold_rl(p, q));
  }
  return st;
}

Scalar gap(const PrefixSums& ps, std::size_t pl, std::size_t pr, std::size_t r, const Scalar& P) {
  return ps.value_lr(pl, r, P) - ps.value_rl(pr, r + 1, P);
}

// Pops pieces lying above the root of ReachLR(r) - ReachRL(r+1) and solves on the
// remaining tops. Both stacks must hold (index, threshold) pieces for r and r+1.
Scalar root_at(const PrefixSums& ps, ThresholdStack& sl, ThresholdStack& sr, std::size_t r) {
  for (;;) {
    const auto& [pl, tl] = sl.top();
    const auto& [pr, tr] = sr.top();
    const Scalar& pm = powercast::max(tl, tr);
    if (gap(ps, pl, pr, r, pm) < 0) break;
    if (sl.size() == 1 && sr.size() == 1) throw std::logic_error("no root below the first pieces");
    if (tl >= tr) sl.pop();
    else sr.pop();
  }
  const std::size_t p = sl.top().first;
  const std::size_t q = sr.top().first;
  Scalar num = times_pow2(ps.pos(q), q - r - 1) - ps.s_rl(q, r + 1) - times_pow2(ps.pos(p), r - p) + ps.s_lr(p, r);
  Scalar den = pow2_minus_one(r - p + 1) + pow2_minus_one(q - r);
  return num / den;
}

// Increasing or decreasing piecewise-linear function on [0, inf).
struct Piece {
  Scalar start;
  Scalar slope;
  Scalar icpt;
};
using Pwl = std::vector<Piece>;

Scalar eval(const Piece& pc, const Scalar& x) { return pc.slope * x + pc.icpt; }

// Clamp a monotone function to `c`: min for increasing (upper = true), max for decreasing.
Pwl clamp(const Pwl& fn, const Scalar& c, bool upper) {
  Pwl out;
  for (std::size_t j = 0; j < fn.size(); ++j) {
    const Piece& pc = fn[j];
    Scalar v = eval(pc, pc.start);
    bool past = upper ? v >= c : v <= c;
    if (past) {
      out.push_back({pc.start, Scalar(0), c});
      return out;
    }
    Scalar x = (c - pc.icpt) / pc.slope;
    bool last = j + 1 == fn.size();
    if (last || x < fn[j + 1].start) {
      out.push_back(pc);
      out.push_back({x, Scalar(0), c});
      return out;
    }
    out.push_back(pc);
  }
  return out;
}

Scalar first_root(const Pwl& f, const Pwl& g) {
  std::vector<Scalar> cuts;
  for (const auto& pc : f) cuts.push_back(pc.start);
  for (const auto& pc : g) cuts.push_back(pc.start);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  std::size_t fi = 0, gi = 0;
  for (std::size_t k = 0; k < cuts.size(); ++k) {
    while (fi + 1 < f.size() && f[fi + 1].start <= cuts[k]) ++fi;
    while (gi + 1 < g.size() && g[gi + 1].start <= cuts[k]) ++gi;
    Scalar slope = f[fi].slope - g[gi].slope;
    Scalar icpt = f[fi].icpt - g[gi].icpt;
    bool last = k + 1 == cuts.size();
    if (last || slope * cuts[k + 1] + icpt >= 0) return -icpt / slope;
  }
  throw std::logic_error("reach functions never meet");
}

}  // namespace

Scalar reach_lr(const LineConfig& c, std::size_t i, const Scalar& P) {
  check_index(c, i);
  Scalar f = c.pos(1) + P;
  for (std::size_t q = 2; q <= i; ++q) {
    if (f < c.pos(q) - P) throw Unreachable(q);
    f = 2 * powercast::min(f, c.pos(q)) + P - c.pos(q);
  }
  return f;
}

Scalar reach_rl(const LineConfig& c, std::size_t i, const Scalar& P) {
  check_index(c, i);
  const std::size_t n = c.size();
  Scalar f = c.pos(n) - P;
  for (std::size_t q = n - 1; q >= i; --q) {
    if (f > c.pos(q) + P) throw Unreachable(q);
    f = 2 * powercast::max(f, c.pos(q)) - P - c.pos(q);
  }
  return f;
}

std::optional<std::size_t> decide_convergecast(const LineConfig& c, const Scalar& P) {
  const std::size_t n = c.size();
  if (n == 0) throw ModelError("empty line");
  if (n == 1) return 1;
  Chain lr = chain_lr(c, P);
  Chain rl = chain_rl(c, P);
  for (std::size_t j = 1; j < n; ++j) {
    if (lr.intact[j - 1] && rl.intact[j] && lr.reach[j - 1] >= rl.reach[j]) return j;
  }
  return std::nullopt;
}

ThresholdStack threshold_stack_lr(const LineConfig& c, std::size_t r) {
  check_index(c, r);
  return stack_lr(PrefixSums(c), r);
}

ThresholdStack threshold_stack_rl(const LineConfig& c, std::size_t r) {
  check_index(c, r);
  return stack_rl(PrefixSums(c), r);
}

Scalar optimal_at_index(const LineConfig& c, std::size_t r) {
  if (r < 1 || r >= c.size()) throw std::out_of_range("split index out of range");
  PrefixSums ps(c);
  ThresholdStack sl = stack_lr(ps, r);
  ThresholdStack sr = stack_rl(ps, r + 1);
  return root_at(ps, sl, sr, r);
}

ConvergecastResult compute_optimal_convergecast(const LineConfig& c) {
  const std::size_t n = c.size();
  if (n == 0) throw ModelError("empty line");
  ConvergecastResult out;
  if (n == 1) {
    out.power = 0;
    out.split = 1;
    out.plan = convergecast_plan(c, out.power, 1);
    return out;
  }
  PrefixSums ps(c);
  // Agents 2..n alone deliver to Pos[1] at TH_RL(1): an upper bound on the optimum.
  ThresholdStack sr = stack_rl(ps, 1);
  Scalar P = sr.top().second;
  sr.pop();
  ThresholdStack sl;
  sl.push(1, Scalar(0));
  std::size_t split = 1;

  // Invariant: sl holds the LR pieces for r with threshold below P, sr the RL pieces for r+1.
  for (std::size_t r = 1; r < n; ++r) {
    Scalar lr = ps.value_lr(sl.top().first, r, P);
    if (lr < ps.pos(r) - P) break;  // chain to r broken at P: later splits need more power
    Scalar rl = ps.value_rl(sr.top().first, r + 1, P);
    bool rl_intact = rl <= ps.pos(r + 1) + P;
    if (rl_intact && lr > rl) {
      P = root_at(ps, sl, sr, r);
      split = r;
    }
    if (sr.top().first == r + 1) break;  // agent r+1 needs no back move below P
    if (ps.value_lr(sl.top().first, r, P) > ps.pos(r + 1)) {
      while (ps.value_lr(sl.top().first, r, sl.top().second) >= ps.pos(r + 1)) sl.pop();
      std::size_t p = sl.top().first;
      sl.push(r + 1, ps.threshold_lr(p, r));
    }
  }
  out.power = P;
  out.split = split;
  out.plan = convergecast_plan(c, P, split);
  out.stack_operations = sl.operations + sr.operations;
  return out;
}

Scalar quadratic_oracle_convergecast(const LineConfig& c, std::size_t* split) {
  const std::size_t n = c.size();
  if (n == 0) throw ModelError("empty line");
  if (n == 1) {
    if (split) *split = 1;
    return Scalar(0);
  }
  std::vector<Pwl> lr(n), rl(n);
  lr[0] = {{Scalar(0), Scalar(1), c.pos(1)}};
  for (std::size_t i = 2; i <= n; ++i) {
    Pwl g = clamp(lr[i - 2], c.pos(i), true);
    for (auto& pc : g) {
      pc.slope = 2 * pc.slope + 1;
      pc.icpt = 2 * pc.icpt - c.pos(i);
    }
    lr[i - 1] = std::move(g);
  }
  rl[n - 1] = {{Scalar(0), Scalar(-1), c.pos(n)}};
  for (std::size_t i = n - 1; i >= 1; --i) {
    Pwl g = clamp(rl[i], c.pos(i), false);
    for (auto& pc : g) {
      pc.slope = 2 * pc.slope - 1;
      pc.icpt = 2 * pc.icpt - c.pos(i);
    }
    rl[i - 1] = std::move(g);
  }
  Scalar best;
  std::size_t best_r = 0;
  for (std::size_t r = 1; r < n; ++r) {
    Scalar root = first_root(lr[r - 1], rl[r]);
    if (best_r == 0 || root < best) {
      best = root;
      best_r = r;
    }
  }
  if (split) *split = best_r;
  return best;
}

RegularConvPlan convergecast_plan(const LineConfig& c, const Scalar& P, std::size_t split) {
  const std::size_t n = c.size();
  if (split < 1 || split > n) throw std::out_of_range("split out of range");
  RegularConvPlan plan;
  plan.P = P;
  plan.split = split;
  plan.b.assign(n, Scalar(0));
  plan.f.assign(n, Scalar(0));
  plan.b[0] = c.pos(1);
  plan.f[0] = c.pos(1) + P;
  for (std::size_t i = 2; i <= split; ++i) {
    plan.b[i - 1] = powercast::min(plan.f[i - 2], c.pos(i));
    plan.f[i - 1] = 2 * plan.b[i - 1] + P - c.pos(i);
  }
  if (split < n) {
    plan.b[n - 1] = c.pos(n);
    plan.f[n - 1] = c.pos(n) - P;
    for (std::size_t i = n - 1; i > split; --i) {
      plan.b[i - 1] = powercast::max(plan.f[i], c.pos(i));
      plan.f[i - 1] = 2 * plan.b[i - 1] - P - c.pos(i);
    }
  }
  if (n == 1) plan.f[0] = c.pos(1);
  return plan;
}

void check_convergecast_plan(const LineConfig& c, const RegularConvPlan& plan) {
  const std::size_t n = c.size();
  const Scalar& P = plan.P;
  auto fail = [](const std::string& what, std::size_t i) {
    throw std::invalid_argument(what + " (agent " + std::to_string(i) + ")");
  };
  if (plan.b.size() != n || plan.f.size() != n) throw std::invalid_argument("plan size mismatch");
  if (n == 1) return;
  if (plan.split < 1 || plan.split >= n) throw std::invalid_argument("split out of range");
  for (std::size_t i = 1; i <= plan.split; ++i) {
    const Scalar& b = plan.b[i - 1];
    const Scalar& f = plan.f[i - 1];
    Scalar expect_b = i == 1 ? c.pos(1) : powercast::min(plan.f[i - 2], c.pos(i));
    if (b != expect_b || f != 2 * b + P - c.pos(i)) fail("left-to-right relay condition violated", i);
    if (f < b) fail("left-to-right agent cannot reach its pickup point", i);
  }
  for (std::size_t i = n; i > plan.split; --i) {
    const Scalar& b = plan.b[i - 1];
    const Scalar& f = plan.f[i - 1];
    Scalar expect_b = i == n ? c.pos(n) : powercast::max(plan.f[i], c.pos(i));
    if (b != expect_b || f != 2 * b - P - c.pos(i)) fail("right-to-left relay condition violated", i);
    if (f > b) fail("right-to-left agent cannot reach its pickup point", i);
  }
  if (plan.f[plan.split - 1] < plan.f[plan.split]) fail("carriers do not meet", plan.split);
}

Strategy emit_convergecast_strategy(const LineConfig& c, const RegularConvPlan& plan) {
  check_convergecast_plan(c, plan);
  const std::size_t n = c.size();
  Strategy s;
  if (n == 1) return s;
  const std::size_t p = plan.split;
  std::vector<Scalar> ready(n);  // time agent i leaves b_i carrying the information
  for (std::size_t i = 1; i <= p; ++i) {
    Scalar own = c.pos(i) - plan.b[i - 1];
    ready[i - 1] = i == 1 ? own : powercast::max(own, ready[i - 2] + (plan.b[i - 1] - plan.b[i - 2]));
  }
  for (std::size_t i = n; i > p; --i) {
    Scalar own = plan.b[i - 1] - c.pos(i);
    ready[i - 1] = i == n ? own : powercast::max(own, ready[i] + (plan.b[i] - plan.b[i - 1]));
  }
  for (std::size_t i = 1; i <= n; ++i) {
    const int id = static_cast<int>(i);
    if (plan.b[i - 1] != c.pos(i)) {
      s.moves.push_back({id, Scalar(0), Location::line(c.pos(i)), Location::line(plan.b[i - 1])});
    }
    if (plan.f[i - 1] != plan.b[i - 1]) {
      s.moves.push_back({id, ready[i - 1], Location::line(plan.b[i - 1]), Location::line(plan.f[i - 1])});
    }
  }
  return s;
}

}  // namespace powercast
