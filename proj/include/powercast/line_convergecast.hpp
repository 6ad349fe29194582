#pragma once

#include "powercast/model.hpp"
#include "powercast/strategy.hpp"

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace powercast {

/// Information of the first agents cannot reach agent i at the given power.
class Unreachable : public std::runtime_error {
 public:
  explicit Unreachable(std::size_t index);
  std::size_t index;
};

/// Interval plan for convergecast: agents 1..split carry rightwards, the rest leftwards.
struct RegularConvPlan {
  Scalar P;
  std::size_t split = 0;
  std::vector<Scalar> b;
  std::vector<Scalar> f;
};

/// Stack of (index, threshold) pairs, increasing in both from bottom to top.
struct ThresholdStack {
  std::vector<std::pair<std::size_t, Scalar>> entries;
  std::size_t operations = 0;  // pushes + pops

  const std::pair<std::size_t, Scalar>& top() const { return entries.back(); }
  void push(std::size_t index, Scalar threshold) {
    entries.emplace_back(index, std::move(threshold));
    ++operations;
  }
  void pop() {
    entries.pop_back();
    ++operations;
  }
  bool empty() const { return entries.empty(); }
  std::size_t size() const { return entries.size(); }
};

/// Weighted position sums with the closed-form reach values built on them.
///   s_lr(p,q) = sum_{i=p+1..q} 2^{q-i} Pos[i]
///   s_rl(q,r) = sum_{i=r..q-1} 2^{i-r} Pos[i]
class PrefixSums {
 public:
  explicit PrefixSums(const LineConfig& c);

  Scalar s_lr(std::size_t p, std::size_t q) const;
  Scalar s_rl(std::size_t q, std::size_t r) const;

  /// Reach of agents p..q rightwards when p is the last agent not walking back.
  Scalar value_lr(std::size_t p, std::size_t q, const Scalar& P) const;
  /// Reach of agents r..q leftwards when q is the last agent not walking back.
  Scalar value_rl(std::size_t q, std::size_t r, const Scalar& P) const;

  /// Power at which the piece headed by p brings the information exactly to Pos[q+1].
  Scalar threshold_lr(std::size_t p, std::size_t q) const;
  /// Power at which the piece headed by p brings the information exactly to Pos[q-1].
  Scalar threshold_rl(std::size_t p, std::size_t q) const;

  const Scalar& pos(std::size_t i) const { return pos_[i - 1]; }
  std::size_t size() const { return pos_.size(); }

 private:
  std::vector<Scalar> pos_;
  std::vector<Scalar> lr_;  // lr_[i-1] = s_lr(1, i)
  std::vector<Scalar> rl_;  // rl_[i-1] = s_rl(n, i)
};

/// Rightmost point the information of agents 1..i reaches. Throws Unreachable.
Scalar reach_lr(const LineConfig& c, std::size_t i, const Scalar& P);
/// Leftmost point the information of agents i..n reaches. Throws Unreachable.
Scalar reach_rl(const LineConfig& c, std::size_t i, const Scalar& P);

/// Smallest split j with ReachLR(j) >= ReachRL(j+1), both chains intact.
std::optional<std::size_t> decide_convergecast(const LineConfig& c, const Scalar& P);

ThresholdStack threshold_stack_lr(const LineConfig& c, std::size_t r);
ThresholdStack threshold_stack_rl(const LineConfig& c, std::size_t r);

/// The unique P with ReachLR(r,P) = ReachRL(r+1,P).
Scalar optimal_at_index(const LineConfig& c, std::size_t r);

struct ConvergecastResult {
  Scalar power;
  std::size_t split = 0;
  RegularConvPlan plan;
  std::size_t stack_operations = 0;
};

/// Linear-time optimum; ties resolve to the smallest split.
ConvergecastResult compute_optimal_convergecast(const LineConfig& c);

/// Optimum from explicitly built piecewise-linear reach functions, O(n^2).
Scalar quadratic_oracle_convergecast(const LineConfig& c, std::size_t* split = nullptr);

/// Plan for a given power and split via the push recurrences.
RegularConvPlan convergecast_plan(const LineConfig& c, const Scalar& P, std::size_t split);

/// Throws std::invalid_argument naming the first violated plan condition.
void check_convergecast_plan(const LineConfig& c, const RegularConvPlan& plan);

/// Timed moves realizing the plan on the line.
Strategy emit_convergecast_strategy(const LineConfig& c, const RegularConvPlan& plan);

}  // namespace powercast
