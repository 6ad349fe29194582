#include "oracles.hpp"

#include "powercast/instance_gen.hpp"
#include "powercast/line_convergecast.hpp"

#include <doctest.h>

#include <random>

using namespace powercast;

namespace {

LineConfig L(std::initializer_list<Scalar> xs) { return make_line(std::vector<Scalar>(xs)); }

const Scalar kTol(1, 1000000000000L);

}  // namespace

TEST_CASE("reach fixtures") {
  CHECK(reach_lr(L({0, 2}), 2, 1) == 1);
  CHECK(reach_lr(L({0, 4, 8}), 2, 3) == 5);
  CHECK(reach_lr(L({0}), 1, 7) == 7);
  CHECK(reach_rl(L({0, 4, 8}), 2, 3) == 3);
  CHECK_THROWS_AS(reach_lr(L({0, 10}), 2, 4), Unreachable);
}

TEST_CASE("decision fixtures") {
  // At P = 3 both splits of [0,4,8] work; the smallest is reported.
  CHECK(decide_convergecast(L({0, 4, 8}), 3) == 1u);
  CHECK(reach_lr(L({0, 4, 8}), 2, 3) >= reach_rl(L({0, 4, 8}), 3, 3));
  CHECK_FALSE(decide_convergecast(L({0, 4, 8}), fraction(29, 10)).has_value());
  for (long l : {1, 7, 30}) CHECK(decide_convergecast(L({0, l}), fraction(l, 2)) == 1u);
}

TEST_CASE("threshold stacks") {
  using Stack = std::vector<std::pair<std::size_t, Scalar>>;
  CHECK(threshold_stack_lr(L({0, 4, 8}), 2).entries == Stack{{1, 0}, {2, 4}});
  CHECK(threshold_stack_lr(L({0, 4, 8}), 1).entries == Stack{{1, 0}});
  // TH(2) = 1 and TH(3) = 7 on [0,1,8]; nothing is dominated.
  CHECK(threshold_stack_lr(L({0, 1, 8}), 3).entries == Stack{{1, 0}, {2, 1}, {3, 7}});
  CHECK(threshold_stack_rl(L({0, 4, 8}), 3).entries == Stack{{3, 0}});
}

TEST_CASE("threshold stacks against bisected thresholds") {
  std::mt19937_64 rng(21);
  for (int it = 0; it < 60; ++it) {
    std::size_t n = 2 + rng() % 12;
    LineConfig c = gen_random_line(n, rng());
    std::vector<Scalar> th{Scalar(0)};
    for (std::size_t p = 2; p <= n; ++p) {
      auto [lo, hi] = oracle::threshold_lr(c.positions, p, kTol);
      th.push_back(hi);
    }
    for (std::size_t r = 1; r <= n; ++r) {
      ThresholdStack s = threshold_stack_lr(c, r);
      CHECK(s.operations <= 3 * r);
      std::vector<std::size_t> idx;
      for (const auto& [p, v] : s.entries) {
        idx.push_back(p);
        CHECK(powercast::abs(v - th[p - 1]) <= kTol);
      }
      CHECK(idx == oracle::dominant_indices(th, r));
    }
  }
}

TEST_CASE("optimal at index") {
  CHECK(optimal_at_index(L({0, 4, 8}), 2) == 3);
  CHECK(optimal_at_index(L({0, 4, 8}), 1) == 3);
  CHECK(optimal_at_index(L({0, 1, 8}), 1) == fraction(15, 4));
  CHECK(optimal_at_index(L({0, 1, 8}), 2) == fraction(7, 2));
}

TEST_CASE("optimum fixtures") {
  auto a = compute_optimal_convergecast(L({0, 4, 8}));
  CHECK(a.power == 3);
  CHECK((a.split == 1 || a.split == 2));
  auto b = compute_optimal_convergecast(L({0, 1, 8}));
  CHECK(b.power == fraction(7, 2));
  CHECK(b.split == 2);
  auto c = compute_optimal_convergecast(L({0, 10}));
  CHECK(c.power == 5);
  CHECK(c.split == 1);
  CHECK(compute_optimal_convergecast(L({5})).power == 0);
  CHECK(quadratic_oracle_convergecast(L({0, 4, 8})) == 3);
  CHECK(quadratic_oracle_convergecast(L({0, 1, 8})) == fraction(7, 2));
  CHECK(quadratic_oracle_convergecast(L({0, 7, 8})) == fraction(7, 2));
}

TEST_CASE("oracle cross-checks on random lines") {
  std::mt19937_64 rng(3);
  for (int it = 0; it < 150; ++it) {
    std::size_t n = 2 + rng() % 25;
    LineConfig c = gen_random_line(n, rng());
    auto r = compute_optimal_convergecast(c);
    std::size_t qsplit = 0;
    CHECK(r.power == quadratic_oracle_convergecast(c, &qsplit));
    CHECK(r.split == qsplit);
    // bracket from an independently written decision procedure
    auto [lo, hi] = oracle::convergecast_bracket(c.positions, kTol);
    CHECK(lo <= r.power);
    CHECK(r.power <= hi);
    CHECK(decide_convergecast(c, r.power) == oracle::decide(c.positions, r.power));
    CHECK(decide_convergecast(c, r.power).has_value());
    CHECK_FALSE(decide_convergecast(c, r.power * fraction(999999999, 1000000000)).has_value());
    // The split is strictly between its two agents.
    Scalar meet = reach_lr(c, r.split, r.power);
    CHECK(c.pos(r.split) < meet);
    CHECK(meet == reach_rl(c, r.split + 1, r.power));
    CHECK(meet < c.pos(r.split + 1));
  }
}

TEST_CASE("closed form matches the recurrence") {
  std::mt19937_64 rng(8);
  for (int it = 0; it < 100; ++it) {
    std::size_t n = 2 + rng() % 20;
    LineConfig c = gen_random_line(n, rng());
    PrefixSums ps(c);
    std::size_t q = 1 + rng() % n;
    Scalar P = (c.pos(n) - c.pos(1)) * fraction(static_cast<long>(1 + rng() % 100), 100) + fraction(1, 3);
    auto direct = oracle::reach_lr(c.positions, q, P);
    if (!direct) continue;
    // Active piece: the last p <= q whose threshold is below P among the dominant ones.
    ThresholdStack st = threshold_stack_lr(c, q);
    std::size_t p = 1;
    for (const auto& [idx, th] : st.entries) {
      if (th <= P) p = idx;
    }
    CHECK(ps.value_lr(p, q, P) == *direct);
  }
}

TEST_CASE("prefix sum identity") {
  std::mt19937_64 rng(9);
  for (int it = 0; it < 5; ++it) {
    LineConfig c = gen_random_line(40, rng());
    PrefixSums ps(c);
    for (std::size_t p = 1; p <= 40; p += 3) {
      for (std::size_t q = p; q <= 40; q += 2) {
        for (std::size_t r = q; r <= 40; r += 5) {
          CHECK(ps.s_lr(p, r) == times_pow2(ps.s_lr(p, q), r - q) + ps.s_lr(q, r));
        }
        Scalar direct(0);
        for (std::size_t i = p + 1; i <= q; ++i) direct += times_pow2(c.pos(i), q - i);
        CHECK(ps.s_lr(p, q) == direct);
      }
    }
  }
}

TEST_CASE("translation, scaling and reflection") {
  std::mt19937_64 rng(10);
  for (int it = 0; it < 40; ++it) {
    std::size_t n = 2 + rng() % 15;
    LineConfig c = gen_random_line(n, rng());
    Scalar base = compute_optimal_convergecast(c).power;
    std::vector<Scalar> moved, scaled;
    Scalar shift = fraction(static_cast<long>(rng() % 100) - 50, 7);
    Scalar lambda = fraction(static_cast<long>(1 + rng() % 9), 4);
    for (const auto& x : c.positions) {
      moved.push_back(x + shift);
      scaled.push_back(x * lambda);
    }
    CHECK(compute_optimal_convergecast(make_line(moved)).power == base);
    CHECK(compute_optimal_convergecast(make_line(scaled)).power == base * lambda);
    CHECK(compute_optimal_convergecast(reflect(c)).power == base);
  }
}

TEST_CASE("plans and emitted strategies") {
  LineConfig c = L({0, 4, 8});
  RegularConvPlan p = convergecast_plan(c, 3, 2);
  CHECK_NOTHROW(check_convergecast_plan(c, p));
  CHECK(p.b[1] == 3);
  CHECK(p.f[1] == 5);
  Strategy s = emit_convergecast_strategy(c, p);
  // a_2 waits at 3 until t = 3 and reaches 5 at t = 5
  bool waited = false;
  for (const auto& m : s.moves) {
    if (m.agent == 2 && m.from == Location::line(3) && m.to == Location::line(5)) waited = m.depart == 3;
  }
  CHECK(waited);
  CHECK(emit_convergecast_strategy(L({2}), convergecast_plan(L({2}), 0, 1)).moves.empty());
  RegularConvPlan bad = p;
  bad.f[1] = 6;
  CHECK_THROWS_AS(check_convergecast_plan(c, bad), std::invalid_argument);
}

TEST_CASE("stack operations stay linear") {
  for (std::size_t n : {10u, 1000u, 20000u}) {
    auto r = compute_optimal_convergecast(gen_random_line(n, n));
    CHECK(r.stack_operations <= 6 * n);
  }
}
