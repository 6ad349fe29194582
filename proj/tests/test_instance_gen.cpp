#include "powercast/instance_gen.hpp"
#include "powercast/line_convergecast.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>

using namespace powercast;

namespace {

std::vector<Scalar> leg_weights(const Network& star, const std::vector<int>& agents) {
  std::vector<Scalar> out;
  for (int a : agents) out.push_back(star.edge(star.ports(star.agent_node(a)).front().edge).w);
  return out;
}

std::vector<Scalar> S(std::initializer_list<long> xs) {
  std::vector<Scalar> v;
  for (long x : xs) v.emplace_back(x);
  return v;
}

}  // namespace

TEST_CASE("multiset validation") {
  auto inst = make_three_partition({6, 7, 7});
  CHECK(inst.m == 1);
  CHECK(inst.R == 20);
  CHECK_THROWS_AS(make_three_partition({5, 7, 8}), std::invalid_argument);
  CHECK_THROWS_AS(make_three_partition({6, 7}), std::invalid_argument);
  CHECK_THROWS_AS(make_three_partition({}), std::invalid_argument);
}

TEST_CASE("star layouts") {
  auto inst = make_three_partition({6, 7, 7});
  StarInstance c = gen_3p_convergecast_star(inst);
  CHECK(leg_weights(c.star, c.a_agents) == S({1, 1}));
  CHECK(leg_weights(c.star, c.b_agents) == S({47, 48, 48}));
  CHECK(leg_weights(c.star, c.c_agents) == S({81}));
  CHECK(c.power == 41);
  StarInstance b = gen_3p_broadcast_star(inst);
  CHECK(leg_weights(b.star, b.a_agents) == S({1}));
  CHECK(leg_weights(b.star, b.b_agents) == S({87, 88, 88}));
  CHECK(leg_weights(b.star, b.c_agents) == S({121}));
  CHECK(b.power == 81);
  CHECK(b.star.source() == 1);

  auto two = make_three_partition({6, 7, 7, 6, 7, 7});
  CHECK(gen_3p_convergecast_star(two).star.agent_count() == 10);
  CHECK(gen_3p_broadcast_star(two).star.agent_count() == 10);
}

TEST_CASE("partition strategies solve the stars at the threshold") {
  auto inst = make_three_partition({6, 7, 7});
  StarInstance c = gen_3p_convergecast_star(inst);
  Configuration arena{c.star};
  Trace tc = simulate(arena, proof_strategy_for_partition(inst, {{6, 7, 7}}, Task::Convergecast), c.power);
  CHECK(verify_convergecast(tc).ok);
  CHECK(max_power_used(tc).max == 41);

  StarInstance b = gen_3p_broadcast_star(inst);
  Configuration barena{b.star};
  Trace tb = simulate(barena, proof_strategy_for_partition(inst, {{6, 7, 7}}, Task::Broadcast), b.power);
  CHECK(verify_broadcast(tb, 1).ok);
  CHECK(max_power_used(tb).max <= 81);

  auto two = make_three_partition({6, 8, 9, 7, 7, 9});
  CHECK(two.R == 23);
  for (Task task : {Task::Convergecast, Task::Broadcast}) {
    StarInstance si = task == Task::Convergecast ? gen_3p_convergecast_star(two) : gen_3p_broadcast_star(two);
    Configuration a{si.star};
    Trace tr = simulate(a, proof_strategy_for_partition(two, {{6, 8, 9}, {7, 7, 9}}, task), si.power);
    CHECK((task == Task::Convergecast ? verify_convergecast(tr).ok : verify_broadcast(tr, 1).ok));
  }
}

TEST_CASE("invalid partitions are rejected") {
  auto two = make_three_partition({6, 8, 9, 7, 7, 9});
  CHECK_THROWS_AS(proof_strategy_for_partition(two, {{6, 7, 9}, {8, 7, 9}}, Task::Convergecast), std::invalid_argument);
  CHECK_THROWS_AS(proof_strategy_for_partition(two, {{6, 8, 9}}, Task::Broadcast), std::invalid_argument);
  CHECK_THROWS_AS(proof_strategy_for_partition(two, {{6, 8, 9}, {7, 7, 8}}, Task::Broadcast), std::invalid_argument);
}

TEST_CASE("restricted star search agrees with 3-partition") {
  std::vector<std::vector<long>> cases{{6, 7, 7, 6, 7, 7}, {6, 8, 9, 7, 7, 9}, {6, 6, 6, 6, 7, 9}};
  // random valid multisets with m = 2
  std::mt19937_64 rng(67);
  while (cases.size() < 12) {
    std::vector<long> items;
    for (int i = 0; i < 6; ++i) items.push_back(5 + static_cast<long>(rng() % 5));
    try {
      make_three_partition(items);
      cases.push_back(items);
    } catch (const std::invalid_argument&) {
    }
  }
  bool saw_no = false, saw_yes = false;
  for (const auto& items : cases) {
    auto inst = make_three_partition(items);
    bool yes = has_three_partition(inst);
    (yes ? saw_yes : saw_no) = true;
    StarInstance c = gen_3p_convergecast_star(inst);
    CHECK(simple_star_feasible(c.star, c.power, Task::Convergecast) == yes);
    StarInstance b = gen_3p_broadcast_star(inst);
    CHECK(simple_star_feasible(b.star, b.power, Task::Broadcast, 1) == yes);
  }
  CHECK(saw_no);
  CHECK(saw_yes);
  CHECK_FALSE(has_three_partition(make_three_partition({6, 6, 6, 6, 7, 9})));
}

TEST_CASE("lower-bound line family") {
  auto f = gen_lower_bound_line(fraction(1, 2), Scalar(8));
  CHECK(f.l == 4);
  CHECK(f.k == 6);
  CHECK(f.n == 50);
  CHECK(f.epsilon == 1);
  CHECK(f.sigma == fraction(1, 2));
  CHECK(f.s(1) == 14);
  CHECK(f.s_prime(1) == fraction(29, 2));
  CHECK(f.line.size() == 50);
  CHECK(f.line.pos(1) == 0);
  CHECK(f.line.pos(50) == 130);
  CHECK(f.s(9) == 130);
  CHECK(f.s_prime(9) == fraction(261, 2));
  for (std::size_t i = 1; i <= 2 * f.l; ++i) {
    for (std::size_t j = 0; j < f.k; ++j) {
      const Scalar& x = f.line.pos(2 + (i - 1) * f.k + j);
      CHECK(f.s(i) < x);
      CHECK(x < f.s_prime(i));
    }
  }
  CHECK(decide_convergecast(f.line, f.power).has_value());
  CHECK(gen_lower_bound_line(Scalar(1), Scalar(4)).n == 32);
  CHECK_THROWS_AS(gen_lower_bound_line(Scalar(2), Scalar(4)), std::invalid_argument);
}

TEST_CASE("random generators are deterministic and well formed") {
  for (std::uint64_t seed : {1ULL, 2ULL, 99ULL}) {
    LineConfig a = gen_random_line(30, seed), b = gen_random_line(30, seed);
    CHECK(a.positions == b.positions);
    CHECK(a.pos(1) == 0);
    Network t = gen_random_tree(40, seed);
    CHECK(serialize_configuration(Configuration{t}) == serialize_configuration(Configuration{gen_random_tree(40, seed)}));
    CHECK(t.edge_count() == 39);
    CHECK(validate_tree_for_distributed(t).ok);
    Network g = gen_random_graph(20, 10, 7, seed);
    CHECK(g.agent_count() == 7);
    CHECK(g.edge_count() <= 29);
    CHECK(g.edge_count() >= 19);
  }
  CHECK(gen_random_line(30, 1).positions != gen_random_line(30, 2).positions);
}
