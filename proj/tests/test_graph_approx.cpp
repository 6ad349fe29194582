#include "powercast/graph_approx.hpp"
#include "powercast/instance_gen.hpp"
#include "powercast/line_broadcast.hpp"
#include "powercast/line_convergecast.hpp"

#include <doctest.h>

#include <random>

using namespace powercast;

TEST_CASE("shortest paths on a small graph") {
  auto g = std::get<Network>(load_configuration(R"({"kind":"graph","nodes":["a","b","c","d"],
    "edges":[{"u":"a","v":"b","w":"1"},{"u":"b","v":"c","w":"1"},{"u":"a","v":"c","w":"5/2"},{"u":"c","v":"d","w":"3"}],
    "agents":[{"id":1,"node":"a"},{"id":2,"node":"d"}]})"));
  DistanceMatrix d = apsp(g);
  CHECK(d(0, 2) == 2);
  CHECK(d(0, 3) == 5);
  CHECK(d.path(0, 3) == std::vector<std::size_t>{0, 1, 2, 3});
  CHECK(separation(g) == 5);
}

TEST_CASE("separation matches the bipartition search") {
  std::mt19937_64 rng(41);
  for (int it = 0; it < 80; ++it) {
    std::size_t n = 3 + rng() % 12;
    std::size_t agents = 2 + rng() % std::min<std::size_t>(n - 1, 9);
    Network g = gen_random_graph(n, rng() % 6, agents, rng());
    CHECK(separation(g) == brute_force_separation(g));
  }
  for (int it = 0; it < 30; ++it) {
    Network t = gen_random_tree(4 + rng() % 20, rng());
    if (t.agent_count() > 16) continue;
    CHECK(separation(t) == brute_force_separation(t));
  }
}

TEST_CASE("accretion convergecast uses exactly the separation") {
  std::mt19937_64 rng(43);
  for (int it = 0; it < 60; ++it) {
    std::size_t n = 3 + rng() % 15;
    Network g = gen_random_graph(n, rng() % 8, 2 + rng() % (n - 1), rng());
    Configuration arena{g};
    KnownGraphResult r = known_graph_convergecast(g);
    Scalar D = separation(g);
    CHECK(r.max_move == D);
    CHECK(r.links.size() == g.agent_count() - 1);
    Trace tr = simulate(arena, r.strategy, D);
    CHECK(verify_convergecast(tr).ok);
    CHECK(max_power_used(tr).max == D);

    int src = 1 + static_cast<int>(rng() % g.agent_count());
    Trace tb = simulate(arena, graph_broadcast_4approx(g, src));
    CHECK(verify_broadcast(tb, src).ok);
    CHECK(max_power_used(tb).max <= 2 * D);
  }
}

TEST_CASE("separation brackets the line optimum") {
  std::mt19937_64 rng(47);
  for (int it = 0; it < 80; ++it) {
    std::size_t n = 2 + rng() % 20;
    LineConfig c = gen_random_line(n, rng());
    Scalar D = separation(line_to_path(c));
    Scalar conv = compute_optimal_convergecast(c).power;
    CHECK(D / 2 <= conv);
    CHECK(D <= 2 * conv);
    std::size_t k = 1 + rng() % n;
    CHECK(D / 2 <= compute_optimal_broadcast(c, k).power);
  }
}

TEST_CASE("two agents: the broadcast bound of four is tight") {
  for (long d : {1, 6, 13}) {
    Network p = make_path({Scalar(d)});
    Configuration arena{p};
    Trace tr = simulate(arena, graph_broadcast_4approx(p, 1));
    CHECK(verify_broadcast(tr, 1).ok);
    Scalar used = max_power_used(tr).max;
    Scalar opt = compute_optimal_broadcast(make_line({Scalar(0), Scalar(d)}), 1).power;
    CHECK(used == 2 * Scalar(d));
    CHECK(used / opt == 4);
  }
}

TEST_CASE("bad source is rejected") {
  Network p = make_path({Scalar(2)});
  CHECK_THROWS_AS(graph_broadcast_4approx(p, 3), std::invalid_argument);
}
