#include "powercast/model.hpp"

#include <doctest.h>

#include <random>

using namespace powercast;

TEST_CASE("scalar parsing and printing") {
  CHECK(parse_scalar("7") == 7);
  CHECK(parse_scalar("-3/4") == fraction(-3, 4));
  CHECK(parse_scalar("0.125") == fraction(1, 8));
  CHECK(parse_scalar("-12.5") == fraction(-25, 2));
  CHECK(parse_scalar("6/4") == fraction(3, 2));
  CHECK_THROWS_AS(parse_scalar("abc"), std::invalid_argument);
  CHECK_THROWS_AS(parse_scalar("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_scalar(""), std::invalid_argument);
  CHECK(format_scalar(fraction(7, 2)) == "7/2");
  CHECK(format_scalar(Scalar(-4)) == "-4");
  CHECK(format_decimal(fraction(2, 3), 3) == "0.667");
  CHECK(format_decimal(fraction(-1, 8), 2) == "-0.13");
  CHECK(format_decimal(Scalar(5), 0) == "5");
  CHECK(times_pow2(fraction(3, 4), 3) == 6);
  CHECK(pow2_minus_one(5) == 31);
}

TEST_CASE("scalar arithmetic is exact") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<long> num(-1000000, 1000000), den(1, 1000000);
  for (int i = 0; i < 10000; ++i) {
    Scalar a(num(rng), den(rng)), b(num(rng), den(rng));
    a.canonicalize();
    b.canonicalize();
    CHECK((a + b) - b == a);
    if (b != 0) CHECK((a * b) / b == a);
  }
}

TEST_CASE("line documents") {
  auto c = load_configuration(R"({"kind":"line","positions":["0","4","8"]})");
  const auto& l = std::get<LineConfig>(c);
  CHECK(l.size() == 3);
  CHECK(l.pos(3) == 8);
  CHECK_THROWS_AS(load_configuration(R"({"kind":"line","positions":["4","0"]})"), ModelError);
  CHECK_THROWS_AS(load_configuration(R"({"kind":"line","positions":["1","1"]})"), ModelError);
  CHECK_THROWS_AS(load_configuration(R"({"kind":"line","positions":[]})"), ModelError);
  CHECK_THROWS_AS(load_configuration("{not json"), ModelError);
  CHECK_THROWS_AS(load_configuration(R"({"kind":"line","positions":["0","1"],"source":3})"), ModelError);
  auto s = std::get<LineConfig>(load_configuration(R"({"kind":"line","positions":["1/3","0.5"],"source":2})"));
  CHECK(s.pos(1) == fraction(1, 3));
  CHECK(s.source == 2);
}

TEST_CASE("reflection reverses order and negates") {
  LineConfig c = make_line({Scalar(0), Scalar(1), Scalar(8)}, 1);
  LineConfig r = reflect(c);
  CHECK(r.pos(1) == -8);
  CHECK(r.pos(3) == 0);
  CHECK(r.source == 3);
}

const char* kStar = R"({"kind":"tree","nodes":["c","l1","l2","l3"],
  "edges":[{"u":"c","v":"l1","w":"1"},{"u":"c","v":"l2","w":"2"},{"u":"c","v":"l3","w":"3"}],
  "agents":[{"id":1,"node":"l1"},{"id":2,"node":"l2"},{"id":3,"node":"l3"}]})";

TEST_CASE("tree documents") {
  auto c = load_configuration(kStar);
  const auto& t = std::get<Network>(c);
  CHECK(t.kind() == Network::Kind::Tree);
  CHECK(t.agent_count() == 3);
  CHECK(t.degree(t.node_index("c")) == 3);
  CHECK(t.agent_at(t.node_index("l2")) == 2);
  CHECK(t.agent_at(t.node_index("c")) == 0);
  CHECK(validate_tree_for_distributed(t).ok);
}

TEST_CASE("graph invariants are enforced") {
  // disconnected
  CHECK_THROWS_AS(load_configuration(R"({"kind":"graph","nodes":["a","b","c"],"edges":[{"u":"a","v":"b","w":"1"}],
    "agents":[{"id":1,"node":"a"}]})"),
                  ModelError);
  // duplicate agent node
  CHECK_THROWS_AS(load_configuration(R"({"kind":"graph","nodes":["a","b"],"edges":[{"u":"a","v":"b","w":"1"}],
    "agents":[{"id":1,"node":"a"},{"id":2,"node":"a"}]})"),
                  ModelError);
  // self loop, non-positive weight
  CHECK_THROWS_AS(load_configuration(R"({"kind":"graph","nodes":["a"],"edges":[{"u":"a","v":"a","w":"1"}],
    "agents":[{"id":1,"node":"a"}]})"),
                  ModelError);
  CHECK_THROWS_AS(load_configuration(R"({"kind":"graph","nodes":["a","b"],"edges":[{"u":"a","v":"b","w":"0"}],
    "agents":[{"id":1,"node":"a"}]})"),
                  ModelError);
  // a cycle is not a tree
  CHECK_THROWS_AS(load_configuration(R"({"kind":"tree","nodes":["a","b","c"],"edges":[{"u":"a","v":"b","w":"1"},
    {"u":"b","v":"c","w":"1"},{"u":"c","v":"a","w":"1"}],"agents":[{"id":1,"node":"a"}]})"),
                  ModelError);
}

TEST_CASE("leaves without agents are reported") {
  auto ok = std::get<Network>(load_configuration(R"({"kind":"tree","nodes":["a","b","c"],
    "edges":[{"u":"a","v":"b","w":"1"},{"u":"b","v":"c","w":"1"}],"agents":[{"id":1,"node":"a"},{"id":2,"node":"c"}]})"));
  CHECK(validate_tree_for_distributed(ok).ok);
  auto bad = std::get<Network>(load_configuration(R"({"kind":"tree","nodes":["a","b","c"],
    "edges":[{"u":"a","v":"b","w":"1"},{"u":"b","v":"c","w":"1"}],"agents":[{"id":1,"node":"a"}]})"));
  TreeCheck r = validate_tree_for_distributed(bad);
  CHECK_FALSE(r.ok);
  REQUIRE(r.leaves_without_agent.size() == 1);
  CHECK(r.leaves_without_agent[0] == "c");
}

TEST_CASE("serialization round trip") {
  for (const char* doc : {kStar, R"({"kind":"line","positions":["-1/3","0.25","7"],"source":2})"}) {
    Configuration a = load_configuration(doc);
    std::string text = serialize_configuration(a);
    Configuration b = load_configuration(text);
    CHECK(serialize_configuration(b) == text);
  }
  auto l = std::get<LineConfig>(load_configuration(serialize_configuration(load_configuration(
      R"({"kind":"line","positions":["-1/3","0.25","7"]})"))));
  CHECK(l.pos(2) == fraction(1, 4));
}

TEST_CASE("edge points snap to endpoints") {
  Network t = std::get<Network>(load_configuration(kStar));
  std::size_t e = *t.edge_between(t.node_index("c"), t.node_index("l3"));
  CHECK(edge_point(t, e, Scalar(0)) == Location::node(t.edge(e).u));
  CHECK(edge_point(t, e, Scalar(3)) == Location::node(t.edge(e).v));
  CHECK(edge_point(t, e, Scalar(1)).kind == Location::Kind::Edge);
  CHECK_THROWS_AS(edge_point(t, e, Scalar(4)), ModelError);
}

TEST_CASE("port permutation keeps the graph") {
  Network t = std::get<Network>(load_configuration(kStar));
  std::vector<std::vector<std::size_t>> perms(t.node_count());
  for (std::size_t v = 0; v < t.node_count(); ++v) {
    for (std::size_t p = t.degree(v); p-- > 0;) perms[v].push_back(p);
  }
  Network r = t.with_port_orders(perms);
  std::size_t c = r.node_index("c");
  CHECK(r.ports(c).front().neighbor == t.ports(c).back().neighbor);
  CHECK(r.agent_count() == 3);
}

TEST_CASE("line as a path network") {
  Network p = line_to_path(make_line({Scalar(0), Scalar(4), Scalar(9)}));
  CHECK(p.node_count() == 3);
  CHECK(p.edge(1).w == 5);
  CHECK(p.agent_node(2) == 1);
}
