#include <catch2/catch_amalgamated.hpp>

#include <bit>
#include <set>

#include "hyperalg/hypercube.hpp"

using namespace hyperalg;

TEST_CASE("node labels render most significant feature first") {
  CHECK(node_label(NodeId{0}, 3) == "000");
  CHECK(node_label(parse_node("100"), 3) == "100");
  CHECK(node_label(parse_node("001"), 3) == "001");
  CHECK(node_label(parse_node("110"), 3) == "110");
  for (std::uint32_t b = 0; b < 16; ++b)
    CHECK(parse_node(node_label(NodeId{b}, 4)) == NodeId{b});
  CHECK_THROWS_AS(parse_node("0a1"), std::invalid_argument);
  CHECK_THROWS_AS(parse_node(""), std::invalid_argument);
}

TEST_CASE("edge counts per dimension") {
  CHECK(all_edges(3).size() == 12);
  CHECK(all_edges(1).size() == 1);
  CHECK(all_edges(4).size() == 32);
  for (int L = 1; L <= 10; ++L)
    CHECK(all_edges(L).size() == (std::size_t{1} << (L - 1)) * static_cast<std::size_t>(L));
}

TEST_CASE("edges are canonical and ascend by (src, dst)") {
  auto edges = all_edges(4);
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    auto a = std::pair{edges[i].src.bits, edges[i].dst.bits};
    auto b = std::pair{edges[i + 1].src.bits, edges[i + 1].dst.bits};
    CHECK(a < b);
  }
  for (const Edge& e : edges) {
    CHECK(is_edge(e, 4));
    CHECK(level(e.dst) == level(e.src) + 1);
  }
}

TEST_CASE("incoming and outgoing adjacency") {
  auto in = incoming(parse_node("110"), 3);
  REQUIRE(in.size() == 2);
  CHECK(node_label(in[0].src, 3) == "100");
  CHECK(node_label(in[1].src, 3) == "010");

  auto single = incoming(parse_node("100"), 3);
  REQUIRE(single.size() == 1);
  CHECK(single[0].src == NodeId{0});

  CHECK(outgoing(NodeId{0}, 4).size() == 4);
  for (int L = 1; L <= 6; ++L)
    for (std::uint32_t b = 0; b < (std::uint32_t{1} << L); ++b) {
      NodeId n{b};
      CHECK(outgoing(n, L).size() == static_cast<std::size_t>(L - level(n)));
      CHECK(incoming(n, L).size() == static_cast<std::size_t>(level(n)));
    }
  // incoming sources ascend
  for (const NodeId& n : inner_nodes_by_level(5)) {
    auto es = incoming(n, 5);
    for (std::size_t i = 0; i + 1 < es.size(); ++i)
      CHECK(es[i].src.bits < es[i + 1].src.bits);
  }
  CHECK_THROWS_AS(incoming(NodeId{8}, 3), std::invalid_argument);
}

TEST_CASE("dimension bounds") {
  CHECK_THROWS_AS(check_dimension(0), std::invalid_argument);
  CHECK_THROWS_AS(check_dimension(17), std::invalid_argument);
  CHECK_NOTHROW(check_dimension(1));
  CHECK_NOTHROW(check_dimension(16));
  CHECK_THROWS_AS(all_edges(0), std::invalid_argument);
}

TEST_CASE("free variable and generator counts") {
  auto c3 = free_var_counts(3);
  CHECK(c3.free_a == 5);
  CHECK(c3.free_b == 5);
  CHECK(c3.reduced_generators == 9);
  auto c4 = free_var_counts(4);
  CHECK(c4.free_a == 17);
  CHECK(c4.free_b == 17);
  CHECK(c4.reduced_generators == 28);
  auto c2 = free_var_counts(2);
  CHECK(c2.free_a == 1);
  CHECK(c2.free_b == 1);
  CHECK(c2.reduced_generators == 2);
}

TEST_CASE("free_a equals enumeration of non-forced edges minus one per source") {
  for (int L = 1; L <= 10; ++L) {
    long direct = 0;
    for (std::uint32_t b = 0; b < (std::uint32_t{1} << L); ++b) {
      NodeId n{b};
      if (level(n) <= L - 2) direct += (L - level(n)) - 1;
    }
    CHECK(free_var_counts(L).free_a == direct);
  }
}

TEST_CASE("variable counts grow at most like L * 2^L") {
  for (int L = 1; L <= 10; ++L) {
    auto c = free_var_counts(L);
    long bound = static_cast<long>(L) << L;
    CHECK(c.free_a <= bound);
    CHECK(c.free_b <= bound);
    CHECK(c.reduced_generators <= 2 * bound);
  }
}

TEST_CASE("canonical eliminations partition the edge set") {
  for (int L = 1; L <= 8; ++L) {
    auto el = canonical_eliminations(L);
    auto c = free_var_counts(L);
    CHECK(el.free_a.size() == static_cast<std::size_t>(c.free_a));
    CHECK(el.free_b.size() == static_cast<std::size_t>(c.free_b));

    auto key = [](const Edge& e) { return std::pair{e.src.bits, e.dst.bits}; };
    std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
    for (const auto& group : {el.free_a, el.eliminated_a, el.forced_a})
      for (const Edge& e : group) CHECK(seen.insert(key(e)).second);
    CHECK(seen.size() == all_edges(L).size());
    seen.clear();
    for (const auto& group : {el.free_b, el.eliminated_b, el.forced_b})
      for (const Edge& e : group) CHECK(seen.insert(key(e)).second);
    CHECK(seen.size() == all_edges(L).size());

    for (const Edge& e : el.forced_a) CHECK(level(e.src) == L - 1);
    for (const Edge& e : el.forced_b) CHECK(level(e.dst) == 1);
    // the eliminated a sits on the largest destination of its source node;
    // the eliminated b on the smallest source of its destination node
    for (const Edge& e : el.eliminated_a)
      for (const Edge& s : outgoing(e.src, L)) CHECK(s.dst.bits <= e.dst.bits);
    for (const Edge& e : el.eliminated_b)
      for (const Edge& s : incoming(e.dst, L)) CHECK(s.src.bits >= e.src.bits);
  }
}

TEST_CASE("worked L=3 elimination choice") {
  auto el = canonical_eliminations(3);
  auto has = [&](const std::vector<Edge>& v, const char* s, const char* d) {
    Edge e{parse_node(s), parse_node(d)};
    for (const Edge& x : v)
      if (x == e) return true;
    return false;
  };
  // free transition variables
  for (auto [s, d] : {std::pair{"000", "100"}, {"000", "010"}, {"001", "101"},
                      {"010", "110"}, {"100", "110"}})
    CHECK(has(el.free_a, s, d));
  // free history variables
  for (auto [s, d] : {std::pair{"001", "101"}, {"001", "011"}, {"010", "110"},
                      {"011", "111"}, {"101", "111"}})
    CHECK(has(el.free_b, s, d));
  CHECK(has(el.eliminated_a, "000", "001"));
  CHECK(has(el.eliminated_b, "100", "110"));
  CHECK(has(el.eliminated_b, "110", "111"));
  CHECK(has(el.forced_b, "000", "100"));
  CHECK(dropped_node_at_level(3, 1) == parse_node("001"));
  CHECK(dropped_node_at_level(3, 2) == parse_node("011"));
}
