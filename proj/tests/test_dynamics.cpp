#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "hyperalg/dynamics.hpp"
#include "hyperalg/fixtures.hpp"
#include "hyperalg/sysgen.hpp"

using namespace hyperalg;

namespace {

TransitionModel uniform_model(int L) {
  std::map<Edge, Rational> a;
  for (const Edge& e : all_edges(L))
    a[e] = make_rational(1, L - level(e.src));
  return TransitionModel(L, std::move(a));
}

TransitionModel toy_component1_model(const Rational& t) {
  std::map<VarId, Rational> free_a;
  auto set = [&](const char* s, const char* d, Rational v) {
    free_a[a_var({parse_node(s), parse_node(d)}, 3)] = std::move(v);
  };
  set("000", "100", make_rational(1, 3));
  set("000", "010", 0);
  set("001", "101", 1);
  set("010", "110", t);
  set("100", "110", 0);
  return TransitionModel::from_free_a(3, free_a);
}

}  // namespace

TEST_CASE("model construction validates edges and sums") {
  CHECK_THROWS_AS(TransitionModel(2, {}), std::invalid_argument);
  std::map<Edge, Rational> a;
  for (const Edge& e : all_edges(2)) a[e] = make_rational(1, 2);
  auto bad = a;
  bad[all_edges(2)[0]] = make_rational(3, 4);
  CHECK_THROWS_AS(TransitionModel(2, bad), std::invalid_argument);
  bad[all_edges(2)[0]] = make_rational(-1, 4);
  CHECK_THROWS_AS(TransitionModel(2, bad), std::invalid_argument);
  a[all_edges(2)[2]] = 1;  // single outgoing edges carry 1
  a[all_edges(2)[3]] = 1;
  CHECK_NOTHROW(TransitionModel(2, a));
}

TEST_CASE("reach probabilities") {
  auto u = uniform_model(3);
  auto r = u.reach();
  CHECK(r[parse_node("110").bits] == make_rational(1, 3));
  CHECK(r[0] == 1);
  CHECK(r[7] == 1);

  auto m = toy_component1_model(make_rational(1, 2));
  auto rm = m.reach();
  CHECK(rm[parse_node("101").bits] == 1);
  CHECK(rm[parse_node("010").bits] == 0);

  std::mt19937_64 rng(2);
  for (int L = 1; L <= 5; ++L) {
    auto rand = random_model(L, rng);
    auto rr = rand.reach();
    for (int lv = 0; lv <= L; ++lv) {
      Rational sum = 0;
      for (std::uint32_t n = 0; n < (std::uint32_t{1} << L); ++n)
        if (level(NodeId{n}) == lv) sum += rr[n];
      CHECK(sum == 1);
    }
    CHECK(rr[(std::uint32_t{1} << L) - 1] == 1);
  }
}

TEST_CASE("history-parameter oracle") {
  auto m = toy_component1_model(make_rational(1, 2));
  auto b = m.b_oracle();
  Edge e{parse_node("101"), parse_node("111")};
  REQUIRE(b.at(e).has_value());
  CHECK(*b.at(e) == 1);
  // zero-reach targets have undefined history parameters
  Edge via010{parse_node("010"), parse_node("110")};
  CHECK(!b.at(via010).has_value());

  auto u = uniform_model(2);
  auto bu = u.b_oracle();
  CHECK(*bu.at(Edge{parse_node("01"), parse_node("11")}) == make_rational(1, 2));
  CHECK(*bu.at(Edge{parse_node("10"), parse_node("11")}) == make_rational(1, 2));

  // defined values per target sum to one
  std::mt19937_64 rng(9);
  for (int rep = 0; rep < 5; ++rep) {
    int L = 2 + rep % 3;
    auto rand = random_model(L, rng);
    auto br = rand.b_oracle();
    for (std::uint32_t n = 1; n < (std::uint32_t{1} << L); ++n) {
      Rational sum = 0;
      bool defined = true;
      for (const Edge& e : incoming(NodeId{n}, L)) {
        if (!br.at(e)) defined = false;
        else sum += *br.at(e);
      }
      if (defined) CHECK(sum == 1);
    }
  }
}

TEST_CASE("exact proportions") {
  SamplingDistribution q0;
  q0.weights = {1, 0, 0, 0};
  auto u = uniform_model(3);
  auto n0 = exact_proportions(u, q0);
  CHECK(n0[0] == 1);

  auto q = SamplingDistribution::uniform(3);
  auto m = toy_component1_model(make_rational(1, 4));
  CHECK(exact_proportions(m, q)[parse_node("101").bits] == make_rational(1, 4));

  auto u2 = uniform_model(2);
  auto n2 = exact_proportions(u2, SamplingDistribution::uniform(2));
  CHECK(n2[0] == make_rational(1, 3));
  CHECK(n2[1] == make_rational(1, 6));
  CHECK(n2[2] == make_rational(1, 6));
  CHECK(n2[3] == make_rational(1, 3));

  Rational sum = 0;
  std::mt19937_64 rng(12);
  auto rand = random_model(4, rng);
  for (const auto& n : exact_proportions(rand, SamplingDistribution::uniform(4))) sum += n;
  CHECK(sum == 1);

  SamplingDistribution bad;
  bad.weights = {make_rational(1, 2), make_rational(1, 2)};
  CHECK_THROWS_AS(exact_proportions(u, bad), std::invalid_argument);
}

TEST_CASE("sampling is deterministic and respects point masses") {
  SamplingDistribution q0;
  q0.weights = {1, 0, 0, 0};
  auto u = uniform_model(3);
  auto d = sample_dataset(u, q0, 1, 77);
  CHECK(d.total() == 1);
  CHECK(d.count(NodeId{0}) == 1);

  auto q = SamplingDistribution::uniform(3);
  auto d1 = sample_dataset(u, q, 500, 123);
  auto d2 = sample_dataset(u, q, 500, 123);
  CHECK(d1.digest() == d2.digest());
  auto d3 = sample_dataset(u, q, 500, 124);
  CHECK(d1.digest() != d3.digest());
  CHECK_THROWS_AS(sample_dataset(u, q, 0, 1), std::invalid_argument);
}

TEST_CASE("empirical proportions approach the exact ones") {
  auto u = uniform_model(3);
  auto q = SamplingDistribution::uniform(3);
  auto exact = exact_proportions(u, q);
  std::uint64_t n = 100000;
  auto d = sample_dataset(u, q, n, 2024);
  for (std::uint32_t s = 0; s < 8; ++s) {
    double p = to_double(exact[s]);
    double sigma = std::sqrt(p * (1 - p) / static_cast<double>(n));
    double emp = static_cast<double>(d.count(NodeId{s})) / static_cast<double>(n);
    CHECK(std::abs(emp - p) <= 5 * sigma + 1e-9);
  }
}

TEST_CASE("round trip: simulated models lie on their own variety") {
  std::mt19937_64 rng(55);
  for (int rep = 0; rep < 9; ++rep) {
    int L = 2 + rep % 3;
    auto m = random_model(L, rng);
    auto q = SamplingDistribution::uniform(L);
    auto sys = build_system(L, exact_proportions(m, q), SystemMode::reduced);
    auto el = canonical_eliminations(L);
    std::map<VarId, Rational> pt;
    for (const Edge& e : el.free_a) pt[a_var(e, L)] = m.a(e);
    auto b = m.b_oracle();
    for (const Edge& e : el.free_b) {
      REQUIRE(b.at(e).has_value());  // strictly positive model
      pt[b_var(e, L)] = *b.at(e);
    }
    for (const auto& r : residuals_exact(sys, pt)) CHECK(r == 0);
  }
}
