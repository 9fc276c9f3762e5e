#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "hyperalg/polynomial.hpp"

using namespace hyperalg;

namespace {

std::vector<VarId> var_pool() {
  std::vector<VarId> vars;
  for (const Edge& e : all_edges(3)) {
    vars.push_back(a_var(e, 3));
    vars.push_back(b_var(e, 3));
  }
  return vars;
}

Polynomial random_poly(std::mt19937_64& rng, int max_terms = 5, int max_vars = 4,
                       int max_deg = 3) {
  static const auto pool = var_pool();
  std::uniform_int_distribution<int> nterms(0, max_terms);
  std::uniform_int_distribution<int> nvars(0, max_vars);
  std::uniform_int_distribution<int> deg(1, max_deg);
  std::uniform_int_distribution<long> num(-6, 6);
  std::uniform_int_distribution<long> den(1, 4);
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  Polynomial p;
  int t = nterms(rng);
  for (int i = 0; i < t; ++i) {
    Monomial m;
    int v = nvars(rng);
    int budget = max_deg;
    for (int k = 0; k < v && budget > 0; ++k) {
      int e = std::min(deg(rng), budget);
      m.exps[pool[pick(rng)]] += e;
      budget -= e;
    }
    p.add_term(std::move(m), make_rational(num(rng), den(rng)));
  }
  return p;
}

std::map<VarId, Rational> random_point(std::mt19937_64& rng) {
  std::map<VarId, Rational> pt;
  std::uniform_int_distribution<long> num(-5, 5);
  std::uniform_int_distribution<long> den(1, 7);
  for (const VarId& v : var_pool()) pt[v] = make_rational(num(rng), den(rng));
  return pt;
}

}  // namespace

TEST_CASE("basic ring identities") {
  auto x = Polynomial::variable(a_var({parse_node("000"), parse_node("100")}, 3));
  auto y = Polynomial::variable(a_var({parse_node("000"), parse_node("010")}, 3));
  CHECK((x + y) * (x - y) == x * x - y * y);
  CHECK((x + y.scaled(-1)) == x - y);
  CHECK((x - x).is_zero());
  CHECK(Polynomial(Rational(0)).is_zero());
  CHECK((x * Polynomial(1)) == x);
}

TEST_CASE("ring axioms on randomized polynomials") {
  std::mt19937_64 rng(123);
  for (int rep = 0; rep < 200; ++rep) {
    auto p = random_poly(rng), q = random_poly(rng), r = random_poly(rng);
    CHECK(p + q == q + p);
    CHECK(p * q == q * p);
    CHECK((p + q) + r == p + (q + r));
    CHECK((p * q) * r == p * (q * r));
    CHECK(p * (q + r) == p * q + p * r);
    CHECK((p - p).is_zero());
  }
}

TEST_CASE("exact evaluation is multiplicative and additive") {
  std::mt19937_64 rng(7);
  for (int rep = 0; rep < 50; ++rep) {
    auto p = random_poly(rng), q = random_poly(rng);
    auto x = random_point(rng);
    CHECK(p.eval_exact(x) * q.eval_exact(x) == (p * q).eval_exact(x));
    CHECK(p.eval_exact(x) + q.eval_exact(x) == (p + q).eval_exact(x));
  }
}

TEST_CASE("evaluation rejects unbound variables by name") {
  auto p = parse_polynomial("a_000_100 + b_011_111");
  std::map<VarId, Rational> x{{a_var({parse_node("000"), parse_node("100")}, 3), 1}};
  CHECK_THROWS_WITH(p.eval_exact(x), Catch::Matchers::ContainsSubstring("b_011_111"));
}

TEST_CASE("substitution") {
  auto expr = parse_polynomial("a_000_001");
  auto repl = parse_polynomial("1 - a_000_100 - a_000_010");
  std::map<VarId, Polynomial> bind{
      {a_var({parse_node("000"), parse_node("001")}, 3), repl}};
  CHECK(expr.substitute(bind) == repl);
  // substitution commutes with evaluation
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 30; ++rep) {
    auto p = random_poly(rng);
    auto x = random_point(rng);
    VarId v = a_var({parse_node("000"), parse_node("100")}, 3);
    auto g = random_poly(rng);
    std::map<VarId, Polynomial> b{{v, g}};
    auto y = x;
    y[v] = g.eval_exact(x);
    CHECK(p.substitute(b).eval_exact(x) == p.eval_exact(y));
  }
}

TEST_CASE("formal gradient") {
  auto p = parse_polynomial("8*b_101_111^2 - b_011_111 - 15*b_101_111 + 7");
  auto g = p.gradient();
  VarId v = b_var({parse_node("101"), parse_node("111")}, 3);
  CHECK(g.at(v) == parse_polynomial("16*b_101_111 - 15"));
  CHECK(Polynomial(Rational(5)).gradient().empty());

  // x^2 y -> 2 x y
  VarId x = a_var({parse_node("000"), parse_node("100")}, 3);
  VarId y = a_var({parse_node("000"), parse_node("010")}, 3);
  auto q = Polynomial::variable(x) * Polynomial::variable(x) * Polynomial::variable(y);
  CHECK(q.gradient().at(x) == Polynomial::variable(x) * Polynomial::variable(y) * Polynomial(2));
}

TEST_CASE("gradient matches central finite differences") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> unit(0.1, 0.9);
  for (int rep = 0; rep < 100; ++rep) {
    auto p = random_poly(rng);
    std::map<VarId, double> x;
    for (const VarId& v : p.variables()) x[v] = unit(rng);
    const double h = 1e-6;
    for (const auto& [v, dp] : p.gradient()) {
      auto hi = x, lo = x;
      hi[v] += h;
      lo[v] -= h;
      double fd = (p.eval_double(hi) - p.eval_double(lo)) / (2 * h);
      double an = dp.eval_double(x);
      CHECK(std::abs(fd - an) <= 1e-5 * std::max(1.0, std::abs(an)));
    }
  }
}

TEST_CASE("parser handles the fixture grammar") {
  auto p = parse_polynomial("3*b_001_101 + 16*b_011_111 + 8*b_101_111 - 10");
  CHECK(p.term_count() == 4);
  CHECK(parse_polynomial("0").is_zero());
  CHECK(parse_polynomial("a_000_100") ==
        Polynomial::variable(a_var({parse_node("000"), parse_node("100")}, 3)));
  CHECK(parse_polynomial("2/3 * a_000_100") ==
        Polynomial::variable(a_var({parse_node("000"), parse_node("100")}, 3))
            .scaled(make_rational(2, 3)));
  CHECK(parse_polynomial("a_000_100^2") ==
        parse_polynomial("a_000_100 * a_000_100"));
  // whitespace insignificant
  CHECK(parse_polynomial(" a_000_100+b_011_111 ") ==
        parse_polynomial("a_000_100 + b_011_111"));
}

TEST_CASE("parser reports errors with a position") {
  CHECK_THROWS_AS(parse_polynomial("a_000_100 +"), ParseError);
  CHECK_THROWS_AS(parse_polynomial("c_000_100"), ParseError);
  CHECK_THROWS_AS(parse_polynomial("a_000_100 a_000_010"), ParseError);
  CHECK_THROWS_AS(parse_polynomial("1/0"), ParseError);
  // a_110_100 is not an acquisition edge
  CHECK_THROWS_AS(parse_polynomial("a_110_100"), ParseError);
  // mixed label lengths
  CHECK_THROWS_AS(parse_polynomial("a_000_100 + a_0000_1000"), ParseError);
  try {
    parse_polynomial("a_000_100 + !");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.position == 12);
  }
}

TEST_CASE("printer renders rationals and exponents") {
  auto p = parse_polynomial("a_000_100^2 - 1/2");
  CHECK(to_text(p) == "a_000_100^2 - 1/2");
  CHECK(to_text(parse_polynomial("0")) == "0");
  CHECK(to_text(parse_polynomial("-a_000_100 + 1")) == "-a_000_100 + 1");
}

TEST_CASE("parse inverts to_text on randomized polynomials") {
  std::mt19937_64 rng(23);
  for (int rep = 0; rep < 500; ++rep) {
    auto p = random_poly(rng);
    CHECK(parse_polynomial(to_text(p), 3) == p);
  }
}
