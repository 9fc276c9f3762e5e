#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <random>
#include <sstream>

#include "hyperalg/dataset.hpp"
#include "hyperalg/fixtures.hpp"

using namespace hyperalg;

TEST_CASE("load_samples tallies binary strings") {
  auto d = load_samples({"000", "100", "011", "011", "111"});
  CHECK(d.dimension() == 3);
  CHECK(d.total() == 5);
  CHECK(d.count(parse_node("000")) == 1);
  CHECK(d.count(parse_node("011")) == 2);
  CHECK(d.count(parse_node("100")) == 1);
  CHECK(d.count(parse_node("111")) == 1);
  CHECK(d.count(parse_node("010")) == 0);

  auto single = load_samples({"0"});
  CHECK(single.dimension() == 1);
  CHECK(single.total() == 1);
  CHECK(single.count(NodeId{0}) == 1);

  auto toy = load_samples({"001", "001", "100", "101", "101", "101", "101", "101"});
  CHECK(toy.total() == 8);
  CHECK(toy.count(parse_node("001")) == 2);
  CHECK(toy.count(parse_node("100")) == 1);
  CHECK(toy.count(parse_node("101")) == 5);
}

TEST_CASE("load_samples rejects malformed input with line numbers") {
  auto expect_line = [](const std::vector<std::string>& lines, const char* frag) {
    try {
      load_samples(lines);
      FAIL("expected DatasetError");
    } catch (const DatasetError& e) {
      CHECK_THAT(e.what(), Catch::Matchers::ContainsSubstring(frag));
    }
  };
  expect_line({"000", "0100"}, "line 2");
  expect_line({"0a0"}, "line 1");
  expect_line({}, "empty");
  CHECK_THROWS_AS(load_samples({"# only a comment"}), DatasetError);
}

TEST_CASE("sample files support comments") {
  std::istringstream in("# header\n001\n\n100  \n# trailing\n001\n");
  auto d = load_samples(in);
  CHECK(d.total() == 3);
  CHECK(d.count(parse_node("001")) == 2);
}

TEST_CASE("load_counts builds the toy dataset") {
  auto d = load_counts({{"001", 2}, {"100", 1}, {"101", 5}});
  CHECK(d.dimension() == 3);
  CHECK(d.total() == 8);
  CHECK(d.count(parse_node("101")) == 5);
  CHECK(d.count(parse_node("000")) == 0);
  CHECK_THROWS_AS(load_counts({{"001", 2}, {"001", 1}}), DatasetError);
  CHECK_THROWS_AS(load_counts({{"0000", 0}, {"1111", 0}}), DatasetError);
  CHECK_THROWS_AS(load_counts({{"01", 1}, {"001", 1}}), DatasetError);
}

TEST_CASE("csv count files") {
  std::istringstream in("state,count\n001,2\n100,1\n101,5\n");
  auto d = load_counts_csv(in);
  CHECK(d.total() == 8);
  CHECK(d.count(parse_node("101")) == 5);
  std::istringstream bad("state,count\n001,-2\n");
  CHECK_THROWS_AS(load_counts_csv(bad), DatasetError);
  std::istringstream nohdr("001,2\n");
  CHECK_THROWS_AS(load_counts_csv(nohdr), DatasetError);
}

TEST_CASE("proportions are exact rationals summing to one") {
  auto toy = fixtures::toy_dataset();
  auto N = toy.proportions();
  CHECK(N[parse_node("001").bits] == make_rational(1, 4));
  CHECK(N[parse_node("100").bits] == make_rational(1, 8));
  CHECK(N[parse_node("101").bits] == make_rational(5, 8));
  Rational sum = 0;
  for (const auto& n : N) sum += n;
  CHECK(sum == 1);

  auto skew = load_samples(fixtures::skewed_samples());
  auto Ns = skew.proportions();
  CHECK(Ns[parse_node("011").bits] == make_rational(2, 5));
  CHECK(Ns[parse_node("000").bits] == make_rational(1, 5));

  auto one = load_counts({{"11", 4}});
  CHECK(one.proportions()[3] == 1);
}

TEST_CASE("count and sample forms agree") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> c(0, 4);
  for (int rep = 0; rep < 20; ++rep) {
    int L = 1 + rep % 4;
    std::vector<std::pair<std::string, std::uint64_t>> entries;
    std::vector<std::string> lines;
    bool any = false;
    for (std::uint32_t b = 0; b < (std::uint32_t{1} << L); ++b) {
      std::uint64_t k = static_cast<std::uint64_t>(c(rng));
      if (k == 0) continue;
      any = true;
      entries.push_back({node_label(NodeId{b}, L), k});
      for (std::uint64_t i = 0; i < k; ++i) lines.push_back(node_label(NodeId{b}, L));
    }
    if (!any) continue;
    auto a = load_counts(entries);
    auto b = load_samples(lines);
    CHECK(a.digest() == b.digest());
    for (std::uint32_t n = 0; n < (std::uint32_t{1} << L); ++n)
      CHECK(a.count(NodeId{n}) == b.count(NodeId{n}));
  }
}

TEST_CASE("digest distinguishes datasets and is stable") {
  auto a = fixtures::toy_dataset();
  auto b = fixtures::toy_dataset();
  CHECK(a.digest() == b.digest());
  auto c = load_counts({{"001", 2}, {"100", 1}, {"101", 4}});
  CHECK(a.digest() != c.digest());
}

TEST_CASE("data files on disk match the embedded fixtures") {
  {
    std::ifstream in(std::string(HYPERALG_DATA_DIR) + "/toy_counts.csv");
    REQUIRE(in);
    auto d = load_counts_csv(in);
    CHECK(d.digest() == fixtures::toy_dataset().digest());
  }
  {
    std::ifstream in(std::string(HYPERALG_DATA_DIR) + "/skewed_samples.txt");
    REQUIRE(in);
    auto d = load_samples(in);
    CHECK(d.digest() == load_samples(fixtures::skewed_samples()).digest());
  }
  {
    std::ifstream in(std::string(HYPERALG_DATA_DIR) + "/ovarian_counts.csv");
    REQUIRE(in);
    auto d = load_counts_csv(in);
    CHECK(d.digest() == fixtures::ovarian_dataset(0, 0).digest());
    CHECK(d.total() == 57);
  }
}
