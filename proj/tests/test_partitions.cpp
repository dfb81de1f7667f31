#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "locklab/errors.hpp"
#include "locklab/partitions.hpp"
#include "oracle.hpp"

using namespace locklab;

TEST_CASE("parse and print round trip") {
  const auto p = Partition::parse(5, "45|12|3");
  CHECK(p.to_string() == "12|3|45");
  CHECK(p.size() == 3);
  CHECK(p.together(4, 5));
  CHECK_FALSE(p.together(3, 4));
  CHECK(p.has_singleton());
  CHECK(singleton_witness(p) == 3);
  const auto big = Partition::parse(11, "1,10|2,3|4|5|6|7|8|9|11");
  CHECK(big.to_string() == "1,10|2,3|4|5|6|7|8|9|11");
  CHECK(Partition::parse(11, big.to_string()) == big);
  CHECK_THROWS(Partition::parse(4, "12|23|4"));
  CHECK_THROWS(Partition::parse(4, "12|3"));
}

TEST_CASE("enumeration counts are Bell numbers") {
  for (int m = 1; m <= 9; ++m) {
    std::set<std::string> seen;
    for_each_partition(m, [&](const Partition& p) { seen.insert(p.to_string()); });
    CHECK(static_cast<long long>(seen.size()) == oracle::bell_number(m));
  }
  CHECK_THROWS(enumerate_partitions(11));
}

TEST_CASE("pairings count (m-1)!! and m=4 order is fixed") {
  for (int m = 2; m <= 10; m += 2) CHECK(static_cast<long long>(pairings(m).size()) == oracle::double_factorial_odd(m - 1));
  const auto four = pairings(4);
  REQUIRE(four.size() == 3);
  CHECK(four[0].to_string() == "12|34");
  CHECK(four[1].to_string() == "13|24");
  CHECK(four[2].to_string() == "14|23");
}

TEST_CASE("odd canonical partitions") {
  CHECK(odd_canonical_partitions(5).size() == 10);
  // choose the triple, then pair the rest
  CHECK(odd_canonical_partitions(7).size() == 35 * 3);
  for (const auto& p : odd_canonical_partitions(7)) {
    std::size_t triples = 0;
    for (const auto& b : p.blocks()) triples += b.size() == 3;
    CHECK(triples == 1);
  }
}

TEST_CASE("coalitions and induced partitions") {
  CHECK(induced_partition(Coalition(5, {4, 2})).to_string() == "1|24|3|5");
  CHECK_THROWS(Coalition(4, {1, 2, 3, 4}));
  CHECK_THROWS(Coalition(4, {3}));
}

TEST_CASE("coarsening is a partial order on m=5") {
  const auto all = enumerate_partitions(5);
  for (const auto& a : all) {
    CHECK(is_coarsening(a, a));
    CHECK(is_coarsening(Partition::whole(5), a));
    CHECK(is_coarsening(a, Partition::singletons(5)));
    for (const auto& b : all) {
      if (a != b && is_coarsening(a, b)) CHECK_FALSE(is_coarsening(b, a));
    }
  }
  const auto p = Partition::parse(5, "12|3|45");
  for (const auto& c : immediate_coarsenings(p)) {
    CHECK(c.size() == 2);
    CHECK(is_coarsening(c, p));
  }
  CHECK(immediate_coarsenings(p).size() == 3);
}

TEST_CASE("small examples") {
  CHECK(induced_partition(Coalition(4, {1, 2, 3})).to_string() == "123|4");
  CHECK(induced_partition(Coalition(4, {1, 2})).to_string() == "12|3|4");
  CHECK(induced_partition(Coalition(6, {2, 5})).to_string() == "1|25|3|4|6");
  CHECK(is_coarsening(Partition::whole(4), Partition::parse(4, "12|34")));
  CHECK_FALSE(is_coarsening(Partition::parse(6, "123|456"), Partition::parse(6, "12|34|56")));
  CHECK(pairings(2).size() == 1);
  CHECK(singleton_witness(Partition::parse(4, "12|3|4")) == 3);
  CHECK_FALSE(singleton_witness(Partition::parse(4, "12|34")));
  CHECK(singleton_witness(Partition::singletons(4)) == 1);
  CHECK(enumerate_partitions(1).size() == 1);
}
