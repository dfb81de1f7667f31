#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "locklab/errors.hpp"
#include "locklab/resources.hpp"

using namespace locklab;

TEST_CASE("cost table") {
  for (int m = 4; m <= 10; m += 2) {
    CHECK(min_bell_cost(profile_s1(m)).cost == m / 2);
    CHECK(min_bell_cost(profile_s2(m)).cost == m - 1);
  }
  CHECK(min_bell_cost(profile_s1(3)).cost == 2);
  CHECK(min_bell_cost(profile_s1(5)).cost == 3);
  CHECK(min_bell_cost(profile_s1(7)).cost == 4);
}

TEST_CASE("closed-form gap") {
  CHECK(delta_e(3) == 0);
  CHECK(delta_e(4) == 1);
  CHECK(delta_e(6) == 2);
  CHECK(delta_e(5) == 1);
  CHECK(delta_e(9) == 3);
  CHECK_THROWS_AS(delta_e(2), DomainError);
  const auto rows = delta_table(4, 8, false);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].m == 4);
  CHECK(rows[0].e1 == 2);
  CHECK(rows[0].e2 == 3);
  CHECK(rows[0].delta == 1);
  CHECK(rows[2].delta == 3);
  CHECK(delta_table(5, 9, true).size() == 5);
}

TEST_CASE("plan rule") {
  const auto plan = plan_for(Partition::parse(4, "12|34"));
  REQUIRE(plan.moves.size() == 2);
  CHECK(plan.moves[0] == TeleportMove{2, 1});
  CHECK(plan.moves[1] == TeleportMove{4, 3});
  CHECK(apply_moves(4, plan.moves) == Partition::parse(4, "12|34"));
  const auto big = plan_for(Partition::parse(6, "135|2|46"));
  CHECK(big.bell_cost == 3);
  CHECK(apply_moves(6, big.moves) == Partition::parse(6, "135|2|46"));
  CHECK_THROWS_AS(apply_moves(3, {{1, 1}}), SamePartyError);
}

TEST_CASE("insufficiency") {
  for (int m = 4; m <= 10; m += 2) {
    const auto v = insufficiency_check(profile_s1(m), m / 2 - 1);
    CHECK(v.verdict == Sufficiency::Insufficient);
    REQUIRE(v.best_status);
    CHECK(v.best_status->kind == Lock::Locked);
    CHECK(v.best_status->certificate);
    CHECK(insufficiency_check(profile_s1(m), m / 2).verdict == Sufficiency::Sufficient);
  }
  CHECK(insufficiency_check(profile_s2(6), 4).verdict == Sufficiency::Insufficient);
  CHECK(insufficiency_check(profile_s2(6), 5).verdict == Sufficiency::Sufficient);
  CHECK_THROWS_AS(insufficiency_check(profile_s1(4), -1), DomainError);
}

TEST_CASE("optimistic costs are flagged") {
  const auto c = min_bell_cost(profile_s1(6), true);
  CHECK(c.cost <= 3);
  CHECK(min_bell_cost(profile_s1(6)).certified);
}

TEST_CASE("baseline is rule based") {
  const auto p = profile_s2(5);
  CHECK(p.status(Partition::whole(5)).kind == Lock::Open);
  CHECK(p.status(Partition::parse(5, "1234|5")).kind == Lock::Locked);
  CHECK(p.status(Partition::parse(5, "12|345")).kind == Lock::Locked);
}

TEST_CASE("ledger") {
  Ledger l(2);
  l.consume();
  l.consume();
  CHECK(l.remaining() == 0);
  CHECK_THROWS_AS(l.consume(), BudgetExceeded);
  CHECK_THROWS_AS(Ledger(-1), DomainError);
}

TEST_CASE("profile bounds") {
  CHECK_THROWS_AS(profile_s1(2), DomainError);
  CHECK_THROWS_AS(profile_s1(13), DomainError);
}

TEST_CASE("baseline examples") {
  const auto four = profile_s2(4);
  std::size_t open = 0;
  for (const auto& p : enumerate_partitions(4)) open += four.status(p).kind == Lock::Open;
  CHECK(open == 1);
  CHECK(profile_s2(2).status(Partition::whole(2)).kind == Lock::Open);
  const auto plan = plan_extraction(profile_s2(5));
  REQUIRE(plan.moves.size() == 4);
  for (const auto& mv : plan.moves) CHECK(mv.dest == 1);
  CHECK(plan_extraction(profile_s1(6)).bell_cost == 3);
  CHECK(insufficiency_check(profile_s1(6), 2).verdict == Sufficiency::Insufficient);
  const auto ok = insufficiency_check(profile_s1(4), 2);
  REQUIRE(ok.plan);
  CHECK(ok.plan->target.to_string() == "12|34");
}
