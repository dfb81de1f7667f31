#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "locklab/errors.hpp"
#include "locklab/sets.hpp"
#include "oracle.hpp"

using namespace locklab;

TEST_CASE("built-in set matches the definition") {
  for (int m = 3; m <= 10; ++m) {
    const auto set = build_locked_set(m);
    const auto expect = oracle::locked_set(m);
    REQUIRE(set.size() == expect.size());
    CHECK(set.size() == static_cast<std::size_t>(m + 2));
    for (std::size_t i = 0; i < set.size(); ++i) CHECK((oracle::to_eigen(set.state(i)) - expect[i]).norm() < 1e-12);
    CHECK_FALSE(set.is_custom());
    const auto report = check_orthogonality(set);
    CHECK(report.pass);
    CHECK(report.max_overlap < 1e-12);
  }
  CHECK_THROWS_AS(build_locked_set(2), DomainError);
}

TEST_CASE("m=4 listing") {
  const auto set = build_locked_set(4);
  CHECK((oracle::to_eigen(set.state(3)) - oracle::ghz_pair("0100", 1.0)).norm() < 1e-12);
  CHECK(flip_state_index(2) == 3);
}

TEST_CASE("set files round trip") {
  const auto set = build_locked_set(6);
  std::stringstream buf;
  write_set(buf, set);
  const auto back = read_set(buf);
  REQUIRE(back.size() == set.size());
  for (std::size_t i = 0; i < set.size(); ++i) CHECK(fidelity(back.state(i), set.state(i)) == doctest::Approx(1.0));
  CHECK_FALSE(back.is_custom());
}

TEST_CASE("reordered or foreign sets are custom") {
  std::istringstream in("m=3 N=2\n+1/sqrt2*001;+1/sqrt2*110\n+1/sqrt2*000;-1/sqrt2*111\n");
  CHECK(read_set(in).is_custom());
}

TEST_CASE("parse errors carry line numbers") {
  auto line_of = [](const std::string& text) {
    std::istringstream in(text);
    try {
      read_set(in);
    } catch (const ParseError& e) {
      return e.line();
    }
    return std::size_t{0};
  };
  CHECK(line_of("# header\nm=3 N=1\n+1/sqrt2*00;+1/sqrt2*111\n") == 3);
  CHECK(line_of("m=3 N=2\n+1/sqrt2*000;+1/sqrt2*111\n") == 1);
  CHECK(line_of("m=x N=2\n") == 1);
  CHECK(line_of("m=3 N=1\n+1/sqrt2*000;+1/sqrt2*1x1\n") == 2);
}

TEST_CASE("non-orthogonal sets are rejected") {
  std::istringstream in("m=3 N=2\n+1/sqrt2*000;+1/sqrt2*111\n+1/sqrt2*000;+1/sqrt2*011\n");
  CHECK_THROWS_AS(read_set(in), InvariantError);
}

TEST_CASE("duplicated states fail the orthogonality check") {
  const auto set = build_locked_set(4);
  const auto report = check_orthogonality(std::vector<StateVector>{set.state(2), set.state(2)});
  CHECK_FALSE(report.pass);
  CHECK(report.max_overlap == doctest::Approx(1.0));
  CHECK(check_orthogonality(build_locked_set(8)).pass);
}
