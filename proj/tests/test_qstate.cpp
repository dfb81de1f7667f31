#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "locklab/errors.hpp"
#include "locklab/qstate.hpp"
#include "oracle.hpp"

using namespace locklab;

namespace {

StateVector random_state(int m, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::vector<Complex> a(std::size_t{1} << m);
  for (auto& x : a) x = {g(rng), g(rng)};
  return StateVector::normalized(m, a);
}

}  // namespace

TEST_CASE("bitstrings are big-endian over parties") {
  const auto b = Bitstring::parse("0100");
  CHECK(b.index() == 4);
  CHECK(b.complement().to_string() == "1011");
  CHECK(b.weight() == 1);
  CHECK(Bitstring::from_index(11, 4).to_string() == "1011");
  CHECK_THROWS_AS(Bitstring::parse("01a"), DomainError);
}

TEST_CASE("state construction validates length and norm") {
  CHECK_THROWS_AS(StateVector(2, std::vector<Complex>(3, 0.5)), DimensionMismatch);
  CHECK_THROWS_AS(StateVector(1, {1.0, 1.0}), InvariantError);
  CHECK_THROWS_AS(StateVector::normalized(2, std::vector<Complex>(4, 0.0)), AllZeroError);
  const auto s = StateVector::normalized(1, {3.0, 4.0});
  CHECK(std::abs(s[0] - Complex(0.6)) < 1e-15);
  CHECK(std::abs(s.norm() - 1.0) < kNormTolerance);
}

TEST_CASE("superpose matches a directly written GHZ pair") {
  const std::vector<Term> terms{{1.0, Bitstring::parse("0100")}, {1.0, Bitstring::parse("1011")}};
  const auto s = superpose(terms);
  const auto expect = oracle::ghz_pair("0100", 1.0);
  CHECK((oracle::to_eigen(s) - expect).norm() < 1e-12);
  CHECK(fidelity(s, oracle::from_eigen(4, expect)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("projector application agrees with the full-register matrix") {
  std::mt19937_64 rng(11);
  const auto psi = random_state(4, rng);
  const auto p = LocalProjector::from_bitstrings({2, 4}, {Bitstring::parse("01"), Bitstring::parse("10")});
  const auto got = apply_projector(psi, p);
  const oracle::Vec out = oracle::embed(4, {2, 4}, oracle::local_matrix(p)) * oracle::to_eigen(psi);
  CHECK(got.probability == doctest::Approx(out.squaredNorm()).epsilon(1e-12));
  REQUIRE(got.post_state);
  CHECK((oracle::to_eigen(*got.post_state) - out / out.norm()).norm() < 1e-12);
}

TEST_CASE("projector sets report their completeness defect") {
  const std::vector<LocalProjector> full{
      LocalProjector::from_bitstrings({1, 2}, {Bitstring::parse("00"), Bitstring::parse("11")}),
      LocalProjector::from_bitstrings({1, 2}, {Bitstring::parse("01"), Bitstring::parse("10")})};
  CHECK(completeness_defect(full) < 1e-12);
  const std::vector<LocalProjector> partial(full.begin(), full.begin() + 1);
  CHECK(completeness_defect(partial) == doctest::Approx(1.0));
  CHECK_THROWS(LocalProjector({1}, {{1.0, 0.0}, {1.0, 0.0}}));
}

TEST_CASE("X-basis product measurement matches outcome enumeration") {
  std::mt19937_64 rng(5);
  const auto psi = random_state(3, rng);
  const auto outcomes = measure_product(psi, ProductObservable::uniform({1, 2, 3}, PauliBasis::X));
  double total = 0.0;
  for (const auto& o : outcomes) {
    const oracle::Vec proj =
        oracle::product_projector(3, {1, 2, 3}, o.outcome.to_string(), PauliBasis::X) * oracle::to_eigen(psi);
    CHECK(o.probability == doctest::Approx(proj.squaredNorm()).epsilon(1e-12));
    total += o.probability;
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("X parity separates |0^m> + |1^m> from |0^m> - |1^m>") {
  for (int m = 2; m <= 6; ++m) {
    for (double sign : {1.0, -1.0}) {
      const auto psi = oracle::from_eigen(m, oracle::ghz_pair(std::string(m, '0'), sign));
      std::vector<int> all;
      for (int p = 1; p <= m; ++p) all.push_back(p);
      for (const auto& o : measure_product(psi, ProductObservable::uniform(all, PauliBasis::X), false)) {
        CHECK(o.outcome.weight() % 2 == (sign > 0 ? 0 : 1));
      }
    }
  }
}

TEST_CASE("Schmidt coefficients agree with reduced density eigenvalues") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 5; ++trial) {
    const auto psi = random_state(5, rng);
    const std::vector<int> left{2, 5};
    const auto got = schmidt_coefficients(psi, left);
    const auto expect = oracle::schmidt(5, oracle::to_eigen(psi), left);
    REQUIRE(got.size() == expect.size());
    for (std::size_t i = 0; i < got.size(); ++i) CHECK(got[i] == doctest::Approx(expect[i]).epsilon(1e-9));
  }
  const auto ghz = oracle::from_eigen(4, oracle::ghz_pair("0100", 1.0));
  const auto s = schmidt_coefficients(ghz, {3});
  REQUIRE(s.size() == 2);
  CHECK(s[0] == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("teleport merge relocates without touching amplitudes") {
  const auto psi = oracle::from_eigen(3, oracle::ghz_pair("010", -1.0));
  auto located = LocatedState::distributed(psi);
  CHECK(located.location == std::vector<int>{1, 2, 3});
  located = teleport_merge(located, 3, 1);
  CHECK(located.location == std::vector<int>{1, 2, 1});
  CHECK(fidelity(located.state, psi) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(teleport_merge(located, 2, 2), SamePartyError);
}

TEST_CASE("teleportation circuit reproduces 100 random states") {
  std::mt19937_64 rng(20240);
  double worst = 1.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int m = 1 + trial % 4;
    const auto psi = random_state(m, rng);
    const int party = 1 + trial % m;
    const auto branches = exact_teleport_circuit(psi, party);
    REQUIRE(branches.size() == 4);
    double total = 0.0;
    for (const auto& b : branches) {
      total += b.probability;
      CHECK(b.probability == doctest::Approx(0.25).epsilon(1e-9));
      worst = std::min(worst, fidelity(b.output, psi));
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(worst >= 1.0 - 1e-9);
}

TEST_CASE("basis states and overlaps") {
  CHECK(basis_state(Bitstring::parse("0000"))[0] == Complex(1.0));
  CHECK(basis_state(Bitstring::parse("1111"))[15] == Complex(1.0));
  const auto s = basis_state(Bitstring::parse("0110"));
  CHECK(s[6] == Complex(1.0));
  CHECK(std::abs(s.norm() - 1.0) < 1e-15);

  const auto plus = oracle::from_eigen(4, oracle::ghz_pair("0000", 1.0));
  const auto minus = oracle::from_eigen(4, oracle::ghz_pair("0000", -1.0));
  CHECK(std::abs(inner_product(plus, minus)) < 1e-15);
  CHECK(std::abs(inner_product(plus, plus) - 1.0) < 1e-12);
  CHECK(std::abs(inner_product(basis_state(Bitstring::parse("0000")), plus) - 1 / std::sqrt(2.0)) < 1e-12);
  const std::vector<Term> single{{1.0, Bitstring::parse("0101")}};
  CHECK(fidelity(superpose(single), basis_state(Bitstring::parse("0101"))) == doctest::Approx(1.0));
}

TEST_CASE("pair projections on GHZ pairs") {
  const auto even = LocalProjector::from_bitstrings({3, 4}, {Bitstring::parse("00"), Bitstring::parse("11")});
  const auto odd = LocalProjector::from_bitstrings({3, 4}, {Bitstring::parse("01"), Bitstring::parse("10")});
  const auto ghz = oracle::from_eigen(4, oracle::ghz_pair("0000", 1.0));
  const auto r1 = apply_projector(ghz, even);
  CHECK(r1.probability == doctest::Approx(1.0));
  REQUIRE(r1.post_state);
  CHECK(fidelity(*r1.post_state, ghz) == doctest::Approx(1.0));
  const auto r2 = apply_projector(ghz, odd);
  CHECK(r2.probability < 1e-15);
  CHECK_FALSE(r2.post_state);
  CHECK(apply_projector(oracle::from_eigen(4, oracle::ghz_pair("0001", 1.0)), odd).probability ==
        doctest::Approx(1.0));
}

TEST_CASE("product measurements on GHZ pairs") {
  const auto bell = oracle::from_eigen(2, oracle::ghz_pair("00", 1.0));
  const auto z = measure_product(bell, ProductObservable::uniform({1, 2}, PauliBasis::Z));
  REQUIRE(z.size() == 2);
  CHECK(z[0].outcome.to_string() == "00");
  CHECK(z[1].outcome.to_string() == "11");
  CHECK(z[0].probability == doctest::Approx(0.5));
  const auto ghz = oracle::from_eigen(4, oracle::ghz_pair("0000", 1.0));
  const auto x = measure_product(ghz, ProductObservable::uniform({1, 2, 3, 4}, PauliBasis::X));
  CHECK(x.size() == 8);
  for (const auto& o : x) {
    CHECK(o.outcome.weight() % 2 == 0);
    CHECK(o.probability == doctest::Approx(0.125));
  }
}

TEST_CASE("Schmidt examples") {
  CHECK(schmidt_coefficients(basis_state(Bitstring::parse("0101")), {2}).size() == 1);
  const auto s = schmidt_coefficients(oracle::from_eigen(4, oracle::ghz_pair("0001", 1.0)), {1, 2});
  REQUIRE(s.size() == 2);
  CHECK(s[1] == doctest::Approx(1 / std::sqrt(2.0)));
}

TEST_CASE("teleporting half of a Bell pair keeps the entanglement") {
  const auto bell = oracle::from_eigen(2, oracle::ghz_pair("00", 1.0));
  for (const auto& b : exact_teleport_circuit(bell, 2)) {
    CHECK(fidelity(b.output, bell) == doctest::Approx(1.0).epsilon(1e-9));
    const auto s = schmidt_coefficients(b.output, {1});
    REQUIRE(s.size() == 2);
    CHECK(s[0] == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-9));
  }
}
