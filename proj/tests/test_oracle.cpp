#include <doctest.h>

#include "common.hpp"
#include "wetting/oracle.hpp"

using namespace wetting;
using testing::lazy_potential;
using testing::pm1_potential;

namespace {

bool all_pass(const std::vector<OracleRow>& rows) {
  for (const auto& r : rows)
    if (!r.pass) return false;
  return !rows.empty();
}

}  // namespace

TEST_SUITE("oracle") {
  TEST_CASE("enumerated partition functions, small examples") {
    const auto p = lazy_potential();
    // scale-free weights 1/4, 1/2, 1/4: kappa = 1
    CHECK(enumerate_partition<Rational>(p, Rational(0), 1, Boundary::Constrained) == Rational(1, 16));
    const Rational eps(3, 2);
    CHECK(enumerate_partition<Rational>(p, eps, 1, Boundary::Constrained) == eps * Rational(1, 4) + Rational(1, 16));
    CHECK(enumerate_partition<Rational>(p, Rational(0), 1, Boundary::Free) == Rational(1, 4));
    CHECK(enumerate_partition<Rational>(p, Rational(1), 1, Boundary::Free) == Rational(3, 4));
    CHECK(enumerate_partition<Rational>(p, Rational(1), 0, Boundary::Free) == Rational(1));
  }

  TEST_CASE("ladder enumeration") {
    const ExactWalkLaw lazy = build_exact_walk(lazy_potential());
    CHECK(enumerate_ladder(lazy, 0) == Rational(1, 2));
    CHECK(enumerate_ladder(lazy, 1) == Rational(1, 16));
    CHECK(enumerate_ladder(lazy, 2) == Rational(1, 32));
    const ExactWalkLaw pm1 = build_exact_walk(pm1_potential());
    for (std::size_t n = 0; n <= 12; n += 2) CHECK(enumerate_ladder(pm1, n) == 0);
    CHECK(all_pass(check_ladder(lazy_potential(), 12)));
    CHECK(all_pass(check_ladder(pm1_potential(), 12)));
  }

  TEST_CASE("return probabilities and the local limit") {
    const ExactWalkLaw lazy = build_exact_walk(lazy_potential());
    CHECK(return_probability(lazy, 1) == Rational(1, 2));
    CHECK(return_probability(lazy, 2) == Rational(3, 8));
    const ExactWalkLaw pm1 = build_exact_walk(pm1_potential());
    CHECK(return_probability(pm1, 3) == 0);
    CHECK(return_probability(pm1, 2) == Rational(1, 2));

    double prev = 1.0;
    for (std::size_t n = 1 << 6; n <= (1 << 12); n *= 2) {
      const LltCheck c = llt_check(testing::lazy_walk(), n);
      const double err = std::abs(c.ratio - 1.0);
      CHECK(err < prev);
      prev = err;
    }
    CHECK(prev < 0.01);
    const LltCheck s = llt_check(testing::pm1_walk(), 4096);
    CHECK(s.span == 2);
    CHECK(std::abs(s.ratio - 1.0) < 0.01);
    CHECK(llt_check(testing::pm1_walk(), 4095).f0 == 0.0);
    CHECK(all_pass(check_llt(lazy_potential(), 4096)));
    CHECK(all_pass(check_llt(pm1_potential(), 4096)));
  }

  TEST_CASE("contact law: degenerate and index-convention cases") {
    const auto p = lazy_potential();
    const auto free0 = enumerate_contact_law<Rational>(p, Rational(0), 5, Boundary::Free);
    REQUIRE(free0.size() == 1);
    CHECK(free0[0].first == 0);
    CHECK(free0[0].second == 1);
    const auto con0 = enumerate_contact_law<Rational>(p, Rational(0), 5, Boundary::Constrained);
    REQUIRE(con0.size() == 1);
    CHECK(con0[0].first == 0);

    const auto law = enumerate_contact_law<Rational>(p, Rational(4, 3), 1, Boundary::Constrained);
    REQUIRE(law.size() == 2);
    CHECK(law[1].second == Rational(16, 19));

    const auto big = enumerate_contact_law<Rational>(p, Rational(2), 8, Boundary::Free);
    Rational total(0);
    for (const auto& [mask, pr] : big) total += pr;
    CHECK(total == 1);
    CHECK(big.size() == 256);

    // w(-x_N) with x_N odd is impossible for the symmetric walk
    try {
      enumerate_contact_law<Rational>(pm1_potential(), Rational(1), 4, Boundary::Constrained);
      FAIL("expected ZeroMass");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::ZeroMass);
    }
  }

  TEST_CASE("enumeration refuses large inputs") {
    const auto p = DiscretePotential::parse("-1 1\n0 1\n1 1\n");
    try {
      enumerate_partition<double>(p, 1.0, 20, Boundary::Free);
      FAIL("expected TooLarge");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::TooLarge);
    }
  }

  TEST_CASE("skip-free gamma") {
    CHECK(*skip_free_gamma(lazy_potential()) == Rational(3, 4));
    CHECK(*skip_free_gamma(pm1_potential()) == Rational(1, 2));
    CHECK_FALSE(skip_free_gamma(DiscretePotential::parse("-2 1\n-1 1\n0 2\n1 1\n2 1\n")).has_value());
  }

  TEST_CASE("renewal route matches enumeration exactly") {
    CHECK(all_pass(check_partition(lazy_potential(), 8)));
    CHECK(all_pass(check_partition(pm1_potential(), 8)));
    CHECK(all_pass(check_contacts(lazy_potential(), 6)));
  }
}
