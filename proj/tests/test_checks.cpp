#include <doctest.h>

#include "cmk2/checks.hpp"

using namespace cmk2;

namespace {

const int d = -4;

QuadIdeal ideal(const char* text) { return parse_ideal(text, d); }

struct Fixture {
  PrecisionScope scope{256};
  QuadIdeal f = ideal("(1+i)^3");
  HeckeCharacter phi{f};
  TorsionSystem sys{phi, f};
  Lattice L{d};
  RelationContext ctx{sys, L, 2, ideal("3+2i"), Real("1e-25"), 20, 7};
};

bool listed(const Certificate& c, const char* key, const char* value) {
  for (const auto& v : c.diagnostics[key])
    if (v == value) return true;
  return false;
}

}  // namespace

TEST_SUITE("checks") {
  TEST_CASE_FIXTURE(Fixture, "prime above p") {
    const PrimePair pp = choose_prime(phi, 13);
    CHECK(pp.p == ideal("3+2i"));
    CHECK(pp.pbar == ideal("3-2i"));
    CHECK(choose_prime(phi, 5).p == ideal("2+i"));
    CHECK_THROWS_AS(choose_prime(phi, 7), ArithmeticError);
  }

  TEST_CASE_FIXTURE(Fixture, "index sets") {
    const Certificate c = check_enumeration(phi, ideal("3-2i"), 3, 30);
    CHECK(c.passed());
    CHECK(listed(c, "L", "(2+i)"));
    CHECK_FALSE(listed(c, "L", "(3-2*i)"));
    CHECK_FALSE(listed(c, "L", "(3)"));  // divides a
    CHECK(listed(c, "R", "(1)"));
  }

  TEST_CASE_FIXTURE(Fixture, "Hecke character against point counts") {
    const Certificate c = check_hecke(phi, -1, 0, 100);
    CHECK(c.passed());
    CHECK(c.diagnostics["a_p"]["5"]["a_p"] == -2);
    CHECK(c.diagnostics["a_p"]["13"]["a_p"] == 6);
    CHECK(c.diagnostics["a_p"]["13"]["count"] == 8);
    CHECK(c.diagnostics["a_p"]["7"]["a_p"] == 0);
    CHECK_FALSE(check_hecke(phi, -2, 0, 100).passed());
  }

  TEST_CASE_FIXTURE(Fixture, "Frobenius") {
    for (std::int64_t p : {5, 13, 17, 29}) CHECK(check_frobenius(phi, -1, 0, p).passed());
    CHECK_FALSE(check_frobenius(phi, -2, 0, 13).passed());
  }

  TEST_CASE_FIXTURE(Fixture, "named functions") {
    const Certificate c = check_named_functions(ctx, {ideal("1"), ideal("2-i")}, ideal("2+i"), {2, 3});
    if (!c.passed()) MESSAGE(c.to_json().dump(1));
    CHECK(c.passed());
    CHECK(c.samples.size() == 20);
  }

  TEST_CASE_FIXTURE(Fixture, "tame certificate and its control") {
    CHECK(check_tame(ctx, ideal("2-i")).passed());
    CHECK(control_single_term(ctx).passed());
    const Certificate a = describe_alpha(ctx, ideal("2-i"));
    CHECK(a.passed());
    CHECK(a.diagnostics["alpha'"].size() == 4);
  }
}
