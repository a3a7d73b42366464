#include <doctest.h>

#include <random>

#include "cmk2/finitefield.hpp"

using namespace cmk2;

namespace {

// Counts solutions of y^2 = x^3 + Ax + B by trying every pair.
std::int64_t naive_count(std::int64_t p, std::int64_t A, std::int64_t B) {
  std::int64_t n = 1;
  for (std::int64_t x = 0; x < p; ++x)
    for (std::int64_t y = 0; y < p; ++y)
      if (((y * y - x * x * x - A * x - B) % p + p) % p == 0) ++n;
  return n;
}

}  // namespace

TEST_SUITE("finitefield") {
  TEST_CASE("point counts on y^2 = x^3 - x") {
    CHECK(count_points(5, -1, 0) == 8);
    CHECK(count_points(13, -1, 0) == 8);
    CHECK(count_points(17, -1, 0) == 16);
    CHECK(count_points(3, -1, 0) == 4);
    for (std::int64_t p : {3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43})
      for (auto [A, B] : {std::pair{-1, 0}, std::pair{0, 2}, std::pair{3, 5}}) CHECK(count_points(p, A, B) == naive_count(p, A, B));
    CHECK_THROWS_AS(count_points(1000003, -1, 0), std::out_of_range);
  }

  TEST_CASE("quadratic extension arithmetic") {
    const FiniteField F = FiniteField::quadratic(7);
    CHECK(F.size() == 49);
    const auto elems = F.elements();
    CHECK(elems.size() == 49);
    for (const auto& x : elems) {
      if (F.is_zero(x)) continue;
      CHECK(F.mul(x, F.inv(x)) == F.from_int(1));
      CHECK(F.pow(x, 48) == F.from_int(1));
      CHECK(F.frobenius(F.frobenius(x)) == x);
    }
    // Frobenius fixes exactly the prime field
    int fixed = 0;
    for (const auto& x : elems)
      if (F.frobenius(x) == x) ++fixed;
    CHECK(fixed == 7);
  }

  TEST_CASE("bad reduction is rejected") {
    CHECK_THROWS_AS(CurveModP(2, -1, 0, -4), BadReductionError);
    CHECK_THROWS_AS(CurveModP(3, 0, 1, -3), BadReductionError);
    CHECK_NOTHROW(CurveModP(3, -1, 0, -4));
  }

  TEST_CASE("group law axioms") {
    for (int degree : {1, 2}) {
      const CurveModP C(13, -1, 0, -4, degree);
      const auto pts = C.points();
      CHECK(static_cast<std::int64_t>(pts.size()) == (degree == 1 ? 8 : 13 * 13 + 1 - (6 * 6 - 2 * 13)));
      std::mt19937_64 rng(5);
      std::uniform_int_distribution<std::size_t> pick(0, pts.size() - 1);
      for (int trial = 0; trial < 200; ++trial) {
        const auto &P = pts[pick(rng)], &Q = pts[pick(rng)], &R = pts[pick(rng)];
        CHECK(C.on_curve(C.add(P, Q)));
        CHECK(C.add(P, Q) == C.add(Q, P));
        CHECK(C.add(C.add(P, Q), R) == C.add(P, C.add(Q, R)));
        CHECK(C.add(P, C.neg(P)).infinity);
      }
      for (const auto& P : pts) CHECK(C.mul(static_cast<std::int64_t>(pts.size()), P).infinity);
    }
  }

  TEST_CASE("CM action") {
    const CurveModP C(13, -1, 0, -4, 2);
    REQUIRE(C.cm_root().has_value());
    const QuadInt i(0, 1, -4), one(1, 0, -4), pi(3, 2, -4);
    std::mt19937_64 rng(9);
    const auto pts = C.points();
    std::uniform_int_distribution<std::size_t> pick(0, pts.size() - 1);
    for (int trial = 0; trial < 100; ++trial) {
      const auto& P = pts[pick(rng)];
      CHECK(C.cm_apply(one, P) == P);
      CHECK(C.cm_apply(i, C.cm_apply(i, P)) == C.neg(P));
      CHECK(C.cm_apply(pi, C.cm_apply(conj(pi), P)) == C.mul(norm(pi), P));
      CHECK(C.on_curve(C.cm_apply(pi, P)));
    }
    const CurveModP D(7, 0, 3, -3, 2);
    const QuadInt w(0, 1, -3);
    for (const auto& P : D.points()) {
      CHECK(D.cm_apply(w * w, P) == D.cm_apply(w, D.cm_apply(w, P)));
      CHECK(D.cm_apply(w * w * w, P) == D.neg(P));
    }
    const CurveModP E(11, -1, 0, -7, 1);
    CHECK_THROWS_AS(E.cm_apply(QuadInt(1, 1, -7), E.points()[1]), UnsupportedError);
  }

  TEST_CASE("Frobenius acts as one of pi, conj(pi)") {
    for (auto [p, pi] : {std::pair{5, QuadInt(-1, 2, -4)}, std::pair{13, QuadInt(3, 2, -4)},
                         std::pair{17, QuadInt(1, -4, -4)}, std::pair{29, QuadInt(-5, 2, -4)}}) {
      const FrobeniusCheck r = frobenius_equals_cm(p, -1, 0, pi);
      CHECK(r.pi_passes != r.pibar_passes);
      CHECK(r.trace_matches);
      CHECK(r.norm_matches);
      CHECK(r.passed());
      CHECK(r.points_checked == p * p + 1 - (trace(pi) * trace(pi) - 2 * p));
    }
    // a wrong character value fails both ways
    const FrobeniusCheck bad = frobenius_equals_cm(13, -1, 0, QuadInt(2, 3, -4));
    CHECK_FALSE(bad.passed());
  }

  TEST_CASE("Frobenius over an Eisenstein curve") {
    // y^2 = x^3 + 2 over F_7: 7 = N(3 + w)
    const QuadInt pi(2, 1, -3);
    REQUIRE(norm(pi) == 7);
    int passing = 0;
    for (const QuadInt& u : unit_group(-3)) {
      const FrobeniusCheck r = frobenius_equals_cm(7, 0, 2, u * pi);
      if (r.pi_passes) {
        ++passing;
        CHECK(r.trace_matches);
      }
      if (r.pibar_passes) ++passing;
    }
    // exactly one of the twelve associates of pi and conj(pi)
    CHECK(passing == 1);
  }
}
