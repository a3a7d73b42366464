#include <doctest.h>

#include "cmk2/divisors.hpp"

using namespace cmk2;

namespace {

const int d = -4;
const std::uint64_t kSeed = 20240611;

const Real& tol() {
  static const Real t("1e-25");
  return t;
}

TorsionPoint pt(std::int64_t rn, std::int64_t rd, std::int64_t sn, std::int64_t sd) {
  return TorsionPoint(Rational(rn, rd), Rational(sn, sd), d);
}

QuadIdeal ideal(const char* text) { return parse_ideal(text, d); }

Real rel(const BigComplex& a, const BigComplex& b) { return abs(a - b) / (abs(a) + abs(b)); }

std::vector<EllFunction> sample_functions() {
  std::vector<EllFunction> out;
  out.push_back(build_named(NamedRequest::g_a(2, d)));
  out.push_back(build_named(NamedRequest::g_a(3, d)));
  out.push_back(build_named(NamedRequest::t(pt(1, 3, 2, 3), 3)));
  out.push_back(build_named(NamedRequest::s(pt(4, 5, 2, 5), 5)));
  out.push_back(build_named(NamedRequest::g_l(ideal("2+i"))));
  Divisor D(d);
  D.add(pt(1, 4, 3, 4), 8);
  D.add(pt(1, 2, 0, 1), 2);
  D.add(TorsionPoint::zero(d), -10);
  out.push_back(EllFunction::from_divisor(D, "mixed"));
  return out;
}

}  // namespace

TEST_SUITE("divisors") {
  TEST_CASE("principality by the Abel condition") {
    const Divisor g2 = divisor_g_a(2, d);
    CHECK(g2.degree() == 0);
    CHECK(g2.order_at(TorsionPoint::zero(d)) == 3);
    CHECK(g2.weighted_sum() == QuadRat(Rational(-1), Rational(-1), d));
    CHECK(g2.is_principal());
    CHECK_FALSE(divisor_point_pair(pt(1, 2, 0, 1), 1).is_principal());
    CHECK(divisor_point_pair(pt(1, 2, 0, 1), 2).is_principal());
    CHECK_FALSE(divisor_point_pair(pt(1, 4, 3, 4), 2).is_principal());
    CHECK(divisor_point_pair(pt(1, 4, 3, 4), 4).is_principal());
    CHECK(divisor_g_l(ideal("2+i")).is_principal());
    CHECK(divisor_g_a(3, d).is_principal());
    CHECK_THROWS_AS(EllFunction::from_divisor(divisor_point_pair(pt(1, 3, 0, 1), 1)), ArithmeticError);
    CHECK(to_string(g2) == "3(0) - (1/2*w) - (1/2) - (1/2 + 1/2*w)");
  }

  TEST_CASE("primitive parts") {
    const auto [p1, k1] = primitive_part(divisor_point_pair(pt(1, 4, 3, 4), 12));
    CHECK(k1 == -3);
    CHECK(p1.order_at(TorsionPoint::zero(d)) == 4);
    const auto [p2, k2] = primitive_part(divisor_g_a(2, d).scaled(-2));
    CHECK(k2 == -2);
    CHECK(p2 == divisor_g_a(2, d));
  }

  TEST_CASE("divisor transport") {
    const QuadInt alpha(2, 1, d);
    const Divisor D = divisor_g_a(3, d);
    CHECK(D.pullback(alpha).degree() == 0);
    CHECK(D.pullback(alpha).pushforward(alpha) == D.scaled(5));
    CHECK(D.negated() == D);
    const Divisor t = divisor_t(pt(1, 3, 2, 3), 3);
    CHECK(t.negated() == divisor_t(pt(2, 3, 1, 3), 3));
  }

  TEST_CASE("named functions are elliptic") {
    PrecisionScope scope(256);
    const Lattice L(d);
    SampleStream stream(kSeed);
    for (const EllFunction& f : sample_functions()) {
      for (int i = 0; i < 4; ++i) {
        const BigComplex z = stream.next().embed(L);
        const BigComplex v = f.evaluate(L, z);
        CHECK(rel(f.evaluate(L, z + BigComplex(Real(1))), v) < tol());
        CHECK(rel(f.evaluate(L, z + L.tau()), v) < tol());
      }
    }
  }

  TEST_CASE("orders at support points match the divisor") {
    PrecisionScope scope(256);
    Lattice L(d);
    L.set_pole_tolerance(Real("1e-60"));
    const Real h("1e-38");
    const BigComplex dir(Real("0.6"), Real("0.8"));
    for (const EllFunction& f : sample_functions()) {
      for (const auto& [p, n] : f.divisor().terms()) {
        const auto lead = f.leading(L, p);
        CHECK(lead.order == n);
        const BigComplex step = dir * h;
        const BigComplex v = f.evaluate(L, L.embed(p.r(), p.s()) + step);
        CHECK(rel(v / pow(step, n), lead.coefficient) < Real("1e-30"));
      }
      CHECK_THROWS_AS(f.evaluate(L, f.divisor().support().front()), PoleError);
    }
  }

  TEST_CASE("other lifts differ by the computed root of unity") {
    PrecisionScope scope(256);
    const Lattice L(d);
    // 4(1/4 + 3/4 w) - 4(0), lifted with the defect split across points.
    const QuadRat a(Rational(1, 4), Rational(3, 4), d), zero(Rational(0), Rational(0), d);
    const QuadRat one(Rational(1), Rational(0), d), w(Rational(0), Rational(1), d);
    const std::vector<Representative> lift{{a - one, 1}, {a - w, 1}, {a - w, 2}, {zero, -4}};
    const EllFunction f = EllFunction::from_representatives(lift, d);
    const EllFunction F = EllFunction::from_divisor(f.divisor());
    const auto dec = f.decompose();
    CHECK(dec.power == -1);
    SampleStream stream(kSeed);
    for (int i = 0; i < 4; ++i) {
      const BigComplex z = stream.next().embed(L);
      const BigComplex ratio = f.evaluate(L, z) / F.evaluate(L, z);
      CHECK(abs(abs(ratio) - Real(1)) < tol());
      CHECK(rel(ratio, dec.constant.value(L)) < tol());
    }
  }

  TEST_CASE("decomposition reproduces transported functions") {
    PrecisionScope scope(256);
    const Lattice L(d);
    const QuadInt alpha(-1, 2, d), beta(2, 3, d);
    SampleStream stream(kSeed + 1);
    for (const EllFunction& f : sample_functions()) {
      const std::vector<EllFunction> variants{
          f.pullback(alpha), f.negated_argument(), f.galois(beta),
          f.times(Constant::exact(QuadRat(Rational(7), Rational(0), d))), f.pullback(QuadInt(2, 0, d))};
      for (const EllFunction& g : variants) {
        const auto dec = g.decompose();
        CHECK(dec.primitive.scaled(dec.power) == g.divisor());
        const EllFunction F = EllFunction::from_divisor(dec.primitive);
        const BigComplex z = stream.next().embed(L);
        const BigComplex want = dec.constant.value(L) * pow(F.evaluate(L, z), dec.power);
        CHECK(rel(g.evaluate(L, z), want) < tol());
      }
    }
  }

  TEST_CASE("pullback sigma products agree with composition up to unit constants") {
    PrecisionScope scope(256);
    const Lattice L(d);
    for (const EllFunction& f : sample_functions()) {
      const QuadInt alpha(2, 1, d);
      const auto r = equal_up_to_constant(pullback_evaluator(f, alpha, L), evaluator(f.pullback(alpha), L), L, 6,
                                          kSeed, tol());
      CHECK(r.constant);
      CHECK(r.unit_modulus);
    }
  }

  TEST_CASE("pushforward of a pullback is the norm power") {
    PrecisionScope scope(256);
    const Lattice L(d);
    const EllFunction f = sample_functions()[2];
    const QuadInt alpha(1, 1, d);
    const Evaluator push = pushforward_evaluator(f.pullback(alpha), alpha, L);
    const Evaluator power = product_evaluator({{evaluator(f, L), 2}});
    const auto r = equal_up_to_constant(push, power, L, 5, kSeed, tol());
    CHECK(r.constant);
    CHECK(r.unit_modulus);
  }

  TEST_CASE("distribution relation for g_a") {
    PrecisionScope scope(256);
    const Lattice L(d);
    for (int a : {2, 3}) {
      const EllFunction g = build_named(NamedRequest::g_a(a, d));
      for (const QuadInt alpha : {QuadInt(2, 1, d), QuadInt(3, 2, d)}) {
        std::vector<BigComplex> shifts;
        for (const TorsionPoint& c : torsion_subgroup(QuadIdeal(alpha))) shifts.push_back(L.embed(c.r(), c.s()));
        const Evaluator lhs = [&](const BigComplex& z) {
          BigComplex acc(Real(1));
          for (const auto& c : shifts) acc *= g.evaluate(L, z + c);
          return acc;
        };
        const auto r = equal_up_to_constant(lhs, pullback_evaluator(g, alpha, L), L, 6, kSeed, tol());
        CHECK(r.constant);
        CHECK(r.unit_modulus);
      }
    }
  }

  TEST_CASE("parity of g_a and g_l") {
    PrecisionScope scope(256);
    const Lattice L(d);
    const NamedRequest gl = NamedRequest::g_l(ideal("3+2i"));
    for (const EllFunction& g : {build_named(NamedRequest::g_a(2, d)), build_named(NamedRequest::g_a(3, d)), build_named(gl)}) {
      const auto r = equal_up_to_constant(evaluator(g.negated_argument(), L), evaluator(g, L), L, 5, kSeed, tol());
      CHECK(r.constant);
      CHECK(abs(abs(r.value.re) - Real(1)) < tol());
      CHECK(abs(r.value.im) < tol());
    }
  }

  TEST_CASE("g_a squared against the Weierstrass product") {
    PrecisionScope scope(256);
    const Lattice L(d);
    for (int a : {2, 3}) {
      const EllFunction g = build_named(NamedRequest::g_a(a, d));
      std::vector<BigComplex> values;
      for (const TorsionPoint& c : torsion_subgroup(QuadIdeal(QuadInt(a, 0, d))))
        if (!c.is_zero()) values.push_back(L.wp(L.embed(c.r(), c.s())).first);
      const Evaluator weierstrass = [&](const BigComplex& z) {
        const BigComplex p = L.wp(z).first;
        BigComplex acc(Real(1));
        for (const auto& v : values) acc *= p - v;
        return BigComplex(Real(1)) / acc;
      };
      const auto r = equal_up_to_constant(product_evaluator({{evaluator(g, L), 2}}), weierstrass, L, 6, kSeed, tol());
      CHECK(r.constant);
    }
  }

  TEST_CASE("sampling is deterministic and resamples around poles") {
    PrecisionScope scope(128);
    const Lattice L(d);
    SampleStream a(7), b(7);
    for (int i = 0; i < 5; ++i) {
      const auto p = a.next(), q = b.next();
      CHECK(p.r == q.r);
      CHECK(p.s == q.s);
    }
    const Evaluator one = [](const BigComplex&) { return BigComplex(Real(1)); };
    int calls = 0;
    const Evaluator flaky = [&](const BigComplex&) -> BigComplex {
      if (++calls % 2 == 0) throw PoleError("near a pole");
      return BigComplex(Real(1));
    };
    const auto r = equal_up_to_constant(flaky, one, L, 4, 7, Real("1e-20"));
    CHECK(r.points.size() == 4);
    CHECK(r.constant);
  }
}
