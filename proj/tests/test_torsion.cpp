#include <doctest.h>

#include <algorithm>
#include <random>

#include "cmk2/torsion.hpp"

using namespace cmk2;

namespace {

const int d = -4;

TorsionSystem gaussian_system() {
  const QuadIdeal f = parse_ideal("(1+i)^3", d);
  return TorsionSystem(HeckeCharacter(f), f);
}

QuadIdeal ideal(const char* text) { return parse_ideal(text, d); }

std::vector<TorsionPoint> sorted(std::vector<TorsionPoint> v) {
  std::sort(v.begin(), v.end());
  return v;
}

// Minimality oracle: g kills p, and g/P does not for any prime P | g.
bool is_exact_annihilator(const TorsionPoint& p, const QuadIdeal& g) {
  if (!p.killed_by(g)) return false;
  for (const auto& [P, e] : factor(g))
    if (p.killed_by(ideal_div(g, P))) return false;
  return true;
}

}  // namespace

TEST_SUITE("torsion") {
  TEST_CASE("reduction to the fundamental domain") {
    const TorsionPoint p(Rational(-1, 5), Rational(7, 5), d);
    CHECK(p.r() == Rational(4, 5));
    CHECK(p.s() == Rational(2, 5));
    CHECK(TorsionPoint(Rational(3), Rational(-2), d).is_zero());
    CHECK(to_string(p) == "4/5 + 2/5*w");
    CHECK(to_string(TorsionPoint(Rational(1, 2), Rational(0), d)) == "1/2");
    CHECK(to_string(TorsionPoint::zero(d)) == "0");
  }

  TEST_CASE("annihilators are exact") {
    CHECK(TorsionPoint::zero(d).annihilator().is_unit());
    CHECK(TorsionPoint(Rational(1, 2), Rational(0), d).annihilator() == ideal("2"));
    CHECK(TorsionPoint(Rational(1, 2), Rational(1, 2), d).annihilator() == ideal("1+i"));
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<int> num(0, 59);
    for (int trial = 0; trial < 300; ++trial) {
      const TorsionPoint p(Rational(num(rng), 60), Rational(num(rng), 60), d);
      const QuadIdeal a = p.annihilator();
      CHECK(is_exact_annihilator(p, a));
      CHECK(ideal("60").generator() * p == TorsionPoint::zero(d));
    }
  }

  TEST_CASE("compatible system examples") {
    const TorsionSystem sys = gaussian_system();
    CHECK(sys.make_x(QuadIdeal::unit(d)).is_zero());
    const TorsionPoint x = sys.make_x(ideal("2-i"));
    CHECK(x == TorsionPoint(Rational(4, 5), Rational(2, 5), d));
    const QuadInt phi_l = sys.character().evaluate(ideal("2+i"));
    CHECK(phi_l * sys.make_x(ideal("(2+i)(2-i)")) == x);
    CHECK(sys.x_f() == TorsionPoint(Rational(1, 4), Rational(3, 4), d));
    CHECK(sys.x_f().annihilator() == sys.f());
    CHECK_THROWS_AS(sys.make_x(ideal("1+i")), ArithmeticError);
  }

  TEST_CASE("x and y generate the expected torsion") {
    const TorsionSystem sys = gaussian_system();
    const auto sets = enumerate_L_R(130, sys.f(), ideal("3-2i"), 2);
    for (const auto& m : sets.R) {
      CHECK(sys.make_x(m).annihilator() == m);
      CHECK(sys.make_y(m).annihilator() == m * sys.f());
      for (const auto& l : sets.L) {
        if ((m * l).norm() > 130) continue;
        const QuadInt phi = sys.character().evaluate(l);
        CHECK(phi * sys.make_x(m * l) == sys.make_x(m));
        CHECK(phi * sys.make_y(m * l) == sys.make_y(m));
      }
    }
  }

  TEST_CASE("y with f different from the conductor") {
    const QuadIdeal conductor = ideal("(1+i)^3");
    const TorsionSystem sys(HeckeCharacter(conductor), ideal("3"));
    const QuadIdeal m = ideal("2+i"), l = ideal("2-i");
    const QuadInt phi = sys.character().evaluate(l);
    CHECK(sys.make_y(m).killed_by(m * sys.f()));
    CHECK(phi * sys.make_y(m * l) == sys.make_y(m));
  }

  TEST_CASE("torsion subgroups") {
    CHECK(torsion_subgroup(ideal("2")).size() == 4);
    CHECK(torsion_subgroup(ideal("2+i")).size() == 5);
    for (const auto& p : torsion_subgroup(ideal("(2+i)^2"))) CHECK(p.killed_by(ideal("(2+i)^2")));
  }

  TEST_CASE("primary decomposition") {
    const TorsionSystem sys = gaussian_system();
    const QuadIdeal l = ideal("2+i");
    const TorsionPoint y = sys.make_y(ideal("(2+i)^2(2-i)"));
    const PrimarySplit s = split_at(y, l);
    CHECK(s.exponent == 2);
    CHECK(s.l_part + s.rest == y);
    CHECK(s.l_part.annihilator() == ideal("(2+i)^2"));
    CHECK(coprime(s.rest.annihilator(), l));
  }

  TEST_CASE("Galois orbits") {
    const TorsionSystem sys = gaussian_system();
    const QuadIdeal l = ideal("2+i");
    const TorsionPoint c = torsion_subgroup(l)[1];
    const auto mult = galois_conjugates(c, l, OrbitKind::multiplicative);
    CHECK(mult.size() == 4);
    CHECK(std::find(mult.begin(), mult.end(), TorsionPoint::zero(d)) == mult.end());

    const TorsionPoint y = sys.make_y(ideal("(2+i)^2"));
    const auto add = galois_conjugates(y, l, OrbitKind::additive);
    CHECK(add.size() == 5);
    std::vector<TorsionPoint> shifted;
    for (const auto& e : torsion_subgroup(l)) shifted.push_back(y + e);
    CHECK(add == sorted(shifted));

    const TorsionPoint y2 = sys.make_y(ideal("(2+i)(2-i)"));
    const auto orbit = galois_conjugates(y2, l, OrbitKind::multiplicative);
    CHECK(orbit.size() == 4);
    for (const auto& p : orbit) {
      CHECK(split_at(p, l).rest == split_at(y2, l).rest);
      CHECK(p.annihilator() == y2.annihilator());
    }
    CHECK_THROWS_AS(galois_conjugates(y2, l, OrbitKind::additive), ArithmeticError);
    CHECK_THROWS_AS(galois_conjugates(y, l, OrbitKind::multiplicative), ArithmeticError);
  }

  TEST_CASE("preimage sets") {
    std::mt19937_64 rng(2);
    std::uniform_int_distribution<int> num(0, 11);
    for (const QuadInt alpha : {QuadInt(-1, 2, d), QuadInt(3, 2, d), QuadInt(2, 0, d), QuadInt(1, 1, d)}) {
      for (int trial = 0; trial < 10; ++trial) {
        const TorsionPoint q(Rational(num(rng), 12), Rational(num(rng), 12), d);
        const auto pre = preimage_set(q, alpha);
        CHECK(static_cast<std::int64_t>(pre.size()) == norm(alpha));
        for (const auto& u : pre) CHECK(alpha * u == q);
      }
    }
    CHECK_THROWS_AS(preimage_set(TorsionPoint::zero(d), QuadInt(0, 0, d)), ArithmeticError);
  }

  TEST_CASE("preimage unions in the additive case") {
    const TorsionSystem sys = gaussian_system();
    const QuadIdeal l = ideal("2+i");
    for (const char* mtext : {"2+i", "(2+i)^2", "(2+i)(2-i)"}) {
      const QuadIdeal m = ideal(mtext);
      const auto pre = preimage_set(sys.make_y(m), sys.character().evaluate(l));
      const auto orbit = galois_conjugates(sys.make_y(m * l), l, OrbitKind::additive);
      CHECK(pre == orbit);
    }
  }

  TEST_CASE("preimage unions in the multiplicative case") {
    const TorsionSystem sys = gaussian_system();
    const QuadIdeal l = ideal("2+i");
    for (const char* mtext : {"1", "2-i", "(2-i)^2"}) {
      const QuadIdeal m = ideal(mtext);
      const QuadInt phi = sys.character().evaluate(l);
      const TorsionPoint ym = sys.make_y(m);
      const TorsionPoint n = residue_invert(phi, m * sys.f()) * ym;
      CHECK(n.killed_by(m * sys.f()));
      CHECK(phi * n == ym);
      auto expected = galois_conjugates(sys.make_y(m * l), l, OrbitKind::multiplicative);
      expected.push_back(n);
      CHECK(preimage_set(ym, phi) == sorted(expected));
    }
  }
}
