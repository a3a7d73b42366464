#include <doctest.h>

#include <random>

#include "cmk2/analytic.hpp"
#include "cmk2/bigfloat.hpp"

using namespace cmk2;

namespace {

const int kFields[] = {-3, -4, -7, -8, -11, -19, -43, -67, -163};

using BigLattice = CmLattice<Real>;
using C = BigComplex;

// Points r + s*tau with r, s uniform in [0, 1), kept away from the lattice.
std::vector<C> random_points(const BigLattice& L, int count, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<C> out;
  while (static_cast<int>(out.size()) < count) {
    const C z = L.embed(Real(u(rng)), Real(u(rng)));
    if (abs(L.reduce(z).z0) < Real(0.05)) continue;
    out.push_back(z);
  }
  return out;
}

Real rel(const C& a, const C& b) {
  const Real scale = abs(a) + abs(b);
  return scale == 0 ? Real(0) : abs(a - b) / scale;
}

const Real& tol() {
  static const Real t("1e-25");
  return t;
}

}  // namespace

TEST_SUITE("analytic") {
  TEST_CASE("symmetric lattices force vanishing invariants") {
    PrecisionScope scope(256);
    const BigLattice gauss(-4), eisen(-3);
    CHECK(abs(gauss.g3()) < tol());
    CHECK(abs(eisen.g2()) < tol());
    CHECK(gauss.g2().re > 0);
    CHECK(abs(gauss.g2().im) < tol());
  }

  TEST_CASE("Eisenstein and theta-constant routes agree") {
    PrecisionScope scope(256);
    for (int d : kFields) {
      const BigLattice L(d);
      const auto [g2t, g3t] = L.invariants_theta();
      CHECK(abs(L.g2() - g2t) < tol() * (1 + abs(L.g2())));
      CHECK(abs(L.g3() - g3t) < tol() * (1 + abs(L.g3())));
    }
  }

  TEST_CASE("direct lattice sums agree within their tail bound") {
    for (int d : {-4, -3, -7}) {
      const CmLattice<double> L(d);
      const auto s4 = direct_eisenstein_sum(d, 4, 300);
      const auto s6 = direct_eisenstein_sum(d, 6, 120);
      CHECK(abs(L.g2() - s4.value * 60.0) <= 60.0 * s4.tail_bound + 1e-9);
      CHECK(abs(L.g3() - s6.value * 140.0) <= 140.0 * s6.tail_bound + 1e-9);
    }
  }

  TEST_CASE("Legendre relation and independent quasi-period") {
    PrecisionScope scope(256);
    for (int d : kFields) {
      const BigLattice L(d);
      const C two_pi_i(Real(0), 2 * L.pi());
      const C eta2 = L.eta2_via_zeta();
      CHECK(abs(L.eta1() * L.tau() - eta2 - two_pi_i) < tol());
      CHECK(abs(eta2 - L.eta2()) < tol());
    }
    const BigLattice gauss(-4);
    CHECK(abs(gauss.eta1() - C(gauss.pi())) < tol());
  }

  TEST_CASE("differential equation at random points") {
    PrecisionScope scope(256);
    for (int d : kFields) {
      const BigLattice L(d);
      for (const C& z : random_points(L, 30, 17)) {
        const auto [p, dp] = L.wp(z);
        const C res = dp * dp - Real(4) * p * p * p + L.g2() * p + L.g3();
        CHECK(abs(res) < tol());
      }
    }
  }

  TEST_CASE("wp symmetries and two-torsion values") {
    PrecisionScope scope(256);
    const BigLattice L(-4);
    const C i(Real(0), Real(1));
    for (const C& z : random_points(L, 10, 5)) {
      CHECK(abs(L.wp(i * z).first + L.wp(z).first) < tol());
      CHECK(abs(L.wp(-z).first - L.wp(z).first) < tol());
      CHECK(abs(L.wp(-z).second + L.wp(z).second) < tol());
      CHECK(abs(L.wp(z + C(Real(1))).first - L.wp(z).first) < tol());
      CHECK(abs(L.wp(z + L.tau()).first - L.wp(z).first) < tol());
    }
    for (int d : kFields) {
      const BigLattice M(d);
      const auto e = M.e_values();
      const C half(Real(1) / 2);
      const C x = M.wp(half).first;
      CHECK(abs(Real(4) * x * x * x - M.g2() * x - M.g3()) < tol() * (1 + abs(x * x * x)));
      CHECK(abs(x - e[0]) < tol() * (1 + abs(x)));
      CHECK(abs(M.wp(half).second) < tol() * (1 + abs(x)));
      // the other half periods give the remaining roots
      const C y = M.wp(M.tau() / Real(2)).first;
      const C w = M.wp((C(Real(1)) + M.tau()) / Real(2)).first;
      CHECK(abs((y - e[1]) * (w - e[1])) < tol() * (1 + abs(y * w)));
      CHECK(abs((y - e[2]) * (w - e[2])) < tol() * (1 + abs(y * w)));
      CHECK(abs(e[0] + e[1] + e[2]) < tol());
    }
  }

  TEST_CASE("addition formula") {
    PrecisionScope scope(256);
    const BigLattice L(-7);
    const auto pts = random_points(L, 20, 9);
    for (std::size_t k = 0; k + 1 < pts.size(); k += 2) {
      const C z = pts[k], w = pts[k + 1];
      const auto [pz, dz] = L.wp(z);
      const auto [pw, dw] = L.wp(w);
      const C slope = (dz - dw) / (pz - pw);
      const C rhs = slope * slope / Real(4) - pz - pw;
      CHECK(rel(L.wp(z + w).first, rhs) < tol());
    }
  }

  TEST_CASE("wp near the lattice") {
    PrecisionScope scope(256);
    const BigLattice L(-4);
    CHECK_THROWS_AS(L.wp(C(Real(0))), PoleError);
    CHECK_THROWS_AS(L.wp(L.tau() + C(Real(1))), PoleError);
    const C z(Real("1e-8"), Real("3e-8"));
    CHECK(abs(L.wp(z).first * z * z - C(Real(1))) < Real("1e-12"));
  }

  TEST_CASE("sigma oddness, normalisation and quasi-periodicity") {
    PrecisionScope scope(256);
    for (int d : {-3, -4, -7, -163}) {
      const BigLattice L(d);
      const C one(Real(1));
      for (const C& z : random_points(L, 10, 21)) {
        const C z0 = z - L.embed(Real(0.5), Real(0.5));
        CHECK(rel(L.sigma(-z0), -L.sigma(z0)) < tol());
        const C s = L.sigma_theta(z0);
        const C s1 = L.sigma_theta(z0 + one);
        const C st = L.sigma_theta(z0 + L.tau());
        CHECK(rel(s1, -s * exp(L.eta1() * (z0 + one / Real(2)))) < tol());
        CHECK(rel(st, -s * exp(L.eta2() * (z0 + L.tau() / Real(2)))) < tol());
        // reduced evaluation agrees with the raw series a few cells out
        const C far = z0 + L.embed(Real(2), Real(-1));
        CHECK(rel(L.sigma(far), L.sigma_theta(far)) < tol());
      }
      for (int k = 4; k <= 20; k += 4) {
        const C z(Real(1) / pow(Real(10), k), Real(2) / pow(Real(10), k));
        CHECK(abs(L.sigma(z) / z - one) < Real(10) / pow(Real(10), 2 * k));
      }
    }
  }

  TEST_CASE("sigma commutes with the unit action") {
    PrecisionScope scope(256);
    const BigLattice L(-4);
    const C i(Real(0), Real(1));
    for (const C& z : random_points(L, 8, 31)) CHECK(rel(L.sigma(i * z), i * L.sigma(z)) < tol());
  }

  TEST_CASE("sigma matches the Weierstrass product at low precision") {
    const CmLattice<double> L(-4);
    for (auto z : {Complex<double>(0.3, 0.1), Complex<double>(-0.2, 0.25), Complex<double>(0.1, -0.35)}) {
      const auto prod = sigma_product(-4, z, 200);
      CHECK(abs(prod - L.sigma(z)) < 1e-4 * abs(L.sigma(z)));
    }
  }

  TEST_CASE("precision guard") {
    const CmLattice<double> L(-4);
    CHECK_THROWS_AS(L.require_tolerance(1e-25), PrecisionError);
    CHECK_NOTHROW(L.require_tolerance(1e-10));
    PrecisionScope scope(256);
    const BigLattice B(-4);
    CHECK_NOTHROW(B.require_tolerance(Real("1e-25")));
  }

  TEST_CASE("precision scope restores the previous precision") {
    const unsigned before = working_bits();
    {
      PrecisionScope scope(512);
      CHECK(working_bits() >= 512);
    }
    CHECK(working_bits() == before);
  }
}
