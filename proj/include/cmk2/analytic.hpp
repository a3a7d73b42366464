#pragma once

// Lattice functions for L = Z + Z*tau, tau = w, the ring of integers of a
// class-number-one field. Everything is templated on the real scalar so the
// same code runs in double (cross-checks) and in MPFR (certification).
//
// Conventions: eta(l) is the quasi-period with sigma(z + l) =
// psi(l) exp(eta(l)(z + l/2)) sigma(z), psi(m + n*tau) = (-1)^(m+n+mn), and
// eta1 = eta(1), eta2 = eta(tau). Legendre: eta1*tau - eta2 = 2*pi*i.

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <type_traits>
#include <utility>

#include "cmk2/bigfloat.hpp"
#include "cmk2/complex.hpp"
#include "cmk2/qfield.hpp"

namespace cmk2 {

class PoleError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class PrecisionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <class R>
R pi_value() {
  if constexpr (std::is_same_v<R, double>) {
    return std::numbers::pi;
  } else {
    R r;
    mpfr_const_pi(r.backend().data(), MPFR_RNDN);
    return r;
  }
}

/// Mantissa bits of R at the current working precision.
template <class R>
unsigned mantissa_bits() {
  if constexpr (std::is_same_v<R, double>) {
    return 53;
  } else {
    return working_bits();
  }
}

template <class R>
R from_rational(const Rational& q) {
  return R(q.numerator()) / R(q.denominator());
}

template <class R>
long long round_to_int(const R& x) {
  using std::round;
  return static_cast<long long>(round(x));
}

template <class R>
class CmLattice {
 public:
  using C = Complex<R>;

  explicit CmLattice(int d) : d_(d) {
    if (!is_class_number_one(d)) throw ArithmeticError("discriminant outside the class-number-one list");
    using std::ldexp;
    using std::sqrt;
    const unsigned bits = mantissa_bits<R>();
    roundoff_ = ldexp(R(1), -static_cast<int>(bits));
    series_eps_ = ldexp(R(1), -static_cast<int>(bits) - 8);
    pole_tol_ = R(1e-20);
    pi_ = pi_value<R>();
    tau_ = C(R(omega_trace(d)) / R(2), sqrt(R(-d)) / R(2));
    const C two_pi_i(R(0), R(2) * pi_);
    q_ = exp(two_pi_i * tau_);
    qh_ = exp(C(R(0), pi_) * tau_);

    const R pi2 = pi_ * pi_;
    const C e2 = C(R(1)) - R(24) * lambert(1);
    const C e4 = C(R(1)) + R(240) * lambert(3);
    const C e6 = C(R(1)) - R(504) * lambert(5);
    eta1_ = (pi2 / R(3)) * e2;
    eta2_ = eta1_ * tau_ - two_pi_i;
    g2_ = (R(4) * pi2 * pi2 / R(3)) * e4;
    g3_ = (R(8) * pi2 * pi2 * pi2 / R(27)) * e6;

    theta1_prime0_ = C(R(0));
    C qpow(R(1));
    for (long long k = 0;; ++k) {
      const C term = R(2 * k + 1) * qpow;
      if (k % 2 == 0) theta1_prime0_ += term; else theta1_prime0_ -= term;
      if (k > 0 && abs(term) < series_eps_) break;
      qpow *= pow(qh_, 2 * (k + 1));
    }
  }

  int discriminant() const { return d_; }
  const C& tau() const { return tau_; }
  const C& q() const { return q_; }
  const C& qh() const { return qh_; }
  const C& eta1() const { return eta1_; }
  const C& eta2() const { return eta2_; }
  const C& g2() const { return g2_; }
  const C& g3() const { return g3_; }
  const R& pi() const { return pi_; }
  const R& roundoff() const { return roundoff_; }
  const R& pole_tolerance() const { return pole_tol_; }
  void set_pole_tolerance(const R& t) { pole_tol_ = t; }

  /// Throws PrecisionError when the working precision cannot resolve `tol`.
  void require_tolerance(const R& tol) const {
    using std::log10;
    const R digits = R(mantissa_bits<R>()) * log10(R(2));
    if (-log10(tol) > R(0.8) * digits) throw PrecisionError("working precision too low for the requested tolerance");
  }

  C embed(const R& r, const R& s) const { return C(r) + tau_ * s; }
  C embed(const Rational& r, const Rational& s) const {
    return embed(from_rational<R>(r), from_rational<R>(s));
  }
  C embed(const QuadInt& a) const { return embed(R(a.x), R(a.y)); }

  /// Real-linear extension of the quasi-period map.
  C eta(const R& r, const R& s) const { return eta1_ * r + eta2_ * s; }

  struct Reduced {
    C z0;
    long long m;
    long long n;
  };

  /// z = z0 + m + n*tau with z0 in the cell around 0.
  Reduced reduce(const C& z) const {
    const long long n = round_to_int<R>(z.im / tau_.im);
    const C z1 = z - tau_ * R(n);
    const long long m = round_to_int<R>(z1.re);
    return {z1 - C(R(m)), m, n};
  }

  /// psi(l) exp(eta(l)(z0 + l/2)) for l = m + n*tau.
  C sigma_shift(long long m, long long n, const C& z0) const {
    const C lambda = embed(R(m), R(n));
    const C e = eta1_ * R(m) + eta2_ * R(n);
    C f = exp(e * (z0 + lambda / R(2)));
    if (((m + n + m * n) % 2 + 2) % 2 == 1) f = -f;
    return f;
  }

  /// Theta-series sigma without lattice reduction.
  C sigma_theta(const C& z) const {
    const C v = z * pi_;
    const C th = theta1(v);
    return exp(eta1_ * z * z / R(2)) * th / (theta1_prime0_ * pi_);
  }

  C sigma(const C& z) const {
    const Reduced r = reduce(z);
    const C base = sigma_theta(r.z0);
    if (r.m == 0 && r.n == 0) return base;
    return sigma_shift(r.m, r.n, r.z0) * base;
  }

  /// Logarithmic derivative of sigma (no reduction).
  C zeta_theta(const C& z) const {
    const C v = z * pi_;
    auto [th, dth] = theta1_with_derivative(v);
    return eta1_ * z + pi_ * dth / th;
  }

  /// eta(tau) from 2*zeta(tau/2); independent of the Legendre relation.
  C eta2_via_zeta() const { return R(2) * zeta_theta(tau_ / R(2)); }

  /// (wp, wp') at z; throws PoleError within the pole tolerance of L.
  std::pair<C, C> wp(const C& z) const {
    const Reduced r = reduce(z);
    if (abs(r.z0) < pole_tol_) throw PoleError("wp evaluated at a lattice point");
    const C one(R(1));
    const C two_pi_i(R(0), R(2) * pi_);
    const C u = exp(two_pi_i * r.z0);
    const C uinv = one / u;
    C p = C(R(1)) / R(12) + u / sq(one - u);
    C dp = u * (one + u) / cube(one - u);
    C qn = q_;
    for (int n = 1;; ++n) {
      const C x = qn * u;
      const C y = qn * uinv;
      const C a = qn / sq(one - qn);
      const C term = x / sq(one - x) + y / sq(one - y) - R(2) * a;
      const C dterm = x * (one + x) / cube(one - x) - y * (one + y) / cube(one - y);
      p += term;
      dp += dterm;
      if (abs(term) + abs(dterm) < series_eps_ * (abs(p) + abs(dp))) break;
      qn *= q_;
    }
    const C c2 = two_pi_i * two_pi_i;
    return {c2 * p, c2 * two_pi_i * dp};
  }

  /// Half-period values from theta constants: e1 = wp(1/2), e2, e3.
  std::array<C, 3> e_values() const {
    C s2(R(0));
    C t4(R(1));
    C qpow(R(1));
    for (long long k = 0;; ++k) {
      s2 += qpow;
      if (k > 0 && abs(qpow) < series_eps_) break;
      qpow *= pow(qh_, 2 * (k + 1));
    }
    for (long long k = 1;; ++k) {
      const C term = R(2) * pow(qh_, k * k);
      if (k % 2 == 1) t4 -= term; else t4 += term;
      if (abs(term) < series_eps_) break;
    }
    const C th2 = R(16) * qh_ * s2 * s2 * s2 * s2;
    const C th4 = t4 * t4 * t4 * t4;
    const R c = pi_ * pi_ / R(3);
    return {c * (th2 + R(2) * th4), c * (th2 - th4), -c * (R(2) * th2 + th4)};
  }

  /// (g2, g3) through theta constants, independent of the Eisenstein route.
  std::pair<C, C> invariants_theta() const {
    const auto e = e_values();
    return {R(2) * (e[0] * e[0] + e[1] * e[1] + e[2] * e[2]), R(4) * e[0] * e[1] * e[2]};
  }

 private:
  static C sq(const C& z) { return z * z; }
  static C cube(const C& z) { return z * z * z; }

  C lambert(int k) const {
    C sum(R(0));
    C qn = q_;
    for (long long n = 1;; ++n) {
      const C term = pow(C(R(n)), k) * qn / (C(R(1)) - qn);
      sum += term;
      if (abs(term) < series_eps_) break;
      qn *= q_;
    }
    return sum;
  }

  // sum_k (-1)^k qh^(k(k+1)) sin((2k+1)v)
  C theta1(const C& v) const { return theta1_with_derivative(v).first; }

  std::pair<C, C> theta1_with_derivative(const C& v) const {
    const C ei = exp(C(-v.im, v.re));
    const C ei2 = ei * ei;
    const C eim = C(R(1)) / ei;
    const C eim2 = eim * eim;
    C pos = ei;
    C neg = eim;
    C qpow(R(1));
    C th(R(0));
    C dth(R(0));
    const C two_i(R(0), R(2));
    for (long long k = 0;; ++k) {
      const C s = (pos - neg) / two_i;
      const C c = (pos + neg) / R(2);
      const C term = qpow * s;
      const C dterm = qpow * c * R(2 * k + 1);
      if (k % 2 == 0) {
        th += term;
        dth += dterm;
      } else {
        th -= term;
        dth -= dterm;
      }
      if (k > 0 && abs(term) + abs(dterm) < series_eps_ * (abs(th) + abs(dth))) break;
      qpow *= pow(qh_, 2 * (k + 1));
      pos *= ei2;
      neg *= eim2;
    }
    return {th, dth};
  }

  int d_;
  R roundoff_;
  R series_eps_;
  R pole_tol_;
  R pi_;
  C tau_;
  C q_;
  C qh_;
  C eta1_;
  C eta2_;
  C g2_;
  C g3_;
  C theta1_prime0_;
};

/// Direct lattice sum of sum' l^-k over max(|m|,|n|) <= N in double precision,
/// with a rigorous bound on the omitted tail from an integral comparison.
struct LatticeSum {
  Complex<double> value;
  double tail_bound;
};

inline LatticeSum direct_eisenstein_sum(int d, int k, int N) {
  const CmLattice<double> L(d);
  const Complex<double> tau = L.tau();
  Complex<double> sum(0.0);
  for (int m = -N; m <= N; ++m) {
    for (int n = -N; n <= N; ++n) {
      if (m == 0 && n == 0) continue;
      const Complex<double> w = Complex<double>(double(m)) + tau * double(n);
      sum += pow(Complex<double>(1.0) / w, k);
    }
  }
  // Omitted points satisfy |l| >= r = N * min(Im tau, 1/2); each fundamental
  // cell (area Im tau, diameter |1 + tau|) is dominated by the integral of
  // rho^-k over the annulus shifted inward by the diameter.
  const double area = tau.im;
  const double diam = abs(Complex<double>(1.0) + tau);
  const double r = N * std::min(tau.im, 0.5) - diam;
  const double tail = 2.0 * std::numbers::pi / area * std::pow(r, 2 - k) / (k - 2);
  return {sum, tail};
}

/// Weierstrass product for sigma with +-l paired, truncated at max(|m|,|n|) <= N.
inline Complex<double> sigma_product(int d, const Complex<double>& z, int N) {
  const CmLattice<double> L(d);
  const Complex<double> tau = L.tau();
  Complex<double> prod = z;
  for (int m = -N; m <= N; ++m) {
    for (int n = 0; n <= N; ++n) {
      if (n == 0 && m <= 0) continue;
      const Complex<double> w = Complex<double>(double(m)) + tau * double(n);
      const Complex<double> x = z / w;
      const Complex<double> x2 = x * x;
      prod *= (Complex<double>(1.0) - x2) * exp(x2);
    }
  }
  return prod;
}

}  // namespace cmk2
