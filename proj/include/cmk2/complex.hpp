#pragma once

// Minimal complex type over an arbitrary real scalar (double, MPFR, ...).
// Real functions are found through argument-dependent lookup.

#include <cmath>
#include <type_traits>
#include <utility>

namespace cmk2 {

template <class R>
struct Complex {
  R re{0};
  R im{0};

  Complex() = default;
  Complex(R r) : re(std::move(r)), im(0) {}  // NOLINT(google-explicit-constructor)
  Complex(R r, R i) : re(std::move(r)), im(std::move(i)) {}
  template <class I, std::enable_if_t<std::is_integral_v<I>, int> = 0>
  Complex(I v) : re(R(v)), im(0) {}  // NOLINT(google-explicit-constructor)

  static Complex i() { return Complex(R(0), R(1)); }

  Complex& operator+=(const Complex& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  Complex& operator-=(const Complex& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  Complex& operator*=(const Complex& o) {
    R r = re * o.re - im * o.im;
    im = re * o.im + im * o.re;
    re = std::move(r);
    return *this;
  }
  Complex& operator/=(const Complex& o) {
    const R den = o.re * o.re + o.im * o.im;
    R r = (re * o.re + im * o.im) / den;
    im = (im * o.re - re * o.im) / den;
    re = std::move(r);
    return *this;
  }
  Complex& operator*=(const R& k) {
    re *= k;
    im *= k;
    return *this;
  }
  Complex& operator/=(const R& k) {
    re /= k;
    im /= k;
    return *this;
  }
};

template <class R>
Complex<R> operator+(Complex<R> a, const Complex<R>& b) { return a += b; }
template <class R>
Complex<R> operator-(Complex<R> a, const Complex<R>& b) { return a -= b; }
template <class R>
Complex<R> operator*(Complex<R> a, const Complex<R>& b) { return a *= b; }
template <class R>
Complex<R> operator/(Complex<R> a, const Complex<R>& b) { return a /= b; }
template <class R>
Complex<R> operator*(Complex<R> a, const R& k) { return a *= k; }
template <class R>
Complex<R> operator*(const R& k, Complex<R> a) { return a *= k; }
template <class R>
Complex<R> operator/(Complex<R> a, const R& k) { return a /= k; }
template <class R>
Complex<R> operator-(const Complex<R>& a) { return {-a.re, -a.im}; }
template <class R>
bool operator==(const Complex<R>& a, const Complex<R>& b) { return a.re == b.re && a.im == b.im; }

template <class R>
Complex<R> conj(const Complex<R>& z) { return {z.re, -z.im}; }

/// |z|^2
template <class R>
R norm(const Complex<R>& z) { return z.re * z.re + z.im * z.im; }

template <class R>
R abs(const Complex<R>& z) {
  using std::sqrt;
  return sqrt(norm(z));
}

template <class R>
R arg(const Complex<R>& z) {
  using std::atan2;
  return atan2(z.im, z.re);
}

template <class R>
Complex<R> exp(const Complex<R>& z) {
  using std::cos;
  using std::exp;
  using std::sin;
  const R m = exp(z.re);
  return {m * cos(z.im), m * sin(z.im)};
}

/// Principal branch.
template <class R>
Complex<R> log(const Complex<R>& z) {
  using std::log;
  return {log(abs(z)), arg(z)};
}

template <class R>
Complex<R> sin(const Complex<R>& z) {
  using std::cos;
  using std::cosh;
  using std::sin;
  using std::sinh;
  return {sin(z.re) * cosh(z.im), cos(z.re) * sinh(z.im)};
}

template <class R>
Complex<R> cos(const Complex<R>& z) {
  using std::cos;
  using std::cosh;
  using std::sin;
  using std::sinh;
  return {cos(z.re) * cosh(z.im), -sin(z.re) * sinh(z.im)};
}

template <class R>
Complex<R> pow(Complex<R> base, long long e) {
  if (e < 0) return Complex<R>(R(1)) / pow(base, -e);
  Complex<R> result(R(1));
  while (e > 0) {
    if (e & 1) result *= base;
    e >>= 1;
    if (e > 0) base *= base;
  }
  return result;
}

}  // namespace cmk2
