#pragma once

// Reductions of the CM curve y^2 = x^3 + A x + B over F_p and F_{p^2}, with
// exact group law, exhaustive point counting and the CM automorphisms.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cmk2/qfield.hpp"

namespace cmk2 {

class BadReductionError : public ArithmeticError {
 public:
  using ArithmeticError::ArithmeticError;
};

class UnsupportedError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// a + b*t in F_p[t]/(t^2 - r); b is always 0 in the prime field.
struct FqElem {
  std::int64_t a{0};
  std::int64_t b{0};
  friend bool operator==(const FqElem&, const FqElem&) = default;
};

class FiniteField {
 public:
  static FiniteField prime(std::int64_t p);
  /// Quadratic extension through the least quadratic non-residue.
  static FiniteField quadratic(std::int64_t p);

  std::int64_t characteristic() const { return p_; }
  int degree() const { return degree_; }
  std::int64_t size() const { return degree_ == 1 ? p_ : p_ * p_; }

  FqElem from_int(std::int64_t v) const { return {mod(v), 0}; }
  FqElem add(const FqElem& x, const FqElem& y) const;
  FqElem sub(const FqElem& x, const FqElem& y) const;
  FqElem neg(const FqElem& x) const;
  FqElem mul(const FqElem& x, const FqElem& y) const;
  FqElem pow(FqElem x, std::uint64_t e) const;
  FqElem inv(const FqElem& x) const;
  FqElem frobenius(const FqElem& x) const { return pow(x, static_cast<std::uint64_t>(p_)); }
  bool is_zero(const FqElem& x) const { return x.a == 0 && x.b == 0; }
  std::vector<FqElem> elements() const;

  std::int64_t mod(std::int64_t v) const {
    v %= p_;
    return v < 0 ? v + p_ : v;
  }

 private:
  FiniteField(std::int64_t p, int degree, std::int64_t r) : p_(p), degree_(degree), r_(r) {}
  std::int64_t mulmod(std::int64_t x, std::int64_t y) const {
    return static_cast<std::int64_t>(static_cast<__int128>(x) * y % p_);
  }

  std::int64_t p_;
  int degree_;
  std::int64_t r_;
};

/// Square roots of -1 (d = -4) or primitive cube roots of 1 (d = -3) in F_p, ascending.
std::vector<std::int64_t> roots_of_unity_mod(std::int64_t p, int order);

struct CurvePoint {
  FqElem x;
  FqElem y;
  bool infinity{true};

  static CurvePoint at_infinity() { return {}; }
  static CurvePoint affine(FqElem x, FqElem y) { return {x, y, false}; }
  friend bool operator==(const CurvePoint&, const CurvePoint&) = default;
};

class CurveModP {
 public:
  /// Throws BadReductionError when p divides 2(4A^3 + 27B^2).
  CurveModP(std::int64_t p, std::int64_t A, std::int64_t B, int d, int field_degree = 1);

  const FiniteField& field() const { return field_; }
  std::int64_t p() const { return field_.characteristic(); }
  std::int64_t A() const { return A_.a; }
  std::int64_t B() const { return B_.a; }
  int discriminant() const { return d_; }
  /// The fixed root of unity realising [i] or [w] in F_p, if the automorphism exists.
  std::optional<std::int64_t> cm_root() const { return root_; }

  bool on_curve(const CurvePoint& P) const;
  CurvePoint neg(const CurvePoint& P) const;
  CurvePoint add(const CurvePoint& P, const CurvePoint& Q) const;
  CurvePoint mul(std::int64_t k, const CurvePoint& P) const;
  CurvePoint frobenius(const CurvePoint& P) const;
  /// The extra automorphism: (x, y) -> (-x, i y) for d = -4, (z x, -y) for d = -3.
  CurvePoint automorphism(const CurvePoint& P) const;
  /// [x + y w]P; throws UnsupportedError when y != 0 and there is no automorphism.
  CurvePoint cm_apply(const QuadInt& alpha, const CurvePoint& P) const;

  /// All points over the field, infinity first, then by (x, y).
  std::vector<CurvePoint> points() const;

 private:
  FqElem rhs(const FqElem& x) const;

  FiniteField field_;
  FqElem A_;
  FqElem B_;
  int d_;
  std::optional<std::int64_t> root_;
};

/// #E(F_p) by an x-scan against a table of squares.
std::int64_t count_points(std::int64_t p, std::int64_t A, std::int64_t B, std::int64_t bound = 1000000);

struct FrobeniusCheck {
  std::int64_t p{0};
  QuadInt pi;
  bool pi_passes{false};
  bool pibar_passes{false};
  std::int64_t points_checked{0};
  std::int64_t point_count{0};      // #E(F_p)
  std::int64_t trace{0};            // pi + conj(pi)
  bool trace_matches{false};        // trace == p + 1 - #E(F_p)
  bool norm_matches{false};         // #E(F_p) == N(matched - 1)
  std::optional<QuadInt> matched;   // the one of pi, conj(pi) acting as Frobenius

  bool passed() const { return pi_passes != pibar_passes && trace_matches && norm_matches; }
};

/// Compares (x^p, y^p) with [pi]P and [conj pi]P on every point of E(F_{p^2}).
FrobeniusCheck frobenius_equals_cm(std::int64_t p, std::int64_t A, std::int64_t B, const QuadInt& pi);

}  // namespace cmk2
