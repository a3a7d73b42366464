#pragma once

// Torsion points of C/O_K as exact elements of K/O_K, and the bookkeeping of
// the compatible system x_m, the shifted points y_m, Galois orbits and
// isogeny fibres. Galois elements act through multiplication by residues.

#include <compare>
#include <string>
#include <vector>

#include "cmk2/hecke.hpp"
#include "cmk2/qfield.hpp"

namespace cmk2 {

/// r + s*w mod O_K with 0 <= r, s < 1.
class TorsionPoint {
 public:
  TorsionPoint() = default;
  TorsionPoint(const Rational& r, const Rational& s, int d);
  explicit TorsionPoint(const QuadRat& z) : TorsionPoint(z.x, z.y, z.d) {}
  static TorsionPoint zero(int d) { return TorsionPoint(Rational(0), Rational(0), d); }

  const Rational& r() const { return r_; }
  const Rational& s() const { return s_; }
  int field() const { return d_; }
  QuadRat value() const { return {r_, s_, d_}; }
  bool is_zero() const { return r_ == Rational(0) && s_ == Rational(0); }

  /// Exact annihilator: the ideal of mu with mu * P = 0.
  QuadIdeal annihilator() const;
  bool killed_by(const QuadIdeal& m) const;

  friend TorsionPoint operator+(const TorsionPoint& a, const TorsionPoint& b) {
    return TorsionPoint(a.value() + b.value());
  }
  friend TorsionPoint operator-(const TorsionPoint& a, const TorsionPoint& b) {
    return TorsionPoint(a.value() - b.value());
  }
  friend TorsionPoint operator-(const TorsionPoint& a) { return TorsionPoint(-a.value()); }
  friend TorsionPoint operator*(const QuadInt& alpha, const TorsionPoint& p) {
    return TorsionPoint(to_rat(alpha) * p.value());
  }
  friend bool operator==(const TorsionPoint& a, const TorsionPoint& b) {
    return a.d_ == b.d_ && a.r_ == b.r_ && a.s_ == b.s_;
  }
  /// Lexicographic in (r, s).
  friend bool operator<(const TorsionPoint& a, const TorsionPoint& b) {
    if (a.r_ != b.r_) return a.r_ < b.r_;
    return a.s_ < b.s_;
  }

 private:
  Rational r_{0};
  Rational s_{0};
  int d_{-4};
};

/// "r" or "r + s*w" with exact fractions.
std::string to_string(const TorsionPoint& p);

/// All points of E[m] = m^-1 O_K / O_K, sorted.
std::vector<TorsionPoint> torsion_subgroup(const QuadIdeal& m);

/// Decomposition P = P_l + P_rest with P_l of l-power order and P_rest prime to l.
struct PrimarySplit {
  TorsionPoint l_part;
  TorsionPoint rest;
  int exponent;  // valuation of the annihilator at l
};
PrimarySplit split_at(const TorsionPoint& p, const QuadIdeal& l);

enum class OrbitKind { additive, multiplicative };

/// Residues beta mod `level` acting as the Galois group of the l-layer of
/// `level`: additive (l^2 | level) beta = 1 mod level/l, multiplicative
/// (l exactly divides level) beta = 1 mod level/l and beta a unit mod l.
std::vector<QuadInt> galois_scalars(const QuadIdeal& level, const QuadIdeal& l, OrbitKind kind);

/// Orbit of P under the l-layer of its own level, sorted.
std::vector<TorsionPoint> galois_conjugates(const TorsionPoint& p, const QuadIdeal& l, OrbitKind kind);

/// { u : alpha * u = q }, sorted; exactly N(alpha) points.
std::vector<TorsionPoint> preimage_set(const TorsionPoint& q, const QuadInt& alpha);

class TorsionSystem {
 public:
  TorsionSystem(HeckeCharacter phi, QuadIdeal f);

  const HeckeCharacter& character() const { return phi_; }
  const QuadIdeal& f() const { return f_; }
  /// x_f = 1/g_f for the canonical generator g_f of f.
  const TorsionPoint& x_f() const { return x_f_; }

  /// x_m = 1/phi(m) mod O_K.
  TorsionPoint make_x(const QuadIdeal& m) const;
  /// y_m = x_m + (phi(m)^-1 mod f) x_f.
  TorsionPoint make_y(const QuadIdeal& m) const;

 private:
  HeckeCharacter phi_;
  QuadIdeal f_;
  TorsionPoint x_f_;
};

}  // namespace cmk2
