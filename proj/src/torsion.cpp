#include "cmk2/torsion.hpp"

#include <algorithm>
#include <numeric>

namespace cmk2 {

namespace {

Rational fractional_part(const Rational& q) {
  const std::int64_t n = q.numerator(), d = q.denominator();
  std::int64_t fl = n / d;
  if ((n % d != 0) && (n < 0)) --fl;
  return q - Rational(fl);
}

std::vector<TorsionPoint> sorted_unique(std::vector<TorsionPoint> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

// e = 1 mod a, e = 0 mod b for coprime a, b.
QuadInt idempotent(const QuadIdeal& a, const QuadIdeal& b) {
  if (b.is_unit()) return QuadInt(1, 0, a.field());
  if (a.is_unit()) return QuadInt(0, 0, a.field());
  const QuadInt& g = b.generator();
  return g * residue_invert(g, a);
}

}  // namespace

TorsionPoint::TorsionPoint(const Rational& r, const Rational& s, int d)
    : r_(fractional_part(r)), s_(fractional_part(s)), d_(d) {}

QuadIdeal TorsionPoint::annihilator() const {
  if (is_zero()) return QuadIdeal::unit(d_);
  const std::int64_t D = std::lcm(r_.denominator(), s_.denominator());
  const QuadInt num((r_ * Rational(D)).numerator(), (s_ * Rational(D)).numerator(), d_);
  const QuadIdeal Dideal(QuadInt(D, 0, d_));
  if (num.is_zero()) return QuadIdeal::unit(d_);
  return ideal_div(Dideal, ideal_sum(Dideal, QuadIdeal(num)));
}

bool TorsionPoint::killed_by(const QuadIdeal& m) const { return (m.generator() * *this).is_zero(); }

std::string to_string(const TorsionPoint& p) {
  auto frac = [](const Rational& q) {
    if (q.denominator() == 1) return std::to_string(q.numerator());
    return std::to_string(q.numerator()) + "/" + std::to_string(q.denominator());
  };
  if (p.s() == Rational(0)) return frac(p.r());
  const std::string w = frac(p.s()) + "*w";
  if (p.r() == Rational(0)) return w;
  return frac(p.r()) + " + " + w;
}

std::vector<TorsionPoint> torsion_subgroup(const QuadIdeal& m) {
  const QuadRat inv = inverse(to_rat(m.generator()));
  std::vector<TorsionPoint> out;
  for (const QuadInt& r : m.residues()) out.emplace_back(to_rat(r) * inv);
  return sorted_unique(std::move(out));
}

PrimarySplit split_at(const TorsionPoint& p, const QuadIdeal& l) {
  const QuadIdeal n = p.annihilator();
  const int k = n.is_unit() ? 0 : valuation(n, l);
  if (k == 0) return {TorsionPoint::zero(p.field()), p, 0};
  const QuadIdeal lk = ideal_pow(l, static_cast<unsigned>(k));
  const QuadIdeal rest = ideal_div(n, lk);
  const TorsionPoint lp = idempotent(lk, rest) * p;
  return {lp, p - lp, k};
}

std::vector<QuadInt> galois_scalars(const QuadIdeal& level, const QuadIdeal& l, OrbitKind kind) {
  const int k = level.is_unit() ? 0 : valuation(level, l);
  if (kind == OrbitKind::additive && k < 2) throw ArithmeticError("additive orbit needs l^2 to divide the level");
  if (kind == OrbitKind::multiplicative && k != 1)
    throw ArithmeticError("multiplicative orbit needs l to divide the level exactly once");
  const QuadIdeal above = ideal_div(level, l);
  const QuadInt one(1, 0, level.field());
  std::vector<QuadInt> out;
  if (kind == OrbitKind::additive) {
    for (const QuadInt& c : l.residues()) out.push_back(level.reduce(one + above.generator() * c));
  } else {
    const QuadInt e = idempotent(l, above);
    for (const QuadInt& b : ResidueRing(l).units()) out.push_back(level.reduce(e * b + (one - e)));
  }
  return out;
}

std::vector<TorsionPoint> galois_conjugates(const TorsionPoint& p, const QuadIdeal& l, OrbitKind kind) {
  std::vector<TorsionPoint> out;
  for (const QuadInt& beta : galois_scalars(p.annihilator(), l, kind)) out.push_back(beta * p);
  return sorted_unique(std::move(out));
}

std::vector<TorsionPoint> preimage_set(const TorsionPoint& q, const QuadInt& alpha) {
  if (alpha.is_zero()) throw ArithmeticError("preimage under zero");
  const QuadRat inv = inverse(to_rat(alpha));
  std::vector<TorsionPoint> out;
  for (const QuadInt& r : QuadIdeal(alpha).residues()) out.emplace_back((q.value() + to_rat(r)) * inv);
  return sorted_unique(std::move(out));
}

TorsionSystem::TorsionSystem(HeckeCharacter phi, QuadIdeal f)
    : phi_(std::move(phi)), f_(std::move(f)), x_f_(inverse(to_rat(f_.generator()))) {
  if (phi_.field() != f_.field()) throw ArithmeticError("character and f live over different fields");
}

TorsionPoint TorsionSystem::make_x(const QuadIdeal& m) const {
  if (!coprime(m, f_)) throw ArithmeticError(to_string(m) + " is not prime to f = " + to_string(f_));
  return TorsionPoint(inverse(to_rat(phi_.evaluate(m))));
}

TorsionPoint TorsionSystem::make_y(const QuadIdeal& m) const {
  const TorsionPoint x = make_x(m);
  if (f_.is_unit()) return x;
  return x + residue_invert(phi_.evaluate(m), f_) * x_f_;
}

}  // namespace cmk2
