#include "cmk2/finitefield.hpp"

#include <map>
#include <utility>

namespace cmk2 {

FiniteField FiniteField::prime(std::int64_t p) {
  if (!is_prime(p)) throw ArithmeticError(std::to_string(p) + " is not prime");
  return FiniteField(p, 1, 0);
}

FiniteField FiniteField::quadratic(std::int64_t p) {
  FiniteField base = prime(p);
  if (p == 2) throw ArithmeticError("characteristic 2 has no extension of the form t^2 = r");
  for (std::int64_t r = 2; r < p; ++r)
    if (base.pow(base.from_int(r), static_cast<std::uint64_t>((p - 1) / 2)) == base.from_int(-1))
      return FiniteField(p, 2, r);
  throw ArithmeticError("no quadratic non-residue mod " + std::to_string(p));
}

FqElem FiniteField::add(const FqElem& x, const FqElem& y) const { return {mod(x.a + y.a), mod(x.b + y.b)}; }
FqElem FiniteField::sub(const FqElem& x, const FqElem& y) const { return {mod(x.a - y.a), mod(x.b - y.b)}; }
FqElem FiniteField::neg(const FqElem& x) const { return {mod(-x.a), mod(-x.b)}; }

FqElem FiniteField::mul(const FqElem& x, const FqElem& y) const {
  if (degree_ == 1) return {mulmod(x.a, y.a), 0};
  const std::int64_t a = mod(mulmod(x.a, y.a) + mulmod(r_, mulmod(x.b, y.b)));
  const std::int64_t b = mod(mulmod(x.a, y.b) + mulmod(x.b, y.a));
  return {a, b};
}

FqElem FiniteField::pow(FqElem x, std::uint64_t e) const {
  FqElem r{1, 0};
  while (e > 0) {
    if (e & 1u) r = mul(r, x);
    x = mul(x, x);
    e >>= 1u;
  }
  return r;
}

FqElem FiniteField::inv(const FqElem& x) const {
  if (is_zero(x)) throw ArithmeticError("inverse of zero in a finite field");
  return pow(x, static_cast<std::uint64_t>(size() - 2));
}

std::vector<FqElem> FiniteField::elements() const {
  std::vector<FqElem> out;
  out.reserve(static_cast<std::size_t>(size()));
  for (std::int64_t b = 0; b < (degree_ == 1 ? 1 : p_); ++b)
    for (std::int64_t a = 0; a < p_; ++a) out.push_back({a, b});
  return out;
}

std::vector<std::int64_t> roots_of_unity_mod(std::int64_t p, int order) {
  const FiniteField F = FiniteField::prime(p);
  std::vector<std::int64_t> out;
  for (std::int64_t x = 1; x < p; ++x) {
    const FqElem e = F.from_int(x);
    if (!(F.pow(e, static_cast<std::uint64_t>(order)) == F.from_int(1))) continue;
    bool primitive = true;
    for (int k = 1; k < order; ++k)
      if (F.pow(e, static_cast<std::uint64_t>(k)) == F.from_int(1)) primitive = false;
    if (primitive) out.push_back(x);
  }
  return out;
}

CurveModP::CurveModP(std::int64_t p, std::int64_t A, std::int64_t B, int d, int field_degree)
    : field_(field_degree == 1 ? FiniteField::prime(p) : FiniteField::quadratic(p)), d_(d) {
  A_ = field_.from_int(A);
  B_ = field_.from_int(B);
  const FiniteField Fp = FiniteField::prime(p);
  const FqElem disc = Fp.add(Fp.mul(Fp.from_int(4), Fp.pow(Fp.from_int(A), 3)),
                             Fp.mul(Fp.from_int(27), Fp.pow(Fp.from_int(B), 2)));
  if (p == 2 || Fp.is_zero(disc)) throw BadReductionError("bad reduction at p = " + std::to_string(p));
  std::vector<std::int64_t> roots;
  if (d == -4 && B_.a == 0) roots = roots_of_unity_mod(p, 4);
  if (d == -3 && A_.a == 0) roots = roots_of_unity_mod(p, 3);
  if (!roots.empty()) root_ = roots.front();
}

FqElem CurveModP::rhs(const FqElem& x) const {
  const FiniteField& F = field_;
  return F.add(F.add(F.mul(F.mul(x, x), x), F.mul(A_, x)), B_);
}

bool CurveModP::on_curve(const CurvePoint& P) const {
  if (P.infinity) return true;
  return field_.mul(P.y, P.y) == rhs(P.x);
}

CurvePoint CurveModP::neg(const CurvePoint& P) const {
  if (P.infinity) return P;
  return CurvePoint::affine(P.x, field_.neg(P.y));
}

CurvePoint CurveModP::add(const CurvePoint& P, const CurvePoint& Q) const {
  const FiniteField& F = field_;
  if (P.infinity) return Q;
  if (Q.infinity) return P;
  FqElem slope;
  if (P.x == Q.x) {
    if (F.is_zero(F.add(P.y, Q.y))) return CurvePoint::at_infinity();
    const FqElem num = F.add(F.mul(F.from_int(3), F.mul(P.x, P.x)), A_);
    slope = F.mul(num, F.inv(F.mul(F.from_int(2), P.y)));
  } else {
    slope = F.mul(F.sub(Q.y, P.y), F.inv(F.sub(Q.x, P.x)));
  }
  const FqElem x3 = F.sub(F.sub(F.mul(slope, slope), P.x), Q.x);
  const FqElem y3 = F.sub(F.mul(slope, F.sub(P.x, x3)), P.y);
  return CurvePoint::affine(x3, y3);
}

CurvePoint CurveModP::mul(std::int64_t k, const CurvePoint& P) const {
  CurvePoint base = k < 0 ? neg(P) : P;
  std::uint64_t e = static_cast<std::uint64_t>(k < 0 ? -k : k);
  CurvePoint acc = CurvePoint::at_infinity();
  while (e > 0) {
    if (e & 1u) acc = add(acc, base);
    base = add(base, base);
    e >>= 1u;
  }
  return acc;
}

CurvePoint CurveModP::frobenius(const CurvePoint& P) const {
  if (P.infinity) return P;
  return CurvePoint::affine(field_.frobenius(P.x), field_.frobenius(P.y));
}

CurvePoint CurveModP::automorphism(const CurvePoint& P) const {
  if (!root_) throw UnsupportedError("no CM automorphism available for this curve and prime");
  if (P.infinity) return P;
  const FqElem r = field_.from_int(*root_);
  if (d_ == -4) return CurvePoint::affine(field_.neg(P.x), field_.mul(r, P.y));
  return CurvePoint::affine(field_.mul(r, P.x), field_.neg(P.y));
}

CurvePoint CurveModP::cm_apply(const QuadInt& alpha, const CurvePoint& P) const {
  if (alpha.d != d_) throw ArithmeticError("element from a different field");
  const CurvePoint xs = mul(alpha.x, P);
  if (alpha.y == 0) return xs;
  return add(xs, mul(alpha.y, automorphism(P)));
}

std::vector<CurvePoint> CurveModP::points() const {
  const FiniteField& F = field_;
  const auto elems = F.elements();
  std::map<std::pair<std::int64_t, std::int64_t>, std::vector<FqElem>> roots;
  for (const FqElem& y : elems) {
    const FqElem s = F.mul(y, y);
    roots[{s.a, s.b}].push_back(y);
  }
  std::vector<CurvePoint> out{CurvePoint::at_infinity()};
  for (const FqElem& x : elems) {
    const FqElem r = rhs(x);
    auto it = roots.find({r.a, r.b});
    if (it == roots.end()) continue;
    for (const FqElem& y : it->second) out.push_back(CurvePoint::affine(x, y));
  }
  return out;
}

std::int64_t count_points(std::int64_t p, std::int64_t A, std::int64_t B, std::int64_t bound) {
  if (p >= bound) throw std::out_of_range("p = " + std::to_string(p) + " exceeds the exhaustive counting bound");
  const FiniteField F = FiniteField::prime(p);
  std::vector<int> square_count(static_cast<std::size_t>(p), 0);
  for (std::int64_t y = 0; y < p; ++y) ++square_count[static_cast<std::size_t>(F.mul(F.from_int(y), F.from_int(y)).a)];
  std::int64_t count = 1;
  const std::int64_t a = F.mod(A), b = F.mod(B);
  for (std::int64_t x = 0; x < p; ++x) {
    const std::int64_t x3 = F.pow(F.from_int(x), 3).a;
    const std::int64_t r = F.mod(x3 + F.mul(F.from_int(a), F.from_int(x)).a + b);
    count += square_count[static_cast<std::size_t>(r)];
  }
  return count;
}

FrobeniusCheck frobenius_equals_cm(std::int64_t p, std::int64_t A, std::int64_t B, const QuadInt& pi) {
  FrobeniusCheck out;
  out.p = p;
  out.pi = pi;
  const CurveModP C(p, A, B, pi.d, 2);
  const QuadInt pibar = conj(pi);
  out.pi_passes = true;
  out.pibar_passes = true;
  for (const CurvePoint& P : C.points()) {
    const CurvePoint F = C.frobenius(P);
    if (!(C.cm_apply(pi, P) == F)) out.pi_passes = false;
    if (!(C.cm_apply(pibar, P) == F)) out.pibar_passes = false;
    ++out.points_checked;
  }
  out.point_count = count_points(p, A, B);
  out.trace = trace(pi);
  out.trace_matches = out.trace == p + 1 - out.point_count;
  if (out.pi_passes != out.pibar_passes) {
    out.matched = out.pi_passes ? pi : pibar;
    out.norm_matches = norm(*out.matched - QuadInt(1, 0, pi.d)) == out.point_count;
  }
  return out;
}

}  // namespace cmk2
