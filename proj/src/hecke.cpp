#include "cmk2/hecke.hpp"

namespace cmk2 {

HeckeCharacter::HeckeCharacter(QuadIdeal conductor) : conductor_(std::move(conductor)) {
  const QuadInt one(1, 0, field());
  for (const QuadInt& u : unit_group(field()))
    if (!(u == one) && conductor_.contains(u - one))
      throw ArithmeticError("units do not inject modulo the conductor " + to_string(conductor_));
}

std::optional<QuadInt> HeckeCharacter::ray_one_generator(const QuadIdeal& m) const {
  const QuadInt one(1, 0, field());
  for (const QuadInt& u : unit_group(field())) {
    const QuadInt g = u * m.generator();
    if (conductor_.contains(g - one)) return g;
  }
  return std::nullopt;
}

QuadInt HeckeCharacter::evaluate(const QuadIdeal& m) const {
  if (!coprime(m, conductor_))
    throw ArithmeticError(to_string(m) + " is not prime to the conductor " + to_string(conductor_));
  auto g = ray_one_generator(m);
  if (!g) throw ArithmeticError(to_string(m) + " has no generator congruent to 1 mod " + to_string(conductor_));
  return *g;
}

PointCountCheck hecke_point_count_check(const HeckeCharacter& phi, std::int64_t A, std::int64_t B, std::int64_t p) {
  PointCountCheck out;
  out.p = p;
  const Splitting s = split_rational_prime(p, phi.field());
  out.kind = s.kind;
  // validates good reduction before anything is counted
  const CurveModP curve(p, A, B, phi.field());
  if (s.kind == SplitKind::ramified || !coprime(s.primes.front(), phi.conductor()))
    throw BadReductionError("p = " + std::to_string(p) + " divides the conductor");
  if (s.kind == SplitKind::split) {
    out.phi_value = phi.evaluate(s.primes.front());
    out.ap_phi = trace(*out.phi_value);
  } else {
    out.ap_phi = 0;
  }
  out.point_count = count_points(p, curve.A(), curve.B());
  out.ap_count = p + 1 - out.point_count;
  return out;
}

}  // namespace cmk2
