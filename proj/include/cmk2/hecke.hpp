#pragma once

// Hecke character of infinity type (1,0): on ideals prime to the conductor f,
// phi((g)) = the generator of (g) congruent to 1 mod f.

#include <cstdint>

#include "cmk2/finitefield.hpp"
#include "cmk2/qfield.hpp"

namespace cmk2 {

class HeckeCharacter {
 public:
  /// Throws ArithmeticError unless the units inject into (O_K / f)^*.
  explicit HeckeCharacter(QuadIdeal conductor);

  const QuadIdeal& conductor() const { return conductor_; }
  int field() const { return conductor_.field(); }

  /// The associate of m's generator that is 1 mod the conductor, if any.
  std::optional<QuadInt> ray_one_generator(const QuadIdeal& m) const;
  /// phi(m); throws when m is not prime to the conductor or has no ray-one generator.
  QuadInt evaluate(const QuadIdeal& m) const;

 private:
  QuadIdeal conductor_;
};

struct PointCountCheck {
  std::int64_t p{0};
  SplitKind kind{SplitKind::split};
  std::optional<QuadInt> phi_value;  // phi of the first prime above p when split
  std::int64_t ap_phi{0};
  std::int64_t point_count{0};
  std::int64_t ap_count{0};
  bool match() const { return ap_phi == ap_count; }
};

/// a_p from the character (phi(P) + conj, or 0 when p is inert) against
/// p + 1 - #E(F_p) by exhaustive counting on y^2 = x^3 + A x + B.
PointCountCheck hecke_point_count_check(const HeckeCharacter& phi, std::int64_t A, std::int64_t B, std::int64_t p);

}  // namespace cmk2
