#pragma once

// End-to-end checks of the norm relations
//   (E1) N alpha_ml = alpha_m                          l | m, or l = p with p not dividing m
//   (E2) N alpha_ml = (1 - [phi(l)]_* Fr_l^-1) alpha_m   l not dividing m p
// through the identities they reduce to: exact preimage sets, function
// identities up to modulus-1 constants, distribution and parity of g_a, and
// tame certificates. Equality in K_2 itself is not certified.

#include <cstdint>
#include <vector>

#include "cmk2/certificate.hpp"
#include "cmk2/symbols.hpp"
#include "cmk2/torsion.hpp"

namespace cmk2 {

struct RelationContext {
  const TorsionSystem& system;
  const Lattice& lattice;
  int a{2};
  QuadIdeal p;
  Real tolerance;
  int samples{20};
  std::uint64_t seed{0};
};

/// Deliberate corruptions for control runs.
enum class Fault {
  none,
  g_l_times_nonconstant,  // function identities: g_l replaced by g_l * h
  nonconstant_choice,     // choice independence: s_m replaced by s_m * h
};

/// Norm of s_ml over the l-layer (times s_n when l does not divide m) against
/// [phi(l)]^* s_m * g_l, all s with divisor M(y) - M(0), M = N(mlf); plus the
/// pushforward checks [phi(l)]_* s_ml = s_m (and [phi(l)]_* s_n = s_m).
std::vector<Certificate> verify_function_identities(const RelationContext& ctx, const QuadIdeal& m,
                                                    const QuadIdeal& l, Fault fault = Fault::none);

/// Throws std::invalid_argument unless l | m, or l = p and p does not divide m.
RelationReport verify_E1(const RelationContext& ctx, const QuadIdeal& m, const QuadIdeal& l,
                         Fault fault = Fault::none);

/// Throws std::invalid_argument if l divides m p.
RelationReport verify_E2(const RelationContext& ctx, const QuadIdeal& m, const QuadIdeal& l,
                         Fault fault = Fault::none);

/// Rebuilds alpha'_m with s_m scaled, with g_a and t_gamma scaled, and with g_a
/// from the x-coordinate product; each must differ from alpha'_m by
/// constant-entry terms only and have the same tame values.
Certificate verify_choice_independence(const RelationContext& ctx, const QuadIdeal& m,
                                       Fault fault = Fault::none);

/// A control certificate: passes iff the faulted certificate failed.
Certificate fault_control(std::string id, std::string identity, bool faulted_passed);

}  // namespace cmk2
