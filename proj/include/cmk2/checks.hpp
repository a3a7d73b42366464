#pragma once

// Certificates for the arithmetic and named-function checks that sit beside
// the relation verifiers: index sets, Hecke character against point counts,
// Frobenius against CM, named-function sanity, tame certificates of alpha'.

#include <cstdint>
#include <vector>

#include "cmk2/certificate.hpp"
#include "cmk2/relations.hpp"

namespace cmk2 {

struct PrimePair {
  QuadIdeal p;
  QuadIdeal pbar;
};

/// The prime above a split p whose phi-value has positive w-coordinate, and its
/// conjugate. Throws ArithmeticError unless p splits and is prime to f.
PrimePair choose_prime(const HeckeCharacter& phi, std::int64_t p);

Certificate check_enumeration(const HeckeCharacter& phi, const QuadIdeal& pbar, int a, std::int64_t bound);

/// a_p from phi against p + 1 - #E(F_p) for every odd prime p < max_prime of good reduction.
Certificate check_hecke(const HeckeCharacter& phi, std::int64_t A, std::int64_t B, std::int64_t max_prime);

/// Frobenius on E(F_{p^2}) against [phi(P)] for the chosen prime P above p.
Certificate check_frobenius(const HeckeCharacter& phi, std::int64_t A, std::int64_t B, std::int64_t p);

/// Ellipticity, orders at the support (against a direct Laurent probe) and the
/// distribution relation under l, for g_a, s_m, t_gamma and g_l.
Certificate check_named_functions(const RelationContext& ctx, const std::vector<QuadIdeal>& ms, const QuadIdeal& l,
                                  const std::vector<int>& as);

/// The terms of alpha'_m and the annotation of alpha_m; no numerics.
Certificate describe_alpha(const RelationContext& ctx, const QuadIdeal& m);

Certificate check_tame(const RelationContext& ctx, const QuadIdeal& m);

/// Control: alpha'_1 cut down to its first term must fail the tame certificate.
Certificate control_single_term(const RelationContext& ctx);

}  // namespace cmk2
