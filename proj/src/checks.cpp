#include "cmk2/checks.hpp"

#include <algorithm>

#include "cmk2/finitefield.hpp"
#include "cmk2/hecke.hpp"

namespace cmk2 {

namespace {

Certificate blank(std::string id, std::string identity, std::uint64_t seed = 0) {
  Certificate c;
  c.id = std::move(id);
  c.identity = std::move(identity);
  c.seed = seed;
  c.precision_bits = working_bits();
  return c;
}

Certificate numeric(const RelationContext& ctx, std::string id, std::string identity) {
  Certificate c = blank(std::move(id), std::move(identity), ctx.seed);
  c.tolerance = ctx.tolerance;
  c.parameters["a"] = ctx.a;
  c.parameters["p"] = to_string(ctx.p);
  return c;
}

/// u g = 1 mod f for some unit u, tested by exact division in K.
bool has_ray_one_generator(const QuadIdeal& P, const QuadIdeal& f) {
  const QuadRat one(Rational(1), Rational(0), P.field());
  for (const QuadInt& u : unit_group(P.field()))
    if (is_integral((to_rat(u * P.generator()) - one) / to_rat(f.generator()))) return true;
  return false;
}

void record_scan(Certificate& c, const std::string& name, const ConstancyResult& r) {
  c.residual(name + ": ratio spread", r.max_deviation);
  c.residual(name + ": |c| - 1", r.modulus_error);
  if (c.samples.empty())
    for (const SamplePoint& p : r.points) c.samples.push_back(p.to_string());
}

/// f(z + lambda) / f(z) over the samples, for lambda = 1 and w.
void ellipticity(const RelationContext& ctx, Certificate& c, const std::string& name, const EllFunction& f) {
  const Lattice& L = ctx.lattice;
  for (const auto& [tag, shift] : {std::pair{"1", L.embed(Rational(1), Rational(0))},
                                   std::pair{"w", L.embed(Rational(0), Rational(1))}}) {
    const Evaluator moved = [f, shift = shift, &L](const BigComplex& z) { return f.evaluate(L, z + shift); };
    const ConstancyResult r = equal_up_to_constant(moved, evaluator(f, L), L, ctx.samples, ctx.seed, ctx.tolerance);
    c.residual(name + ": f(z + " + tag + ")/f(z) spread", r.max_deviation);
    c.residual(name + ": |f(z + " + tag + ")/f(z) - 1|", abs(r.value - BigComplex(Real(1))));
    if (c.samples.empty())
      for (const SamplePoint& p : r.points) c.samples.push_back(p.to_string());
  }
}

/// f(P + h) / h^n against the leading coefficient, h = 2^-(bits/2) along a fixed direction.
void orders(const RelationContext& ctx, Certificate& c, const std::string& name, const EllFunction& f) {
  Lattice L = ctx.lattice;
  const unsigned bits = working_bits();
  L.set_pole_tolerance(ldexp(Real(1), -static_cast<int>(bits) + 8));
  const BigComplex h = BigComplex(Real(3), Real(1)) * ldexp(Real(1), -static_cast<int>(bits / 2));
  Real worst(0);
  for (const auto& [P, n] : f.divisor().terms()) {
    const EllFunction::Leading lead = f.leading(L, P);
    c.check(name + ": order " + std::to_string(n) + " at " + to_string(P), lead.order == n);
    const BigComplex probe = f.evaluate(L, L.embed(P.r(), P.s()) + h) / pow(h, n);
    const Real err = abs(probe / lead.coefficient - BigComplex(Real(1)));
    if (err > worst) worst = err;
  }
  c.residual(name + ": Laurent probe at the support", worst);
}

}  // namespace

PrimePair choose_prime(const HeckeCharacter& phi, std::int64_t p) {
  const Splitting s = split_rational_prime(p, phi.field());
  if (s.kind != SplitKind::split) throw ArithmeticError(std::to_string(p) + " does not split");
  for (std::size_t i = 0; i < 2; ++i) {
    const QuadInt v = phi.evaluate(s.primes[i]);
    if (v.y > 0) return {s.primes[i], s.primes[1 - i]};
  }
  throw ArithmeticError("no prime above " + std::to_string(p) + " with phi-value of positive w-coordinate");
}

Certificate check_enumeration(const HeckeCharacter& phi, const QuadIdeal& pbar, int a, std::int64_t bound) {
  const int d = phi.field();
  const QuadIdeal& f = phi.conductor();
  const IndexSets sets = enumerate_L_R(bound, f, pbar, a);
  Certificate c = blank("enumerate/" + std::to_string(bound), "index sets of primes l and their products m");
  c.parameters["bound"] = bound;
  c.parameters["a"] = a;
  c.parameters["pbar"] = to_string(pbar);
  c.parameters["f"] = to_string(f);

  const QuadIdeal excluded = f * pbar * QuadIdeal(QuadInt(a, 0, d));
  std::vector<QuadIdeal> expected;
  for (std::int64_t q = 2; q <= bound; ++q) {
    if (!is_prime(q)) continue;
    for (const QuadIdeal& P : split_rational_prime(q, d).primes)
      if (P.norm() <= bound && coprime(P, excluded) && has_ray_one_generator(P, f)) expected.push_back(P);
  }
  std::sort(expected.begin(), expected.end());
  c.check("L is exactly the admissible primes of norm <= bound", expected == sets.L);
  bool r_ok = true;
  for (const QuadIdeal& m : sets.R) {
    if (m.norm() > bound) r_ok = false;
    for (const auto& [P, e] : factor(m))
      if (!std::binary_search(sets.L.begin(), sets.L.end(), P)) r_ok = false;
  }
  c.check("R consists of products of L of norm <= bound", r_ok);
  c.check("R contains (1)", std::binary_search(sets.R.begin(), sets.R.end(), QuadIdeal::unit(d)));
  ordered_json L = ordered_json::array(), R = ordered_json::array();
  for (const QuadIdeal& P : sets.L) L.push_back(to_string(P));
  for (const QuadIdeal& m : sets.R) R.push_back(to_string(m));
  c.diagnostics["L"] = L;
  c.diagnostics["R"] = R;
  return c;
}

Certificate check_hecke(const HeckeCharacter& phi, std::int64_t A, std::int64_t B, std::int64_t max_prime) {
  Certificate c = blank("hecke/" + std::to_string(max_prime), "a_p(phi) = p + 1 - #E(F_p)");
  c.parameters["A"] = A;
  c.parameters["B"] = B;
  c.parameters["max_prime"] = max_prime;
  const std::int64_t disc = 4 * A * A * A + 27 * B * B;
  ordered_json table = ordered_json::object();
  int split = 0;
  for (std::int64_t p = 3; p < max_prime; ++p) {
    if (!is_prime(p) || disc % p == 0) continue;
    if (!coprime(QuadIdeal(QuadInt(p, 0, phi.field())), phi.conductor())) continue;
    const PointCountCheck r = hecke_point_count_check(phi, A, B, p);
    if (r.kind == SplitKind::split) ++split;
    c.check("a_" + std::to_string(p), r.match());
    table[std::to_string(p)] = {{"a_p", r.ap_phi}, {"count", r.point_count},
                                {"kind", r.kind == SplitKind::split ? "split" : "inert"}};
  }
  c.diagnostics["split_primes"] = split;
  c.diagnostics["a_p"] = table;
  return c;
}

Certificate check_frobenius(const HeckeCharacter& phi, std::int64_t A, std::int64_t B, std::int64_t p) {
  const PrimePair pp = choose_prime(phi, p);
  const QuadInt pi = phi.evaluate(pp.p);
  const FrobeniusCheck r = frobenius_equals_cm(p, A, B, pi);
  Certificate c = blank("frobenius/" + std::to_string(p), "Frobenius on E(F_p^2) is [pi] for exactly one of pi, conj(pi)");
  c.parameters["p"] = p;
  c.parameters["pi"] = to_string(pi);
  c.check("exactly one of pi, conj(pi) acts as Frobenius", r.pi_passes != r.pibar_passes);
  c.check("trace(pi) = p + 1 - #E(F_p)", r.trace_matches);
  c.check("#E(F_p) = N(pi - 1) for the matching one", r.norm_matches);
  c.diagnostics["points_checked"] = r.points_checked;
  c.diagnostics["point_count"] = r.point_count;
  c.diagnostics["matched"] = r.matched ? to_string(*r.matched) : "none";
  return c;
}

Certificate check_named_functions(const RelationContext& ctx, const std::vector<QuadIdeal>& ms, const QuadIdeal& l,
                                  const std::vector<int>& as) {
  const TorsionSystem& sys = ctx.system;
  const Lattice& L = ctx.lattice;
  const int d = l.field();
  Certificate c = numeric(ctx, "named/" + to_string(l),
                          "named functions are elliptic with the prescribed divisors; g_a satisfies the distribution relation");
  ordered_json msj = ordered_json::array();
  for (const QuadIdeal& m : ms) msj.push_back(to_string(m));
  c.parameters["m"] = msj;
  c.parameters["l"] = to_string(l);

  std::vector<std::pair<std::string, EllFunction>> named;
  for (int a : as) {
    named.emplace_back("g_" + std::to_string(a), build_named(NamedRequest::g_a(a, d)));
    for (const TorsionPoint& gamma : torsion_subgroup(QuadIdeal(QuadInt(a, 0, d))))
      if (!gamma.is_zero()) named.emplace_back("t[" + to_string(gamma) + "], a=" + std::to_string(a),
                                               build_named(NamedRequest::t(gamma, a)));
  }
  for (const QuadIdeal& m : ms) {
    const int M = static_cast<int>((m * sys.f()).norm());
    named.emplace_back("s_" + to_string(m), build_named(NamedRequest::s(sys.make_y(m), M)));
  }
  named.emplace_back("g_" + to_string(l), build_named(NamedRequest::g_l(l)));

  for (const auto& [name, f] : named) {
    c.check(name + ": divisor is principal", f.divisor().is_principal());
    ellipticity(ctx, c, name, f);
    orders(ctx, c, name, f);
  }

  const QuadInt phi = sys.character().evaluate(l);
  for (int a : as) {
    const EllFunction g = build_named(NamedRequest::g_a(a, d));
    std::vector<std::pair<Evaluator, int>> shifts;
    for (const TorsionPoint& e : torsion_subgroup(l)) {
      const BigComplex w = L.embed(e.r(), e.s());
      shifts.emplace_back([g, w, &L](const BigComplex& z) { return g.evaluate(L, z + w); }, 1);
    }
    record_scan(c, "distribution of g_" + std::to_string(a) + " under " + to_string(l),
                equal_up_to_constant(product_evaluator(shifts), pullback_evaluator(g, phi, L), L, ctx.samples,
                                     ctx.seed, ctx.tolerance));
  }
  return c;
}

Certificate describe_alpha(const RelationContext& ctx, const QuadIdeal& m) {
  const SymbolSum s = build_alpha_prime(ctx.system, m, ctx.a);
  const AlphaElement alpha = build_alpha(ctx.system, m, ctx.a, ctx.p);
  Certificate c = blank("alpha/" + to_string(m) + "/a=" + std::to_string(ctx.a), "alpha'_m and alpha_m as formal sums");
  c.parameters["m"] = to_string(m);
  c.parameters["a"] = ctx.a;
  c.parameters["p"] = to_string(ctx.p);
  c.parameters["level"] = to_string(s.level());
  c.parameters["scale"] = s.scale();
  ordered_json terms = ordered_json::array();
  for (const Term& t : s.terms())
    terms.push_back(std::to_string(t.coefficient) + " {" + t.left.describe() + ", " + t.right.describe() + "}");
  c.diagnostics["alpha'"] = terms;
  c.diagnostics["alpha"] = alpha.describe();
  const NormalForm nf = normal_form(s);
  c.diagnostics["normal_form_function_terms"] = nf.functions.size();
  c.diagnostics["normal_form_constant_terms"] = nf.constants.size();
  c.check("level is mf", s.level() == m * ctx.system.f());
  return c;
}

Certificate check_tame(const RelationContext& ctx, const QuadIdeal& m) {
  const SymbolSum s = build_alpha_prime(ctx.system, m, ctx.a);
  Certificate c = certify_tame_kernel(s, ctx.lattice, {ctx.tolerance, default_order_bound(s.level(), ctx.a), ctx.seed},
                                      "tame/" + to_string(m) + "/a=" + std::to_string(ctx.a),
                                      "N(mf) alpha'_m has trivial tame symbols at every point");
  c.parameters["m"] = to_string(m);
  c.parameters["a"] = ctx.a;
  return c;
}

Certificate control_single_term(const RelationContext& ctx) {
  const QuadIdeal one = QuadIdeal::unit(ctx.system.f().field());
  const SymbolSum full = build_alpha_prime(ctx.system, one, ctx.a);
  SymbolSum single(full.level(), full.scale());
  const Term& t = full.terms().front();
  single.add(t.coefficient, t.left, t.right);
  const Certificate faulted = certify_tame_kernel(
      single, ctx.lattice, {ctx.tolerance, default_order_bound(single.level(), ctx.a), ctx.seed}, "", "");
  Certificate c = fault_control("control/tame-single-term/a=" + std::to_string(ctx.a),
                                "the leading term of alpha'_1 alone is not in the tame kernel", faulted.passed());
  c.diagnostics["faulted"] = faulted.to_json()["residuals"];
  return c;
}

}  // namespace cmk2
