#include "cmk2/relations.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>

namespace cmk2 {

namespace {

QuadIdeal rational_ideal(std::int64_t n, int d) { return QuadIdeal(QuadInt(n, 0, d)); }

std::string pair_prefix(const std::string& relation, const QuadIdeal& m, const QuadIdeal& l) {
  return relation + "/" + to_string(m) + "/" + to_string(l) + "/";
}

Certificate make_certificate(const RelationContext& ctx, std::string id, std::string identity, const QuadIdeal& m,
                             const std::optional<QuadIdeal>& l) {
  Certificate c;
  c.id = std::move(id);
  c.identity = std::move(identity);
  c.seed = ctx.seed;
  c.precision_bits = working_bits();
  c.tolerance = ctx.tolerance;
  c.parameters["d"] = m.field();
  c.parameters["a"] = ctx.a;
  c.parameters["m"] = to_string(m);
  if (l) c.parameters["l"] = to_string(*l);
  c.parameters["p"] = to_string(ctx.p);
  return c;
}

ConstancyResult scan(const RelationContext& ctx, const Evaluator& f, const Evaluator& g) {
  return equal_up_to_constant(f, g, ctx.lattice, ctx.samples, ctx.seed, ctx.tolerance);
}

void record_scan(Certificate& c, const std::string& name, const ConstancyResult& r) {
  c.residual(name + ": ratio spread", r.max_deviation);
  c.residual(name + ": |c| - 1", r.modulus_error);
  c.diagnostics["constants"][name] = decimal(r.value, 20);
  if (c.samples.empty())
    for (const SamplePoint& p : r.points) c.samples.push_back(p.to_string());
}

/// 5(1/5) - 5(0): nonconstant, with support away from E[2], E[3] and the y_m in use.
EllFunction nonconstant_factor(int d) {
  Divisor D(d);
  D.add(TorsionPoint(Rational(1, 5), Rational(0), d), 5);
  D.add(TorsionPoint::zero(d), -5);
  return EllFunction::from_divisor(D, "h");
}

Evaluator shifted(const EllFunction& f, const TorsionPoint& c, const Lattice& L) {
  const BigComplex w = L.embed(c.r(), c.s());
  return [f, w, &L](const BigComplex& z) { return f.evaluate(L, z + w); };
}

BigComplex embed(const Lattice& L, const TorsionPoint& p) { return L.embed(p.r(), p.s()); }

/// Everything one (m, l) pair needs.
struct PairData {
  bool additive;
  QuadIdeal ml, mf;
  QuadInt phi;
  TorsionPoint y_m, y_ml;
  std::vector<TorsionPoint> conjugates;  // of y_ml over the l-layer
  std::optional<TorsionPoint> n;          // E2 only
};

PairData pair_data(const RelationContext& ctx, const QuadIdeal& m, const QuadIdeal& l) {
  const TorsionSystem& sys = ctx.system;
  PairData out;
  out.additive = l.divides(m);
  out.ml = m * l;
  out.mf = m * sys.f();
  out.phi = sys.character().evaluate(l);
  out.y_m = sys.make_y(m);
  out.y_ml = sys.make_y(out.ml);
  out.conjugates =
      galois_conjugates(out.y_ml, l, out.additive ? OrbitKind::additive : OrbitKind::multiplicative);
  if (!out.additive) out.n = residue_invert(out.phi, out.mf) * out.y_m;
  return out;
}

std::vector<Certificate> function_identities(const RelationContext& ctx, const QuadIdeal& m, const QuadIdeal& l,
                                             const PairData& pd, const std::string& prefix, Fault fault) {
  const Lattice& L = ctx.lattice;
  const int d = m.field();
  const int M = static_cast<int>((pd.ml * ctx.system.f()).norm());

  std::vector<EllFunction> left;
  for (const TorsionPoint& t : pd.conjugates) left.push_back(build_named(NamedRequest::s(t, M)));
  if (pd.n) left.push_back(build_named(NamedRequest::s(*pd.n, M, NamedKind::s_n)));
  const EllFunction s_m = build_named(NamedRequest::s(pd.y_m, M));
  const EllFunction g_l = build_named(NamedRequest::g_l(l));

  Evaluator gl_eval = evaluator(g_l, L);
  Divisor gl_div = g_l.divisor();
  if (fault == Fault::g_l_times_nonconstant) {
    const EllFunction h = nonconstant_factor(d);
    gl_eval = product_evaluator({{gl_eval, 1}, {evaluator(h, L), 1}});
    gl_div = gl_div + h.divisor();
  }

  std::vector<Certificate> out;
  {
    Certificate c = make_certificate(
        ctx, prefix + "function-identity",
        pd.n ? "N(s_ml) s_n = [phi(l)]^* s_m * g_l" : "N s_ml = [phi(l)]^* s_m * g_l", m, l);
    c.parameters["M"] = M;
    c.parameters["conjugates"] = pd.conjugates.size();
    Divisor lhs_div(d);
    std::vector<std::pair<Evaluator, int>> lhs;
    for (const EllFunction& f : left) {
      lhs_div = lhs_div + f.divisor();
      lhs.emplace_back(evaluator(f, L), 1);
    }
    const Divisor rhs_div = s_m.divisor().pullback(pd.phi) + gl_div.scaled(M);
    c.check("divisors of both sides agree", lhs_div == rhs_div);
    const Evaluator rhs = product_evaluator({{pullback_evaluator(s_m, pd.phi, L), 1}, {gl_eval, M}});
    record_scan(c, "left / right", scan(ctx, product_evaluator(lhs), rhs));
    out.push_back(std::move(c));
  }
  {
    Certificate c = make_certificate(ctx, prefix + "pushforward-s",
                                     pd.n ? "[phi(l)]_* s_ml = s_m and [phi(l)]_* s_n = s_m" : "[phi(l)]_* s_ml = s_m",
                                     m, l);
    c.parameters["M"] = M;
    const EllFunction s_ml = build_named(NamedRequest::s(pd.y_ml, M));
    c.check("[phi(l)]_* div s_ml = div s_m", s_ml.divisor().pushforward(pd.phi) == s_m.divisor());
    record_scan(c, "[phi(l)]_* s_ml / s_m", scan(ctx, pushforward_evaluator(s_ml, pd.phi, L), evaluator(s_m, L)));
    if (pd.n) {
      const EllFunction s_n = left.back();
      c.check("[phi(l)]_* div s_n = div s_m", s_n.divisor().pushforward(pd.phi) == s_m.divisor());
      record_scan(c, "[phi(l)]_* s_n / s_m", scan(ctx, pushforward_evaluator(s_n, pd.phi, L), evaluator(s_m, L)));
    }
    out.push_back(std::move(c));
  }
  return out;
}

Certificate distribution_stage(const RelationContext& ctx, const QuadIdeal& m, const QuadIdeal& l,
                               const PairData& pd, const std::string& id) {
  const Lattice& L = ctx.lattice;
  const int d = m.field();
  Certificate c = make_certificate(ctx, id, "prod_tau g_a(y_ml^tau) = ([phi(l)]_* g_a)(y_m)", m, l);
  const EllFunction g = build_named(NamedRequest::g_a(ctx.a, d));

  BigComplex lhs(Real(1));
  for (const TorsionPoint& t : pd.conjugates) lhs *= g.evaluate(L, t);
  if (pd.n) lhs *= g.evaluate(L, *pd.n);
  const BigComplex rhs = pushforward_evaluator(g, pd.phi, L)(embed(L, pd.y_m));
  const BigComplex ratio = lhs / rhs;
  c.residual("values at y_m: |ratio| - 1", abs(abs(ratio) - Real(1)));
  c.residual("values at y_m: |ratio - 1|", abs(ratio - BigComplex(Real(1))));
  c.diagnostics["ratio at y_m"] = decimal(ratio, 20);

  std::vector<std::pair<Evaluator, int>> shifts;
  for (const TorsionPoint& e : torsion_subgroup(l)) shifts.emplace_back(shifted(g, e, L), 1);
  record_scan(c, "prod_{c in E[l]} g_a(z + c) / g_a(phi(l) z)",
              scan(ctx, product_evaluator(shifts), pullback_evaluator(g, pd.phi, L)));
  return c;
}

void parity_scan(const RelationContext& ctx, Certificate& c, const std::string& name, const EllFunction& f) {
  const ConstancyResult r = scan(ctx, evaluator(f.negated_argument(), ctx.lattice), evaluator(f, ctx.lattice));
  c.residual(name + ": ratio spread", r.max_deviation);
  const Real to_plus = abs(r.value - BigComplex(Real(1)));
  const Real to_minus = abs(r.value + BigComplex(Real(1)));
  c.residual(name + ": distance of the constant to +-1", to_plus < to_minus ? to_plus : to_minus);
  c.diagnostics["constants"][name] = decimal(r.value, 20);
  c.check("div " + name + " is symmetric", f.divisor().negated() == f.divisor());
  if (c.samples.empty())
    for (const SamplePoint& p : r.points) c.samples.push_back(p.to_string());
}

/// M A - B for M in {N(l), a N(l)}.
std::vector<std::pair<int, SymbolSum>> a_minus_b(const QuadIdeal& l, int a) {
  const SymbolSum A = build_A(l, a);
  std::vector<std::pair<int, SymbolSum>> out;
  for (const int M : {static_cast<int>(l.norm()), a * static_cast<int>(l.norm())})
    out.emplace_back(M, A.scaled(M) - build_B(l, a, M));
  return out;
}

Certificate parity_stage(const RelationContext& ctx, const QuadIdeal& m, const QuadIdeal& l, const std::string& id) {
  const int d = m.field();
  Certificate c = make_certificate(ctx, id, "[-1]^* g_a = +-g_a, [-1]^* g_l = +-g_l, [-1]^* t_gamma ~ t_-gamma", m, l);
  parity_scan(ctx, c, "g_a", build_named(NamedRequest::g_a(ctx.a, d)));
  parity_scan(ctx, c, "g_l", build_named(NamedRequest::g_l(l)));
  for (const TorsionPoint& gamma : torsion_subgroup(rational_ideal(ctx.a, d))) {
    if (gamma.is_zero()) continue;
    const EllFunction t = build_named(NamedRequest::t(gamma, ctx.a));
    const EllFunction t_neg = build_named(NamedRequest::t(-gamma, ctx.a));
    const std::string name = "t[" + to_string(gamma) + "]";
    c.check("[-1]^* div " + name + " = div t[-gamma]", t.divisor().negated() == t_neg.divisor());
    record_scan(c, "[-1]^* " + name + " / t[-gamma]",
                scan(ctx, evaluator(t.negated_argument(), ctx.lattice), evaluator(t_neg, ctx.lattice)));
  }
  for (const auto& [M, diff] : a_minus_b(l, ctx.a)) {
    const NormalForm nf = normal_form(diff);
    c.check("[-1] fixes " + std::to_string(M) + "A - B up to constant-entry terms",
            normal_form(symbol_galois(diff, SymbolAction::inversion())).same_function_part(nf));
  }
  return c;
}

TameOptions tame_options(const RelationContext& ctx, const QuadIdeal& level) {
  return {ctx.tolerance, default_order_bound(level, ctx.a), ctx.seed};
}

Certificate tame_stage(const RelationContext& ctx, const SymbolSum& s, const std::string& id,
                       const std::string& identity, const QuadIdeal& m, const QuadIdeal& l) {
  Certificate c = certify_tame_kernel(s, ctx.lattice, tame_options(ctx, s.level()), id, identity);
  c.parameters["m"] = to_string(m);
  c.parameters["l"] = to_string(l);
  c.parameters["a"] = ctx.a;
  return c;
}

std::vector<Certificate> tame_stages(const RelationContext& ctx, const QuadIdeal& m, const QuadIdeal& l,
                                     const std::string& prefix) {
  const TorsionSystem& sys = ctx.system;
  std::vector<Certificate> out;
  out.push_back(tame_stage(ctx, build_alpha_prime(sys, m * l, ctx.a), prefix + "tame-alpha'-ml",
                           "N(mlf) alpha'_ml has trivial tame symbols", m, l));
  out.push_back(tame_stage(ctx, build_alpha_prime(sys, m, ctx.a), prefix + "tame-alpha'-m",
                           "N(mf) alpha'_m has trivial tame symbols", m, l));
  const SymbolSum A = build_A(l, ctx.a);
  for (const auto& [M, diff] : a_minus_b(l, ctx.a)) {
    const std::string tag = std::to_string(M) + "A - B";
    Certificate c = tame_stage(ctx, diff, prefix + "tame-A-B-" + std::to_string(M),
                               tag + " has trivial tame symbols, |tame(" + std::to_string(M) + "A)| = |tame(B)|", m, l);
    const SymbolSum MA = A.scaled(M);
    const SymbolSum neg_B = diff - MA;
    std::vector<TorsionPoint> pts = MA.support();
    for (const TorsionPoint& p : neg_B.support())
      if (!std::binary_search(pts.begin(), pts.end(), p)) pts.insert(std::upper_bound(pts.begin(), pts.end(), p), p);
    for (const TorsionPoint& p : pts)
      c.residual("|tame(MA)| / |tame(B)| - 1 at " + to_string(p),
                 abs(abs(tame_symbol_at(MA, p, ctx.lattice)) * abs(tame_symbol_at(neg_B, p, ctx.lattice)) - Real(1)));
    out.push_back(std::move(c));
  }
  return out;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

}  // namespace

std::vector<Certificate> verify_function_identities(const RelationContext& ctx, const QuadIdeal& m,
                                                    const QuadIdeal& l, Fault fault) {
  const PairData pd = pair_data(ctx, m, l);
  const std::string prefix = pair_prefix(pd.additive ? "E1" : "E2", m, l) + (pd.additive ? "2-" : "4-");
  return function_identities(ctx, m, l, pd, prefix, fault);
}

RelationReport verify_E1(const RelationContext& ctx, const QuadIdeal& m, const QuadIdeal& l, Fault fault) {
  RelationReport report{"E1", to_string(m), to_string(l), {}};
  const std::string prefix = pair_prefix("E1", m, l);
  const TorsionSystem& sys = ctx.system;

  if (!l.divides(m)) {
    require(l == ctx.p && !ctx.p.divides(m), "E1 needs l | m, or l = p with p not dividing m");
    Certificate c = make_certificate(ctx, prefix + "1-definition",
                                     "N_{H(m)} alpha_mp = alpha_m holds by definition when p does not divide m", m, l);
    const AlphaElement upper = build_alpha(sys, m * l, ctx.a, ctx.p);
    const AlphaElement lower = build_alpha(sys, m, ctx.a, ctx.p);
    c.check("annotation of alpha_mp normed to H(m) equals that of alpha_m",
            upper.norm_down(m).same_annotation(lower));
    c.check("both are built from the same alpha'_mp",
            normal_form(upper.unwrap()).same_function_part(normal_form(lower.unwrap())));
    c.diagnostics["alpha_mp"] = upper.norm_down(m).describe();
    c.diagnostics["alpha_m"] = lower.describe();
    report.stages.push_back(std::move(c));
    report.stages.push_back(tame_stage(ctx, lower.unwrap(), prefix + "5-tame-alpha'-mp",
                                       "N(mpf) alpha'_mp has trivial tame symbols", m, l));
    return report;
  }

  const PairData pd = pair_data(ctx, m, l);
  {
    Certificate c = make_certificate(ctx, prefix + "1-set-identity",
                                     "[phi(l)]^-1(y_m) = union of the conjugates y_ml^tau (additive layer)", m, l);
    const std::vector<TorsionPoint> pre = preimage_set(pd.y_m, pd.phi);
    std::vector<TorsionPoint> translates;
    for (const TorsionPoint& e : torsion_subgroup(l)) translates.push_back(pd.y_ml + e);
    std::sort(translates.begin(), translates.end());
    c.check("preimage set equals the conjugates of y_ml", pre == pd.conjugates);
    c.check("conjugates of y_ml are y_ml + E[l]", translates == pd.conjugates);
    c.diagnostics["y_m"] = to_string(pd.y_m);
    c.diagnostics["y_ml"] = to_string(pd.y_ml);
    c.diagnostics["preimages"] = pre.size();
    report.stages.push_back(std::move(c));
  }
  for (Certificate& c : function_identities(ctx, m, l, pd, prefix + "2-", fault)) report.stages.push_back(std::move(c));
  report.stages.push_back(distribution_stage(ctx, m, l, pd, prefix + "3-distribution"));
  report.stages.push_back(parity_stage(ctx, m, l, prefix + "4-parity"));
  for (Certificate& c : tame_stages(ctx, m, l, prefix + "5-")) report.stages.push_back(std::move(c));
  return report;
}

RelationReport verify_E2(const RelationContext& ctx, const QuadIdeal& m, const QuadIdeal& l, Fault fault) {
  require(!l.divides(m * ctx.p), "E2 needs l not dividing m p");
  RelationReport report{"E2", to_string(m), to_string(l), {}};
  const std::string prefix = pair_prefix("E2", m, l);
  const TorsionSystem& sys = ctx.system;
  const int d = m.field();
  const PairData pd = pair_data(ctx, m, l);
  const TorsionPoint& n = *pd.n;
  {
    Certificate c = make_certificate(ctx, prefix + "1-set-identity",
                                     "[phi(l)]^-1(y_m) = union of the conjugates y_ml^tau and {n}", m, l);
    const std::vector<TorsionPoint> pre = preimage_set(pd.y_m, pd.phi);
    std::vector<TorsionPoint> expected = pd.conjugates;
    expected.push_back(n);
    std::sort(expected.begin(), expected.end());
    c.check("phi(l) n = y_m", pd.phi * n == pd.y_m);
    c.check("n is not a conjugate of y_ml", !std::binary_search(pd.conjugates.begin(), pd.conjugates.end(), n));
    c.check("preimage set equals the conjugates of y_ml and n", pre == expected);
    c.diagnostics["n"] = to_string(n);
    c.diagnostics["y_m"] = to_string(pd.y_m);
    c.diagnostics["preimages"] = pre.size();
    report.stages.push_back(std::move(c));
  }
  {
    Certificate c = make_certificate(ctx, prefix + "2-annihilator", "n lies in E[mf]", m, l);
    c.check("mf kills n", n.killed_by(pd.mf));
    c.diagnostics["annihilator"] = to_string(n.annihilator());
    report.stages.push_back(std::move(c));
  }
  {
    Certificate c = make_certificate(
        ctx, prefix + "3-frobenius-twist",
        "Fr_l^-1 alpha'_m = a{g_a(n)^-1 g_a, s_n} - sum {s_n(gamma), t_gamma}", m, l);
    const int M = static_cast<int>(pd.mf.norm());
    const SymbolSum base = build_alpha_prime(sys, m, ctx.a);
    const SymbolSum direct = build_alpha_prime_at(n, M, ctx.a, pd.mf);
    const QuadInt beta = residue_invert(pd.phi, pd.mf * rational_ideal(ctx.a, d));
    const SymbolSum twisted = symbol_galois(base, SymbolAction::scaling(beta));
    c.check("beta y_m = n", beta * pd.y_m == n);
    c.check("direct build and Galois transform differ by constant-entry terms only",
            normal_form(direct - twisted).functions.empty());
    c.diagnostics["beta"] = to_string(beta);
    report.stages.push_back(std::move(c));
    report.stages.push_back(tame_stage(ctx, direct, prefix + "3-frobenius-twist-tame",
                                       "N(mf) Fr_l^-1 alpha'_m has trivial tame symbols", m, l));
  }
  for (Certificate& c : function_identities(ctx, m, l, pd, prefix + "4-", fault)) report.stages.push_back(std::move(c));
  report.stages.push_back(distribution_stage(ctx, m, l, pd, prefix + "5-distribution"));
  report.stages.push_back(parity_stage(ctx, m, l, prefix + "5-parity"));
  for (Certificate& c : tame_stages(ctx, m, l, prefix + "5-")) report.stages.push_back(std::move(c));
  return report;
}

Certificate verify_choice_independence(const RelationContext& ctx, const QuadIdeal& m, Fault fault) {
  const TorsionSystem& sys = ctx.system;
  const Lattice& L = ctx.lattice;
  const int d = m.field();
  const QuadIdeal mf = m * sys.f();
  const int M = static_cast<int>(mf.norm());
  const TorsionPoint y = sys.make_y(m);
  Certificate c = make_certificate(ctx, "choice/" + to_string(m),
                                   "alpha'_m is independent of the choice of g_a, s_m and t_gamma", m, std::nullopt);

  const AlphaPieces base_pieces = alpha_pieces(y, M, ctx.a);
  const SymbolSum base = assemble_alpha_prime(base_pieces, mf, M);
  const std::vector<TorsionPoint> support = base.support();
  std::vector<BigComplex> base_tame;
  for (const TorsionPoint& p : support) base_tame.push_back(tame_symbol_at(base, p, L));

  std::vector<std::pair<std::string, AlphaPieces>> variants;
  {
    AlphaPieces v = base_pieces;
    v.s = v.s.times(Constant::exact(QuadRat(Rational(7), Rational(0), d)));
    if (fault == Fault::nonconstant_choice) {
      // s_m * h as one sigma product; h shares only the origin with s_m.
      const EllFunction h = nonconstant_factor(d);
      std::vector<Representative> reps = v.s.representatives();
      for (const Representative& r : h.representatives()) reps.push_back(r);
      v.s = EllFunction::from_representatives(reps, d, "s_m*h").times(v.s.scale());
    }
    variants.emplace_back("s_m scaled by 7", std::move(v));
  }
  {
    AlphaPieces v = base_pieces;
    v.g = v.g.times(Constant::exact(QuadRat(Rational(3), Rational(0), d)));
    for (auto& [gamma, t] : v.t) t = t.times(Constant::exact(QuadRat(Rational(1), Rational(2), d)));
    variants.emplace_back("g_a scaled by 3, t_gamma scaled by 1+2w", std::move(v));
  }
  {
    // g_a^2 against 1 / prod_{gamma != 0} (wp - wp(gamma)); the square root of
    // the constant rescales g_a to the x-coordinate normalization.
    std::vector<BigComplex> wp_gamma;
    for (const auto& [gamma, t] : base_pieces.t) wp_gamma.push_back(L.wp(embed(L, gamma)).first);
    const Evaluator xprod = [&L, wp_gamma](const BigComplex& z) {
      const BigComplex w = L.wp(z).first;
      BigComplex prod(Real(1));
      for (const BigComplex& v : wp_gamma) prod *= w - v;
      return BigComplex(Real(1)) / prod;
    };
    const Evaluator g2 = product_evaluator({{evaluator(base_pieces.g, L), 2}});
    const ConstancyResult r = scan(ctx, xprod, g2);
    c.residual("x-coordinate route: ratio spread", r.max_deviation);
    c.diagnostics["constants"]["x-coordinate route: kappa"] = decimal(r.value, 20);
    const BigComplex root = exp(log(r.value) / Real(2));
    AlphaPieces v = base_pieces;
    v.g = v.g.times(Constant::numeric([root](const Lattice&) { return root; }, "sqrt(kappa)"));
    variants.emplace_back("g_a from the x-coordinate product", std::move(v));
    for (const SamplePoint& p : r.points) c.samples.push_back(p.to_string());
  }

  for (const auto& [name, pieces] : variants) {
    SymbolSum variant(mf, M);
    try {
      variant = assemble_alpha_prime(pieces, mf, M);
    } catch (const std::exception& e) {
      c.check(name + ": rebuilt", false);
      c.diagnostics["errors"][name] = e.what();
      continue;
    }
    c.check(name + ": difference has only constant-entry terms", normal_form(variant - base).functions.empty());
    for (std::size_t i = 0; i < support.size(); ++i) {
      const BigComplex v = tame_symbol_at(variant, support[i], L);
      c.residual(name + ": tame ratio - 1 at " + to_string(support[i]),
                 abs(v / base_tame[i] - BigComplex(Real(1))));
    }
    for (const TorsionPoint& p : variant.support())
      if (!std::binary_search(support.begin(), support.end(), p))
        c.residual(name + ": tame modulus - 1 at " + to_string(p),
                   abs(abs(tame_symbol_at(variant, p, L)) - Real(1)));
  }
  return c;
}

Certificate fault_control(std::string id, std::string identity, bool faulted_passed) {
  Certificate c;
  c.id = std::move(id);
  c.identity = std::move(identity);
  c.precision_bits = working_bits();
  c.check("fault detected", !faulted_passed);
  return c;
}

}  // namespace cmk2
