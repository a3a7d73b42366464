#include "cmk2/symbols.hpp"

#include <numeric>
#include <set>

namespace cmk2 {

namespace {

QuadIdeal ideal_lcm(const QuadIdeal& a, const QuadIdeal& b) { return ideal_div(a * b, ideal_sum(a, b)); }

QuadIdeal rational_ideal(std::int64_t n, int d) { return QuadIdeal(QuadInt(n, 0, d)); }

EllFunction canonical(const Divisor& D) { return EllFunction::from_divisor(D); }

}  // namespace

// ---------------------------------------------------------------- entries and sums

Entry Entry::function(EllFunction f) {
  Entry e;
  e.f_ = std::move(f);
  return e;
}

Entry Entry::constant(Constant c) {
  Entry e;
  e.c_ = std::move(c);
  return e;
}

EllFunction::Leading Entry::leading(const Lattice& L, const TorsionPoint& p) const {
  if (f_) return f_->leading(L, p);
  return {0, c_.value(L)};
}

std::string Entry::describe() const {
  if (!f_) return to_string(c_);
  const std::string name = f_->label().empty() ? "F" : f_->label();
  return f_->scale().is_one() ? name : to_string(f_->scale()) + " * " + name;
}

void SymbolSum::add(long long coefficient, Entry left, Entry right) {
  if (coefficient == 0) return;
  terms_.push_back({coefficient, std::move(left), std::move(right)});
}

std::vector<TorsionPoint> SymbolSum::support() const {
  std::set<TorsionPoint> pts;
  for (const Term& t : terms_)
    for (const Entry* e : {&t.left, &t.right})
      if (!e->is_constant())
        for (const auto& [p, n] : e->function().divisor().terms()) pts.insert(p);
  return {pts.begin(), pts.end()};
}

SymbolSum SymbolSum::scaled(long long k) const {
  SymbolSum out(level_, scale_);
  for (const Term& t : terms_) out.add(t.coefficient * k, t.left, t.right);
  return out;
}

SymbolSum operator+(const SymbolSum& a, const SymbolSum& b) {
  SymbolSum out(ideal_lcm(a.level_, b.level_), a.scale_ == b.scale_ ? a.scale_ : 1);
  out.terms_ = a.terms_;
  out.terms_.insert(out.terms_.end(), b.terms_.begin(), b.terms_.end());
  return out;
}

// ---------------------------------------------------------------- normal form

NormalForm normal_form(const SymbolSum& s) {
  NormalForm nf;
  const int d = s.field();
  const Constant minus_one = Constant::exact(QuadRat(Rational(-1), Rational(0), d));
  auto add_constant = [&](const Divisor& D, const Constant& c, long long e) {
    if (e == 0 || c.is_one()) return;
    auto it = nf.constants.try_emplace(D).first;
    it->second = it->second * c.pow(static_cast<int>(e));
  };
  for (const Term& t : s.terms()) {
    struct Part {
      Constant c;
      std::optional<Divisor> D;
      long long k{0};
    };
    auto split = [](const Entry& e) {
      Part p;
      if (e.is_constant()) {
        p.c = e.constant();
        return p;
      }
      auto dec = e.function().decompose();
      p.c = std::move(dec.constant);
      if (dec.power != 0) {
        p.D = std::move(dec.primitive);
        p.k = dec.power;
      }
      return p;
    };
    const Part L = split(t.left), R = split(t.right);
    const long long c = t.coefficient;
    if (R.D) add_constant(*R.D, L.c, c * R.k);
    if (L.D) add_constant(*L.D, R.c, -c * L.k);
    if (L.D && R.D) {
      const long long k = c * L.k * R.k;
      if (*L.D == *R.D) {
        add_constant(*L.D, minus_one, -k);
      } else if (*L.D < *R.D) {
        nf.functions[{*L.D, *R.D}] += k;
      } else {
        nf.functions[{*R.D, *L.D}] -= k;
      }
    }
  }
  std::erase_if(nf.functions, [](const auto& kv) { return kv.second == 0; });
  std::erase_if(nf.constants, [](const auto& kv) { return kv.second.is_one(); });
  return nf;
}

SymbolSum NormalForm::as_sum(const QuadIdeal& level, long long scale) const {
  SymbolSum out(level, scale);
  for (const auto& [key, k] : functions)
    out.add(k, Entry::function(canonical(key.first)), Entry::function(canonical(key.second)));
  for (const auto& [D, c] : constants) out.add(1, Entry::constant(c), Entry::function(canonical(D)));
  return out;
}

// ---------------------------------------------------------------- tame symbols

BigComplex tame_local(int m, const BigComplex& lead_f, int n, const BigComplex& lead_g) {
  BigComplex v = pow(lead_f, static_cast<long long>(n)) / pow(lead_g, static_cast<long long>(m));
  if ((static_cast<long long>(m) * n) % 2 != 0) v = -v;
  return v;
}

BigComplex tame_symbol_at(const SymbolSum& s, const TorsionPoint& p, const Lattice& L) {
  BigComplex acc(Real(1));
  for (const Term& t : s.terms()) {
    const int m = t.left.order_at(p), n = t.right.order_at(p);
    if (m == 0 && n == 0) continue;
    const BigComplex one(Real(1));
    const BigComplex lf = n != 0 ? t.left.leading(L, p).coefficient : one;
    const BigComplex lg = m != 0 ? t.right.leading(L, p).coefficient : one;
    acc *= pow(tame_local(m, lf, n, lg), t.coefficient);
  }
  return acc;
}

int default_order_bound(const QuadIdeal& level, int a) {
  std::int64_t w = 24;
  const QuadIdeal all = level * rational_ideal(a, level.field());
  if (!all.is_unit())
    for (const auto& [P, e] : factor(all)) w = std::lcm(w, P.norm() - 1);
  return static_cast<int>(w);
}

std::optional<int> root_of_unity_order(const BigComplex& v, int bound, const Real& tolerance, const Real& pi) {
  const Real t = arg(v) / (Real(2) * pi);
  for (int k = 1; k <= bound; ++k) {
    const Real x = t * Real(k);
    if (abs(x - round(x)) < tolerance) return k;
  }
  return std::nullopt;
}

Certificate certify_tame_kernel(const SymbolSum& s, const Lattice& L, const TameOptions& options, std::string id,
                                std::string identity) {
  Certificate cert;
  cert.id = std::move(id);
  cert.identity = std::move(identity);
  cert.seed = options.seed;
  cert.precision_bits = working_bits();
  cert.tolerance = options.tolerance;
  cert.parameters["level"] = to_string(s.level());
  cert.parameters["scale"] = s.scale();
  cert.parameters["terms"] = s.size();
  cert.parameters["order_bound"] = options.order_bound;
  ordered_json points = ordered_json::array();
  for (const TorsionPoint& p : s.support()) {
    const BigComplex v = tame_symbol_at(s, p, L);
    cert.residual("tame modulus at " + to_string(p), abs(abs(v) - Real(1)));
    ordered_json entry;
    entry["point"] = to_string(p);
    entry["value"] = decimal(v, 20);
    const auto order = root_of_unity_order(v, options.order_bound, options.tolerance, L.pi());
    entry["root_of_unity_order"] = order ? ordered_json(*order) : ordered_json(nullptr);
    points.push_back(entry);
  }
  cert.diagnostics["tame_values"] = points;
  return cert;
}

// ---------------------------------------------------------------- actions

SymbolSum symbol_galois(const SymbolSum& s, const SymbolAction& action) {
  SymbolSum out(s.level(), s.scale());
  if (action.kind == SymbolAction::Kind::negate) {
    for (const Term& t : s.terms()) {
      auto neg = [](const Entry& e) {
        return e.is_constant() ? e : Entry::function(e.function().negated_argument());
      };
      out.add(t.coefficient, neg(t.left), neg(t.right));
    }
    return out;
  }
  const QuadInt& beta = action.beta;
  if (beta.is_zero() || !coprime(QuadIdeal(beta), s.level()))
    throw ArithmeticError("scaling by " + to_string(beta) + " is not invertible at level " + to_string(s.level()));
  for (const Term& t : s.terms()) {
    auto conj = [&](const Entry& e) {
      return e.is_constant() ? Entry::constant(e.constant().galois(beta)) : Entry::function(e.function().galois(beta));
    };
    out.add(t.coefficient, conj(t.left), conj(t.right));
  }
  return out;
}

SymbolSum orbit_norm(const SymbolSum& s, const QuadIdeal& l, OrbitKind kind, const QuadIdeal& extra) {
  const QuadIdeal modulus = s.level() * extra;
  SymbolSum out(s.level(), s.scale());
  for (const QuadInt& beta : galois_scalars(modulus, l, kind)) out = out + symbol_galois(s, SymbolAction::scaling(beta));
  return out;
}

// ---------------------------------------------------------------- builders

AlphaPieces alpha_pieces(const TorsionPoint& y, int multiplicity, int a) {
  const int d = y.field();
  if (y.killed_by(rational_ideal(a, d)))
    throw ArithmeticError("degenerate collision: " + to_string(y) + " lies in E[" + std::to_string(a) +
                          "], so g_a(y) is undefined");
  AlphaPieces out{y, a, build_named(NamedRequest::g_a(a, d)), build_named(NamedRequest::s(y, multiplicity)), {}};
  for (const TorsionPoint& gamma : torsion_subgroup(rational_ideal(a, d)))
    if (!gamma.is_zero()) out.t.emplace(gamma, build_named(NamedRequest::t(gamma, a)));
  return out;
}

SymbolSum assemble_alpha_prime(const AlphaPieces& pieces, const QuadIdeal& level, long long scale) {
  const EllFunction G = pieces.g.times(Constant::evaluation(pieces.g, pieces.y, -1));
  SymbolSum out(level, scale);
  out.add(pieces.a, Entry::function(G), Entry::function(pieces.s));
  for (const auto& [gamma, t] : pieces.t)
    out.add(-1, Entry::constant(Constant::evaluation(pieces.s, gamma)), Entry::function(t));
  return out;
}

SymbolSum build_alpha_prime_at(const TorsionPoint& y, int multiplicity, int a, const QuadIdeal& level) {
  return assemble_alpha_prime(alpha_pieces(y, multiplicity, a), level, multiplicity);
}

SymbolSum build_alpha_prime(const TorsionSystem& sys, const QuadIdeal& m, int a) {
  if (std::gcd(static_cast<std::int64_t>(a), m.norm()) != 1)
    throw ArithmeticError("a = " + std::to_string(a) + " is not prime to N" + to_string(m));
  const QuadIdeal level = m * sys.f();
  const std::int64_t M = level.norm();
  return build_alpha_prime_at(sys.make_y(m), static_cast<int>(M), a, level);
}

AlphaElement AlphaElement::norm_down(const QuadIdeal& to) const {
  if (!to.divides(norm_to)) throw ArithmeticError(to_string(to) + " does not divide " + to_string(norm_to));
  AlphaElement out = *this;
  out.norm_to = to;
  return out;
}

bool AlphaElement::same_annotation(const AlphaElement& o) const {
  return inner_ideal == o.inner_ideal && pushforward == o.pushforward && norm_from == o.norm_from &&
         norm_to == o.norm_to;
}

std::string AlphaElement::describe() const {
  return "[" + to_string(pushforward) + "]_* N_{H" + to_string(norm_from) + "/H" + to_string(norm_to) + "} alpha'" +
         to_string(inner_ideal);
}

AlphaElement build_alpha(const TorsionSystem& sys, const QuadIdeal& m, int a, const QuadIdeal& p) {
  const QuadIdeal inner = p.divides(m) ? m : m * p;
  const QuadIdeal arep = rational_ideal(a, m.field());
  return {m, inner, build_alpha_prime(sys, inner, a), sys.character().evaluate(inner), inner * arep * sys.f(), m};
}

SymbolSum build_A(const QuadIdeal& l, int a) {
  const int d = l.field();
  const QuadIdeal arep = rational_ideal(a, d);
  if (!coprime(l, arep)) throw ArithmeticError(to_string(l) + " is not prime to a");
  const EllFunction g = build_named(NamedRequest::g_a(a, d));
  const EllFunction gl = build_named(NamedRequest::g_l(l));
  SymbolSum out(l * arep);
  out.add(a, Entry::function(g), Entry::function(gl));
  for (const TorsionPoint& gamma : torsion_subgroup(arep)) {
    if (gamma.is_zero()) continue;
    out.add(-1, Entry::constant(Constant::evaluation(gl, gamma)),
            Entry::function(build_named(NamedRequest::t(gamma, a))));
  }
  return out;
}

SymbolSum build_B(const QuadIdeal& l, int a, int multiplicity) {
  const int d = l.field();
  const QuadIdeal arep = rational_ideal(a, d);
  if (!coprime(l, arep)) throw ArithmeticError(to_string(l) + " is not prime to a");
  const EllFunction g = build_named(NamedRequest::g_a(a, d));
  SymbolSum out(l * arep);
  for (const TorsionPoint& c : torsion_subgroup(l)) {
    if (c.is_zero()) continue;
    const EllFunction u = EllFunction::from_divisor(divisor_point_pair(c, multiplicity), "u[" + to_string(c) + "]");
    out.add(a, Entry::constant(Constant::evaluation(g, c)), Entry::function(u));
  }
  return out;
}

}  // namespace cmk2
