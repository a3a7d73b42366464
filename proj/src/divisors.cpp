#include "cmk2/divisors.hpp"

#include <numeric>
#include <stdexcept>

namespace cmk2 {

namespace {

std::int64_t floor_div(std::int64_t n, std::int64_t d) {
  std::int64_t q = n / d;
  if ((n % d != 0) && ((n < 0) != (d < 0))) --q;
  return q;
}

Rational mod_one(const Rational& q) {
  return q - Rational(floor_div(q.numerator(), q.denominator()));
}

std::int64_t floor_rat(const Rational& q) { return floor_div(q.numerator(), q.denominator()); }

BigComplex embed_rat(const Lattice& L, const QuadRat& w) { return L.embed(w.x, w.y); }

// exp(-1/2 sum n eta(w) w)
BigComplex klein_constant(const Lattice& L, const std::vector<Representative>& reps) {
  BigComplex acc(Real(0));
  for (const auto& [w, n] : reps) {
    const BigComplex e = L.eta(from_rational<Real>(w.x), from_rational<Real>(w.y));
    acc += e * embed_rat(L, w) * Real(n);
  }
  return exp(acc * Real(-0.5));
}

std::vector<Representative> canonical_representatives(const Divisor& D) {
  std::vector<Representative> reps;
  for (const auto& [p, n] : D.terms()) reps.push_back({p.value(), n});
  const QuadRat S = D.weighted_sum();
  if (S.is_zero() || reps.empty()) return reps;
  Representative& first = reps.front();
  const int sign = first.n > 0 ? 1 : -1;
  const QuadRat shifted = sign > 0 ? first.w - S : first.w + S;
  first.n -= sign;
  if (first.n == 0) reps.erase(reps.begin());
  reps.insert(reps.begin(), Representative{shifted, sign});
  return reps;
}

void require_same_field(int a, int b) {
  if (a != b) throw ArithmeticError("torsion points from different fields");
}

}  // namespace

// ---------------------------------------------------------------- Divisor

Divisor Divisor::point(const TorsionPoint& p, int n) {
  Divisor D(p.field());
  D.add(p, n);
  return D;
}

void Divisor::add(const TorsionPoint& p, int n) {
  require_same_field(p.field(), d_);
  if (n == 0) return;
  auto [it, inserted] = mult_.emplace(p, n);
  if (!inserted) {
    it->second += n;
    if (it->second == 0) mult_.erase(it);
  }
}

int Divisor::order_at(const TorsionPoint& p) const {
  const auto it = mult_.find(p);
  return it == mult_.end() ? 0 : it->second;
}

std::vector<TorsionPoint> Divisor::support() const {
  std::vector<TorsionPoint> out;
  for (const auto& [p, n] : mult_) out.push_back(p);
  return out;
}

int Divisor::degree() const {
  int s = 0;
  for (const auto& [p, n] : mult_) s += n;
  return s;
}

QuadRat Divisor::weighted_sum() const {
  QuadRat s(Rational(0), Rational(0), d_);
  for (const auto& [p, n] : mult_) s = s + Rational(n) * p.value();
  return s;
}

bool Divisor::is_principal() const { return degree() == 0 && is_integral(weighted_sum()); }

int Divisor::content() const {
  int g = 0;
  for (const auto& [p, n] : mult_) g = std::gcd(g, n);
  return g;
}

Divisor Divisor::scaled(int k) const {
  Divisor out(d_);
  if (k == 0) return out;
  for (const auto& [p, n] : mult_) out.mult_.emplace(p, n * k);
  return out;
}

Divisor Divisor::negated() const {
  Divisor out(d_);
  for (const auto& [p, n] : mult_) out.add(-p, n);
  return out;
}

Divisor Divisor::mapped(const QuadInt& beta) const {
  Divisor out(d_);
  for (const auto& [p, n] : mult_) out.add(beta * p, n);
  return out;
}

Divisor Divisor::pullback(const QuadInt& alpha) const {
  Divisor out(d_);
  for (const auto& [p, n] : mult_)
    for (const TorsionPoint& u : preimage_set(p, alpha)) out.add(u, n);
  return out;
}

Divisor Divisor::pushforward(const QuadInt& alpha) const { return mapped(alpha); }

Divisor operator+(const Divisor& a, const Divisor& b) {
  require_same_field(a.d_, b.d_);
  Divisor out = a;
  for (const auto& [p, n] : b.mult_) out.add(p, n);
  return out;
}

std::string to_string(const Divisor& D) {
  if (D.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [p, n] : D.terms()) {
    const int a = n < 0 ? -n : n;
    if (first) {
      if (n < 0) out += "-";
    } else {
      out += n < 0 ? " - " : " + ";
    }
    if (a != 1) out += std::to_string(a);
    out += "(" + to_string(p) + ")";
    first = false;
  }
  return out;
}

// ---------------------------------------------------------------- Constant

Constant Constant::exact(const QuadRat& v) {
  if (v.is_zero()) throw ArithmeticError("zero is not a constant entry");
  Constant c;
  Atom a{Atom::Kind::exact, v, Rational(0), nullptr, TorsionPoint::zero(v.d), nullptr, to_string(v), 1};
  c.atoms_.push_back(std::move(a));
  return c;
}

Constant Constant::root_of_unity(const Rational& turns) {
  Constant c;
  const Rational t = mod_one(turns);
  if (t == Rational(0)) return c;
  Atom a{Atom::Kind::root_of_unity, QuadRat{}, t, nullptr, TorsionPoint{}, nullptr, {}, 1};
  a.label = "exp(2*pi*i*" + std::to_string(t.numerator()) + "/" + std::to_string(t.denominator()) + ")";
  c.atoms_.push_back(std::move(a));
  return c;
}

Constant Constant::evaluation(const EllFunction& f, const TorsionPoint& at, int exponent) {
  Constant c;
  if (exponent == 0) return c;
  Atom a{Atom::Kind::evaluation, QuadRat{}, Rational(0), std::make_shared<const EllFunction>(f), at, nullptr,
         (f.label().empty() ? std::string("f") : f.label()) + "(" + to_string(at) + ")", exponent};
  c.atoms_.push_back(std::move(a));
  return c;
}

Constant Constant::numeric(std::function<BigComplex(const Lattice&)> fn, std::string label) {
  Constant c;
  Atom a{Atom::Kind::numeric, QuadRat{}, Rational(0), nullptr, TorsionPoint{},
         std::make_shared<const std::function<BigComplex(const Lattice&)>>(std::move(fn)), std::move(label), 1};
  c.atoms_.push_back(std::move(a));
  return c;
}

BigComplex Constant::value(const Lattice& L) const {
  BigComplex acc(Real(1));
  for (const Atom& a : atoms_) {
    BigComplex v;
    switch (a.kind) {
      case Atom::Kind::exact: v = embed_rat(L, a.exact); break;
      case Atom::Kind::root_of_unity: {
        const Real t = Real(2) * L.pi() * from_rational<Real>(a.turns);
        v = BigComplex(cos(t), sin(t));
        break;
      }
      case Atom::Kind::evaluation: v = a.function->evaluate(L, a.at); break;
      case Atom::Kind::numeric: v = (*a.numeric)(L); break;
    }
    acc *= cmk2::pow(v, static_cast<long long>(a.exponent));
  }
  return acc;
}

Constant Constant::pow(int k) const {
  Constant c;
  if (k == 0) return c;
  c.atoms_ = atoms_;
  for (Atom& a : c.atoms_) {
    if (a.kind == Atom::Kind::root_of_unity) {
      a.turns = mod_one(a.turns * Rational(k));
      a.label = "exp(2*pi*i*" + std::to_string(a.turns.numerator()) + "/" + std::to_string(a.turns.denominator()) + ")";
    } else {
      a.exponent *= k;
    }
  }
  std::erase_if(c.atoms_, [](const Atom& a) { return a.kind == Atom::Kind::root_of_unity && a.turns == Rational(0); });
  return c;
}

Constant Constant::inverse() const { return pow(-1); }

Constant Constant::galois(const QuadInt& beta) const {
  Constant c = *this;
  for (Atom& a : c.atoms_) {
    if (a.kind != Atom::Kind::evaluation) continue;
    a.function = std::make_shared<const EllFunction>(a.function->galois(beta));
    a.at = beta * a.at;
    a.label = (a.function->label().empty() ? std::string("f") : a.function->label()) + "(" + to_string(a.at) + ")";
  }
  return c;
}

Constant operator*(const Constant& a, const Constant& b) {
  Constant c;
  Rational turns(0);
  for (const auto* side : {&a, &b})
    for (const auto& atom : side->atoms_) {
      if (atom.kind == Constant::Atom::Kind::root_of_unity)
        turns += atom.turns;
      else
        c.atoms_.push_back(atom);
    }
  const Constant root = Constant::root_of_unity(turns);
  c.atoms_.insert(c.atoms_.end(), root.atoms_.begin(), root.atoms_.end());
  return c;
}

std::string to_string(const Constant& c) {
  if (c.is_one()) return "1";
  std::string out;
  for (const auto& a : c.atoms()) {
    if (!out.empty()) out += " * ";
    out += a.kind == Constant::Atom::Kind::exact ? "(" + a.label + ")" : a.label;
    if (a.exponent != 1) out += "^" + std::to_string(a.exponent);
  }
  return out;
}

// ---------------------------------------------------------------- EllFunction

EllFunction EllFunction::from_divisor(const Divisor& D, std::string label) {
  if (!D.is_principal()) throw ArithmeticError("divisor " + to_string(D) + " is not principal");
  return EllFunction(Constant{}, canonical_representatives(D), D, std::move(label));
}

EllFunction EllFunction::from_representatives(std::vector<Representative> reps, int d, std::string label) {
  std::erase_if(reps, [](const Representative& r) { return r.n == 0; });
  Divisor D(d);
  QuadRat sum(Rational(0), Rational(0), d);
  int degree = 0;
  for (const auto& [w, n] : reps) {
    if (w.d != d) throw ArithmeticError("lift from a different field");
    D.add(TorsionPoint(w), n);
    sum = sum + Rational(n) * w;
    degree += n;
  }
  if (degree != 0 || !sum.is_zero()) throw ArithmeticError("lifts are not balanced");
  return EllFunction(Constant{}, std::move(reps), std::move(D), std::move(label));
}

EllFunction EllFunction::times(const Constant& c) const {
  EllFunction out = *this;
  out.scale_ = scale_ * c;
  return out;
}

EllFunction EllFunction::relabeled(std::string label) const {
  EllFunction out = *this;
  out.label_ = std::move(label);
  return out;
}

EllFunction EllFunction::pullback(const QuadInt& alpha) const {
  if (alpha.is_zero()) throw ArithmeticError("pullback along zero");
  const QuadRat inv = inverse(to_rat(alpha));
  const auto residues = QuadIdeal(alpha).residues();
  std::vector<Representative> reps;
  for (const auto& [w, n] : reps_)
    for (const QuadInt& r : residues) reps.push_back({(w + to_rat(r)) * inv, n});
  return EllFunction(scale_, std::move(reps), divisor_.pullback(alpha), label_.empty() ? label_ : "[" + to_string(alpha) + "]^*" + label_);
}

EllFunction EllFunction::negated_argument() const {
  std::vector<Representative> reps;
  for (const auto& [w, n] : reps_) reps.push_back({-w, n});
  return EllFunction(scale_, std::move(reps), divisor_.negated(), label_.empty() ? label_ : "[-1]^*" + label_);
}

EllFunction EllFunction::galois(const QuadInt& beta) const {
  const QuadRat b = to_rat(beta);
  std::vector<Representative> reps;
  for (const auto& [w, n] : reps_) reps.push_back({b * w, n});
  return EllFunction(scale_.galois(beta), std::move(reps), divisor_.mapped(beta), label_);
}

BigComplex EllFunction::evaluate(const Lattice& L, const BigComplex& z) const {
  BigComplex acc = scale_.value(L) * klein_constant(L, reps_);
  for (const auto& [w, n] : reps_) {
    const BigComplex u = z - embed_rat(L, w);
    const auto red = L.reduce(u);
    if (abs(red.z0) < L.pole_tolerance()) throw PoleError("evaluation within the pole tolerance of the support");
    acc *= pow(L.sigma(u), n);
  }
  return acc;
}

BigComplex EllFunction::evaluate(const Lattice& L, const TorsionPoint& p) const {
  const Leading lead = leading(L, p);
  if (lead.order != 0) throw PoleError("evaluation at a support point " + to_string(p));
  return lead.coefficient;
}

EllFunction::Leading EllFunction::leading(const Lattice& L, const TorsionPoint& p) const {
  require_same_field(p.field(), field());
  const QuadRat pc = p.value();
  int order = 0;
  BigComplex acc = scale_.value(L) * klein_constant(L, reps_);
  for (const auto& [w, n] : reps_) {
    const QuadRat diff = pc - w;
    BigComplex factor;
    if (is_integral(diff)) {
      const long long m = diff.x.numerator(), k = diff.y.numerator();
      const BigComplex mu = L.embed(Real(m), Real(k));
      factor = L.eta(Real(m), Real(k)) * mu * Real(0.5);
      factor = exp(factor);
      if (((m + k + m * k) % 2 + 2) % 2 == 1) factor = -factor;
      order += n;
    } else {
      factor = L.sigma(embed_rat(L, diff));
    }
    acc *= pow(factor, n);
  }
  return {order, acc};
}

Rational lift_phase(const std::vector<Representative>& reps) {
  Rational phase(0);
  for (const auto& [w, n] : reps) {
    const std::int64_t m = floor_rat(w.x), k = floor_rat(w.y);
    const Rational cx = w.x - Rational(m), cy = w.y - Rational(k);
    const std::int64_t parity = ((m + k + m * k) % 2 + 2) % 2;
    const Rational det = Rational(m) * cy - Rational(k) * cx;
    phase += Rational(n) * (Rational(parity, 2) + det / Rational(2));
  }
  return mod_one(phase);
}

std::pair<Divisor, int> primitive_part(const Divisor& D) {
  const int g = D.content();
  if (g == 0) return {D, 0};
  for (int k = g; k >= 1; --k) {
    if (g % k != 0) continue;
    Divisor q(D.field());
    for (const auto& [p, n] : D.terms()) q.add(p, n / k);
    if (!q.is_principal()) continue;
    if (q.terms().begin()->second < 0) return {q.scaled(-1), -k};
    return {q, k};
  }
  throw ArithmeticError("divisor " + to_string(D) + " is not principal");
}

EllFunction::Decomposition EllFunction::decompose() const {
  auto [primitive, power] = primitive_part(divisor_);
  std::vector<Representative> target;
  if (power != 0)
    for (Representative r : canonical_representatives(primitive)) {
      r.n *= power;
      target.push_back(r);
    }
  const Rational turns = lift_phase(reps_) - lift_phase(target);
  return {scale_ * Constant::root_of_unity(turns), std::move(primitive), power};
}

// ---------------------------------------------------------------- named functions

Divisor divisor_g_a(int a, int d) {
  if (a < 2) throw ArithmeticError("g_a needs a >= 2");
  Divisor D(d);
  D.add(TorsionPoint::zero(d), a * a);
  for (const TorsionPoint& g : torsion_subgroup(QuadIdeal(QuadInt(a, 0, d)))) D.add(g, -1);
  return D;
}

Divisor divisor_point_pair(const TorsionPoint& p, int multiplicity) {
  if (p.is_zero()) throw ArithmeticError("point pair at the origin");
  Divisor D(p.field());
  D.add(p, multiplicity);
  D.add(TorsionPoint::zero(p.field()), -multiplicity);
  return D;
}

Divisor divisor_t(const TorsionPoint& gamma, int a) {
  const int d = gamma.field();
  if (gamma.is_zero() || !gamma.killed_by(QuadIdeal(QuadInt(a, 0, d))))
    throw ArithmeticError("t_gamma needs a nonzero point of E[a]");
  return divisor_point_pair(gamma, a);
}

Divisor divisor_g_l(const QuadIdeal& l) {
  const int d = l.field();
  Divisor D(d);
  for (const TorsionPoint& c : torsion_subgroup(l)) D.add(c, 1);
  D.add(TorsionPoint::zero(d), -static_cast<int>(l.norm()));
  return D;
}

EllFunction build_named(const NamedRequest& q) {
  switch (q.kind) {
    case NamedKind::g_a:
      return EllFunction::from_divisor(divisor_g_a(q.a, q.d), "g_" + std::to_string(q.a));
    case NamedKind::s_m:
      return EllFunction::from_divisor(divisor_point_pair(q.point, q.multiplicity), "s[" + to_string(q.point) + "]");
    case NamedKind::s_n:
      return EllFunction::from_divisor(divisor_point_pair(q.point, q.multiplicity), "s[" + to_string(q.point) + "]");
    case NamedKind::t_gamma:
      return EllFunction::from_divisor(divisor_t(q.point, q.a), "t[" + to_string(q.point) + "]");
    case NamedKind::g_l:
      return EllFunction::from_divisor(divisor_g_l(q.l), "g_" + to_string(q.l));
  }
  throw std::logic_error("unknown named function");
}

// ---------------------------------------------------------------- evaluators

Evaluator evaluator(const EllFunction& f, const Lattice& L) {
  return [f, Lp = &L](const BigComplex& z) { return f.evaluate(*Lp, z); };
}

Evaluator pullback_evaluator(const EllFunction& f, const QuadInt& alpha, const Lattice& L) {
  return [f, Lp = &L, a = L.embed(alpha)](const BigComplex& z) { return f.evaluate(*Lp, a * z); };
}

Evaluator pushforward_evaluator(const EllFunction& f, const QuadInt& alpha, const Lattice& L) {
  if (alpha.is_zero()) throw ArithmeticError("pushforward along zero");
  std::vector<BigComplex> shifts;
  for (const QuadInt& r : QuadIdeal(alpha).residues()) shifts.push_back(L.embed(r));
  const BigComplex a = L.embed(alpha);
  return [f, Lp = &L, shifts, a](const BigComplex& z) {
    BigComplex acc(Real(1));
    for (const BigComplex& r : shifts) acc *= f.evaluate(*Lp, (z + r) / a);
    return acc;
  };
}

Evaluator product_evaluator(std::vector<std::pair<Evaluator, int>> factors) {
  return [factors = std::move(factors)](const BigComplex& z) {
    BigComplex acc(Real(1));
    for (const auto& [g, k] : factors) acc *= pow(g(z), k);
    return acc;
  };
}

// ---------------------------------------------------------------- sampling

BigComplex SamplePoint::embed(const Lattice& L) const {
  return L.embed(ldexp(Real(r), -53), ldexp(Real(s), -53));
}

std::string SamplePoint::to_string() const {
  auto dec = [](std::uint64_t v) { return decimal(ldexp(Real(v), -53), 17); };
  return dec(r) + " + " + dec(s) + "*w";
}

SamplePoint SampleStream::next() {
  const std::uint64_t r = rng_() >> 11;
  const std::uint64_t s = rng_() >> 11;
  return {r, s};
}

ConstancyResult equal_up_to_constant(const Evaluator& f, const Evaluator& g, const Lattice& L, int samples,
                                     std::uint64_t seed, const Real& tolerance) {
  if (samples < 2) throw std::invalid_argument("constancy needs at least two samples");
  SampleStream stream(seed);
  ConstancyResult out;
  std::vector<BigComplex> ratios;
  for (int attempt = 0; attempt < 20 * samples && static_cast<int>(ratios.size()) < samples; ++attempt) {
    const SamplePoint sp = stream.next();
    const BigComplex z = sp.embed(L);
    BigComplex num, den;
    try {
      num = f(z);
      den = g(z);
    } catch (const PoleError&) {
      continue;
    }
    if (abs(den) == Real(0)) continue;
    ratios.push_back(num / den);
    out.points.push_back(sp);
  }
  if (static_cast<int>(ratios.size()) < samples) throw std::runtime_error("too few sample points away from the poles");
  out.value = ratios.front();
  out.max_deviation = Real(0);
  for (const BigComplex& r : ratios) {
    const Real dev = abs(r / out.value - BigComplex(Real(1)));
    if (dev > out.max_deviation) out.max_deviation = dev;
  }
  out.modulus_error = abs(abs(out.value) - Real(1));
  out.constant = out.max_deviation < tolerance;
  out.unit_modulus = out.modulus_error < tolerance;
  return out;
}

}  // namespace cmk2
