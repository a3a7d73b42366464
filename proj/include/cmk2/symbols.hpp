#pragma once

// Formal sums of Steinberg symbols {f, g} whose entries are elliptic
// functions or constants, tame symbols at torsion points, and the elements
// alpha'_m, A and B built from the named functions.

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cmk2/certificate.hpp"
#include "cmk2/divisors.hpp"
#include "cmk2/torsion.hpp"

namespace cmk2 {

class Entry {
 public:
  static Entry function(EllFunction f);
  static Entry constant(Constant c);

  bool is_constant() const { return !f_.has_value(); }
  const EllFunction& function() const { return *f_; }
  const Constant& constant() const { return c_; }

  int order_at(const TorsionPoint& p) const { return f_ ? f_->divisor().order_at(p) : 0; }
  EllFunction::Leading leading(const Lattice& L, const TorsionPoint& p) const;
  std::string describe() const;

 private:
  std::optional<EllFunction> f_;
  Constant c_;
};

struct Term {
  long long coefficient;
  Entry left;
  Entry right;
};

/// Galois scaling by a residue, or the inversion [-1].
struct SymbolAction {
  enum class Kind { scale, negate } kind{Kind::scale};
  QuadInt beta;

  static SymbolAction scaling(const QuadInt& b) { return {Kind::scale, b}; }
  static SymbolAction inversion() { return {Kind::negate, QuadInt{}}; }
};

class SymbolSum {
 public:
  /// `level`: torsion level of the entries; `scale`: the cleared denominator.
  SymbolSum(QuadIdeal level, long long scale = 1) : level_(std::move(level)), scale_(scale) {}

  void add(long long coefficient, Entry left, Entry right);
  const std::vector<Term>& terms() const { return terms_; }
  const QuadIdeal& level() const { return level_; }
  long long scale() const { return scale_; }
  int field() const { return level_.field(); }
  std::size_t size() const { return terms_.size(); }

  /// Union of the supports of all function entries, sorted.
  std::vector<TorsionPoint> support() const;

  SymbolSum scaled(long long k) const;
  friend SymbolSum operator+(const SymbolSum& a, const SymbolSum& b);
  friend SymbolSum operator-(const SymbolSum& a, const SymbolSum& b) { return a + b.scaled(-1); }

 private:
  QuadIdeal level_;
  long long scale_;
  std::vector<Term> terms_;
};

/// Bilinear, antisymmetric normal form. Every function entry is written as
/// c * F_D^k with F_D canonical for a primitive divisor; terms {c, c'} between
/// constants are dropped, {F, c} becomes -{c, F}, {F, F} becomes {-1, F}.
struct NormalForm {
  std::map<std::pair<Divisor, Divisor>, long long> functions;  // {F_D1, F_D2}, D1 < D2
  std::map<Divisor, Constant> constants;                        // {c, F_D}

  /// Equal up to terms with a constant entry.
  bool same_function_part(const NormalForm& other) const { return functions == other.functions; }
  SymbolSum as_sum(const QuadIdeal& level, long long scale = 1) const;
};

NormalForm normal_form(const SymbolSum& s);

/// (-1)^(mn) f^n / g^m from the leading coefficients at the point.
BigComplex tame_local(int m, const BigComplex& lead_f, int n, const BigComplex& lead_g);

/// Product over terms of the local tame symbols raised to the coefficients.
BigComplex tame_symbol_at(const SymbolSum& s, const TorsionPoint& p, const Lattice& L);

/// lcm(24, N(P) - 1 over primes P dividing level * (a)).
int default_order_bound(const QuadIdeal& level, int a);

/// Smallest k <= bound with v^k = 1 to within `tolerance`, if any.
std::optional<int> root_of_unity_order(const BigComplex& v, int bound, const Real& tolerance, const Real& pi);

struct TameOptions {
  Real tolerance;
  int order_bound{24};
  std::uint64_t seed{0};
};

Certificate certify_tame_kernel(const SymbolSum& s, const Lattice& L, const TameOptions& options, std::string id,
                                std::string identity);

SymbolSum symbol_galois(const SymbolSum& s, const SymbolAction& action);

/// Sum of the conjugates over the l-layer, with scalars taken mod level * extra.
SymbolSum orbit_norm(const SymbolSum& s, const QuadIdeal& l, OrbitKind kind, const QuadIdeal& extra);

/// The functions alpha' is assembled from: g_a, s with div M(y) - M(0), and t_gamma.
struct AlphaPieces {
  TorsionPoint y;
  int a;
  EllFunction g;
  EllFunction s;
  std::map<TorsionPoint, EllFunction> t;
};

/// Canonical pieces. Throws on a collision of y with E[a].
AlphaPieces alpha_pieces(const TorsionPoint& y, int multiplicity, int a);

/// a{g(y)^-1 g, s} - sum_{gamma in E[a] - 0} {s(gamma), t_gamma}.
SymbolSum assemble_alpha_prime(const AlphaPieces& pieces, const QuadIdeal& level, long long scale);

/// assemble_alpha_prime of the canonical pieces, scale M.
SymbolSum build_alpha_prime_at(const TorsionPoint& y, int multiplicity, int a, const QuadIdeal& level);

/// N(mf) * alpha'_m.
SymbolSum build_alpha_prime(const TorsionSystem& sys, const QuadIdeal& m, int a);

/// alpha_m = [phi(n)]_* N_{H(naf)/H(m)} alpha'_n with n = m or m*p.
struct AlphaElement {
  QuadIdeal m;
  QuadIdeal inner_ideal;
  SymbolSum inner;
  QuadInt pushforward;
  QuadIdeal norm_from;
  QuadIdeal norm_to;

  const SymbolSum& unwrap() const { return inner; }
  /// Formal norm further down to H(to); `to` must divide the current base.
  AlphaElement norm_down(const QuadIdeal& to) const;
  bool same_annotation(const AlphaElement& other) const;
  std::string describe() const;
};

AlphaElement build_alpha(const TorsionSystem& sys, const QuadIdeal& m, int a, const QuadIdeal& p);

/// A = a{g_a, g_l} - sum_{gamma} {g_l(gamma), t_gamma}.
SymbolSum build_A(const QuadIdeal& l, int a);
/// B = sum_{c in E[l] - 0} a{g_a(c), u_c} with div u_c = M(c) - M(0).
SymbolSum build_B(const QuadIdeal& l, int a, int multiplicity);

}  // namespace cmk2
