#pragma once

// Divisors on torsion points and the elliptic functions realising them as
// balanced sigma products with the Klein normalisation
//
//   f(z) = c * exp(-1/2 sum n_i eta(w_i) w_i) * prod sigma(z - w_i)^n_i,
//
// sum n_i = 0 and sum n_i w_i = 0 exactly. log|f| is then a function of the
// divisor alone, so two such products with the same divisor differ by a root
// of unity, which is computed exactly (see EllFunction::decompose).

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "cmk2/analytic.hpp"
#include "cmk2/bigfloat.hpp"
#include "cmk2/torsion.hpp"

namespace cmk2 {

using Lattice = CmLattice<Real>;

class Divisor {
 public:
  explicit Divisor(int d = -4) : d_(d) {}
  static Divisor point(const TorsionPoint& p, int n = 1);

  int field() const { return d_; }
  void add(const TorsionPoint& p, int n);
  int order_at(const TorsionPoint& p) const;
  const std::map<TorsionPoint, int>& terms() const { return mult_; }
  std::vector<TorsionPoint> support() const;
  bool empty() const { return mult_.empty(); }

  int degree() const;
  /// sum n_i w_i with every w_i in the fundamental domain.
  QuadRat weighted_sum() const;
  /// Abel: degree 0 and weighted sum in O_K.
  bool is_principal() const;
  /// gcd of the multiplicities.
  int content() const;

  Divisor scaled(int k) const;
  /// Image under [-1].
  Divisor negated() const;
  /// Image of every point under multiplication by beta (a bijection when beta is a unit at the level).
  Divisor mapped(const QuadInt& beta) const;
  /// [alpha]^* D: each point replaced by its N(alpha) preimages.
  Divisor pullback(const QuadInt& alpha) const;
  /// [alpha]_* D.
  Divisor pushforward(const QuadInt& alpha) const;

  friend Divisor operator+(const Divisor& a, const Divisor& b);
  friend Divisor operator-(const Divisor& a, const Divisor& b) { return a + b.scaled(-1); }
  friend bool operator==(const Divisor& a, const Divisor& b) { return a.d_ == b.d_ && a.mult_ == b.mult_; }
  friend bool operator<(const Divisor& a, const Divisor& b) { return a.mult_ < b.mult_; }

 private:
  std::map<TorsionPoint, int> mult_;
  int d_;
};

std::string to_string(const Divisor& D);

class EllFunction;

/// Product of exactly known factors, roots of unity, values of functions at
/// torsion points and externally supplied numbers, each to an integer power.
class Constant {
 public:
  struct Atom {
    enum class Kind { exact, root_of_unity, evaluation, numeric } kind;
    QuadRat exact;
    Rational turns{0};  // exp(2 pi i turns)
    std::shared_ptr<const EllFunction> function;
    TorsionPoint at;
    std::shared_ptr<const std::function<BigComplex(const Lattice&)>> numeric;
    std::string label;
    int exponent{1};
  };

  Constant() = default;
  static Constant exact(const QuadRat& v);
  static Constant root_of_unity(const Rational& turns);
  static Constant evaluation(const EllFunction& f, const TorsionPoint& at, int exponent = 1);
  static Constant numeric(std::function<BigComplex(const Lattice&)> fn, std::string label);

  const std::vector<Atom>& atoms() const { return atoms_; }
  bool is_one() const { return atoms_.empty(); }
  BigComplex value(const Lattice& L) const;
  Constant inverse() const;
  Constant pow(int k) const;
  /// Image under the residue scaling beta: evaluation atoms f(P) become f^beta(beta P).
  Constant galois(const QuadInt& beta) const;

  friend Constant operator*(const Constant& a, const Constant& b);

 private:
  std::vector<Atom> atoms_;
};

std::string to_string(const Constant& c);

/// Lift of a divisor point: an exact element of K with multiplicity.
struct Representative {
  QuadRat w;
  int n;
};

class EllFunction {
 public:
  /// Canonical lift: points in the fundamental domain, the lattice defect
  /// carried by one copy of the least support point. Throws unless principal.
  static EllFunction from_divisor(const Divisor& D, std::string label = {});
  /// Throws unless the lifts are balanced.
  static EllFunction from_representatives(std::vector<Representative> reps, int d, std::string label = {});

  const Divisor& divisor() const { return divisor_; }
  const Constant& scale() const { return scale_; }
  const std::vector<Representative>& representatives() const { return reps_; }
  const std::string& label() const { return label_; }
  int field() const { return divisor_.field(); }

  EllFunction times(const Constant& c) const;
  EllFunction relabeled(std::string label) const;
  /// z -> f(alpha z), as a balanced product over the preimages of every lift.
  EllFunction pullback(const QuadInt& alpha) const;
  /// z -> f(-z).
  EllFunction negated_argument() const;
  /// Conjugate under the residue scaling beta: lifts multiplied by beta.
  EllFunction galois(const QuadInt& beta) const;

  /// Throws PoleError within the pole tolerance of the support.
  BigComplex evaluate(const Lattice& L, const BigComplex& z) const;
  /// Throws PoleError on support points.
  BigComplex evaluate(const Lattice& L, const TorsionPoint& p) const;

  struct Leading {
    int order;
    BigComplex coefficient;  // f(p + h) = coefficient * h^order + ...
  };
  Leading leading(const Lattice& L, const TorsionPoint& p) const;

  /// f = constant * F^power with F the canonical function of a primitive
  /// principal divisor whose least point has positive multiplicity.
  struct Decomposition {
    Constant constant;
    Divisor primitive;
    int power;
  };
  Decomposition decompose() const;

 private:
  EllFunction(Constant scale, std::vector<Representative> reps, Divisor divisor, std::string label)
      : scale_(std::move(scale)), reps_(std::move(reps)), divisor_(std::move(divisor)), label_(std::move(label)) {}

  Constant scale_;
  std::vector<Representative> reps_;
  Divisor divisor_;
  std::string label_;
};

/// Phase of a balanced lift relative to the unbalanced canonical product, in turns mod 1.
Rational lift_phase(const std::vector<Representative>& reps);

/// Largest k with D/k integral and principal, and the quotient with its
/// least point positive: D = power * primitive.
std::pair<Divisor, int> primitive_part(const Divisor& D);

// Divisors of the named functions.
Divisor divisor_g_a(int a, int d);                                 // a^2 (0) - E[a]
Divisor divisor_point_pair(const TorsionPoint& p, int multiplicity);  // M (p) - M (0)
Divisor divisor_t(const TorsionPoint& gamma, int a);                 // a (gamma) - a (0)
Divisor divisor_g_l(const QuadIdeal& l);                             // E[l] - N(l) (0)

enum class NamedKind { g_a, s_m, t_gamma, g_l, s_n };

struct NamedRequest {
  NamedKind kind;
  int d{-4};
  int a{2};               // g_a, t_gamma
  TorsionPoint point{};   // s_m (y_m), s_n (n), t_gamma (gamma)
  int multiplicity{1};    // s_m, s_n
  QuadIdeal l{};          // g_l

  static NamedRequest g_a(int a, int d) { return {NamedKind::g_a, d, a, TorsionPoint::zero(d), 1, QuadIdeal::unit(d)}; }
  static NamedRequest s(const TorsionPoint& p, int multiplicity, NamedKind kind = NamedKind::s_m) {
    return {kind, p.field(), 2, p, multiplicity, QuadIdeal::unit(p.field())};
  }
  static NamedRequest t(const TorsionPoint& gamma, int a) {
    return {NamedKind::t_gamma, gamma.field(), a, gamma, 1, QuadIdeal::unit(gamma.field())};
  }
  static NamedRequest g_l(const QuadIdeal& l) {
    return {NamedKind::g_l, l.field(), 2, TorsionPoint::zero(l.field()), 1, l};
  }
};

EllFunction build_named(const NamedRequest& request);

// Evaluators: plain complex functions used for identities between functions
// that are not stored as sigma products.
using Evaluator = std::function<BigComplex(const BigComplex&)>;

Evaluator evaluator(const EllFunction& f, const Lattice& L);
/// z -> f(alpha z)
Evaluator pullback_evaluator(const EllFunction& f, const QuadInt& alpha, const Lattice& L);
/// z -> prod_{alpha u = z} f(u)
Evaluator pushforward_evaluator(const EllFunction& f, const QuadInt& alpha, const Lattice& L);
/// z -> prod f_i(z)^k_i
Evaluator product_evaluator(std::vector<std::pair<Evaluator, int>> factors);

/// Point r + s*w with r, s dyadic in [0, 1), drawn from a fixed-seed stream.
struct SamplePoint {
  std::uint64_t r;
  std::uint64_t s;
  BigComplex embed(const Lattice& L) const;
  std::string to_string() const;
};

class SampleStream {
 public:
  explicit SampleStream(std::uint64_t seed) : rng_(seed) {}
  SamplePoint next();

 private:
  std::mt19937_64 rng_;
};

struct ConstancyResult {
  bool constant{false};          // relative spread below tolerance
  bool unit_modulus{false};      // | |c| - 1 | below tolerance
  BigComplex value;              // f/g at the first sample
  Real max_deviation;            // max |ratio/value - 1|
  Real modulus_error;            // | |value| - 1 |
  std::vector<SamplePoint> points;
};

/// Ratios f/g at `samples` points away from poles (resampling on PoleError).
/// Throws std::runtime_error when too few valid points are found.
ConstancyResult equal_up_to_constant(const Evaluator& f, const Evaluator& g, const Lattice& L, int samples,
                                     std::uint64_t seed, const Real& tolerance);

}  // namespace cmk2
