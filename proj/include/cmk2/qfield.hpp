#pragma once

// Exact arithmetic in a class-number-one imaginary quadratic field K = Q(sqrt d).
//
// Elements are pairs of coordinates against the integral basis (1, w) where
// w = sqrt(d)/2 for d = 0 mod 4 and w = (1 + sqrt d)/2 for d = 1 mod 4, so that
// w^2 = t*w - n with t = trace(w), n = norm(w). Ideals are principal and are
// stored through a canonical generator.

#include <array>
#include <compare>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/rational.hpp>

namespace cmk2 {

using Rational = boost::rational<std::int64_t>;

class ArithmeticError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class ParseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Trace and norm of w for discriminant d.
constexpr int omega_trace(int d) { return ((d % 4) + 4) % 4 == 1 ? 1 : 0; }
constexpr std::int64_t omega_norm(int d) { return omega_trace(d) == 1 ? (1 - d) / 4 : -d / 4; }

bool is_class_number_one(int d);

/// Element x + y*w of K (T = Rational) or O_K (T = int64).
template <class T>
struct Quad {
  T x{0};
  T y{0};
  int d{-4};

  Quad() = default;
  Quad(T x_, T y_, int d_) : x(x_), y(y_), d(d_) {}

  static Quad from_int(T v, int d_) { return Quad(v, T(0), d_); }
  bool is_zero() const { return x == T(0) && y == T(0); }

  friend bool operator==(const Quad& a, const Quad& b) {
    return a.d == b.d && a.x == b.x && a.y == b.y;
  }
};

using QuadInt = Quad<std::int64_t>;
using QuadRat = Quad<Rational>;

namespace detail {
inline void same_field(int a, int b) {
  if (a != b) throw ArithmeticError("elements from different quadratic fields");
}
}  // namespace detail

template <class T>
Quad<T> operator+(const Quad<T>& a, const Quad<T>& b) {
  detail::same_field(a.d, b.d);
  return {a.x + b.x, a.y + b.y, a.d};
}
template <class T>
Quad<T> operator-(const Quad<T>& a, const Quad<T>& b) {
  detail::same_field(a.d, b.d);
  return {a.x - b.x, a.y - b.y, a.d};
}
template <class T>
Quad<T> operator-(const Quad<T>& a) {
  return {-a.x, -a.y, a.d};
}
template <class T>
Quad<T> operator*(const Quad<T>& a, const Quad<T>& b) {
  detail::same_field(a.d, b.d);
  const T t(omega_trace(a.d));
  const T n(omega_norm(a.d));
  return {a.x * b.x - n * a.y * b.y, a.x * b.y + a.y * b.x + t * a.y * b.y, a.d};
}
template <class T>
Quad<T> operator*(const T& k, const Quad<T>& a) {
  return {k * a.x, k * a.y, a.d};
}
template <class T>
Quad<T> conj(const Quad<T>& a) {
  return {a.x + T(omega_trace(a.d)) * a.y, -a.y, a.d};
}
template <class T>
T norm(const Quad<T>& a) {
  return a.x * a.x + T(omega_trace(a.d)) * a.x * a.y + T(omega_norm(a.d)) * a.y * a.y;
}
template <class T>
T trace(const Quad<T>& a) {
  return T(2) * a.x + T(omega_trace(a.d)) * a.y;
}

QuadRat to_rat(const QuadInt& a);
QuadRat inverse(const QuadRat& a);
QuadRat operator/(const QuadRat& a, const QuadRat& b);
bool is_integral(const QuadRat& a);
/// Exact quotient a/b in O_K, throws when b does not divide a.
QuadInt exact_div(const QuadInt& a, const QuadInt& b);
bool divides(const QuadInt& b, const QuadInt& a);
QuadInt pow(QuadInt a, unsigned e);

std::string to_string(const QuadInt& a);
std::string to_string(const QuadRat& a);
inline std::ostream& operator<<(std::ostream& os, const QuadInt& a) { return os << to_string(a); }

/// Lexicographic order on coordinates, used only for deterministic containers.
template <class T>
bool lex_less(const Quad<T>& a, const Quad<T>& b) {
  if (a.x != b.x) return a.x < b.x;
  return a.y < b.y;
}

class QuadField {
 public:
  explicit QuadField(int discriminant);

  int discriminant() const { return d_; }
  int trace_omega() const { return omega_trace(d_); }
  std::int64_t norm_omega() const { return omega_norm(d_); }
  int unit_count() const { return static_cast<int>(units_.size()); }
  const std::vector<QuadInt>& units() const { return units_; }

  QuadInt element(std::int64_t x, std::int64_t y) const { return {x, y, d_}; }
  QuadInt one() const { return {1, 0, d_}; }
  QuadInt omega() const { return {0, 1, d_}; }

  friend bool operator==(const QuadField& a, const QuadField& b) { return a.d_ == b.d_; }

 private:
  int d_;
  std::vector<QuadInt> units_;
};

std::vector<QuadInt> unit_group(int d);

/// Unique associate of a in the sector 0 <= arg < 2*pi/w.
QuadInt canonical_generator(const QuadInt& a);

/// Hermite basis (a, 0), (b, c) of a full-rank sublattice of Z^2, 0 <= b < a.
struct Hnf {
  std::int64_t a{1};
  std::int64_t b{0};
  std::int64_t c{1};

  std::int64_t index() const { return a * c; }
  friend bool operator==(const Hnf&, const Hnf&) = default;
};

/// Hermite basis of the lattice spanned by the given columns, together with
/// integer coefficient vectors expressing each basis vector in the columns.
struct HnfTransform {
  Hnf hnf;
  std::vector<std::int64_t> coeff_first;   // combination giving (a, 0)
  std::vector<std::int64_t> coeff_second;  // combination giving (b, c)
};
HnfTransform hnf_with_transform(const std::vector<std::array<std::int64_t, 2>>& columns);

class QuadIdeal {
 public:
  QuadIdeal() = default;
  explicit QuadIdeal(const QuadInt& generator);
  static QuadIdeal unit(int d) { return QuadIdeal(QuadInt(1, 0, d)); }
  static QuadIdeal from_lattice(const Hnf& lattice, int d);

  const QuadInt& generator() const { return gen_; }
  std::int64_t norm() const { return norm_; }
  int field() const { return gen_.d; }
  bool is_unit() const { return norm_ == 1; }
  const Hnf& lattice() const { return hnf_; }

  bool contains(const QuadInt& a) const;
  bool divides(const QuadIdeal& other) const;
  /// Canonical representative of a modulo this ideal.
  QuadInt reduce(const QuadInt& a) const;
  /// Canonical residue representatives, N(I) of them.
  std::vector<QuadInt> residues() const;

  friend QuadIdeal operator*(const QuadIdeal& a, const QuadIdeal& b) {
    return QuadIdeal(a.gen_ * b.gen_);
  }
  friend bool operator==(const QuadIdeal& a, const QuadIdeal& b) { return a.gen_ == b.gen_; }
  friend bool operator<(const QuadIdeal& a, const QuadIdeal& b) {
    if (a.norm_ != b.norm_) return a.norm_ < b.norm_;
    return lex_less(a.gen_, b.gen_);
  }

 private:
  QuadInt gen_{1, 0, -4};
  std::int64_t norm_{1};
  Hnf hnf_{};
};

std::string to_string(const QuadIdeal& I);
inline std::ostream& operator<<(std::ostream& os, const QuadIdeal& I) { return os << to_string(I); }

QuadIdeal ideal_sum(const QuadIdeal& I, const QuadIdeal& J);
bool coprime(const QuadIdeal& I, const QuadIdeal& J);
/// Exact quotient I/J; throws when J does not divide I.
QuadIdeal ideal_div(const QuadIdeal& I, const QuadIdeal& J);
QuadIdeal ideal_pow(const QuadIdeal& I, unsigned e);
/// Largest e with P^e | I.
int valuation(const QuadIdeal& I, const QuadIdeal& P);
/// Prime factorisation sorted by prime.
std::vector<std::pair<QuadIdeal, int>> factor(const QuadIdeal& I);

/// beta with a*beta = 1 mod m, reduced; throws when (a) + m != (1).
QuadInt residue_invert(const QuadInt& a, const QuadIdeal& m);

class ResidueRing {
 public:
  explicit ResidueRing(QuadIdeal modulus) : modulus_(std::move(modulus)) {}
  const QuadIdeal& modulus() const { return modulus_; }
  QuadInt reduce(const QuadInt& a) const { return modulus_.reduce(a); }
  std::int64_t size() const { return modulus_.norm(); }
  std::vector<QuadInt> elements() const { return modulus_.residues(); }
  bool is_unit(const QuadInt& a) const;
  std::vector<QuadInt> units() const;
  /// N(m) * prod_{P | m} (1 - 1/N(P)).
  std::int64_t unit_count() const;

 private:
  QuadIdeal modulus_;
};

bool is_prime(std::int64_t p);

enum class SplitKind { split, inert, ramified };

struct Splitting {
  SplitKind kind;
  std::vector<QuadIdeal> primes;
};

Splitting split_rational_prime(std::int64_t p, int d);

struct IndexSets {
  std::vector<QuadIdeal> L;
  std::vector<QuadIdeal> R;
};

/// Primes of norm <= bound prime to f_phi * pbar * a with an associate
/// generator = 1 mod f_phi, and all products of them with norm <= bound.
IndexSets enumerate_L_R(std::int64_t norm_bound, const QuadIdeal& f_phi, const QuadIdeal& pbar,
                        std::int64_t a);

/// Literals such as "2-i", "-1+2*w", "3".
QuadInt parse_element(const std::string& text, int d);
/// Element literal, or a product of parenthesised factors with optional powers,
/// e.g. "(1+i)^3", "(2+i)(2-i)", "(2+i)^2*(3)".
QuadIdeal parse_ideal(const std::string& text, int d);

}  // namespace cmk2
