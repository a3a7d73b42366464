#include "cmk2/qfield.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <set>

namespace cmk2 {

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::int64_t mod_pos(std::int64_t a, std::int64_t m) {
  std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

// round(num / den) for den > 0, halves rounded up.
std::int64_t round_div(std::int64_t num, std::int64_t den) { return floor_div(2 * num + den, 2 * den); }

struct Egcd {
  std::int64_t g, s, t;
};

Egcd egcd(std::int64_t u, std::int64_t v) {
  std::int64_t old_r = u, r = v, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    const std::int64_t q = old_r / r;
    old_r -= q * r;
    std::swap(old_r, r);
    old_s -= q * s;
    std::swap(old_s, s);
    old_t -= q * t;
    std::swap(old_t, t);
  }
  if (old_r < 0) return {-old_r, -old_s, -old_t};
  return {old_r, old_s, old_t};
}

std::int64_t powmod(std::int64_t b, std::int64_t e, std::int64_t m) {
  __int128 result = 1, base = mod_pos(b, m);
  while (e > 0) {
    if (e & 1) result = result * base % m;
    base = base * base % m;
    e >>= 1;
  }
  return static_cast<std::int64_t>(result);
}

std::int64_t isqrt(std::int64_t v) {
  if (v < 0) return -1;
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<long double>(v)));
  while (r * r > v) --r;
  while ((r + 1) * (r + 1) <= v) ++r;
  return r;
}

std::array<std::int64_t, 2> column(const QuadInt& a) { return {a.x, a.y}; }

std::int64_t quad_form(int d, std::int64_t x, std::int64_t y) {
  return x * x + omega_trace(d) * x * y + omega_norm(d) * y * y;
}

// Twice the bilinear form attached to quad_form.
std::int64_t quad_bilinear2(int d, std::int64_t x1, std::int64_t y1, std::int64_t x2,
                            std::int64_t y2) {
  return 2 * x1 * x2 + omega_trace(d) * (x1 * y2 + x2 * y1) + 2 * omega_norm(d) * y1 * y2;
}

}  // namespace

bool is_class_number_one(int d) {
  static constexpr std::array<int, 9> kList{-3, -4, -7, -8, -11, -19, -43, -67, -163};
  return std::find(kList.begin(), kList.end(), d) != kList.end();
}

QuadRat to_rat(const QuadInt& a) { return {Rational(a.x), Rational(a.y), a.d}; }

QuadRat inverse(const QuadRat& a) {
  const Rational n = norm(a);
  if (n == Rational(0)) throw ArithmeticError("inverse of zero");
  const QuadRat c = conj(a);
  return {c.x / n, c.y / n, a.d};
}

QuadRat operator/(const QuadRat& a, const QuadRat& b) { return a * inverse(b); }

bool is_integral(const QuadRat& a) { return a.x.denominator() == 1 && a.y.denominator() == 1; }

QuadInt exact_div(const QuadInt& a, const QuadInt& b) {
  const QuadRat q = to_rat(a) / to_rat(b);
  if (!is_integral(q)) throw ArithmeticError(to_string(b) + " does not divide " + to_string(a));
  return {q.x.numerator(), q.y.numerator(), a.d};
}

bool divides(const QuadInt& b, const QuadInt& a) {
  if (b.is_zero()) return a.is_zero();
  return is_integral(to_rat(a) / to_rat(b));
}

QuadInt pow(QuadInt a, unsigned e) {
  QuadInt r(1, 0, a.d);
  while (e > 0) {
    if (e & 1u) r = r * a;
    a = a * a;
    e >>= 1u;
  }
  return r;
}

namespace {

std::string symbol(int d) { return d == -4 ? "i" : "w"; }

template <class T>
std::string coeff_string(const T& v) {
  if constexpr (std::is_same_v<T, Rational>) {
    if (v.denominator() == 1) return std::to_string(v.numerator());
    return std::to_string(v.numerator()) + "/" + std::to_string(v.denominator());
  } else {
    return std::to_string(v);
  }
}

template <class T>
std::string quad_string(const Quad<T>& a) {
  const std::string sym = symbol(a.d);
  if (a.y == T(0)) return coeff_string(a.x);
  std::string out = a.x != T(0) ? coeff_string(a.x) : std::string();
  if (a.y == T(1)) {
    out += (out.empty() ? "" : "+") + sym;
  } else if (a.y == T(-1)) {
    out += "-" + sym;
  } else {
    if (a.y > T(0) && !out.empty()) out += "+";
    out += coeff_string(a.y) + "*" + sym;
  }
  return out;
}

}  // namespace

std::string to_string(const QuadInt& a) { return quad_string(a); }
std::string to_string(const QuadRat& a) { return quad_string(a); }

std::vector<QuadInt> unit_group(int d) {
  if (d == -4) return {{1, 0, d}, {0, 1, d}, {-1, 0, d}, {0, -1, d}};
  if (d == -3) {
    std::vector<QuadInt> out;
    QuadInt u(1, 0, d);
    for (int k = 0; k < 6; ++k) {
      out.push_back(u);
      u = u * QuadInt(0, 1, d);
    }
    return out;
  }
  return {{1, 0, d}, {-1, 0, d}};
}

QuadField::QuadField(int discriminant) : d_(discriminant) {
  if (!is_class_number_one(discriminant))
    throw ArithmeticError("discriminant " + std::to_string(discriminant) +
                          " is not a class-number-one imaginary quadratic discriminant");
  units_ = unit_group(d_);
}

namespace {

// arg(a) in [0, 2 pi / w). With 2a = X + Y sqrt(d): Re = X/2, Im = Y sqrt|d| / 2.
bool in_canonical_sector(const QuadInt& a) {
  const std::int64_t X = 2 * a.x + omega_trace(a.d) * a.y;
  const std::int64_t Y = a.y;
  switch (a.d) {
    case -4:
      return X > 0 && Y >= 0;
    case -3:
      return Y >= 0 && Y < X;
    default:
      return Y > 0 || (Y == 0 && X > 0);
  }
}

}  // namespace

QuadInt canonical_generator(const QuadInt& a) {
  if (a.is_zero()) throw ArithmeticError("canonical generator of zero");
  for (const QuadInt& u : unit_group(a.d)) {
    const QuadInt b = u * a;
    if (in_canonical_sector(b)) return b;
  }
  throw ArithmeticError("no associate of " + to_string(a) + " in the canonical sector");
}

HnfTransform hnf_with_transform(const std::vector<std::array<std::int64_t, 2>>& columns) {
  const std::size_t k = columns.size();
  if (k < 2) throw ArithmeticError("lattice needs at least two generators");
  std::vector<std::array<std::int64_t, 2>> col = columns;
  std::vector<std::vector<std::int64_t>> U(k, std::vector<std::int64_t>(k, 0));
  for (std::size_t j = 0; j < k; ++j) U[j][j] = 1;  // U[j] is the coefficient vector of column j

  auto combine = [&](std::size_t p, std::size_t q, int coord) {
    const std::int64_t u = col[p][coord], v = col[q][coord];
    if (v == 0) return;
    const Egcd e = egcd(u, v);
    const std::int64_t a11 = e.s, a12 = e.t, a21 = -v / e.g, a22 = u / e.g;
    const auto cp = col[p], cq = col[q];
    for (int r = 0; r < 2; ++r) {
      col[p][r] = a11 * cp[r] + a12 * cq[r];
      col[q][r] = a21 * cp[r] + a22 * cq[r];
    }
    const auto up = U[p], uq = U[q];
    for (std::size_t r = 0; r < k; ++r) {
      U[p][r] = a11 * up[r] + a12 * uq[r];
      U[q][r] = a21 * up[r] + a22 * uq[r];
    }
  };

  for (std::size_t j = 1; j < k; ++j) combine(0, j, 1);
  if (col[0][1] == 0) throw ArithmeticError("lattice is not of full rank");
  if (col[0][1] < 0) {
    col[0] = {-col[0][0], -col[0][1]};
    for (auto& v : U[0]) v = -v;
  }
  for (std::size_t j = 2; j < k; ++j) combine(1, j, 0);
  if (col[1][0] == 0) throw ArithmeticError("lattice is not of full rank");
  if (col[1][0] < 0) {
    col[1][0] = -col[1][0];
    for (auto& v : U[1]) v = -v;
  }
  const std::int64_t q = floor_div(col[0][0], col[1][0]);
  col[0][0] -= q * col[1][0];
  for (std::size_t r = 0; r < k; ++r) U[0][r] -= q * U[1][r];

  HnfTransform out;
  out.hnf = {col[1][0], col[0][0], col[0][1]};
  out.coeff_first = U[1];
  out.coeff_second = U[0];
  return out;
}

QuadIdeal::QuadIdeal(const QuadInt& generator) {
  gen_ = canonical_generator(generator);
  norm_ = cmk2::norm(gen_);
  hnf_ = hnf_with_transform({column(gen_), column(gen_ * QuadInt(0, 1, gen_.d))}).hnf;
}

QuadIdeal QuadIdeal::from_lattice(const Hnf& lattice, int d) {
  // Lagrange-Gauss reduction; a principal ideal's shortest vector generates it.
  std::int64_t x1 = lattice.a, y1 = 0, x2 = lattice.b, y2 = lattice.c;
  for (int iter = 0; iter < 200; ++iter) {
    if (quad_form(d, x1, y1) > quad_form(d, x2, y2)) {
      std::swap(x1, x2);
      std::swap(y1, y2);
    }
    const std::int64_t mu = round_div(quad_bilinear2(d, x1, y1, x2, y2), 2 * quad_form(d, x1, y1));
    if (mu == 0) break;
    x2 -= mu * x1;
    y2 -= mu * y1;
  }
  QuadIdeal I(QuadInt(x1, y1, d));
  if (I.norm() != lattice.index() || !(I.lattice() == lattice))
    throw ArithmeticError("lattice is not a principal ideal of the maximal order");
  return I;
}

bool QuadIdeal::contains(const QuadInt& a) const { return reduce(a).is_zero(); }

bool QuadIdeal::divides(const QuadIdeal& other) const { return contains(other.generator()); }

QuadInt QuadIdeal::reduce(const QuadInt& a) const {
  const std::int64_t k = floor_div(a.y, hnf_.c);
  const std::int64_t y = a.y - k * hnf_.c;
  const std::int64_t x = mod_pos(a.x - k * hnf_.b, hnf_.a);
  return {x, y, a.d};
}

std::vector<QuadInt> QuadIdeal::residues() const {
  std::vector<QuadInt> out;
  out.reserve(static_cast<std::size_t>(norm_));
  for (std::int64_t y = 0; y < hnf_.c; ++y)
    for (std::int64_t x = 0; x < hnf_.a; ++x) out.emplace_back(x, y, gen_.d);
  return out;
}

std::string to_string(const QuadIdeal& I) { return "(" + to_string(I.generator()) + ")"; }

QuadIdeal ideal_sum(const QuadIdeal& I, const QuadIdeal& J) {
  detail::same_field(I.field(), J.field());
  const QuadInt w(0, 1, I.field());
  const auto t = hnf_with_transform({column(I.generator()), column(I.generator() * w),
                                     column(J.generator()), column(J.generator() * w)});
  return QuadIdeal::from_lattice(t.hnf, I.field());
}

bool coprime(const QuadIdeal& I, const QuadIdeal& J) { return ideal_sum(I, J).is_unit(); }

QuadIdeal ideal_div(const QuadIdeal& I, const QuadIdeal& J) {
  return QuadIdeal(exact_div(I.generator(), J.generator()));
}

QuadIdeal ideal_pow(const QuadIdeal& I, unsigned e) { return QuadIdeal(pow(I.generator(), e)); }

int valuation(const QuadIdeal& I, const QuadIdeal& P) {
  if (P.is_unit()) throw ArithmeticError("valuation at the unit ideal");
  int e = 0;
  QuadIdeal cur = I;
  while (P.divides(cur)) {
    cur = ideal_div(cur, P);
    ++e;
  }
  return e;
}

std::vector<std::pair<QuadIdeal, int>> factor(const QuadIdeal& I) {
  std::vector<std::pair<QuadIdeal, int>> out;
  std::int64_t n = I.norm();
  std::vector<std::int64_t> rational_primes;
  for (std::int64_t q = 2; q * q <= n; ++q) {
    if (n % q == 0) {
      rational_primes.push_back(q);
      while (n % q == 0) n /= q;
    }
  }
  if (n > 1) rational_primes.push_back(n);
  for (std::int64_t q : rational_primes) {
    for (const QuadIdeal& P : split_rational_prime(q, I.field()).primes) {
      const int e = valuation(I, P);
      if (e > 0) out.emplace_back(P, e);
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

QuadInt residue_invert(const QuadInt& a, const QuadIdeal& m) {
  detail::same_field(a.d, m.field());
  if (m.is_unit()) return {0, 0, a.d};
  const QuadInt w(0, 1, a.d);
  const auto t = hnf_with_transform(
      {column(a), column(a * w), column(m.generator()), column(m.generator() * w)});
  if (t.hnf.a != 1 || t.hnf.c != 1)
    throw ArithmeticError(to_string(a) + " is not invertible modulo " + to_string(m));
  const QuadInt beta(t.coeff_first[0], t.coeff_first[1], a.d);
  return m.reduce(beta);
}

bool ResidueRing::is_unit(const QuadInt& a) const {
  if (modulus_.is_unit()) return true;
  const QuadInt r = reduce(a);
  if (r.is_zero()) return false;
  return coprime(QuadIdeal(r), modulus_);
}

std::vector<QuadInt> ResidueRing::units() const {
  std::vector<QuadInt> out;
  for (const QuadInt& r : elements())
    if (is_unit(r)) out.push_back(r);
  return out;
}

std::int64_t ResidueRing::unit_count() const {
  std::int64_t count = modulus_.norm();
  for (const auto& [P, e] : factor(modulus_)) count = count / P.norm() * (P.norm() - 1);
  return count;
}

bool is_prime(std::int64_t p) {
  if (p < 2) return false;
  for (std::int64_t q = 2; q * q <= p; ++q)
    if (p % q == 0) return false;
  return true;
}

Splitting split_rational_prime(std::int64_t p, int d) {
  if (!is_prime(p)) throw ArithmeticError(std::to_string(p) + " is not prime");
  SplitKind kind;
  if (p == 2) {
    if (omega_trace(d) == 0)
      kind = SplitKind::ramified;
    else
      kind = mod_pos(d, 8) == 1 ? SplitKind::split : SplitKind::inert;
  } else if (mod_pos(d, p) == 0) {
    kind = SplitKind::ramified;
  } else {
    kind = powmod(d, (p - 1) / 2, p) == 1 ? SplitKind::split : SplitKind::inert;
  }
  if (kind == SplitKind::inert) return {kind, {QuadIdeal(QuadInt(p, 0, d))}};

  // 4 N(x + y w) = (2x + t y)^2 + |d| y^2.
  const int t = omega_trace(d);
  const std::int64_t ad = -d;
  for (std::int64_t y = 0; ad * y * y <= 4 * p; ++y) {
    const std::int64_t s = 4 * p - ad * y * y;
    const std::int64_t u = isqrt(s);
    if (u * u != s || ((u - t * y) % 2) != 0) continue;
    const QuadInt pi((u - t * y) / 2, y, d);
    if (norm(pi) != p) continue;
    if (kind == SplitKind::ramified) return {kind, {QuadIdeal(pi)}};
    std::vector<QuadIdeal> primes{QuadIdeal(pi), QuadIdeal(conj(pi))};
    std::sort(primes.begin(), primes.end());
    return {kind, primes};
  }
  throw ArithmeticError("no element of norm " + std::to_string(p));
}

IndexSets enumerate_L_R(std::int64_t norm_bound, const QuadIdeal& f_phi, const QuadIdeal& pbar,
                        std::int64_t a) {
  const int d = f_phi.field();
  const QuadIdeal a_ideal(QuadInt(a, 0, d));
  IndexSets out;
  for (std::int64_t q = 2; q <= norm_bound; ++q) {
    if (!is_prime(q)) continue;
    for (const QuadIdeal& P : split_rational_prime(q, d).primes) {
      if (P.norm() > norm_bound) continue;
      if (P.divides(f_phi) || P.divides(pbar) || P.divides(a_ideal)) continue;
      bool ray_one = false;
      for (const QuadInt& u : unit_group(d))
        if (f_phi.contains(u * P.generator() - QuadInt(1, 0, d))) ray_one = true;
      if (ray_one) out.L.push_back(P);
    }
  }
  std::sort(out.L.begin(), out.L.end());

  std::set<QuadIdeal> R;
  auto extend = [&](auto&& self, std::size_t start, const QuadIdeal& cur) -> void {
    R.insert(cur);
    for (std::size_t i = start; i < out.L.size(); ++i) {
      if (cur.norm() * out.L[i].norm() > norm_bound) continue;
      self(self, i, cur * out.L[i]);
    }
  };
  extend(extend, 0, QuadIdeal::unit(d));
  out.R.assign(R.begin(), R.end());
  return out;
}

QuadInt parse_element(const std::string& text, int d) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty()) throw ParseError("empty element literal");
  std::int64_t x = 0, y = 0;
  std::size_t pos = 0;
  bool first = true;
  while (pos < s.size()) {
    int sign = 1;
    if (s[pos] == '+' || s[pos] == '-') {
      sign = s[pos] == '-' ? -1 : 1;
      ++pos;
    } else if (!first) {
      throw ParseError("expected '+' or '-' at position " + std::to_string(pos) + " in '" + text + "'");
    }
    first = false;
    std::size_t start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    const std::string digits = s.substr(start, pos - start);
    bool has_symbol = false;
    if (pos < s.size() && s[pos] == '*') {
      if (digits.empty()) throw ParseError("missing coefficient before '*' in '" + text + "'");
      ++pos;
      if (pos >= s.size() || (s[pos] != 'w' && s[pos] != 'i'))
        throw ParseError("expected 'w' after '*' in '" + text + "'");
    }
    if (pos < s.size() && (s[pos] == 'w' || s[pos] == 'i')) {
      if (s[pos] == 'i' && d != -4) throw ParseError("symbol 'i' is only valid for d = -4");
      has_symbol = true;
      ++pos;
    }
    if (digits.empty() && !has_symbol)
      throw ParseError("malformed term at position " + std::to_string(start) + " in '" + text + "'");
    const std::int64_t coeff = digits.empty() ? 1 : std::stoll(digits);
    (has_symbol ? y : x) += sign * coeff;
  }
  return {x, y, d};
}

QuadIdeal parse_ideal(const std::string& text, int d) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.find('(') == std::string::npos) {
    const QuadInt g = parse_element(s, d);
    if (g.is_zero()) throw ParseError("the zero ideal is not allowed");
    return QuadIdeal(g);
  }
  QuadInt prod(1, 0, d);
  std::size_t pos = 0;
  while (pos < s.size()) {
    if (s[pos] == '*') {
      ++pos;
      continue;
    }
    QuadInt factor_elem;
    if (s[pos] == '(') {
      const std::size_t close = s.find(')', pos);
      if (close == std::string::npos) throw ParseError("unbalanced parenthesis in '" + text + "'");
      factor_elem = parse_element(s.substr(pos + 1, close - pos - 1), d);
      pos = close + 1;
    } else {
      std::size_t end = pos;
      while (end < s.size() && s[end] != '(' && s[end] != '*' && s[end] != '^') ++end;
      factor_elem = parse_element(s.substr(pos, end - pos), d);
      pos = end;
    }
    unsigned e = 1;
    if (pos < s.size() && s[pos] == '^') {
      ++pos;
      const std::size_t start = pos;
      while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
      if (start == pos) throw ParseError("missing exponent in '" + text + "'");
      e = static_cast<unsigned>(std::stoul(s.substr(start, pos - start)));
    }
    prod = prod * pow(factor_elem, e);
  }
  if (prod.is_zero()) throw ParseError("the zero ideal is not allowed");
  return QuadIdeal(prod);
}

}  // namespace cmk2
