#ifndef SPECREC_POLY_HPP
#define SPECREC_POLY_HPP

#include <algorithm>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "specrec/error.hpp"
#include "specrec/rational.hpp"

namespace specrec {

// Product of two rational coefficient vectors through integer arithmetic:
// clear denominators once, multiply with mpz (addmul, no per-op gcd), and
// canonicalize only the output coefficients.  For the short polynomials of
// number-field arithmetic this roughly halves the gcd work of naive mpq
// convolution, and the gap widens with length.
inline std::vector<Rational> mul_rational_coeffs(const std::vector<Rational>& a,
                                                 const std::vector<Rational>& b) {
  mpz_class da(1), db(1);
  for (const auto& x : a)
    mpz_lcm(da.get_mpz_t(), da.get_mpz_t(), x.get_den().get_mpz_t());
  for (const auto& x : b)
    mpz_lcm(db.get_mpz_t(), db.get_mpz_t(), x.get_den().get_mpz_t());
  std::vector<mpz_class> za, zb;
  za.reserve(a.size());
  zb.reserve(b.size());
  mpz_class t;
  for (const auto& x : a) {
    mpz_divexact(t.get_mpz_t(), da.get_mpz_t(), x.get_den().get_mpz_t());
    za.emplace_back(t * x.get_num());
  }
  for (const auto& x : b) {
    mpz_divexact(t.get_mpz_t(), db.get_mpz_t(), x.get_den().get_mpz_t());
    zb.emplace_back(t * x.get_num());
  }
  std::vector<mpz_class> v(a.size() + b.size() - 1);
  for (size_t i = 0; i < za.size(); ++i) {
    if (mpz_sgn(za[i].get_mpz_t()) == 0) continue;
    for (size_t j = 0; j < zb.size(); ++j) v[i + j] += za[i] * zb[j];
  }
  mpz_class den = da * db;
  std::vector<Rational> out;
  out.reserve(v.size());
  for (auto& z : v) {
    mpq_class q(std::move(z), den);
    q.canonicalize();
    out.push_back(std::move(q));
  }
  return out;
}

// Dense univariate polynomial over a field K.  K must be constructible from
// int, support +,-,*,/ and ==, and provide an ADL-visible is_zero(K).
// The coefficient vector never has trailing zeros; the zero polynomial is
// the empty vector (degree -1).
template <class K>
class Poly {
 public:
  Poly() = default;
  explicit Poly(std::vector<K> coeffs) : c_(std::move(coeffs)) { trim(); }
  explicit Poly(K constant) : c_{std::move(constant)} { trim(); }

  static Poly monomial(long deg, K coeff = K(1)) {
    if (is_zero(coeff) || deg < 0) return Poly();
    std::vector<K> v((size_t)deg + 1, K(0));
    v.back() = std::move(coeff);
    return Poly(std::move(v));
  }

  long degree() const { return (long)c_.size() - 1; }
  bool zero() const { return c_.empty(); }
  const std::vector<K>& coeffs() const { return c_; }
  K coeff(long i) const {
    return (i >= 0 && i < (long)c_.size()) ? c_[(size_t)i] : K(0);
  }
  const K& lead() const { return c_.back(); }

  friend bool is_zero(const Poly& p) { return p.zero(); }

  bool operator==(const Poly& o) const {
    if (c_.size() != o.c_.size()) return false;
    for (size_t i = 0; i < c_.size(); ++i)
      if (!(c_[i] == o.c_[i])) return false;
    return true;
  }
  bool operator!=(const Poly& o) const { return !(*this == o); }

  Poly operator-() const {
    Poly r = *this;
    for (auto& x : r.c_) x = -x;
    return r;
  }

  friend Poly operator+(const Poly& a, const Poly& b) {
    std::vector<K> v(std::max(a.c_.size(), b.c_.size()), K(0));
    for (size_t i = 0; i < a.c_.size(); ++i) v[i] = a.c_[i];
    for (size_t i = 0; i < b.c_.size(); ++i) v[i] = v[i] + b.c_[i];
    return Poly(std::move(v));
  }
  friend Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }

  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.zero() || b.zero()) return Poly();
    if constexpr (std::is_same_v<K, Rational>) {
      // The denominator-clearing pass only pays off once the quadratic gcd
      // work of mpq convolution outweighs its linear setup cost.
      if (a.c_.size() + b.c_.size() >= 16)
        return Poly(mul_rational_coeffs(a.c_, b.c_));
    }
    std::vector<K> v(a.c_.size() + b.c_.size() - 1, K(0));
    for (size_t i = 0; i < a.c_.size(); ++i) {
      if (is_zero(a.c_[i])) continue;
      for (size_t j = 0; j < b.c_.size(); ++j)
        v[i + j] = v[i + j] + a.c_[i] * b.c_[j];
    }
    return Poly(std::move(v));
  }

  friend Poly operator*(const K& s, const Poly& p) {
    if (is_zero(s)) return Poly();
    Poly r = p;
    for (auto& x : r.c_) x = s * x;
    r.trim();
    return r;
  }
  friend Poly operator*(const Poly& p, const K& s) { return s * p; }

  Poly divided_by(const K& s) const {
    Poly r = *this;
    for (auto& x : r.c_) x = x / s;
    return r;
  }

  // Euclidean division; requires b nonzero.
  static std::pair<Poly, Poly> divrem(const Poly& a, const Poly& b) {
    if (b.zero()) throw InputError("polynomial division by zero");
    Poly rem = a;
    std::vector<K> q;
    long db = b.degree();
    if (a.degree() >= db) q.assign((size_t)(a.degree() - db) + 1, K(0));
    while (!rem.zero() && rem.degree() >= db) {
      long shift = rem.degree() - db;
      K f = rem.lead() / b.lead();
      q[(size_t)shift] = f;
      // rem -= f * x^shift * b
      for (long i = 0; i <= db; ++i) {
        size_t idx = (size_t)(i + shift);
        rem.c_[idx] = rem.c_[idx] - f * b.c_[(size_t)i];
      }
      rem.trim_leading_only();
    }
    rem.trim();
    return {Poly(std::move(q)), rem};
  }

  // Monic GCD.
  static Poly gcd(Poly a, Poly b) {
    while (!b.zero()) {
      auto [q, r] = divrem(a, b);
      (void)q;
      a = std::move(b);
      b = std::move(r);
    }
    if (a.zero()) return a;
    return a.divided_by(a.lead());
  }

  // Extended GCD: returns (g, u, v) with u*a + v*b = g, g monic (or zero).
  static std::tuple<Poly, Poly, Poly> xgcd(Poly a, Poly b) {
    Poly u0(K(1)), v0, u1, v1(K(1));
    while (!b.zero()) {
      auto [q, r] = divrem(a, b);
      a = std::move(b);
      b = std::move(r);
      Poly u2 = u0 - q * u1, v2 = v0 - q * v1;
      u0 = std::move(u1);
      v0 = std::move(v1);
      u1 = std::move(u2);
      v1 = std::move(v2);
    }
    if (a.zero()) return {a, u0, v0};
    K l = a.lead();
    return {a.divided_by(l), u0.divided_by(l), v0.divided_by(l)};
  }

  Poly derivative() const {
    if (c_.size() <= 1) return Poly();
    std::vector<K> v(c_.size() - 1, K(0));
    for (size_t i = 1; i < c_.size(); ++i) v[i - 1] = c_[i] * K((int)i);
    return Poly(std::move(v));
  }

  K eval(const K& x) const {
    K acc(0);
    for (size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
    return acc;
  }

  // Horner evaluation in another ring; conv lifts a coefficient into T.
  template <class T, class Conv>
  T eval_in(const T& x, Conv conv) const {
    T acc = conv(K(0));
    for (size_t i = c_.size(); i-- > 0;) acc = acc * x + conv(c_[i]);
    return acc;
  }

  Poly compose(const Poly& inner) const {
    Poly acc;
    for (size_t i = c_.size(); i-- > 0;) acc = acc * inner + Poly(c_[i]);
    return acc;
  }

  Poly pow(long e) const {
    Poly r(K(1)), base = *this;
    for (; e > 0; e >>= 1) {
      if (e & 1) r = r * base;
      base = base * base;
    }
    return r;
  }

  // p(z) -> p(s*z), used for homogeneity checks and chart changes.
  Poly scale_arg(const K& s) const {
    Poly r = *this;
    K f(1);
    for (size_t i = 0; i < r.c_.size(); ++i) {
      r.c_[i] = r.c_[i] * f;
      f = f * s;
    }
    r.trim();
    return r;
  }

  // z^degree * p(1/z): coefficient reversal (for the chart at infinity).
  Poly reversed() const {
    Poly r = *this;
    std::reverse(r.c_.begin(), r.c_.end());
    r.trim();
    return r;
  }

 private:
  void trim() {
    while (!c_.empty() && is_zero(c_.back())) c_.pop_back();
  }
  void trim_leading_only() { trim(); }

  std::vector<K> c_;
};

using PolyQ = Poly<Rational>;

// Reduced fraction of polynomials over K; denominator normalized monic.
template <class K>
class RatFunc {
 public:
  RatFunc() : num_(), den_(K(1)) {}
  explicit RatFunc(K constant) : num_(std::move(constant)), den_(K(1)) {}
  RatFunc(Poly<K> num, Poly<K> den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_.zero()) throw InputError("rational function with zero denominator");
    reduce();
  }
  explicit RatFunc(Poly<K> num) : num_(std::move(num)), den_(K(1)) {}

  const Poly<K>& num() const { return num_; }
  const Poly<K>& den() const { return den_; }
  bool zero() const { return num_.zero(); }
  bool is_polynomial() const { return den_.degree() == 0; }
  friend bool is_zero(const RatFunc& f) { return f.zero(); }

  bool operator==(const RatFunc& o) const {
    return num_ == o.num_ && den_ == o.den_;
  }
  bool operator!=(const RatFunc& o) const { return !(*this == o); }

  RatFunc operator-() const {
    RatFunc r = *this;
    r.num_ = -r.num_;
    return r;
  }
  friend RatFunc operator+(const RatFunc& a, const RatFunc& b) {
    return RatFunc(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  friend RatFunc operator-(const RatFunc& a, const RatFunc& b) { return a + (-b); }
  friend RatFunc operator*(const RatFunc& a, const RatFunc& b) {
    return RatFunc(a.num_ * b.num_, a.den_ * b.den_);
  }
  friend RatFunc operator*(const K& s, const RatFunc& f) {
    return RatFunc(s * f.num_, f.den_);
  }
  friend RatFunc operator/(const RatFunc& a, const RatFunc& b) {
    if (b.zero()) throw InputError("division by zero rational function");
    return RatFunc(a.num_ * b.den_, a.den_ * b.num_);
  }

  RatFunc derivative() const {
    return RatFunc(num_.derivative() * den_ - num_ * den_.derivative(),
                   den_ * den_);
  }

  K eval(const K& x) const {
    K d = den_.eval(x);
    if (is_zero(d)) throw InputError("rational function evaluated at a pole");
    return num_.eval(x) / d;
  }

  bool defined_at(const K& x) const { return !is_zero(den_.eval(x)); }

  // f(g) for a rational inner function g: clear g's denominator, so that
  // f(g) = sum n_i gnum^i gden^(d-i) / sum d_i gnum^i gden^(d-i).
  RatFunc compose(const RatFunc& g) const {
    long d = std::max(num_.degree(), den_.degree());
    if (d < 0) return RatFunc();
    std::vector<Poly<K>> pw((size_t)d + 1);
    for (long i = 0; i <= d; ++i)
      pw[(size_t)i] = g.num().pow(i) * g.den().pow(d - i);
    Poly<K> top, bot;
    for (long i = 0; i <= d; ++i) {
      top = top + num_.coeff(i) * pw[(size_t)i];
      bot = bot + den_.coeff(i) * pw[(size_t)i];
    }
    if (bot.zero()) throw InputError("composition hit a pole identically");
    return RatFunc(top, bot);
  }

 private:
  void reduce() {
    if (num_.zero()) {
      den_ = Poly<K>(K(1));
      return;
    }
    Poly<K> g = Poly<K>::gcd(num_, den_);
    if (g.degree() > 0) {
      num_ = Poly<K>::divrem(num_, g).first;
      den_ = Poly<K>::divrem(den_, g).first;
    }
    K l = den_.lead();
    if (!(l == K(1))) {
      num_ = num_.divided_by(l);
      den_ = den_.divided_by(l);
    }
  }

  Poly<K> num_, den_;
};

using RatFuncQ = RatFunc<Rational>;

// Squarefree part of p: p / gcd(p, p').
template <class K>
Poly<K> squarefree_part(const Poly<K>& p) {
  if (p.degree() <= 0) return p;
  Poly<K> g = Poly<K>::gcd(p, p.derivative());
  if (g.degree() <= 0) return p.divided_by(p.lead());
  Poly<K> q = Poly<K>::divrem(p, g).first;
  return q.divided_by(q.lead());
}

// Rational roots of a Q-polynomial (each returned once), together with the
// cofactor after dividing all of them out.  Uses the rational root theorem
// on the integer-scaled polynomial with trial division of the outer
// coefficients; intended for desk-scale inputs.
std::vector<Rational> rational_roots(const PolyQ& p, PolyQ* cofactor);

}  // namespace specrec

#endif
