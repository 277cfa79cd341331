#ifndef SPECREC_SERIES_HPP
#define SPECREC_SERIES_HPP

#include <algorithm>
#include <string>
#include <vector>

#include "specrec/error.hpp"
#include "specrec/poly.hpp"

namespace specrec {

// Truncated Laurent series sum c_e t^e with rigorous truncation-order
// tracking: coefficients are exact for every exponent e < ord().  Stored
// coefficients cover [lo, lo+size); exponents in [lo+size, ord) are exact
// zeros.  Asking for a coefficient at or beyond ord() throws PrecisionError,
// so precision loss is always loud; callers retry at higher working order.
// Bounded convolution kernel of the series product; coefficient types with a
// cheaper flattened representation (number-field elements) specialize this.
// Adds sum_{i+j=e} a[i]b[j] into v over the exponent window [lo, ord).
template <class K>
struct SeriesMul {
  static void accumulate(const std::vector<K>& ac, long alo, long va,
                         const std::vector<K>& bc, long blo, std::vector<K>& v,
                         long lo, long ord) {
    for (size_t i = 0; i < ac.size(); ++i) {
      long ea = alo + (long)i;
      if (ea < va) continue;
      for (size_t j = 0; j < bc.size(); ++j) {
        long e = ea + blo + (long)j;
        if (e >= ord) break;
        if (e < lo) continue;
        v[(size_t)(e - lo)] = v[(size_t)(e - lo)] + ac[i] * bc[j];
      }
    }
  }
};

template <class K>
class LSeries {
 public:
  LSeries() : lo_(0), ord_(0) {}

  static LSeries zero(long ord) { return LSeries(ord, std::vector<K>{}, ord); }
  static LSeries constant(K c, long ord) {
    return LSeries(0, std::vector<K>{std::move(c)}, ord);
  }
  static LSeries monomial(K c, long e, long ord) {
    return LSeries(e, std::vector<K>{std::move(c)}, ord);
  }
  // The local coordinate t itself.
  static LSeries var(long ord) { return monomial(K(1), 1, ord); }

  static LSeries from_poly(const Poly<K>& p, long ord) {
    return LSeries(0, p.coeffs(), ord);
  }

  LSeries(long lo, std::vector<K> coeffs, long ord)
      : lo_(lo), ord_(ord), c_(std::move(coeffs)) {
    clip();
  }

  long order() const { return ord_; }
  long lo() const { return lo_; }

  K coeff(long e) const {
    if (e >= ord_)
      throw PrecisionError("series coefficient t^" + std::to_string(e) +
                           " beyond truncation order " + std::to_string(ord_));
    if (e < lo_ || e >= lo_ + (long)c_.size()) return K(0);
    return c_[(size_t)(e - lo_)];
  }

  // Smallest exponent with a (known) nonzero coefficient; returns ord() when
  // every known coefficient vanishes.  May throw SplitRequest through
  // is_zero for zero-divisor coefficients.
  long valuation() const {
    for (size_t i = 0; i < c_.size(); ++i)
      if (!is_zero(c_[i])) return lo_ + (long)i;
    return ord_;
  }
  bool known_nonzero() const { return valuation() < ord_; }

  LSeries truncated(long ord) const {
    LSeries r = *this;
    r.ord_ = std::min(r.ord_, ord);
    r.clip();
    return r;
  }

  // Multiply by t^e.
  LSeries shifted(long e) const {
    LSeries r = *this;
    r.lo_ += e;
    r.ord_ += e;
    return r;
  }

  LSeries operator-() const {
    LSeries r = *this;
    for (auto& x : r.c_) x = -x;
    return r;
  }

  friend LSeries operator+(const LSeries& a, const LSeries& b) {
    long ord = std::min(a.ord_, b.ord_);
    long lo = std::min(a.lo_, b.lo_);
    long hi = std::min(ord, std::max(a.lo_ + (long)a.c_.size(),
                                     b.lo_ + (long)b.c_.size()));
    std::vector<K> v;
    for (long e = lo; e < hi; ++e) v.push_back(a.at(e) + b.at(e));
    return LSeries(lo, std::move(v), ord);
  }
  friend LSeries operator-(const LSeries& a, const LSeries& b) { return a + (-b); }

  friend LSeries operator*(const LSeries& a, const LSeries& b) {
    long va = a.valuation(), vb = b.valuation();
    long ord = std::min(a.ord_ + vb, b.ord_ + va);
    if (va == a.ord_ && vb == b.ord_) ord = std::max(a.ord_ + vb, b.ord_ + va);
    std::vector<K> v;
    long lo = va + vb;
    if (lo < ord) v.assign((size_t)(ord - lo), K(0));
    SeriesMul<K>::accumulate(a.c_, a.lo_, va, b.c_, b.lo_, v, lo, ord);
    return LSeries(lo, std::move(v), ord);
  }

  friend LSeries operator*(const K& s, const LSeries& a) {
    LSeries r = a;
    for (auto& x : r.c_) x = s * x;
    return r;
  }

  LSeries inverse() const {
    long v = valuation();
    if (v == ord_)
      throw PrecisionError("inverting a series with no known nonzero coefficient");
    long window = ord_ - v;  // relative precision is preserved
    // s = c t^v (1 + u); 1/s = t^-v / c * sum (-u)^k.
    K lead = at(v);
    K linv = K(1) / lead;
    std::vector<K> u((size_t)window, K(0));  // coefficients of 1 + u, u[0] = 0
    for (long e = 1; e < window; ++e) u[(size_t)e] = at(v + e) * linv;
    std::vector<K> r((size_t)window, K(0));
    r[0] = K(1);
    // r = 1/(1+u) via r_e = -(sum_{k=1..e} u_k r_{e-k})
    for (long e = 1; e < window; ++e) {
      K acc(0);
      for (long k = 1; k <= e; ++k)
        acc = acc + u[(size_t)k] * r[(size_t)(e - k)];
      r[(size_t)e] = -acc;
    }
    for (auto& x : r) x = x * linv;
    return LSeries(-v, std::move(r), -v + window);
  }

  friend LSeries operator/(const LSeries& a, const LSeries& b) {
    return a * b.inverse();
  }

  LSeries derivative() const {
    std::vector<K> v(c_.size(), K(0));
    for (size_t i = 0; i < c_.size(); ++i)
      v[i] = c_[i] * K((int)(lo_ + (long)i));
    LSeries r(lo_ - 1, std::move(v), ord_ - 1);
    return r;
  }

  // Substitute: this(inner), where inner has valuation >= 1.
  LSeries compose(const LSeries& inner) const {
    long iv = inner.valuation();
    if (iv < 1)
      throw InputError("series composition requires inner valuation >= 1");
    long ov = valuation();
    long ord = std::min(ord_ * iv, inner.order() + std::min((long)0, iv * (ov - 1)));
    LSeries acc = zero(ord);
    LSeries x = inner.truncated(ord);
    // Generalized Horner over the stored (descending) exponent range.
    long prev_e = 0;
    bool first = true;
    for (size_t i = c_.size(); i-- > 0;) {
      long e = lo_ + (long)i;
      if (first) {
        acc = constant(c_[i], ord);
        prev_e = e;
        first = false;
        continue;
      }
      acc = acc * x.pow_int(prev_e - e) + constant(c_[i], ord);
      prev_e = e;
    }
    if (first) return zero(ord);
    if (prev_e != 0) acc = acc * x.pow_int(prev_e);
    return acc.truncated(ord);
  }

  // Re-declare the truncation order, treating unstored coefficients as exact
  // zeros.  Only for callers that can justify it (e.g. Newton iteration,
  // exact polynomials).
  LSeries padded(long new_ord) const {
    if (new_ord <= ord_) return truncated(new_ord);
    return LSeries(lo_, c_, new_ord);
  }

  LSeries pow_int(long e) const {
    if (e == 0) return constant(K(1), ord_);
    const LSeries* base = this;
    LSeries inv;
    if (e < 0) {
      inv = inverse();
      base = &inv;
      e = -e;
    }
    LSeries r = *base;
    --e;
    LSeries sq = *base;
    while (e > 0) {
      if (e & 1) r = r * sq;
      if ((e >>= 1) > 0) sq = sq * sq;
    }
    return r;
  }

  // exp of a series with valuation >= 1.  E' = u'E gives the coefficient
  // recurrence n E_n = sum_{k=1}^n k u_k E_{n-k}: a single convolution pass
  // instead of one series product per power of u.
  LSeries expo() const {
    if (valuation() < 1)
      throw InputError("series exp requires positive valuation");
    std::vector<K> du;  // du[k] = k u_k
    du.reserve((size_t)ord_);
    du.push_back(K(0));
    for (long k = 1; k < ord_; ++k) du.push_back(K((int)k) * at(k));
    std::vector<K> e;
    e.reserve((size_t)std::max(ord_, (long)1));
    e.push_back(K(1));
    for (long n = 1; n < ord_; ++n) {
      K s(0);
      for (long k = 1; k <= n; ++k) {
        if (is_zero(du[(size_t)k])) continue;
        s = s + du[(size_t)k] * e[(size_t)(n - k)];
      }
      e.push_back((K(1) / K((int)n)) * s);
    }
    return LSeries(0, std::move(e), ord_);
  }

  // log of a series with constant term 1 and valuation 0.  (1+u)L' = u'
  // gives n L_n = n u_n - sum_{k=1}^{n-1} k L_k u_{n-k}.
  LSeries log1() const {
    LSeries u = *this - constant(K(1), ord_);
    if (u.valuation() < 1)
      throw InputError("series log requires constant term 1");
    std::vector<K> l;
    l.reserve((size_t)std::max(ord_, (long)1));
    l.push_back(K(0));
    for (long n = 1; n < ord_; ++n) {
      K s = K((int)n) * u.at(n);
      for (long k = 1; k < n; ++k) {
        K uk = u.at(n - k);
        if (is_zero(uk) || is_zero(l[(size_t)k])) continue;
        s = s - K((int)k) * l[(size_t)k] * uk;
      }
      l.push_back((K(1) / K((int)n)) * s);
    }
    return LSeries(0, std::move(l), ord_);
  }

  std::string to_string() const;

 private:
  K at(long e) const {
    if (e < lo_ || e >= lo_ + (long)c_.size()) return K(0);
    return c_[(size_t)(e - lo_)];
  }

  void clip() {
    // Drop stored coefficients at or beyond ord.
    if (lo_ + (long)c_.size() > ord_)
      c_.resize((size_t)std::max((long)0, ord_ - lo_));
    if (c_.empty()) lo_ = ord_;
  }

  long lo_;
  long ord_;
  std::vector<K> c_;
};

// f(x) for a rational function f with coefficients liftable into K via conv.
template <class K, class K2, class Conv>
LSeries<K> eval_ratfunc(const RatFunc<K2>& f, const LSeries<K>& x, Conv conv) {
  long ord = x.order();
  auto lift = [&](const K2& c) { return LSeries<K>::constant(conv(c), ord); };
  LSeries<K> num = f.num().eval_in(x, lift);
  LSeries<K> den = f.den().eval_in(x, lift);
  return num / den;
}

// Compositional inverse of s (valuation exactly 1): returns u with
// s(u(t)) = t.  Newton iteration on truncated series.
template <class K>
LSeries<K> lagrange_invert(const LSeries<K>& s) {
  if (s.valuation() != 1)
    throw InputError("series inversion requires valuation exactly 1");
  long ord = s.order();
  K c1 = s.coeff(1);
  LSeries<K> u = LSeries<K>::monomial(K(1) / c1, 1, 2);
  long cur = 2;
  LSeries<K> ds = s.derivative();
  while (cur < ord) {
    cur = std::min(2 * cur, ord);
    // u is a polynomial correct mod t^(old cur); padding with exact zeros is
    // a valid Newton iterate at the doubled window.
    u = u.padded(cur);
    LSeries<K> err = s.truncated(cur).compose(u) - LSeries<K>::var(cur);
    LSeries<K> corr = err / ds.truncated(cur).compose(u);
    u = (u - corr).padded(cur);
  }
  return u.truncated(ord);
}

// S(z) = sinh(z/2)/(z/2) = 1 + z^2/24 + z^4/1920 + ..., the completed-cycles
// deformation series; coefficient of z^(2m) is 1/(4^m (2m+1)!).
inline LSeries<Rational> sfun_series(long ord) {
  std::vector<Rational> c;
  for (long e = 0; e < ord; ++e) {
    if (e % 2) {
      c.push_back(Rational(0));
    } else {
      long m = e / 2;
      c.push_back(Rational(1) / (pow_rational(Rational(4), m) * factorial(2 * m + 1)));
    }
  }
  return LSeries<Rational>(0, std::move(c), ord);
}

template <class K>
std::string LSeries<K>::to_string() const {
  std::string s;
  for (long e = lo_; e < lo_ + (long)c_.size(); ++e) {
    const K& c = c_[(size_t)(e - lo_)];
    bool z = false;
    try {
      z = is_zero(c);
    } catch (...) {
      z = false;
    }
    if (z) continue;
    if (!s.empty()) s += " + ";
    if constexpr (std::is_same_v<K, Rational>) {
      s += rational_to_string(c);
    } else {
      s += "(" + c.to_string() + ")";
    }
    s += "*t^" + std::to_string(e);
  }
  if (s.empty()) s = "0";
  s += " + O(t^" + std::to_string(ord_) + ")";
  return s;
}

}  // namespace specrec

#endif
