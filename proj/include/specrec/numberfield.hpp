#ifndef SPECREC_NUMBERFIELD_HPP
#define SPECREC_NUMBERFIELD_HPP

#include <string>
#include <vector>

#include "specrec/poly.hpp"
#include "specrec/series.hpp"

namespace specrec {

// Q[alpha] with alpha a root of a monic *squarefree* modulus.  The modulus is
// not required to be irreducible: arithmetic runs in Q[z]/(modulus) and any
// operation that meets a zero divisor throws SplitRequest so the caller can
// split the modulus and redo the computation per factor (dynamic
// evaluation).  Traces are sums over all roots of the modulus, which is
// exactly the Galois-orbit sum the recursion engine needs.
struct NumberField {
  PolyQ modulus;      // monic, squarefree, degree >= 2
  std::string label;  // diagnostics only

  NumberField(PolyQ m, std::string lab) : modulus(std::move(m)), label(std::move(lab)) {}

  long degree() const { return modulus.degree(); }

  // Power sum p_m = sum over roots of root^m (Newton's identities).
  const Rational& power_sum(long m) const;

 private:
  mutable std::vector<Rational> psums_;
};

// Raised when arithmetic in Q[z]/(modulus) detects a zero divisor.  `factor`
// is a nontrivial monic divisor of field->modulus.
struct SplitRequest : std::runtime_error {
  const NumberField* field;
  PolyQ factor;
  SplitRequest(const NumberField* f, PolyQ fac)
      : std::runtime_error("number field modulus splits: " + f->label),
        field(f),
        factor(std::move(fac)) {}
};

// Field element.  A null field pointer means a plain rational (the degree-1
// case), so FE is usable as the single concrete coefficient type everywhere.
class FE {
 public:
  FE() = default;
  FE(int n) : v_(Rational(n)) {}  // NOLINT: implicit by design
  FE(Rational q) : v_(std::move(q)) {}
  FE(const NumberField* F, PolyQ v) : F_(F), v_(std::move(v)) { reduce(); }

  static FE gen(const NumberField* F) { return FE(F, PolyQ::monomial(1)); }

  const NumberField* field() const { return F_; }
  const PolyQ& rep() const { return v_; }
  bool is_rational() const { return v_.degree() <= 0; }
  Rational rat() const {
    if (!is_rational())
      throw VerificationError("expected a rational value in field " +
                              (F_ ? F_->label : std::string("Q")));
    return v_.coeff(0);
  }

  // May throw SplitRequest when the value is a zero divisor.
  friend bool is_zero(const FE& a) {
    if (a.v_.zero()) return true;
    if (!a.F_ || a.v_.degree() == 0) return false;
    PolyQ g = PolyQ::gcd(a.v_, a.F_->modulus);
    if (g.degree() == 0) return false;
    throw SplitRequest(a.F_, g);
  }

  friend FE operator+(const FE& a, const FE& b) {
    const NumberField* F = join(a, b);
    return FE(F, a.v_ + b.v_);
  }
  friend FE operator-(const FE& a, const FE& b) {
    const NumberField* F = join(a, b);
    return FE(F, a.v_ - b.v_);
  }
  FE operator-() const { return FE(F_, -v_); }
  friend FE operator*(const FE& a, const FE& b) {
    const NumberField* F = join(a, b);
    return FE(F, a.v_ * b.v_);
  }
  friend FE operator/(const FE& a, const FE& b) { return a * b.inverse(); }

  FE inverse() const {
    if (v_.zero()) throw InputError("division by zero field element");
    if (!F_ || v_.degree() == 0) return FE(F_, PolyQ(Rational(1) / v_.coeff(0)));
    auto [g, u, v] = PolyQ::xgcd(v_, F_->modulus);
    (void)v;
    if (g.degree() != 0) throw SplitRequest(F_, g);
    return FE(F_, u.divided_by(g.coeff(0)));
  }

  bool operator==(const FE& b) const { return is_zero(*this - b); }
  bool operator!=(const FE& b) const { return !(*this == b); }

  // Sum of this element's images over all roots of the modulus.
  Rational trace() const {
    if (!F_) return v_.coeff(0);
    Rational acc(0);
    for (long m = 0; m <= v_.degree(); ++m)
      acc += v_.coeff(m) * F_->power_sum(m);
    return acc;
  }

  std::string to_string() const;

 private:
  void reduce() {
    if (F_ && v_.degree() >= F_->degree()) v_ = PolyQ::divrem(v_, F_->modulus).second;
    if (F_ && v_.degree() <= 0) F_ = nullptr;
  }
  static const NumberField* join(const FE& a, const FE& b) {
    if (a.F_ && b.F_ && a.F_ != b.F_)
      throw InputError("mixing elements of different number fields: " +
                       a.F_->label + " vs " + b.F_->label);
    return a.F_ ? a.F_ : b.F_;
  }

  const NumberField* F_ = nullptr;
  PolyQ v_;
};

// n-th cyclotomic polynomial (used for deck transformations at rational
// ramification points of order > 2).
PolyQ cyclotomic_polynomial(long n);

// Series convolution over a number field through a flattened integer
// representation: clear all denominators of each factor once, convolve the
// integer coefficient blocks with mpz addmul (no per-product gcd), and
// canonicalize/reduce only the output coefficients.  This is the innermost
// loop of the whole recursion engine.
template <>
struct SeriesMul<FE> {
  static void accumulate(const std::vector<FE>& ac, long alo, long va,
                         const std::vector<FE>& bc, long blo, std::vector<FE>& v,
                         long lo, long ord) {
    if (v.empty()) return;
    const NumberField* F = nullptr;
    for (const auto& x : ac)
      if (x.field()) { F = x.field(); break; }
    for (const auto& x : bc) {
      if (!x.field()) continue;
      if (!F) F = x.field();
      if (x.field() != F)
        throw InputError("mixing elements of different number fields: " +
                         F->label + " vs " + x.field()->label);
    }
    for (const auto& x : ac)
      if (x.field() && x.field() != F)
        throw InputError("mixing elements of different number fields: " +
                         F->label + " vs " + x.field()->label);
    long d = F ? F->degree() : 1;
    auto flatten = [d](const std::vector<FE>& c, mpz_class* den_out) {
      mpz_class den(1);
      for (const auto& x : c)
        for (long p = 0; p <= x.rep().degree(); ++p)
          mpz_lcm(den.get_mpz_t(), den.get_mpz_t(),
                  x.rep().coeff(p).get_den().get_mpz_t());
      std::vector<mpz_class> z(c.size() * (size_t)d);
      mpz_class t;
      for (size_t i = 0; i < c.size(); ++i)
        for (long p = 0; p <= c[i].rep().degree(); ++p) {
          const Rational& q = c[i].rep().coeff(p);
          mpz_divexact(t.get_mpz_t(), den.get_mpz_t(), q.get_den().get_mpz_t());
          z[i * (size_t)d + (size_t)p] = t * q.get_num();
        }
      *den_out = den;
      return z;
    };
    mpz_class da, db;
    std::vector<mpz_class> za = flatten(ac, &da), zb = flatten(bc, &db);
    size_t dd = (size_t)(2 * d - 1);
    std::vector<mpz_class> out(v.size() * dd);
    for (size_t i = 0; i < ac.size(); ++i) {
      long ea = alo + (long)i;
      if (ea < va) continue;
      const mpz_class* ra = &za[i * (size_t)d];
      bool any = false;
      for (long p = 0; p < d && !any; ++p) any = mpz_sgn(ra[p].get_mpz_t()) != 0;
      if (!any) continue;
      for (size_t j = 0; j < bc.size(); ++j) {
        long e = ea + blo + (long)j;
        if (e >= ord) break;
        if (e < lo) continue;
        const mpz_class* rb = &zb[j * (size_t)d];
        mpz_class* ro = &out[(size_t)(e - lo) * dd];
        for (long p = 0; p < d; ++p) {
          if (mpz_sgn(ra[p].get_mpz_t()) == 0) continue;
          for (long q = 0; q < d; ++q) {
            if (mpz_sgn(rb[q].get_mpz_t()) == 0) continue;
            ro[p + q] += ra[p] * rb[q];
          }
        }
      }
    }
    mpz_class den = da * db;
    for (size_t e = 0; e < v.size(); ++e) {
      std::vector<Rational> coeffs(dd);
      bool any = false;
      for (size_t p = 0; p < dd; ++p) {
        mpz_class& z = out[e * dd + p];
        if (mpz_sgn(z.get_mpz_t()) == 0) continue;
        mpq_class q(std::move(z), den);
        q.canonicalize();
        coeffs[p] = std::move(q);
        any = true;
      }
      if (any) v[e] = v[e] + FE(F, PolyQ(std::move(coeffs)));
    }
  }
};

}  // namespace specrec

#endif
