#include "specrec/numberfield.hpp"

#include <map>

namespace specrec {

const Rational& NumberField::power_sum(long m) const {
  long d = degree();
  // e_k = (-1)^k * coeff of z^(d-k) (modulus is monic).
  // Note the explicit return type: gmpxx expression templates must not
  // escape the lambda, they reference temporaries.
  auto e = [&](long k) -> Rational {
    return pow_rational(Rational(-1), k) * modulus.coeff(d - k);
  };
  while ((long)psums_.size() <= m) {
    long k = (long)psums_.size();
    Rational p;
    if (k == 0) {
      p = Rational(d);
    } else if (k <= d) {
      // p_k = e_1 p_{k-1} - e_2 p_{k-2} + ... + (-1)^k k e_k * (-1)
      Rational acc(0);
      for (long i = 1; i < k; ++i)
        acc += pow_rational(Rational(-1), i - 1) * e(i) * psums_[(size_t)(k - i)];
      acc += pow_rational(Rational(-1), k - 1) * Rational(k) * e(k);
      p = acc;
    } else {
      Rational acc(0);
      for (long i = 1; i <= d; ++i)
        acc += pow_rational(Rational(-1), i - 1) * e(i) * psums_[(size_t)(k - i)];
      p = acc;
    }
    psums_.push_back(p);
  }
  return psums_[(size_t)m];
}

std::string FE::to_string() const {
  if (is_rational()) return rational_to_string(v_.coeff(0));
  std::string s;
  for (long i = 0; i <= v_.degree(); ++i) {
    if (is_zero(v_.coeff(i))) continue;
    if (!s.empty()) s += " + ";
    s += rational_to_string(v_.coeff(i));
    if (i > 0) s += "*a^" + std::to_string(i);
  }
  return s.empty() ? "0" : s;
}

PolyQ cyclotomic_polynomial(long n) {
  static std::map<long, PolyQ> cache;
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  // z^n - 1 divided by the product of Phi_d over proper divisors d of n.
  std::vector<Rational> xn((size_t)n + 1, Rational(0));
  xn[0] = Rational(-1);
  xn[(size_t)n] = Rational(1);
  PolyQ num(std::move(xn));
  for (long d = 1; d < n; ++d)
    if (n % d == 0) num = PolyQ::divrem(num, cyclotomic_polynomial(d)).first;
  cache.emplace(n, num);
  return num;
}

}  // namespace specrec
