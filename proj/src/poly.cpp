#include "specrec/poly.hpp"

#include <set>

namespace specrec {

namespace {

// Divisors of |n| from trial division; if a large cofactor remains
// unfactored it is treated as prime, which can only add (never lose)
// spurious candidates that evaluation then rejects.
std::vector<mpz_class> divisors(mpz_class n) {
  n = abs(n);
  std::vector<std::pair<mpz_class, int>> fac;
  for (long p = 2; p < 1000000 && n > 1; p += (p == 2 ? 1 : 2)) {
    if (n % p == 0) {
      int e = 0;
      while (n % p == 0) {
        n /= p;
        ++e;
      }
      fac.push_back({mpz_class(p), e});
    }
    mpz_class psq = mpz_class(p) * p;
    if (psq > n) break;
  }
  if (n > 1) fac.push_back({n, 1});
  std::vector<mpz_class> divs{1};
  for (auto& [p, e] : fac) {
    size_t base = divs.size();
    mpz_class pe = 1;
    for (int i = 1; i <= e; ++i) {
      pe *= p;
      for (size_t j = 0; j < base; ++j) divs.push_back(divs[j] * pe);
    }
  }
  return divs;
}

}  // namespace

std::vector<Rational> rational_roots(const PolyQ& p, PolyQ* cofactor) {
  std::vector<Rational> roots;
  PolyQ rest = p;
  if (rest.zero() || rest.degree() == 0) {
    if (cofactor) *cofactor = rest;
    return roots;
  }
  // Strip roots at zero.
  while (!rest.zero() && is_zero(rest.coeff(0))) {
    roots.push_back(Rational(0));
    rest = PolyQ::divrem(rest, PolyQ::monomial(1)).first;
  }
  if (rest.degree() >= 1) {
    // Integer-scale: multiply by the lcm of coefficient denominators.
    mpz_class scale = 1;
    for (long i = 0; i <= rest.degree(); ++i)
      mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(),
              rest.coeff(i).get_den().get_mpz_t());
    std::vector<mpz_class> a;
    for (long i = 0; i <= rest.degree(); ++i) {
      Rational c = rest.coeff(i) * Rational(scale);
      a.push_back(c.get_num());
    }
    std::set<Rational> candidates;
    for (const auto& pn : divisors(a.front()))
      for (const auto& qd : divisors(a.back()))
        for (int s : {1, -1}) {
          Rational cand(s * pn, qd);
          cand.canonicalize();
          candidates.insert(cand);
        }
    for (const auto& cand : candidates) {
      while (rest.degree() >= 1 && is_zero(rest.eval(cand))) {
        roots.push_back(cand);
        // Deflate by (z - cand).
        PolyQ lin(std::vector<Rational>{-cand, Rational(1)});
        rest = PolyQ::divrem(rest, lin).first;
      }
    }
  }
  if (cofactor) *cofactor = rest;
  return roots;
}

}  // namespace specrec
