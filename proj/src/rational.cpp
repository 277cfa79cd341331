#include "specrec/rational.hpp"

#include <mutex>
#include <vector>

#include "specrec/error.hpp"

namespace specrec {

std::string rational_to_string(const Rational& q) {
  std::string s = q.get_num().get_str();
  if (q.get_den() != 1) {
    s += "/";
    s += q.get_den().get_str();
  }
  return s;
}

Rational rational_from_string(const std::string& s) {
  if (s.empty()) throw InputError("empty rational literal");
  mpq_class q;
  if (q.set_str(s, 10) != 0)
    throw InputError("malformed rational literal: '" + s + "'");
  if (q.get_den() == 0) throw InputError("zero denominator in '" + s + "'");
  q.canonicalize();
  return q;
}

double to_double(const Rational& q) { return q.get_d(); }

Rational pow_rational(const Rational& q, long e) {
  if (e == 0) return Rational(1);
  bool invert = e < 0;
  unsigned long ue = invert ? -(unsigned long)e : (unsigned long)e;
  mpq_class base = invert ? Rational(1) / q : q;
  mpz_class num, den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num().get_mpz_t(), ue);
  mpz_pow_ui(den.get_mpz_t(), base.get_den().get_mpz_t(), ue);
  Rational out(num, den);
  out.canonicalize();
  return out;
}

Rational factorial(long n) {
  if (n < 0) throw InputError("factorial of negative integer");
  mpz_class f;
  mpz_fac_ui(f.get_mpz_t(), (unsigned long)n);
  return Rational(f);
}

Rational binomial(long n, long k) {
  if (n < 0) throw InputError("binomial with negative n");
  if (k < 0 || k > n) return Rational(0);
  mpz_class b;
  mpz_bin_uiui(b.get_mpz_t(), (unsigned long)n, (unsigned long)k);
  return Rational(b);
}

Rational bernoulli(long n) {
  if (n < 0) throw InputError("Bernoulli number with negative index");
  static std::vector<Rational> cache{Rational(1)};
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  // B_m = -1/(m+1) * sum_{k=0}^{m-1} C(m+1, k) B_k
  while ((long)cache.size() <= n) {
    long m = (long)cache.size();
    Rational acc(0);
    for (long k = 0; k < m; ++k) acc += binomial(m + 1, k) * cache[k];
    cache.push_back(-acc / Rational(m + 1));
  }
  return cache[n];
}

}  // namespace specrec
