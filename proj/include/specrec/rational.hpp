#ifndef SPECREC_RATIONAL_HPP
#define SPECREC_RATIONAL_HPP

#include <gmpxx.h>

#include <string>

namespace specrec {

// Exact rational numbers.  GMP's mpq_class already provides canonicalized
// arbitrary-precision fractions with full operator overloads, so we use it
// directly and only add the helpers the rest of the code needs.
using Rational = mpq_class;

inline bool is_zero(const Rational& q) { return sgn(q) == 0; }

inline Rational frac(long num, long den) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

// Canonical "p/q" rendering ("p" alone when q == 1), used by the JSON layer.
std::string rational_to_string(const Rational& q);

// Parses "p", "p/q", or "-p/q".  Throws InputError on malformed input.
Rational rational_from_string(const std::string& s);

double to_double(const Rational& q);

// q^e for integer e (negative allowed; q must be nonzero then).
Rational pow_rational(const Rational& q, long e);

Rational factorial(long n);

// Binomial coefficient C(n, k) for n >= 0; zero outside 0 <= k <= n.
Rational binomial(long n, long k);

// Bernoulli number B_n (B_1 = -1/2 convention), memoized.
Rational bernoulli(long n);

}  // namespace specrec

#endif
