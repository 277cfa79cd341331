#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "specrec/numberfield.hpp"
#include "specrec/poly.hpp"
#include "specrec/rational.hpp"
#include "specrec/series.hpp"

using namespace specrec;

namespace {

PolyQ random_poly(std::mt19937& rng, int maxdeg) {
  std::uniform_int_distribution<int> d(-6, 6), deg(0, maxdeg);
  std::vector<Rational> c((size_t)deg(rng) + 1);
  for (auto& x : c) x = frac(d(rng), 1 + std::abs(d(rng)));
  return PolyQ(std::move(c));
}

LSeries<Rational> random_series(std::mt19937& rng, long lo, long ord) {
  std::uniform_int_distribution<int> d(-5, 5);
  std::vector<Rational> c((size_t)(ord - lo));
  for (auto& x : c) x = frac(d(rng), 1 + std::abs(d(rng)));
  return LSeries<Rational>(lo, std::move(c), ord);
}

}  // namespace

TEST_CASE("rational string round trip and helpers") {
  CHECK(rational_to_string(frac(-3, 6)) == "-1/2");
  CHECK(rational_to_string(Rational(7)) == "7");
  CHECK(rational_from_string("22/-11") == Rational(-2));
  CHECK_THROWS_AS(rational_from_string("1/0"), InputError);
  CHECK_THROWS_AS(rational_from_string("abc"), InputError);
  CHECK(pow_rational(frac(2, 3), -2) == frac(9, 4));
  CHECK(factorial(6) == Rational(720));
  CHECK(binomial(7, 3) == Rational(35));
  CHECK(binomial(4, 9) == Rational(0));
}

TEST_CASE("Bernoulli numbers") {
  CHECK(bernoulli(0) == Rational(1));
  CHECK(bernoulli(1) == frac(-1, 2));
  CHECK(bernoulli(2) == frac(1, 6));
  CHECK(bernoulli(3) == Rational(0));
  CHECK(bernoulli(4) == frac(-1, 30));
  CHECK(bernoulli(12) == frac(-691, 2730));
}

TEST_CASE("polynomial division and gcd properties") {
  std::mt19937 rng(42);
  for (int iter = 0; iter < 50; ++iter) {
    PolyQ a = random_poly(rng, 6), b = random_poly(rng, 4);
    if (b.zero()) continue;
    auto [q, r] = PolyQ::divrem(a, b);
    CHECK(q * b + r == a);
    CHECK(r.degree() < b.degree());
    // gcd divides both and xgcd certifies it
    PolyQ g = PolyQ::gcd(a, b);
    if (!g.zero()) {
      CHECK(PolyQ::divrem(a, g).second.zero());
      CHECK(PolyQ::divrem(b, g).second.zero());
    }
    auto [g2, u, v] = PolyQ::xgcd(a, b);
    CHECK(u * a + v * b == g2);
    CHECK(g2 == g);
  }
  // a common factor is found
  PolyQ f(std::vector<Rational>{Rational(1), Rational(2), Rational(1)});  // (z+1)^2
  PolyQ p1 = f * random_poly(rng, 3), p2 = f * random_poly(rng, 2);
  if (!p1.zero() && !p2.zero()) {
    PolyQ g = PolyQ::gcd(p1, p2);
    CHECK(PolyQ::divrem(g, PolyQ(std::vector<Rational>{Rational(1), Rational(1)}))
              .second.zero());
  }
}

TEST_CASE("squarefree part and rational roots") {
  // p = (z-1)^2 (z+2/3) (z^2+1)
  PolyQ zm1(std::vector<Rational>{Rational(-1), Rational(1)});
  PolyQ zp23(std::vector<Rational>{frac(2, 3), Rational(1)});
  PolyQ z2p1(std::vector<Rational>{Rational(1), Rational(0), Rational(1)});
  PolyQ p = zm1 * zm1 * zp23 * z2p1;
  PolyQ sf = squarefree_part(p);
  CHECK(sf == zm1 * zp23 * z2p1);
  PolyQ cof;
  auto roots = rational_roots(p, &cof);
  std::sort(roots.begin(), roots.end());
  REQUIRE(roots.size() == 3);
  CHECK(roots[0] == frac(-2, 3));
  CHECK(roots[1] == Rational(1));
  CHECK(roots[2] == Rational(1));
  CHECK(cof.degree() == 2);
  CHECK(is_zero(cof.coeff(1)));
}

TEST_CASE("rational function arithmetic and composition") {
  PolyQ num(std::vector<Rational>{Rational(0), Rational(1)});          // z
  PolyQ den(std::vector<Rational>{Rational(-1), Rational(0), Rational(1)});  // z^2-1
  RatFuncQ f(num, den);
  RatFuncQ s = f + f;
  CHECK(s.num() == PolyQ(std::vector<Rational>{Rational(0), Rational(2)}));
  RatFuncQ prod = f * f;
  CHECK(prod.den() == den * den);
  // compose f with 1/w: f(1/w) = w/(1-w^2)
  RatFuncQ inv(PolyQ(Rational(1)), PolyQ(std::vector<Rational>{Rational(0), Rational(1)}));
  RatFuncQ g = f.compose(inv);
  CHECK(g == RatFuncQ(PolyQ(std::vector<Rational>{Rational(0), Rational(-1)}),
                      PolyQ(std::vector<Rational>{Rational(-1), Rational(0), Rational(1)})));
  // derivative satisfies quotient rule against series expansion
  std::mt19937 rng(7);
  LSeries<Rational> x = random_series(rng, 1, 9) + LSeries<Rational>::var(9);
  auto conv = [](const Rational& c) { return c; };
  if (x.valuation() == 1) {
    LSeries<Rational> fv = eval_ratfunc(f, x, conv);
    LSeries<Rational> dfv = eval_ratfunc(f.derivative(), x, conv) * x.derivative();
    CHECK(fv.derivative().coeff(3) == dfv.coeff(3));
  }
}

TEST_CASE("number field arithmetic in Q(sqrt2)") {
  NumberField F(PolyQ(std::vector<Rational>{Rational(-2), Rational(0), Rational(1)}), "sqrt2");
  FE a = FE::gen(&F);
  FE one(1);
  CHECK(is_zero(a * a - FE(Rational(2))));
  FE x = one + a;            // 1 + sqrt2
  FE y = one - a;            // 1 - sqrt2
  CHECK(x * y == FE(-1));
  CHECK(x.inverse() * x == one);
  // traces: Tr(1) = 2, Tr(a) = 0, Tr(a^2) = 4, Tr(3 + a) = 6
  CHECK(F.power_sum(0) == Rational(2));
  CHECK(F.power_sum(1) == Rational(0));
  CHECK(F.power_sum(2) == Rational(4));
  CHECK((FE(3) + a).trace() == Rational(6));
  CHECK((a * a * a).trace() == Rational(0));
}

TEST_CASE("zero divisors trigger a split request") {
  // modulus (z-1)(z+2) = z^2 + z - 2 is squarefree but reducible
  NumberField F(PolyQ(std::vector<Rational>{Rational(-2), Rational(1), Rational(1)}), "split");
  FE a = FE::gen(&F);
  FE zdiv = a - FE(1);
  bool split = false;
  try {
    (void)is_zero(zdiv);
  } catch (const SplitRequest& s) {
    split = true;
    CHECK(s.factor.degree() == 1);
    CHECK(PolyQ::divrem(F.modulus, s.factor).second.zero());
  }
  CHECK(split);
  CHECK_THROWS_AS(zdiv.inverse(), SplitRequest);
}

TEST_CASE("cyclotomic polynomials") {
  CHECK(cyclotomic_polynomial(1) == PolyQ(std::vector<Rational>{Rational(-1), Rational(1)}));
  CHECK(cyclotomic_polynomial(4) == PolyQ(std::vector<Rational>{Rational(1), Rational(0), Rational(1)}));
  CHECK(cyclotomic_polynomial(6) == PolyQ(std::vector<Rational>{Rational(1), Rational(-1), Rational(1)}));
  CHECK(cyclotomic_polynomial(12).degree() == 4);
  // a primitive 3rd root of unity in its field really has order 3
  NumberField F(cyclotomic_polynomial(3), "zeta3");
  FE w = FE::gen(&F);
  CHECK(is_zero(w * w * w - FE(1)));
  CHECK(!is_zero(w - FE(1)));
}

TEST_CASE("series arithmetic round trips") {
  std::mt19937 rng(11);
  for (int iter = 0; iter < 30; ++iter) {
    LSeries<Rational> a = random_series(rng, -3, 8);
    if (!a.known_nonzero()) continue;
    LSeries<Rational> b = a.inverse() * a;
    // a * (1/a) = 1 on the guaranteed window
    CHECK(b.coeff(0) == Rational(1));
    for (long e = 1; e < b.order(); ++e) CHECK(b.coeff(e) == Rational(0));
    // derivative of product
    LSeries<Rational> c = random_series(rng, 0, 8);
    LSeries<Rational> lhs = (a * c).derivative();
    LSeries<Rational> rhs = a.derivative() * c + a * c.derivative();
    for (long e = std::max(lhs.lo(), rhs.lo()); e < std::min(lhs.order(), rhs.order()); ++e)
      CHECK(lhs.coeff(e) == rhs.coeff(e));
  }
}

TEST_CASE("series truncation order is enforced") {
  LSeries<Rational> a = LSeries<Rational>::var(5);
  CHECK_THROWS_AS(a.coeff(5), PrecisionError);
  LSeries<Rational> b = a.truncated(3);
  CHECK_THROWS_AS(b.coeff(4), PrecisionError);
  // multiplication shrinks the window correctly: t^2 * O-window 3
  LSeries<Rational> c = a * a;
  CHECK(c.coeff(2) == Rational(1));
  CHECK_THROWS_AS(c.coeff(6), PrecisionError);
}

TEST_CASE("series exp/log inverse pair") {
  std::mt19937 rng(13);
  LSeries<Rational> s = random_series(rng, 1, 10);
  LSeries<Rational> e = s.expo();
  CHECK(e.coeff(0) == Rational(1));
  LSeries<Rational> back = e.log1();
  for (long k = 1; k < back.order(); ++k) CHECK(back.coeff(k) == s.coeff(k));
}

TEST_CASE("series composition") {
  // (1/(1-t)) o (t + t^2) has coefficients of sum_{k} (t+t^2)^k
  long N = 8;
  std::vector<Rational> geo((size_t)N, Rational(1));
  LSeries<Rational> outer(0, std::move(geo), N);
  LSeries<Rational> inner = LSeries<Rational>::var(N) + LSeries<Rational>::monomial(Rational(1), 2, N);
  LSeries<Rational> comp = outer.compose(inner);
  // brute force oracle
  LSeries<Rational> acc = LSeries<Rational>::constant(Rational(1), N);
  LSeries<Rational> pw = LSeries<Rational>::constant(Rational(1), N);
  for (int k = 1; k < N; ++k) {
    pw = pw * inner;
    acc = acc + pw;
  }
  for (long e = 0; e < comp.order(); ++e) CHECK(comp.coeff(e) == acc.coeff(e));
}

TEST_CASE("Lagrange inversion against the classical coefficient formula") {
  // s = t - t^2: inverse has Catalan number coefficients
  long N = 10;
  LSeries<Rational> s = LSeries<Rational>::var(N) - LSeries<Rational>::monomial(Rational(1), 2, N);
  LSeries<Rational> u = lagrange_invert(s);
  LSeries<Rational> check = s.compose(u);
  CHECK(check.coeff(1) == Rational(1));
  for (long e = 2; e < check.order(); ++e) CHECK(check.coeff(e) == Rational(0));
  CHECK(u.coeff(1) == Rational(1));
  CHECK(u.coeff(2) == Rational(1));
  CHECK(u.coeff(3) == Rational(2));
  CHECK(u.coeff(4) == Rational(5));
  CHECK(u.coeff(5) == Rational(14));

  // independent oracle: [t^n] u = (1/n) [t^(n-1)] (t/s)^n, on a second curve
  std::mt19937 rng(3);
  LSeries<Rational> s2 = LSeries<Rational>::var(N) + random_series(rng, 2, N);
  LSeries<Rational> u2 = lagrange_invert(s2);
  LSeries<Rational> ratio = LSeries<Rational>::var(N) / s2;  // t/s, valuation 0
  for (long n = 1; n < 8; ++n) {
    Rational classical = ratio.pow_int(n).coeff(n - 1) / Rational(n);
    CHECK(u2.coeff(n) == classical);
  }
}

TEST_CASE("S-function series") {
  LSeries<Rational> S = sfun_series(8);
  CHECK(S.coeff(0) == Rational(1));
  CHECK(S.coeff(1) == Rational(0));
  CHECK(S.coeff(2) == frac(1, 24));
  CHECK(S.coeff(4) == frac(1, 1920));
  CHECK(S.coeff(6) == frac(1, 322560));
}
