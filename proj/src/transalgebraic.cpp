#include "specrec/transalgebraic.hpp"

#include <cmath>
#include <limits>

#include "specrec/error.hpp"
#include "specrec/series.hpp"

namespace specrec {

// ---------------------------------------------------------------------------
// ExpRational

ExpRational::ExpRational(RatFuncQ f, long grade) {
  if (!f.zero()) t_.emplace(grade, std::move(f));
}

void ExpRational::prune() {
  for (auto it = t_.begin(); it != t_.end();)
    it = it->second.zero() ? t_.erase(it) : std::next(it);
}

long ExpRational::top_grade() const {
  if (t_.empty()) throw InputError("top grade of the zero element");
  return t_.rbegin()->first;
}

RatFuncQ ExpRational::coeff(long grade) const {
  auto it = t_.find(grade);
  return it == t_.end() ? RatFuncQ() : it->second;
}

ExpRational ExpRational::leading_grade() const {
  ExpRational r;
  if (!t_.empty()) r.t_.emplace(t_.rbegin()->first, t_.rbegin()->second);
  return r;
}

ExpRational ExpRational::operator-() const {
  ExpRational r = *this;
  for (auto& [k, f] : r.t_) f = -f;
  return r;
}

ExpRational operator+(const ExpRational& a, const ExpRational& b) {
  ExpRational r = a;
  for (const auto& [k, f] : b.t_) {
    auto it = r.t_.find(k);
    if (it == r.t_.end())
      r.t_.emplace(k, f);
    else
      it->second = it->second + f;
  }
  r.prune();
  return r;
}

ExpRational operator-(const ExpRational& a, const ExpRational& b) { return a + (-b); }

ExpRational operator*(const ExpRational& a, const ExpRational& b) {
  ExpRational r;
  for (const auto& [ka, fa] : a.t_)
    for (const auto& [kb, fb] : b.t_) {
      long k = ka + kb;
      RatFuncQ p = fa * fb;
      auto it = r.t_.find(k);
      if (it == r.t_.end())
        r.t_.emplace(k, std::move(p));
      else
        it->second = it->second + p;
    }
  r.prune();
  return r;
}

ExpRational operator/(const ExpRational& a, const ExpRational& b) {
  if (b.zero()) throw InputError("division by the zero ExpRational element");
  if (!b.single_grade())
    throw InputError("ExpRational division requires a single-grade divisor");
  long kb = b.top_grade();
  const RatFuncQ& fb = b.t_.begin()->second;
  ExpRational r;
  for (const auto& [ka, fa] : a.t_) r.t_.emplace(ka - kb, fa / fb);
  r.prune();
  return r;
}

// ---------------------------------------------------------------------------
// shared helpers

namespace {

// Pole order at z = infinity (negative for a zero there).
long inf_order(const RatFuncQ& f) {
  if (f.zero()) throw InputError("infinity order of the zero function");
  return f.num().degree() - f.den().degree();
}

// Polynomial part of the expansion at infinity (the Euclidean quotient).
PolyQ poly_part(const RatFuncQ& f) {
  if (f.zero()) return PolyQ();
  return PolyQ::divrem(f.num(), f.den()).first;
}

// Validates the supported transalgebraic shape: the only essential
// singularity sits at z = infinity (M1 a nonconstant polynomial) and M2 has
// a pole there.  Returns (m1, m2).
std::pair<long, long> essential_shape(const Curve& c) {
  if (!c.transalgebraic_kind())
    throw InputError("essential-singularity formulas need a transalgebraic curve");
  if (!c.M1.is_polynomial() || c.M1.num().degree() < 1)
    throw InputError(
        "only curves whose essential singularity is at z = infinity "
        "(nonconstant polynomial M1) are supported");
  long m1 = c.M1.num().degree();
  long m2 = inf_order(c.M2);
  if (m2 < 1)
    throw InputError("M2 must have a pole at the essential singularity");
  return {m1, m2};
}

// The plain r-atlantes family x = z e^{-z^r}, y = e^{z^r} x^{-1} z^{r-1}...
// detected structurally: M0 = z, M2 = z, M1 = -z^r.  For this family the
// essential-singularity formula is a theorem at every genus.
bool is_plain_atlantes(const Curve& c) {
  RatFuncQ z{PolyQ::monomial(1)};
  if (!(c.M0 == z) || !(c.M2 == z)) return false;
  if (!c.M1.is_polynomial()) return false;
  const PolyQ& p = c.M1.num();
  long r = p.degree();
  if (r < 1 || !(p.lead() == Rational(-1))) return false;
  for (long i = 0; i < r; ++i)
    if (!is_zero(p.coeff(i))) return false;
  return true;
}

// Builds a correlator omega_{g,1} whose infinity part has z0^k-coefficient
// scale * q_k for the polynomial part q of the density w(z) dz, enforcing the
// essential pole-order bound m2(1-2g) + m1 + 1 on the way.
Correlator infinity_part(const RatFuncQ& w, const Rational& scale, int g,
                         long m1, long m2) {
  Correlator out(g, 1);
  PolyQ q = poly_part(w);
  for (long k = 0; k <= q.degree(); ++k) {
    Rational coef = scale * q.coeff(k);
    if (is_zero(coef)) continue;
    if (k + 2 > m2 * (1 - 2L * g) + m1 + 1)
      throw VerificationError(
          "essential-singularity contribution exceeds its pole-order bound");
    out.add({SlotKey{-1, 0, k}}, coef);
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Bernoulli-prefactor formula

EssentialContribution essential_contribution(const Curve& c, int g) {
  if (g < 1) throw InputError("essential contributions start at genus 1");
  auto [m1, m2] = essential_shape(c);
  RatFuncQ dm2 = c.M2.derivative();
  if (dm2.zero()) throw InputError("M2 is constant");
  RatFuncQ w = c.M1;
  for (int i = 0; i < 2 * g; ++i) w = w.derivative() / dm2;  // (d/dM2)^{2g} M1
  w = w * dm2;                                               // times dM2/dz
  Rational pref = (pow_rational(Rational(2), 1 - 2L * g) - 1) * bernoulli(2 * g) /
                  factorial(2 * g);
  // Pairing the density with the omega_{0,2} antiderivative -dz0/(z0-t) and
  // taking the residue at infinity keeps exactly the polynomial part of the
  // expansion at infinity, with an overall minus sign.
  EssentialContribution out;
  out.g = g;
  out.data = infinity_part(w, -pref, g, m1, m2);
  out.provenance =
      (g == 1 || is_plain_atlantes(c)) ? Provenance::Proved : Provenance::Conjectural;
  return out;
}

Correlator essential_contribution_g1_logx(const Curve& c) {
  auto [m1, m2] = essential_shape(c);
  RatFuncQ dm2 = c.M2.derivative();
  if (dm2.zero()) throw InputError("M2 is constant");
  // -1/24 * Res (int omega_{0,2}) d (d/dM2) log x, with d log x = dlogx dz.
  RatFuncQ v = (c.dlogx() / dm2).derivative();
  return infinity_part(v, frac(1, 24), 1, m1, m2);
}

// ---------------------------------------------------------------------------
// Direct residue formula for g = 1

namespace {

using RF = RatFuncQ;
using KS = LSeries<RF>;

// Expresses M1 as a polynomial in M2 (throws when impossible): exact linear
// solve of sum_k p_k n2^k d2^{D-k} = M1 * d2^D in the coefficients p_k.
PolyQ as_polynomial_in(const RatFuncQ& M1, const RatFuncQ& M2) {
  long m1 = M1.num().degree();
  long m2 = inf_order(M2);
  if (m2 < 1 || m1 % m2 != 0)
    throw InputError("M1 is not a polynomial function of M2");
  long D = m1 / m2;
  std::vector<PolyQ> cols((size_t)D + 1);
  for (long k = 0; k <= D; ++k)
    cols[(size_t)k] = M2.num().pow(k) * M2.den().pow(D - k);
  PolyQ rhs = M1.num() * M2.den().pow(D);
  long rows = rhs.degree();
  for (const auto& col : cols) rows = std::max(rows, col.degree());
  ++rows;
  std::vector<std::vector<Rational>> A((size_t)rows,
                                       std::vector<Rational>((size_t)D + 2));
  for (long r = 0; r < rows; ++r) {
    for (long k = 0; k <= D; ++k) A[(size_t)r][(size_t)k] = cols[(size_t)k].coeff(r);
    A[(size_t)r][(size_t)D + 1] = rhs.coeff(r);
  }
  std::vector<long> pivot_col;
  long rank = 0;
  for (long col = 0; col <= D && rank < rows; ++col) {
    long piv = -1;
    for (long r = rank; r < rows; ++r)
      if (!is_zero(A[(size_t)r][(size_t)col])) {
        piv = r;
        break;
      }
    if (piv < 0) continue;
    std::swap(A[(size_t)rank], A[(size_t)piv]);
    Rational lead = A[(size_t)rank][(size_t)col];
    for (auto& x : A[(size_t)rank]) x /= lead;
    for (long r = 0; r < rows; ++r) {
      if (r == rank) continue;
      Rational f = A[(size_t)r][(size_t)col];
      if (is_zero(f)) continue;
      for (long k = col; k <= D + 1; ++k)
        A[(size_t)r][(size_t)k] -= f * A[(size_t)rank][(size_t)k];
    }
    pivot_col.push_back(col);
    ++rank;
  }
  for (long r = rank; r < rows; ++r)
    if (!is_zero(A[(size_t)r][(size_t)D + 1]))
      throw InputError("M1 is not a polynomial function of M2");
  std::vector<Rational> p((size_t)D + 1);
  for (long i = 0; i < rank; ++i)
    p[(size_t)pivot_col[(size_t)i]] = A[(size_t)i][(size_t)D + 1];
  return PolyQ(std::move(p));
}

// Nontrivial solutions t1(t) of M2(t1) = M2(t), as rational functions of t.
// The sheet polynomial over Q(t) always has the root t1 = t; the supported
// shapes leave at most one further (rational) root after dividing it out.
std::vector<RF> nontrivial_m2_sheets(const RatFuncQ& M2) {
  const PolyQ &n2 = M2.num(), &d2 = M2.den();
  RF n2t(n2), d2t(d2);
  long deg = std::max(n2.degree(), d2.degree());
  std::vector<RF> coef((size_t)deg + 1);
  for (long i = 0; i <= deg; ++i)
    coef[(size_t)i] = RF(PolyQ(n2.coeff(i))) * d2t - RF(PolyQ(d2.coeff(i))) * n2t;
  Poly<RF> sheet_poly{std::move(coef)};
  Poly<RF> lin{std::vector<RF>{-RF(PolyQ::monomial(1)), RF(Rational(1))}};
  auto [quot, rem] = Poly<RF>::divrem(sheet_poly, lin);
  if (!rem.zero())
    throw VerificationError("sheet polynomial is not divisible by t1 - t");
  if (quot.degree() <= 0) return {};
  if (quot.degree() == 1) return {-quot.coeff(0) / quot.coeff(1)};
  throw InputError(
      "unsupported M2: more than one nontrivial sheet of M2(t1) = M2(t)");
}

}  // namespace

Correlator direct_formula_g1(const Curve& c) {
  auto [m1, m2] = essential_shape(c);
  (void)as_polynomial_in(c.M1, c.M2);  // hypothesis of the formula
  const long ORD = 8;
  RF idrf{PolyQ::monomial(1)};
  auto lift = [](const Rational& q) { return RF(PolyQ(q)); };
  std::vector<RF> sheets{idrf};
  for (auto& s : nontrivial_m2_sheets(c.M2)) sheets.push_back(s);

  RF density;
  for (const RF& sig : sheets) {
    // Exponential bookkeeping at the sheet: x(t) and x(t1)|_{t1 = sig(t)}
    // both sit at grade 1 of the ExpRational ring (M1(sig(t)) = M1(t) because
    // M1 is a polynomial in M2), so x(t) - x(t1) is single-grade at u = 0 and
    // the residue integrand below is genuinely meromorphic: the w -> 0 limit
    // of the defining formula reduces to an ordinary residue.
    ExpRational x_t(c.M0, 1);
    ExpRational x_sheet0(c.M0.compose(sig), 1);
    ExpRational den0 = x_t - x_sheet0;
    if (!den0.zero() && !den0.single_grade())
      throw VerificationError("mixed exponential grades on an M2-sheet");

    // Series in the local coordinate u with t1 = sig(t) + u; coefficients are
    // rational functions of t.
    KS t1s(0, {sig, RF(Rational(1))}, ORD);
    KS dm1 = eval_ratfunc(c.M1, t1s, lift) - KS::constant(c.M1, ORD);
    if (dm1.valuation() < 1)
      throw InputError("M1 is not constant along the M2-sheet");
    KS expfac = dm1.expo();  // e^{M1(t1) - M1(t)}, an honest power series
    KS m0t1 = eval_ratfunc(c.M0, t1s, lift);
    // x(t) / (x(t) - x(t1)) after cancelling the common factor e^{M1(t)}.
    KS ratio = KS::constant(c.M0, ORD) / (KS::constant(c.M0, ORD) - m0t1 * expfac);
    KS dm2 = eval_ratfunc(c.M2, t1s, lift) - KS::constant(c.M2, ORD);
    KS w02;  // omega_{0,2}(t, t1) / (dt dt1) = 1 / (t - t1)^2
    if (sig == idrf) {
      w02 = KS::monomial(RF(Rational(1)), -2, ORD);
    } else {
      KS diff(0, {sig - idrf, RF(Rational(1))}, ORD);
      w02 = diff.pow_int(-2);
    }
    KS integrand = ratio * w02 * (-dm2).inverse();
    density = density + integrand.coeff(-1);
  }
  // Pair with the omega_{0,2} antiderivative and take the residue at
  // infinity: the z0^k-coefficient is the t^k-coefficient of the density.
  return infinity_part(density, Rational(1), 1, m1, m2);
}

// ---------------------------------------------------------------------------
// Full table

TransalgebraicTable transalgebraic_table(const Curve& c, int max_euler,
                                         bool allow_conjectural) {
  if (!c.transalgebraic_kind())
    throw InputError("transalgebraic_table needs a transalgebraic curve");
  if (max_euler < 1) throw InputError("max_euler must be at least 1");
  TransalgebraicTable out;
  out.engine = std::make_unique<RecursionEngine>(c);
  for (int g = 1; 2 * g - 1 <= max_euler; ++g) {
    EssentialContribution ec = essential_contribution(c, g);
    if (ec.zero()) continue;
    if (ec.provenance == Provenance::Conjectural && !allow_conjectural)
      throw InputError(
          "omega_{" + std::to_string(g) +
          ",1} needs the essential-singularity formula outside its proven "
          "cases; pass allow_conjectural to proceed");
    out.engine->add_correction(g, 1, ec.data);
  }
  for (int chi = 1; chi <= max_euler; ++chi)
    for (int g = 0; 2 * g <= chi + 1; ++g) {
      int n = chi + 2 - 2 * g;
      if (n < 1) continue;
      out.table[{g, n}] = out.engine->correlator(g, n);
    }
  return out;
}

// ---------------------------------------------------------------------------
// Finite-N experiment

namespace {

double evalp_d(const PolyQ& p, double x) {
  double acc = 0.0;
  for (long i = p.degree(); i >= 0; --i) acc = acc * x + to_double(p.coeff(i));
  return acc;
}

// Real roots of a squarefree rational polynomial, by sign-change scan and
// bisection.  Reporting-grade accuracy only.
std::vector<double> real_roots_numeric(const PolyQ& p) {
  std::vector<double> roots;
  if (p.degree() < 1) return roots;
  double bound = 1.0;
  for (long i = 0; i < p.degree(); ++i)
    bound = std::max(bound, std::fabs(to_double(p.coeff(i) / p.lead())));
  bound += 1.0;
  const int steps = 8000;
  double prev_x = -bound, prev_f = evalp_d(p, prev_x);
  for (int s = 1; s <= steps; ++s) {
    double x = -bound + 2.0 * bound * s / steps;
    double f = evalp_d(p, x);
    if (prev_f == 0.0) roots.push_back(prev_x);
    if ((prev_f < 0.0) != (f < 0.0) && prev_f != 0.0 && f != 0.0) {
      double a = prev_x, b = x, fa = prev_f;
      for (int it = 0; it < 200; ++it) {
        double m = 0.5 * (a + b), fm = evalp_d(p, m);
        if ((fm < 0.0) == (fa < 0.0)) {
          a = m;
          fa = fm;
        } else {
          b = m;
        }
      }
      roots.push_back(0.5 * (a + b));
    }
    prev_x = x;
    prev_f = f;
  }
  return roots;
}

// z0-marginal of a correlator: the remaining variables are fixed at a generic
// rational point away from every pole.
std::map<SlotKey, double> z0_marginal(const Correlator& w, const CurveAnalysis& an) {
  Rational zeta = frac(17, 5);
  for (;;) {
    bool ok = true;
    for (const auto& o : an.orbits())
      if (!o.at_infinity && o.modulus.degree() >= 1 && is_zero(o.modulus.eval(zeta)))
        ok = false;
    if (ok) break;
    zeta += frac(7, 3);
  }
  std::map<SlotKey, double> m;
  for (const auto& [tuple, c] : w.terms) {
    double v = to_double(c);
    for (size_t s = 1; s < tuple.size(); ++s)
      v *= to_double(slot_scalar(tuple[s], an).eval(zeta));
    m[tuple[0]] += v;
  }
  return m;
}

// Deepest Laurent coefficient of the marginal at the given orbit, evaluated
// at the numeric root alpha of its modulus.  Only the terms at the maximal
// pole order contribute to that coefficient.
bool deepest_at_orbit(const std::map<SlotKey, double>& marg, const CurveAnalysis& an,
                      size_t oi, double alpha, int* order, double* coeff) {
  int kmax = 0;
  for (const auto& [k, v] : marg) {
    (void)v;
    if (k.orbit == (int)oi) kmax = std::max(kmax, k.k);
  }
  if (kmax == 0) return false;
  const PolyQ& mod = an.orbits()[oi].modulus;
  double dp = evalp_d(mod.derivative(), alpha);
  double acc = 0.0;
  for (const auto& [k, v] : marg)
    if (k.orbit == (int)oi && k.k == kmax) acc += v * std::pow(alpha, (double)k.j);
  *order = kmax;
  *coeff = acc / std::pow(dp, (double)kmax);
  return true;
}

}  // namespace

FiniteNReport finite_n_experiment(const Curve& c, int g, int n,
                                  const std::vector<long>& Ns,
                                  const std::vector<Rational>& taus) {
  if (!c.transalgebraic_kind())
    throw InputError("finite_n_experiment needs a transalgebraic curve");
  if (Ns.empty() || taus.empty()) throw InputError("empty experiment grid");
  for (long N : Ns)
    if (N < 2 || N > 5)
      throw InputError("finite-N guard: N must lie in [2, 5]");
  int chi = 2 * g - 2 + n;
  if (chi < 1) throw InputError("experiment needs a stable (g, n)");

  FiniteNReport rep;
  rep.g = g;
  rep.n = n;

  // Limit data from the transalgebraic table, tracked at the first finite
  // participating orbit with a real ramification point.
  TransalgebraicTable tab = transalgebraic_table(c, chi, true);
  const CurveAnalysis& an0 = tab.engine->analysis();
  double target = std::numeric_limits<double>::quiet_NaN();
  for (size_t i = 0; i < an0.orbits().size(); ++i) {
    const RamOrbit& o = an0.orbits()[i];
    if (!o.participates() || o.at_infinity) continue;
    auto roots = real_roots_numeric(o.modulus);
    if (roots.empty()) continue;
    target = roots.front();
    auto marg = z0_marginal(tab.table.at({g, n}), an0);
    deepest_at_orbit(marg, an0, i, target, &rep.limit_pole_order, &rep.limit_coeff);
    break;
  }
  if (std::isnan(target))
    throw InputError("no real finite ramification point to track");

  for (long N : Ns) {
    for (const Rational& tau : taus) {
      Curve cn = finite_N_curve(c, N, tau);
      RecursionEngine eng(cn);
      const Correlator& w = eng.correlator(g, n);
      const CurveAnalysis& an = eng.analysis();
      auto marg = z0_marginal(w, an);

      // Tracked orbit: real ramification point closest to the limit point.
      long best_orbit = -1;
      double best_root = 0.0, best_dist = std::numeric_limits<double>::infinity();
      std::vector<std::pair<size_t, double>> others;
      for (size_t i = 0; i < an.orbits().size(); ++i) {
        const RamOrbit& o = an.orbits()[i];
        if (!o.participates() || o.at_infinity) continue;
        double near = std::numeric_limits<double>::quiet_NaN();
        double far = 0.0;
        for (double r : real_roots_numeric(o.modulus)) {
          if (std::isnan(near) || std::fabs(r - target) < std::fabs(near - target))
            near = r;
          if (std::fabs(r) > std::fabs(far)) far = r;
        }
        if (std::isnan(near)) continue;
        if (std::fabs(near - target) < best_dist) {
          best_dist = std::fabs(near - target);
          best_orbit = (long)i;
          best_root = near;
        }
        others.emplace_back(i, far);
      }
      FiniteNSample sample;
      sample.N = N;
      sample.tau = tau;
      if (best_orbit >= 0)
        deepest_at_orbit(marg, an, (size_t)best_orbit, best_root, &sample.pole_order,
                         &sample.coeff);
      for (auto& [oi, root] : others) {
        if ((long)oi == best_orbit) continue;
        int order = 0;
        double coeff = 0.0;
        if (deepest_at_orbit(marg, an, oi, root, &order, &coeff))
          sample.colliding = std::max(sample.colliding, std::fabs(coeff));
      }
      rep.samples.push_back(sample);
    }
  }
  return rep;
}

}  // namespace specrec
