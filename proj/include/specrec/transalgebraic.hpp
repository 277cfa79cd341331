#ifndef SPECREC_TRANSALGEBRAIC_HPP
#define SPECREC_TRANSALGEBRAIC_HPP

#include <map>
#include <memory>
#include <vector>

#include "specrec/correlator.hpp"
#include "specrec/curve.hpp"
#include "specrec/recursion.hpp"

namespace specrec {

// A finite sum of terms f_k(z) * exp(k * M1(z)) with rational-function
// coefficients f_k.  This is the ring in which transalgebraic residue
// integrands live: x = M0 e^{M1} sits at grade 1, meromorphic functions at
// grade 0, and products add grades.
class ExpRational {
 public:
  ExpRational() = default;
  explicit ExpRational(RatFuncQ f, long grade = 0);

  const std::map<long, RatFuncQ>& terms() const { return t_; }
  bool zero() const { return t_.empty(); }
  bool single_grade() const { return t_.size() == 1; }
  long top_grade() const;          // requires nonzero
  RatFuncQ coeff(long grade) const;

  // Keep only the terms of maximal grade.  This is the limit step of the
  // essential-singularity residue: against the dominant exponential order,
  // every strictly lower grade is suppressed by a factor exp(-(positive)) and
  // drops out.
  ExpRational leading_grade() const;

  ExpRational operator-() const;
  friend ExpRational operator+(const ExpRational& a, const ExpRational& b);
  friend ExpRational operator-(const ExpRational& a, const ExpRational& b);
  friend ExpRational operator*(const ExpRational& a, const ExpRational& b);
  // Division by a single-grade element (the only inverses the ring has).
  friend ExpRational operator/(const ExpRational& a, const ExpRational& b);

  bool operator==(const ExpRational& o) const { return t_ == o.t_; }

 private:
  void prune();
  std::map<long, RatFuncQ> t_;  // grade -> coefficient
};

// How solid the essential-singularity formula is for a given input: the
// Bernoulli formula is a theorem for g = 1 and for the plain atlantes family,
// and a (well-tested) conjecture otherwise.
enum class Provenance { Proved, Conjectural };

// The principal part of omega_{g,1} at the essential singularity of a
// transalgebraic curve, as a polynomial part in the outer variable
// (monomial slots z0^j dz0 only).
struct EssentialContribution {
  int g = 0;
  Correlator data;  // n = 1; slots with orbit == -1 only
  Provenance provenance = Provenance::Conjectural;

  bool zero() const { return data.terms.empty(); }
};

// Bernoulli-prefactor formula for the essential-singularity part of
// omega_{g,1}:
//   (2^{1-2g}-1) B_{2g}/(2g)! * Res_{t=inf} (int omega_{0,2}(z0,.))
//                                 dM2(t) (d/dM2(t))^{2g} M1(t),
// with the antiderivative of omega_{0,2} normalized to vanish as z0 -> inf.
// Requires a transalgebraic curve whose only essential singularity is at
// z = infinity (M1 a nonconstant polynomial) with M2 having a pole there.
// Returns a zero contribution whenever the degree count makes the polynomial
// part empty (equivalently 2g * m2 >= m1 + m2).
EssentialContribution essential_contribution(const Curve& c, int g);

// The g = 1 instance evaluated through log x instead of M1 (prefactor -1/24
// against d (d/dM2) log x, which also carries the d log M0 term).  Used to
// cross-check essential_contribution(c, 1).
Correlator essential_contribution_g1_logx(const Curve& c);

// Direct residue formula for the g = 1 essential contribution, evaluated as
// an honest double residue: for each sheet s of M2 through t (the solutions
// of M2(t1) = M2(t)),
//   Res_{t1 = s(t)}  x(t) / (x(t) - x(t1)) * omega_{0,2}(t,t1) / (M2(t) - M2(t1)),
// then the residue at t = infinity against the omega_{0,2} antiderivative.
// The exponential parts are handled in the ExpRational grading; they cancel
// exactly because M1 is required to be a polynomial in M2.  Supports curves
// whose nontrivial M2-sheet set is empty or a single rational sheet (covers
// affine M2 and quadratic monomial M2).
Correlator direct_formula_g1(const Curve& c);

// Full correlator table of a transalgebraic curve up to the Euler
// characteristic bound: finite-orbit recursion plus the essential-singularity
// corrections to the omega_{g,1}.  Throws InputError when a required
// correction is only conjectural and allow_conjectural is not set.
struct TransalgebraicTable {
  std::unique_ptr<RecursionEngine> engine;
  std::map<std::pair<int, int>, Correlator> table;
};

TransalgebraicTable transalgebraic_table(const Curve& c, int max_euler,
                                         bool allow_conjectural = false);

// One finite-N data point: the deepest Laurent coefficient of the (marginal)
// correlator at the ramification point that persists in the N -> inf limit,
// and the magnitude of the principal parts at the N-dependent points that
// collide with the essential singularity.  Floats are for reporting only;
// the recursion behind them is exact.
struct FiniteNSample {
  long N = 0;
  Rational tau;
  int pole_order = 0;
  double coeff = 0.0;
  double colliding = 0.0;
};

struct FiniteNReport {
  int g = 0, n = 0;
  int limit_pole_order = 0;
  double limit_coeff = 0.0;  // same quantity from the transalgebraic table
  std::vector<FiniteNSample> samples;
};

// Runs the full recursion on the meromorphic approximations x_N of a
// transalgebraic curve for each (N, tau) pair and reports convergence data
// toward the transalgebraic correlator.
FiniteNReport finite_n_experiment(const Curve& c, int g, int n,
                                  const std::vector<long>& Ns,
                                  const std::vector<Rational>& taus);

}  // namespace specrec

#endif
