#ifndef SPECREC_RECURSION_HPP
#define SPECREC_RECURSION_HPP

#include <memory>
#include <utility>

#include "specrec/correlator.hpp"
#include "specrec/curve.hpp"

namespace specrec {

// Exact Bouchard-Eynard topological recursion on an admissible genus-zero
// spectral curve.  Correlators are computed once and cached; number-field
// splits discovered mid-computation rebuild the analysis and restart.
class RecursionEngine {
 public:
  explicit RecursionEngine(Curve curve);
  ~RecursionEngine();

  const CurveAnalysis& analysis() const { return *an_; }
  const Curve& curve() const { return curve_; }

  // omega_{g,n} for n >= 1 and 2g - 2 + n > 0.
  const Correlator& correlator(int g, int n);

  // Register an externally computed additive correction to omega_{g,n}
  // (the essential-singularity term of transalgebraic curves).  It is applied
  // on top of the finite-orbit recursion result and feeds into all higher
  // correlators.  Must not reference finite-orbit pole descriptors.
  void add_correction(int g, int n, Correlator delta);

  // Invariant checks; each throws VerificationError with a message on
  // failure.  All operate on the cached correlator for (g, n).
  void verify_symmetry(int g, int n);
  void verify_residueless(int g, int n);
  void verify_pole_bounds(int g, int n);
  // Higher loop equations of every order i = 1..r_a at each participating
  // ramification orbit, with the remaining variables at generic points.
  void verify_loop_equations(int g, int n);
  // The projector Res (integral of B) reproduces omega_{g,n} exactly.
  void verify_projection(int g, int n);

  // Rescaling y by c rescales omega_{g,n} by c^(2-2g-n).
  static void verify_homogeneity(const Curve& curve, int g, int n, const Rational& c);

 private:
  struct Impl;

  Curve curve_;
  std::unique_ptr<CurveAnalysis> an_;
  std::unique_ptr<Impl> impl_;

  void rebuild(const PolyQ& hint);
  template <typename F>
  auto with_restart(F&& f) -> decltype(f());
};

}  // namespace specrec

#endif
