#ifndef SPECREC_CURVE_HPP
#define SPECREC_CURVE_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "specrec/numberfield.hpp"
#include "specrec/poly.hpp"
#include "specrec/series.hpp"

namespace specrec {

// A genus-zero spectral curve, parametrized by the global coordinate z on P^1.
//
//  - meromorphic:     x, y rational functions of z
//  - transalgebraic:  x = M0 * exp(M1), y = M2 / x with M0, M1, M2 rational;
//                     poles of M1 are exponential (essential) singularities.
struct Curve {
  enum class Kind { Meromorphic, Transalgebraic };
  Kind kind = Kind::Meromorphic;
  std::string name;

  // Meromorphic data.
  RatFuncQ x, y;

  // Transalgebraic data.
  RatFuncQ M0, M1, M2;

  static Curve meromorphic(RatFuncQ x, RatFuncQ y, std::string name = "");
  static Curve transalgebraic(RatFuncQ M0, RatFuncQ M1, RatFuncQ M2,
                              std::string name = "");

  // The (q, r) orbifold atlantes family: x = z e^{-z^(qr)}, y = z^(q-1) e^{z^(qr)},
  // i.e. M0 = z, M1 = -z^(qr), M2 = z^q.  q = 1 gives the plain r-atlantes curve.
  static Curve atlantes(int r, int q = 1);

  bool transalgebraic_kind() const { return kind == Kind::Transalgebraic; }

  // xy -- rational for both kinds.
  RatFuncQ xy() const;
  // d(log x)/dz as a rational function: x'/x resp. M0'/M0 + M1'.
  RatFuncQ dlogx() const;
  // y dx = f(z) dz with f rational: y x' resp. M2 * dlogx.
  RatFuncQ ydx() const;

  // Scale y (resp. M2) by a rational constant; used by homogeneity checks.
  Curve with_scaled_y(const Rational& c) const;

  // Canonical serialization (also the cache-key material).
  std::string serialize() const;
};

// A Galois orbit of ramification points: either the single point at infinity,
// or all roots of a monic squarefree modulus.  Orbits whose roots behave
// differently are split during analysis (dynamic evaluation), so the stored
// local invariants (r, s) are uniform across the orbit.
struct RamOrbit {
  bool at_infinity = false;
  PolyQ modulus;  // finite orbits only; monic squarefree

  bool essential = false;  // pole of M1: infinite ramification order
  int r = 0;               // local ramification order (essential: unused)
  long s = 0;              // local exponent s_a (essential: unused)
  bool m2_pole = false;    // essential orbits: does M2 have a pole here?

  // Does the Bouchard-Eynard residue sum pick this orbit up?
  bool participates() const { return !essential && s >= 1; }
  bool admissible() const;

  std::string label() const;
};

class LocalFrame;

// Full local analysis of a curve: ramification orbits with their invariants,
// owned number fields, and chart/deck-transformation access for the engine.
class CurveAnalysis {
 public:
  // split_hints: polynomials whose gcd with a candidate orbit modulus forces
  // that orbit to be subdivided (used when a later computation discovers a
  // zero divisor and the analysis must be redone on finer orbits).
  explicit CurveAnalysis(Curve curve, std::vector<PolyQ> split_hints = {});

  const Curve& curve() const { return curve_; }
  const std::vector<RamOrbit>& orbits() const { return orbits_; }
  bool admissible() const;
  // Human/JSON-facing admissibility diagnostics per orbit.
  std::string report() const;

  // A frame for orbit index i (must not be essential).  Frames borrow the
  // analysis' number fields; keep the analysis alive while using them.
  const LocalFrame& frame(size_t orbit_index) const;

  const NumberField* intern_field(PolyQ modulus, const std::string& label);

 private:
  void run();

  Curve curve_;
  std::vector<PolyQ> split_hints_;
  std::vector<RamOrbit> orbits_;
  std::vector<std::unique_ptr<LocalFrame>> frames_;  // parallel to orbits_
  std::vector<std::unique_ptr<NumberField>> fields_;
};

// Chart and deck-transformation machinery at one ramification orbit.
// Local coordinate t: z = alpha + t at a finite representative root alpha,
// z = 1/t at infinity.
class LocalFrame {
 public:
  LocalFrame(const Curve* curve, const RamOrbit* orbit, const NumberField* orbit_field,
             CurveAnalysis* owner);

  const NumberField* field() const { return K_; }
  const FE& alpha() const { return alpha_; }
  const FE& theta() const { return theta_; }  // primitive r-th root of unity
  int r() const { return r_; }
  bool at_infinity() const { return orbit_->at_infinity; }
  const RamOrbit& orbit() const { return *orbit_; }

  // z(t) for the identity sheet (deck 0) or deck i in 1..r-1, as a series in
  // the local coordinate with coefficients in field().
  LSeries<FE> point(int deck, long ord) const;
  // d z(t) / dt for the same sheet.
  LSeries<FE> dz(int deck, long ord) const;
  // The deck transformation itself, sigma_i(t) with sigma_0 = t.
  LSeries<FE> deck(int i, long ord) const;

  // Evaluate a Q-rational function along a sheet.
  LSeries<FE> eval(const RatFuncQ& f, int deck, long ord) const;
  // Evaluate at an arbitrary z-series.
  LSeries<FE> eval_at(const RatFuncQ& f, const LSeries<FE>& z) const;

  // y dx pulled back along deck i, as a scalar series (the dt is implicit).
  LSeries<FE> ydx_pullback(int deck, long ord) const;

  // One kernel denominator factor (y(z) - y(sigma_i(z))) * dx(z), scalarized.
  // For transalgebraic curves this is computed as (M2(z) - M2(sigma_i z)) * dlog x,
  // which cancels the exponential parts exactly.  This ordering is the one
  // consistent with the higher loop equations when omega_{0,1} = y dx: with
  // the opposite ordering the order-2 loop equation for the quadratic curve
  // fails by an exact constant.
  LSeries<FE> kernel_factor(int deck_i, long ord) const;

  // Determine (r, s); called by the analysis.
  void compute_invariants(int* r_out, long* s_out);

  // Analysis-internal: repoint at the orbit's final storage location.
  void rebind(const RamOrbit* orbit) { orbit_ = orbit; }

 private:
  LSeries<FE> phi(const LSeries<FE>& t_arg) const;   // local data, valuation r
  LSeries<FE> dphi(const LSeries<FE>& t_arg) const;  // its t-derivative
  LSeries<FE> solve_deck(int i, long ord) const;
  LSeries<FE> chart_of(const LSeries<FE>& s) const;  // alpha + s or 1/s

  const Curve* curve_;
  const RamOrbit* orbit_;
  const NumberField* K_ = nullptr;
  CurveAnalysis* owner_;
  FE alpha_;
  FE theta_;
  int r_ = 0;
  // Order of x at the point: 0 for a finite nonzero limit of x (resp. M0),
  // +m for a zero of order m, -m for a pole of order m.
  long xord_ = 0;
  FE xval_;  // x(alpha) (resp. M0(alpha)) when xord_ == 0, else the leading coeff
  mutable std::vector<std::pair<long, LSeries<FE>>> deck_cache_;
};

// The finite-N meromorphic approximation of a transalgebraic curve:
// x_N = M0 (1 + (tau-1) M1/N)^(-N) (1 + tau M1/N)^N, y_N = M2/x_N.
Curve finite_N_curve(const Curve& trans, long N, const Rational& tau);

// Convex hull data of the exponent support of a polynomial presentation
// P(x,y) = sum_i q_i(x) y^i.
struct NewtonPolygon {
  std::vector<std::pair<long, long>> support;  // (x-exponent, y-exponent)
  std::vector<std::pair<long, long>> hull;     // counterclockwise vertices
  bool has_interior_lattice_point = false;

  static NewtonPolygon from_presentation(const std::vector<PolyQ>& q);
};

// Regularity: meromorphic curves are regular iff the Newton polygon of the
// given presentation has no interior lattice point; transalgebraic curves
// iff xy is a Moebius transformation.
bool is_regular(const Curve& curve, const std::vector<PolyQ>* presentation);

}  // namespace specrec

#endif
