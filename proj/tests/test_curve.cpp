#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "specrec/curve.hpp"

#include "doctest.h"
#include "specrec/error.hpp"

using namespace specrec;

namespace {

RatFuncQ rf(std::vector<Rational> num, std::vector<Rational> den = {Rational(1)}) {
  return RatFuncQ(PolyQ(std::move(num)), PolyQ(std::move(den)));
}

RatFuncQ zpow(long k) { return RatFuncQ(PolyQ::monomial(k)); }

const RamOrbit* find_orbit(const CurveAnalysis& an, bool at_inf,
                           const PolyQ& modulus = {}) {
  for (const auto& o : an.orbits())
    if (o.at_infinity == at_inf && (at_inf || o.modulus == modulus)) return &o;
  return nullptr;
}

size_t orbit_index(const CurveAnalysis& an, const RamOrbit* o) {
  return (size_t)(o - an.orbits().data());
}

}  // namespace

TEST_CASE("airy curve: local invariants and orbit structure") {
  // x = z^2, y = z
  Curve c = Curve::meromorphic(zpow(2), zpow(1), "airy");
  CurveAnalysis an(c);
  REQUIRE(an.orbits().size() == 2);

  const RamOrbit* o0 = find_orbit(an, false, PolyQ({Rational(0), Rational(1)}));
  REQUIRE(o0 != nullptr);
  CHECK(o0->r == 2);
  CHECK(o0->s == 3);
  CHECK(o0->participates());
  CHECK(o0->admissible());

  const RamOrbit* oi = find_orbit(an, true);
  REQUIRE(oi != nullptr);
  CHECK(oi->r == 2);
  CHECK(oi->s == -3);
  CHECK(!oi->participates());  // negative exponent: no residue contribution
  CHECK(oi->admissible());
  CHECK(an.admissible());

  // The nontrivial deck transformation at z = 0 is exactly t -> -t.
  const LocalFrame& fr = an.frame(orbit_index(an, o0));
  LSeries<FE> d1 = fr.deck(1, 16);
  for (long e = d1.valuation(); e < 16; ++e)
    CHECK(d1.coeff(e) == (e == 1 ? FE(-1) : FE(0)));
}

TEST_CASE("r=3 ramification at z=0 needs a cyclotomic deck group") {
  // x = z^3, y = 1/z: y dx = 3z dz
  Curve c = Curve::meromorphic(zpow(3), rf({Rational(1)}, {Rational(0), Rational(1)}));
  CurveAnalysis an(c);
  const RamOrbit* o0 = find_orbit(an, false, PolyQ({Rational(0), Rational(1)}));
  REQUIRE(o0 != nullptr);
  CHECK(o0->r == 3);
  CHECK(o0->s == 2);
  CHECK(o0->admissible());

  const LocalFrame& fr = an.frame(orbit_index(an, o0));
  REQUIRE(fr.field() != nullptr);
  CHECK(fr.field()->modulus == cyclotomic_polynomial(3));
  // theta^3 = 1, theta != 1
  FE th = fr.theta();
  CHECK(th * th * th == FE(1));
  CHECK(th != FE(1));

  // Decks genuinely permute the fiber of x: x(sigma_i(t)) = x(t).
  for (int i = 1; i < 3; ++i) {
    LSeries<FE> xi = fr.eval(c.x, i, 12);
    LSeries<FE> x0 = fr.eval(c.x, 0, 12);
    CHECK(!(xi - x0).known_nonzero());
  }

  const RamOrbit* oi = find_orbit(an, true);
  REQUIRE(oi != nullptr);
  CHECK(oi->r == 3);
  CHECK(oi->s == -2);
  CHECK(!oi->participates());
  CHECK(oi->admissible());
}

TEST_CASE("atlantes curves: finite orbits plus an essential singularity") {
  for (int r = 1; r <= 3; ++r) {
    Curve c = Curve::atlantes(r);
    CurveAnalysis an(c);

    const RamOrbit* oe = find_orbit(an, true);
    REQUIRE(oe != nullptr);
    CHECK(oe->essential);
    CHECK(oe->m2_pole);  // M2 = z has a pole at infinity
    CHECK(oe->admissible());
    CHECK(!oe->participates());

    // finite ramification: the r roots of r z^r = 1, each with (2, 1)
    int n_finite = 0;
    long root_count = 0;
    for (const auto& o : an.orbits()) {
      if (o.essential || o.at_infinity) continue;
      ++n_finite;
      root_count += o.modulus.degree();
      CHECK(o.r == 2);
      CHECK(o.s == 3);  // y regular and nonzero here: generic smooth profile
      CHECK(o.participates());
      CHECK(o.admissible());
    }
    CHECK(root_count == r);
    if (r == 1) CHECK(n_finite == 1);  // single rational root z = 1
    CHECK(an.admissible());
  }
}

TEST_CASE("orbit with mixed local behavior splits dynamically") {
  // x' = (z^2-2)(z^2-3), y = 1/(z^2-2).  y dx = (z^2-3) dz, so the exponent
  // differs between the two quadratic orbits even though x treats them alike.
  PolyQ xp({Rational(6), Rational(0), Rational(-5), Rational(0), Rational(1)});
  PolyQ x({Rational(0), Rational(6), Rational(0), frac(-5, 3), Rational(0),
           frac(1, 5)});
  Curve c = Curve::meromorphic(RatFuncQ(x),
                               rf({Rational(1)}, {Rational(-2), Rational(0), Rational(1)}));
  REQUIRE(RatFuncQ(x).derivative() == RatFuncQ(xp));
  CurveAnalysis an(c);

  const RamOrbit* o2 = find_orbit(an, false, PolyQ({Rational(-2), Rational(0), Rational(1)}));
  const RamOrbit* o3 = find_orbit(an, false, PolyQ({Rational(-3), Rational(0), Rational(1)}));
  REQUIRE(o2 != nullptr);
  REQUIRE(o3 != nullptr);
  CHECK(o2->r == 2);
  CHECK(o2->s == 1);
  CHECK(o3->r == 2);
  CHECK(o3->s == 3);

  // x has a pole of order 5 at infinity: deck group of order 5 there.
  const RamOrbit* oi = find_orbit(an, true);
  REQUIRE(oi != nullptr);
  CHECK(oi->r == 5);
  CHECK(oi->s == -3);
  CHECK(oi->admissible());
  CHECK(an.admissible());
}

TEST_CASE("order > 2 at a non-rational point is rejected") {
  // x' = (z^3-2)^2: triple ramification along an irreducible cubic orbit.
  PolyQ x({Rational(0), Rational(4), Rational(0), Rational(0), Rational(-1),
           Rational(0), Rational(0), frac(1, 7)});
  CHECK_THROWS_AS(CurveAnalysis(Curve::meromorphic(RatFuncQ(x), zpow(1))), InputError);
}

TEST_CASE("finite-N approximations of the exponential") {
  Curve atl = Curve::atlantes(1);

  // N = 1, tau = 0: x_1 = z / (1 + z)
  Curve c1 = finite_N_curve(atl, 1, Rational(0));
  CHECK(c1.x == rf({Rational(0), Rational(1)}, {Rational(1), Rational(1)}));
  CHECK(c1.y == rf({Rational(1), Rational(1)}));  // y = M2/x = 1 + z

  // N = 3, tau = 0: x_3 = z (1 + z/3)^-3.  The essential singularity is
  // approximated by an order-3 pole at z = -3; the other critical points are
  // z = 3/2 and a double zero at infinity.
  Curve c3 = finite_N_curve(atl, 3, Rational(0));
  CurveAnalysis an(c3);
  const RamOrbit* om = find_orbit(an, false, PolyQ({Rational(3), Rational(1)}));
  REQUIRE(om != nullptr);
  CHECK(om->r == 3);
  const RamOrbit* oc = find_orbit(an, false, PolyQ({frac(-3, 2), Rational(1)}));
  REQUIRE(oc != nullptr);
  CHECK(oc->r == 2);
  const RamOrbit* oi = find_orbit(an, true);
  REQUIRE(oi != nullptr);
  CHECK(oi->r == 2);
}

TEST_CASE("newton polygon and regularity") {
  // P(x, y) = y^2 + (2 - x^2) y + 1, the presentation with x = z + 1/z:
  // interior lattice point (1,1), hence not regular.
  std::vector<PolyQ> pres = {PolyQ(Rational(1)),
                             PolyQ({Rational(2), Rational(0), Rational(-1)}),
                             PolyQ(Rational(1))};
  NewtonPolygon np = NewtonPolygon::from_presentation(pres);
  CHECK(np.support.size() == 4);
  CHECK(np.hull.size() == 3);
  CHECK(np.has_interior_lattice_point);
  Curve zz = Curve::meromorphic(rf({Rational(1), Rational(0), Rational(1)},
                                   {Rational(0), Rational(1)}),
                                zpow(1));
  CHECK(!is_regular(zz, &pres));

  // Airy presentation y^2 - x: a segment, no interior point.
  std::vector<PolyQ> airy = {PolyQ({Rational(0), Rational(-1)}), PolyQ(),
                             PolyQ(Rational(1))};
  CHECK(!NewtonPolygon::from_presentation(airy).has_interior_lattice_point);
  Curve ac = Curve::meromorphic(zpow(2), zpow(1));
  CHECK(is_regular(ac, &airy));
  CHECK_THROWS_AS(is_regular(ac, nullptr), InputError);

  // Transalgebraic regularity = xy is a Moebius map.
  CHECK(is_regular(Curve::atlantes(2), nullptr));
  CHECK(!is_regular(Curve::atlantes(2, 2), nullptr));  // xy = z^2
}

TEST_CASE("curve serialization distinguishes curves and survives scaling") {
  Curve a = Curve::atlantes(2);
  Curve b = Curve::atlantes(3);
  CHECK(a.serialize() != b.serialize());
  CHECK(a.with_scaled_y(frac(1, 2)).serialize() != a.serialize());
  Curve m = Curve::meromorphic(zpow(2), zpow(1));
  CHECK(m.with_scaled_y(Rational(3)).y == rf({Rational(0), Rational(3)}));
}
