#include "specrec/curve.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <sstream>

#include "specrec/error.hpp"

namespace specrec {

namespace {

// Order of f at infinity: positive = zero, negative = pole.
long order_at_infinity(const RatFuncQ& f) {
  if (f.zero()) throw InputError("order of the zero function");
  return f.den().degree() - f.num().degree();
}

void append_poly(std::ostringstream& os, const PolyQ& p) {
  os << "[";
  for (long i = 0; i <= p.degree(); ++i) {
    if (i) os << ",";
    os << rational_to_string(p.coeff(i));
  }
  os << "]";
}

void append_ratfunc(std::ostringstream& os, const RatFuncQ& f) {
  append_poly(os, f.num());
  os << "/";
  append_poly(os, f.den());
}

}  // namespace

Curve Curve::meromorphic(RatFuncQ x, RatFuncQ y, std::string name) {
  Curve c;
  c.kind = Kind::Meromorphic;
  c.x = std::move(x);
  c.y = std::move(y);
  c.name = std::move(name);
  if (c.x.zero() || c.x.num().degree() + c.x.den().degree() < 1)
    throw InputError("x must be a nonconstant rational function");
  return c;
}

Curve Curve::transalgebraic(RatFuncQ M0, RatFuncQ M1, RatFuncQ M2, std::string name) {
  Curve c;
  c.kind = Kind::Transalgebraic;
  c.M0 = std::move(M0);
  c.M1 = std::move(M1);
  c.M2 = std::move(M2);
  c.name = std::move(name);
  if (c.M0.zero()) throw InputError("M0 must be nonzero");
  if (c.M1.is_polynomial() && c.M1.num().degree() <= 0)
    throw InputError("M1 must be nonconstant for a transalgebraic curve");
  return c;
}

Curve Curve::atlantes(int r, int q) {
  if (r < 1 || q < 1) throw InputError("atlantes curve needs r, q >= 1");
  RatFuncQ M0(PolyQ::monomial(1));
  RatFuncQ M1(PolyQ::monomial((long)q * r, Rational(-1)));
  RatFuncQ M2(PolyQ::monomial(q));
  std::string nm = "atlantes(r=" + std::to_string(r) +
                   (q == 1 ? "" : ",q=" + std::to_string(q)) + ")";
  return transalgebraic(std::move(M0), std::move(M1), std::move(M2), nm);
}

RatFuncQ Curve::xy() const {
  if (kind == Kind::Meromorphic) return x * y;
  return M2;
}

RatFuncQ Curve::dlogx() const {
  if (kind == Kind::Meromorphic) return x.derivative() / x;
  return M0.derivative() / M0 + M1.derivative();
}

RatFuncQ Curve::ydx() const {
  if (kind == Kind::Meromorphic) return y * x.derivative();
  return M2 * dlogx();
}

Curve Curve::with_scaled_y(const Rational& c) const {
  Curve out = *this;
  if (kind == Kind::Meromorphic)
    out.y = Rational(c) * out.y;
  else
    out.M2 = Rational(c) * out.M2;
  return out;
}

std::string Curve::serialize() const {
  std::ostringstream os;
  if (kind == Kind::Meromorphic) {
    os << "meromorphic;x=";
    append_ratfunc(os, x);
    os << ";y=";
    append_ratfunc(os, y);
  } else {
    os << "transalgebraic;M0=";
    append_ratfunc(os, M0);
    os << ";M1=";
    append_ratfunc(os, M1);
    os << ";M2=";
    append_ratfunc(os, M2);
  }
  return os.str();
}

bool RamOrbit::admissible() const {
  if (essential) return m2_pole;
  if (s <= -1) return std::gcd((long)r, -s) == 1;
  if (s < 1 || s > (long)r + 1) return false;
  // r = +-1 mod s (s = 1 is always fine)
  long rs = ((long)r % s + s) % s;
  return rs == 1 % s || rs == (s - 1) % s;
}

std::string RamOrbit::label() const {
  if (at_infinity) return essential ? "infinity (essential)" : "infinity";
  std::ostringstream os;
  if (essential) os << "essential ";
  os << "roots of ";
  for (long i = modulus.degree(); i >= 0; --i) {
    if (is_zero(modulus.coeff(i))) continue;
    if (i < modulus.degree()) os << " + ";
    os << rational_to_string(modulus.coeff(i));
    if (i > 0) os << "*z^" << i;
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// LocalFrame

LocalFrame::LocalFrame(const Curve* curve, const RamOrbit* orbit,
                       const NumberField* orbit_field, CurveAnalysis* owner)
    : curve_(curve), orbit_(orbit), K_(orbit_field), owner_(owner) {
  if (orbit_->at_infinity) {
    alpha_ = FE(0);  // unused
  } else if (orbit_->modulus.degree() == 1) {
    alpha_ = FE(-orbit_->modulus.coeff(0));
    K_ = nullptr;
  } else {
    alpha_ = FE::gen(K_);
  }

  // Order of x (resp. M0) at the point, and the finite value when regular.
  const RatFuncQ& base = curve_->transalgebraic_kind() ? curve_->M0 : curve_->x;
  long ord = base.num().degree() + base.den().degree() + 3;
  LSeries<FE> z = at_infinity()
                      ? LSeries<FE>::var(ord + 2).inverse()
                      : LSeries<FE>::constant(alpha_, ord) + LSeries<FE>::var(ord);
  auto lift = [&](const Rational& c) { return LSeries<FE>::constant(FE(c), z.order()); };
  LSeries<FE> vnum = base.num().eval_in(z, lift);
  LSeries<FE> vden = base.den().eval_in(z, lift);
  long xn = vnum.valuation(), xd = vden.valuation();
  if (xn >= vnum.order() || xd >= vden.order())
    throw VerificationError("could not determine the order of x at " + orbit_->label());
  xord_ = xn - xd;
  if (xord_ == 0)
    xval_ = vnum.coeff(xn) / vden.coeff(xd);
}

LSeries<FE> LocalFrame::chart_of(const LSeries<FE>& s) const {
  if (at_infinity()) return s.inverse();
  return LSeries<FE>::constant(alpha_, s.order()) + s;
}

LSeries<FE> LocalFrame::eval_at(const RatFuncQ& f, const LSeries<FE>& z) const {
  return eval_ratfunc(f, z, [](const Rational& c) { return FE(c); });
}

// The local data Phi with Phi(sigma) = Phi(t)  <=>  x(sigma) = x(t), and
// valuation exactly r at the point.  For transalgebraic curves the
// exponential part enters only through exp(M1 - M1(point)), an honest series.
LSeries<FE> LocalFrame::phi(const LSeries<FE>& t_arg) const {
  long ord = t_arg.order();
  LSeries<FE> z = chart_of(t_arg);
  if (!curve_->transalgebraic_kind()) {
    LSeries<FE> xv = eval_at(curve_->x, z);
    if (xord_ == 0) return xv - LSeries<FE>::constant(xval_, ord);
    if (xord_ > 0) return xv;
    return xv.inverse();
  }
  LSeries<FE> m0 = eval_at(curve_->M0, z);
  LSeries<FE> m1 = eval_at(curve_->M1, z);
  LSeries<FE> dm1 = m1 - LSeries<FE>::constant(m1.coeff(0), m1.order());
  LSeries<FE> core = m0 * dm1.expo();
  if (xord_ == 0)
    return (FE(1) / xval_) * core - LSeries<FE>::constant(FE(1), core.order());
  if (xord_ > 0) return core;
  return core.inverse();
}

LSeries<FE> LocalFrame::dphi(const LSeries<FE>& t_arg) const {
  // d/dt of phi along the chart; computed from rational data so it can be
  // evaluated at an arbitrary argument series (needed by Newton).
  LSeries<FE> z = chart_of(t_arg);
  LSeries<FE> dz_dt = at_infinity()
                          ? -(t_arg * t_arg).inverse()
                          : LSeries<FE>::constant(FE(1), t_arg.order());
  // Note: when t_arg is sigma(t), dz_dt here is dz/d(sigma); the caller
  // multiplies by sigma'(t) when it needs a t-derivative.  Newton only needs
  // the derivative with respect to the argument.
  if (!curve_->transalgebraic_kind()) {
    LSeries<FE> xp = eval_at(curve_->x.derivative(), z) * dz_dt;
    if (xord_ >= 0) return xp;
    LSeries<FE> xv = eval_at(curve_->x, z);
    return -(xp * (xv * xv).inverse());
  }
  LSeries<FE> m0 = eval_at(curve_->M0, z);
  LSeries<FE> m1 = eval_at(curve_->M1, z);
  LSeries<FE> dm1 = m1 - LSeries<FE>::constant(m1.coeff(0), m1.order());
  LSeries<FE> core = m0 * dm1.expo();
  LSeries<FE> dcore = (eval_at(curve_->M0.derivative(), z) +
                       m0 * eval_at(curve_->M1.derivative(), z)) *
                      dz_dt * dm1.expo();
  if (xord_ == 0) return (FE(1) / xval_) * dcore;
  if (xord_ > 0) return dcore;
  return -(dcore * (core * core).inverse());
}

void LocalFrame::compute_invariants(int* r_out, long* s_out) {
  // r = valuation of phi.
  long ord = 8;
  long r = -1;
  for (; ord <= 512; ord *= 2) {
    LSeries<FE> p = phi(LSeries<FE>::var(ord));
    long v = p.valuation();
    if (v < p.order()) {
      r = v;
      break;
    }
  }
  if (r <= 0)
    throw VerificationError("local data of x degenerate at " + orbit_->label());
  r_ = (int)r;
  *r_out = (int)r;

  if (r_ == 1) {
    *s_out = 0;  // unramified; orbit will be dropped
    return;
  }

  // Root of unity for the deck group.
  if (r_ == 2) {
    theta_ = FE(-1);
  } else {
    if (K_ != nullptr)
      throw InputError(
          "unsupported curve: ramification of order > 2 at a non-rational "
          "point (" + orbit_->label() + ") would need a composite extension");
    K_ = owner_->intern_field(cyclotomic_polynomial(r_), "zeta" + std::to_string(r_));
    theta_ = FE::gen(K_);
  }

  // s = 1 + min valuation over the nontrivial isotypic components of y dx.
  long start = 3 * r_ + 8;
  for (long sord = start; sord <= std::max(512L, 8 * start); sord *= 2) {
    long best = std::numeric_limits<long>::max();
    std::vector<LSeries<FE>> pulls;
    for (int j = 0; j < r_; ++j) pulls.push_back(ydx_pullback(j, sord));
    for (int m = 1; m < r_; ++m) {
      LSeries<FE> h = LSeries<FE>::zero(sord);
      for (int j = 0; j < r_; ++j) {
        FE w_ = FE(1);
        // theta^(-m j) = theta^((r - m) j)
        for (int k = 0; k < ((r_ - m) * j) % r_; ++k) w_ = w_ * theta_;
        h = h + w_ * pulls[(size_t)j];
      }
      long v = h.valuation();
      if (v < h.order()) {
        if ((((v + 1) % r_) + r_) % r_ != m % r_)
          throw VerificationError("isotypic component has inconsistent valuation at " +
                                  orbit_->label());
        best = std::min(best, v + 1);
      }
    }
    if (best != std::numeric_limits<long>::max()) {
      *s_out = best;
      return;
    }
  }
  throw VerificationError("y dx has no antisymmetric part at " + orbit_->label() +
                          "; local exponent undefined");
}

LSeries<FE> LocalFrame::solve_deck(int i, long ord) const {
  // Newton iteration for Phi(sigma) = Phi(t), starting from theta^i t.
  FE th(1);
  for (int k = 0; k < i; ++k) th = th * theta_;
  // One Newton step improves "correct modulo t^N" to modulo t^(2N-1): the
  // second-derivative term of the local data costs one order relative to the
  // usual doubling.
  long cur = 2;
  LSeries<FE> sigma = LSeries<FE>::monomial(th, 1, cur);
  while (cur < ord) {
    long next = std::min(2 * cur - 1, ord);
    long work = next + r_ + 2;
    sigma = sigma.truncated(cur).padded(work);
    LSeries<FE> target = phi(LSeries<FE>::var(work));
    LSeries<FE> err = phi(sigma) - target;
    LSeries<FE> corr = err / dphi(sigma);
    sigma = sigma - corr;
    cur = next;
  }
  sigma = sigma.truncated(ord).padded(ord);
  // Verify the defining equation to the working order.
  long work = ord + r_ + 2;
  LSeries<FE> res = phi(sigma.padded(work)) - phi(LSeries<FE>::var(work));
  if (res.valuation() < ord)
    throw VerificationError("deck transformation failed to verify at " + orbit_->label());
  return sigma;
}

LSeries<FE> LocalFrame::deck(int i, long ord) const {
  if (i == 0) return LSeries<FE>::var(ord);
  if (i < 0 || i >= r_) throw InputError("deck index out of range");
  if (deck_cache_.size() < (size_t)r_) deck_cache_.resize((size_t)r_, {0, {}});
  auto& slot = deck_cache_[(size_t)i];
  if (slot.first >= ord) return slot.second.truncated(ord);
  LSeries<FE> d = solve_deck(i, ord);
  slot = {ord, d};
  return d;
}

LSeries<FE> LocalFrame::point(int deck_i, long ord) const {
  return chart_of(deck(deck_i, ord + (at_infinity() ? 2 : 0)).truncated(ord + 2))
      .truncated(ord);
}

LSeries<FE> LocalFrame::dz(int deck_i, long ord) const {
  LSeries<FE> s = deck(deck_i, ord + 2);
  if (at_infinity()) return -(s.derivative() * (s * s).inverse()).truncated(ord);
  return s.derivative().truncated(ord);
}

LSeries<FE> LocalFrame::eval(const RatFuncQ& f, int deck_i, long ord) const {
  return eval_at(f, point(deck_i, ord + 4)).truncated(ord);
}

LSeries<FE> LocalFrame::ydx_pullback(int deck_i, long ord) const {
  // Pole of y dx at the point costs extra working order.
  long pad = curve_->ydx().num().degree() + curve_->ydx().den().degree() + 4;
  return (eval(curve_->ydx(), deck_i, ord + pad) * dz(deck_i, ord + pad))
      .truncated(ord);
}

LSeries<FE> LocalFrame::kernel_factor(int deck_i, long ord) const {
  const RatFuncQ& f = curve_->transalgebraic_kind() ? curve_->M2 : curve_->y;
  long pad = 2 * r_ + 6 + f.num().degree() + f.den().degree() +
             curve_->dlogx().num().degree() + curve_->dlogx().den().degree();
  long w = ord + pad;
  if (curve_->transalgebraic_kind()) {
    LSeries<FE> m2z = eval(curve_->M2, 0, w);
    LSeries<FE> m2s = eval(curve_->M2, deck_i, w);
    LSeries<FE> dlx = eval(curve_->dlogx(), 0, w) * dz(0, w);
    return ((m2z - m2s) * dlx).truncated(ord);
  }
  LSeries<FE> yz = eval(curve_->y, 0, w);
  LSeries<FE> ys = eval(curve_->y, deck_i, w);
  LSeries<FE> dx = eval(curve_->x.derivative(), 0, w) * dz(0, w);
  return ((yz - ys) * dx).truncated(ord);
}

// ---------------------------------------------------------------------------
// CurveAnalysis

CurveAnalysis::CurveAnalysis(Curve curve, std::vector<PolyQ> split_hints)
    : curve_(std::move(curve)), split_hints_(std::move(split_hints)) {
  run();
}

const NumberField* CurveAnalysis::intern_field(PolyQ modulus, const std::string& label) {
  for (auto& f : fields_)
    if (f->modulus == modulus) return f.get();
  fields_.push_back(std::make_unique<NumberField>(std::move(modulus), label));
  return fields_.back().get();
}

const LocalFrame& CurveAnalysis::frame(size_t i) const {
  if (i >= frames_.size() || !frames_[i])
    throw InputError("no local frame for orbit " + std::to_string(i));
  return *frames_[i];
}

bool CurveAnalysis::admissible() const {
  for (const auto& o : orbits_)
    if (!o.admissible()) return false;
  return true;
}

std::string CurveAnalysis::report() const {
  std::ostringstream os;
  for (const auto& o : orbits_) {
    os << o.label();
    if (o.essential)
      os << ": essential, M2 pole " << (o.m2_pole ? "present" : "MISSING");
    else
      os << ": (r, s) = (" << o.r << ", " << o.s << ")";
    os << (o.admissible() ? " [ok]" : " [inadmissible]") << "\n";
  }
  return os.str();
}

namespace {

// Remove from p all factors it shares with q; both squarefree-ish.
PolyQ remove_common(PolyQ p, const PolyQ& q) {
  for (;;) {
    PolyQ g = PolyQ::gcd(p, q);
    if (g.degree() <= 0) return p;
    p = PolyQ::divrem(p, g).first;
  }
}

// Monic squarefree polynomial whose roots are the repeated roots of p.
PolyQ repeated_roots(const PolyQ& p) {
  if (p.degree() <= 1) return PolyQ(Rational(1));
  PolyQ g = PolyQ::gcd(p, p.derivative());
  return squarefree_part(g.degree() >= 1 ? g : PolyQ(Rational(1)));
}

}  // namespace

void CurveAnalysis::run() {
  struct Candidate {
    bool at_infinity;
    PolyQ modulus;
    bool essential;
  };
  std::vector<Candidate> work;

  PolyQ m1_poles(Rational(1));  // finite essential locus (transalgebraic)
  bool inf_essential = false;

  if (curve_.transalgebraic_kind()) {
    m1_poles = squarefree_part(curve_.M1.den());
    if (m1_poles.degree() >= 1) work.push_back({false, m1_poles, true});
    inf_essential = order_at_infinity(curve_.M1) < 0;
    if (inf_essential) work.push_back({true, {}, true});
  }

  // Finite critical points of x away from essential singularities.
  RatFuncQ dlx = curve_.dlogx();
  const RatFuncQ& base = curve_.transalgebraic_kind() ? curve_.M0 : curve_.x;
  PolyQ crit = squarefree_part(dlx.num());
  crit = remove_common(crit, m1_poles);
  // d(log x) vanishing at a zero/pole of x is not ramification of x by
  // itself; multiple zeros/poles are covered separately below.
  crit = remove_common(crit, squarefree_part(base.num()));
  crit = remove_common(crit, squarefree_part(base.den()));
  PolyQ multi = repeated_roots(base.num()) * repeated_roots(base.den());
  multi = remove_common(squarefree_part(multi), m1_poles);
  PolyQ finite_locus = squarefree_part(crit * multi);

  if (finite_locus.degree() >= 1) {
    PolyQ cof;
    auto roots = rational_roots(finite_locus, &cof);
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
    for (const auto& rt : roots)
      work.push_back({false, PolyQ(std::vector<Rational>{-rt, Rational(1)}), false});
    if (cof.degree() >= 1) work.push_back({false, cof, false});
  }

  if (!inf_essential) work.push_back({true, {}, false});  // dropped if r = 1

  // Accumulate into stable heap storage first; frames keep orbit pointers, so
  // they are rebound once the final orbits_ vector is assembled.
  std::vector<std::unique_ptr<RamOrbit>> done;
  std::vector<std::unique_ptr<LocalFrame>> done_frames;

  while (!work.empty()) {
    Candidate c = work.back();
    work.pop_back();
    if (!c.at_infinity && c.modulus.degree() >= 2) {
      bool split = false;
      for (const PolyQ& h : split_hints_) {
        PolyQ g = PolyQ::gcd(c.modulus, h);
        if (g.degree() >= 1 && g.degree() < c.modulus.degree()) {
          work.push_back({false, g, c.essential});
          work.push_back({false, PolyQ::divrem(c.modulus, g).first, c.essential});
          split = true;
          break;
        }
      }
      if (split) continue;
    }
    auto o = std::make_unique<RamOrbit>();
    o->at_infinity = c.at_infinity;
    o->modulus = c.modulus;
    if (c.essential) {
      o->essential = true;
      if (c.at_infinity)
        o->m2_pole = order_at_infinity(curve_.M2) < 0;
      else
        o->m2_pole = PolyQ::gcd(curve_.M2.den(), c.modulus) == c.modulus;
      done.push_back(std::move(o));
      done_frames.push_back(nullptr);
      continue;
    }
    const NumberField* F = nullptr;
    if (!c.at_infinity && c.modulus.degree() >= 2)
      F = intern_field(c.modulus, "orbit(deg " + std::to_string(c.modulus.degree()) + ")");
    auto fr = std::make_unique<LocalFrame>(&curve_, o.get(), F, this);
    try {
      int r = 0;
      long s = 0;
      fr->compute_invariants(&r, &s);
      if (r == 1) continue;
      o->r = r;
      o->s = s;
      done.push_back(std::move(o));
      done_frames.push_back(std::move(fr));
    } catch (const SplitRequest& sr) {
      if (c.at_infinity || c.modulus.degree() < 2)
        throw VerificationError("unexpected field split at a rational point");
      PolyQ f1 = sr.factor;
      PolyQ f2 = PolyQ::divrem(c.modulus, f1).first;
      work.push_back({false, f1, false});
      work.push_back({false, squarefree_part(f2), false});
    }
  }

  orbits_.reserve(done.size());
  for (auto& o : done) orbits_.push_back(std::move(*o));
  frames_ = std::move(done_frames);
  for (size_t i = 0; i < frames_.size(); ++i)
    if (frames_[i]) frames_[i]->rebind(&orbits_[i]);
}

// ---------------------------------------------------------------------------

Curve finite_N_curve(const Curve& trans, long N, const Rational& tau) {
  if (!trans.transalgebraic_kind())
    throw InputError("finite-N approximation needs a transalgebraic curve");
  if (N < 1) throw InputError("finite-N approximation needs N >= 1");
  RatFuncQ one(Rational(1));
  Rational invN = Rational(1) / Rational(N);
  RatFuncQ a = one + ((tau - Rational(1)) * invN) * trans.M1;
  RatFuncQ b = one + (tau * invN) * trans.M1;
  RatFuncQ apow = one, bpow = one;
  for (long k = 0; k < N; ++k) {
    apow = apow * a;
    bpow = bpow * b;
  }
  RatFuncQ xN = trans.M0 * bpow / apow;
  RatFuncQ yN = trans.M2 / xN;
  return Curve::meromorphic(xN, yN,
                            trans.name + "|N=" + std::to_string(N) +
                                ",tau=" + rational_to_string(tau));
}

NewtonPolygon NewtonPolygon::from_presentation(const std::vector<PolyQ>& q) {
  NewtonPolygon np;
  for (size_t i = 0; i < q.size(); ++i)
    for (long j = 0; j <= q[i].degree(); ++j)
      if (!is_zero(q[i].coeff(j))) np.support.push_back({j, (long)i});
  if (np.support.empty()) throw InputError("empty polynomial presentation");

  // Andrew's monotone chain, strict turns only (no collinear hull points).
  auto pts = np.support;
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  auto cross = [](std::pair<long, long> o, std::pair<long, long> a,
                  std::pair<long, long> b) {
    return (a.first - o.first) * (b.second - o.second) -
           (a.second - o.second) * (b.first - o.first);
  };
  std::vector<std::pair<long, long>> h;
  for (int pass = 0; pass < 2; ++pass) {
    size_t start = h.size();
    auto scan = [&](const std::pair<long, long>& p) {
      while (h.size() >= start + 2 && cross(h[h.size() - 2], h.back(), p) <= 0)
        h.pop_back();
      h.push_back(p);
    };
    if (pass == 0)
      for (auto& p : pts) scan(p);
    else
      for (auto it = pts.rbegin(); it != pts.rend(); ++it) scan(*it);
    h.pop_back();
  }
  if (h.empty()) h = pts;  // single point
  np.hull = h;

  // Interior lattice point test: strictly inside all edges of the ccw hull.
  if (np.hull.size() >= 3) {
    long xmin = np.hull[0].first, xmax = xmin, ymin = np.hull[0].second, ymax = ymin;
    for (auto& p : np.hull) {
      xmin = std::min(xmin, p.first);
      xmax = std::max(xmax, p.first);
      ymin = std::min(ymin, p.second);
      ymax = std::max(ymax, p.second);
    }
    for (long X = xmin + 1; X < xmax && !np.has_interior_lattice_point; ++X)
      for (long Y = ymin + 1; Y < ymax; ++Y) {
        bool inside = true;
        for (size_t i = 0; i < np.hull.size(); ++i) {
          auto a = np.hull[i], b = np.hull[(i + 1) % np.hull.size()];
          if (cross(a, b, {X, Y}) <= 0) {
            inside = false;
            break;
          }
        }
        if (inside) {
          np.has_interior_lattice_point = true;
          break;
        }
      }
  }
  return np;
}

bool is_regular(const Curve& curve, const std::vector<PolyQ>* presentation) {
  if (curve.transalgebraic_kind()) {
    RatFuncQ m = curve.xy();
    if (m.num().degree() > 1 || m.den().degree() > 1) return false;
    return m.num().degree() == 1 || m.den().degree() == 1;
  }
  if (!presentation)
    throw InputError("regularity of a meromorphic curve needs a polynomial presentation");
  return !NewtonPolygon::from_presentation(*presentation).has_interior_lattice_point;
}

}  // namespace specrec
