#include "specrec/recursion.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>

#include "specrec/error.hpp"
#include "specrec/numberfield.hpp"
#include "specrec/series.hpp"

namespace specrec {

namespace {

PolyQ poly_pow(const PolyQ& p, int e) {
  PolyQ acc(Rational(1));
  for (int i = 0; i < e; ++i) acc = acc * p;
  return acc;
}

Poly<FE> lift_poly(const PolyQ& p) {
  std::vector<FE> v;
  v.reserve(p.coeffs().size());
  for (const auto& c : p.coeffs()) v.emplace_back(c);
  return Poly<FE>(std::move(v));
}

Poly<FE> fe_pow(const Poly<FE>& p, int e) {
  Poly<FE> acc(FE(1));
  for (int i = 0; i < e; ++i) acc = acc * p;
  return acc;
}

// p / (z - alpha) for monic p with p(alpha) = 0 (synthetic division).
Poly<FE> divide_root(const PolyQ& p, const FE& alpha) {
  long d = p.degree();
  std::vector<FE> q((size_t)d);
  FE carry(0);
  for (long i = d; i >= 1; --i) {
    carry = FE(p.coeff(i)) + carry * alpha;
    q[(size_t)(i - 1)] = carry;
  }
  return Poly<FE>(std::move(q));
}

long floor_div(long a, long b) {
  long q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

using DenPow = std::vector<std::pair<int, int>>;  // orbit -> power, sorted

void den_add(DenPow& d, int orbit, int k) {
  for (auto& [o, p] : d)
    if (o == orbit) {
      p += k;
      return;
    }
  d.emplace_back(orbit, k);
  std::sort(d.begin(), d.end());
}

// Enumerate set partitions of elems; callback gets the list of blocks.
void for_partitions(const std::vector<int>& elems,
                    const std::function<void(const std::vector<std::vector<int>>&)>& cb) {
  std::vector<std::vector<int>> blocks;
  std::function<void(size_t)> rec = [&](size_t i) {
    if (i == elems.size()) {
      cb(blocks);
      return;
    }
    // index-based: the recursive call appends to `blocks`, which can
    // reallocate and invalidate references held by a range-for
    size_t nb = blocks.size();
    for (size_t k = 0; k < nb; ++k) {
      blocks[k].push_back(elems[i]);
      rec(i + 1);
      blocks[k].pop_back();
    }
    blocks.push_back({elems[i]});
    rec(i + 1);
    blocks.pop_back();
  };
  rec(0);
}

// Enumerate compositions of total into parts nonnegative summands.
void for_compositions(int total, int parts,
                      const std::function<void(const std::vector<int>&)>& cb) {
  std::vector<int> v((size_t)parts, 0);
  std::function<void(int, int)> rec = [&](int i, int left) {
    if (i == parts - 1) {
      v[(size_t)i] = left;
      cb(v);
      return;
    }
    for (int x = 0; x <= left; ++x) {
      v[(size_t)i] = x;
      rec(i + 1, left - x);
    }
  };
  if (parts == 0) {
    if (total == 0) cb(v);
    return;
  }
  rec(0, total);
}

}  // namespace

RatFuncQ slot_scalar(const SlotKey& key, const CurveAnalysis& an) {
  if (key.orbit < 0) return RatFuncQ(PolyQ::monomial(key.j));
  const PolyQ& p = an.orbits()[(size_t)key.orbit].modulus;
  return RatFuncQ(PolyQ::monomial(key.j), poly_pow(p, key.k));
}

std::string Correlator::to_string() const {
  std::ostringstream os;
  os << "omega_{" << g << "," << n << "}: " << terms.size() << " terms";
  return os.str();
}

// ---------------------------------------------------------------------------

struct RecursionEngine::Impl {
  RecursionEngine* eng;
  std::vector<PolyQ> split_hints;
  std::map<std::pair<int, int>, Correlator> table;
  std::map<std::pair<int, int>, Correlator> corrections;
  std::map<std::pair<long, DenPow>, std::vector<std::pair<SlotKey, Rational>>>
      canon_cache;
  // Frame evaluations are pure functions of (orbit, deck, order); the
  // recursion requests the same handful of series thousands of times from
  // inside the nested sheet/partition loops.
  std::map<std::tuple<int, int, long>, LSeries<FE>> dz_cache, point_cache;
  std::map<std::tuple<int, SlotKey, int, long>, LSeries<FE>> eval_cache;
  std::map<std::tuple<int, int, int, long>, LSeries<FE>> bblock_cache;

  int orbit_index(const LocalFrame& fr) const {
    return (int)(&fr.orbit() - an().orbits().data());
  }

  const LSeries<FE>& dz_cached(const LocalFrame& fr, int deck, long ord) {
    auto key = std::make_tuple(orbit_index(fr), deck, ord);
    auto it = dz_cache.find(key);
    if (it == dz_cache.end()) it = dz_cache.emplace(key, fr.dz(deck, ord)).first;
    return it->second;
  }

  const LSeries<FE>& point_cached(const LocalFrame& fr, int deck, long ord) {
    auto key = std::make_tuple(orbit_index(fr), deck, ord);
    auto it = point_cache.find(key);
    if (it == point_cache.end())
      it = point_cache.emplace(key, fr.point(deck, ord)).first;
    return it->second;
  }

  const LSeries<FE>& eval_cached(const LocalFrame& fr, const SlotKey& k, int deck,
                                 long ord) {
    auto key = std::make_tuple(orbit_index(fr), k, deck, ord);
    auto it = eval_cache.find(key);
    if (it == eval_cache.end())
      it = eval_cache.emplace(key, fr.eval(slot_scalar(k, an()), deck, ord)).first;
    return it->second;
  }

  // --- one mixed omega_{0,2} factor awaiting its pole expansion -----------
  struct PendingExp {
    int var;     // outer variable index (0 = the new variable z0)
    bool is_b;   // true: bidifferential block; false: kernel numerator
    int deck;    // sheet carrying the local variable
  };

  struct RawFactor {
    Poly<FE> num = Poly<FE>(FE(1));
    DenPow den;
  };

  struct PartialTerm {
    LSeries<FE> ts;               // everything that depends only on t
    std::vector<RawFactor> outs;  // one per outer variable (index 0 = z0)
    std::vector<PendingExp> pend;
  };

  using VarRaw = std::pair<DenPow, long>;
  using AccKey = std::vector<VarRaw>;
  struct AccHash {
    size_t operator()(const AccKey& k) const {
      size_t h = 1469598103934665603ull;
      auto mix = [&h](size_t v) {
        h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
      };
      for (const auto& [den, j] : k) {
        mix((size_t)j);
        for (const auto& [o, p] : den) mix(((size_t)o << 8) ^ (size_t)p);
        mix(0x517cc1b727220a95ull);
      }
      return h;
    }
  };
  using Acc = std::unordered_map<AccKey, FE, AccHash>;

  explicit Impl(RecursionEngine* e) : eng(e) {}

  const CurveAnalysis& an() const { return *eng->an_; }

  // ----- canonical partial fractions ---------------------------------------

  std::vector<std::pair<SlotKey, Rational>> canon_num(const PolyQ& num, DenPow den) {
    std::vector<std::pair<SlotKey, Rational>> out;
    if (num.zero()) return out;
    if (den.empty()) {
      for (long j = 0; j <= num.degree(); ++j)
        if (!is_zero(num.coeff(j))) out.push_back({SlotKey{-1, 0, j}, num.coeff(j)});
      return out;
    }
    auto [orbit, kpow] = den.back();
    den.pop_back();
    const PolyQ& p = an().orbits()[(size_t)orbit].modulus;
    PolyQ A = poly_pow(p, kpow);
    PolyQ a;  // numerator of the p^kpow part, reduced mod A
    PolyQ rest_num;
    if (den.empty()) {
      auto [q, r] = PolyQ::divrem(num, A);
      a = r;
      rest_num = q;
    } else {
      PolyQ B(Rational(1));
      for (auto& [o2, k2] : den) B = B * poly_pow(an().orbits()[(size_t)o2].modulus, k2);
      auto [gg, u, v] = PolyQ::xgcd(A, B);
      if (gg.degree() != 0)
        throw VerificationError("orbit moduli are not coprime");
      Rational inv = Rational(1) / gg.coeff(0);
      u = u * inv;
      v = v * inv;  // now u*A + v*B = 1
      auto [h, a0] = PolyQ::divrem(num * v, A);
      a = a0;
      rest_num = num * u + h * B;
    }
    // k-adic digits of a over p: a = sum digit_l * p^l, deg digit < deg p.
    PolyQ cur = a;
    for (int l = 0; l < kpow && !cur.zero(); ++l) {
      auto [q, dig] = PolyQ::divrem(cur, p);
      for (long j = 0; j <= dig.degree(); ++j)
        if (!is_zero(dig.coeff(j)))
          out.push_back({SlotKey{orbit, kpow - l, j}, dig.coeff(j)});
      cur = q;
    }
    auto rest = canon_num(rest_num, den);
    out.insert(out.end(), rest.begin(), rest.end());
    return out;
  }

  const std::vector<std::pair<SlotKey, Rational>>& canon_monomial(long j, const DenPow& d) {
    auto key = std::make_pair(j, d);
    auto it = canon_cache.find(key);
    if (it != canon_cache.end()) return it->second;
    auto val = canon_num(PolyQ::monomial(j), d);
    return canon_cache.emplace(std::move(key), std::move(val)).first->second;
  }

  // ----- factor evaluation --------------------------------------------------

  // Scalar series of a table correlator with its slots assigned to sheets of
  // the current frame and to symbolic outer variables.  Only coefficients at
  // index < tcap of the resulting ts can reach the final residue (the caller
  // accounts for the poles of sibling factors), so intermediate products are
  // truncated to that moving window.
  std::vector<PartialTerm> factor_terms(const LocalFrame& fr, long ord, int gi,
                                        const std::vector<int>& decks,
                                        const std::vector<int>& outers, int n_out,
                                        long tcap) {
    std::vector<PartialTerm> res;
    int ni = (int)(decks.size() + outers.size());
    const Correlator& w = ensure_internal(gi, ni);
    for (const auto& [tuple, c] : w.terms) {
      PartialTerm t;
      t.ts = LSeries<FE>::constant(FE(c), ord);
      t.outs.assign((size_t)n_out, RawFactor{});
      std::vector<long> vals(decks.size(), 0);
      for (size_t s = 0; s < decks.size(); ++s) {
        const SlotKey& k = tuple[s];
        vals[s] = std::min((long)0, eval_cached(fr, k, decks[s], ord).valuation() +
                                        dz_cached(fr, decks[s], ord).valuation());
      }
      for (size_t s = 0; s < decks.size(); ++s) {
        const SlotKey& k = tuple[s];
        long future = 0;
        for (size_t s2 = s + 1; s2 < decks.size(); ++s2) future += vals[s2];
        t.ts = (t.ts * eval_cached(fr, k, decks[s], ord) * dz_cached(fr, decks[s], ord))
                   .truncated(tcap - future);
      }
      for (size_t s = 0; s < outers.size(); ++s) {
        const SlotKey& k = tuple[decks.size() + s];
        RawFactor& rf = t.outs[(size_t)outers[s]];
        rf.num = rf.num * lift_poly(PolyQ::monomial(k.j));
        if (k.orbit >= 0) den_add(rf.den, k.orbit, k.k);
      }
      res.push_back(std::move(t));
    }
    return res;
  }

  // omega_{0,2} block pulled back to two sheets; pure function of the frame.
  const LSeries<FE>& bblock_cached(const LocalFrame& fr, int d0, int d1, long ord) {
    auto key = std::make_tuple(orbit_index(fr), d0, d1, ord);
    auto it = bblock_cache.find(key);
    if (it == bblock_cache.end()) {
      LSeries<FE> diff = point_cached(fr, d0, ord) - point_cached(fr, d1, ord);
      LSeries<FE> b = dz_cached(fr, d0, ord) * dz_cached(fr, d1, ord) *
                      (diff * diff).inverse();
      it = bblock_cache.emplace(key, std::move(b)).first;
    }
    return it->second;
  }

  // omega_{0,2} block: two sheets, or one sheet + one symbolic outer.
  PartialTerm b_factor(const LocalFrame& fr, long ord, const std::vector<int>& decks,
                       const std::vector<int>& outers, int n_out) {
    PartialTerm t;
    t.outs.assign((size_t)n_out, RawFactor{});
    if (decks.size() == 2) {
      t.ts = bblock_cached(fr, decks[0], decks[1], ord);
    } else {
      t.ts = LSeries<FE>::constant(FE(1), ord);
      t.pend.push_back(PendingExp{outers[0], true, decks[0]});
    }
    return t;
  }

  // Convolution product of lists of partial terms, keeping ts below tcap.
  std::vector<PartialTerm> convolve(const std::vector<PartialTerm>& a,
                                    const std::vector<PartialTerm>& b, long tcap) {
    std::vector<PartialTerm> out;
    out.reserve(a.size() * b.size());
    for (const auto& x : a)
      for (const auto& y : b) {
        PartialTerm t;
        t.ts = (x.ts * y.ts).truncated(tcap);
        t.outs = x.outs;
        for (size_t i = 0; i < t.outs.size(); ++i) {
          t.outs[i].num = t.outs[i].num * y.outs[i].num;
          for (auto& [o, k] : y.outs[i].den) den_add(t.outs[i].den, o, k);
        }
        t.pend = x.pend;
        t.pend.insert(t.pend.end(), y.pend.begin(), y.pend.end());
        out.push_back(std::move(t));
      }
    return out;
  }

  // Worst pole order of one block's ts, from cached frame series only.  The
  // coefficient field is an integral domain, so valuations of products add;
  // clamping each factor at zero keeps this a lower bound on the valuation.
  long block_pole_bound(const LocalFrame& fr, long ord, int gi,
                        const std::vector<int>& decks, size_t n_outers) {
    int ni = (int)(decks.size() + n_outers);
    if (gi == 0 && ni == 2) {
      if (decks.size() == 2)
        return std::min((long)0,
                        bblock_cached(fr, decks[0], decks[1], ord).valuation());
      return 0;  // symbolic block: the pole expansion only adds valuation
    }
    const Correlator& w = ensure_internal(gi, ni);
    long best = 0;
    for (const auto& [tuple, c] : w.terms) {
      long v = 0;
      for (size_t s = 0; s < decks.size(); ++s)
        v += std::min((long)0,
                      eval_cached(fr, tuple[s], decks[s], ord).valuation() +
                          dz_cached(fr, decks[s], ord).valuation());
      best = std::min(best, v);
    }
    return best;
  }

  // W'(sheets; outer variables) for total genus g: sum over set partitions of
  // the sheets, distributions of the outer labels, and genus splittings.
  // omega_{0,1} blocks are excluded (they belong to the loop-equation variant).
  // Only ts coefficients at index < keep survive the later division by the
  // kernel denominator; intermediate products are truncated to that window
  // widened by the pole budget of the factors still to come.
  std::vector<PartialTerm> wsum(const LocalFrame& fr, long ord,
                                const std::vector<int>& sheets,
                                const std::vector<int>& outer_labels, int g,
                                int n_out, long keep) {
    std::vector<PartialTerm> total;
    for_partitions(sheets, [&](const std::vector<std::vector<int>>& blocks) {
      int m = (int)blocks.size();
      int gsum = g + m - (int)sheets.size();
      if (gsum < 0) return;
      // distribute outer labels over blocks
      size_t no = outer_labels.size();
      std::vector<int> assign(no, 0);
      for (;;) {
        std::vector<std::vector<int>> outs((size_t)m);
        for (size_t i = 0; i < no; ++i)
          outs[(size_t)assign[i]].push_back(outer_labels[i]);
        for_compositions(gsum, m, [&](const std::vector<int>& gs) {
          // Reject before evaluating anything: a single omega_{0,1} factor
          // kills the whole product (it belongs to the loop-equation variant),
          // and evaluating sibling factors first could recurse into the very
          // correlator being computed.
          for (int b = 0; b < m; ++b)
            if (gs[(size_t)b] == 0 &&
                blocks[(size_t)b].size() + outs[(size_t)b].size() == 1)
              return;
          // worst pole of each block from the cached frame series, then
          // evaluate and multiply inside the shrinking window
          std::vector<long> pb((size_t)m, 0);
          long pbtot = 0;
          for (int b = 0; b < m; ++b) {
            pb[(size_t)b] = block_pole_bound(fr, ord, gs[(size_t)b],
                                             blocks[(size_t)b],
                                             outs[(size_t)b].size());
            pbtot += pb[(size_t)b];
          }
          std::vector<std::vector<PartialTerm>> fl((size_t)m);
          bool ok = true;
          for (int b = 0; b < m && ok; ++b) {
            int gi = gs[(size_t)b];
            int ni = (int)(blocks[(size_t)b].size() + outs[(size_t)b].size());
            if (gi == 0 && ni == 2)
              fl[(size_t)b] = {b_factor(fr, ord, blocks[(size_t)b],
                                        outs[(size_t)b], n_out)};
            else
              fl[(size_t)b] = factor_terms(fr, ord, gi, blocks[(size_t)b],
                                           outs[(size_t)b], n_out,
                                           keep - (pbtot - pb[(size_t)b]));
            if (fl[(size_t)b].empty()) ok = false;
          }
          if (!ok) return;
          std::vector<long> future((size_t)m + 1, 0);
          for (int b = m - 1; b >= 0; --b)
            future[(size_t)b] = future[(size_t)b + 1] + pb[(size_t)b];
          std::vector<PartialTerm> prod(1);
          prod[0].ts = LSeries<FE>::constant(FE(1), ord);
          prod[0].outs.assign((size_t)n_out, RawFactor{});
          for (int b = 0; b < m && ok; ++b) {
            prod = convolve(prod, fl[(size_t)b], keep - future[(size_t)b + 1]);
            if (prod.empty()) ok = false;
          }
          if (ok) total.insert(total.end(), prod.begin(), prod.end());
        });
        // next assignment
        size_t i = 0;
        for (; i < no; ++i) {
          if (++assign[i] < m) break;
          assign[i] = 0;
        }
        if (i == no) break;
      }
    });
    return total;
  }

  // ----- pending expansions and residues -----------------------------------

  void finalize(const PartialTerm& term, const LSeries<FE>& ts, Acc& acc) {
    FE c = ts.coeff(-1);
    if (is_zero(c)) return;
    // distribute the numerator monomials of every outer factor
    size_t nv = term.outs.size();
    AccKey key(nv);
    std::function<void(size_t, FE)> rec = [&](size_t v, FE f) {
      if (v == nv) {
        auto it = acc.find(key);
        if (it == acc.end())
          acc.emplace(key, f);
        else
          it->second = it->second + f;
        return;
      }
      const RawFactor& rf = term.outs[v];
      for (long j = 0; j <= rf.num.degree(); ++j) {
        FE cj = rf.num.coeff(j);
        if (is_zero(cj)) continue;
        key[v] = {rf.den, j};
        rec(v + 1, f * cj);
      }
    };
    rec(0, c);
  }

  // Powers of the reduced-modulus factor, grown on demand.
  const Poly<FE>& qpow(const Poly<FE>& qfac, std::vector<Poly<FE>>& qpows, int k) {
    while ((int)qpows.size() <= k)
      qpows.push_back(qpows.empty() ? Poly<FE>(FE(1)) : qpows.back() * qfac);
    return qpows[(size_t)k];
  }

  // term is mutated in place (one outer slot per pending level, saved and
  // restored around the loop) so that expanding a pole never copies the other
  // outer slots; ts travels separately since it changes per child.
  void resolve(const LocalFrame& fr, long ord, PartialTerm& term, LSeries<FE> ts,
               size_t pi, const Poly<FE>& qfac, std::vector<Poly<FE>>& qpows,
               Acc& acc) {
    // Every factor multiplied onto ts below has nonnegative valuation (deck
    // series vanish at the point, dz and the derivative blocks are regular),
    // so coefficients of ts at index >= 0 can never reach the t^{-1} residue.
    // Working with the polar part alone turns the full-precision series
    // products of the pole expansion into products of short tails.
    ts = ts.truncated(0);
    if (ts.valuation() > -1) return;
    if (pi == term.pend.size()) {
      finalize(term, ts, acc);
      return;
    }
    long depth = -ts.valuation();  // only tpart coefficients below this matter
    const PendingExp& pe = term.pend[pi];
    bool inf = fr.at_infinity();
    LSeries<FE> su = fr.deck(pe.deck, ord).truncated(depth + 1);  // sigma_j(t); deck 0 -> t
    int orbit_idx = (int)(&fr.orbit() - an().orbits().data());
    RawFactor saved = std::move(term.outs[(size_t)pe.var]);
    if (!inf) {
      // 1/(z - u) = sum_k su^{k-1} / (z - alpha)^k, with
      // 1/(z - alpha)^k = q^k / p^k.
      LSeries<FE> tpart =
          (pe.is_b ? dz_cached(fr, pe.deck, ord) : LSeries<FE>::constant(FE(1), ord))
              .truncated(depth);
      for (int k = 1;; ++k) {
        if (tpart.valuation() + ts.valuation() > -1) break;
        LSeries<FE> child_ts = ts * tpart;
        if (child_ts.valuation() > -1) break;
        int kp = pe.is_b ? k + 1 : k;
        term.outs[(size_t)pe.var].num = saved.num * qpow(qfac, qpows, kp);
        term.outs[(size_t)pe.var].den = saved.den;
        den_add(term.outs[(size_t)pe.var].den, orbit_idx, kp);
        resolve(fr, ord, term, pe.is_b ? FE(k) * child_ts : child_ts, pi + 1,
                qfac, qpows, acc);
        tpart = tpart * su;
      }
    } else {
      // z(t) = 1/sigma: 1/(z0 - 1/t) = -sum_m z0^m t^(m+1);
      // d/du of the analogous expansion for the bidifferential block.
      LSeries<FE> tpart = pe.is_b ? -(su.derivative()) : -su;
      // kernel: -t^(m+1); block: -(m+1) sigma^m sigma'
      for (long m = 0;; ++m) {
        if (tpart.valuation() + ts.valuation() > -1) break;
        LSeries<FE> child_ts = ts * tpart;
        if (child_ts.valuation() > -1) break;
        term.outs[(size_t)pe.var].num = saved.num * Poly<FE>::monomial(m, FE(1));
        term.outs[(size_t)pe.var].den = saved.den;
        resolve(fr, ord, term, pe.is_b ? FE(m + 1) * child_ts : child_ts, pi + 1,
                qfac, qpows, acc);
        tpart = tpart * su;
      }
    }
    term.outs[(size_t)pe.var] = std::move(saved);
  }

  Rational descend(const LocalFrame& fr, const FE& v) {
    if (v.is_rational()) {
      // a rational value at a degree-d orbit still sums over all d roots
      if (!fr.at_infinity() && fr.orbit().modulus.degree() >= 2)
        return Rational(fr.orbit().modulus.degree()) * v.rat();
      return v.rat();
    }
    if (!fr.at_infinity() && fr.orbit().modulus.degree() >= 2) return v.trace();
    // cyclotomic deck field at a rational point: the orbit sum must already
    // be Galois-invariant
    throw VerificationError("per-orbit contribution is not Galois-invariant at " +
                            fr.orbit().label());
  }

  // ----- the recursion step at one orbit ------------------------------------

  void orbit_contribution(const LocalFrame& fr, int g, int n_old, long ord,
                          Correlator* result, Acc* basecheck) {
    int r = fr.r();
    int n_out = n_old + 1;
    std::vector<int> outer_labels;
    for (int i = 1; i <= n_old; ++i) outer_labels.push_back(i);

    Poly<FE> qfac(FE(1));
    if (!fr.at_infinity() && fr.orbit().modulus.degree() >= 1)
      qfac = divide_root(fr.orbit().modulus, fr.alpha());
    std::vector<Poly<FE>> qpows{Poly<FE>(FE(1))};

    std::vector<LSeries<FE>> kf((size_t)r);
    for (int j = 1; j < r; ++j) kf[(size_t)j] = fr.kernel_factor(j, ord);

    Acc acc;
    // iterate over nonempty subsets Z of {1, ..., r-1}
    for (unsigned mask = 1; mask < (1u << (r - 1)); ++mask) {
      std::vector<int> Z;
      for (int j = 1; j < r; ++j)
        if (mask & (1u << (j - 1))) Z.push_back(j);
      // kernel = -integral(B) / prod_{z' in Z} (y(z') - y(z)) dx(z); with the
      // factors stored as (y(z) - y(z')) dx(z) this is a (-1)^(|Z|+1) sign.
      // The |Z|=1 sign is forced by the order-2 loop equations on the
      // quadratic curve, the global form by symmetry of omega_{1,2} on the
      // cubic curve (the subsets |Z|=1 and |Z|=2 must cooperate to cancel
      // the asymmetric parts).
      LSeries<FE> denom = LSeries<FE>::constant(FE(Z.size() % 2 ? 1 : -1), ord);
      for (int j : Z) denom = denom * kf[(size_t)j];
      LSeries<FE> denom_inv = denom.inverse();
      // only ts coefficients below the kernel pole depth survive the division
      long keep = -denom_inv.valuation();

      std::vector<int> sheets;
      sheets.push_back(0);
      sheets.insert(sheets.end(), Z.begin(), Z.end());
      std::vector<PartialTerm> W =
          wsum(fr, ord, sheets, outer_labels, g, n_out, keep);
      for (auto& w : W) {
        LSeries<FE> wts = w.ts * denom_inv;
        if (basecheck)
          // base-point term of the kernel numerator: no z0 dependence at all
          resolve(fr, ord, w, wts, 0, qfac, qpows, *basecheck);
        w.pend.insert(w.pend.begin(), PendingExp{0, false, 0});
        resolve(fr, ord, w, wts, 0, qfac, qpows, acc);
      }
    }

    // descend to Q and canonicalize
    for (auto& [key, fe] : acc) {
      Rational q = descend(fr, fe);
      if (is_zero(q)) continue;
      std::vector<std::vector<std::pair<SlotKey, Rational>>> parts;
      parts.reserve(key.size());
      for (auto& [den, j] : key) parts.push_back(canon_monomial(j, den));
      SlotTuple tuple(key.size());
      std::function<void(size_t, Rational)> rec = [&](size_t v, Rational c) {
        if (v == key.size()) {
          result->add(tuple, c);
          return;
        }
        for (auto& [sk, sc] : parts[v]) {
          tuple[v] = sk;
          rec(v + 1, [&]() -> Rational { return c * sc; }());
        }
      };
      rec(0, q);
    }
  }

  Correlator compute(int g, int n) {
    // omega_{g,n} = recursion step producing n = n_old + 1 variables
    Correlator result(g, n);
    std::map<AccKey, Rational> basecheck_q;
    for (size_t oi = 0; oi < an().orbits().size(); ++oi) {
      const RamOrbit& o = an().orbits()[oi];
      if (!o.participates()) continue;
      const LocalFrame& fr = an().frame(oi);
      long ord0 = 16 + 8L * (2 * g + n) * (fr.r() + 1);
      for (long ord = ord0;; ord *= 2) {
        if (ord > 1 << 14)
          throw PrecisionError("recursion at " + o.label() +
                               " did not stabilize at order " + std::to_string(ord));
        try {
          Correlator partial(g, n);
          Acc basecheck;
          orbit_contribution(fr, g, n - 1, ord, &partial, &basecheck);
          for (auto& [t, c] : partial.terms) result.add(t, c);
          for (auto& [k, v] : basecheck) {
            Rational q = descend(fr, v);
            if (is_zero(q)) continue;
            auto it = basecheck_q.find(k);
            if (it == basecheck_q.end())
              basecheck_q.emplace(k, q);
            else {
              it->second += q;
              if (is_zero(it->second)) basecheck_q.erase(it);
            }
          }
          break;
        } catch (const PrecisionError&) {
          if (ord * 2 > 1 << 14) throw;
        }
      }
    }
    if (!basecheck_q.empty()) {
      std::string detail;
      for (const auto& [k, v] : basecheck_q) {
        detail += " [";
        for (const auto& [den, j] : k) {
          detail += "(j=" + std::to_string(j) + ";den:";
          for (auto& [o, p] : den)
            detail += std::to_string(o) + "^" + std::to_string(p) + ",";
          detail += ")";
        }
        detail += " -> " + rational_to_string(v) + "]";
      }
      throw VerificationError(
          "kernel base-point dependence detected in omega_{" + std::to_string(g) +
          "," + std::to_string(n) + "}:" + detail);
    }
    return result;
  }

  const Correlator& ensure_internal(int g, int n) {
    if (n < 1 || g < 0 || 2 * g - 2 + n <= 0)
      throw InputError("correlator (" + std::to_string(g) + "," + std::to_string(n) +
                       ") is not produced by the recursion");
    auto key = std::make_pair(g, n);
    auto it = table.find(key);
    if (it != table.end()) return it->second;
    Correlator c = compute(g, n);
    auto ci = corrections.find(key);
    if (ci != corrections.end())
      for (const auto& [t, v] : ci->second.terms) c.add(t, v);
    return table.emplace(key, std::move(c)).first->second;
  }

  // ----- verification helpers ----------------------------------------------

  // Generic rational evaluation points for outer variables, avoiding poles.
  std::vector<Rational> generic_points(int count) const {
    std::vector<Rational> pts;
    Rational z = frac(17, 5);
    while ((int)pts.size() < count) {
      bool ok = true;
      for (const auto& o : an().orbits())
        if (!o.at_infinity && !o.modulus.zero() && is_zero(o.modulus.eval(z)))
          ok = false;
      if (ok) pts.push_back(z);
      z += frac(7, 3);
    }
    return pts;
  }

  // omega_{g,n}(sheet; fixed rational outer points) as a scalar t-series,
  // with omega_{0,1} and omega_{0,2} handled in closed form.
  LSeries<FE> factor_numeric(const LocalFrame& fr, long ord, int gi,
                             const std::vector<int>& decks,
                             const std::vector<Rational>& zs) {
    int ni = (int)(decks.size() + zs.size());
    if (gi == 0 && ni == 1) return fr.ydx_pullback(decks[0], ord);
    if (gi == 0 && ni == 2) {
      if (decks.size() == 2) {
        LSeries<FE> diff =
            point_cached(fr, decks[0], ord) - point_cached(fr, decks[1], ord);
        return dz_cached(fr, decks[0], ord) * dz_cached(fr, decks[1], ord) *
               (diff * diff).inverse();
      }
      LSeries<FE> diff =
          point_cached(fr, decks[0], ord) - LSeries<FE>::constant(FE(zs[0]), ord);
      return dz_cached(fr, decks[0], ord) * (diff * diff).inverse();
    }
    const Correlator& w = ensure_internal(gi, ni);
    LSeries<FE> total = LSeries<FE>::zero(ord);
    for (const auto& [tuple, c] : w.terms) {
      LSeries<FE> t = FE(c) * LSeries<FE>::constant(FE(1), ord);
      for (size_t s = 0; s < decks.size(); ++s)
        t = t * eval_cached(fr, tuple[s], decks[s], ord) * dz_cached(fr, decks[s], ord);
      FE scal(1);
      for (size_t s = 0; s < zs.size(); ++s) {
        RatFuncQ f = slot_scalar(tuple[decks.size() + s], an());
        scal = scal * FE(f.eval(zs[s]));
      }
      total = total + scal * t;
    }
    return total;
  }

  // E_i at one orbit: sum over i-subsets of the local fiber of the full
  // correlator product (omega_{0,1} blocks included), outer points fixed.
  LSeries<FE> loop_sum(const LocalFrame& fr, long ord, int i, int g,
                       const std::vector<Rational>& zs) {
    int r = fr.r();
    LSeries<FE> total = LSeries<FE>::zero(ord);
    std::vector<int> decks;
    std::function<void(int)> choose = [&](int from) {
      if ((int)decks.size() == i) {
        for_partitions(decks, [&](const std::vector<std::vector<int>>& blocks) {
          int m = (int)blocks.size();
          int gsum = g + m - i;
          if (gsum < 0) return;
          size_t no = zs.size();
          std::vector<int> assign(no, 0);
          for (;;) {
            std::vector<std::vector<Rational>> outs((size_t)m);
            for (size_t t = 0; t < no; ++t)
              outs[(size_t)assign[t]].push_back(zs[t]);
            for_compositions(gsum, m, [&](const std::vector<int>& gs) {
              LSeries<FE> prod = LSeries<FE>::constant(FE(1), ord);
              for (int b = 0; b < m; ++b)
                prod = prod * factor_numeric(fr, ord, gs[(size_t)b],
                                             blocks[(size_t)b], outs[(size_t)b]);
              total = total + prod;
            });
            size_t t = 0;
            for (; t < no; ++t) {
              if (++assign[t] < m) break;
              assign[t] = 0;
            }
            if (t == no) break;
          }
        });
        return;
      }
      for (int d = from; d < r; ++d) {
        decks.push_back(d);
        choose(d + 1);
        decks.pop_back();
      }
    };
    choose(0);
    return total;
  }
};

// ---------------------------------------------------------------------------

RecursionEngine::RecursionEngine(Curve curve) : curve_(std::move(curve)) {
  an_ = std::make_unique<CurveAnalysis>(curve_);
  if (!an_->admissible())
    throw InputError("curve is not admissible:\n" + an_->report());
  impl_ = std::make_unique<Impl>(this);
}

RecursionEngine::~RecursionEngine() = default;

void RecursionEngine::rebuild(const PolyQ& hint) {
  impl_->split_hints.push_back(hint);
  an_ = std::make_unique<CurveAnalysis>(curve_, impl_->split_hints);
  impl_->table.clear();
  impl_->canon_cache.clear();
}

template <typename F>
auto RecursionEngine::with_restart(F&& f) -> decltype(f()) {
  for (int attempt = 0;; ++attempt) {
    try {
      return f();
    } catch (const SplitRequest& sr) {
      if (attempt > 16) throw;
      rebuild(sr.factor);
    }
  }
}

void RecursionEngine::add_correction(int g, int n, Correlator delta) {
  for (const auto& [tuple, c] : delta.terms)
    for (const SlotKey& k : tuple)
      if (k.orbit >= 0)
        throw InputError("corrections must not reference finite-orbit poles");
  auto key = std::make_pair(g, n);
  auto [it, fresh] = impl_->corrections.emplace(key, std::move(delta));
  if (!fresh)
    throw InputError("correction for this correlator was already registered");
  impl_->table.clear();
}

const Correlator& RecursionEngine::correlator(int g, int n) {
  return with_restart([&]() -> const Correlator& { return impl_->ensure_internal(g, n); });
}

void RecursionEngine::verify_symmetry(int g, int n) {
  const Correlator& w = correlator(g, n);
  std::vector<size_t> perm((size_t)n);
  for (size_t i = 0; i < (size_t)n; ++i) perm[i] = i;
  while (std::next_permutation(perm.begin(), perm.end())) {
    for (const auto& [tuple, c] : w.terms) {
      SlotTuple p((size_t)n);
      for (size_t i = 0; i < (size_t)n; ++i) p[i] = tuple[perm[i]];
      auto it = w.terms.find(p);
      if (it == w.terms.end() || !(it->second == c))
        throw VerificationError("omega_{" + std::to_string(g) + "," +
                                std::to_string(n) + "} is not symmetric");
    }
  }
}

void RecursionEngine::verify_residueless(int g, int n) {
  const Correlator& w = correlator(g, n);
  for (size_t oi = 0; oi < an_->orbits().size(); ++oi) {
    const RamOrbit& o = an_->orbits()[oi];
    if (!o.participates() || o.at_infinity) continue;
    const LocalFrame& fr = an_->frame(oi);
    for (int v = 0; v < n; ++v) {
      std::map<SlotTuple, FE> residue;
      for (const auto& [tuple, c] : w.terms) {
        const SlotKey& k = tuple[(size_t)v];
        if (k.orbit != (int)oi) continue;
        long pd = o.modulus.degree();
        long ord = pd * k.k + k.j + 2 * pd + 8;
        LSeries<FE> z = LSeries<FE>::constant(fr.alpha(), ord) + LSeries<FE>::var(ord);
        LSeries<FE> val = eval_ratfunc(slot_scalar(k, *an_), z,
                                       [](const Rational& q) { return FE(q); });
        FE res = val.coeff(-1);
        if (is_zero(res)) continue;
        SlotTuple rest = tuple;
        rest.erase(rest.begin() + v);
        auto it = residue.find(rest);
        if (it == residue.end())
          residue.emplace(rest, FE(c) * res);
        else
          it->second = it->second + FE(c) * res;
      }
      for (auto& [rest, total] : residue)
        if (!is_zero(total))
          throw VerificationError("nonzero residue of omega_{" + std::to_string(g) +
                                  "," + std::to_string(n) + "} at " + o.label());
    }
  }
}

void RecursionEngine::verify_pole_bounds(int g, int n) {
  const Correlator& w = correlator(g, n);
  long chi = 2L * g - 2 + n;
  for (const auto& [tuple, c] : w.terms) {
    (void)c;
    for (const SlotKey& k : tuple) {
      long order, bound;
      if (k.orbit >= 0) {
        const RamOrbit& o = an_->orbits()[(size_t)k.orbit];
        order = k.k;
        bound = (o.s - 1) * chi + 2 * g;
      } else {
        // monomial z^j dz: pole at infinity of order j + 2
        const RamOrbit* inf = nullptr;
        bool essential_inf = false;
        for (const auto& o : an_->orbits()) {
          if (o.at_infinity && o.participates()) inf = &o;
          if (o.at_infinity && o.essential) essential_inf = true;
        }
        // At an essential singularity the polynomial part is unconstrained
        // by the meromorphic pole-order bound.
        if (essential_inf) continue;
        if (!inf)
          throw VerificationError("pole at infinity but no participating orbit there");
        order = k.j + 2;
        bound = (inf->s - 1) * chi + 2 * g;
      }
      if (order > bound)
        throw VerificationError("pole order " + std::to_string(order) +
                                " exceeds bound " + std::to_string(bound) +
                                " for omega_{" + std::to_string(g) + "," +
                                std::to_string(n) + "}");
    }
  }
}

void RecursionEngine::verify_loop_equations(int g, int n) {
  with_restart([&]() {
    std::vector<Rational> zs = impl_->generic_points(n - 1);
    for (size_t oi = 0; oi < an_->orbits().size(); ++oi) {
      const RamOrbit& o = an_->orbits()[oi];
      if (!o.participates()) continue;
      const LocalFrame& fr = an_->frame(oi);
      int r = fr.r();
      for (int i = 1; i <= r; ++i) {
        long d = -1 - floor_div(o.s * (i - 1), r);
        long need = -(long)r * d - i;
        long ord0 = std::max<long>(need + 8, 16 + 8L * (2 * g + n) * (r + 1));
        for (long ord = ord0;; ord *= 2) {
          if (ord > 1 << 14)
            throw PrecisionError("loop equation check did not stabilize");
          try {
            LSeries<FE> E = impl_->loop_sum(fr, ord, i, g, zs);
            long v = E.valuation();
            if (v < need)
              throw VerificationError(
                  "loop equation of order " + std::to_string(i) + " fails at " +
                  o.label() + " for omega_{" + std::to_string(g) + "," +
                  std::to_string(n) + "}: valuation " + std::to_string(v) +
                  " < " + std::to_string(need));
            break;
          } catch (const PrecisionError&) {
            if (ord * 2 > 1 << 14) throw;
          }
        }
      }
    }
    return 0;
  });
}

void RecursionEngine::verify_projection(int g, int n) {
  with_restart([&]() {
    const Correlator& w = correlator(g, n);
    std::vector<Rational> zs = impl_->generic_points(n - 1);

    // expected z0-marginal: sum over terms of coeff * product of the other
    // slots evaluated at the fixed points
    std::map<SlotKey, Rational> expected;
    for (const auto& [tuple, c] : w.terms) {
      Rational v = c;
      for (size_t s = 1; s < tuple.size(); ++s)
        v *= slot_scalar(tuple[s], *an_).eval(zs[s - 1]);
      if (is_zero(v)) continue;
      auto it = expected.find(tuple[0]);
      if (it == expected.end())
        expected.emplace(tuple[0], v);
      else {
        it->second += v;
        if (is_zero(it->second)) expected.erase(it);
      }
    }

    std::map<SlotKey, Rational> got;
    // At an essential singularity the projector also picks up the residue at
    // infinity.  The pairing Res_{t=inf} (int B(z0,.)) t^j dt returns z0^j dz0
    // exactly, i.e. the projector acts as the identity on the monomial part,
    // while the finite-orbit slots (degree <= -2 at infinity after pairing)
    // contribute nothing there.  So the infinity contribution is the monomial
    // component of the correlator itself, in closed form.
    bool essential_inf = false;
    for (const auto& o : an_->orbits())
      if (o.at_infinity && o.essential) essential_inf = true;
    if (essential_inf)
      for (const auto& [sk, v] : expected)
        if (sk.orbit < 0) got.emplace(sk, v);
    for (size_t oi = 0; oi < an_->orbits().size(); ++oi) {
      const RamOrbit& o = an_->orbits()[oi];
      if (!o.participates()) continue;
      const LocalFrame& fr = an_->frame(oi);
      long ord0 = 16 + 8L * (2 * g + n) * (fr.r() + 1);
      for (long ord = ord0;; ord *= 2) {
        if (ord > 1 << 14) throw PrecisionError("projection check did not stabilize");
        try {
          Poly<FE> qfac(FE(1));
          if (!fr.at_infinity() && fr.orbit().modulus.degree() >= 1)
            qfac = divide_root(fr.orbit().modulus, fr.alpha());
          Impl::PartialTerm base;
          base.ts = impl_->factor_numeric(fr, ord, g, {0}, zs);
          base.outs.assign(1, Impl::RawFactor{});
          base.pend.push_back(Impl::PendingExp{0, false, 0});
          Impl::Acc acc;
          std::vector<Poly<FE>> qpows{Poly<FE>(FE(1))};
          impl_->resolve(fr, ord, base, base.ts, 0, qfac, qpows, acc);
          std::map<SlotKey, Rational> part;
          for (auto& [key, fe] : acc) {
            Rational q = impl_->descend(fr, fe);
            if (is_zero(q)) continue;
            for (auto& [sk, sc] : impl_->canon_monomial(key[0].second, key[0].first)) {
              auto it = part.find(sk);
              if (it == part.end())
                part.emplace(sk, q * sc);
              else
                it->second += q * sc;
            }
          }
          for (auto& [sk, q] : part) {
            if (is_zero(q)) continue;
            auto it = got.find(sk);
            if (it == got.end())
              got.emplace(sk, q);
            else {
              it->second += q;
              if (is_zero(it->second)) got.erase(it);
            }
          }
          break;
        } catch (const PrecisionError&) {
          if (ord * 2 > 1 << 14) throw;
        }
      }
    }
    if (!(expected == got))
      throw VerificationError("projection property fails for omega_{" +
                              std::to_string(g) + "," + std::to_string(n) + "}");
    return 0;
  });
}

void RecursionEngine::verify_homogeneity(const Curve& curve, int g, int n,
                                         const Rational& c) {
  RecursionEngine e1(curve);
  RecursionEngine e2(curve.with_scaled_y(c));
  const Correlator& w1 = e1.correlator(g, n);
  const Correlator& w2 = e2.correlator(g, n);
  Rational scale = pow_rational(c, 2L - 2 * g - n);
  Correlator w1s(g, n);
  for (const auto& [t, v] : w1.terms) w1s.add(t, [&]() -> Rational { return v * scale; }());
  if (!(w1s == w2))
    throw VerificationError("homogeneity fails for omega_{" + std::to_string(g) +
                            "," + std::to_string(n) + "}");
}

}  // namespace specrec
