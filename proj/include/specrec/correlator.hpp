#ifndef SPECREC_CORRELATOR_HPP
#define SPECREC_CORRELATOR_HPP

#include <map>
#include <string>
#include <vector>

#include "specrec/curve.hpp"

namespace specrec {

// One pole descriptor for a single variable of a correlator differential.
//  - orbit >= 0: the scalar part z^j / p(z)^k where p is the modulus of that
//    ramification orbit (j < deg p after canonicalization, k >= 1);
//  - orbit == -1: the monomial z^j (a pole at infinity of order j + 2).
// The differential dz is implicit in every slot.
struct SlotKey {
  int orbit = -1;
  int k = 0;
  long j = 0;
  auto operator<=>(const SlotKey&) const = default;
};

using SlotTuple = std::vector<SlotKey>;

// A correlator omega_{g,n} with 2g - 2 + n > 0: a finite sum of products of
// single-variable basis differentials, stored as a sparse map from n-tuples
// of slot keys to rational coefficients.  Tuple position = variable index.
struct Correlator {
  int g = 0;
  int n = 0;
  std::map<SlotTuple, Rational> terms;

  Correlator() = default;
  Correlator(int g_, int n_) : g(g_), n(n_) {}

  void add(const SlotTuple& t, const Rational& c) {
    if (is_zero(c)) return;
    auto it = terms.find(t);
    if (it == terms.end()) {
      terms.emplace(t, c);
      return;
    }
    it->second += c;
    if (is_zero(it->second)) terms.erase(it);
  }

  bool operator==(const Correlator& o) const {
    return g == o.g && n == o.n && terms == o.terms;
  }

  std::string to_string() const;
};

// The scalar part of the basis differential named by a key.
RatFuncQ slot_scalar(const SlotKey& key, const CurveAnalysis& an);

}  // namespace specrec

#endif
