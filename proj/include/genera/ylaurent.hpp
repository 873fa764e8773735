#pragma once
#include <climits>
#include <initializer_list>
#include <sstream>
#include <utility>

#include "genera/rational.hpp"

namespace genera {

inline constexpr int kExact = INT_MAX;

inline int sat_add(int v, int d) {
  if (v == kExact || d == kExact) return kExact;
  return v + d;
}

// Laurent series in y^{1/2}; the coefficient of y^{e/2} sits at y2-exponent e.
// Exponents below `lo` are exactly zero.  Exponents above `valid` are unknown:
// they belong to the truncated tail of an expansion taken in the region
// |y| < 1 (quasi-Jacobi constant terms and Laurent inverses live there).
// valid == kExact marks an exact finite Laurent polynomial.
struct YLaurent {
  int lo = 0;
  std::vector<Q> a;
  int valid = kExact;

  YLaurent() = default;
  YLaurent(int lo_, std::vector<Q> c, int valid_ = kExact)
      : lo(lo_), a(std::move(c)), valid(valid_) {
    normalize();
  }

  static YLaurent zero() { return YLaurent(); }
  static YLaurent one() { return monomial(0, Q(1)); }
  static YLaurent monomial(int e, const Q& c) {
    YLaurent r;
    if (!qzero(c)) {
      r.lo = e;
      r.a = {c};
    }
    return r;
  }

  bool stored_empty() const { return a.empty(); }
  bool is_exact_zero() const { return a.empty() && valid == kExact; }
  int hi_stored() const { return lo + static_cast<int>(a.size()) - 1; }
  int first_unknown() const { return sat_add(valid, 1); }

  void normalize() {
    size_t front = 0;
    while (front < a.size() && qzero(a[front])) ++front;
    if (front) {
      a.erase(a.begin(), a.begin() + static_cast<long>(front));
      lo += static_cast<int>(front);
    }
    while (!a.empty() && qzero(a.back())) a.pop_back();
    if (valid != kExact && !a.empty() && hi_stored() > valid) {
      if (valid < lo)
        a.clear();
      else
        a.resize(static_cast<size_t>(valid - lo + 1));
      while (!a.empty() && qzero(a.back())) a.pop_back();
    }
    if (a.empty()) lo = 0;
  }

  const Q& coeff(int e) const {
    static const Q zero_q(0);
    if (e > valid) throw window_error("y2-exponent " + std::to_string(e) + " beyond validity " + std::to_string(valid));
    if (a.empty() || e < lo || e > hi_stored()) return zero_q;
    return a[static_cast<size_t>(e - lo)];
  }

  YLaurent& truncate_y(int cap) {
    valid = std::min(valid, cap);
    normalize();
    return *this;
  }

  YLaurent shifted(int k) const {
    YLaurent r = *this;
    if (!r.a.empty()) r.lo += k;
    r.valid = sat_add(r.valid, k);
    return r;
  }

  // y -> y^m on the y2-lattice, m >= 1: exponents scale by m; the result is
  // known-zero strictly between scaled known exponents.
  YLaurent subst_pow(int m) const {
    YLaurent r;
    r.valid = (valid == kExact) ? kExact : m * valid + (m - 1);
    if (a.empty()) return r;
    r.lo = m * lo;
    r.a.assign(static_cast<size_t>(m * hi_stored() - m * lo + 1), Q(0));
    for (size_t i = 0; i < a.size(); ++i) r.a[m * i] = a[i];
    r.normalize();
    return r;
  }

  // y -> 1/y; only meaningful on exact finite series.
  YLaurent flipped() const {
    if (valid != kExact) throw window_error("y-inversion of a windowed series");
    YLaurent r;
    r.a.assign(a.rbegin(), a.rend());
    r.lo = -hi_stored();
    if (a.empty()) r.lo = 0;
    r.normalize();
    return r;
  }

  // y d/dy: multiplies the y2^e coefficient by e/2.
  YLaurent ydy() const {
    YLaurent r = *this;
    for (size_t i = 0; i < r.a.size(); ++i) r.a[i] *= qof(r.lo + static_cast<int>(i), 2);
    r.normalize();
    return r;
  }

  friend YLaurent operator+(const YLaurent& x, const YLaurent& y) {
    YLaurent r;
    r.valid = std::min(x.valid, y.valid);
    if (x.a.empty() && y.a.empty()) return r;
    int lo2 = x.a.empty() ? y.lo : (y.a.empty() ? x.lo : std::min(x.lo, y.lo));
    int hi2 = std::max(x.a.empty() ? lo2 : x.hi_stored(), y.a.empty() ? lo2 : y.hi_stored());
    hi2 = std::min(hi2, r.valid);
    if (hi2 < lo2) return r;
    r.lo = lo2;
    r.a.assign(static_cast<size_t>(hi2 - lo2 + 1), Q(0));
    auto acc = [&](const YLaurent& s) {
      for (size_t i = 0; i < s.a.size(); ++i) {
        int e = s.lo + static_cast<int>(i);
        if (e <= hi2) r.a[static_cast<size_t>(e - lo2)] += s.a[i];
      }
    };
    acc(x);
    acc(y);
    r.normalize();
    return r;
  }

  friend YLaurent operator-(const YLaurent& x) {
    YLaurent r = x;
    for (auto& c : r.a) c = -c;
    return r;
  }
  friend YLaurent operator-(const YLaurent& x, const YLaurent& y) { return x + (-y); }

  friend YLaurent operator*(const YLaurent& x, const YLaurent& y) {
    if (x.is_exact_zero() || y.is_exact_zero()) return zero();
    int lox = x.a.empty() ? x.first_unknown() : x.lo;
    int loy = y.a.empty() ? y.first_unknown() : y.lo;
    int fu = std::min(sat_add(x.first_unknown(), loy), sat_add(y.first_unknown(), lox));
    YLaurent r;
    r.valid = (fu == kExact) ? kExact : fu - 1;
    if (x.a.empty() || y.a.empty()) return r;
    int lo2 = x.lo + y.lo;
    long len = static_cast<long>(x.a.size() + y.a.size()) - 1;
    if (r.valid != kExact) len = std::min(len, static_cast<long>(r.valid) - lo2 + 1);
    if (len <= 0) return r;
    r.lo = lo2;
    r.a.assign(static_cast<size_t>(len), Q(0));
    for (size_t i = 0; i < x.a.size(); ++i) {
      if (qzero(x.a[i])) continue;
      for (size_t j = 0; j + i < static_cast<size_t>(len) && j < y.a.size(); ++j)
        r.a[i + j] += x.a[i] * y.a[j];
    }
    r.normalize();
    return r;
  }

  friend YLaurent operator*(const Q& c, const YLaurent& x) {
    if (qzero(c)) return zero();
    YLaurent r = x;
    for (auto& v : r.a) v *= c;
    return r;
  }

  friend bool operator==(const YLaurent& x, const YLaurent& y) {
    return x.lo == y.lo && x.valid == y.valid && x.a == y.a;
  }

  // Expansion of 1/this in |y| < 1: ascending from the lowest exponent.
  // cap bounds the resulting validity (infinite tails must stop somewhere).
  YLaurent inverted(int cap) const {
    if (a.empty()) throw ring_error("inverting zero y-series");
    if (a.size() == 1 && valid == kExact)
      return monomial(-lo, Q(1) / a[0]);
    int newvalid = std::min(cap, valid == kExact ? kExact : valid - 2 * lo);
    if (newvalid == kExact) throw ring_error("inverting an infinite tail needs a finite cap");
    int deg = newvalid + lo;  // degree needed of the unit-part inverse
    YLaurent r;
    r.valid = newvalid;
    if (deg < 0) return r;
    std::vector<Q> inv(static_cast<size_t>(deg) + 1, Q(0));
    const Q& c0 = a[0];
    inv[0] = Q(1) / c0;
    for (int k = 1; k <= deg; ++k) {
      Q s(0);
      for (int j = 1; j <= k && j < static_cast<int>(a.size()); ++j)
        s += a[static_cast<size_t>(j)] * inv[static_cast<size_t>(k - j)];
      inv[static_cast<size_t>(k)] = -s / c0;
    }
    r.lo = -lo;
    r.a = std::move(inv);
    r.normalize();
    return r;
  }

  // Exact square root of a perfect-square Laurent polynomial.  The returned
  // branch has positive top coefficient when top_positive is set.
  YLaurent sqrt_exact(bool top_positive = true) const {
    if (valid != kExact) throw window_error("sqrt of a windowed y-series");
    if (a.empty()) return zero();
    if (lo % 2) throw ring_error("sqrt: odd valuation");
    int dega = static_cast<int>(a.size()) - 1;
    if (dega % 2) throw ring_error("sqrt: odd degree unit part");
    Z num = a[0].get_num(), den = a[0].get_den();
    bool neg = sgn(a[0]) < 0;
    if (neg || !mpz_perfect_square_p(num.get_mpz_t()) || !mpz_perfect_square_p(den.get_mpz_t()))
      throw ring_error("sqrt: leading coefficient not a rational square");
    Z rn, rd;
    mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
    mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
    std::vector<Q> r(static_cast<size_t>(dega / 2) + 1, Q(0));
    r[0] = Q(rn) / Q(rd);
    for (int k = 1; k <= dega / 2; ++k) {
      Q s = (k < static_cast<int>(a.size())) ? a[static_cast<size_t>(k)] : Q(0);
      for (int i = 1; i < k; ++i) s -= r[static_cast<size_t>(i)] * r[static_cast<size_t>(k - i)];
      r[static_cast<size_t>(k)] = s / (2 * r[0]);
    }
    YLaurent root(lo / 2, r);
    if (!((root * root) == *this)) throw ring_error("sqrt: not a perfect square");
    if (top_positive && sgn(root.a.back()) < 0) root = -root;
    if (!top_positive && sgn(root.a.back()) > 0) root = -root;
    return root;
  }

  std::string str() const {
    if (a.empty()) return valid == kExact ? "0" : "0 (valid<=" + std::to_string(valid) + ")";
    std::ostringstream os;
    bool first = true;
    for (size_t i = 0; i < a.size(); ++i) {
      if (qzero(a[i])) continue;
      int e = lo + static_cast<int>(i);
      if (!first) os << " + ";
      os << qstr(a[i]) << "*y2^" << e;
      first = false;
    }
    if (valid != kExact) os << " (valid<=" << valid << ")";
    return os.str();
  }
};

}  // namespace genera
