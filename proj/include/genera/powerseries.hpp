#pragma once
#include "genera/qyseries.hpp"
#include "genera/vgraded.hpp"

namespace genera {

// Context for ring operations that need truncation data (y-caps for
// |y| < 1 expansions).  Rings that are exact ignore it.
struct RingCtx {
  int ycap = 64;
};

inline Q ring_zero_like(const Q&) { return Q(0); }
inline Q ring_one_like(const Q&) { return Q(1); }
inline bool ring_is_zero(const Q& x) { return qzero(x); }
inline Q ring_invert(const Q& x, const RingCtx&) {
  if (qzero(x)) throw ring_error("division by zero");
  return Q(1) / x;
}

inline YLaurent ring_zero_like(const YLaurent&) { return YLaurent::zero(); }
inline YLaurent ring_one_like(const YLaurent&) { return YLaurent::one(); }
inline bool ring_is_zero(const YLaurent& x) { return x.is_exact_zero(); }
inline YLaurent ring_invert(const YLaurent& x, const RingCtx& ctx) { return x.inverted(ctx.ycap); }

inline QYSeries ring_zero_like(const QYSeries& x) { return QYSeries::zero(x.qmax); }
inline QYSeries ring_one_like(const QYSeries& x) { return QYSeries::one(x.qmax); }
inline bool ring_is_zero(const QYSeries& x) { return x.is_zero(); }
inline QYSeries ring_invert(const QYSeries& x, const RingCtx& ctx) { return x.inverted(ctx.ycap); }

inline VGraded ring_zero_like(const VGraded& x) { return VGraded::zero(*x.ring); }
inline VGraded ring_one_like(const VGraded& x) { return VGraded::one(*x.ring); }
inline bool ring_is_zero(const VGraded& x) { return x.is_zero(); }
inline VGraded ring_invert(const VGraded& x, const RingCtx&) { return x.inverted(); }

inline Q ring_log(const Q& x, const RingCtx&) {
  if (!(x == Q(1))) throw ring_error("log of a rational other than 1");
  return Q(0);
}
inline Q ring_exp(const Q& x, const RingCtx&) {
  if (!qzero(x)) throw ring_error("exp of a rational other than 0");
  return Q(1);
}

// log(1 + h) for h supported in positive y2-exponents; the result is an
// infinite tail in general, truncated at the context cap.
inline YLaurent ring_log(const YLaurent& x, const RingCtx& ctx) {
  if (!(x.coeff(0) == Q(1))) throw ring_error("y-log needs constant term 1");
  YLaurent h = x - YLaurent::one();
  if (!h.a.empty() && h.lo < 1) throw ring_error("y-log needs support in positive exponents");
  if (h.is_exact_zero()) return YLaurent::zero();
  int cap = std::min(ctx.ycap, x.valid);
  YLaurent acc, pw = YLaurent::one();
  acc.valid = cap;
  for (int k = 1; k <= cap; ++k) {
    pw = (pw * h).truncate_y(cap);
    if (pw.stored_empty() && pw.valid >= cap) break;
    acc = acc + Q(k % 2 ? 1 : -1, k) * pw;
  }
  return acc.truncate_y(cap);
}
inline YLaurent ring_exp(const YLaurent& x, const RingCtx& ctx) {
  if (!qzero(x.coeff(0))) throw ring_error("y-exp needs zero constant term");
  if (!x.a.empty() && x.lo < 1) throw ring_error("y-exp needs support in positive exponents");
  if (x.is_exact_zero()) return YLaurent::one();
  int cap = std::min(ctx.ycap, x.valid);
  YLaurent acc = YLaurent::one(), pw = YLaurent::one();
  acc.valid = cap;
  Q fact(1);
  for (int k = 1; k <= cap; ++k) {
    pw = (pw * x).truncate_y(cap);
    if (pw.stored_empty() && pw.valid >= cap) break;
    fact *= k;
    acc = acc + (Q(1) / fact) * pw;
  }
  return acc.truncate_y(cap);
}

inline QYSeries ring_log(const QYSeries& f, const RingCtx& ctx) {
  YLaurent l0 = ring_log(f.qrow(0), ctx);
  YLaurent inv0 = f.qrow(0).inverted(ctx.ycap);
  QYSeries m = inv0 * f - QYSeries::one(f.qmax);
  QYSeries acc = QYSeries::constant(f.qmax, l0), pw = QYSeries::one(f.qmax);
  for (int k = 1; k <= f.qmax; ++k) {
    pw = pw * m;
    acc = acc + Q(k % 2 ? 1 : -1, k) * pw;
  }
  return acc;
}
inline QYSeries ring_exp(const QYSeries& g, const RingCtx& ctx) {
  YLaurent e0 = ring_exp(g.qrow(0), ctx);
  QYSeries m = g - QYSeries::constant(g.qmax, g.qrow(0));
  QYSeries acc = QYSeries::one(g.qmax), pw = QYSeries::one(g.qmax);
  Q fact(1);
  for (int k = 1; k <= g.qmax; ++k) {
    pw = pw * m;
    fact *= k;
    acc = acc + (Q(1) / fact) * pw;
  }
  return e0 * acc;
}

inline VGraded ring_log(const VGraded& x, const RingCtx&) { return x.log1(); }
inline VGraded ring_exp(const VGraded& x, const RingCtx&) { return x.exp0(); }

// Dense power series over a coefficient ring C, truncated at nmax.
template <class C>
struct PowerSeries {
  int nmax = 0;
  std::vector<C> a;

  PowerSeries() = default;
  PowerSeries(int nmax_, const C& exemplar)
      : nmax(nmax_), a(static_cast<size_t>(nmax_) + 1, ring_zero_like(exemplar)) {
    if (nmax_ < 0) throw config_error("nmax < 0");
  }

  static PowerSeries one(int nmax_, const C& exemplar) {
    PowerSeries r(nmax_, exemplar);
    r.a[0] = ring_one_like(exemplar);
    return r;
  }
  static PowerSeries monomial(int nmax_, int k, const C& value) {
    PowerSeries r(nmax_, value);
    if (k < 0 || k > nmax_) throw window_error("monomial exponent outside truncation");
    r.a[static_cast<size_t>(k)] = value;
    return r;
  }

  const C& coeff(int k) const {
    if (k < 0 || k > nmax) throw window_error("p-exponent " + std::to_string(k) + " beyond pmax " + std::to_string(nmax));
    return a[static_cast<size_t>(k)];
  }
  C& coeff_mut(int k) {
    if (k < 0 || k > nmax) throw window_error("p-exponent beyond pmax");
    return a[static_cast<size_t>(k)];
  }
  bool is_zero() const {
    for (const auto& x : a)
      if (!ring_is_zero(x)) return false;
    return true;
  }

  friend PowerSeries operator+(const PowerSeries& x, const PowerSeries& y) {
    PowerSeries r(std::min(x.nmax, y.nmax), x.a[0]);
    for (int k = 0; k <= r.nmax; ++k) r.a[k] = x.a[k] + y.a[k];
    return r;
  }
  friend PowerSeries operator-(const PowerSeries& x) {
    PowerSeries r = x;
    for (auto& v : r.a) v = -v;
    return r;
  }
  friend PowerSeries operator-(const PowerSeries& x, const PowerSeries& y) { return x + (-y); }
  friend PowerSeries operator*(const PowerSeries& x, const PowerSeries& y) {
    PowerSeries r(std::min(x.nmax, y.nmax), x.a[0]);
    for (int k = 0; k <= r.nmax; ++k)
      for (int i = 0; i <= k; ++i) {
        if (ring_is_zero(x.a[i])) continue;
        r.a[k] = r.a[k] + x.a[i] * y.a[k - i];
      }
    return r;
  }
  friend PowerSeries operator*(const Q& c, const PowerSeries& x) {
    PowerSeries r = x;
    for (auto& v : r.a) v = c * v;
    return r;
  }
  friend bool operator==(const PowerSeries& x, const PowerSeries& y) {
    return x.nmax == y.nmax && x.a == y.a;
  }

  PowerSeries truncated(int newmax) const {
    if (newmax > nmax) throw window_error("cannot extend pmax");
    PowerSeries r(newmax, a[0]);
    for (int k = 0; k <= newmax; ++k) r.a[k] = a[k];
    return r;
  }

  PowerSeries inverted(const RingCtx& ctx = {}) const {
    PowerSeries r(nmax, a[0]);
    C inv0 = ring_invert(a[0], ctx);
    r.a[0] = inv0;
    for (int k = 1; k <= nmax; ++k) {
      C s = ring_zero_like(a[0]);
      for (int i = 1; i <= k; ++i) s = s + a[i] * r.a[k - i];
      r.a[k] = -(inv0 * s);
    }
    return r;
  }

  PowerSeries pow_int(long e, const RingCtx& ctx = {}) const {
    if (e < 0) return inverted(ctx).pow_int(-e, ctx);
    PowerSeries acc = one(nmax, a[0]), base = *this;
    while (e > 0) {
      if (e & 1) acc = acc * base;
      base = base * base;
      e >>= 1;
    }
    return acc;
  }

  // (1 + N)^r by the binomial series; requires constant term exactly one.
  PowerSeries pow_q(const Q& r) const {
    if (!(a[0] == ring_one_like(a[0]))) throw ring_error("fractional power needs constant term 1");
    PowerSeries n = *this;
    n.a[0] = ring_zero_like(a[0]);
    PowerSeries acc = one(nmax, a[0]), pw = one(nmax, a[0]);
    for (int k = 1; k <= nmax; ++k) {
      pw = pw * n;
      if (pw.is_zero()) break;
      acc = acc + binom_q(r, static_cast<unsigned long>(k)) * pw;
    }
    return acc;
  }
  PowerSeries log1() const {
    if (!(a[0] == ring_one_like(a[0]))) throw ring_error("log needs constant term 1");
    PowerSeries n = *this;
    n.a[0] = ring_zero_like(a[0]);
    PowerSeries acc(nmax, a[0]), pw = one(nmax, a[0]);
    for (int k = 1; k <= nmax; ++k) {
      pw = pw * n;
      if (pw.is_zero()) break;
      acc = acc + Q(k % 2 ? 1 : -1, k) * pw;
    }
    return acc;
  }
  PowerSeries exp0() const {
    if (!ring_is_zero(a[0])) throw ring_error("exp needs zero constant term");
    PowerSeries acc = one(nmax, a[0]), pw = one(nmax, a[0]);
    Q fact(1);
    for (int k = 1; k <= nmax; ++k) {
      pw = pw * (*this);
      if (pw.is_zero()) break;
      fact *= k;
      acc = acc + (Q(1) / fact) * pw;
    }
    return acc;
  }

  PowerSeries scaled(const C& c) const {
    PowerSeries r = *this;
    for (auto& v : r.a) v = c * v;
    return r;
  }
  static PowerSeries constant(int nmax_, const C& c) {
    PowerSeries r(nmax_, c);
    r.a[0] = c;
    return r;
  }

  // log/exp that route the constant term through the coefficient ring, so a
  // joint constant term of 1 suffices (e.g. log(1 + p + q)).
  PowerSeries log_full(const RingCtx& ctx = {}) const {
    C la0 = ring_log(a[0], ctx);
    C u = ring_invert(a[0], ctx);
    PowerSeries n = scaled(u) - one(nmax, a[0]);
    PowerSeries acc = constant(nmax, la0), pw = one(nmax, a[0]);
    for (int k = 1; k <= nmax; ++k) {
      pw = pw * n;
      acc = acc + Q(k % 2 ? 1 : -1, k) * pw;
    }
    return acc;
  }
  PowerSeries exp_full(const RingCtx& ctx = {}) const {
    C e0 = ring_exp(a[0], ctx);
    PowerSeries m = *this - constant(nmax, a[0]);
    PowerSeries acc = one(nmax, a[0]), pw = one(nmax, a[0]);
    Q fact(1);
    for (int k = 1; k <= nmax; ++k) {
      pw = pw * m;
      fact *= k;
      acc = acc + (Q(1) / fact) * pw;
    }
    return acc.scaled(e0);
  }

  // p -> c p^m; the truncation order rescales to m(nmax+1)-1.
  PowerSeries subst_scale(const Q& c, int m = 1) const {
    if (m < 1) throw config_error("substitution power must be >= 1");
    PowerSeries r(m * (nmax + 1) - 1, a[0]);
    Q cp(1);
    for (int k = 0; k <= nmax; ++k) {
      r.a[static_cast<size_t>(m) * k] = cp * a[k];
      cp *= c;
    }
    return r;
  }
  PowerSeries at_minus_p() const { return subst_scale(Q(-1), 1); }

  PowerSeries div_ppow(int k) const {
    for (int i = 0; i < k; ++i)
      if (!ring_is_zero(a[i])) throw ring_error("p-division with nonzero low coefficients");
    PowerSeries r(nmax - k, a[0]);
    for (int i = 0; i <= r.nmax; ++i) r.a[i] = a[i + k];
    return r;
  }
  PowerSeries mul_ppow(int k) const {
    PowerSeries r(nmax, a[0]);
    for (int i = k; i <= nmax; ++i) r.a[i] = a[i - k];
    return r;
  }

  // Keep exactly the coefficients with exponent = alpha (mod 4).
  PowerSeries filter_mod4(int alpha) const {
    PowerSeries r(nmax, a[0]);
    int al = ((alpha % 4) + 4) % 4;
    for (int k = 0; k <= nmax; ++k)
      if (k % 4 == al) r.a[k] = a[k];
    return r;
  }
};

}  // namespace genera
