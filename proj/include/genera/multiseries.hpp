#pragma once
#include <map>

#include "genera/powerseries.hpp"

namespace genera {

// One p-coefficient: a Laurent layer in (s, u) over R.  The rectangle claim:
// all content, known or not, sits in [s_lo, inf) x [u_lo, inf); coefficients
// are known up to the validity caps s_hi / u_hi (kExact = everything).
// Reading above a cap is an error; reading below a low is exactly zero.
template <class R>
struct SULayer {
  R proto;  // zero element carrying ring shape (qmax / v-ring)
  std::map<std::pair<int, int>, R> m;
  int s_lo = 0, u_lo = 0;
  int s_hi = kExact, u_hi = kExact;

  explicit SULayer(const R& exemplar) : proto(ring_zero_like(exemplar)) {}

  static SULayer one(const R& exemplar) {
    SULayer l(exemplar);
    l.m[{0, 0}] = ring_one_like(exemplar);
    return l;
  }
  static SULayer monomial(const R& value, int b, int c) {
    SULayer l(value);
    l.s_lo = b;
    l.u_lo = c;
    if (!ring_is_zero(value)) l.m[{b, c}] = value;
    return l;
  }

  void normalize() {
    for (auto it = m.begin(); it != m.end();) {
      bool drop = ring_is_zero(it->second);
      drop = drop || (s_hi != kExact && it->first.first > s_hi);
      drop = drop || (u_hi != kExact && it->first.second > u_hi);
      it = drop ? m.erase(it) : ++it;
    }
    if (!m.empty()) {
      int bl = kExact, cl = kExact;
      for (const auto& [k, v] : m) {
        bl = std::min(bl, k.first);
        cl = std::min(cl, k.second);
      }
      // The lows may only be raised when there is no unknown region at all:
      // a truncated tail in either variable can hide content at any exponent
      // at or above the original claim.
      if (s_hi == kExact && u_hi == kExact) {
        s_lo = bl;
        u_lo = cl;
      } else {
        s_lo = std::min(s_lo, bl);
        u_lo = std::min(u_lo, cl);
      }
    }
  }

  bool stored_empty() const { return m.empty(); }
  bool is_exact_zero() const { return m.empty() && s_hi == kExact && u_hi == kExact; }

  int eff_s_lo() const { return m.empty() ? sat_add(s_hi, 1) : s_lo; }
  int eff_u_lo() const { return m.empty() ? sat_add(u_hi, 1) : u_lo; }

  const R& coeff(int b, int c) const {
    if ((s_hi != kExact && b > s_hi) || (u_hi != kExact && c > u_hi))
      throw window_error("(s,u)-exponent (" + std::to_string(b) + "," + std::to_string(c) + ") beyond validity (" +
                         std::to_string(s_hi) + "," + std::to_string(u_hi) + ")");
    auto it = m.find({b, c});
    return it == m.end() ? proto : it->second;
  }

  friend SULayer operator+(const SULayer& x, const SULayer& y) {
    SULayer r(x.proto);
    r.s_hi = std::min(x.s_hi, y.s_hi);
    r.u_hi = std::min(x.u_hi, y.u_hi);
    r.s_lo = std::min(x.eff_s_lo(), y.eff_s_lo());
    r.u_lo = std::min(x.eff_u_lo(), y.eff_u_lo());
    r.m = x.m;
    for (const auto& [k, v] : y.m) {
      auto it = r.m.find(k);
      if (it == r.m.end())
        r.m[k] = v;
      else
        it->second = it->second + v;
    }
    r.normalize();
    return r;
  }
  friend SULayer operator-(const SULayer& x) {
    SULayer r = x;
    for (auto& [k, v] : r.m) v = -v;
    return r;
  }
  friend SULayer operator-(const SULayer& x, const SULayer& y) { return x + (-y); }
  friend SULayer operator*(const SULayer& x, const SULayer& y) {
    SULayer r(x.proto);
    if (x.is_exact_zero() || y.is_exact_zero()) return r;
    r.s_hi = std::min(sat_add(x.s_hi, y.eff_s_lo()), sat_add(y.s_hi, x.eff_s_lo()));
    r.u_hi = std::min(sat_add(x.u_hi, y.eff_u_lo()), sat_add(y.u_hi, x.eff_u_lo()));
    r.s_lo = sat_add(x.eff_s_lo(), y.eff_s_lo());
    r.u_lo = sat_add(x.eff_u_lo(), y.eff_u_lo());
    if (r.s_lo == kExact) r.s_lo = sat_add(r.s_hi, 1) == kExact ? 0 : r.s_hi + 1;
    if (r.u_lo == kExact) r.u_lo = sat_add(r.u_hi, 1) == kExact ? 0 : r.u_hi + 1;
    for (const auto& [kx, vx] : x.m)
      for (const auto& [ky, vy] : y.m) {
        int b = kx.first + ky.first, c = kx.second + ky.second;
        if (r.s_hi != kExact && b > r.s_hi) continue;
        if (r.u_hi != kExact && c > r.u_hi) continue;
        auto it = r.m.find({b, c});
        if (it == r.m.end())
          r.m[{b, c}] = vx * vy;
        else
          it->second = it->second + vx * vy;
      }
    r.normalize();
    return r;
  }
  friend SULayer operator*(const Q& q, const SULayer& x) {
    if (qzero(q)) return SULayer(x.proto);  // 0 annihilates unknown regions too
    SULayer r = x;
    for (auto& [k, v] : r.m) v = q * v;
    r.normalize();
    return r;
  }
  SULayer scaled(const R& c) const {
    SULayer r = *this;
    for (auto& [k, v] : r.m) v = c * v;
    r.normalize();
    return r;
  }
  friend bool operator==(const SULayer& x, const SULayer& y) {
    return x.s_hi == y.s_hi && x.u_hi == y.u_hi && x.eff_s_lo() == y.eff_s_lo() &&
           x.eff_u_lo() == y.eff_u_lo() && x.m == y.m;
  }

  SULayer shifted(int db, int dc) const {
    SULayer r(proto);
    r.s_lo = s_lo + db;
    r.u_lo = u_lo + dc;
    r.s_hi = sat_add(s_hi, db);
    r.u_hi = sat_add(u_hi, dc);
    for (const auto& [k, v] : m) r.m[{k.first + db, k.second + dc}] = v;
    return r;
  }

  SULayer truncate(int new_s_hi, int new_u_hi) const {
    SULayer r = *this;
    r.s_hi = std::min(r.s_hi, new_s_hi);
    r.u_hi = std::min(r.u_hi, new_u_hi);
    r.normalize();
    return r;
  }

  // s -> -s: scales the s^b u^c entry by (-1)^b.
  SULayer flip_s() const {
    SULayer r = *this;
    for (auto& [k, v] : r.m)
      if (k.first % 2) v = -v;
    return r;
  }

  // Applies f to every stored coefficient; the proto is refreshed through f
  // as well so shape changes (qmax rescales etc.) survive empty layers.
  template <class F>
  SULayer map_coeffs(F&& f) const {
    SULayer r(f(proto));
    r.s_lo = s_lo;
    r.u_lo = u_lo;
    r.s_hi = s_hi;
    r.u_hi = u_hi;
    for (const auto& [k, v] : m) r.m[k] = f(v);
    r.normalize();
    return r;
  }
};

template <class R>
inline SULayer<R> ring_zero_like(const SULayer<R>& x) { return SULayer<R>(x.proto); }
template <class R>
inline SULayer<R> ring_one_like(const SULayer<R>& x) { return SULayer<R>::one(x.proto); }
template <class R>
inline bool ring_is_zero(const SULayer<R>& x) { return x.is_exact_zero(); }

// Inversion of a layer: factor the lex-leading monomial (lowest s, then
// lowest u), then a geometric series on the rest, which strictly increases
// (s, u) lexicographically and dies against the validity rectangle.
template <class R>
inline SULayer<R> ring_invert(const SULayer<R>& x, const RingCtx& ctx) {
  if (x.m.empty()) throw ring_error("inverting an (s,u)-layer with no stored content");
  auto lead = x.m.begin();  // std::map order = lex on (b, c)
  int b0 = lead->first.first, c0 = lead->first.second;
  R r0inv = ring_invert(lead->second, ctx);
  SULayer<R> unit = x.shifted(-b0, -c0).scaled(r0inv);
  SULayer<R> n = unit - SULayer<R>::one(x.proto);
  if (n.s_hi == kExact && n.u_hi == kExact && !n.m.empty())
    throw ring_error("layer inversion needs finite validity caps beyond the leading term");
  SULayer<R> acc = SULayer<R>::one(x.proto), pw = acc;
  long guard = 4;
  if (n.s_hi != kExact) guard += static_cast<long>(n.s_hi - std::min(0, n.eff_s_lo()) + 2);
  if (n.u_hi != kExact) guard += static_cast<long>(n.u_hi - std::min(0, n.eff_u_lo()) + 2);
  guard = guard * guard + 8;
  bool closed = false;
  for (long k = 1; k <= guard; ++k) {
    pw = pw * n;
    if (pw.stored_empty()) {
      closed = true;
      break;
    }
    acc = acc + (k % 2 ? -pw : pw);
  }
  if (!closed) throw ring_error("layer inversion did not terminate within the window");
  // If the loop closed before contributing anything, the caps still shrink to
  // n's: the unknown region of n limits how far the inverse is determined.
  acc.s_hi = std::min(acc.s_hi, n.s_hi);
  acc.u_hi = std::min(acc.u_hi, n.u_hi);
  acc.normalize();
  return acc.scaled(r0inv).shifted(-b0, -c0);
}

template <class R>
using MultiSeries = PowerSeries<SULayer<R>>;

using MultiElg = MultiSeries<QYSeries>;
using MultiCob = MultiSeries<VGraded>;

// p-series with a plain scalar (s,u)-free layer structure.
template <class R>
inline MultiSeries<R> lift_p_series(const PowerSeries<R>& f) {
  MultiSeries<R> r(f.nmax, SULayer<R>(f.a[0]));
  for (int k = 0; k <= f.nmax; ++k) r.a[static_cast<size_t>(k)] = SULayer<R>::monomial(f.a[static_cast<size_t>(k)], 0, 0);
  return r;
}

// s -> -s on every p-layer.
template <class R>
inline MultiSeries<R> flip_s(const MultiSeries<R>& f) {
  MultiSeries<R> r = f;
  for (auto& layer : r.a) layer = layer.flip_s();
  return r;
}

// Multiplies by the monomial s^db u^dc.
template <class R>
inline MultiSeries<R> shift_su(const MultiSeries<R>& f, int db, int dc) {
  MultiSeries<R> r = f;
  for (auto& layer : r.a) layer = layer.shifted(db, dc);
  return r;
}

template <class R>
inline MultiSeries<R> truncate_su(const MultiSeries<R>& f, int s_hi, int u_hi) {
  MultiSeries<R> r = f;
  for (auto& layer : r.a) layer = layer.truncate(s_hi, u_hi);
  return r;
}

// Applies fn to every stored base-ring coefficient of every layer.
template <class R, class F>
inline MultiSeries<R> map_su_coeffs(const MultiSeries<R>& f, F&& fn) {
  MultiSeries<R> r = f;
  for (auto& layer : r.a) layer = layer.map_coeffs(fn);
  return r;
}

template <class R>
inline PowerSeries<R> drop_su(const MultiSeries<R>& f) {
  PowerSeries<R> r(f.nmax, f.a[0].proto);
  for (int k = 0; k <= f.nmax; ++k) {
    const auto& layer = f.a[static_cast<size_t>(k)];
    for (const auto& [key, v] : layer.m)
      if (!(key.first == 0 && key.second == 0))
        throw ring_error("series has (s,u)-content; cannot drop to a p-series");
    r.a[static_cast<size_t>(k)] = layer.coeff(0, 0);
  }
  return r;
}

}  // namespace genera
