#pragma once
#include <vector>

#include "genera/powerseries.hpp"

// Closed-form candidate series for rank-2 invariants: powers of the two unit
// series F0, F1 dressed with Seiberg-Witten data, and the mod-4 coefficient
// selection that turns half-sums over i-rotations of p into rational rules.
// Everything is generic over the coefficient ring C.

namespace genera {

namespace detail {
template <class C>
PowerSeries<C> dressed_powers(const PowerSeries<C>& F0, const PowerSeries<C>& F1, long e0,
                              long e1, const RingCtx& ctx) {
  PowerSeries<C> a = (Q(1, 2) * F0).pow_int(e0, ctx);
  PowerSeries<C> b = (Q(2) * F1).pow_int(e1, ctx);
  return a * b;
}
template <class C>
PowerSeries<C> ratio_minus_over_plus(const PowerSeries<C>& F1, const RingCtx& ctx) {
  return F1.at_minus_p() * F1.inverted(ctx);
}
inline int mod4(long v) { return static_cast<int>(((v % 4) + 4) % 4); }
}  // namespace detail

// 8 (F0/2)^chi (2 F1)^{K^2}: the candidate series when 0 and K are the only
// Seiberg-Witten basic classes and c1 intersects them evenly.
template <class C>
PowerSeries<C> psi_two_class(const PowerSeries<C>& F0, const PowerSeries<C>& F1, long chi,
                             long K2, const RingCtx& ctx = {}) {
  return Q(8) * detail::dressed_powers(F0, F1, chi, K2, ctx);
}

// 8 (F0/2)^{b4} (2 F1)^{b3} (-1)^{g2} (F1(-p)/F1(p))^{g1}: the right-hand
// side of the intersection-number identities on Hilbert schemes.
template <class C>
PowerSeries<C> psi_tuple(const PowerSeries<C>& F0, const PowerSeries<C>& F1, long g1, long g2,
                         long b3, long b4, const RingCtx& ctx = {}) {
  PowerSeries<C> r = detail::dressed_powers(F0, F1, b4, b3, ctx) *
                     detail::ratio_minus_over_plus(F1, ctx).pow_int(g1, ctx);
  return ((g2 % 2) ? Q(-8) : Q(8)) * r;
}

// One Seiberg-Witten basic class: its invariant and its pairings with c1
// and the canonical class.
struct SWTerm {
  Q sw;
  long c1_dot = 0;
  long K_dot = 0;
};

// 4 (F0/2)^chi (2 F1)^{K^2} sum_a SW(a) (-1)^{c1.a} (F1(-p)/F1(p))^{a.K}.
template <class C>
PowerSeries<C> psi_sw(const PowerSeries<C>& F0, const PowerSeries<C>& F1, long chi, long K2,
                      const std::vector<SWTerm>& sw, const RingCtx& ctx = {}) {
  PowerSeries<C> ratio = detail::ratio_minus_over_plus(F1, ctx);
  PowerSeries<C> acc(F0.nmax, F0.coeff(0));
  for (const auto& t : sw) {
    Q c = ((t.c1_dot % 2) ? -t.sw : t.sw);
    acc = acc + c * ratio.pow_int(t.K_dot, ctx);
  }
  return Q(4) * (detail::dressed_powers(F0, F1, chi, K2, ctx) * acc);
}

// (1/2) psi(p) + (1/2) i^c psi(ip) without leaving the rational ring:
// with m = (c + n) mod 4 the p^n coefficient survives at m = 0, dies at
// m = 2, and at odd m the half-sum has an imaginary part unless psi_n = 0,
// which is a hard error rather than a truncation.
template <class C>
PowerSeries<C> halfsum_rotation(const PowerSeries<C>& psi, long c) {
  PowerSeries<C> r = psi;
  for (int n = 0; n <= psi.nmax; ++n) {
    int m = detail::mod4(c + n);
    if (m == 0) continue;
    if (m != 2 && !ring_is_zero(psi.coeff(n)))
      throw ring_error("rotation half-sum leaves an imaginary part at p^" + std::to_string(n));
    r.coeff_mut(n) = ring_zero_like(psi.coeff(n));
  }
  return r;
}

// 2 sum_k i^{k(c1^2-chi)} (F0(i^k p)/2)^chi (2 F1(i^k p))^{K^2}: the four
// rotations collapse to 8 * (the coefficients of degree chi - c1^2 mod 4).
template <class C>
PowerSeries<C> z_fixed_c1(const PowerSeries<C>& F0, const PowerSeries<C>& F1, long chi, long K2,
                          long c1sq, const RingCtx& ctx = {}) {
  PowerSeries<C> g = detail::dressed_powers(F0, F1, chi, K2, ctx);
  return Q(8) * g.filter_mod4(detail::mod4(chi - c1sq));
}

// Same with blow-up exceptional classes folded in:
// each E_j contributes a factor 1 + (-1)^{c1.E_j} F1(p)/F1(-p).
template <class C>
PowerSeries<C> z_fixed_c1_folded(const PowerSeries<C>& F0, const PowerSeries<C>& F1, long chi,
                                 long K2, long c1sq, const std::vector<long>& exc_c1_dots,
                                 const RingCtx& ctx = {}) {
  PowerSeries<C> g = detail::dressed_powers(F0, F1, chi, K2, ctx);
  if (!exc_c1_dots.empty()) {
    PowerSeries<C> inv_ratio = F1 * F1.at_minus_p().inverted(ctx);  // F1(p)/F1(-p)
    PowerSeries<C> one = PowerSeries<C>::one(g.nmax, g.coeff(0));
    for (long d : exc_c1_dots) g = g * (one + ((d % 2) ? Q(-1) : Q(1)) * inv_ratio);
  }
  return Q(8) * g.filter_mod4(detail::mod4(chi - c1sq));
}

// Blow-up in a point: psi~ = (1/2)(F1(p)^{-1} + (-1)^eps F1(-p)^{-1}) psi.
template <class C>
PowerSeries<C> blowup_correction(const PowerSeries<C>& F1, const PowerSeries<C>& psi, int eps,
                                 const RingCtx& ctx = {}) {
  PowerSeries<C> inv = F1.inverted(ctx);
  PowerSeries<C> invm = inv.at_minus_p();
  PowerSeries<C> pref = Q(1, 2) * ((eps % 2) ? inv - invm : inv + invm);
  return pref * psi;
}

// One connected component of a reduced canonical curve: its
// self-intersection and the sign (-1)^{c1.C + h^0(N_{C/S})}.
struct CurveComp {
  long c_sq = 0;
  int sign = 1;
};

// Canonical divisor with irreducible reduced connected components:
//   H(p) = (F0/2)^chi prod_j [ (2F1(p))^{C_j^2} + sign_j (2F1(-p))^{C_j^2} ],
//   Z = 2 H(p) + 2 (-i)^{c1^2-chi} H(-ip),
// evaluated coefficientwise: with m = (c1^2 - chi + n) mod 4 the p^n
// coefficient is 4 H_n at m = 0, zero at m = 2, and at odd m it only stays
// rational when H_n = 0.
template <class C>
PowerSeries<C> z_disconnected(const PowerSeries<C>& F0, const PowerSeries<C>& F1, long chi,
                              long c1sq, const std::vector<CurveComp>& comps,
                              const RingCtx& ctx = {}) {
  PowerSeries<C> h = (Q(1, 2) * F0).pow_int(chi, ctx);
  PowerSeries<C> f = Q(2) * F1;
  PowerSeries<C> fm = f.at_minus_p();
  for (const auto& cc : comps) {
    PowerSeries<C> t = f.pow_int(cc.c_sq, ctx);
    PowerSeries<C> tm = fm.pow_int(cc.c_sq, ctx);
    h = h * (cc.sign < 0 ? t - tm : t + tm);
  }
  PowerSeries<C> r = h;
  for (int n = 0; n <= h.nmax; ++n) {
    int m = detail::mod4(c1sq - chi + n);
    if (m == 0) {
      r.coeff_mut(n) = Q(4) * h.coeff(n);
      continue;
    }
    if (m != 2 && !ring_is_zero(h.coeff(n)))
      throw ring_error("rotation half-sum leaves an imaginary part at p^" + std::to_string(n));
    r.coeff_mut(n) = ring_zero_like(h.coeff(n));
  }
  return r;
}

}  // namespace genera
