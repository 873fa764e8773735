#pragma once
#include "genera/jacobi.hpp"
#include "genera/powerseries.hpp"

// Borcherds-type exponent-extraction lifts.  For f = sum c_{m,n} q^m y^n,
//   L_a(f) = prod_{l>0, m>=0, n} (1 - p^{al} q^m y^n)^{c_{lm,n}},
// computed by accumulating -c/j (p^{al} q^m y^n)^j into the log and
// exponentiating once.  The l-th slice needs f to q-order l*qmax, so the
// input must be supplied to q-order (pmax/a)*qmax.

namespace genera {

using PQYSeries = PowerSeries<QYSeries>;

inline PQYSeries borcherds_lift(const QYSeries& f, int a, int pmax, int qmax) {
  if (a < 1) throw config_error("lift step must be positive");
  int lmax = pmax / a;
  if (f.qmax < lmax * qmax)
    throw window_error("lift needs exponent data to q-order " + std::to_string(lmax * qmax) +
                       ", input stops at q-order " + std::to_string(f.qmax));
  PQYSeries lg(pmax, QYSeries::zero(qmax));
  for (int l = 1; l <= lmax; ++l) {
    QYSeries g(qmax);
    for (int m = 0; m <= qmax; ++m) g.qrow_mut(m) = f.qrow(l * m);
    for (int j = 1; a * l * j <= pmax; ++j) {
      // -(1/j) g(q^j, y^j) lands at p^{a l j}; rows between multiples of j
      // vanish exactly.
      QYSeries h(qmax);
      for (int m = 0; j * m <= qmax; ++m) h.qrow_mut(j * m) = g.qrow(m).subst_pow(j);
      lg.coeff_mut(a * l * j) = lg.coeff(a * l * j) + Q(-1, j) * h;
    }
  }
  return lg.exp0();
}

// p Delta(q) phi_{-2,1} L(Ell(K3)): the Igusa cusp form chi_10 as a product
// over the positive cone.
inline PQYSeries chi10_product(int pmax, int qmax) {
  if (pmax < 1) throw config_error("chi10 needs pmax >= 1");
  int need = std::max((pmax - 1) * qmax, qmax);
  PQYSeries lift = borcherds_lift(ell_k3(need, default_ywin(need)), 1, pmax - 1, qmax);
  QYSeries pref = delta_over_q(qmax).mul_qpow(1) * phi_m2_1(qmax);
  PQYSeries r(pmax, QYSeries::zero(qmax));
  for (int n = 1; n <= pmax; ++n) r.coeff_mut(n) = pref * lift.coeff(n - 1);
  return r;
}

// sum_n Ell(K3^[n]) p^n = 1 / L(Ell(K3)).
inline PQYSeries hilb_k3_elliptic_genera(int pmax, int qmax) {
  int need = std::max(pmax * qmax, qmax);
  return borcherds_lift(ell_k3(need, default_ywin(need)), 1, pmax, qmax).inverted();
}

// F0 = 1 / L_2(phi_{0,1}).
inline PQYSeries F0_elg(int pmax, int qmax) {
  int need = std::max((pmax / 2) * qmax, qmax);
  return borcherds_lift(phi_0_1(need, default_ywin(need)), 2, pmax, qmax).inverted();
}

// F1 = L_4(2 phi_{0,1/2} phi_{0,3/2}) L(-2 phi_{0,1/2})
//      / L_2(-2 phi_{0,1/2}^{ev}|_{q^{1/2}} - phi_{0,1/2}|_{(q^2,y^2)} + 2 phi_{0,1/2}^2),
// where g^{ev} keeps the even q-rows.  Restricting g^{ev} to q^{1/2} and
// taking the even part of g(q^{1/2}) give the same series, so a single
// reading is implemented.
inline PQYSeries F1_elg(int pmax, int qmax) {
  int need = std::max(pmax * qmax, 2 * qmax);
  if (need % 2) ++need;
  int ywin = default_ywin(need);
  QYSeries ph = phi_0_half(need, ywin);
  QYSeries p32 = phi_0_3half(std::max((pmax / 4) * qmax, qmax), ywin);

  int w2 = std::max((pmax / 2) * qmax, qmax);
  QYSeries evh = ph.even_q_part().subst_q_half().truncate_q(w2);
  QYSeries sub2 = ph.truncate_q(w2).subst_q_sq().subst_y_pow(2).truncate_q(w2);
  QYSeries phw = ph.truncate_q(w2);
  QYSeries den = Q(-2) * evh - sub2 + Q(2) * (phw * phw);

  PQYSeries hi = borcherds_lift(Q(2) * (ph.truncate_q(p32.qmax) * p32), 4, pmax, qmax);
  PQYSeries lo = borcherds_lift(Q(-2) * ph, 1, pmax, qmax);
  PQYSeries dn = borcherds_lift(den, 2, pmax, qmax);
  return (hi * lo) * dn.inverted();
}

// F1(-p)/F1(p); only the L_1 factor of F1 is odd-sensitive, so this also
// equals L(2 phi_{0,1/2}) / L(2 phi_{0,1/2})|_{-p}.
inline PQYSeries f1_ratio(const PQYSeries& F1) {
  return F1.at_minus_p().truncated(F1.nmax) * F1.inverted();
}

}  // namespace genera
