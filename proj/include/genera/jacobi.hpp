#pragma once
#include <string>

#include "genera/qyseries.hpp"

// Classical q-expansions: Eisenstein series, the reduced Jacobi theta
// function, and the (quasi) Jacobi forms of small index built from them.
// Every q-row is an exact Laurent polynomial in y^{1/2} except where a
// rational prefactor is expanded in the region |y| < 1; those rows carry a
// finite validity window.  Forms with bounded y-support per row are promoted
// back to exact via certified_exact.

namespace genera {

// Descriptive metadata for the catalog; arithmetic happens on .s.
// weight2/index2 are twice the weight/index so half-integers stay integral.
struct JacobiForm {
  QYSeries s;
  int weight2 = 0;
  int index2 = 0;
  bool quasi = false;
  std::string name;
};

namespace detail {

// acc *= (1 + c q^n), in place.
inline void mul_one_plus(QYSeries& acc, int n, const YLaurent& c) {
  for (int d = acc.qmax; d >= n; --d) acc.row[d] = acc.row[d] + c * acc.row[d - n];
}

}  // namespace detail

// prod_{n>=1} (1 - q^n)^e for any integer e.
inline QYSeries eta_pow(int qmax, long e) {
  QYSeries p = QYSeries::one(qmax);
  for (int n = 1; n <= qmax; ++n) detail::mul_one_plus(p, n, YLaurent::monomial(0, Q(-1)));
  return p.pow_int(e, kExact);
}

// G_k = -B_k/2k + sum_{n>=1} sigma_{k-1}(n) q^n, k even.  G_2 is quasi-modular.
inline QYSeries eisenstein(int k, int qmax) {
  if (k < 2 || k % 2 != 0) throw config_error("eisenstein: k must be even and >= 2");
  QYSeries f(qmax);
  f.qrow_mut(0) = YLaurent::monomial(0, -bernoulli(k) / qof(2 * k));
  for (int n = 1; n <= qmax; ++n) f.qrow_mut(n) = YLaurent::monomial(0, Q(sigma_z(k - 1, n)));
  return f;
}

// Delta(q)/q = prod (1-q^n)^24.
inline QYSeries delta_over_q(int qmax) { return eta_pow(qmax, 24); }

// theta_1(q,y)/q^{1/8} = (y^{1/2}-y^{-1/2}) prod (1-q^n)(1-yq^n)(1-y^{-1}q^n).
inline QYSeries theta1_reduced(int qmax) {
  QYSeries acc = QYSeries::constant(qmax, YLaurent(-1, {Q(-1), Q(0), Q(1)}));
  for (int n = 1; n <= qmax; ++n) {
    detail::mul_one_plus(acc, n, YLaurent::monomial(0, Q(-1)));
    detail::mul_one_plus(acc, n, YLaurent::monomial(2, Q(-1)));
    detail::mul_one_plus(acc, n, YLaurent::monomial(-2, Q(-1)));
  }
  return acc;
}

// The same function as a lattice sum: sum_{n in Z} (-1)^n q^{n(n+1)/2} y^{n+1/2}.
inline QYSeries theta1_reduced_sum(int qmax) {
  QYSeries f(qmax);
  for (long n = 0; n * (n + 1) / 2 <= qmax; ++n) {
    long d = n * (n + 1) / 2;
    Q sgn = (n % 2 == 0) ? Q(1) : Q(-1);
    f.qrow_mut(static_cast<int>(d)) =
        f.qrow(static_cast<int>(d)) + YLaurent::monomial(static_cast<int>(2 * n + 1), sgn);
    // the mirror term n -> -n-1 has the same q-exponent and opposite y-power
    f.qrow_mut(static_cast<int>(d)) =
        f.qrow(static_cast<int>(d)) + YLaurent::monomial(static_cast<int>(-2 * n - 1), -sgn);
  }
  return f;
}

// Weak Jacobi form of weight -2 and index 1:
// (y^{1/2}-y^{-1/2})^2 prod (1-yq^n)^2 (1-y^{-1}q^n)^2 / (1-q^n)^4.
inline QYSeries phi_m2_1(int qmax) {
  QYSeries acc = QYSeries::constant(qmax, YLaurent(-2, {Q(1), Q(0), Q(-2), Q(0), Q(1)}));
  for (int n = 1; n <= qmax; ++n)
    for (int rep = 0; rep < 2; ++rep) {
      detail::mul_one_plus(acc, n, YLaurent::monomial(2, Q(-1)));
      detail::mul_one_plus(acc, n, YLaurent::monomial(-2, Q(-1)));
    }
  return acc * eta_pow(qmax, -4);
}

// Its square root, taken as a product with top y-coefficient +1:
// (y^{1/2}-y^{-1/2}) prod (1-yq^n)(1-y^{-1}q^n) / (1-q^n)^2.
inline QYSeries phi_m2_half(int qmax) {
  QYSeries acc = QYSeries::constant(qmax, YLaurent(-1, {Q(-1), Q(0), Q(1)}));
  for (int n = 1; n <= qmax; ++n) {
    detail::mul_one_plus(acc, n, YLaurent::monomial(2, Q(-1)));
    detail::mul_one_plus(acc, n, YLaurent::monomial(-2, Q(-1)));
  }
  return acc * eta_pow(qmax, -2);
}

// Twisted Eisenstein series G_{k,0}, k >= 1.  The base case is
//   G_{1,0} = -(1/2)(y+1)/(y-1) + sum_{n>=1} sum_{d|n} (y^d - y^{-d}) q^n
// with the rational term expanded for |y| < 1, giving the windowed q^0 row
// 1/2 + y + y^2 + ...; higher k apply y d/dy.
inline QYSeries eisenstein_twisted(int k, int qmax, int ywin) {
  if (k < 1) throw config_error("eisenstein_twisted: k must be >= 1");
  QYSeries f(qmax);
  {
    std::vector<Q> c(static_cast<size_t>(ywin) + 1, Q(0));
    for (int e = 0; e <= ywin; e += 2) c[static_cast<size_t>(e)] = (e == 0) ? Q(1, 2) : Q(1);
    f.qrow_mut(0) = YLaurent(0, std::move(c), ywin);
  }
  for (int n = 1; n <= qmax; ++n) {
    YLaurent r;
    for (int d = 1; d <= n; ++d)
      if (n % d == 0)
        r = r + YLaurent::monomial(2 * d, Q(1)) + YLaurent::monomial(-2 * d, Q(-1));
    f.qrow_mut(n) = r;
  }
  for (int i = 1; i < k; ++i) f = f.ydy();
  return f;
}

// Weierstrass wp function (normalized so the q^0 row is
// 1/12 + y/(1-y)^2 expanded for |y| < 1): wp = G_{2,0} - 2 G_2.
inline QYSeries weierstrass_wp(int qmax, int ywin) {
  return eisenstein_twisted(2, qmax, ywin) - Q(2) * eisenstein(2, qmax);
}

// A y-support bound valid for the weak Jacobi rows handled here: a form of
// index m has row support |e| <= sqrt(16 m d + 4 m^2) on the y2 lattice,
// comfortably below 2d + 2*index2 + 4.
inline QYSeries certify_jacobi(const QYSeries& f, int index2) {
  return f.certified_exact([index2](int d) { return 2 * d + 2 * index2 + 4; });
}

// Window large enough that a product of one |y|<1 row with the catalog's
// exact rows still certifies at every q-order <= qmax.
inline int default_ywin(int qmax) { return 4 * qmax + 16; }

// Weak Jacobi form of weight 0 and index 1; rows are exact.
inline QYSeries phi_0_1(int qmax, int ywin) {
  return certify_jacobi(Q(12) * (weierstrass_wp(qmax, ywin) * phi_m2_1(qmax)), 2);
}

// phi_{0,1/2} = G_{1,0} * phi_{-2,1}^{1/2}: the |y|<1 tails telescope against
// the theta prefactor, so rows certify to exact Laurent polynomials.
inline QYSeries phi_0_half(int qmax, int ywin) {
  return certify_jacobi(eisenstein_twisted(1, qmax, ywin) * phi_m2_half(qmax), 1);
}

// phi_{0,3/2} = G_{3,0} * phi_{-2,1}^{3/2}.
inline QYSeries phi_0_3half(int qmax, int ywin) {
  return certify_jacobi(
      eisenstein_twisted(3, qmax, ywin) * (phi_m2_half(qmax) * phi_m2_1(qmax)), 3);
}

// Elliptic genus of a K3 surface: 2 phi_{0,1}.
inline QYSeries ell_k3(int qmax, int ywin) { return Q(2) * phi_0_1(qmax, ywin); }

inline JacobiForm named_form(const std::string& name, int qmax, int ywin = 0) {
  if (ywin <= 0) ywin = default_ywin(qmax);
  if (name == "g2") return {eisenstein(2, qmax), 4, 0, true, name};
  if (name == "g4") return {eisenstein(4, qmax), 8, 0, false, name};
  if (name == "g6") return {eisenstein(6, qmax), 12, 0, false, name};
  if (name == "delta_over_q") return {delta_over_q(qmax), 24, 0, false, name};
  if (name == "theta1red") return {theta1_reduced(qmax), 1, 1, false, name};
  if (name == "phi_m2_1") return {phi_m2_1(qmax), -4, 2, false, name};
  if (name == "phi_m2_half") return {phi_m2_half(qmax), -2, 1, false, name};
  if (name == "g10") return {eisenstein_twisted(1, qmax, ywin), 2, 0, true, name};
  if (name == "g20") return {eisenstein_twisted(2, qmax, ywin), 4, 0, true, name};
  if (name == "g30") return {eisenstein_twisted(3, qmax, ywin), 6, 0, true, name};
  if (name == "wp") return {weierstrass_wp(qmax, ywin), 4, 0, false, name};
  if (name == "phi_0_1") return {phi_0_1(qmax, ywin), 0, 2, false, name};
  if (name == "phi_0_half") return {phi_0_half(qmax, ywin), 0, 1, true, name};
  if (name == "phi_0_3half") return {phi_0_3half(qmax, ywin), 0, 3, true, name};
  if (name == "ell_k3") return {ell_k3(qmax, ywin), 0, 2, false, name};
  throw config_error("unknown form name: " + name);
}

inline const std::vector<std::string>& form_catalog() {
  static const std::vector<std::string> names = {
      "g2",  "g4",  "g6",  "delta_over_q", "theta1red", "phi_m2_1", "phi_m2_half", "g10",
      "g20", "g30", "wp",  "phi_0_1",      "phi_0_half", "phi_0_3half", "ell_k3"};
  return names;
}

}  // namespace genera
