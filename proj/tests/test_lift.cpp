#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "genera/lift.hpp"

using namespace genera;

namespace {

QYSeries random_exact(std::mt19937& rng, int qmax) {
  std::uniform_int_distribution<int> coef(-4, 4);
  QYSeries f(qmax);
  for (int d = 0; d <= qmax; ++d) {
    std::vector<Q> c;
    for (int e = -2; e <= 2; ++e) c.push_back(Q(coef(rng)));
    f.qrow_mut(d) = YLaurent(-2, std::move(c));
  }
  return f;
}

}  // namespace

TEST_CASE("lift of zero and the leading factor") {
  REQUIRE(borcherds_lift(QYSeries::zero(12), 1, 4, 3) == PQYSeries::one(4, QYSeries::zero(3)));

  QYSeries f = phi_m2_1(12);
  PQYSeries lift = borcherds_lift(f, 3, 5, 4);
  REQUIRE(lift.coeff(0) == QYSeries::one(4));
  REQUIRE(lift.coeff(1).is_zero());
  REQUIRE(lift.coeff(2).is_zero());
  // the linear term of prod (1 - p^a q^m y^n)^{c_{m,n}} is -f
  REQUIRE(lift.coeff(3) == Q(-1) * f.truncate_q(4));

  REQUIRE_THROWS_AS(borcherds_lift(phi_m2_1(3), 1, 4, 3), window_error);
  REQUIRE_THROWS_AS(borcherds_lift(phi_m2_1(3), 0, 4, 3), config_error);
}

TEST_CASE("even-step lifts are even and substitute through the base lift") {
  QYSeries f = phi_0_1(12, default_ywin(12));
  PQYSeries l2 = borcherds_lift(f, 2, 6, 2);
  for (int n = 1; n <= 5; n += 2) REQUIRE(l2.coeff(n).is_zero());
  PQYSeries l1 = borcherds_lift(f, 1, 3, 2);
  REQUIRE(l1.subst_scale(Q(1), 2).truncated(6) == l2);
}

TEST_CASE("lift sends sums to products") {
  std::mt19937 rng(20240817u);
  for (int rep = 0; rep < 4; ++rep) {
    QYSeries f = random_exact(rng, 8);
    QYSeries g = random_exact(rng, 8);
    REQUIRE(borcherds_lift(f + g, 1, 3, 2) ==
            borcherds_lift(f, 1, 3, 2) * borcherds_lift(g, 1, 3, 2));
    REQUIRE(borcherds_lift(f + g, 2, 4, 2) ==
            borcherds_lift(f, 2, 4, 2) * borcherds_lift(g, 2, 4, 2));
  }
}

TEST_CASE("igusa cusp form product") {
  const int qm = 3;
  PQYSeries x = chi10_product(2, qm);
  QYSeries pref = delta_over_q(qm).mul_qpow(1) * phi_m2_1(qm);
  REQUIRE(x.coeff(1) == pref);
  REQUIRE(x.coeff(2) == Q(-2) * (pref * phi_0_1(qm, default_ywin(qm))));

  // chi_10(p^2,q,y) = p^2 Delta phi_{-2,1} L_2(phi_{0,1})^2
  PQYSeries rhs = chi10_product(3, qm).subst_scale(Q(1), 2).truncated(6);
  PQYSeries l2 = borcherds_lift(phi_0_1(9, default_ywin(9)), 2, 6, qm);
  PQYSeries lhs = (l2 * l2).scaled(pref).mul_ppow(2);
  REQUIRE(lhs == rhs);
}

TEST_CASE("hilbert scheme genera of a k3 surface") {
  const int qm = 2;
  PQYSeries z = hilb_k3_elliptic_genera(3, qm);
  REQUIRE(z.coeff(0) == QYSeries::one(qm));
  REQUIRE(z.coeff(1) == ell_k3(qm, default_ywin(qm)));
  // q = 0, y = 1 counts points: sum_n e(X^[n]) p^n = prod (1 - p^n)^{-24}
  QYSeries euler = eta_pow(3, -24);
  for (int n = 0; n <= 3; ++n) {
    Q s(0);
    for (const auto& c : z.coeff(n).qrow(0).a) s += c;
    REQUIRE(s == euler.coeff(n, 0));
  }
}

TEST_CASE("universal point-contribution series") {
  const int qm = 2;
  PQYSeries F0 = F0_elg(4, qm);
  REQUIRE(F0.coeff(0) == QYSeries::one(qm));
  REQUIRE(F0.coeff(1).is_zero());
  REQUIRE(F0.coeff(3).is_zero());
  REQUIRE(F0.coeff(2) == phi_0_1(qm, default_ywin(qm)));
  REQUIRE(F0.at_minus_p().truncated(4) == F0);
}

TEST_CASE("universal canonical-contribution series") {
  const int qm = 2;
  PQYSeries F1 = F1_elg(4, qm);
  REQUIRE(F1.coeff(0) == QYSeries::one(qm));
  REQUIRE(F1.coeff(1) == Q(2) * phi_0_half(qm, default_ywin(qm)));

  PQYSeries ratio = f1_ratio(F1);
  REQUIRE(ratio.coeff(0) == QYSeries::one(qm));
  REQUIRE(ratio * ratio.at_minus_p().truncated(4) == PQYSeries::one(4, QYSeries::zero(qm)));

  // only the step-1 lift factor of F1 is odd in p, so the ratio collapses to
  // a ratio of step-1 lifts
  QYSeries ph = phi_0_half(4 * qm, default_ywin(4 * qm));
  PQYSeries lp = borcherds_lift(Q(2) * ph, 1, 4, qm);
  REQUIRE(ratio == lp * lp.at_minus_p().truncated(4).inverted());
}
