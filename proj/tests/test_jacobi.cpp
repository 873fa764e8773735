#include <catch2/catch_amalgamated.hpp>

#include "genera/jacobi.hpp"

using namespace genera;

namespace {

YLaurent yl(int lo, std::vector<Q> c, int valid = kExact) {
  return YLaurent(lo, std::move(c), valid);
}

// y = 1 specialization of an exact row.
Q row_sum(const YLaurent& r) {
  Q s(0);
  for (const auto& c : r.a) s += c;
  return s;
}

}  // namespace

TEST_CASE("eisenstein series") {
  QYSeries g2 = eisenstein(2, 6);
  REQUIRE(g2.coeff(0, 0) == Q(-1, 24));
  REQUIRE(g2.coeff(1, 0) == Q(1));
  REQUIRE(g2.coeff(3, 0) == Q(4));   // sigma_1(3) = 1 + 3
  REQUIRE(g2.coeff(6, 0) == Q(12));  // sigma_1(6) = 1 + 2 + 3 + 6
  REQUIRE(eisenstein(4, 2).coeff(0, 0) == Q(1, 240));
  REQUIRE(eisenstein(6, 2).coeff(0, 0) == Q(-1, 504));
  REQUIRE_THROWS_AS(eisenstein(3, 4), config_error);
  REQUIRE_THROWS_AS(eisenstein(0, 4), config_error);
}

TEST_CASE("discriminant coefficients and the eisenstein identity") {
  QYSeries d = delta_over_q(6);
  // Ramanujan tau values tau(1)..tau(6)
  REQUIRE(d.coeff(0, 0) == Q(1));
  REQUIRE(d.coeff(1, 0) == Q(-24));
  REQUIRE(d.coeff(2, 0) == Q(252));
  REQUIRE(d.coeff(3, 0) == Q(-1472));
  REQUIRE(d.coeff(4, 0) == Q(4830));
  REQUIRE(d.coeff(5, 0) == Q(-6048));
  // E4^3 - E6^2 = 1728 Delta with E4 = 240 G4, E6 = -504 G6
  QYSeries e4 = Q(240) * eisenstein(4, 6);
  QYSeries e6 = Q(504) * eisenstein(6, 6);
  REQUIRE(e4.pow_int(3, kExact) - e6.pow_int(2, kExact) == Q(1728) * d.mul_qpow(1));
}

TEST_CASE("reduced theta function") {
  QYSeries t = theta1_reduced(12);
  REQUIRE(t.qrow(0) == yl(-1, {Q(-1), Q(0), Q(1)}));
  // q^1 row: -(y^{1/2}-y^{-1/2})(1+y+1/y) = -y^{3/2}+y^{-3/2}
  REQUIRE(t.qrow(1) == yl(-3, {Q(1), Q(0), Q(0), Q(0), Q(0), Q(0), Q(-1)}));
  REQUIRE(t.flip_y() == Q(-1) * t);
  // triple product versus lattice sum
  REQUIRE(theta1_reduced_sum(12) == t);
}

TEST_CASE("negative weight jacobi forms") {
  QYSeries f = phi_m2_1(8);
  REQUIRE(f.qrow(0) == yl(-2, {Q(1), Q(0), Q(-2), Q(0), Q(1)}));
  REQUIRE(f.qrow(1) == yl(-4, {Q(-2), Q(0), Q(8), Q(0), Q(-12), Q(0), Q(8), Q(0), Q(-2)}));
  REQUIRE(f.flip_y() == f);
  QYSeries h = phi_m2_half(8);
  REQUIRE(h.qrow(0) == yl(-1, {Q(-1), Q(0), Q(1)}));
  REQUIRE(h.flip_y() == Q(-1) * h);
  REQUIRE(h * h == f);
  REQUIRE(h == theta1_reduced(8) * eta_pow(8, -3));
  REQUIRE(f == (theta1_reduced(8) * theta1_reduced(8)) * eta_pow(8, -6));
}

TEST_CASE("twisted eisenstein series") {
  const int W = 40;
  QYSeries g1 = eisenstein_twisted(1, 4, W);
  // q^0 row expands -(1/2)(y+1)/(y-1) for |y| < 1: 1/2 + y + y^2 + ...
  REQUIRE(g1.coeff(0, 0) == Q(1, 2));
  REQUIRE(g1.coeff(0, 2) == Q(1));
  REQUIRE(g1.coeff(0, 38) == Q(1));
  REQUIRE(g1.coeff(0, 1) == Q(0));
  REQUIRE(g1.qrow(0).valid == W);
  REQUIRE_THROWS_AS(g1.coeff(0, W + 1), window_error);
  REQUIRE(g1.qrow(1) == yl(-2, {Q(-1), Q(0), Q(0), Q(0), Q(1)}));
  REQUIRE(g1.qrow(2) == yl(-4, {Q(-1), Q(0), Q(-1), Q(0), Q(0), Q(0), Q(1), Q(0), Q(1)}));
  REQUIRE_THROWS_AS(eisenstein_twisted(0, 4, W), config_error);

  // y d/dy scales the divisor rows
  QYSeries g2t = eisenstein_twisted(2, 4, W);
  REQUIRE(g2t.coeff(0, 4) == Q(2));
  REQUIRE(g2t.qrow(1) == yl(-2, {Q(1), Q(0), Q(0), Q(0), Q(1)}));
}

TEST_CASE("weierstrass expansion") {
  const int W = 40;
  QYSeries wp = weierstrass_wp(4, W);
  // q^0 row: 1/12 + y/(1-y)^2 = 1/12 + sum k y^k
  REQUIRE(wp.coeff(0, 0) == Q(1, 12));
  REQUIRE(wp.coeff(0, 2) == Q(1));
  REQUIRE(wp.coeff(0, 6) == Q(3));
  REQUIRE(wp.coeff(0, 1) == Q(0));
  // rows n >= 1: sum_{d|n} d (y^d - 2 + y^{-d})
  REQUIRE(wp.qrow(1) == yl(-2, {Q(1), Q(0), Q(-2), Q(0), Q(1)}));
  REQUIRE(wp.qrow(2) == yl(-4, {Q(2), Q(0), Q(1), Q(0), Q(-6), Q(0), Q(1), Q(0), Q(2)}));
}

TEST_CASE("weight zero forms certify to exact rows") {
  const int qm = 6;
  const int W = default_ywin(qm);

  QYSeries p01 = phi_0_1(qm, W);
  REQUIRE(p01.qrow(0) == yl(-2, {Q(1), Q(0), Q(10), Q(0), Q(1)}));
  for (int d = 0; d <= qm; ++d) REQUIRE(p01.qrow(d).valid == kExact);
  REQUIRE(p01.flip_y() == p01);
  // y = 1 turns 2 phi_{0,1} into the K3 Euler number 24, independent of q
  REQUIRE(row_sum(p01.qrow(0)) == Q(12));
  for (int d = 1; d <= qm; ++d) REQUIRE(row_sum(p01.qrow(d)) == Q(0));
  // enlarging the build window must not change certified rows
  REQUIRE(phi_0_1(qm, W + 4) == p01);

  QYSeries ph = phi_0_half(qm, W);
  REQUIRE(ph.qrow(0) == yl(-1, {Q(-1, 2), Q(0), Q(-1, 2)}));
  REQUIRE(ph.flip_y() == ph);
  REQUIRE(phi_0_half(qm, W + 4) == ph);

  QYSeries p32 = phi_0_3half(qm, W);
  REQUIRE(p32.qrow(0) == yl(-1, {Q(-1), Q(0), Q(-1)}));
  REQUIRE(p32.flip_y() == p32);
  REQUIRE(phi_0_3half(qm, W + 4) == p32);

  REQUIRE(ell_k3(4, default_ywin(4)).qrow(0) == yl(-2, {Q(2), Q(0), Q(20), Q(0), Q(2)}));
}

TEST_CASE("certification needs a wide enough window") {
  REQUIRE_THROWS_AS(phi_0_1(6, 10), window_error);
}

TEST_CASE("form catalog") {
  for (const auto& n : form_catalog()) {
    JacobiForm f = named_form(n, 3);
    REQUIRE(f.name == n);
    REQUIRE(f.s.qmax == 3);
  }
  REQUIRE(named_form("phi_m2_1", 2).s == phi_m2_1(2));
  REQUIRE(named_form("wp", 2).quasi == false);
  REQUIRE(named_form("g2", 2).quasi == true);
  REQUIRE_THROWS_AS(named_form("nope", 3), config_error);
}
