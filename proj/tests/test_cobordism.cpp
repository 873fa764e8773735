#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "genera/cobordism.hpp"

using namespace genera;

TEST_CASE("partition enumeration") {
  REQUIRE(partitions_of(0) == std::vector<std::vector<int>>{{}});
  REQUIRE(partitions_of(1).size() == 1);
  REQUIRE(partitions_of(2).size() == 2);
  REQUIRE(partitions_of(3).size() == 3);
  REQUIRE(partitions_of(4).size() == 5);
  REQUIRE(partitions_of(5).size() == 7);
  REQUIRE(partitions_of(3) == std::vector<std::vector<int>>{{3}, {2, 1}, {1, 1, 1}});
  REQUIRE(partitions_of(4)[1] == std::vector<int>{3, 1});
}

TEST_CASE("genus table low degrees") {
  GenusTable T = genus_symbol(5, 3);
  // degree 1: v1 carries e1
  REQUIRE(T.e_of_v[1][0][0] == Q(1));
  // degree 2, basis order (2), (1,1): v2 carries p2 = e1^2 - 2 e2,
  // v1^2 carries the monomial sum over pairs, e2
  REQUIRE(T.e_of_v[2][0][0] == Q(-2));
  REQUIRE(T.e_of_v[2][0][1] == Q(1));
  REQUIRE(T.e_of_v[2][1][0] == Q(1));
  REQUIRE(T.e_of_v[2][1][1] == Q(0));
  // degree 3, basis order (3), (2,1), (1,1,1):
  // v3 -> p3 = 3 e3 - 3 e2 e1 + e1^3
  // v2 v1 -> p1 p2 - p3 = -3 e3 + e2 e1
  // v1^3 -> e3
  REQUIRE(T.e_of_v[3][0] == std::vector<Q>{Q(3), Q(-3), Q(1)});
  REQUIRE(T.e_of_v[3][1] == std::vector<Q>{Q(-3), Q(1), Q(0)});
  REQUIRE(T.e_of_v[3][2] == std::vector<Q>{Q(1), Q(0), Q(0)});

  REQUIRE_THROWS_AS(genus_symbol(2, 3), config_error);
  REQUIRE_THROWS_AS(genus_symbol(5, 0), config_error);
}

TEST_CASE("genus table is stable in the number of roots") {
  REQUIRE(genus_symbol(5, 5).e_of_v == genus_symbol(9, 5).e_of_v);
}

TEST_CASE("direct product expansion matches the table") {
  const VRing& R = VRing::get(5, 5);
  // six concrete roots, the product expanded directly in the v-ring
  std::vector<Q> x = {Q(1), Q(1, 2), Q(-1, 3), Q(2), Q(-1), Q(3, 2)};
  VGraded prod = VGraded::one(R);
  for (const Q& xi : x) {
    VGraded f = VGraded::one(R);
    Q pw = xi;
    for (int k = 1; k <= 5; ++k) {
      f = f + pw * VGraded::v(R, k);
      pw *= xi;
    }
    prod = prod * f;
  }
  // elementary symmetric functions of the same roots
  std::vector<Q> e(7, Q(0));
  e[0] = Q(1);
  for (const Q& xi : x)
    for (int j = 6; j >= 1; --j) e[j] += xi * e[j - 1];

  GenusTable T = genus_symbol(6, 5);
  for (int d = 1; d <= 5; ++d) {
    CobordismClass s = cobordism_slice(prod, d);
    for (size_t i = 0; i < T.parts[d].size(); ++i) {
      Q want(0);
      for (size_t j = 0; j < T.parts[d].size(); ++j) {
        Q eprod = T.e_of_v[d][i][j];
        for (int part : T.parts[d][j]) eprod *= e[part];
        want += eprod;
      }
      REQUIRE(s.coeffs[i] == want);
    }
  }
}

TEST_CASE("projective plane and k3 chern numbers") {
  GenusTable T = genus_symbol(5, 5);
  const VRing& R = VRing::get(5, 5);

  ChernNumberVector p2;
  p2.d = 2;
  p2.values = {Q(3), Q(9)};  // c2, c1^2
  CobordismClass b = chern_to_cobordism(p2, T);
  REQUIRE(b.coeffs == std::vector<Q>{Q(3), Q(3)});  // 3 v2 + 3 v1^2
  VGraded v1 = VGraded::v(R, 1), v2 = VGraded::v(R, 2);
  REQUIRE(cobordism_embed(b, R) == Q(3) * v2 + Q(3) * (v1 * v1));
  ChernNumberVector back = cobordism_to_chern(b, T);
  REQUIRE(back.values == p2.values);

  ChernNumberVector k3;
  k3.d = 2;
  k3.values = {Q(24), Q(0)};
  CobordismClass bk = chern_to_cobordism(k3, T);
  REQUIRE(cobordism_embed(bk, R) == Q(24) * (v1 * v1) - Q(48) * v2);
}

TEST_CASE("conversion roundtrips") {
  GenusTable T = genus_symbol(5, 5);

  CobordismClass z;
  z.d = 4;
  z.coeffs.assign(5, Q(0));
  REQUIRE(cobordism_to_chern(z, T).values == std::vector<Q>(5, Q(0)));

  for (int d = 1; d <= 5; ++d) {
    size_t n = T.parts[d].size();
    for (size_t j = 0; j < n; ++j) {
      ChernNumberVector basis;
      basis.d = d;
      basis.values.assign(n, Q(0));
      basis.values[j] = Q(1);
      REQUIRE(cobordism_to_chern(chern_to_cobordism(basis, T), T).values ==
              basis.values);
      CobordismClass vb;
      vb.d = d;
      vb.coeffs.assign(n, Q(0));
      vb.coeffs[j] = Q(1);
      REQUIRE(chern_to_cobordism(cobordism_to_chern(vb, T), T).coeffs ==
              vb.coeffs);
    }
  }

  std::mt19937 rng(20240822u);
  std::uniform_int_distribution<int> num(-9, 9), den(1, 3);
  for (int rep = 0; rep < 6; ++rep) {
    ChernNumberVector n;
    n.d = 3;
    for (int j = 0; j < 3; ++j) n.values.push_back(qof(num(rng), den(rng)));
    REQUIRE(cobordism_to_chern(chern_to_cobordism(n, T), T).values == n.values);
  }
}

TEST_CASE("partition labels") {
  REQUIRE(chern_label({2, 1, 1}) == "c1^2 c2");
  REQUIRE(chern_label({}) == "1");
  REQUIRE(chern_label({5}) == "c5");
  REQUIRE(v_label({3, 1}) == "v1 v3");
  REQUIRE(v_label({2, 2, 2}) == "v2^3");
}

TEST_CASE("slice and embed windows") {
  const VRing& R = VRing::get(5, 5);
  VGraded x = Q(7) * VGraded::v(R, 4) + Q(2) * VGraded::one(R);
  CobordismClass s4 = cobordism_slice(x, 4);
  REQUIRE(s4.coeffs[0] == Q(7));  // partition (4)
  for (size_t i = 1; i < s4.coeffs.size(); ++i) REQUIRE(s4.coeffs[i] == Q(0));
  CobordismClass s0 = cobordism_slice(x, 0);
  REQUIRE(s0.coeffs == std::vector<Q>{Q(2)});
  REQUIRE_THROWS_AS(cobordism_slice(x, 6), window_error);

  CobordismClass big;
  big.d = 6;
  big.coeffs.assign(partitions_of(6).size(), Q(0));
  REQUIRE_THROWS_AS(cobordism_embed(big, R), window_error);
}