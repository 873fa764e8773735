#pragma once
#include <algorithm>
#include <cstdlib>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "genera/charpoly.hpp"
#include "genera/cobordism.hpp"

namespace genera {

// A chart of a smooth projective toric surface: the coordinate functions carry
// the torus characters v and w (the dual basis of the cone's rays).  Monomial
// x^i y^j has character i*v + j*w; tangent weights at the origin are -v, -w.
struct ToricChart {
  Int2 v{}, w{};
};

struct ToricSurface {
  std::string name;
  std::vector<Int2> rays;  // cyclic order; chart i spans (rays[i], rays[i+1])
  std::vector<ToricChart> charts;
  // Picard data in a fixed basis of divisor classes.
  int npic = 0;
  std::vector<std::vector<long>> gram;   // intersection numbers of basis classes
  std::vector<long> kcoords;             // canonical class in the basis
  std::vector<std::vector<long>> dray;   // dray[b][rho] = ray coefficients of basis class b

  int nchart() const { return static_cast<int>(rays.size()); }

  long intersect(const std::vector<long>& a, const std::vector<long>& b) const {
    long r = 0;
    for (int i = 0; i < npic; ++i)
      for (int j = 0; j < npic; ++j) r += a[static_cast<size_t>(i)] * gram[static_cast<size_t>(i)][static_cast<size_t>(j)] * b[static_cast<size_t>(j)];
    return r;
  }
  long kdot(const std::vector<long>& a) const { return intersect(a, kcoords); }
  long ksq() const { return intersect(kcoords, kcoords); }

  // Euler characteristic by Riemann-Roch; chi(O) = 1 on a toric surface.
  long rr_chi(const std::vector<long>& d) const { return 1 + (intersect(d, d) - kdot(d)) / 2; }

  // Ray coefficients of the invariant representative of a class.
  std::vector<long> ray_coeffs(const std::vector<long>& d) const {
    std::vector<long> out(static_cast<size_t>(nchart()), 0);
    for (int b = 0; b < npic; ++b)
      for (int r = 0; r < nchart(); ++r) out[static_cast<size_t>(r)] += d[static_cast<size_t>(b)] * dray[static_cast<size_t>(b)][static_cast<size_t>(r)];
    return out;
  }

  // Local weight of O(d) on chart i: the lattice point m with <m, r> = -d_r on
  // the chart's two rays.  Restriction to a subscheme multiplies by chi(m).
  Int2 a_sigma(const std::vector<long>& d, int chart) const {
    auto dv = ray_coeffs(d);
    Int2 r1 = rays[static_cast<size_t>(chart)];
    Int2 r2 = rays[static_cast<size_t>((chart + 1) % nchart())];
    long b1 = -dv[static_cast<size_t>(chart)];
    long b2 = -dv[static_cast<size_t>((chart + 1) % nchart())];
    long det = static_cast<long>(r1[0]) * r2[1] - static_cast<long>(r1[1]) * r2[0];
    if (det != 1 && det != -1) throw config_error("chart cone is not unimodular");
    // Solve m . r1 = b1, m . r2 = b2.
    long m1 = (b1 * r2[1] - b2 * r1[1]) / det;
    long m2 = (b2 * r1[0] - b1 * r2[0]) / det;
    return {static_cast<int>(m1), static_cast<int>(m2)};
  }

  // Independent Euler characteristic: push the chartwise section characters to
  // one variable z along a generic cocharacter and sum the Laurent expansions.
  // The infinite tails cancel; the surviving window is the full cohomology
  // character, whose total multiplicity is chi(d).
  long equivariant_chi(const std::vector<long>& d) const;

  void validate() const;
};

inline long ToricSurface::equivariant_chi(const std::vector<long>& d) const {
  const Int2 phi{1, 617};
  // Window bound from the weights of d and of K-d (Serre duality side).
  std::vector<long> kd(kcoords);
  for (int b = 0; b < npic; ++b) kd[static_cast<size_t>(b)] -= d[static_cast<size_t>(b)];
  long B = 0;
  for (int i = 0; i < nchart(); ++i) {
    Int2 a = a_sigma(d, i), ak = a_sigma(kd, i);
    B = std::max({B, std::labs(a[0]), std::labs(a[1]), std::labs(ak[0]), std::labs(ak[1])});
  }
  B = 3 * B + 6;
  const long top = 618 * B;
  const long hi = top + 618 * 4 + 8;
  const long lo = -hi;
  std::vector<long> acc(static_cast<size_t>(hi - lo + 1), 0);

  for (int i = 0; i < nchart(); ++i) {
    Int2 a = a_sigma(d, i);
    long base = i2dot(phi, a);
    long sign = 1;
    long pv = i2dot(phi, charts[static_cast<size_t>(i)].v);
    long pw = i2dot(phi, charts[static_cast<size_t>(i)].w);
    if (pv == 0 || pw == 0) throw config_error("cocharacter degenerate on a chart");
    // 1/(1-z^a): for a<0 rewrite as -sum_{k>=1} z^{-ka}.
    long sv = pv, sw = pw;
    if (sv < 0) { sign = -sign; base += -sv; sv = -sv; }
    if (sw < 0) { sign = -sign; base += -sw; sw = -sw; }
    for (long k1 = 0; base + k1 * sv <= hi; ++k1)
      for (long k2 = 0; base + k1 * sv + k2 * sw <= hi; ++k2)
        acc[static_cast<size_t>(base + k1 * sv + k2 * sw - lo)] += sign;
  }

  long total = 0;
  for (long deg = lo; deg <= hi; ++deg) {
    long v = acc[static_cast<size_t>(deg - lo)];
    if (v == 0) continue;
    if (deg > top || deg < -top) throw config_error("character tail failed to cancel; enlarge window");
    total += v;
  }
  return total;
}

inline void ToricSurface::validate() const {
  if (static_cast<int>(charts.size()) != nchart()) throw config_error("chart count mismatch");
  // Dual-basis property of each chart.
  for (int i = 0; i < nchart(); ++i) {
    Int2 r1 = rays[static_cast<size_t>(i)], r2 = rays[static_cast<size_t>((i + 1) % nchart())];
    const ToricChart& ch = charts[static_cast<size_t>(i)];
    if (i2dot(ch.v, r1) != 1 || i2dot(ch.v, r2) != 0 || i2dot(ch.w, r1) != 0 || i2dot(ch.w, r2) != 1)
      throw config_error("chart weights are not dual to the cone rays");
  }
  // Weight consistency across overlaps: the local weights of one divisor agree
  // along the shared ray, i.e. they come from one piecewise-linear function.
  for (int b = 0; b < npic; ++b) {
    std::vector<long> cl(static_cast<size_t>(npic), 0);
    cl[static_cast<size_t>(b)] = 1;
    for (int i = 0; i < nchart(); ++i) {
      int j = (i + 1) % nchart();
      Int2 shared = rays[static_cast<size_t>(j)];
      if (i2dot(i2sub(a_sigma(cl, i), a_sigma(cl, j)), shared) != 0)
        throw config_error("divisor weights disagree on a chart overlap");
    }
  }
  // Riemann-Roch against the equivariant count for a spread of classes.
  std::vector<std::vector<long>> samples;
  samples.push_back(std::vector<long>(static_cast<size_t>(npic), 0));
  samples.push_back(kcoords);
  for (int b = 0; b < npic; ++b) {
    std::vector<long> cl(static_cast<size_t>(npic), 0);
    cl[static_cast<size_t>(b)] = 1;
    samples.push_back(cl);
    cl[static_cast<size_t>(b)] = -1;
    samples.push_back(cl);
    cl[static_cast<size_t>(b)] = 2;
    samples.push_back(cl);
  }
  for (const auto& d : samples)
    if (equivariant_chi(d) != rr_chi(d)) throw config_error("equivariant Euler characteristic disagrees with Riemann-Roch");
}

inline ToricChart dual_chart(Int2 r1, Int2 r2) {
  long det = static_cast<long>(r1[0]) * r2[1] - static_cast<long>(r1[1]) * r2[0];
  if (det != 1 && det != -1) throw config_error("fan cone is not unimodular");
  auto solve = [&](long b1, long b2) -> Int2 {
    long m1 = (b1 * r2[1] - b2 * r1[1]) / det;
    long m2 = (b2 * r1[0] - b1 * r2[0]) / det;
    return {static_cast<int>(m1), static_cast<int>(m2)};
  };
  return ToricChart{solve(1, 0), solve(0, 1)};
}

inline ToricSurface make_toric_surface(std::string name, std::vector<Int2> rays, int npic,
                                       std::vector<std::vector<long>> gram, std::vector<long> kcoords,
                                       std::vector<std::vector<long>> dray) {
  ToricSurface S;
  S.name = std::move(name);
  S.rays = std::move(rays);
  for (int i = 0; i < S.nchart(); ++i)
    S.charts.push_back(dual_chart(S.rays[static_cast<size_t>(i)], S.rays[static_cast<size_t>((i + 1) % S.nchart())]));
  S.npic = npic;
  S.gram = std::move(gram);
  S.kcoords = std::move(kcoords);
  S.dray = std::move(dray);
  S.validate();
  return S;
}

// The projective plane: basis {H}, H^2 = 1, K = -3H.
inline const ToricSurface& toric_p2() {
  static const ToricSurface S = make_toric_surface(
      "p2", {{{1, 0}}, {{0, 1}}, {{-1, -1}}}, 1, {{1}}, {-3}, {{0, 0, 1}});
  return S;
}

// The quadric surface: basis {B1, B2} of the two rulings, B1.B2 = 1, K = (-2,-2).
inline const ToricSurface& toric_p1xp1() {
  static const ToricSurface S = make_toric_surface(
      "p1xp1", {{{1, 0}}, {{0, 1}}, {{-1, 0}}, {{0, -1}}}, 2, {{0, 1}, {1, 0}}, {-2, -2},
      {{0, 0, 1, 0}, {0, 0, 0, 1}});
  return S;
}

// The first Hirzebruch surface: basis {B, F} with B^2 = -1, B.F = 1, F^2 = 0,
// K = -2B - 3F.
inline const ToricSurface& toric_hirzebruch1() {
  static const ToricSurface S = make_toric_surface(
      "hirzebruch1", {{{1, 0}}, {{0, 1}}, {{-1, 1}}, {{0, -1}}}, 2, {{-1, 1}, {1, 0}}, {-2, -3},
      {{0, 1, 0, 0}, {1, 0, 0, 0}});
  return S;
}

inline const ToricSurface& toric_by_name(const std::string& name) {
  if (name == "p2") return toric_p2();
  if (name == "p1xp1") return toric_p1xp1();
  if (name == "hirzebruch1") return toric_hirzebruch1();
  throw config_error("unknown toric surface: " + name);
}

// A surface together with the divisor pair (a1, c1) of a rank-2 moduli problem
// and the equivariant structures chosen for O(a1) and O(c1).  The derived
// divisors a2 = c1 - a1 and c1 - 2a1 inherit their weights.
struct ToricSurfaceConfig {
  const ToricSurface* S = nullptr;
  std::vector<long> a1, c1;
  Int2 shift_a1{0, 0}, shift_c1{0, 0};  // equivariant-structure offsets
  long chi_plus = 0, chi_minus = 0;     // chi(c1 - 2a1), chi(2a1 - c1)

  int nchart() const { return S->nchart(); }
  const ToricChart& chart(int i) const { return S->charts[static_cast<size_t>(i)]; }

  std::vector<long> a2() const {
    std::vector<long> r = c1;
    for (size_t i = 0; i < r.size(); ++i) r[i] -= a1[i];
    return r;
  }
  std::vector<long> plus_class() const {  // c1 - 2a1
    std::vector<long> r = c1;
    for (size_t i = 0; i < r.size(); ++i) r[i] -= 2 * a1[i];
    return r;
  }

  Int2 wa1(int chart) const { return i2add(S->a_sigma(a1, chart), shift_a1); }
  Int2 wc1(int chart) const { return i2add(S->a_sigma(c1, chart), shift_c1); }
  Int2 wa2(int chart) const { return i2sub(wc1(chart), wa1(chart)); }
  Int2 wplus(int chart) const { return i2sub(wa2(chart), wa1(chart)); }   // c1 - 2a1
  Int2 wminus(int chart) const { return i2neg(wplus(chart)); }            // 2a1 - c1

  // Ranks of the three global pieces absorbed into the chartwise classes.
  long rank_correction() const { return 1 + chi_plus + chi_minus; }
  long c2_of(int n) const { return n + S->intersect(a1, a2()); }
  long vd_of(int n) const {
    long c2 = c2_of(n);
    return 4 * c2 - S->intersect(c1, c1) - 3;
  }
};

inline ToricSurfaceConfig make_config(const ToricSurface& S, std::vector<long> a1, std::vector<long> c1) {
  ToricSurfaceConfig cfg;
  cfg.S = &S;
  cfg.a1 = std::move(a1);
  cfg.c1 = std::move(c1);
  auto plus = cfg.plus_class();
  std::vector<long> minus(plus);
  for (auto& x : minus) x = -x;
  cfg.chi_plus = S.rr_chi(plus);
  cfg.chi_minus = S.rr_chi(minus);
  if (S.equivariant_chi(plus) != cfg.chi_plus || S.equivariant_chi(minus) != cfg.chi_minus)
    throw config_error("equivariant Euler characteristic disagrees with Riemann-Roch");
  // chi(D) + chi(-D) = 2*chi(O) + D^2 on a surface.
  if (cfg.chi_plus + cfg.chi_minus != 2 + S.intersect(plus, plus))
    throw config_error("divisor pair fails the duality rank identity");
  // Four-pair rank bookkeeping: vd(n) = 4n - (1 + chi_plus + chi_minus).
  for (int n = 0; n <= 3; ++n)
    if (cfg.vd_of(n) != 4 * n - cfg.rank_correction())
      throw config_error("virtual dimension bookkeeping failed");
  return cfg;
}

// Fixed points of the big torus on the pair moduli: a tuple of partitions per
// chart for the first ideal sheaf and one for the second.
struct FixedPoint {
  std::vector<Partition> lam, mu;
  int n1() const {
    int n = 0;
    for (const auto& p : lam) n += partition_size(p);
    return n;
  }
  int n2() const {
    int n = 0;
    for (const auto& p : mu) n += partition_size(p);
    return n;
  }
};

// All ways to distribute n among ncharts charts as partitions.
inline std::vector<std::vector<Partition>> partition_tuples(int ncharts, int n) {
  std::vector<std::vector<Partition>> out;
  std::vector<Partition> cur(static_cast<size_t>(ncharts));
  auto rec = [&](auto&& self, int chart, int left) -> void {
    if (chart == ncharts) {
      if (left == 0) out.push_back(cur);
      return;
    }
    for (int take = 0; take <= left; ++take) {
      if (take == 0) {
        cur[static_cast<size_t>(chart)] = {};
        self(self, chart + 1, left - take);
        continue;
      }
      for (const auto& p : partitions_of(take)) {
        cur[static_cast<size_t>(chart)] = p;
        self(self, chart + 1, left - take);
      }
    }
  };
  rec(rec, 0, n);
  return out;
}

inline std::vector<FixedPoint> fixed_points(const ToricSurfaceConfig& cfg, int n1, int n2) {
  std::vector<FixedPoint> out;
  auto A = partition_tuples(cfg.nchart(), n1);
  auto B = partition_tuples(cfg.nchart(), n2);
  for (const auto& a : A)
    for (const auto& b : B) out.push_back(FixedPoint{a, b});
  return out;
}

// One ordered pair (i, j) of the chartwise obstruction-theory class: the
// twisted combination with circle weight s^{w_j - w_i} for weights (-1, +1).
inline CharPoly mochizuki_pair_term(const ToricSurfaceConfig& cfg, const Partition& lam, const Partition& mu,
                                    int i, int j, int chart) {
  const ToricChart& ch = cfg.chart(chart);
  const CharPoly Zi = zchar(i == 1 ? lam : mu, ch.v, ch.w);
  const CharPoly Zj = zchar(j == 1 ? lam : mu, ch.v, ch.w);
  const Int2 ai = (i == 1) ? cfg.wa1(chart) : cfg.wa2(chart);
  const Int2 aj = (j == 1) ? cfg.wa1(chart) : cfg.wa2(chart);
  const int wi = (i == 1) ? -1 : 1;
  const int wj = (j == 1) ? -1 : 1;
  return rhom_combination(Zi, Zj, i2sub(aj, ai), ch.v, ch.w).shifted({0, 0}, wj - wi);
}

// Chartwise restriction of the obstruction-theory class: the sum of the four
// ordered pairs.  Summed over charts this has rank 4(n1+n2); subtracting the
// ranks of the three global pieces (rank_correction) leaves vd.
inline CharPoly mochizuki_restriction(const ToricSurfaceConfig& cfg, const Partition& lam, const Partition& mu,
                                      int chart) {
  CharPoly r;
  for (int i = 1; i <= 2; ++i)
    for (int j = 1; j <= 2; ++j) r += mochizuki_pair_term(cfg, lam, mu, i, j, chart);
  return r;
}

}  // namespace genera
