#pragma once
#include <array>
#include <map>
#include <utility>
#include <vector>

#include "genera/jacobi.hpp"
#include "genera/multiseries.hpp"
#include "genera/toric.hpp"
#include "genera/vgraded.hpp"

namespace genera {

// Whether every stored coefficient is zero; a truncated unknown tail is
// allowed, unlike in ring_is_zero.
inline bool ring_stored_zero(const Q& x) { return qzero(x); }
inline bool ring_stored_zero(const YLaurent& x) { return x.stored_empty(); }
inline bool ring_stored_zero(const QYSeries& x) {
  for (int d = 0; d <= x.qmax; ++d)
    if (!x.qrow(d).stored_empty()) return false;
  return true;
}
inline bool ring_stored_zero(const VGraded& x) { return x.is_zero(); }

// ---------------------------------------------------------------------------
// Windowed Laurent rows.
//
// A fixed-point contribution is a Laurent series in the slope variable u and
// the circle variable s whose validity region is not a rectangle: inverting a
// mixed root (c u + j s) produces content supported on the diagonal
// {u-exp = -(s-exp)}, and a rectangle cap would charge every such factor a
// full unit of s-validity.  Rows keyed by the u-exponent, each carrying its
// own s-cap, express exactly the windows that arise.
// ---------------------------------------------------------------------------

// One u-row: a Laurent polynomial in s over R.  Keys at or below `hi` that
// are absent are exactly zero; keys above `hi` are unknown (truncated tail).
// An empty map with hi == kExact is the exact zero row and imposes no caps.
template <class R>
struct SRow {
  R proto;
  std::map<int, R> c;
  int hi = kExact;

  explicit SRow(const R& exemplar) : proto(ring_zero_like(exemplar)) {}

  static SRow one(const R& exemplar) {
    SRow r(exemplar);
    r.c[0] = ring_one_like(exemplar);
    return r;
  }
  static SRow mono(const R& value, int key) {
    SRow r(value);
    if (!ring_is_zero(value)) r.c[key] = value;
    return r;
  }

  bool stored_empty() const { return c.empty(); }
  bool is_exact_zero() const { return c.empty() && hi == kExact; }
  // Lowest exponent that can carry content: below the first stored key all is
  // known zero; an entry-free row can only hide content above its cap.
  int lo_eff() const { return c.empty() ? sat_add(hi, 1) : c.begin()->first; }

  void normalize() {
    for (auto it = c.begin(); it != c.end();)
      it = (ring_is_zero(it->second) || (hi != kExact && it->first > hi)) ? c.erase(it) : ++it;
  }

  const R& coeff(int k) const {
    if (hi != kExact && k > hi)
      throw window_error("s-exponent " + std::to_string(k) + " beyond row validity " + std::to_string(hi));
    auto it = c.find(k);
    return it == c.end() ? proto : it->second;
  }

  friend SRow operator+(const SRow& x, const SRow& y) {
    SRow r(x.proto);
    r.hi = std::min(x.hi, y.hi);
    r.c = x.c;
    for (const auto& [k, v] : y.c) {
      auto it = r.c.find(k);
      if (it == r.c.end())
        r.c[k] = v;
      else
        it->second = it->second + v;
    }
    r.normalize();
    return r;
  }
  friend SRow operator-(const SRow& x) {
    SRow r = x;
    for (auto& [k, v] : r.c) v = -v;
    return r;
  }
  friend SRow operator-(const SRow& x, const SRow& y) { return x + (-y); }

  friend SRow operator*(const SRow& x, const SRow& y) {
    SRow r(x.proto);
    r.hi = std::min(sat_add(x.hi, y.lo_eff()), sat_add(y.hi, x.lo_eff()));
    if (x.c.empty() || y.c.empty()) return r;
    // Dense convolution over the stored spans.
    const int xlo = x.c.begin()->first, xhi = x.c.rbegin()->first;
    const int ylo = y.c.begin()->first, yhi = y.c.rbegin()->first;
    std::vector<const R*> xv(static_cast<size_t>(xhi - xlo + 1), nullptr);
    for (const auto& [k, v] : x.c) xv[static_cast<size_t>(k - xlo)] = &v;
    std::vector<const R*> yv(static_cast<size_t>(yhi - ylo + 1), nullptr);
    for (const auto& [k, v] : y.c) yv[static_cast<size_t>(k - ylo)] = &v;
    int rhi = (r.hi == kExact) ? xhi + yhi : std::min(xhi + yhi, r.hi);
    if (rhi < xlo + ylo) return r;
    std::vector<R> acc(static_cast<size_t>(rhi - xlo - ylo + 1), r.proto);
    for (int i = 0; i <= xhi - xlo; ++i) {
      if (!xv[static_cast<size_t>(i)]) continue;
      const int jmax = std::min(yhi - ylo, rhi - xlo - ylo - i);
      for (int j = 0; j <= jmax; ++j) {
        if (!yv[static_cast<size_t>(j)]) continue;
        acc[static_cast<size_t>(i + j)] =
            acc[static_cast<size_t>(i + j)] + (*xv[static_cast<size_t>(i)]) * (*yv[static_cast<size_t>(j)]);
      }
    }
    for (int k = 0; k < static_cast<int>(acc.size()); ++k)
      if (!ring_is_zero(acc[static_cast<size_t>(k)])) r.c[xlo + ylo + k] = acc[static_cast<size_t>(k)];
    return r;
  }

  friend SRow operator*(const Q& q, const SRow& x) {
    if (qzero(q)) return SRow(x.proto);  // annihilates the unknown tail too
    SRow r = x;
    for (auto& [k, v] : r.c) v = q * v;
    r.normalize();
    return r;
  }
  SRow scaled(const R& f) const {
    if (ring_is_zero(f)) return SRow(proto);
    SRow r(proto);
    r.hi = hi;
    for (const auto& [k, v] : c) r.c[k] = f * v;
    r.normalize();
    return r;
  }
  SRow shifted(int d) const {
    SRow r(proto);
    r.hi = sat_add(hi, d);
    for (const auto& [k, v] : c) r.c[k + d] = v;
    return r;
  }
  SRow truncated(int cap) const {
    SRow r = *this;
    r.hi = std::min(r.hi, cap);
    r.normalize();
    return r;
  }
  friend bool operator==(const SRow& x, const SRow& y) { return x.hi == y.hi && x.c == y.c; }

  // exp of a row with strictly positive keys, by the Euler recursion
  // k E_k = sum_t t L_t E_{k-t}.  The cap must be finite unless the row is
  // exactly zero: the true exponential has unbounded support.
  SRow exp_val1() const {
    if (!c.empty() && c.begin()->first < 1) throw ring_error("row exp needs positive valuation");
    if (c.empty()) {
      SRow r = one(proto);
      r.hi = hi;
      return r;
    }
    if (hi == kExact) throw ring_error("row exp of an uncapped row");
    std::vector<R> l(static_cast<size_t>(hi) + 1, proto), e(static_cast<size_t>(hi) + 1, proto);
    for (const auto& [k, v] : c)
      if (k <= hi) l[static_cast<size_t>(k)] = v;
    e[0] = ring_one_like(proto);
    for (int k = 1; k <= hi; ++k) {
      R s = proto;
      for (int t = 1; t <= k; ++t) {
        if (ring_is_zero(l[static_cast<size_t>(t)])) continue;
        s = s + qof(t) * (l[static_cast<size_t>(t)] * e[static_cast<size_t>(k - t)]);
      }
      e[static_cast<size_t>(k)] = qof(1, k) * s;
    }
    SRow r(proto);
    r.hi = hi;
    for (int k = 0; k <= hi; ++k)
      if (!ring_is_zero(e[static_cast<size_t>(k)])) r.c[k] = e[static_cast<size_t>(k)];
    return r;
  }
};

template <class R>
inline SRow<R> ring_zero_like(const SRow<R>& x) { return SRow<R>(x.proto); }
template <class R>
inline SRow<R> ring_one_like(const SRow<R>& x) { return SRow<R>::one(x.proto); }
template <class R>
inline bool ring_is_zero(const SRow<R>& x) { return x.is_exact_zero(); }

// A windowed family of u-rows.  Rows with keys at or below u_hi that are
// absent are exactly zero rows; rows above u_hi were not computed.
template <class R>
struct URows {
  R proto;
  SRow<R> zrow;
  std::map<int, SRow<R>> rows;
  int u_hi = kExact;

  explicit URows(const R& exemplar) : proto(ring_zero_like(exemplar)), zrow(exemplar) {}

  static URows one(const R& exemplar) {
    URows r(exemplar);
    r.rows.emplace(0, SRow<R>::one(exemplar));
    return r;
  }

  bool is_exact_zero() const { return rows.empty() && u_hi == kExact; }
  int u_lo_eff() const { return rows.empty() ? sat_add(u_hi, 1) : rows.begin()->first; }

  void normalize() {
    for (auto it = rows.begin(); it != rows.end();)
      it = (it->second.is_exact_zero() || (u_hi != kExact && it->first > u_hi)) ? rows.erase(it) : ++it;
  }

  const SRow<R>& row(int k) const {
    if (u_hi != kExact && k > u_hi)
      throw window_error("u-exponent " + std::to_string(k) + " beyond validity " + std::to_string(u_hi));
    auto it = rows.find(k);
    return it == rows.end() ? zrow : it->second;
  }

  friend URows operator+(const URows& x, const URows& y) {
    URows r(x.proto);
    r.u_hi = std::min(x.u_hi, y.u_hi);
    r.rows = x.rows;
    for (const auto& [k, v] : y.rows) {
      auto it = r.rows.find(k);
      if (it == r.rows.end())
        r.rows.emplace(k, v);
      else
        it->second = it->second + v;
    }
    r.normalize();
    return r;
  }
  friend URows operator-(const URows& x) {
    URows r = x;
    for (auto& [k, v] : r.rows) v = -v;
    return r;
  }
  friend URows operator-(const URows& x, const URows& y) { return x + (-y); }

  friend URows operator*(const URows& x, const URows& y) {
    URows r(x.proto);
    r.u_hi = std::min(sat_add(x.u_hi, y.u_lo_eff()), sat_add(y.u_hi, x.u_lo_eff()));
    for (const auto& [i, xi] : x.rows)
      for (const auto& [j, yj] : y.rows) {
        const int k = i + j;
        if (r.u_hi != kExact && k > r.u_hi) continue;
        SRow<R> p = xi * yj;
        auto it = r.rows.find(k);
        if (it == r.rows.end())
          r.rows.emplace(k, std::move(p));
        else
          it->second = it->second + p;
      }
    r.normalize();
    return r;
  }

  friend URows operator*(const Q& q, const URows& x) {
    if (qzero(q)) return URows(x.proto);
    URows r = x;
    for (auto& [k, v] : r.rows) v = q * v;
    r.normalize();
    return r;
  }
  URows scaled(const R& f) const {
    if (ring_is_zero(f)) return URows(proto);
    URows r(proto);
    r.u_hi = u_hi;
    for (const auto& [k, v] : rows) r.rows.emplace(k, v.scaled(f));
    r.normalize();
    return r;
  }
  URows shifted_u(int d) const {
    URows r(proto);
    r.u_hi = sat_add(u_hi, d);
    for (const auto& [k, v] : rows) r.rows.emplace(k + d, v);
    return r;
  }
  URows shifted_s(int d) const {
    URows r(proto);
    r.u_hi = u_hi;
    for (const auto& [k, v] : rows) r.rows.emplace(k, v.shifted(d));
    return r;
  }
  URows truncated_u(int cap) const {
    URows r = *this;
    r.u_hi = std::min(r.u_hi, cap);
    r.normalize();
    return r;
  }
  URows truncated_s(int cap) const {
    URows r(proto);
    r.u_hi = u_hi;
    for (const auto& [k, v] : rows) r.rows.emplace(k, v.truncated(cap));
    r.normalize();
    return r;
  }
  friend bool operator==(const URows& x, const URows& y) {
    return x.u_hi == y.u_hi && x.rows == y.rows;
  }
};

template <class R>
inline URows<R> ring_zero_like(const URows<R>& x) { return URows<R>(x.proto); }
template <class R>
inline URows<R> ring_one_like(const URows<R>& x) { return URows<R>::one(x.proto); }
template <class R>
inline bool ring_is_zero(const URows<R>& x) { return x.is_exact_zero(); }

// ---------------------------------------------------------------------------
// Genus data: the one-variable factor F of a multiplicative genus, split as
// F = F(0) * Ftilde with log Ftilde carried as a power series in the Chern
// root.  The constant F(0) need not be a unit monomial-free series (for the
// elliptic genus it is a y-Laurent monomial-led non-unit), which is why only
// the normalized logarithm lives in the series ring.
// ---------------------------------------------------------------------------

template <class R>
struct GenusData {
  PowerSeries<R> F;   // F(x) to x-order xmax
  R F0;               // F(0)
  PowerSeries<R> LG;  // log(F / F(0)); zero constant term
  int xmax = 0;
  int ycap = 0;       // y-window used for coefficient-ring inversions
};

// log of a series with constant term 1 via (log f)' = f' / f; quadratic in
// the truncation order, unlike the direct log recursion.
template <class C>
inline PowerSeries<C> series_log_unit(const PowerSeries<C>& f, const RingCtx& ctx) {
  if (!ring_stored_zero(f.a[0] - ring_one_like(f.a[0])))
    throw ring_error("series log needs constant term 1");
  PowerSeries<C> r(f.nmax, f.a[0]);
  if (f.nmax == 0) return r;
  PowerSeries<C> finv = f.inverted(ctx).truncated(f.nmax - 1);
  PowerSeries<C> df(f.nmax - 1, f.a[0]);
  for (int k = 0; k < f.nmax; ++k) df.a[static_cast<size_t>(k)] = qof(k + 1) * f.coeff(k + 1);
  PowerSeries<C> lp = df * finv;
  for (int k = 1; k <= f.nmax; ++k) r.a[static_cast<size_t>(k)] = qof(1, k) * lp.coeff(k - 1);
  return r;
}

// Binary power in the coefficient ring.
template <class R>
inline R ring_pow(const R& x, long e) {
  if (e < 0) throw ring_error("negative ring power");
  R acc = ring_one_like(x), base = x;
  while (e > 0) {
    if (e & 1) acc = acc * base;
    base = base * base;
    e >>= 1;
  }
  return acc;
}

// Cobordism genus: F(x) = 1 + sum_k v_k x^k, truncated by the ring's weight.
inline GenusData<VGraded> cob_genus(const VRing& ring, int xmax) {
  GenusData<VGraded> gd;
  gd.F = PowerSeries<VGraded>(xmax, VGraded::zero(ring));
  gd.F.a[0] = VGraded::one(ring);
  for (int k = 1; k <= std::min(xmax, ring.K); ++k) gd.F.a[static_cast<size_t>(k)] = VGraded::v(ring, k);
  gd.F0 = VGraded::one(ring);
  gd.LG = series_log_unit(gd.F, RingCtx{});
  gd.xmax = xmax;
  gd.ycap = 0;
  return gd;
}

// Elliptic genus: F(x) = x * theta1(q, e^x y^{-1}) / theta1(q, e^x), built
// from the triple product.  The q^{1/8} and eta factors cancel in the ratio;
// the leading x of the denominator is divided out explicitly, so no series
// inversion at a non-unit ever happens.
inline GenusData<QYSeries> elg_genus(int qmax, int ywin, int xmax) {
  if (ywin <= 0) ywin = default_ywin(qmax);
  using PS = PowerSeries<QYSeries>;
  const QYSeries zero = QYSeries::zero(qmax);
  RingCtx ctx;
  ctx.ycap = ywin;

  // coefficients of e^{t x} as rationals
  auto expc = [&](const Q& t, int k) {
    Q c(1);
    for (int i = 1; i <= k; ++i) c *= t / i;
    return c;
  };
  // prefactor of the numerator: e^{x/2} y^{-1/2} - e^{-x/2} y^{1/2}
  PS num(xmax, zero);
  for (int k = 0; k <= xmax; ++k) {
    YLaurent yl = YLaurent::monomial(-1, expc(qof(1, 2), k)) + YLaurent::monomial(1, -expc(qof(-1, 2), k));
    num.a[static_cast<size_t>(k)] = QYSeries::constant(qmax, yl);
  }
  // prefactor of the denominator with the leading x removed:
  // (e^{x/2} - e^{-x/2}) / x
  PS den(xmax, zero);
  for (int k = 0; k <= xmax; ++k) {
    Q c = expc(qof(1, 2), k + 1) - expc(qof(-1, 2), k + 1);
    den.a[static_cast<size_t>(k)] = QYSeries::constant(qmax, YLaurent::monomial(0, c));
  }
  // theta factors (1 - e^{sx} y^{t/2} q^n) as x-series
  auto factor = [&](int s, int t, int n) {
    PS f(xmax, zero);
    f.a[0] = QYSeries::one(qmax);
    for (int k = 0; k <= xmax; ++k) {
      QYSeries term(qmax);
      term.qrow_mut(n) = YLaurent::monomial(t, -expc(qof(s), k));
      f.a[static_cast<size_t>(k)] = f.a[static_cast<size_t>(k)] + term;
    }
    return f;
  };
  for (int n = 1; n <= qmax; ++n) {
    num = num * factor(1, -2, n) * factor(-1, 2, n);
    den = den * factor(1, 0, n) * factor(-1, 0, n);
  }

  GenusData<QYSeries> gd;
  gd.F = num * den.inverted(ctx);
  gd.F0 = gd.F.coeff(0);
  gd.LG = series_log_unit(gd.F.scaled(gd.F0.inverted(ywin)), ctx);
  gd.xmax = xmax;
  gd.ycap = ywin;
  return gd;
}

// Taylor slices of log Ftilde at the point j*s:
//   Lambda_k = sum_{t >= k} binom(t, k) LG_t (j s)^{t-k},
// an s-polynomial valid to degree xmax - k.  Row k of log Ftilde(c u + j s)
// is c^k Lambda_k.
template <class R>
inline std::vector<SRow<R>> lambda_rows(const GenusData<R>& gd, int j, int kmax) {
  const R proto = ring_zero_like(gd.F0);
  std::vector<SRow<R>> out;
  out.reserve(static_cast<size_t>(kmax) + 1);
  for (int k = 0; k <= kmax; ++k) {
    SRow<R> row(proto);
    row.hi = gd.xmax - k;
    for (int t = std::max(k, 1); t <= gd.xmax; ++t) {
      const R& lg = gd.LG.coeff(t);
      if (ring_is_zero(lg)) continue;
      Q c = Q(binom_z(static_cast<unsigned long>(t), static_cast<unsigned long>(k))) * qpow(qof(j), t - k);
      auto it = row.c.find(t - k);
      if (it == row.c.end())
        row.c[t - k] = c * lg;
      else
        it->second = it->second + c * lg;
    }
    row.normalize();
    out.push_back(std::move(row));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Localization windows and the character-to-series assembly.
// ---------------------------------------------------------------------------

struct ZWindows {
  int s_hi = -1;         // requested s-validity of each output layer; -1 = nmax + 4
  int u_check = 2;       // u-rows carried above u^0 (validity margin of the u window)
  long slope_a = 1;      // the one-parameter subtorus (t1, t2) = (t^a, t^b)
  long slope_b = -3;
  int slop = 2;          // extra x-order margin for the genus series
  int s_keep = kExact;   // optional hard cap on carried s-exponents

  int s_hi_req(int nmax) const { return s_hi >= 0 ? s_hi : nmax + 4; }
};

struct ZRunInfo {
  long values = 0;        // chart-degree contributions assembled
  long zero_values = 0;   // killed by a vanishing section weight
  int xmax_used = 0;
  int u_checked = 0;      // u-rows known above u^0 on every layer
  double seconds = 0;
};

// Genus truncation order needed for an honest window: requested validity,
// plus the shift s^{-N}, plus erosion by the Laurent tails of the strips and
// the diagonal rows.
inline int genus_xmax(int nmax, const ZWindows& win) {
  return win.s_hi_req(nmax) + 4 * nmax + (2 * nmax + win.u_check) + win.slop;
}

namespace locdetail {

// Accumulated weight data of a character list: power sums of the slope values
// grouped by circle weight, plus the exactly-monomial strip factors.
template <class R>
struct LocalAccum {
  int kmax;
  std::vector<Q> pf0, pfp, pfm;  // F-position power sums, j = 0 / +2 / -2
  std::vector<Q> rp, rm;         // Euler-position alternating power sums, j = +2 / -2
  Q kappa{1};
  long ushift = 0, sshift = 0;
  long f0_power = 0;

  explicit LocalAccum(int kmax_)
      : kmax(kmax_),
        pf0(static_cast<size_t>(kmax_) + 1, Q(0)),
        pfp(static_cast<size_t>(kmax_) + 1, Q(0)),
        pfm(static_cast<size_t>(kmax_) + 1, Q(0)),
        rp(static_cast<size_t>(kmax_) + 1, Q(0)),
        rm(static_cast<size_t>(kmax_) + 1, Q(0)) {}

  void addpow(std::vector<Q>& v, long c, long w) {
    Q p(w);
    for (int k = 0; k <= kmax; ++k) {
      v[static_cast<size_t>(k)] += p;
      p *= c;
    }
  }

  // F(c u + j s)^m; the F(0)^m part is tracked as a rank only.
  void add_f(long c, int j, long m) {
    f0_power += m;
    if (j == 0) {
      if (c == 0) return;  // F(0): no normalized part
      addpow(pf0, c, m);
    } else {
      addpow(j > 0 ? pfp : pfm, c, m);
    }
  }
  // (c u + j s)^e with a nonzero root.
  void add_eu(long c, int j, long e) {
    if (j == 0) {
      if (c == 0) throw ring_error("zero Euler root");
      kappa *= qpow(qof(c), e);
      ushift += e;
    } else {
      addpow(j > 0 ? rp : rm, c, e);
      kappa *= qpow(qof(j), e);
      sshift += e;
    }
  }

  bool trivial() const {
    auto allz = [](const std::vector<Q>& v) {
      for (const auto& x : v)
        if (!qzero(x)) return false;
      return true;
    };
    return allz(pf0) && allz(pfp) && allz(pfm) && allz(rp) && allz(rm);
  }

  // exp of the assembled log, rows 0..urow_cap before the strip shifts.
  URows<R> assemble(const GenusData<R>& gd, const std::vector<SRow<R>>& lamp,
                    const std::vector<SRow<R>>& lamm, int urow_cap) const {
    const R proto = ring_zero_like(gd.F0);
    const int uc = std::min(urow_cap, kmax);
    URows<R> result(proto);
    if (trivial()) {
      result = URows<R>::one(proto);
    } else {
      // log rows: Lambda slices for the mixed F-factors, the diagonal entries
      // c^k LG_k for the tangential ones, and the binomial tails
      // log(1 + (c/j) u/s) for the Euler strips.
      URows<R> L(proto);
      L.u_hi = uc;
      for (int k = 0; k <= uc; ++k) {
        SRow<R> row(proto);
        bool used = false;
        if (!qzero(pfp[static_cast<size_t>(k)])) {
          row = pfp[static_cast<size_t>(k)] * lamp[static_cast<size_t>(k)];
          used = true;
        }
        if (!qzero(pfm[static_cast<size_t>(k)])) {
          SRow<R> t = pfm[static_cast<size_t>(k)] * lamm[static_cast<size_t>(k)];
          row = used ? row + t : t;
          used = true;
        }
        if (k >= 1) {
          Q diag = pf0[static_cast<size_t>(k)];
          if (!qzero(diag)) {
            const R& lg = gd.LG.coeff(k);  // throws when the genus window is too small
            if (!ring_is_zero(lg)) {
              SRow<R> t = SRow<R>::mono(diag * lg, 0);
              row = used ? row + t : t;
              used = true;
            }
          }
          // sum over Euler roots of e * (-1)^{k+1}/k * (c/j)^k at s^{-k}
          Q tail = qof((k % 2) ? 1 : -1, k) *
                   (rp[static_cast<size_t>(k)] * qpow(qof(1, 2), k) + rm[static_cast<size_t>(k)] * qpow(qof(-1, 2), k));
          if (!qzero(tail)) {
            SRow<R> t = SRow<R>::mono(tail * ring_one_like(proto), -k);
            row = used ? row + t : t;
            used = true;
          }
        }
        if (used) L.rows.emplace(k, std::move(row));
      }
      L.normalize();

      // exp(L) = exp(row 0) * exp(positive rows): the first by the s-Euler
      // recursion (its s-valuation is >= 1), the second by the u-Euler
      // recursion k F_k = sum_t t L_t F_{k-t}.
      SRow<R> e0 = L.row(0).exp_val1();
      std::vector<SRow<R>> f(static_cast<size_t>(uc) + 1, SRow<R>(proto));
      f[0] = SRow<R>::one(proto);
      for (int k = 1; k <= uc; ++k) {
        SRow<R> acc(proto);
        bool any = false;
        for (int t = 1; t <= k; ++t) {
          auto it = L.rows.find(t);
          if (it == L.rows.end()) continue;
          SRow<R> term = it->second * f[static_cast<size_t>(k - t)];
          term = qof(t) * term;
          acc = any ? acc + term : term;
          any = true;
        }
        f[static_cast<size_t>(k)] = any ? qof(1, k) * acc : SRow<R>(proto);
      }
      result.u_hi = uc;
      for (int k = 0; k <= uc; ++k) {
        SRow<R> r = e0 * f[static_cast<size_t>(k)];
        if (!r.is_exact_zero()) result.rows.emplace(k, std::move(r));
      }
      result.normalize();
    }
    URows<R> out = kappa * result;
    return out.shifted_u(static_cast<int>(ushift)).shifted_s(static_cast<int>(sshift));
  }
};

inline long slope_value(Int2 m, long A, long B) { return A * m[0] + B * m[1]; }

// Character collection for one chart of one fixed point.  Returns false when
// a section weight vanishes (the whole contribution is exactly zero).
template <class R>
bool chart_accumulate(LocalAccum<R>& acc, const ToricSurfaceConfig& cfg, int chart,
                      const Partition& lam, const Partition& mu, long A, long B) {
  const ToricChart& ch = cfg.chart(chart);
  const CharPoly t1 = tangent_char(lam, ch.v, ch.w);
  const CharPoly t2 = tangent_char(mu, ch.v, ch.w);

  // tangent denominators; a vanishing slope value means the subtorus does not
  // isolate this fixed point
  for (const CharPoly* t : {&t1, &t2})
    for (const auto& [k, m] : t->c) {
      const long c = slope_value({k[0], k[1]}, A, B);
      if (c == 0) throw config_error("invalid slope or non-isolated fixed point");
      acc.add_f(c, 0, m);
      acc.add_eu(c, 0, -m);
    }

  // section numerators: H^0(O(a1)|_lam) at circle weight 0 and
  // H^0(O(a2)|_mu) twisted by the square of the circle character
  const CharPoly h1 = zchar(lam, ch.v, ch.w).shifted(cfg.wa1(chart), 0);
  for (const auto& [k, m] : h1.c) {
    const long c = slope_value({k[0], k[1]}, A, B);
    if (c == 0) return false;
    acc.add_eu(c, 0, m);
  }
  const CharPoly h2 = zchar(mu, ch.v, ch.w).shifted(cfg.wa2(chart), 2);
  for (const auto& [k, m] : h2.c) acc.add_eu(slope_value({k[0], k[1]}, A, B), k[2], m);

  // obstruction-theory class minus the two tangents: the circle-weight-zero
  // part cancels identically, leaving mixed roots only
  CharPoly D = mochizuki_restriction(cfg, lam, mu, chart) - t1 - t2;
  for (const auto& [k, m] : D.c) {
    if (k[2] == 0) throw ring_error("tangent cancellation failed in the obstruction class");
    const long c = slope_value({k[0], k[1]}, A, B);
    acc.add_f(c, k[2], m);
    acc.add_eu(c, k[2], -m);
  }
  return true;
}

template <class R>
SULayer<R> sulayer_of(const URows<R>& v) {
  SULayer<R> l(v.proto);
  l.u_hi = v.u_hi;
  int shi = kExact;
  for (const auto& [uk, row] : v.rows) shi = std::min(shi, row.hi);
  int slo = 0, ulo = 0;
  bool any = false;
  for (const auto& [uk, row] : v.rows)
    for (const auto& [sk, val] : row.c) {
      if (sk > shi) continue;
      l.m[{sk, uk}] = val;
      if (!any) {
        slo = sk;
        ulo = uk;
        any = true;
      }
      slo = std::min(slo, sk);
      ulo = std::min(ulo, uk);
    }
  l.s_hi = shi;
  l.s_lo = slo;
  l.u_lo = std::min(ulo, 0);
  l.normalize();
  return l;
}

}  // namespace locdetail

// Memoized partition lists for the degree loops.
inline const std::vector<Partition>& partitions_upto(int n) {
  static std::map<int, std::vector<Partition>> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, partitions_of(n)).first;
  return it->second;
}

// ---------------------------------------------------------------------------
// Public surface: Euler class and genus class of a character polynomial, one
// fixed-point contribution, the full surface series, and the Hilbert-scheme
// series of a single surface.
// ---------------------------------------------------------------------------

// Eu and the multiplicative genus class of a finite character polynomial
// under the slope substitution.  A zero root of positive multiplicity makes
// Eu exactly zero; of negative multiplicity it is not invertible.
template <class R>
inline std::pair<SULayer<R>, SULayer<R>> euler_and_genus(const CharPoly& cp, const GenusData<R>& gd,
                                                         const ZWindows& win, int u_cap) {
  const int kmax = u_cap;
  auto lamp = lambda_rows(gd, 2, kmax);
  auto lamm = lambda_rows(gd, -2, kmax);
  locdetail::LocalAccum<R> eu(kmax), ge(kmax);
  bool eu_zero = false;
  for (const auto& [k, m] : cp.c) {
    const long c = locdetail::slope_value({k[0], k[1]}, win.slope_a, win.slope_b);
    const int j = k[2];
    ge.add_f(c, j, m);
    if (c == 0 && j == 0) {
      if (m < 0) throw config_error("invalid slope or non-isolated fixed point");
      eu_zero = true;
      continue;
    }
    eu.add_eu(c, j, m);
  }
  SULayer<R> eul(ring_zero_like(gd.F0));
  if (!eu_zero) eul = locdetail::sulayer_of(eu.assemble(gd, lamp, lamm, u_cap));
  URows<R> g = ge.assemble(gd, lamp, lamm, u_cap);
  if (ge.f0_power != 0) {
    if (ge.f0_power < 0) throw ring_error("negative F(0) power in a genus class");
    g = g.scaled(ring_pow(gd.F0, ge.f0_power));
  }
  return {eul, locdetail::sulayer_of(g)};
}

// One fixed-point contribution of the pair moduli: the product over charts of
//   Eu(H0(a1)) Eu(H0(a2) s^2) T(E) / (Eu(T1) Eu(T2) Eu(E - T1 - T2)),
// including the overall F(0)^{4 n} factor.
template <class R>
inline SULayer<R> fixed_point_contribution(const ToricSurfaceConfig& cfg, const FixedPoint& fp,
                                           const GenusData<R>& gd, const ZWindows& win) {
  const int n = fp.n1() + fp.n2();
  const int u_glob = 2 * n + win.u_check;
  auto lamp = lambda_rows(gd, 2, u_glob);
  auto lamm = lambda_rows(gd, -2, u_glob);
  URows<R> prod = URows<R>::one(ring_zero_like(gd.F0));
  long f0_total = 0;
  for (int chart = 0; chart < cfg.nchart(); ++chart) {
    const Partition& lam = fp.lam[static_cast<size_t>(chart)];
    const Partition& mu = fp.mu[static_cast<size_t>(chart)];
    const int nc = partition_size(lam) + partition_size(mu);
    const int u_need = 2 * (n - nc) + win.u_check;
    locdetail::LocalAccum<R> acc(u_glob);
    if (!locdetail::chart_accumulate(acc, cfg, chart, lam, mu, win.slope_a, win.slope_b))
      return SULayer<R>(ring_zero_like(gd.F0));
    f0_total += acc.f0_power;
    prod = prod * acc.assemble(gd, lamp, lamm, u_need - static_cast<int>(acc.ushift));
  }
  if (f0_total != 4L * n) throw ring_error("rank bookkeeping failed in a fixed-point contribution");
  if (n > 0) prod = prod.scaled(ring_pow(gd.F0, 4L * n));
  return locdetail::sulayer_of(prod);
}

// The full surface series: layers N = 0..nmax of p^N (2s)^{-N} [sum over
// fixed points]_{u-rows}.  The fixed point sum is a polynomial in u; its
// negative u-rows must cancel across fixed points and the u^0 row is the
// layer.  Validity windows propagate honestly; an insufficient genus
// truncation surfaces as a window_error.
template <class R>
inline MultiSeries<R> z_surface(const ToricSurfaceConfig& cfg, const GenusData<R>& gd, int nmax,
                                const ZWindows& win, ZRunInfo* info = nullptr) {
  const R proto = ring_zero_like(gd.F0);
  const int u_glob = 2 * nmax + win.u_check;
  if (gd.xmax < u_glob) throw window_error("genus truncation below the u-row count");
  auto lamp = lambda_rows(gd, 2, u_glob);
  auto lamm = lambda_rows(gd, -2, u_glob);

  ZRunInfo local;
  ZRunInfo& ri = info ? *info : local;
  ri.xmax_used = gd.xmax;

  // per-chart generating series: fixed points factor into independent chart
  // contributions, so the fixed point sum is a product over charts
  using PU = PowerSeries<URows<R>>;
  PU total = PU::one(nmax, URows<R>(proto));
  for (int chart = 0; chart < cfg.nchart(); ++chart) {
    PU g(nmax, URows<R>(proto));
    for (int n = 0; n <= nmax; ++n) {
      const int u_need = 2 * (nmax - n) + win.u_check;
      URows<R> sum(proto);
      bool first = true;
      for (int a = 0; a <= n; ++a)
        for (const auto& lam : partitions_upto(a))
          for (const auto& mu : partitions_upto(n - a)) {
            locdetail::LocalAccum<R> acc(u_glob);
            ++ri.values;
            if (!locdetail::chart_accumulate(acc, cfg, chart, lam, mu, win.slope_a, win.slope_b)) {
              ++ri.zero_values;
              continue;
            }
            URows<R> v = acc.assemble(gd, lamp, lamm, u_need - static_cast<int>(acc.ushift));
            if (win.s_keep != kExact) v = v.truncated_s(win.s_keep);
            sum = first ? v : sum + v;
            first = false;
          }
      g.a[static_cast<size_t>(n)] = first ? URows<R>(proto) : sum;
    }
    total = total * g;
  }

  const int s_req = win.s_hi_req(nmax);
  MultiSeries<R> out(nmax, SULayer<R>(proto));
  Q half(1, 2);
  for (int N = 0; N <= nmax; ++N) {
    URows<R> layer = qpow(half, N) * total.coeff(N);
    layer = layer.shifted_s(-N);
    if (N > 0 && !(gd.F0 == ring_one_like(gd.F0))) layer = layer.scaled(ring_pow(gd.F0, 4L * N));

    // The fixed point sum is the equivariant pushforward to a point: a
    // polynomial in u.  Poles in u must cancel; positive powers may survive
    // and are discarded by the u^0 extraction.  Cancellation in a windowed
    // coefficient ring leaves stored-zero values, not exact zeros.
    for (const auto& [uk, row] : layer.rows)
      if (uk < 0)
        for (const auto& [sk, val] : row.c)
          if (!ring_stored_zero(val))
            throw ring_error("normalization failure: negative u-row survives at order " + std::to_string(N));
    if (layer.u_hi != kExact && layer.u_hi < 0)
      throw window_error("u-row window closed below u^0 at order " + std::to_string(N));
    const int chk = (layer.u_hi == kExact) ? win.u_check : std::min(win.u_check, layer.u_hi);
    if (N == 0 || ri.u_checked > chk) ri.u_checked = chk;

    const SRow<R>& r0 = layer.row(0);
    if (r0.hi != kExact && r0.hi < s_req)
      throw window_error("layer validity s^" + std::to_string(r0.hi) + " below requested s^" +
                         std::to_string(s_req) + " at order " + std::to_string(N));
    if (N == 0 && !(r0 == SRow<R>::one(proto).truncated(r0.hi)))
      throw ring_error("normalization failure: constant layer is not 1");

    SULayer<R> l(proto);
    l.u_hi = kExact;  // verified u-independent
    l.s_hi = r0.hi;
    int slo = 0;
    for (const auto& [sk, val] : r0.c) {
      l.m[{sk, 0}] = val;
      slo = std::min(slo, sk);
    }
    l.s_lo = slo;
    l.u_lo = 0;
    l.normalize();
    out.a[static_cast<size_t>(N)] = l;
  }
  return out;
}

// Convenience drivers with automatic retry on an insufficient window.
inline MultiCob z_surface_cob(const ToricSurfaceConfig& cfg, const VRing& ring, int nmax,
                              ZWindows win = {}, ZRunInfo* info = nullptr) {
  for (int attempt = 0;; ++attempt) {
    try {
      GenusData<VGraded> gd = cob_genus(ring, genus_xmax(nmax, win));
      return z_surface(cfg, gd, nmax, win, info);
    } catch (const window_error&) {
      if (attempt >= 2) throw;
      win.slop += 6;
    }
  }
}

inline MultiElg z_surface_elg(const ToricSurfaceConfig& cfg, int qmax, int ywin, int nmax,
                              ZWindows win = {}, ZRunInfo* info = nullptr) {
  for (int attempt = 0;; ++attempt) {
    try {
      GenusData<QYSeries> gd = elg_genus(qmax, ywin, genus_xmax(nmax, win));
      return z_surface(cfg, gd, nmax, win, info);
    } catch (const window_error&) {
      if (attempt >= 2) throw;
      win.slop += 6;
    }
  }
}

// ---------------------------------------------------------------------------
// Hilbert scheme of points of the surface itself: single-partition fixed
// points, tangent characters only, no circle variable.  The same row type
// carries the u-Laurent data.
// ---------------------------------------------------------------------------

inline int hilb_xmax(int nmax, int u_check = 2) { return 2 * nmax + u_check + 1; }

template <class R>
inline PowerSeries<R> hilb_series(const ToricSurface& S, const GenusData<R>& gd, int nmax,
                                  long A = 1, long B = -3, int u_check = 2) {
  const R proto = ring_zero_like(gd.F0);
  if (gd.xmax < hilb_xmax(nmax, u_check) - 1) throw window_error("genus truncation below the Hilbert window");
  using PS = PowerSeries<SRow<R>>;
  PS total = PS::one(nmax, SRow<R>(proto));
  for (int chart = 0; chart < S.nchart(); ++chart) {
    const ToricChart& ch = S.charts[static_cast<size_t>(chart)];
    PS g(nmax, SRow<R>(proto));
    for (int n = 0; n <= nmax; ++n) {
      SRow<R> sum(proto);
      bool first = true;
      for (const auto& lam : partitions_upto(n)) {
        if (n == 0) {
          sum = SRow<R>::one(proto);
          first = false;
          break;
        }
        const CharPoly t = tangent_char(lam, ch.v, ch.w);
        // log of prod F(c u) / (c u) over the tangent weights
        SRow<R> L(proto);
        L.hi = gd.xmax;
        Q kappa(1);
        long shift = 0;
        for (const auto& [k, m] : t.c) {
          const long c = locdetail::slope_value({k[0], k[1]}, A, B);
          if (c == 0) throw config_error("invalid slope or non-isolated fixed point");
          kappa *= qpow(qof(c), -m);
          shift -= m;
          Q p = qof(c);
          for (int d = 1; d <= gd.xmax; ++d) {
            const R& lg = gd.LG.coeff(d);
            if (!ring_is_zero(lg)) {
              Q coefq = qof(m) * p;
              auto it = L.c.find(d);
              if (it == L.c.end())
                L.c[d] = coefq * lg;
              else
                it->second = it->second + coefq * lg;
            }
            p *= c;
          }
        }
        L.normalize();
        SRow<R> v = (kappa * L.exp_val1()).shifted(static_cast<int>(shift));
        if (!(gd.F0 == ring_one_like(gd.F0))) v = v.scaled(ring_pow(gd.F0, 2L * n));
        sum = first ? v : sum + v;
        first = false;
      }
      g.a[static_cast<size_t>(n)] = sum;
    }
    total = total * g;
  }

  PowerSeries<R> out(nmax, proto);
  for (int n = 0; n <= nmax; ++n) {
    const SRow<R>& row = total.coeff(n);
    for (const auto& [k, val] : row.c)
      if (k < 0 && !ring_stored_zero(val))
        throw ring_error("normalization failure: Hilbert fixed-point poles survive");
    if (row.hi < 0) throw window_error("u-row window closed below u^0 in the Hilbert series");
    out.a[static_cast<size_t>(n)] = row.coeff(0);
  }
  return out;
}

// Cobordism class of the n-th Hilbert scheme of points.
inline VGraded hilb_cobordism(const ToricSurface& S, int n, const VRing& ring, long A = 1, long B = -3) {
  GenusData<VGraded> gd = cob_genus(ring, hilb_xmax(n));
  return hilb_series(S, gd, n, A, B).coeff(n);
}

}  // namespace genera
