#pragma once
#include <functional>

#include "genera/ylaurent.hpp"

namespace genera {

// Power series in q, truncated at qmax, with YLaurent coefficients.
// Reading past qmax is an error; q-exponents are integers >= 0 (operations
// producing q^{1/2} must rescale explicitly).
struct QYSeries {
  int qmax = 0;
  std::vector<YLaurent> row;

  QYSeries() : row(1) {}
  explicit QYSeries(int qmax_) : qmax(qmax_), row(static_cast<size_t>(qmax_) + 1) {
    if (qmax_ < 0) throw config_error("qmax < 0");
  }

  static QYSeries zero(int qmax_) { return QYSeries(qmax_); }
  static QYSeries one(int qmax_) {
    QYSeries r(qmax_);
    r.row[0] = YLaurent::one();
    return r;
  }
  static QYSeries constant(int qmax_, const YLaurent& c) {
    QYSeries r(qmax_);
    r.row[0] = c;
    return r;
  }

  const YLaurent& qrow(int d) const {
    if (d < 0 || d > qmax) throw window_error("q-exponent " + std::to_string(d) + " beyond qmax " + std::to_string(qmax));
    return row[static_cast<size_t>(d)];
  }
  YLaurent& qrow_mut(int d) {
    if (d < 0 || d > qmax) throw window_error("q-exponent beyond qmax");
    return row[static_cast<size_t>(d)];
  }
  const Q& coeff(int d, int e) const { return qrow(d).coeff(e); }

  bool is_zero() const {
    for (const auto& r : row)
      if (!r.is_exact_zero()) return false;
    return true;
  }

  friend QYSeries operator+(const QYSeries& x, const QYSeries& y) {
    QYSeries r(std::min(x.qmax, y.qmax));
    for (int d = 0; d <= r.qmax; ++d) r.row[d] = x.row[d] + y.row[d];
    return r;
  }
  friend QYSeries operator-(const QYSeries& x) {
    QYSeries r = x;
    for (auto& v : r.row) v = -v;
    return r;
  }
  friend QYSeries operator-(const QYSeries& x, const QYSeries& y) { return x + (-y); }
  friend QYSeries operator*(const QYSeries& x, const QYSeries& y) {
    QYSeries r(std::min(x.qmax, y.qmax));
    for (int d = 0; d <= r.qmax; ++d) {
      YLaurent acc;
      for (int i = 0; i <= d; ++i) acc = acc + x.row[i] * y.row[d - i];
      r.row[d] = acc;
    }
    return r;
  }
  friend QYSeries operator*(const Q& c, const QYSeries& x) {
    QYSeries r = x;
    for (auto& v : r.row) v = c * v;
    return r;
  }
  friend QYSeries operator*(const YLaurent& c, const QYSeries& x) {
    QYSeries r = x;
    for (auto& v : r.row) v = c * v;
    return r;
  }
  friend bool operator==(const QYSeries& x, const QYSeries& y) {
    return x.qmax == y.qmax && x.row == y.row;
  }

  QYSeries mul_qpow(int k) const {
    QYSeries r(qmax);
    for (int d = k; d <= qmax; ++d) r.row[d] = row[d - k];
    return r;
  }
  // Division by q^k: the bottom k rows must vanish exactly; the quotient is
  // only known to qmax - k.
  QYSeries div_qpow(int k) const {
    for (int d = 0; d < k; ++d)
      if (!row[d].is_exact_zero()) throw ring_error("q-division with nonzero low rows");
    QYSeries r(qmax - k);
    for (int d = 0; d <= r.qmax; ++d) r.row[d] = row[d + k];
    return r;
  }
  QYSeries truncate_q(int newqmax) const {
    if (newqmax > qmax) throw window_error("cannot extend qmax");
    QYSeries r(newqmax);
    for (int d = 0; d <= newqmax; ++d) r.row[d] = row[d];
    return r;
  }
  QYSeries truncate_y(int cap) const {
    QYSeries r = *this;
    for (auto& v : r.row) v.truncate_y(cap);
    return r;
  }

  QYSeries inverted(int ycap) const {
    QYSeries r(qmax);
    YLaurent r0 = row[0].inverted(ycap);
    r.row[0] = r0;
    for (int k = 1; k <= qmax; ++k) {
      YLaurent s;
      for (int i = 1; i <= k; ++i) s = s + row[i] * r.row[k - i];
      r.row[k] = -(r0 * s);
    }
    return r;
  }

  // Square root with exact q^0 row; branch fixed by the sign of the top
  // y-coefficient of the q^0 row.
  QYSeries sqrt(bool top_positive, int ycap) const {
    QYSeries r(qmax);
    r.row[0] = row[0].sqrt_exact(top_positive);
    YLaurent inv2r0 = (Q(2) * r.row[0]).inverted(ycap);
    for (int k = 1; k <= qmax; ++k) {
      YLaurent s = row[k];
      for (int i = 1; i < k; ++i) s = s - r.row[i] * r.row[k - i];
      r.row[k] = s * inv2r0;
    }
    return r;
  }

  QYSeries pow_int(long e, int ycap) const {
    if (e < 0) return inverted(ycap).pow_int(-e, ycap);
    QYSeries acc = one(qmax), base = *this;
    while (e > 0) {
      if (e & 1) acc = acc * base;
      base = base * base;
      e >>= 1;
    }
    return acc;
  }

  // q -> q^2 (truncation order rescales: rows 0..qmax land on 0..2qmax, and
  // the odd rows in between are known zero).
  QYSeries subst_q_sq() const {
    QYSeries r(2 * qmax + 1);
    for (int d = 0; d <= qmax; ++d) r.row[2 * d] = row[d];
    return r;
  }
  // q -> q^{1/2}; every odd row must vanish exactly.
  QYSeries subst_q_half() const {
    for (int d = 1; d <= qmax; d += 2)
      if (!row[d].is_exact_zero()) throw ring_error("q -> q^{1/2} with nonzero odd part");
    QYSeries r(qmax / 2);
    for (int d = 0; d <= r.qmax; ++d) r.row[d] = row[2 * d];
    return r;
  }
  QYSeries subst_y_pow(int m) const {
    QYSeries r = *this;
    for (auto& v : r.row) v = v.subst_pow(m);
    return r;
  }
  QYSeries flip_y() const {
    QYSeries r = *this;
    for (auto& v : r.row) v = v.flipped();
    return r;
  }
  QYSeries even_q_part() const {
    QYSeries r = *this;
    for (int d = 1; d <= qmax; d += 2) r.row[d] = YLaurent::zero();
    return r;
  }
  QYSeries ydy() const {
    QYSeries r = *this;
    for (auto& v : r.row) v = v.ydy();
    return r;
  }

  // Honest Jacobi-type forms have bounded y-support per q-row.  When the
  // recorded window dominates the caller's support bound and everything
  // stored lies inside the bound, the row is in fact complete; promote it.
  QYSeries certified_exact(const std::function<int(int)>& bound) const {
    QYSeries r = *this;
    for (int d = 0; d <= qmax; ++d) {
      YLaurent& v = r.row[d];
      int b = bound(d);
      if (v.valid == kExact) continue;
      if (v.valid < b)
        throw window_error("support certification needs window >= " + std::to_string(b) +
                           " at q^" + std::to_string(d) + ", have " + std::to_string(v.valid));
      if (!v.a.empty() && (v.lo < -b || v.hi_stored() > b))
        throw ring_error("stored y-support escapes the certification bound");
      v.valid = kExact;
    }
    return r;
  }

  std::string str() const {
    std::ostringstream os;
    for (int d = 0; d <= qmax; ++d) os << "q^" << d << ": " << row[d].str() << "\n";
    return os.str();
  }
};

}  // namespace genera
