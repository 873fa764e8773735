#pragma once
#include <algorithm>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "genera/rational.hpp"
#include "genera/vgraded.hpp"

namespace genera {

// Partitions of d, parts non-increasing, descending-lex order; p(0) = { {} }.
inline std::vector<std::vector<int>> partitions_of(int d) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  std::function<void(int, int)> rec = [&](int rem, int maxpart) {
    if (rem == 0) {
      out.push_back(cur);
      return;
    }
    for (int k = std::min(rem, maxpart); k >= 1; --k) {
      cur.push_back(k);
      rec(rem - k, k);
      cur.pop_back();
    }
  };
  rec(d, d);
  return out;
}

namespace detail {

// Working polynomials during table construction: keys pair a v-monomial with a
// power-sum monomial, both stored as descending partitions.
using PartKey = std::pair<std::vector<int>, std::vector<int>>;
using VPPoly = std::map<PartKey, Q>;

inline std::vector<int> merged(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> m = a;
  m.insert(m.end(), b.begin(), b.end());
  std::sort(m.rbegin(), m.rend());
  return m;
}

inline int psum(const std::vector<int>& parts) {
  int s = 0;
  for (int k : parts) s += k;
  return s;
}

inline VPPoly vp_mul(const VPPoly& a, const VPPoly& b, int dmax) {
  VPPoly r;
  for (const auto& [ka, qa] : a)
    for (const auto& [kb, qb] : b) {
      std::vector<int> vi = merged(ka.first, kb.first);
      if (psum(vi) > dmax) continue;
      r[{std::move(vi), merged(ka.second, kb.second)}] += qa * qb;
    }
  return r;
}

// Expansions in the elementary symmetric functions, monomials as partitions.
using EPoly = std::map<std::vector<int>, Q>;

}  // namespace detail

// Degree-homogeneous data attached to the partitions_of(d) basis.  A partition
// J stands for the Chern monomial prod_t c_{J_t} on one side and for the
// v-monomial prod_t v_{J_t} on the other.
struct ChernNumberVector {
  int d = 0;
  std::vector<Q> values;
};

struct CobordismClass {
  int d = 0;
  std::vector<Q> coeffs;
};

// e_of_v[d][i][j]: coefficient of the e-monomial parts[d][j] in the v^I
// coefficient of prod_i (1 + sum_k x_i^k v_k), I = parts[d][i].
struct GenusTable {
  int nroots = 0, dmax = 0;
  std::vector<std::vector<std::vector<int>>> parts;
  std::vector<std::vector<std::vector<Q>>> e_of_v;
};

// The table is built through power sums, which is what makes it valid for
// formal differences of bundles: log prod_i (1 + sum_k v_k x_i^k) collects
// into p-linear terms, and each p_m is rewritten by Newton's identities.
// Since only e_j with j <= d can appear in a degree-d row, the table is
// independent of nroots throughout the admissible range nroots >= dmax.
inline GenusTable genus_symbol(int nroots, int dmax) {
  if (dmax < 1) throw config_error("genus table needs positive degree");
  if (nroots < dmax)
    throw config_error("genus table needs at least as many roots as its degree");

  // log term for v^I, I with j parts: (-1)^{j-1} (j-1)! / prod mult! * p_{|I|}
  detail::VPPoly lg;
  for (int d = 1; d <= dmax; ++d)
    for (const auto& I : partitions_of(d)) {
      int j = static_cast<int>(I.size());
      Q c((j % 2) ? 1 : -1);
      for (int t = 2; t <= j - 1; ++t) c *= t;
      std::map<int, int> mult;
      for (int k : I) ++mult[k];
      for (const auto& [k, m] : mult)
        for (int t = 2; t <= m; ++t) c /= t;
      lg[{I, {d}}] = c;
    }

  detail::VPPoly total, pw;
  pw[{{}, {}}] = Q(1);
  total = pw;
  for (int n = 1; n <= dmax; ++n) {
    pw = detail::vp_mul(pw, lg, dmax);
    for (auto& [k, q] : pw) q /= n;
    for (const auto& [k, q] : pw) total[k] += q;
  }

  // power sums in the e-basis by Newton's identities
  std::vector<detail::EPoly> phat(static_cast<size_t>(dmax) + 1);
  for (int m = 1; m <= dmax; ++m) {
    detail::EPoly pm;
    for (int i = 1; i <= m - 1; ++i) {
      Q s((i % 2) ? 1 : -1);
      for (const auto& [k, q] : phat[static_cast<size_t>(m - i)])
        pm[detail::merged(k, {i})] += s * q;
    }
    pm[{m}] += Q((m % 2) ? 1 : -1) * Q(m);
    phat[static_cast<size_t>(m)] = std::move(pm);
  }

  GenusTable T;
  T.nroots = nroots;
  T.dmax = dmax;
  T.parts.resize(static_cast<size_t>(dmax) + 1);
  T.e_of_v.resize(static_cast<size_t>(dmax) + 1);
  std::vector<std::map<std::vector<int>, int>> pindex(static_cast<size_t>(dmax) + 1);
  for (int d = 1; d <= dmax; ++d) {
    T.parts[d] = partitions_of(d);
    for (size_t i = 0; i < T.parts[d].size(); ++i)
      pindex[d][T.parts[d][i]] = static_cast<int>(i);
    T.e_of_v[d].assign(T.parts[d].size(),
                       std::vector<Q>(T.parts[d].size(), Q(0)));
  }
  for (const auto& [key, q] : total) {
    const auto& I = key.first;
    if (I.empty()) continue;
    int d = detail::psum(I);
    detail::EPoly ex;
    ex[{}] = q;
    for (int m : key.second) {
      detail::EPoly nx;
      for (const auto& [ka, qa] : ex)
        for (const auto& [kb, qb] : phat[static_cast<size_t>(m)])
          nx[detail::merged(ka, kb)] += qa * qb;
      ex = std::move(nx);
    }
    auto& row = T.e_of_v[d][static_cast<size_t>(pindex[d].at(I))];
    // every surviving e-monomial is a partition of d; .at asserts that
    for (const auto& [J, c] : ex)
      row[static_cast<size_t>(pindex[d].at(J))] += c;
  }
  return T;
}

inline CobordismClass chern_to_cobordism(const ChernNumberVector& n,
                                         const GenusTable& T) {
  if (n.d < 1 || n.d > T.dmax) throw config_error("degree outside genus table");
  const auto& M = T.e_of_v[static_cast<size_t>(n.d)];
  if (n.values.size() != M.size())
    throw config_error("chern vector length mismatch");
  CobordismClass b;
  b.d = n.d;
  b.coeffs.assign(M.size(), Q(0));
  for (size_t i = 0; i < M.size(); ++i)
    for (size_t j = 0; j < M.size(); ++j) b.coeffs[i] += M[i][j] * n.values[j];
  return b;
}

inline ChernNumberVector cobordism_to_chern(const CobordismClass& b,
                                            const GenusTable& T) {
  if (b.d < 1 || b.d > T.dmax) throw config_error("degree outside genus table");
  const auto& M = T.e_of_v[static_cast<size_t>(b.d)];
  size_t n = M.size();
  if (b.coeffs.size() != n)
    throw config_error("cobordism vector length mismatch");
  std::vector<std::vector<Q>> A(n, std::vector<Q>(n + 1, Q(0)));
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) A[i][j] = M[i][j];
    A[i][n] = b.coeffs[i];
  }
  for (size_t col = 0; col < n; ++col) {
    size_t piv = col;
    while (piv < n && qzero(A[piv][col])) ++piv;
    if (piv == n) throw ring_error("chern conversion system is singular");
    std::swap(A[piv], A[col]);
    for (size_t r = 0; r < n; ++r) {
      if (r == col || qzero(A[r][col])) continue;
      Q f = A[r][col] / A[col][col];
      for (size_t j = col; j <= n; ++j) A[r][j] -= f * A[col][j];
    }
  }
  ChernNumberVector out;
  out.d = b.d;
  out.values.assign(n, Q(0));
  for (size_t i = 0; i < n; ++i) out.values[i] = A[i][n] / A[i][i];
  return out;
}

// Degree-d slice of a truncated v-polynomial.  Partitions with a part above
// the ring's variable count read as zero: those v_k are specialized away.
inline CobordismClass cobordism_slice(const VGraded& x, int d) {
  if (d < 0 || d > x.ring->Dmax) throw window_error("degree beyond v-truncation");
  auto parts = partitions_of(d);
  CobordismClass b;
  b.d = d;
  b.coeffs.assign(parts.size(), Q(0));
  for (size_t i = 0; i < parts.size(); ++i) {
    std::vector<int> e(static_cast<size_t>(x.ring->K), 0);
    bool stored = true;
    for (int k : parts[i]) {
      if (k > x.ring->K) {
        stored = false;
        break;
      }
      ++e[static_cast<size_t>(k - 1)];
    }
    if (stored) b.coeffs[i] = x.coeff(e);
  }
  return b;
}

inline VGraded cobordism_embed(const CobordismClass& b, const VRing& r) {
  if (b.d > r.Dmax) throw window_error("degree beyond v-truncation");
  auto parts = partitions_of(b.d);
  if (b.coeffs.size() != parts.size())
    throw config_error("cobordism vector length mismatch");
  VGraded x(r);
  for (size_t i = 0; i < parts.size(); ++i) {
    std::vector<int> e(static_cast<size_t>(r.K), 0);
    bool stored = true;
    for (int k : parts[i]) {
      if (k > r.K) {
        stored = false;
        break;
      }
      ++e[static_cast<size_t>(k - 1)];
    }
    if (!stored) {
      if (!qzero(b.coeffs[i]))
        throw ring_error("class needs v_k beyond the ring truncation");
      continue;
    }
    x.c[static_cast<size_t>(r.index.at(e))] = b.coeffs[i];
  }
  return x;
}

namespace detail {

inline std::string monomial_label(const std::vector<int>& J, char var) {
  if (J.empty()) return "1";
  std::map<int, int> mult;
  for (int k : J) ++mult[k];
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, m] : mult) {
    if (!first) os << " ";
    first = false;
    os << var << k;
    if (m > 1) os << "^" << m;
  }
  return os.str();
}

}  // namespace detail

inline std::string chern_label(const std::vector<int>& J) {
  return detail::monomial_label(J, 'c');
}

inline std::string v_label(const std::vector<int>& I) {
  return detail::monomial_label(I, 'v');
}

}  // namespace genera
