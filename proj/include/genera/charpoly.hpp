#pragma once
#include <algorithm>
#include <array>
#include <map>
#include <string>
#include <vector>

#include "genera/rational.hpp"

namespace genera {

// Finite Laurent polynomials in the torus characters t1, t2 and the circle
// character s: a map (m1, m2, j) -> integer multiplicity.  These encode
// equivariant K-theory classes of a point; j is the circle weight and stays
// even for the sheaf-pair classes (odd values occur only inside products).
using Int2 = std::array<int, 2>;

inline Int2 i2add(Int2 a, Int2 b) { return {a[0] + b[0], a[1] + b[1]}; }
inline Int2 i2sub(Int2 a, Int2 b) { return {a[0] - b[0], a[1] - b[1]}; }
inline Int2 i2neg(Int2 a) { return {-a[0], -a[1]}; }
inline Int2 i2scale(int k, Int2 a) { return {k * a[0], k * a[1]}; }
inline long i2dot(Int2 a, Int2 b) { return static_cast<long>(a[0]) * b[0] + static_cast<long>(a[1]) * b[1]; }

struct CharPoly {
  // key = {m1, m2, j}
  std::map<std::array<int, 3>, long> c;

  static CharPoly zero() { return CharPoly{}; }
  static CharPoly chi(Int2 m, int j = 0, long mult = 1) {
    CharPoly r;
    if (mult != 0) r.c[{m[0], m[1], j}] = mult;
    return r;
  }
  static CharPoly one() { return chi({0, 0}, 0); }

  void add_term(Int2 m, int j, long mult) {
    if (mult == 0) return;
    auto key = std::array<int, 3>{m[0], m[1], j};
    auto it = c.find(key);
    if (it == c.end()) {
      c[key] = mult;
    } else {
      it->second += mult;
      if (it->second == 0) c.erase(it);
    }
  }

  bool is_zero() const { return c.empty(); }
  // Virtual rank: total multiplicity with signs.
  long rank() const {
    long r = 0;
    for (const auto& [k, v] : c) r += v;
    return r;
  }
  long mult(Int2 m, int j) const {
    auto it = c.find({m[0], m[1], j});
    return it == c.end() ? 0 : it->second;
  }
  // Number of distinct characters in the support.
  long support_size() const { return static_cast<long>(c.size()); }

  CharPoly& operator+=(const CharPoly& o) {
    for (const auto& [k, v] : o.c) add_term({k[0], k[1]}, k[2], v);
    return *this;
  }
  friend CharPoly operator+(CharPoly a, const CharPoly& b) { return a += b; }
  friend CharPoly operator-(const CharPoly& a) {
    CharPoly r = a;
    for (auto& [k, v] : r.c) v = -v;
    return r;
  }
  friend CharPoly operator-(CharPoly a, const CharPoly& b) { return a += -b; }
  friend CharPoly operator*(const CharPoly& a, const CharPoly& b) {
    CharPoly r;
    for (const auto& [ka, va] : a.c)
      for (const auto& [kb, vb] : b.c)
        r.add_term({ka[0] + kb[0], ka[1] + kb[1]}, ka[2] + kb[2], va * vb);
    return r;
  }
  CharPoly scaled(long k) const {
    CharPoly r;
    if (k == 0) return r;
    r = *this;
    for (auto& [key, v] : r.c) v *= k;
    return r;
  }
  // The bar involution chi(m) -> chi(-m); the circle weight flips with it.
  CharPoly bar() const {
    CharPoly r;
    for (const auto& [k, v] : c) r.c[{-k[0], -k[1], -k[2]}] = v;
    return r;
  }
  // Multiplication by the single character chi(m) s^j.
  CharPoly shifted(Int2 m, int j = 0) const {
    CharPoly r;
    for (const auto& [k, v] : c) r.c[{k[0] + m[0], k[1] + m[1], k[2] + j}] = v;
    return r;
  }
  friend bool operator==(const CharPoly& a, const CharPoly& b) { return a.c == b.c; }

  std::string str() const {
    if (c.empty()) return "0";
    std::string s;
    for (const auto& [k, v] : c) {
      if (!s.empty()) s += " + ";
      s += std::to_string(v) + "*(" + std::to_string(k[0]) + "," + std::to_string(k[1]) + ";" + std::to_string(k[2]) + ")";
    }
    return s;
  }
};

// Partitions are weakly decreasing lists of positive parts.
using Partition = std::vector<int>;

inline void check_partition(const Partition& p) {
  for (size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0) throw config_error("partition parts must be positive");
    if (i && p[i] > p[i - 1]) throw config_error("partition parts must be weakly decreasing");
  }
}

inline int partition_size(const Partition& p) {
  int n = 0;
  for (int x : p) n += x;
  return n;
}

// Character of the structure sheaf of the monomial subscheme attached to a
// partition on a chart with coordinate characters v, w: the cell in column i
// at height j contributes chi(i*v + j*w).  Column count runs along v.
inline CharPoly zchar(const Partition& lam, Int2 v, Int2 w) {
  check_partition(lam);
  CharPoly r;
  for (int i = 0; i < static_cast<int>(lam.size()); ++i)
    for (int j = 0; j < lam[static_cast<size_t>(i)]; ++j)
      r.add_term(i2add(i2scale(i, v), i2scale(j, w)), 0, 1);
  return r;
}

// Chartwise value of RGamma(O(a)) - RHom(I_W, I_Z(a)) for monomial subschemes
// with structure-sheaf characters W, Z: the infinite chart sections cancel,
// leaving  chi(a) * ( Z + Wbar*chi(-v-w) - Wbar*Z*(1-chi(v))(1-chi(w))*chi(-v-w) ).
inline CharPoly rhom_combination(const CharPoly& W, const CharPoly& Z, Int2 aweight, Int2 v, Int2 w) {
  CharPoly wb = W.bar();
  Int2 mvw = i2neg(i2add(v, w));
  CharPoly corner = CharPoly::one() - CharPoly::chi(v);
  corner = corner * (CharPoly::one() - CharPoly::chi(w));
  CharPoly r = Z + wb.shifted(mvw) - (wb * Z * corner).shifted(mvw);
  return r.shifted(aweight);
}

// Torus character of the tangent space of the punctual Hilbert scheme at the
// monomial point of lam.  Rank 2|lam|, never contains the trivial character.
inline CharPoly tangent_char(const Partition& lam, Int2 v, Int2 w) {
  CharPoly z = zchar(lam, v, w);
  CharPoly t = rhom_combination(z, z, {0, 0}, v, w);
  if (t.mult({0, 0}, 0) != 0)
    throw ring_error("tangent character contains the trivial weight; chart data corrupt");
  if (t.rank() != 2 * partition_size(lam))
    throw ring_error("tangent character has wrong rank; chart data corrupt");
  return t;
}

}  // namespace genera
