#pragma once
#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <sstream>

#include "genera/rational.hpp"

namespace genera {

// Monomial basis of Q[v_1..v_K] truncated at weighted degree Dmax, deg v_k = k.
// Instances are interned; VGraded values point at their ring descriptor.
struct VRing {
  int K = 0, Dmax = 0;
  std::vector<std::vector<int>> mono;  // exponent vectors, grouped by weight
  std::vector<int> weight;
  std::map<std::vector<int>, int> index;
  std::vector<std::vector<int>> mult;  // mult[i][j] = result index, -1 if above Dmax

  static const VRing& get(int K, int Dmax) {
    static std::map<std::pair<int, int>, std::unique_ptr<VRing>> cache;
    auto key = std::make_pair(K, Dmax);
    auto it = cache.find(key);
    if (it != cache.end()) return *it->second;
    auto ring = std::make_unique<VRing>();
    ring->K = K;
    ring->Dmax = Dmax;
    std::vector<std::pair<int, std::vector<int>>> all;
    std::vector<int> cur(static_cast<size_t>(K), 0);
    std::function<void(int, int)> rec = [&](int k, int w) {
      if (k == K) {
        all.emplace_back(w, cur);
        return;
      }
      for (int e = 0; w + (k + 1) * e <= Dmax; ++e) {
        cur[static_cast<size_t>(k)] = e;
        rec(k + 1, w + (k + 1) * e);
      }
      cur[static_cast<size_t>(k)] = 0;
    };
    rec(0, 0);
    std::sort(all.begin(), all.end());
    for (size_t i = 0; i < all.size(); ++i) {
      ring->weight.push_back(all[i].first);
      ring->mono.push_back(all[i].second);
      ring->index[all[i].second] = static_cast<int>(i);
    }
    size_t n = all.size();
    ring->mult.assign(n, std::vector<int>(n, -1));
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j) {
        if (ring->weight[i] + ring->weight[j] > Dmax) continue;
        std::vector<int> e(static_cast<size_t>(K));
        for (int k = 0; k < K; ++k) e[k] = ring->mono[i][k] + ring->mono[j][k];
        ring->mult[i][j] = ring->index.at(e);
      }
    const VRing& ref = *ring;
    cache[key] = std::move(ring);
    return ref;
  }
};

struct VGraded {
  const VRing* ring;
  std::vector<Q> c;

  explicit VGraded(const VRing& r) : ring(&r), c(r.mono.size(), Q(0)) {}
  VGraded() : VGraded(VRing::get(5, 5)) {}

  static VGraded zero(const VRing& r) { return VGraded(r); }
  static VGraded one(const VRing& r) {
    VGraded x(r);
    x.c[0] = 1;
    return x;
  }
  static VGraded scalar(const VRing& r, const Q& q) {
    VGraded x(r);
    x.c[0] = q;
    return x;
  }
  // The generator v_k.
  static VGraded v(const VRing& r, int k) {
    if (k < 1 || k > r.K) throw config_error("v_k out of range");
    std::vector<int> e(static_cast<size_t>(r.K), 0);
    e[static_cast<size_t>(k - 1)] = 1;
    VGraded x(r);
    x.c[static_cast<size_t>(r.index.at(e))] = 1;
    return x;
  }

  bool is_zero() const {
    for (const auto& q : c)
      if (!qzero(q)) return false;
    return true;
  }
  const Q& coeff(const std::vector<int>& expo) const {
    auto it = ring->index.find(expo);
    if (it == ring->index.end()) throw window_error("v-monomial beyond Dmax");
    return c[static_cast<size_t>(it->second)];
  }

  friend VGraded operator+(const VGraded& x, const VGraded& y) {
    if (x.ring != y.ring) throw ring_error("v-ring mismatch");
    VGraded r = x;
    for (size_t i = 0; i < r.c.size(); ++i) r.c[i] += y.c[i];
    return r;
  }
  friend VGraded operator-(const VGraded& x) {
    VGraded r = x;
    for (auto& q : r.c) q = -q;
    return r;
  }
  friend VGraded operator-(const VGraded& x, const VGraded& y) { return x + (-y); }
  friend VGraded operator*(const VGraded& x, const VGraded& y) {
    if (x.ring != y.ring) throw ring_error("v-ring mismatch");
    VGraded r(*x.ring);
    const auto& mult = x.ring->mult;
    for (size_t i = 0; i < x.c.size(); ++i) {
      if (qzero(x.c[i])) continue;
      for (size_t j = 0; j < y.c.size(); ++j) {
        if (qzero(y.c[j])) continue;
        int k = mult[i][j];
        if (k >= 0) r.c[static_cast<size_t>(k)] += x.c[i] * y.c[j];
      }
    }
    return r;
  }
  friend VGraded operator*(const Q& q, const VGraded& x) {
    VGraded r = x;
    for (auto& v : r.c) v *= q;
    return r;
  }
  friend bool operator==(const VGraded& x, const VGraded& y) {
    return x.ring == y.ring && x.c == y.c;
  }

  // Positive-weight part (nilpotent within the truncation).
  VGraded nil_part() const {
    VGraded r = *this;
    r.c[0] = 0;
    return r;
  }

  VGraded inverted() const {
    if (qzero(c[0])) throw ring_error("inverting a v-series with zero scalar part");
    Q c0inv = Q(1) / c[0];
    VGraded n = c0inv * nil_part();
    VGraded acc = one(*ring), pw = one(*ring);
    for (int k = 1; k <= ring->Dmax; ++k) {
      pw = pw * n;
      if (pw.is_zero()) break;
      acc = acc + (k % 2 ? -pw : pw);
    }
    return c0inv * acc;
  }
  VGraded pow_q(const Q& r) const {
    if (!(c[0] == Q(1))) throw ring_error("fractional power needs scalar part 1");
    VGraded n = nil_part(), acc = one(*ring), pw = one(*ring);
    for (unsigned long k = 1; k <= static_cast<unsigned long>(ring->Dmax); ++k) {
      pw = pw * n;
      if (pw.is_zero()) break;
      acc = acc + binom_q(r, k) * pw;
    }
    return acc;
  }
  VGraded log1() const {
    if (!(c[0] == Q(1))) throw ring_error("log needs scalar part 1");
    VGraded n = nil_part(), acc = zero(*ring), pw = one(*ring);
    for (int k = 1; k <= ring->Dmax; ++k) {
      pw = pw * n;
      if (pw.is_zero()) break;
      acc = acc + Q(k % 2 ? 1 : -1, k) * pw;
    }
    return acc;
  }
  VGraded exp0() const {
    if (!qzero(c[0])) throw ring_error("exp needs zero scalar part");
    VGraded acc = one(*ring), pw = one(*ring);
    Q fact(1);
    for (int k = 1; k <= ring->Dmax; ++k) {
      pw = pw * (*this);
      if (pw.is_zero()) break;
      fact *= k;
      acc = acc + (Q(1) / fact) * pw;
    }
    return acc;
  }

  std::string str() const {
    std::ostringstream os;
    bool first = true;
    for (size_t i = 0; i < c.size(); ++i) {
      if (qzero(c[i])) continue;
      if (!first) os << " + ";
      os << qstr(c[i]);
      for (int k = 0; k < ring->K; ++k) {
        int e = ring->mono[i][static_cast<size_t>(k)];
        if (!e) continue;
        os << "*v" << (k + 1);
        if (e > 1) os << "^" << e;
      }
      first = false;
    }
    return first ? "0" : os.str();
  }
};

}  // namespace genera
