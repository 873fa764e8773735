#pragma once
#include <gmpxx.h>
#include <stdexcept>
#include <string>
#include <vector>

namespace genera {

using Q = mpq_class;
using Z = mpz_class;

// Reading a coefficient outside a recorded validity window is always an
// error, never a silent zero.
struct window_error : std::runtime_error {
  explicit window_error(const std::string& m) : std::runtime_error("window: " + m) {}
};
struct ring_error : std::runtime_error {
  explicit ring_error(const std::string& m) : std::runtime_error("ring: " + m) {}
};
struct config_error : std::runtime_error {
  explicit config_error(const std::string& m) : std::runtime_error("config: " + m) {}
};

inline Q qof(long n, long d = 1) {
  Q r(n, d);
  r.canonicalize();
  return r;
}

inline bool qzero(const Q& x) { return sgn(x) == 0; }

inline Q qpow(const Q& b, long e) {
  if (e == 0) return Q(1);
  Q base = b;
  long n = e;
  if (n < 0) {
    if (qzero(base)) throw ring_error("0^negative");
    base = Q(1) / base;
    n = -n;
  }
  Q acc(1);
  while (n > 0) {
    if (n & 1) acc *= base;
    base *= base;
    n >>= 1;
  }
  return acc;
}

inline Z binom_z(unsigned long n, unsigned long k) {
  Z r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

// C(r, k) for rational r, integer k >= 0.
inline Q binom_q(const Q& r, unsigned long k) {
  Q acc(1);
  for (unsigned long i = 0; i < k; ++i) acc *= (r - Q(static_cast<long>(i))) / Q(static_cast<long>(i + 1));
  return acc;
}

// B_0 = 1, B_1 = -1/2, B_{2k+1>1} = 0; even values from the defining recurrence.
inline Q bernoulli(int k) {
  static std::vector<Q> table = {Q(1)};
  if (k < 0) throw ring_error("bernoulli of negative index");
  while (static_cast<int>(table.size()) <= k) {
    int m = static_cast<int>(table.size());
    Q s(0);
    for (int j = 0; j < m; ++j) s += Q(binom_z(m + 1, j)) * table[j];
    table.push_back(-s / Q(m + 1));
  }
  return table[k];
}

// sigma_k(n) = sum of d^k over divisors d of n, n >= 1.
inline Z sigma_z(int k, int n) {
  Z s(0);
  for (int d = 1; d <= n; ++d) {
    if (n % d) continue;
    Z p;
    mpz_ui_pow_ui(p.get_mpz_t(), static_cast<unsigned long>(d), static_cast<unsigned long>(k));
    s += p;
  }
  return s;
}

inline std::string qstr(const Q& x) { return x.get_str(); }

}  // namespace genera
