#pragma once
#include "genera/rational.hpp"

// Gaussian rationals, test-side only: the i^k-averaging oracle for the mod-4
// exponent filter is evaluated here and compared against the direct filter.
namespace genera::testutil {

struct GQ {
  Q re{0}, im{0};

  GQ() = default;
  GQ(Q r, Q i) : re(std::move(r)), im(std::move(i)) {}
  explicit GQ(const Q& r) : re(r) {}

  // i^k for any integer k
  static GQ ipow(long k) {
    switch (((k % 4) + 4) % 4) {
      case 0: return GQ(Q(1), Q(0));
      case 1: return GQ(Q(0), Q(1));
      case 2: return GQ(Q(-1), Q(0));
      default: return GQ(Q(0), Q(-1));
    }
  }

  friend GQ operator+(const GQ& x, const GQ& y) { return GQ(x.re + y.re, x.im + y.im); }
  friend GQ operator-(const GQ& x, const GQ& y) { return GQ(x.re - y.re, x.im - y.im); }
  friend GQ operator*(const GQ& x, const GQ& y) {
    return GQ(x.re * y.re - x.im * y.im, x.re * y.im + x.im * y.re);
  }
  friend GQ operator*(const Q& q, const GQ& x) { return GQ(q * x.re, q * x.im); }
  friend bool operator==(const GQ& x, const GQ& y) { return x.re == y.re && x.im == y.im; }
};

}  // namespace genera::testutil
