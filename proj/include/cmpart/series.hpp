#pragma once

#include "cmpart/common.hpp"

#include <algorithm>
#include <string>
#include <vector>

namespace cmpart {

// Truncated product of coefficient vectors: first n coefficients of a*b.
// Integer inputs go through Kronecker substitution once they are long enough.
std::vector<Int> mul_trunc(const std::vector<Int>& a, const std::vector<Int>& b, std::size_t n);
std::vector<Rat> mul_trunc(const std::vector<Rat>& a, const std::vector<Rat>& b, std::size_t n);

// Truncated q-expansion  sum_i c[i] q^(lead24/24 + i),  known modulo q^(lead24/24 + c.size()).
// Exponents are multiples of 1/24; coefficients are exact.
template <class C>
class Series {
 public:
  Series() = default;
  Series(long lead24, std::vector<C> c) : lead24_(lead24), c_(std::move(c)) {}

  static Series constant(const C& v, std::size_t terms) {
    std::vector<C> c(terms, C(0));
    if (terms) c[0] = v;
    return Series(0, std::move(c));
  }

  long lead24() const { return lead24_; }
  Rat leading_exponent() const { return exponent(lead24_); }
  // exponents >= truncation_order() are unknown
  Rat truncation_order() const { return exponent(lead24_ + 24 * static_cast<long>(c_.size())); }
  std::size_t size() const { return c_.size(); }
  bool integral_exponents() const { return lead24_ % 24 == 0; }
  long lead() const { return lead24_ / 24; }  // only for integral exponents

  const std::vector<C>& coeffs() const { return c_; }
  std::vector<C>& coeffs() { return c_; }
  const C& operator[](std::size_t i) const { return c_[i]; }
  C& operator[](std::size_t i) { return c_[i]; }

  // Coefficient of q^e for integer e (series must have integral exponents); zero below lead.
  C coeff(long e) const {
    long i = e - lead();
    if (i < 0) return C(0);
    if (i >= static_cast<long>(c_.size())) throw InvalidInput("coefficient beyond truncation order");
    return c_[i];
  }

  // Drops everything at or beyond absolute exponent order (integral exponents).
  Series truncated_at(long order) const {
    long n = std::max(0L, order - lead());
    Series r = *this;
    if (n < static_cast<long>(r.c_.size())) r.c_.resize(n);
    return r;
  }

  // Removes leading zero coefficients (moving lead forward); keeps truncation order.
  Series normalized() const {
    std::size_t k = 0;
    while (k < c_.size() && c_[k] == 0) ++k;
    return Series(lead24_ + 24 * static_cast<long>(k), std::vector<C>(c_.begin() + k, c_.end()));
  }

  Series operator-() const {
    Series r = *this;
    for (auto& v : r.c_) v = -v;
    return r;
  }

  Series& operator*=(const C& k) {
    for (auto& v : c_) v *= k;
    return *this;
  }

  friend Series operator*(const C& k, Series s) { return s *= k; }

  friend Series operator+(const Series& a, const Series& b) { return combine(a, b, 1); }
  friend Series operator-(const Series& a, const Series& b) { return combine(a, b, -1); }

  friend Series operator*(const Series& a, const Series& b) {
    std::size_t n = std::min(a.c_.size(), b.c_.size());
    return Series(a.lead24_ + b.lead24_, mul_trunc(a.c_, b.c_, n));
  }

  // Multiplicative inverse; the leading coefficient must be invertible in C.
  Series inverse() const {
    Series s = normalized();
    if (s.c_.empty()) throw InvalidInput("inverse of a series with no known nonzero term");
    const C& a0 = s.c_[0];
    if constexpr (std::is_same_v<C, Int>) {
      if (a0 != 1 && a0 != -1) throw InvalidInput("integer series inverse needs leading coefficient +-1");
    }
    std::size_t n = s.c_.size();
    // Newton iteration g <- g (2 - f g)
    std::vector<C> g{C(1) / a0};
    if constexpr (std::is_same_v<C, Int>) g[0] = a0;  // 1/(+-1) = +-1
    std::size_t k = 1;
    while (k < n) {
      std::size_t k2 = std::min(2 * k, n);
      std::vector<C> fk(s.c_.begin(), s.c_.begin() + k2);
      std::vector<C> e = mul_trunc(fk, g, k2);  // f g = 1 + O(q^k)
      for (auto& v : e) v = -v;
      e[0] += 2;
      g = mul_trunc(g, e, k2);
      k = k2;
    }
    return Series(-s.lead24_, std::move(g));
  }

  Series pow(long e) const {
    if (e < 0) return inverse().pow(-e);
    Series base = *this;
    Series acc = constant(C(1), base.c_.size());
    while (e) {
      if (e & 1) acc = acc * base;
      e >>= 1;
      if (e) base = base * base;
    }
    return acc;
  }

  // q -> q^d
  Series substitute(long d) const {
    if (d < 1) throw InvalidInput("substitute needs d >= 1");
    // the known range grows to d * size terms
    std::vector<C> c(c_.size() * d, C(0));
    for (std::size_t i = 0; i < c_.size(); ++i) c[i * d] = c_[i];
    return Series(lead24_ * d, std::move(c));
  }

  // theta = q d/dq; requires integral exponents
  Series theta() const {
    if (!integral_exponents()) throw InvalidInput("theta needs integral exponents");
    Series r = *this;
    for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] *= C(lead() + static_cast<long>(i));
    return r;
  }

  // Hecke U_m: coefficient of q^n in the output is the coefficient of q^(mn) in the input.
  Series u_op(long m) const {
    if (!integral_exponents()) throw InvalidInput("U operator needs integral exponents");
    if (m < 1) throw InvalidInput("U operator needs m >= 1");
    long lo = lead(), hi = lead() + static_cast<long>(c_.size());  // known exponents [lo, hi)
    long n0 = lo >= 0 ? (lo + m - 1) / m : -((-lo) / m);
    long n1 = hi > 0 ? (hi + m - 1) / m : -((-hi) / m);  // first n with m n >= hi
    std::vector<C> c;
    for (long n = n0; n < n1; ++n) c.push_back(c_[m * n - lo]);
    return Series(24 * n0, std::move(c));
  }

  bool operator==(const Series& o) const { return lead24_ == o.lead24_ && c_ == o.c_; }

  // One line per known term: "exponent_numerator/24 <tab> coefficient".
  std::string dump() const {
    std::string out;
    for (std::size_t i = 0; i < c_.size(); ++i) {
      out += std::to_string(lead24_ + 24 * static_cast<long>(i)) + "/24\t" + c_[i].get_str() + "\n";
    }
    return out;
  }

 private:
  static Rat exponent(long e24) {
    Rat r(e24, 24);
    r.canonicalize();
    return r;
  }

  static Series combine(const Series& a, const Series& b, int sign) {
    if ((a.lead24_ - b.lead24_) % 24 != 0) throw InvalidInput("adding series with incompatible exponents");
    long lead24 = std::min(a.lead24_, b.lead24_);
    Rat ta = a.truncation_order(), tb = b.truncation_order();
    Rat t = ta < tb ? ta : tb;
    Rat span = t - exponent(lead24);
    long n = mpz_class(span.get_num() / span.get_den()).get_si();
    if (n < 0) n = 0;
    std::vector<C> c(n, C(0));
    long sa = (a.lead24_ - lead24) / 24, sb = (b.lead24_ - lead24) / 24;
    for (long i = 0; i < n; ++i) {
      if (i - sa >= 0 && i - sa < static_cast<long>(a.c_.size())) c[i] += a.c_[i - sa];
      if (i - sb >= 0 && i - sb < static_cast<long>(b.c_.size())) {
        if (sign > 0)
          c[i] += b.c_[i - sb];
        else
          c[i] -= b.c_[i - sb];
      }
    }
    return Series(lead24, std::move(c));
  }

  long lead24_ = 0;
  std::vector<C> c_;
};

using QSeries = Series<Int>;

}  // namespace cmpart
