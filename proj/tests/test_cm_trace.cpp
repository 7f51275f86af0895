#include "cmpart/cm_trace.hpp"
#include "cmpart/partition.hpp"

#include "doctest.h"

using namespace cmpart;

namespace {

std::vector<Int> partitions_dp(long n_max) {
  std::vector<Int> p(n_max + 1, 0);
  p[0] = 1;
  for (long part = 1; part <= n_max; ++part)
    for (long k = part; k <= n_max; ++k) p[k] += p[k - part];
  return p;
}

}  // namespace

TEST_CASE("traces of P at the Heegner points") {
  CHECK(trace(1).exact_trace == 23);
  CHECK(trace(2).exact_trace == 94);
  CHECK(trace(3).exact_trace == 213);
  std::vector<Int> p = partitions_dp(12);
  for (long n = 1; n <= 12; ++n) {
    TraceResult t = trace(n);
    CHECK(t.p_of_n == p[n]);
    CHECK(t.exact_trace == Int(24 * n - 1) * p[n]);
    CHECK(t.numeric_trace.re.contains(Rat(t.exact_trace)));
    CHECK(t.numeric_trace.im.contains_zero());
  }
  CHECK_THROWS_AS(trace(0), InvalidInput);
}

TEST_CASE("the recognised trace does not depend on the starting precision") {
  TraceResult a = trace(7, 96), b = trace(7, 600);
  CHECK(a.exact_trace == b.exact_trace);
  CHECK(b.bits_used >= 600);
}

TEST_CASE("class polynomials for discriminants -23 and -47") {
  ClassPolynomial h1 = class_polynomial(1);
  CHECK(h1.h == 3);
  CHECK(h1.H == std::vector<Rat>{Rat(-419), Rat(3592, 23), Rat(-23), Rat(1)});
  ClassPolynomial h2 = class_polynomial(2);
  CHECK(h2.H == std::vector<Rat>{Rat(1454023, 47), Rat(1092873176, 2209), Rat(-65838), Rat(169659, 47),
                                 Rat(-94), Rat(1)});
}

TEST_CASE("scaled class polynomials are monic with integer coefficients") {
  for (long n = 1; n <= 12; ++n) {
    ClassPolynomial cp = class_polynomial(n);
    REQUIRE(static_cast<long>(cp.H.size()) == cp.h + 1);
    CHECK(cp.H.back() == 1);
    CHECK(cp.H_scaled.back() == 1);
    CHECK(-cp.H[cp.h - 1] == Rat(trace(n).exact_trace));
    for (long k = 0; k <= cp.h; ++k) CHECK(Rat(cp.H_scaled[k]) == cp.H[k] * Rat(ipow(Int(cp.delta), cp.h - k)));
  }
}

TEST_CASE("singular moduli are closed under complex conjugation") {
  SingularModuli sm = singular_moduli(5, 256);
  for (const auto& v : sm.values) {
    bool found = false;
    for (const auto& w : sm.values) found = found || (v.re.overlaps(w.re) && v.im.overlaps(-w.im));
    CHECK(found);
  }
}

TEST_CASE("quadratic integer recognition") {
  const long bits = 128;
  // 4 + sqrt(-23) = 3 + 2 w
  RBall s = sqrt(RBall::from_si(23, bits));
  CBall z{RBall::from_si(4, bits), s};
  CHECK(recognize_quadratic_integer(z, -23) == QuadInt{Int(3), Int(2)});
  CBall zc{RBall::from_si(-7, bits), RBall::from_si(0, bits)};
  CHECK(recognize_quadratic_integer(zc, -23) == QuadInt{Int(-7), Int(0)});
  CBall fuzzy{RBall::from_si(4, bits), s};
  fuzzy.re.add_error_log2(2);
  CHECK_THROWS_AS(recognize_quadratic_integer(fuzzy, -23), PrecisionFailure);
}

TEST_CASE("joint polynomials shift the root sum by c delta trace") {
  auto j = joint_polynomials(1, std::vector<long>{0, 1, 2});
  REQUIRE(j.size() == 3);
  for (const auto& jp : j) {
    REQUIRE(jp.coeffs.size() == 4);
    CHECK(jp.coeffs.back() == QuadInt{Int(1), Int(0)});
  }
  // coefficient of x^2 is minus the root sum; delta P sums to -23 * 23
  for (int c = 1; c <= 2; ++c) {
    CHECK(j[c].coeffs[2].u - j[0].coeffs[2].u == 529 * c);
    CHECK(j[c].coeffs[2].v == j[0].coeffs[2].v);
  }
}
