#include "cmpart/partition.hpp"
#include "cmpart/ss_reduce.hpp"

#include "doctest.h"

#include <set>

using namespace cmpart;

namespace {

// Supersingular j from the Legendre form: lambda is a root of sum_i C(m, i)^2 lambda^i,
// m = (l - 1) / 2, and j = 256 (lambda^2 - lambda + 1)^3 / (lambda^2 (lambda - 1)^2).
std::set<Fq2::E> legendre_js(long ell) {
  Fq2 K(ell);
  long m = (ell - 1) / 2;
  std::vector<long> coef(m + 1);
  for (long i = 0; i <= m; ++i) {
    Int c;
    mpz_bin_uiui(c.get_mpz_t(), m, i);
    coef[i] = K.base.red(Int(c * c));
  }
  std::set<Fq2::E> out;
  for (Fq2::E x : K.elements()) {
    Fq2::E acc = K.make(0);
    for (long i = m; i >= 0; --i) acc = K.add(K.mul(acc, x), K.make(coef[i]));
    if (!K.is_zero(acc)) continue;
    Fq2::E one = K.make(1);
    Fq2::E s = K.add(K.sub(K.mul(x, x), x), one);
    Fq2::E num = K.scale(K.mul(K.mul(s, s), s), 256);
    Fq2::E xm1 = K.sub(x, one);
    Fq2::E den = K.mul(K.mul(x, x), K.mul(xm1, xm1));
    out.insert(K.mul(num, K.inv(den)));
  }
  return out;
}

long ss_count(long ell) {
  long base = ell / 12;
  switch (ell % 12) {
    case 1: return base;
    case 5: case 7: return base + 1;
    default: return base + 2;
  }
}

bool is_root(const Fq2& K, Fq2::E v, long c1, long c0) {
  return K.is_zero(K.add(K.add(K.mul(v, v), K.scale(v, c1)), K.make(c0)));
}

}  // namespace

TEST_CASE("supersingular j-invariants match the Legendre-form enumeration") {
  for (long ell : {5L, 7L, 11L, 13L, 17L, 19L, 23L, 29L, 37L, 41L}) {
    std::vector<Fq2::E> js = supersingular_js(ell);
    CHECK(static_cast<long>(js.size()) == ss_count(ell));
    CHECK(std::set<Fq2::E>(js.begin(), js.end()) == legendre_js(ell));
    Fq2 K(ell);
    for (Fq2::E j : js) CHECK(is_supersingular(j, K));
    long flagged = 0;
    for (Fq2::E x : K.elements()) flagged += is_supersingular(x, K);
    CHECK(flagged == ss_count(ell));
  }
}

TEST_CASE("supersingular points of X0(6)") {
  for (long ell : {5L, 7L, 11L, 13L, 17L}) {
    std::vector<SupersingularPoint> pts = supersingular_points_X06(ell);
    CHECK(static_cast<long>(pts.size()) == ell - 1);
    Fq2 K(ell);
    for (const auto& p : pts) {
      const auto& q = pts.at(p.frobenius_partner);
      CHECK(pts.at(q.frobenius_partner).id == p.id);
      CHECK(K.mul(q.t, K.frob(p.t)) == K.make(72));
    }
  }
}

TEST_CASE("reduced class polynomials factor as expected") {
  CHECK(reduce_class_polynomial(1, 5).text() == "3(x + 3)(x^2 + 4x + 2)");
  CHECK(reduce_class_polynomial(1, 7).text() == "2(x + 3)(x^2 + 2x + 5)");
  CHECK(reduce_class_polynomial(1, 11).text() == "(x + 3)(x^2 + 7x + 7)");
  CHECK(reduce_class_polynomial(2, 13).text() == "8(x + 8)(x^2 + 7x + 3)(x^2 + 8x + 9)");
}

TEST_CASE("fiber values for discriminant -23 at 5 and 7") {
  {
    ReductionReport r = fiber_match(1, 5);
    Fq2 K(5);
    REQUIRE(r.class_values.size() == 3);
    long rational = 0, quadratic = 0;
    for (auto v : r.class_values) {
      if (v == K.make(2)) ++rational;
      if (is_root(K, v, -1, 2)) ++quadratic;
    }
    CHECK(rational == 1);
    CHECK(quadratic == 2);
    CHECK(r.fiber_sum() == 3);
    CHECK(r.values_well_defined);
    CHECK(r.frobenius_equivariant);
    CHECK(r.t_roots_supersingular);
  }
  {
    ReductionReport r = fiber_match(1, 7);
    Fq2 K(7);
    long rational = 0, quadratic = 0;
    for (auto v : r.class_values) {
      if (v == K.make(4)) ++rational;
      if (is_root(K, v, 2, -2)) ++quadratic;
    }
    CHECK(rational == 1);
    CHECK(quadratic == 2);
  }
}

TEST_CASE("supersingular trace congruence") {
  for (auto [n, ell] : std::vector<std::pair<long, long>>{{1, 5}, {1, 7}, {1, 11}, {2, 13}, {3, 13}}) {
    TraceVerdict v = verify_ss_trace(n, ell);
    CHECK(v.holds);
    CHECK(v.classwise_holds);
    CHECK(v.p_mod_ell == mod(euler_p(n).get_si(), ell));
    CHECK(v.report.fiber_sum() == v.report.h);
  }
  CHECK_THROWS_AS(verify_ss_trace(4, 13), InvalidInput);  // 13 splits in Q(sqrt(-95))
}

TEST_CASE("colliding CM classes make the fiber value ambiguous") {
  TraceVerdict v = verify_ss_trace(4, 7);
  CHECK_FALSE(v.report.values_well_defined);
  CHECK_FALSE(v.holds);
  CHECK(v.classwise_holds);
  CHECK(v.report.fiber_sum() == v.report.h);
}

TEST_CASE("dot-product congruence at (2, 13) and (1, 5)") {
  DotProductVerdict d = verify_dot_product(2, 13);
  CHECK(d.holds);
  CHECK(d.pairing_rational);
  CHECK(d.p_mod_ell == 2);
  Fq2 K(13);
  CHECK(K.mul(d.pairing, K.inv(K.make(-47))) == K.make(-2));
  DotProductVerdict e = verify_dot_product(1, 5);
  CHECK(e.holds);
  CHECK(e.p_mod_ell == 1);
}

TEST_CASE("ramified reduction") {
  RamifiedReport r = ramified_grouping_check(4, 5);  // -95 = -5 * 19
  CHECK(r.roots_supersingular);
  CHECK(r.p_divisible);
  CHECK(r.p_valuation == 1);
  CHECK(r.report.fiber_sum() == r.report.h);
  CHECK_THROWS_AS(ramified_grouping_check(1, 5), InvalidInput);
}

TEST_CASE("automatic inert prime") {
  CHECK(auto_inert_prime(1) == 5);
  CHECK(auto_inert_prime(2) == 5);
  CHECK(auto_inert_prime(3) == 7);
  CHECK(auto_inert_prime(3, 8) == 11);
  for (long n = 1; n <= 20; ++n) {
    long ell = auto_inert_prime(n);
    CHECK(kronecker(Int(discriminant_for(n).delta), Int(ell)) == -1);
  }
}
