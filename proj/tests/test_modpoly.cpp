#include "cmpart/modpoly.hpp"
#include "cmpart/partition.hpp"
#include "cmpart/qseries.hpp"

#include "doctest.h"

using namespace cmpart;

namespace {

// Phi(f(tau), f(m tau)) as a q-series, by direct substitution.
QSeries substituted(const ModularPolynomial& phi, const QSeries& f, long order) {
  long len = order + phi.degree * (phi.m + 1) + 2;
  QSeries x = f.truncated_at(len), y = f.substitute(phi.m).truncated_at(len);
  std::vector<QSeries> xp{QSeries::constant(Int(1), len)}, yp{QSeries::constant(Int(1), len)};
  for (int i = 1; i <= phi.degree + 1; ++i) {
    xp.push_back((xp.back() * x).truncated_at(len));
    yp.push_back((yp.back() * y).truncated_at(len));
  }
  QSeries acc;
  bool first = true;
  for (const auto& [ij, c] : phi.coeffs) {
    QSeries term = c * (xp[ij.first] * yp[ij.second]);
    acc = first ? term : acc + term;
    first = false;
  }
  return acc;
}

bool vanishes_to(const QSeries& s, long order) {
  if (s.truncation_order() < Rat(order)) return false;
  QSeries head = s.truncated_at(order);
  for (const auto& c : head.coeffs())
    if (c != 0) return false;
  return true;
}

}  // namespace

TEST_CASE("Phi_2 has the classical coefficients") {
  ModularPolynomial phi = classical_modular_polynomial(2, false);
  CHECK(phi.degree == 3);
  CHECK(phi.coeff(3, 0) == 1);
  CHECK(phi.coeff(2, 2) == -1);
  CHECK(phi.coeff(2, 1) == 1488);
  CHECK(phi.coeff(2, 0) == -162000);
  CHECK(phi.coeff(1, 1) == 40773375);
  CHECK(phi.coeff(1, 0) == Int("8748000000"));
  CHECK(phi.coeff(0, 0) == Int("-157464000000000"));
  CHECK(phi.coeff(3, 1) == 0);
  CHECK(phi.coeffs.size() == 11);
  CHECK(phi.symmetric());
  CHECK(phi.monic());
}

TEST_CASE("classical modular polynomials: symmetry, Kronecker congruence, vanishing") {
  for (long m : {2L, 3L, 5L, 7L}) {
    ModularPolynomial phi = classical_modular_polynomial(m);
    CHECK(phi.degree == m + 1);
    CHECK(phi.symmetric());
    CHECK(phi.monic());
    CHECK(kronecker_congruence(phi));
    CHECK(vanishes_to(substituted(phi, j_series(400), 30), 30));
  }
  CHECK(psi(5) == 6);
  CHECK(psi(6) == 12);
  CHECK_THROWS_AS(classical_modular_polynomial(4), InvalidInput);
}

TEST_CASE("text round trip") {
  ModularPolynomial phi = classical_modular_polynomial(3);
  ModularPolynomial back = modpoly_from_text(modpoly_to_text(phi));
  CHECK(back.m == phi.m);
  CHECK(back.degree == phi.degree);
  CHECK(back.coeffs == phi.coeffs);
  CHECK_THROWS(modpoly_from_text("not a polynomial"));
}

TEST_CASE("weight-corrected tangent identity at discriminants -7 and -11") {
  const long bits = 256;
  for (auto [d, J] : std::vector<std::pair<long, long>>{{-7, -3375}, {-11, -32768}}) {
    ModularPolynomial phi = classical_modular_polynomial(-d);
    CBall tau = form_root({1, 1, (1 - d) / 4}, bits);
    QPoint z = make_qpoint(tau);
    EvalContext ctx;
    ctx.bits = bits;
    CBall j = eval_j(z, ctx);
    CHECK(j.re.contains(Rat(J)));
    CBall e2s = e2_star(z, ctx);
    CBall via = masser_e2star(tau, phi, bits);
    CHECK((e2s - via).abs_upper_log2() < -100);
    CBall rhs = masser_rhs(CBall::from_si(J, bits), phi);
    Rat exact = masser_rhs(Rat(J), phi);
    CHECK(rhs.re.contains(exact));
  }
}

TEST_CASE("P through the tangent agrees with direct evaluation") {
  const long bits = 256;
  ModularPolynomial phi = classical_modular_polynomial(7);
  CBall tau = form_root({1, 1, 2}, bits);
  QPoint z = make_qpoint(tau);
  EvalContext ctx;
  ctx.bits = bits;
  CBall direct = eval_P(z, ctx);
  CBall split = split_P_via_tangent(tau, phi, bits);
  CHECK((direct - split).abs_upper_log2() < -100);
}

TEST_CASE("level-6 modular equations") {
  QSeries t = hauptmodul_series(600);
  for (long ell : {5L, 7L}) {
    LevelModularEquation le = level6_modular_equation(ell);
    const ModularPolynomial& phi = le.phi;
    CHECK(phi.m == ell);
    CHECK(phi.degree == ell + 1);
    std::vector<Int> top = phi.coeff_in_y(static_cast<int>(ell + 1));
    REQUIRE_FALSE(top.empty());
    CHECK(top[0] == 1);
    for (std::size_t i = 1; i < top.size(); ++i) CHECK(top[i] == 0);
    CHECK(phi.certified_order >= 200);
    CHECK(vanishes_to(substituted(phi, t, 200), 200));
    CHECK(le.a0_content != 0);
    CHECK(le.a0_valuation == valuation(le.a0_content, ell));
  }
  CHECK_THROWS_AS(level6_modular_equation(13), InvalidInput);
}

TEST_CASE("U_5 on the partition generating function") {
  // sum p(n) q^(n+1): U_5 collects p(5k + 4)
  const long N = 500;
  std::vector<Int> c(N);
  for (long n = 0; n < N; ++n) c[n] = euler_p(n);
  QSeries s(24, c);
  QSeries u = u_ell(s, 5);
  for (long k = 1; k < N / 5; ++k) {
    CHECK(u.coeff(k) == euler_p(5 * k - 1));
    CHECK(u.coeff(k) % 5 == 0);
  }
}
