#include "cmpart/qseries.hpp"

#include "doctest.h"

#include <mpfr.h>

#include <random>

using namespace cmpart;

namespace {

CBall tau_of(const Rat& x, const Rat& y, long bits) { return {RBall::from_rat(x, bits), RBall::from_rat(y, bits)}; }

// prod (1 - q^n) by direct multiplication
QSeries euler_product(long N) {
  std::vector<Int> c(N, 0);
  c[0] = 1;
  for (long n = 1; n < N; ++n)
    for (long k = N - 1; k >= n; --k) c[k] -= c[k - n];
  return QSeries(0, c);
}

}  // namespace

TEST_CASE("series arithmetic") {
  QSeries g = QSeries(0, {Int(1), Int(-1), Int(0), Int(0), Int(0)}).inverse();
  for (long i = 0; i < 5; ++i) CHECK(g.coeff(i) == 1);
  QSeries one = (g * QSeries(0, {Int(1), Int(-1), Int(0), Int(0), Int(0)}));
  CHECK(one.coeff(0) == 1);
  for (long i = 1; i < 5; ++i) CHECK(one.coeff(i) == 0);
  QSeries s(24, {Int(1), Int(2), Int(3)});  // q + 2q^2 + 3q^3
  CHECK(s.theta().coeff(3) == 9);
  QSeries sub = s.substitute(2);
  CHECK(sub.coeff(2) == 1);
  CHECK(sub.coeff(4) == 2);
  CHECK(sub.coeff(3) == 0);
  CHECK(s.pow(2).coeff(2) == 1);
  CHECK(s.pow(2).coeff(3) == 4);
  QSeries u(0, {Int(0), Int(1), Int(2), Int(3), Int(4), Int(5), Int(6), Int(7), Int(8), Int(9), Int(10)});
  QSeries u5 = u.u_op(5);
  CHECK(u5.coeff(0) == 0);
  CHECK(u5.coeff(1) == 5);
  CHECK(u5.coeff(2) == 10);
  CHECK_THROWS_AS(u5.coeff(3), InvalidInput);
  CHECK_THROWS_AS(QSeries(0, {Int(2), Int(1)}).inverse(), InvalidInput);
}

TEST_CASE("eta, Eisenstein series and the discriminant") {
  const long N = 120;
  QSeries eta = eta_series(1, N);
  CHECK(eta.leading_exponent() == Rat(1, 24));
  QSeries e = euler_product(N);
  for (long i = 0; i < 100; ++i) CHECK(eta[i] == e[i]);

  QSeries e4 = e4_series(N), e6 = e6_series(N), d = delta_series(N);
  CHECK(e4.coeff(1) == 240);
  CHECK(e6.coeff(1) == -504);
  CHECK(e2_series(N).coeff(1) == -24);
  QSeries lhs = e4.pow(3) - e6.pow(2);
  for (long i = 0; i < 100; ++i) CHECK(lhs.coeff(i) == 1728 * d.coeff(i));
  CHECK(d.coeff(1) == 1);
  CHECK(d.coeff(2) == -24);
  CHECK(d.coeff(3) == 252);
  CHECK(d.coeff(11) == 534612);

  QSeries j = j_series(N);
  CHECK(j.coeff(-1) == 1);
  CHECK(j.coeff(0) == 744);
  CHECK(j.coeff(1) == 196884);
  CHECK(j.coeff(2) == 21493760);
}

TEST_CASE("the weight -2 form F from divisor sums and the Euler product") {
  const long N = 80, M = N + 10;
  QSeries f = f_series(N);
  CHECK(f.coeff(-1) == 1);
  CHECK(f.coeff(0) == -10);
  CHECK(f.coeff(1) == -29);
  // sum_d c_d E2(d tau) with E2 = 1 - 24 sum sigma(n) q^n, divided by prod_d eta(d tau)^2
  std::vector<Int> comb(M, 0);
  for (auto [d, c] : std::vector<std::pair<long, long>>{{1, 1}, {2, -2}, {3, -3}, {6, 6}}) {
    comb[0] += c;
    for (long n = 1; n * d < M; ++n) comb[n * d] -= 24 * c * sigma1(n);
  }
  QSeries prod = QSeries::constant(Int(1), M);
  QSeries e = euler_product(M);
  for (long d : {1L, 2L, 3L, 6L}) prod = prod * e.substitute(d).truncated_at(M);
  // (eta eta2 eta3 eta6)^2 = q prod^2
  QSeries g = QSeries(0, comb) * QSeries(24, (prod * prod).coeffs()).inverse();
  for (long i = -1; i < 60; ++i) CHECK(g.coeff(i) == 2 * f.coeff(i));
}

TEST_CASE("the Hauptmodul and its relation to j") {
  const auto& h = hauptmodul();
  CHECK(is_level6_function(h));
  CHECK(pole_degree(h) == 1);
  QSeries t = hauptmodul_series(60);
  CHECK(t.coeff(-1) == 1);
  const auto& rel = hauptmodul_relation();
  CHECK(rel.num.size() == 13);  // j has degree psi(6) = 12 in t
  const long bits = 192;
  for (auto [x, y] : std::vector<std::pair<Rat, Rat>>{{Rat(1, 7), Rat(1, 3)}, {Rat(-2, 5), Rat(2, 7)}}) {
    QPoint z = make_qpoint(tau_of(x, y, bits));
    EvalContext ctx;
    ctx.bits = bits;
    CBall tv = eval_hauptmodul(z, ctx);
    CBall jv = eval_j(z, ctx);
    CBall num = CBall::from_rat(0, bits), den = CBall::from_rat(0, bits);
    CBall pw = CBall::from_rat(1, bits);
    for (std::size_t k = 0; k < rel.num.size(); ++k) {
      num = num + pw * CBall::from_rat(Rat(rel.num[k]), bits);
      if (k < rel.den.size()) den = den + pw * CBall::from_rat(Rat(rel.den[k]), bits);
      pw = pw * tv;
    }
    CHECK((jv * den - num).abs_upper_log2() - num.abs_upper_log2() < -100);
  }
}

TEST_CASE("closed-form values at tau = i") {
  const long bits = 256;
  QPoint z = make_qpoint(tau_of(0, 1, bits));
  EvalContext ctx;
  ctx.bits = bits;
  CBall j = eval_j(z, ctx);
  CHECK(j.re.contains(Rat(1728)));
  CHECK(j.im.contains(Rat(0)));
  CHECK(j.rad_log2() < -150);
  CBall e2s = e2_star(z, ctx);
  CHECK(e2s.re.contains_zero());
  CHECK(e2s.im.contains_zero());

  // eta(i) = Gamma(1/4) / (2 pi^(3/4))
  mpfr_t g, p, r;
  mpfr_inits2(bits + 64, g, p, r, (mpfr_ptr)0);
  mpfr_set_d(r, 0.25, MPFR_RNDN);
  mpfr_gamma(g, r, MPFR_RNDN);
  mpfr_const_pi(p, MPFR_RNDN);
  mpfr_set_d(r, 0.75, MPFR_RNDN);
  mpfr_pow(p, p, r, MPFR_RNDN);
  mpfr_div(g, g, p, MPFR_RNDN);
  mpfr_div_ui(g, g, 2, MPFR_RNDN);
  Rat expected;
  mpfr_get_q(expected.get_mpq_t(), g);
  mpfr_clears(g, p, r, (mpfr_ptr)0);
  CBall eta = eval_eta(1, z, ctx);
  CHECK((eta.re - RBall::from_rat(expected, bits)).abs_upper_log2() < -200);
  CHECK(eta.im.abs_upper_log2() < -200);
}

TEST_CASE("P directly and through E2* agree at the CM points of discriminant -23") {
  for (const auto& f : enumerate_classes(discriminant_for(1))) {
    CMPoint c = cm_point(f, 256);
    QPoint z = make_qpoint(c.value);
    EvalContext ctx;
    ctx.bits = 256;
    CBall a = eval_P(z, ctx), b = eval_P_split(z, ctx);
    CHECK(a.re.overlaps(b.re));
    CHECK(a.im.overlaps(b.im));
    CHECK(a.rad_log2() < -100);
  }
}

TEST_CASE("certified balls contain values computed at much higher precision") {
  std::mt19937 rng(20240611);
  std::uniform_int_distribution<long> num(-50, 50), den(1, 60), ynum(20, 200);
  for (int trial = 0; trial < 20; ++trial) {
    Rat x(num(rng), den(rng)), y(ynum(rng), 100);
    x.canonicalize();
    y.canonicalize();
    QPoint lo = make_qpoint(tau_of(x, y, 128)), hi = make_qpoint(tau_of(x, y, 512));
    EvalContext c1, c2;
    c1.bits = 128;
    c2.bits = 512;
    CBall a = eval_hauptmodul(lo, c1), b = eval_hauptmodul(hi, c2);
    CHECK(a.re.contains(b.re));
    CHECK(a.im.contains(b.im));
    CBall pa = eval_P(lo, c1), pb = eval_P(hi, c2);
    CHECK(pa.re.contains(pb.re));
    CHECK(pa.im.contains(pb.im));
  }
}

TEST_CASE("P is an eigenfunction of the hyperbolic Laplacian with eigenvalue -2") {
  // -y^2 (P_xx + P_yy) = -2 P, by a five-point stencil
  const long bits = 256;
  Rat x0(1, 10), y0(9, 10), h(1, 1000000);
  auto P = [&](const Rat& x, const Rat& y) {
    QPoint z = make_qpoint(tau_of(x, y, bits));
    EvalContext ctx;
    ctx.bits = bits;
    return eval_P(z, ctx).re;
  };
  RBall c = P(x0, y0);
  RBall lap = P(x0 + h, y0) + P(x0 - h, y0) + P(x0, y0 + h) + P(x0, y0 - h) - mul_si(c, 4);
  RBall scale = RBall::from_rat(y0 * y0 / (h * h), bits);
  RBall lhs = lap * scale;
  RBall diff = lhs - mul_si(c, 2);
  CHECK(diff.abs_upper_d() < 1e-6 * (1 + c.abs_upper_d()));
}

TEST_CASE("truncation override") {
  long saved = default_terms();
  set_default_terms(50);
  EvalContext ctx;
  CHECK(ctx.n_terms == 50);
  set_default_terms(saved);
  EvalContext ctx2;
  CHECK(ctx2.n_terms == saved);
}
