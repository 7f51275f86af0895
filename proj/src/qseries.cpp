#include "cmpart/qseries.hpp"

#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <map>
#include <memory>
#include <mutex>

namespace cmpart {

namespace {

constexpr double kLog2e = 1.4426950408889634;
constexpr double kFourPi = 12.566370614359172;

long terms_for(long lead24, long N) {
  long num = 24 * N - lead24;
  if (num <= 0) return 0;
  return (num + 23) / 24;
}

// prod_{n>=1} (1 - q^(d n)) to `count` terms, via the pentagonal number theorem.
std::vector<Int> eta_core(long d, long count) {
  std::vector<Int> c(count, Int(0));
  if (count > 0) c[0] = 1;
  for (long k = 1;; ++k) {
    long e1 = d * (k * (3 * k - 1) / 2), e2 = d * (k * (3 * k + 1) / 2);
    if (e1 >= count) break;
    Int s = (k & 1) ? -1 : 1;
    c[e1] += s;
    if (e2 < count) c[e2] += s;
  }
  return c;
}

std::vector<Int> sigma_coeffs(long d, long count, int power, long scale) {
  std::vector<Int> c(count, Int(0));
  if (count) c[0] = 1;
  for (long n = 1; d * n < count; ++n) {
    Int s = 0;
    for (long t = 1; t * t <= n; ++t)
      if (n % t == 0) {
        s += ipow(Int(t), power);
        if (t * t != n) s += ipow(Int(n / t), power);
      }
    c[d * n] = scale * s;
  }
  return c;
}

double log2_abs(const Int& z) {
  if (z == 0) return -std::numeric_limits<double>::infinity();
  long e;
  double m = mpz_get_d_2exp(&e, z.get_mpz_t());
  return std::log2(std::abs(m)) + static_cast<double>(e);
}

struct Cached {
  QSeries s;
  Envelope env;
};

// Process-wide memo of named series. Concurrent readers take the lock only briefly.
std::shared_ptr<const Cached> memo(const std::string& key, long N, int k,
                                   const std::function<QSeries(long)>& build) {
  static std::map<std::string, std::shared_ptr<const Cached>> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(key);
  if (it != cache.end() && it->second->s.truncation_order() >= Rat(N)) return it->second;
  long target = N;
  if (it != cache.end()) {
    Rat have = it->second->s.truncation_order();
    long h = mpz_class(have.get_num() / have.get_den()).get_si();
    target = std::max(N, 2 * h);
  }
  auto c = std::make_shared<Cached>();
  c->s = build(target);
  c->env = fit_envelope(c->s, k);
  cache[key] = c;
  return c;
}

}  // namespace

QSeries eta_series(long d, long N) {
  if (d < 1) throw InvalidInput("eta_series needs d >= 1");
  return QSeries(d, eta_core(d, terms_for(d, N)));
}

QSeries e2_scaled(long d, long N) {
  if (d < 1) throw InvalidInput("e2_scaled needs d >= 1");
  return QSeries(0, sigma_coeffs(d, std::max(0L, N), 1, -24));
}
QSeries e2_series(long N) { return e2_scaled(1, N); }
QSeries e4_series(long N) { return QSeries(0, sigma_coeffs(1, std::max(0L, N), 3, 240)); }
QSeries e6_series(long N) { return QSeries(0, sigma_coeffs(1, std::max(0L, N), 5, -504)); }

QSeries delta_series(long N) {
  long count = terms_for(24, N);
  QSeries core(0, eta_core(1, count));
  QSeries d = core.pow(24);
  return QSeries(24, d.coeffs());
}

QSeries j_series(long N) {
  long count = terms_for(-24, N);
  QSeries e4 = e4_series(count);
  QSeries core(0, eta_core(1, count));
  QSeries r = e4.pow(3) * core.pow(-24);
  return QSeries(-24, r.coeffs());
}

QSeries f_series(long N) {
  long count = terms_for(-24, N);
  QSeries num = e2_scaled(1, count) - Int(2) * e2_scaled(2, count) - Int(3) * e2_scaled(3, count) +
                Int(6) * e2_scaled(6, count);
  for (auto& c : num.coeffs()) {
    if (!mpz_divisible_ui_p(c.get_mpz_t(), 2)) throw ConsistencyFailure("F numerator not even");
    c /= 2;
  }
  QSeries den = QSeries::constant(Int(1), count);
  for (long d : kLevel6Divisors) den = den * QSeries(0, eta_core(d, count)).pow(2);
  QSeries r = num * den.inverse();
  return QSeries(-24, r.coeffs());
}

// ---- eta quotients ----

std::array<Rat, 4> cusp_orders(const EtaQuotient& e) {
  std::array<Rat, 4> out;
  const long N = 6;
  for (int ci = 0; ci < 4; ++ci) {
    long c = kLevel6Divisors[ci];
    Rat s = 0;
    for (int di = 0; di < 4; ++di) {
      long d = kLevel6Divisors[di];
      long g = std::gcd(c, d);
      s += Rat(g * g * e.r[di], std::gcd(c, N / c) * c * d);
    }
    out[ci] = s * N / 24;
    out[ci].canonicalize();
  }
  return out;
}

bool is_level6_function(const EtaQuotient& e) {
  long sum = 0, s1 = 0, s2 = 0;
  for (int i = 0; i < 4; ++i) {
    sum += e.r[i];
    s1 += kLevel6Divisors[i] * e.r[i];
    s2 += (6 / kLevel6Divisors[i]) * e.r[i];
  }
  bool square = mod(e.r[1] + e.r[3], 2) == 0 && mod(e.r[2] + e.r[3], 2) == 0;
  return sum == 0 && mod(s1, 24) == 0 && mod(s2, 24) == 0 && square;
}

long pole_degree(const EtaQuotient& e) {
  Rat deg = 0;
  for (const Rat& o : cusp_orders(e))
    if (o < 0) deg -= o;
  if (deg.get_den() != 1) return -1;
  return deg.get_num().get_si();
}

QSeries eta_quotient_series(const EtaQuotient& e, long N) {
  long lead24 = 0;
  for (int i = 0; i < 4; ++i) lead24 += kLevel6Divisors[i] * e.r[i];
  long count = terms_for(lead24, N);
  QSeries acc = QSeries::constant(Int(1), count);
  for (int i = 0; i < 4; ++i)
    if (e.r[i]) acc = acc * QSeries(0, eta_core(kLevel6Divisors[i], count)).pow(e.r[i]);
  return QSeries(lead24, acc.coeffs());
}

const std::vector<HauptmodulCheck>& hauptmodul_catalog() {
  static const std::vector<HauptmodulCheck> cat = [] {
    std::vector<EtaQuotient> cands = {
        {"(eta(t)eta(3t)/(eta(2t)eta(6t)))^12", {12, -12, 12, -12}},
        {"(eta(2t)eta(3t)/(eta(t)eta(6t)))^12", {-12, 12, 12, -12}},
        {"(eta(2t)eta(6t)/(eta(t)eta(3t)))^4", {-4, 4, -4, 4}},
        {"eta(t)^5 eta(3t)/(eta(2t) eta(6t)^5)", {5, -1, 1, -5}},
        {"eta(2t)^3 eta(3t)^9/(eta(t)^3 eta(6t)^9)", {-3, 3, 9, -9}},
    };
    std::vector<HauptmodulCheck> out;
    bool chosen = false;
    for (const auto& c : cands) {
      HauptmodulCheck h;
      h.candidate = c;
      h.orders = cusp_orders(c);
      h.modular = is_level6_function(c);
      h.degree = pole_degree(c);
      h.accepted = !chosen && h.modular && h.degree == 1 && h.orders[3] == -1;
      chosen = chosen || h.accepted;
      out.push_back(h);
    }
    return out;
  }();
  return cat;
}

const EtaQuotient& hauptmodul() {
  for (const auto& h : hauptmodul_catalog())
    if (h.accepted) return h.candidate;
  throw ConsistencyFailure("no Hauptmodul in the eta-quotient catalog passed the valence check");
}

QSeries hauptmodul_series(long N) { return eta_quotient_series(hauptmodul(), N); }

namespace {

// Null space (dimension one expected) of an exact rational matrix; returns a primitive
// integer vector.
std::vector<Int> kernel_vector(std::vector<std::vector<Rat>> m, std::size_t ncols) {
  std::size_t row = 0;
  std::vector<long> pivot_col;
  for (std::size_t col = 0; col < ncols && row < m.size(); ++col) {
    std::size_t p = row;
    while (p < m.size() && m[p][col] == 0) ++p;
    if (p == m.size()) continue;
    std::swap(m[p], m[row]);
    Rat inv = 1 / m[row][col];
    for (auto& v : m[row]) v *= inv;
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r == row || m[r][col] == 0) continue;
      Rat f = m[r][col];
      for (std::size_t c = 0; c < ncols; ++c) m[r][c] -= f * m[row][c];
    }
    pivot_col.push_back(static_cast<long>(col));
    ++row;
  }
  std::vector<bool> is_pivot(ncols, false);
  for (long c : pivot_col) is_pivot[c] = true;
  std::vector<std::size_t> free;
  for (std::size_t c = 0; c < ncols; ++c)
    if (!is_pivot[c]) free.push_back(c);
  if (free.size() != 1) throw ConsistencyFailure("Hauptmodul relation: kernel dimension is not one");
  std::vector<Rat> v(ncols, Rat(0));
  v[free[0]] = 1;
  for (std::size_t r = 0; r < pivot_col.size(); ++r) v[pivot_col[r]] = -m[r][free[0]];
  Int l = 1;
  for (auto& x : v) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
  std::vector<Int> out;
  Int g = 0;
  for (auto& x : v) {
    Rat y = x * l;
    out.push_back(y.get_num());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), y.get_num_mpz_t());
  }
  for (auto& x : out) x /= g;
  return out;
}

int cusp_class(long a, long c) {
  // index into {0, 1/2, 1/3, infinity} by gcd(c, 6)
  long g = std::gcd(a, c);
  if (g) c /= g;
  long d = std::gcd(std::abs(c), 6L);
  if (c == 0) d = 6;
  switch (d) {
    case 1:
      return 0;
    case 2:
      return 1;
    case 3:
      return 2;
    default:
      return 3;
  }
}

}  // namespace

const HauptmodulRelation& hauptmodul_relation() {
  static const HauptmodulRelation rel = [] {
    const int D = 12;  // [SL2(Z) : Gamma0(6)]
    const long M = 60;
    QSeries t = hauptmodul_series(M);
    QSeries j = j_series(M);
    std::vector<QSeries> tp{QSeries::constant(Int(1), t.size())};
    for (int k = 1; k <= D; ++k) tp.push_back(tp.back() * t);
    // unknowns: den_0..den_{D-1}, num_0..num_D ; equation: j*den(t) - num(t) = 0
    std::size_t ncols = 2 * D + 1;
    long lo = -D;
    long hi = M - D - 2;
    std::vector<std::vector<Rat>> m;
    std::vector<QSeries> jt;
    for (int k = 0; k < D; ++k) jt.push_back(j * tp[k]);
    for (long e = lo; e < hi; ++e) {
      std::vector<Rat> row(ncols, Rat(0));
      for (int k = 0; k < D; ++k) row[k] = Rat(jt[k].coeff(e));
      for (int k = 0; k <= D; ++k) row[D + k] = Rat(-tp[k].coeff(e));
      m.push_back(row);
    }
    std::vector<Int> v = kernel_vector(m, ncols);
    HauptmodulRelation r;
    r.den.assign(v.begin(), v.begin() + D);
    r.num.assign(v.begin() + D, v.end());
    if (r.num.back() < 0) {
      for (auto& x : r.den) x = -x;
      for (auto& x : r.num) x = -x;
    }
    // Cusp values: integer roots of den with multiplicity = cusp width (6, 3, 2).
    auto eval = [](const std::vector<Int>& p, long x) {
      Int acc = 0;
      for (std::size_t i = p.size(); i-- > 0;) acc = acc * x + p[i];
      return acc;
    };
    auto deflate = [](std::vector<Int> p, long x) {
      std::vector<Int> q(p.size() - 1);
      Int carry = 0;
      for (std::size_t i = p.size(); i-- > 1;) {
        carry = carry * x + p[i];
        q[i - 1] = carry;
      }
      return q;
    };
    std::map<long, int> mult;
    std::vector<Int> p = r.den;
    while (p.size() > 1 && p.back() == 0) p.pop_back();
    for (long x = -1000; x <= 1000; ++x) {
      while (p.size() > 1 && eval(p, x) == 0) {
        p = deflate(p, x);
        ++mult[x];
      }
    }
    for (auto [x, k] : mult) {
      if (k == 6) r.cusp_values[0] = x;
      if (k == 3) r.cusp_values[1] = x;
      if (k == 2) r.cusp_values[2] = x;
    }
    if (mult.size() != 3) throw ConsistencyFailure("Hauptmodul relation: unexpected cusp structure");
    // Atkin-Lehner action from the cusp permutation (t is a degree one function).
    const std::array<std::pair<long, long>, 4> cusps{{{0, 1}, {1, 2}, {1, 3}, {1, 0}}};
    for (int w : {AL_W2, AL_W3, AL_W6}) {
      Mat2 W = atkin_lehner_matrix(w);
      std::array<int, 4> sigma{};
      for (int i = 0; i < 4; ++i) {
        auto [a, c] = cusps[i];
        sigma[i] = cusp_class(W.p * a + W.q * c, W.r * a + W.s * c);
      }
      // t o W = (A t + B) / (t - A) with A = t(sigma(inf)); pick a finite cusp c with sigma(c) finite.
      long A = r.cusp_values[sigma[3]];
      long B = 0;
      bool found = false;
      for (int c = 0; c < 3 && !found; ++c)
        if (sigma[c] != 3) {
          long tc = r.cusp_values[c], ts = r.cusp_values[sigma[c]];
          B = ts * (tc - A) - A * tc;
          found = true;
        }
      r.atkin_lehner[w] = {A, B, 1, -A};
    }
    return r;
  }();
  return rel;
}

// ---- evaluation ----

Envelope fit_envelope(const QSeries& s, int k) {
  Envelope env;
  env.k = k;
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < s.size(); ++i) {
    double v = log2_abs(s[i]) - k * std::log2(static_cast<double>(i)) - kFourPi * std::sqrt(static_cast<double>(i)) * kLog2e;
    best = std::max(best, v);
  }
  if (std::isinf(best)) best = 0;
  env.log2C = best + 2;
  return env;
}

QPoint make_qpoint(const CBall& tau) {
  QPoint z;
  z.tau = tau;
  z.im = tau.im;
  if (!tau.im.positive()) throw InvalidInput("evaluation point must lie in the upper half plane");
  mpfr_prec_t p = tau.prec();
  RBall twopi = mul_si(RBall::pi(p), 2);
  CBall w{-(twopi * tau.im), twopi * tau.re};
  z.q = exp(w);
  z.log2_absq = z.q.abs_upper_log2();
  return z;
}

namespace {

double tail_log2(const Envelope& env, double log2q, long N) {
  double n = static_cast<double>(N);
  double log2rho = env.k * std::log2(1 + 1 / n) + 2 * M_PI / std::sqrt(n) * kLog2e + log2q;
  if (log2rho >= 0) return std::numeric_limits<double>::infinity();
  double first = env.log2C + env.k * std::log2(n) + kFourPi * std::sqrt(n) * kLog2e + n * log2q;
  return first - std::log2(1 - std::exp2(log2rho));
}

}  // namespace

namespace {
std::atomic<long> g_default_terms{0};
}

long default_terms() { return g_default_terms.load(); }
void set_default_terms(long n) { g_default_terms.store(n > 0 ? n : 0); }

CBall evaluate(const QSeries& s, const Envelope& env, const QPoint& z, EvalContext& ctx) {
  const mpfr_prec_t prec = ctx.bits;
  if (z.log2_absq >= 0) throw PrecisionFailure("|q| >= 1");
  // |q^lead|
  RBall twopi = mul_si(RBall::pi(prec), 2);
  CBall w{-(twopi * z.im), twopi * z.tau.re};
  Rat lead = s.leading_exponent();
  CBall ql = exp(CBall{w.re * RBall::from_rat(lead, prec), w.im * RBall::from_rat(lead, prec)});
  double log2ql = ql.abs_upper_log2();
  long N = ctx.n_terms;
  if (N <= 0) {
    double target = -static_cast<double>(ctx.bits) - 16 - log2ql;
    N = 1;
    while (tail_log2(env, z.log2_absq, N) > target) {
      N = N < 16 ? N + 1 : N + N / 8;
      if (N > 200000) throw PrecisionFailure("tail bound cannot be certified with a reasonable number of terms");
    }
  }
  if (N > static_cast<long>(s.size())) throw PrecisionFailure("series too short for the requested tail bound");
  double tl = tail_log2(env, z.log2_absq, N);
  if (std::isinf(tl)) throw PrecisionFailure("tail bound diverges at this point");
  CBall acc = CBall::from_int(s[N - 1], prec);
  CBall q = z.q;
  for (long i = N - 2; i >= 0; --i) {
    acc = acc * q;
    acc.re = acc.re + RBall::from_int(s[i], prec);
  }
  acc = acc * ql;
  double tail = tl + log2ql;
  acc.re.add_error_log2(tail);
  acc.im.add_error_log2(tail);
  ctx.tail_log2 = tail;
  ctx.terms_used = N;
  return acc;
}

namespace {

// Series length needed at this point; a generous estimate used to size the memo.
long needed_terms(const QPoint& z, long bits) {
  double lq = -z.log2_absq;
  double n = (bits + 64) / std::max(lq, 1e-3);
  // the envelope exponent adds 4 pi sqrt(n) log2 e bits of loss
  for (int it = 0; it < 8; ++it) n = (bits + 64 + kFourPi * std::sqrt(n) * kLog2e + 64) / lq;
  return static_cast<long>(n) + 32;
}

CBall eval_named(const std::string& key, int k, const std::function<QSeries(long)>& build, const QPoint& z,
                 EvalContext& ctx) {
  long need = ctx.n_terms > 0 ? ctx.n_terms + 2 : needed_terms(z, ctx.bits);
  auto c = memo(key, need, k, build);
  return evaluate(c->s, c->env, z, ctx);
}

}  // namespace

CBall eval_eta(long d, const QPoint& z, EvalContext& ctx) {
  return eval_named("eta" + std::to_string(d), 0, [d](long N) { return eta_series(d, N); }, z, ctx);
}
CBall eval_e2(const QPoint& z, EvalContext& ctx) { return eval_named("E2", 0, e2_series, z, ctx); }
CBall eval_e4(const QPoint& z, EvalContext& ctx) { return eval_named("E4", 0, e4_series, z, ctx); }
CBall eval_e6(const QPoint& z, EvalContext& ctx) { return eval_named("E6", 0, e6_series, z, ctx); }
CBall eval_j(const QPoint& z, EvalContext& ctx) { return eval_named("j", 0, j_series, z, ctx); }
CBall eval_f(const QPoint& z, EvalContext& ctx) { return eval_named("F", 0, f_series, z, ctx); }
CBall eval_theta_f(const QPoint& z, EvalContext& ctx) {
  return eval_named("thetaF", 1, [](long N) { return f_series(N).theta(); }, z, ctx);
}
CBall eval_hauptmodul(const QPoint& z, EvalContext& ctx) { return eval_named("t6", 0, hauptmodul_series, z, ctx); }

CBall eval_P(const QPoint& z, EvalContext& ctx) {
  EvalContext c1 = ctx, c2 = ctx;
  CBall f = eval_f(z, c1);
  CBall tf = eval_theta_f(z, c2);
  ctx.tail_log2 = std::max(c1.tail_log2, c2.tail_log2);
  ctx.terms_used = std::max(c1.terms_used, c2.terms_used);
  RBall twopiy = mul_si(RBall::pi(ctx.bits), 2) * z.im;
  return -tf - f / twopiy;
}

CBall e2_star(const QPoint& z, EvalContext& ctx) {
  CBall e2 = eval_e2(z, ctx);
  RBall corr = RBall::from_si(3, ctx.bits) / (RBall::pi(ctx.bits) * z.im);
  return {e2.re - corr, e2.im};
}

CBall eval_P_split(const QPoint& z, EvalContext& ctx) {
  EvalContext c1 = ctx, c2 = ctx, c3 = ctx;
  CBall f = eval_f(z, c1);
  CBall tf = eval_theta_f(z, c2);
  CBall e2 = eval_e2(z, c3);
  CBall e2s = e2_star(z, c3);
  CBall d = tf + (e2 * f) / RBall::from_si(6, ctx.bits);
  return -d + (e2s * f) / RBall::from_si(6, ctx.bits);
}

int atkin_lehner_sign(int w) {
  switch (w) {
    case AL_W2:
    case AL_W3:
      return -1;
    default:
      return 1;
  }
}

CBall form_root(const QuadForm& f, long bits) {
  long D = -f.disc();
  if (f.a <= 0 || D <= 0) throw InvalidInput("form_root needs a positive definite form");
  RBall two_a = RBall::from_si(2 * f.a, bits);
  RBall re = RBall::from_si(-f.b, bits) / two_a;
  RBall im = sqrt(RBall::from_si(D, bits)) / two_a;
  return {re, im};
}

CMPoint cm_point(const QuadForm& f, long bits) {
  CMPoint p;
  p.form = f;
  p.value = form_root(f, bits);
  long D = -f.disc();
  long s = static_cast<long>(std::sqrt(static_cast<double>(D)));
  while (s * s > D) --s;
  while ((s + 1) * (s + 1) <= D) ++s;
  p.imag_lower_bound = Rat(s, 2 * f.a);
  p.imag_lower_bound.canonicalize();
  return p;
}

}  // namespace cmpart
