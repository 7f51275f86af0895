#include "cmpart/modpoly.hpp"

#include <filesystem>
#include <limits>
#include <fstream>
#include <mutex>
#include <sstream>

namespace cmpart {

Int ModularPolynomial::coeff(int i, int j) const {
  auto it = coeffs.find({i, j});
  return it == coeffs.end() ? Int(0) : it->second;
}

bool ModularPolynomial::symmetric() const {
  for (const auto& [k, v] : coeffs)
    if (coeff(k.second, k.first) != v) return false;
  return true;
}

bool ModularPolynomial::monic() const { return coeff(degree, 0) == 1 && coeff(0, degree) == 1; }

std::vector<Int> ModularPolynomial::coeff_in_y(int j) const {
  std::vector<Int> c(degree + 1, Int(0));
  for (const auto& [k, v] : coeffs)
    if (k.second == j) c[k.first] = v;
  return c;
}

long psi(long m) {
  long r = m;
  for (auto [p, e] : factorize(m)) r = r / p * (p + 1);
  return r;
}

namespace {

// Writes s as a polynomial in f (f = q^-1 + ...) plus a remainder; returns ascending
// coefficients. The remainder must vanish through its known range.
std::vector<Int> as_polynomial(QSeries s, const std::vector<QSeries>& fpow, long& zero_to) {
  int top = static_cast<int>(fpow.size()) - 1;
  std::vector<Int> poly(top + 1, Int(0));
  long lead = s.lead();
  if (lead < -top) throw ConsistencyFailure("series pole order exceeds the expected degree");
  for (long e = lead; e <= 0; ++e) {
    Int c = s.coeff(e);
    if (c == 0) continue;
    int d = static_cast<int>(-e);
    poly[d] = c;
    s = s - c * fpow[d];
  }
  Rat t = s.truncation_order();
  long known = mpz_class(t.get_num() / t.get_den()).get_si();
  for (long e = s.lead(); e < known; ++e)
    if (s.coeff(e) != 0) throw ConsistencyFailure("modular equation: nonzero remainder at q^" + std::to_string(e));
  zero_to = known;
  return poly;
}

}  // namespace

ModularPolynomial modular_equation(const std::function<QSeries(long)>& series, long m, long order) {
  if (!is_prime(m)) throw InvalidInput("modular_equation needs a prime index");
  const int D = static_cast<int>(m + 1);
  const long Ts = order + m * D + D;
  const long Tf = m * Ts + D + 2;
  QSeries f = series(Tf);
  if (f.lead() != -1 || f[0] != 1) throw InvalidInput("modular_equation needs f = q^-1 + O(1)");
  std::vector<QSeries> fpow{QSeries::constant(Int(1), f.size() + 4)};
  for (int k = 1; k <= D; ++k) fpow.push_back(fpow.back() * f);
  QSeries fm = f.truncated_at(Ts + 2).substitute(m);
  std::vector<QSeries> fmpow{QSeries::constant(Int(1), fm.size() + 4)};
  for (int k = 1; k <= D; ++k) fmpow.push_back(fmpow.back() * fm);
  // power sums of the m + 1 conjugates f((tau + a) / m), f(m tau)
  std::vector<QSeries> s(D + 1);
  for (int k = 1; k <= D; ++k) s[k] = Int(m) * fpow[k].u_op(m) + fmpow[k];
  std::vector<QSeries> e(D + 1);
  e[0] = QSeries::constant(Int(1), s[1].size() + 8 * m * D);
  for (int k = 1; k <= D; ++k) {
    QSeries acc = e[k - 1] * s[1];
    for (int i = 2; i <= k; ++i) {
      QSeries term = e[k - i] * s[i];
      acc = (i % 2 == 0) ? acc - term : acc + term;
    }
    for (auto& c : acc.coeffs()) {
      if (!mpz_divisible_ui_p(c.get_mpz_t(), k)) throw ConsistencyFailure("Newton identity: inexact division");
      c /= k;
    }
    e[k] = acc.normalized();
  }
  ModularPolynomial phi;
  phi.m = m;
  phi.degree = D;
  long certified = std::numeric_limits<long>::max();
  for (int k = 0; k <= D; ++k) {
    long zero_to = 0;
    std::vector<Int> poly = as_polynomial(e[k], fpow, zero_to);
    if (k > 0) certified = std::min(certified, zero_to);
    Int sign = (k % 2) ? -1 : 1;
    for (int i = 0; i <= D; ++i)
      if (poly[i] != 0) phi.coeffs[{i, D - k}] = sign * poly[i];
  }
  if (certified < order)
    throw ConsistencyFailure("modular equation certified only to q^" + std::to_string(certified));
  // direct check: sum_j (sum_i c_ij f^i) f(m tau)^j = O(q^order)
  QSeries total;
  bool first = true;
  for (int j = 0; j <= D; ++j) {
    std::vector<Int> cy = phi.coeff_in_y(j);
    QSeries inner(-24 * D, std::vector<Int>(fpow[D].size(), Int(0)));
    for (int i = 0; i <= D; ++i)
      if (cy[i] != 0) inner = inner + cy[i] * fpow[i];
    QSeries term = inner * fmpow[j];
    total = first ? term : total + term;
    first = false;
  }
  Rat t = total.truncation_order();
  long known = mpz_class(t.get_num() / t.get_den()).get_si();
  for (long x = total.lead(); x < std::min(known, order); ++x)
    if (total.coeff(x) != 0) throw ConsistencyFailure("modular equation does not vanish at q^" + std::to_string(x));
  phi.certified_order = std::min(known, certified);
  if (phi.certified_order < order) throw ConsistencyFailure("vanishing identity not certified far enough");
  return phi;
}

std::string modpoly_to_text(const ModularPolynomial& phi) {
  std::ostringstream os;
  os << "cmpart-modpoly 1\n" << phi.m << " " << phi.degree << "\n";
  for (const auto& [k, v] : phi.coeffs) os << k.first << " " << k.second << " " << v.get_str() << "\n";
  return os.str();
}

ModularPolynomial modpoly_from_text(const std::string& text) {
  std::istringstream is(text);
  std::string magic;
  int version = 0;
  is >> magic >> version;
  if (magic != "cmpart-modpoly" || version != 1) throw InvalidInput("modpoly cache: bad header");
  ModularPolynomial phi;
  if (!(is >> phi.m >> phi.degree)) throw InvalidInput("modpoly cache: bad size line");
  int i, j;
  std::string v;
  while (is >> i >> j >> v) phi.coeffs[{i, j}] = Int(v);
  return phi;
}

namespace {

std::mutex cache_mutex;

std::string cache_path(const std::string& name) {
  return (std::filesystem::path(cache_dir()) / "modpoly" / (name + ".txt")).string();
}

bool load_cached(const std::string& name, long m, ModularPolynomial& out) {
  std::ifstream in(cache_path(name));
  if (!in) return false;
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    ModularPolynomial phi = modpoly_from_text(ss.str());
    if (phi.m != m || phi.degree != m + 1 || !phi.symmetric() || !phi.monic()) return false;
    out = std::move(phi);
    return true;
  } catch (const InvalidInput&) {
    return false;
  }
}

void store_cached(const std::string& name, const ModularPolynomial& phi) {
  std::error_code ec;
  std::filesystem::create_directories(std::filesystem::path(cache_path(name)).parent_path(), ec);
  if (ec) return;
  std::string tmp = cache_path(name) + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) return;
    out << modpoly_to_text(phi);
  }
  std::filesystem::rename(tmp, cache_path(name), ec);
}

}  // namespace

ModularPolynomial classical_modular_polynomial(long m, bool use_cache, bool allow_large) {
  if (!is_prime(m) || m > 23) throw InvalidInput("classical_modular_polynomial supports primes m <= 23");
  if (m == 23 && !allow_large) throw InvalidInput("Phi_23 is gated; enable it explicitly");
  std::lock_guard<std::mutex> lock(cache_mutex);
  const std::string name = "phi_" + std::to_string(m);
  ModularPolynomial phi;
  if (use_cache && load_cached(name, m, phi)) return phi;
  phi = modular_equation(j_series, m, 20);
  if (!phi.symmetric() || !phi.monic()) throw ConsistencyFailure("Phi_m is not symmetric and monic");
  if (use_cache) store_cached(name, phi);
  return phi;
}

bool kronecker_congruence(const ModularPolynomial& phi) {
  long m = phi.m;
  // (X^m - Y)(X - Y^m) = X^(m+1) - X^m Y^m - X Y + Y^(m+1)
  std::map<std::pair<int, int>, long> want;
  int D = static_cast<int>(m + 1);
  want[{D, 0}] = 1;
  want[{static_cast<int>(m), static_cast<int>(m)}] = -1;
  want[{1, 1}] = -1;
  want[{0, D}] = 1;
  for (int i = 0; i <= D; ++i)
    for (int j = 0; j <= D; ++j) {
      Int diff = phi.coeff(i, j) - (want.count({i, j}) ? want[{i, j}] : 0);
      if (diff % m != 0) return false;
    }
  return true;
}

namespace {

std::vector<Rat> powers(const Rat& J, int n) {
  std::vector<Rat> p{Rat(1)};
  for (int i = 1; i <= n; ++i) p.push_back(p.back() * J);
  return p;
}

std::vector<CBall> powers(const CBall& J, int n) {
  std::vector<CBall> p{CBall::from_si(1, J.prec())};
  for (int i = 1; i <= n; ++i) p.push_back(p.back() * J);
  return p;
}

}  // namespace

Rat cm_tangent(const Rat& J, const ModularPolynomial& phi) {
  std::vector<Rat> p = powers(J, 2 * phi.degree);
  Rat fy = 0, fyy = 0, fxy = 0;
  for (const auto& [k, c] : phi.coeffs) {
    long i = k.first, j = k.second;
    if (j >= 1) fy += Rat(c * j) * p[i + j - 1];
    if (j >= 2) fyy += Rat(c * j * (j - 1)) * p[i + j - 2];
    if (i >= 1 && j >= 1) fxy += Rat(c * i * j) * p[i + j - 2];
  }
  if (fy == 0) throw ConsistencyFailure("cm_tangent: Phi_Y vanishes at (J, J)");
  return (fyy - fxy) / fy;
}

CBall cm_tangent(const CBall& J, const ModularPolynomial& phi) {
  mpfr_prec_t prec = J.prec();
  std::vector<CBall> p = powers(J, 2 * phi.degree);
  CBall fy = CBall::from_si(0, prec), fyy = fy, fxy = fy;
  for (const auto& [k, c] : phi.coeffs) {
    long i = k.first, j = k.second;
    if (j >= 1) fy = fy + p[i + j - 1] * RBall::from_int(c * j, prec);
    if (j >= 2) fyy = fyy + p[i + j - 2] * RBall::from_int(c * j * (j - 1), prec);
    if (i >= 1 && j >= 1) fxy = fxy + p[i + j - 2] * RBall::from_int(c * i * j, prec);
  }
  if (fy.re.contains_zero() && fy.im.contains_zero())
    throw ConsistencyFailure("cm_tangent: Phi_Y(J, J) cannot be separated from zero");
  return (fyy - fxy) / fy;
}

Rat masser_rhs(const Rat& J, const ModularPolynomial& phi) {
  if (J == 1728) throw InvalidInput("masser_rhs: J = 1728");
  return 6 * J * cm_tangent(J, phi) + 3 * J / (J - 1728) + 4;
}

CBall masser_rhs(const CBall& J, const ModularPolynomial& phi) {
  mpfr_prec_t prec = J.prec();
  CBall t = cm_tangent(J, phi);
  CBall a = mul_si(J * t, 6);
  CBall b = mul_si(J, 3) / (J - CBall::from_si(1728, prec));
  return a + b + CBall::from_si(4, prec);
}

CBall masser_e2star(const CBall& tau, const ModularPolynomial& phi, long bits) {
  QPoint z = make_qpoint(tau);
  EvalContext c1, c2, c3;
  c1.bits = c2.bits = c3.bits = bits;
  CBall J = eval_j(z, c1);
  CBall e4 = eval_e4(z, c2);
  CBall e6 = eval_e6(z, c3);
  return masser_rhs(J, phi) * e6 / e4;
}

CBall split_P_via_tangent(const CBall& tau, const ModularPolynomial& phi, long bits) {
  QPoint z = make_qpoint(tau);
  EvalContext c1, c2, c3;
  c1.bits = c2.bits = c3.bits = bits;
  CBall f = eval_f(z, c1);
  CBall tf = eval_theta_f(z, c2);
  CBall e2 = eval_e2(z, c3);
  RBall six = RBall::from_si(6, bits);
  CBall d = tf + (e2 * f) / six;  // Serre derivative of weight -2
  CBall e2s = masser_e2star(tau, phi, bits);
  return -d + (e2s * f) / six;
}

CBall split_P_via_tangent(const QuadForm& q, const ModularPolynomial& phi, long bits) {
  EvalPoint ep = evaluation_point(q);
  CMPoint cp = cm_point(ep.form, bits);
  CBall v = split_P_via_tangent(cp.value, phi, bits);
  return atkin_lehner_sign(ep.w) < 0 ? -v : v;
}

LevelModularEquation level6_modular_equation(long ell, bool use_cache) {
  if (ell != 5 && ell != 7 && ell != 11) throw InvalidInput("level-6 modular equations are provided for 5, 7, 11");
  LevelModularEquation out;
  out.ell = ell;
  {
    std::lock_guard<std::mutex> lock(cache_mutex);
    const std::string name = "phi6_" + std::to_string(ell);
    if (!(use_cache && load_cached(name, ell, out.phi))) {
      out.phi = modular_equation(hauptmodul_series, ell, 200);
      if (use_cache) store_cached(name, out.phi);
    } else {
      out.phi.certified_order = 200;  // established when the cache entry was written
    }
  }
  if (!out.phi.monic()) throw ConsistencyFailure("level-6 modular equation is not monic");
  Int g = 0;
  for (const Int& c : out.phi.coeff_in_y(0)) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
  out.a0_content = g;
  out.a0_valuation = valuation(g, ell);
  return out;
}

QSeries u_ell(const QSeries& s, long ell) {
  if (!s.integral_exponents()) throw InvalidInput("U_ell needs integral exponents");
  return s.u_op(ell);
}

}  // namespace cmpart
