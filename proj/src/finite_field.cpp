#include "cmpart/finite_field.hpp"

#include <algorithm>
#include <random>

namespace cmpart {

Fp::Fp(long prime) : p(prime) {
  if (!is_prime(prime)) throw InvalidInput("Fp needs a prime modulus, got " + std::to_string(prime));
}

long Fp::red(const Int& a) const {
  Int r = a % p;
  if (r < 0) r += p;
  return r.get_si();
}

long Fp::red(const Rat& a) const {
  long d = red(Int(a.get_den()));
  if (d == 0) throw InvalidInput("denominator not invertible mod " + std::to_string(p));
  return mul(red(Int(a.get_num())), inv(d));
}

long Fp::pow(long a, long e) const {
  long r = 1 % p;
  a = red(a);
  while (e > 0) {
    if (e & 1) r = mul(r, a);
    a = mul(a, a);
    e >>= 1;
  }
  return r;
}

long Fp::inv(long a) const {
  a = red(a);
  if (a == 0) throw InvalidInput("inverse of zero in F_" + std::to_string(p));
  return pow(a, p - 2);
}

bool Fp::is_square(long a) const {
  a = red(a);
  return a == 0 || p == 2 || pow(a, (p - 1) / 2) == 1;
}

long Fp::sqrt(long a) const {
  a = red(a);
  for (long x = 0; x < p; ++x)
    if (mul(x, x) == a) return x;
  throw InvalidInput("not a square mod " + std::to_string(p));
}

long Fp::least_nonresidue() const {
  for (long r = 2; r < p; ++r)
    if (!is_square(r)) return r;
  throw InvalidInput("no nonresidue mod " + std::to_string(p));
}

Fq2::Fq2(long ell) : base(ell), r(0) {
  if (ell == 2) throw InvalidInput("F_4 model not supported");
  r = base.least_nonresidue();
}

Fq2::E Fq2::mul(E u, E v) const {
  long a = base.add(base.mul(u.a, v.a), base.mul(r, base.mul(u.b, v.b)));
  long b = base.add(base.mul(u.a, v.b), base.mul(u.b, v.a));
  return {a, b};
}

Fq2::E Fq2::pow(E u, Int e) const {
  E acc{1 % ell(), 0};
  if (e < 0) {
    u = inv(u);
    e = -e;
  }
  while (e > 0) {
    if (mpz_odd_p(e.get_mpz_t())) acc = mul(acc, u);
    u = mul(u, u);
    e >>= 1;
  }
  return acc;
}

long Fq2::norm(E u) const { return base.sub(base.mul(u.a, u.a), base.mul(r, base.mul(u.b, u.b))); }

Fq2::E Fq2::inv(E u) const {
  long n = norm(u);
  if (n == 0) throw InvalidInput("inverse of zero in F_l^2");
  long ni = base.inv(n);
  E c = frob(u);
  return {base.mul(c.a, ni), base.mul(c.b, ni)};
}

bool Fq2::is_square(E u) const { return is_zero(u) || base.is_square(norm(u)); }

Fq2::E Fq2::sqrt(E u) const {
  for (const E& x : elements())
    if (mul(x, x) == u) return x;
  throw InvalidInput("not a square in F_l^2");
}

Fq2::E Fq2::quadratic_root(long t, long n) const {
  long d = base.sub(base.mul(t, t), base.mul(4, n));
  E s = sqrt(make(d));
  long half = base.inv(2);
  return {base.mul(base.add(base.red(t), s.a), half), base.mul(s.b, half)};
}

std::vector<Fq2::E> Fq2::elements() const {
  std::vector<E> out;
  out.reserve(ell() * ell());
  for (long a = 0; a < ell(); ++a)
    for (long b = 0; b < ell(); ++b) out.push_back({a, b});
  return out;
}

std::string Fq2::to_string(E u) const {
  if (u.b == 0) return std::to_string(u.a);
  return std::to_string(u.a) + "+" + std::to_string(u.b) + "x";
}

// ---- polynomials over F_p ----

PolyP poly_trim(PolyP f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
  return f;
}

PolyP poly_from_ints(const std::vector<Int>& c, const Fp& F) {
  PolyP f;
  for (const auto& x : c) f.push_back(F.red(x));
  return poly_trim(f);
}

PolyP poly_from_rats(const std::vector<Rat>& c, const Fp& F) {
  PolyP f;
  for (const auto& x : c) f.push_back(F.red(x));
  return poly_trim(f);
}

PolyP poly_mul(const PolyP& f, const PolyP& g, const Fp& F) {
  if (f.empty() || g.empty()) return {};
  PolyP h(f.size() + g.size() - 1, 0);
  for (std::size_t i = 0; i < f.size(); ++i)
    for (std::size_t j = 0; j < g.size(); ++j) h[i + j] = F.add(h[i + j], F.mul(f[i], g[j]));
  return poly_trim(h);
}

PolyP poly_sub(const PolyP& f, const PolyP& g, const Fp& F) {
  PolyP h(std::max(f.size(), g.size()), 0);
  for (std::size_t i = 0; i < h.size(); ++i)
    h[i] = F.sub(i < f.size() ? f[i] : 0, i < g.size() ? g[i] : 0);
  return poly_trim(h);
}

void poly_divmod(const PolyP& f, const PolyP& g, PolyP& q, PolyP& r, const Fp& F) {
  if (g.empty()) throw InvalidInput("polynomial division by zero");
  r = poly_trim(f);
  q.assign(r.size() >= g.size() ? r.size() - g.size() + 1 : 0, 0);
  long li = F.inv(g.back());
  while (r.size() >= g.size()) {
    long c = F.mul(r.back(), li);
    std::size_t s = r.size() - g.size();
    q[s] = c;
    for (std::size_t i = 0; i < g.size(); ++i) r[s + i] = F.sub(r[s + i], F.mul(c, g[i]));
    r = poly_trim(r);
  }
  q = poly_trim(q);
}

PolyP poly_monic(const PolyP& f, const Fp& F) {
  if (f.empty()) return f;
  long li = F.inv(f.back());
  PolyP g = f;
  for (auto& c : g) c = F.mul(c, li);
  return g;
}

PolyP poly_gcd(PolyP f, PolyP g, const Fp& F) {
  f = poly_trim(f);
  g = poly_trim(g);
  while (!g.empty()) {
    PolyP q, r;
    poly_divmod(f, g, q, r, F);
    f = g;
    g = r;
  }
  return poly_monic(f, F);
}

PolyP poly_powmod(PolyP base, Int e, const PolyP& m, const Fp& F) {
  PolyP acc{1}, q, r;
  poly_divmod(base, m, q, base, F);
  while (e > 0) {
    if (mpz_odd_p(e.get_mpz_t())) {
      poly_divmod(poly_mul(acc, base, F), m, q, r, F);
      acc = r;
    }
    poly_divmod(poly_mul(base, base, F), m, q, r, F);
    base = r;
    e >>= 1;
  }
  poly_divmod(acc, m, q, r, F);
  return r;
}

PolyP poly_derivative(const PolyP& f, const Fp& F) {
  PolyP d;
  for (std::size_t i = 1; i < f.size(); ++i) d.push_back(F.mul(F.red(static_cast<long>(i)), f[i]));
  return poly_trim(d);
}

namespace {

// p-th root of a polynomial whose derivative vanishes.
PolyP pth_root(const PolyP& f, const Fp& F) {
  PolyP g;
  for (std::size_t i = 0; i < f.size(); i += F.p) g.push_back(f[i]);
  return g;
}

void squarefree(const PolyP& f, int mult, std::vector<std::pair<PolyP, int>>& out, const Fp& F) {
  if (f.size() <= 1) return;
  PolyP d = poly_derivative(f, F);
  if (d.empty()) {
    squarefree(pth_root(f, F), mult * static_cast<int>(F.p), out, F);
    return;
  }
  PolyP c = poly_gcd(f, d, F), w, q, r;
  poly_divmod(f, c, w, r, F);
  int i = 1;
  while (w.size() > 1) {
    PolyP y = poly_gcd(w, c, F);
    PolyP z;
    poly_divmod(w, y, z, r, F);
    if (z.size() > 1) out.push_back({poly_monic(z, F), i * mult});
    w = y;
    poly_divmod(c, y, q, r, F);
    c = q;
    ++i;
  }
  if (c.size() > 1) squarefree(pth_root(c, F), mult * static_cast<int>(F.p), out, F);
}

void equal_degree(const PolyP& f, long d, std::vector<PolyP>& out, const Fp& F, std::mt19937_64& rng) {
  long n = static_cast<long>(f.size()) - 1;
  if (n == d) {
    out.push_back(poly_monic(f, F));
    return;
  }
  std::uniform_int_distribution<long> dist(0, F.p - 1);
  for (;;) {
    PolyP a(n, 0);
    for (auto& c : a) c = dist(rng);
    a = poly_trim(a);
    if (a.size() <= 1) continue;
    PolyP g;
    if (F.p == 2) {
      // trace map a + a^2 + ... + a^(2^(d-1))
      PolyP t = a, s = a, q, r;
      for (long i = 1; i < d; ++i) {
        t = poly_powmod(t, Int(2), f, F);
        s = poly_sub(s, poly_sub(PolyP{}, t, F), F);
      }
      g = poly_gcd(f, s, F);
    } else {
      Int e = (ipow(Int(F.p), d) - 1) / 2;
      PolyP b = poly_powmod(a, e, f, F);
      b = poly_sub(b, PolyP{1}, F);
      g = poly_gcd(f, b, F);
    }
    if (g.size() > 1 && g.size() < f.size()) {
      PolyP q, r;
      poly_divmod(f, g, q, r, F);
      equal_degree(g, d, out, F, rng);
      equal_degree(q, d, out, F, rng);
      return;
    }
  }
}

}  // namespace

Factorization factor(const PolyP& f0, const Fp& F) {
  PolyP f = poly_trim(f0);
  if (f.empty()) throw InvalidInput("cannot factor the zero polynomial");
  Factorization fac;
  fac.unit = f.back();
  f = poly_monic(f, F);
  std::vector<std::pair<PolyP, int>> sqf;
  squarefree(f, 1, sqf, F);
  std::mt19937_64 rng(12345);
  for (auto& [g, m] : sqf) {
    PolyP rest = g;
    PolyP xpow{0, 1};
    for (long d = 1; 2 * d <= static_cast<long>(rest.size()) - 1; ++d) {
      xpow = poly_powmod(xpow, Int(F.p), rest, F);
      PolyP h = poly_gcd(rest, poly_sub(xpow, PolyP{0, 1}, F), F);
      if (h.size() > 1) {
        std::vector<PolyP> parts;
        equal_degree(h, d, parts, F, rng);
        for (auto& p : parts) fac.factors.push_back({p, m});
        PolyP q, r;
        poly_divmod(rest, h, q, r, F);
        rest = q;
        PolyP q2;
        poly_divmod(xpow, rest, q2, xpow, F);
      }
    }
    if (rest.size() > 1) fac.factors.push_back({poly_monic(rest, F), m});
  }
  std::sort(fac.factors.begin(), fac.factors.end(), [](const auto& x, const auto& y) {
    if (x.first.size() != y.first.size()) return x.first.size() < y.first.size();
    return std::lexicographical_compare(x.first.rbegin(), x.first.rend(), y.first.rbegin(), y.first.rend());
  });
  return fac;
}

std::string poly_to_string(const PolyP& f) {
  if (f.empty()) return "0";
  std::string s;
  for (std::size_t i = f.size(); i-- > 0;) {
    if (f[i] == 0) continue;
    if (!s.empty()) s += " + ";
    if (i == 0 || f[i] != 1) s += std::to_string(f[i]);
    if (i > 0) s += (i == 1 ? "x" : "x^" + std::to_string(i));
  }
  return s;
}

std::string factorization_to_string(const Factorization& fac) {
  std::string s = fac.unit == 1 && !fac.factors.empty() ? "" : std::to_string(fac.unit);
  for (const auto& [g, m] : fac.factors) {
    s += "(" + poly_to_string(g) + ")";
    if (m > 1) s += "^" + std::to_string(m);
  }
  return s;
}

Fq2::E poly_eval(const PolyQ& f, Fq2::E x, const Fq2& K) {
  Fq2::E acc{0, 0};
  for (std::size_t i = f.size(); i-- > 0;) acc = K.add(K.mul(acc, x), f[i]);
  return acc;
}

std::vector<std::pair<Fq2::E, int>> roots_with_multiplicity(PolyQ f, const Fq2& K) {
  while (!f.empty() && K.is_zero(f.back())) f.pop_back();
  if (f.empty()) throw InvalidInput("roots of the zero polynomial");
  std::vector<std::pair<Fq2::E, int>> out;
  for (const auto& x : K.elements()) {
    int m = 0;
    while (f.size() > 1 && K.is_zero(poly_eval(f, x, K))) {
      // synthetic division by (X - x)
      PolyQ q(f.size() - 1);
      Fq2::E carry{0, 0};
      for (std::size_t i = f.size(); i-- > 1;) {
        carry = K.add(K.mul(carry, x), f[i]);
        q[i - 1] = carry;
      }
      f = q;
      ++m;
    }
    if (m) out.push_back({x, m});
  }
  return out;
}

}  // namespace cmpart
