#include "cmpart/heegner.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace cmpart {

namespace {

bool is_fundamental(long d) {
  long m = mod(d, 4);
  if (m == 1) {
    for (auto [p, e] : factorize(d))
      if (e > 1) return false;
    return true;
  }
  if (m != 0) return false;
  long q = d / 4;
  long mq = mod(q, 4);
  if (mq != 2 && mq != 3) return false;
  for (auto [p, e] : factorize(q))
    if (e > 1) return false;
  return true;
}

long isqrt(long n) {
  long r = static_cast<long>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

long ext_gcd(long a, long b, long& x, long& y) {
  if (b == 0) {
    x = a >= 0 ? 1 : -1;
    y = 0;
    return std::abs(a);
  }
  long x1, y1;
  long g = ext_gcd(b, a % b, x1, y1);
  x = y1;
  y = x1 - (a / b) * y1;
  return g;
}

long floor_div(long a, long b) {
  long q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace

Discriminant discriminant_from_delta(long delta) {
  if (delta >= 0 || (mod(delta, 4) != 0 && mod(delta, 4) != 1))
    throw InvalidInput("discriminant must be negative and 0 or 1 mod 4");
  Discriminant d;
  d.delta = delta;
  d.factorization = factorize(-delta);
  // Largest f with delta/f^2 a discriminant that is fundamental.
  long best = 1;
  for (long f = 1; f * f <= -delta; ++f) {
    if (delta % (f * f)) continue;
    if (is_fundamental(delta / (f * f))) best = f;
  }
  d.conductor = best;
  d.fundamental = delta / (best * best);
  return d;
}

Discriminant discriminant_for(long n) {
  if (n < 1) throw InvalidInput("n must be a positive integer");
  Discriminant d = discriminant_from_delta(1 - 24 * n);
  d.n = n;
  return d;
}

QuadForm transform_root(const QuadForm& f, const Mat2& m) {
  const long A = f.a, B = f.b, C = f.c;
  const long p = m.p, q = m.q, r = m.r, s = m.s;
  long a = A * s * s - B * s * r + C * r * r;
  long b = -2 * A * s * q + B * (s * p + q * r) - 2 * C * r * p;
  long c = A * q * q - B * q * p + C * p * p;
  long g = std::gcd(std::gcd(a, b), c);
  if (g == 0) throw ConsistencyFailure("degenerate form transform");
  if (a < 0) g = -g;
  return {a / g, b / g, c / g};
}

ReducedForm sl2_reduce(const QuadForm& f) {
  if (f.a <= 0 || f.disc() >= 0) throw InvalidInput("sl2_reduce needs a positive definite form");
  QuadForm g = f;
  Mat2 total;
  const Mat2 S{0, -1, 1, 0};
  for (;;) {
    // translate so that -a < b <= a
    long k = -floor_div(g.a - g.b, 2 * g.a);
    if (k != 0) {
      Mat2 t{1, k, 0, 1};
      g = transform_root(g, t);
      total = t * total;
    }
    if (g.a > g.c) {
      g = transform_root(g, S);
      total = S * total;
      continue;
    }
    if (g.a == g.c && g.b < 0) {
      g = transform_root(g, S);
      total = S * total;
    }
    break;
  }
  return {g, total};
}

long class_number(long delta) {
  if (delta >= 0) throw InvalidInput("class_number needs a negative discriminant");
  long count = 0;
  long amax = isqrt(-delta / 3);
  for (long a = 1; a <= amax; ++a)
    for (long b = -a + 1; b <= a; ++b) {
      long num = b * b - delta;
      if (num % (4 * a)) continue;
      long c = num / (4 * a);
      if (c < a) continue;
      if ((a == c) && b < 0) continue;
      if (std::gcd(std::gcd(a, b), c) != 1) continue;
      ++count;
    }
  return count;
}

long class_number(const Discriminant& d) {
  long total = 0;
  for (long g = 1; g * g <= -d.delta; ++g)
    if (d.delta % (g * g) == 0 && mod(d.delta / (g * g), 4) <= 1) total += class_number(d.delta / (g * g));
  return total;
}

Rat hurwitz_class_number(long N) {
  if (N <= 0 || (mod(-N, 4) != 0 && mod(-N, 4) != 1)) throw InvalidInput("hurwitz_class_number: bad N");
  Rat h = 0;
  long amax = isqrt(N / 3);
  for (long a = 1; a <= amax; ++a)
    for (long b = -a + 1; b <= a; ++b) {
      long num = b * b + N;
      if (num % (4 * a)) continue;
      long c = num / (4 * a);
      if (c < a) continue;
      if (a == c && b < 0) continue;
      if (b == 0 && a == c)
        h += Rat(1, 2);
      else if (a == b && b == c)
        h += Rat(1, 3);
      else
        h += 1;
    }
  return h;
}

std::vector<QuadForm> enumerate_classes(const Discriminant& d) {
  const long delta = d.delta;
  if (mod(delta, 24) != 1 || delta >= 0) throw InvalidInput("enumerate_classes needs delta < 0, delta = 1 mod 24");
  const long h = class_number(d);
  std::vector<QuadForm> out;
  std::set<std::pair<long, QuadForm>> seen;
  for (long a = 6; a <= 6 * (-delta); a += 6) {
    for (long b = 1; b < 2 * a; b += 12) {
      long num = b * b - delta;
      if (num % (4 * a)) continue;
      long c = num / (4 * a);
      long g = std::gcd(std::gcd(a, b), c);
      QuadForm f{a, b, c};
      if (seen.insert({g, sl2_reduce(f).form}).second) out.push_back(f);
    }
    if (static_cast<long>(out.size()) == h) return out;
  }
  throw ConsistencyFailure("enumerate_classes: scan exhausted before reaching the class number");
}

Mat2 atkin_lehner_matrix(int w) {
  switch (w) {
    case AL_W2:
      return {2, 1, 6, 4};
    case AL_W3:
      return {3, 1, 6, 3};
    case AL_W6:
      return {0, -1, 6, 0};
    default:
      return {};
  }
}

namespace {

// Best Gamma0(6) move: minimise the leading coefficient a*s^2 - b*s*r + c*r^2 over
// coprime (r, s) with 6 | r.
QuadForm gamma0_6_reduce(const QuadForm& f) {
  QuadForm best = f;
  const long D = -f.disc();
  for (long k = 1; 9 * k * k * D < best.a * best.a; ++k) {
    long r = 6 * k;
    double s0 = static_cast<double>(f.b) * r / (2.0 * f.a);
    long base = static_cast<long>(std::llround(s0));
    for (long ds = -8; ds <= 8; ++ds) {
      long s = base + ds;
      if (std::gcd(s, r) != 1) continue;
      long a = f.a * s * s - f.b * s * r + f.c * r * r;
      if (a >= best.a) continue;
      long x, y;
      ext_gcd(s, r, x, y);  // x s + y r = 1
      Mat2 g{x, -y, r, s};  // det = x s + y r = 1
      best = transform_root(f, g);
    }
  }
  return best;
}

}  // namespace

EvalPoint evaluation_point(const QuadForm& form) {
  // an imprimitive form has the same root as its primitive part
  long g = std::gcd(std::gcd(form.a, form.b), form.c);
  const QuadForm f{form.a / g, form.b / g, form.c / g};
  EvalPoint cur{gamma0_6_reduce(f), AL_ID};
  for (;;) {
    EvalPoint best = cur;
    for (int w : {AL_W2, AL_W3, AL_W6}) {
      QuadForm g = gamma0_6_reduce(transform_root(cur.form, atkin_lehner_matrix(w)));
      if (g.a < best.form.a) best = {g, cur.w ^ w};
    }
    if (best.form.a >= cur.form.a) break;
    cur = best;
  }
  if (cur.form.disc() != f.disc()) throw ConsistencyFailure("evaluation_point changed the discriminant");
  return cur;
}

}  // namespace cmpart
