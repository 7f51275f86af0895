#pragma once

#include "cmpart/common.hpp"

#include <string>
#include <vector>

namespace cmpart {

// Prime field F_p with elements stored as canonical residues in [0, p).
struct Fp {
  long p;
  explicit Fp(long prime);
  long red(long a) const { return mod(a, p); }
  long red(const Int& a) const;
  long red(const Rat& a) const;  // denominator must be a unit
  long add(long a, long b) const { return (a + b) % p; }
  long sub(long a, long b) const { return mod(a - b, p); }
  long mul(long a, long b) const { return (a * b) % p; }
  long neg(long a) const { return a ? p - a : 0; }
  long pow(long a, long e) const;
  long inv(long a) const;
  bool is_square(long a) const;
  long sqrt(long a) const;  // a must be a square
  long least_nonresidue() const;
};

// F_{l^2} = F_l[x] / (x^2 - r) with r the least positive quadratic nonresidue.
struct Fq2 {
  struct E {
    long a = 0, b = 0;  // a + b x
    auto operator<=>(const E&) const = default;
  };

  explicit Fq2(long ell);
  Fp base;
  long r;

  long ell() const { return base.p; }
  E make(long a, long b = 0) const { return {base.red(a), base.red(b)}; }
  E add(E u, E v) const { return {base.add(u.a, v.a), base.add(u.b, v.b)}; }
  E sub(E u, E v) const { return {base.sub(u.a, v.a), base.sub(u.b, v.b)}; }
  E neg(E u) const { return {base.neg(u.a), base.neg(u.b)}; }
  E mul(E u, E v) const;
  E scale(E u, long k) const { return {base.mul(u.a, base.red(k)), base.mul(u.b, base.red(k))}; }
  E pow(E u, Int e) const;
  E inv(E u) const;
  E frob(E u) const { return {u.a, base.neg(u.b)}; }
  long trace(E u) const { return base.add(u.a, u.a); }
  long norm(E u) const;
  bool is_zero(E u) const { return u.a == 0 && u.b == 0; }
  bool in_prime_field(E u) const { return u.b == 0; }
  bool is_square(E u) const;
  E sqrt(E u) const;  // any square root (u must be a square)
  // A root of x^2 - t x + n; the one with the smaller (a, b) when both lie in the field.
  E quadratic_root(long t, long n) const;
  std::vector<E> elements() const;
  std::string to_string(E u) const;
};

// Polynomials over F_p, ascending coefficients, trimmed (zero polynomial = empty).
using PolyP = std::vector<long>;

PolyP poly_trim(PolyP f);
PolyP poly_from_ints(const std::vector<Int>& c, const Fp& F);
PolyP poly_from_rats(const std::vector<Rat>& c, const Fp& F);
PolyP poly_mul(const PolyP& f, const PolyP& g, const Fp& F);
PolyP poly_sub(const PolyP& f, const PolyP& g, const Fp& F);
void poly_divmod(const PolyP& f, const PolyP& g, PolyP& q, PolyP& r, const Fp& F);
PolyP poly_gcd(PolyP f, PolyP g, const Fp& F);
PolyP poly_monic(const PolyP& f, const Fp& F);
PolyP poly_powmod(PolyP base, Int e, const PolyP& m, const Fp& F);
PolyP poly_derivative(const PolyP& f, const Fp& F);

struct Factorization {
  long unit = 0;                                   // leading coefficient
  std::vector<std::pair<PolyP, int>> factors;       // monic irreducibles with multiplicity, sorted
};

// Square-free, distinct-degree and Cantor-Zassenhaus equal-degree factorization.
Factorization factor(const PolyP& f, const Fp& F);
std::string poly_to_string(const PolyP& f);
std::string factorization_to_string(const Factorization& fac);

// Polynomials over F_{l^2}.
using PolyQ = std::vector<Fq2::E>;
Fq2::E poly_eval(const PolyQ& f, Fq2::E x, const Fq2& K);
// Roots in F_{l^2} with multiplicities (exhaustive; l is small).
std::vector<std::pair<Fq2::E, int>> roots_with_multiplicity(PolyQ f, const Fq2& K);

}  // namespace cmpart
