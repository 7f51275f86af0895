#pragma once

#include "cmpart/common.hpp"

#include <array>
#include <compare>
#include <vector>

namespace cmpart {

struct Discriminant {
  long n = 0;  // 0 when built from an arbitrary discriminant
  long delta = 0;
  long fundamental = 0;
  long conductor = 1;
  std::vector<std::pair<long, int>> factorization;  // of |delta|
};

Discriminant discriminant_for(long n);
// Any negative discriminant (delta = 0 or 1 mod 4).
Discriminant discriminant_from_delta(long delta);

struct QuadForm {
  long a = 0, b = 0, c = 0;
  long disc() const { return b * b - 4 * a * c; }
  auto operator<=>(const QuadForm&) const = default;
};

// Integer matrix [[p, q], [r, s]] acting on the upper half plane by Moebius transformation.
struct Mat2 {
  long p = 1, q = 0, r = 0, s = 1;
  long det() const { return p * s - q * r; }
  Mat2 operator*(const Mat2& o) const {
    return {p * o.p + q * o.r, p * o.q + q * o.s, r * o.p + s * o.r, r * o.q + s * o.s};
  }
};

// The primitive positive form whose upper-half-plane root is M applied to the root of f.
QuadForm transform_root(const QuadForm& f, const Mat2& m);

struct ReducedForm {
  QuadForm form;
  Mat2 transform;  // transform_root(original, transform) == form
};

// Gauss reduction |b| <= a <= c (b >= 0 when |b| = a or a = c).
ReducedForm sl2_reduce(const QuadForm& f);

// One representative [a, b, c] (a = 0 mod 6, b = 1 mod 12, 0 < b < 2a, smallest a first) per
// Gamma0(6)-class. Imprimitive forms g [a', b', c'] with g^2 | delta are included: the trace
// formula needs them for non-fundamental discriminants.
std::vector<QuadForm> enumerate_classes(const Discriminant& d);

// Number of Gamma0(6)-classes returned by enumerate_classes: sum of h(delta / g^2) over g^2 | delta.
long class_number(const Discriminant& d);
// Count of SL2(Z)-reduced primitive forms of discriminant delta.
long class_number(long delta);

// Hurwitz class number H(N) for N > 0, N = 0 or 3 mod 4: forms weighted by 1/2 and 1/3
// for classes equivalent to multiples of x^2+y^2 and x^2+xy+y^2 respectively.
Rat hurwitz_class_number(long N);

// Atkin-Lehner bookkeeping. Bit 0 records W_2, bit 1 records W_3; W_6 = W_2 W_3.
enum AtkinLehner : int { AL_ID = 0, AL_W2 = 1, AL_W3 = 2, AL_W6 = 3 };
Mat2 atkin_lehner_matrix(int w);

struct EvalPoint {
  QuadForm form;  // root of this form is gamma * W * alpha_Q for some gamma in Gamma0(6)
  int w = AL_ID;
};

// Moves a Heegner point by Gamma0(6) and the Atkin-Lehner involutions to an equivalent
// point with the smallest possible leading coefficient (largest imaginary part).
EvalPoint evaluation_point(const QuadForm& f);

}  // namespace cmpart
