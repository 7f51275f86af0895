#pragma once

#include "cmpart/ball.hpp"
#include "cmpart/heegner.hpp"
#include "cmpart/qseries.hpp"

#include <vector>

namespace cmpart {

struct SingularModuli {
  std::vector<QuadForm> forms;
  std::vector<EvalPoint> points;
  std::vector<CBall> values;  // P(alpha_Q), same order as forms
  long bits = 0;
  long terms_used = 0;
};

// P at every Heegner class of discriminant 1 - 24n.
SingularModuli singular_moduli(long n, long bits);

struct TraceResult {
  long n = 0;
  long delta = 0;
  long h = 0;
  CBall numeric_trace;
  Int exact_trace;
  Int p_of_n;
  long bits_used = 0;
  long terms_used = 0;
};

long initial_bits(long n);
TraceResult trace(long n, long start_bits = 0, int max_rounds = 8);

struct ClassPolynomial {
  long n = 0;
  long delta = 0;
  long h = 0;
  std::vector<Rat> H;         // ascending coefficients of prod (x - P(alpha_Q))
  std::vector<Int> H_scaled;  // ascending coefficients of prod (x - delta P(alpha_Q))
  long bits_used = 0;
  long terms_used = 0;
};

ClassPolynomial class_polynomial(long n, long start_bits = 0, int max_rounds = 8);

// Product of (x - v) over balls, ascending coefficients.
std::vector<CBall> ball_poly_from_roots(const std::vector<CBall>& roots);

// Values of the Hauptmodul t at the original CM points alpha_Q (via the Atkin-Lehner action).
std::vector<CBall> hauptmodul_values(const SingularModuli& sm);

// Element u + v w of Z[w], w = (1 + sqrt(D0)) / 2 for the fundamental discriminant D0.
struct QuadInt {
  Int u, v;
  bool operator==(const QuadInt&) const = default;
};

// Recognizes a ball as an element of Z[w]; throws PrecisionFailure if not unique.
QuadInt recognize_quadratic_integer(const CBall& z, long D0);

// Coefficients in Z[w] of prod (x - (t(alpha_Q) + c delta P(alpha_Q))), ascending, for shifts
// c = u + v w in Z[w].
struct JointPolynomial {
  QuadInt shift;
  std::vector<QuadInt> coeffs;
};
std::vector<JointPolynomial> joint_polynomials(long n, const std::vector<QuadInt>& shifts, long start_bits = 0,
                                               int max_rounds = 8);
std::vector<JointPolynomial> joint_polynomials(long n, const std::vector<long>& shifts, long start_bits = 0,
                                               int max_rounds = 8);

}  // namespace cmpart
