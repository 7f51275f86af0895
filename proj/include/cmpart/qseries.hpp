#pragma once

#include "cmpart/ball.hpp"
#include "cmpart/heegner.hpp"
#include "cmpart/series.hpp"

#include <array>
#include <string>
#include <vector>

namespace cmpart {

// ---- exact q-expansions; N is the absolute truncation order (exponents < N are kept) ----

QSeries eta_series(long d, long N);
QSeries e2_series(long N);
QSeries e2_scaled(long d, long N);
QSeries e4_series(long N);
QSeries e6_series(long N);
QSeries delta_series(long N);  // eta^24
QSeries j_series(long N);
QSeries f_series(long N);  // the weight -2 form q^-1 - 10 - 29q - ...

// ---- eta quotients of level 6 and the Hauptmodul ----

struct EtaQuotient {
  std::string name;
  std::array<long, 4> r{};  // exponents of eta(d tau) for d = 1, 2, 3, 6
};

inline constexpr std::array<long, 4> kLevel6Divisors{1, 2, 3, 6};

// Orders (in local uniformizers) at the cusps 1/1 (= 0), 1/2, 1/3, 1/6 (= infinity).
std::array<Rat, 4> cusp_orders(const EtaQuotient& e);
bool is_level6_function(const EtaQuotient& e);  // weight 0, Gamma0(6)-invariant
long pole_degree(const EtaQuotient& e);          // total pole order over the cusps

QSeries eta_quotient_series(const EtaQuotient& e, long N);

struct HauptmodulCheck {
  EtaQuotient candidate;
  std::array<Rat, 4> orders;
  bool modular = false;
  long degree = 0;
  bool accepted = false;
};

// Valence check over a small catalog; the first candidate with a single simple pole at
// infinity is chosen.
const std::vector<HauptmodulCheck>& hauptmodul_catalog();
const EtaQuotient& hauptmodul();
QSeries hauptmodul_series(long N);

// j = num(t) / den(t) for the chosen Hauptmodul (integer coefficients, ascending degree).
struct HauptmodulRelation {
  std::vector<Int> num;
  std::vector<Int> den;
  // Atkin-Lehner action t o W = (a t + b) / (c t + d), indexed by AL_W2, AL_W3, AL_W6.
  std::array<std::array<long, 4>, 4> atkin_lehner{};
  // values of t at the cusps 0, 1/2, 1/3
  std::array<long, 3> cusp_values{};
};
const HauptmodulRelation& hauptmodul_relation();

// ---- certified evaluation ----

// Coefficient envelope |c_i| <= C i^k e^(4 pi sqrt(i)) for i >= 1, C fitted over the
// known coefficients with a safety factor 4.
struct Envelope {
  double log2C = 0;
  int k = 0;
};
Envelope fit_envelope(const QSeries& s, int k);

// Process-wide truncation override (--terms); 0 restores automatic selection.
long default_terms();
void set_default_terms(long n);

struct EvalContext {
  long bits = 256;
  long n_terms = default_terms();  // 0 selects the smallest N meeting the tail target
  double tail_log2 = 0;  // output: log2 of the certified truncation bound that was used
  long terms_used = 0;   // output
};

// q = e^(2 pi i tau) together with Im(tau).
struct QPoint {
  CBall tau;
  RBall im;
  CBall q;
  double log2_absq = 0;
};
QPoint make_qpoint(const CBall& tau);

// Value of the completed series at tau: truncated sum plus the envelope tail bound.
CBall evaluate(const QSeries& s, const Envelope& env, const QPoint& z, EvalContext& ctx);

// Named evaluations with process-wide memoized series grown on demand.
CBall eval_eta(long d, const QPoint& z, EvalContext& ctx);
CBall eval_e2(const QPoint& z, EvalContext& ctx);
CBall eval_e4(const QPoint& z, EvalContext& ctx);
CBall eval_e6(const QPoint& z, EvalContext& ctx);
CBall eval_j(const QPoint& z, EvalContext& ctx);
CBall eval_f(const QPoint& z, EvalContext& ctx);
CBall eval_theta_f(const QPoint& z, EvalContext& ctx);
CBall eval_hauptmodul(const QPoint& z, EvalContext& ctx);

// P(tau) = -(q d/dq F)(tau) - F(tau) / (2 pi Im tau)
CBall eval_P(const QPoint& z, EvalContext& ctx);
// -D_{-2}F + E2* F / 6 with D_{-2}F = q F' + E2 F / 6 (Serre derivative of weight -2)
CBall eval_P_split(const QPoint& z, EvalContext& ctx);
// E2*(tau) = E2(tau) - 3 / (pi Im tau)
CBall e2_star(const QPoint& z, EvalContext& ctx);

// Atkin-Lehner eigenvalues of F (and P) for AL_W2, AL_W3, AL_W6.
int atkin_lehner_sign(int w);

// Point of the upper half plane as a ball: (-b + i sqrt|disc|) / (2a).
CBall form_root(const QuadForm& f, long bits);

struct CMPoint {
  QuadForm form;
  CBall value;
  Rat imag_lower_bound;  // floor(sqrt|disc|) / (2a)
};
CMPoint cm_point(const QuadForm& f, long bits);

}  // namespace cmpart
