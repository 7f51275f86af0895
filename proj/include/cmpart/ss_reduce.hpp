#pragma once

#include "cmpart/brandt.hpp"
#include "cmpart/cm_trace.hpp"
#include "cmpart/finite_field.hpp"

#include <map>
#include <string>
#include <vector>

namespace cmpart {

// Is the curve with invariant j supersingular? (trace of Frobenius over F_{l^2} is 0 mod l)
bool is_supersingular(Fq2::E j, const Fq2& K);

// All supersingular j in F_{l^2}, sorted.
std::vector<Fq2::E> supersingular_js(long ell);

struct SupersingularPoint {
  long ell = 0;
  long id = 0;
  Fq2::E t;  // Hauptmodul value
  Fq2::E j;
  long weight = 2;  // #Aut(E, C)
  long frobenius_partner = 0;
};

// Points of X0(6) over the supersingular locus: the roots of num(t) - j den(t) for each supersingular j.
std::vector<SupersingularPoint> supersingular_points_X06(long ell);

struct ReducedClassPolynomial {
  long n = 0, ell = 0, delta = 0;
  bool scaled = false;  // true: the reduced polynomial is prod (x - delta P); false: delta H_n
  PolyP poly;
  Factorization factorization;
  std::string text() const { return factorization_to_string(factorization); }
};

// delta H_n mod ell when ell does not divide delta, otherwise the scaled polynomial H^_n.
ReducedClassPolynomial reduce_class_polynomial(long n, long ell);

// Reduction of z = u + v w with w = (1 + sqrt(D0)) / 2 at the prime above ell picked by root_w.
Fq2::E reduce_quadratic(const QuadInt& z, Fq2::E root_w, const Fq2& K);
// Image of w in F_{l^2}: a root of x^2 - x + (1 - D0)/4.
Fq2::E omega_image(long D0, const Fq2& K);

struct FiberEntry {
  long point = -1;       // index into ReductionReport::points
  long h = 0;            // number of CM classes reducing to this point
  bool has_value = false;
  Fq2::E p_tilde;        // reduction of P (or of delta P when ell | delta)
};

struct ReductionReport {
  long n = 0, ell = 0, delta = 0, h = 0;
  int kronecker = 0;  // (delta / ell)
  std::vector<SupersingularPoint> points;
  ReducedClassPolynomial reduced;
  std::vector<QuadInt> shifts;                    // shifts in Z[w] that resolve the matching
  std::vector<FiberEntry> fibers;                 // one per supersingular point
  std::vector<Fq2::E> class_values;               // P~ of every CM class, grouped by point
  bool matchings_agree = true;                    // both shifts give the same pairing
  bool values_well_defined = true;                // one reduced value per point
  bool frobenius_equivariant = true;              // partner points carry conjugate values
  bool t_roots_supersingular = true;             // every reduced t is a supersingular point
  long fiber_sum() const;
  std::vector<long> h_fiber() const;
};

ReductionReport fiber_match(long n, long ell);

struct TraceVerdict {
  long n = 0, ell = 0;
  long p_mod_ell = 0;        // Euler p(n) mod ell
  Fq2::E rhs;                // -(1/delta) sum h P~
  bool holds = false;
  Fq2::E classwise_rhs;      // -(1/delta) sum over CM classes of P~ (no grouping by point)
  bool classwise_holds = false;
  ReductionReport report;
};

TraceVerdict verify_ss_trace(long n, long ell);
TraceVerdict verify_ss_trace(const ReductionReport& report);

struct DotProductVerdict {
  long n = 0, ell = 0;
  std::vector<long> hecke_primes;             // primes used to match classes with points
  long isomorphisms = 0;                      // graph isomorphisms found
  std::array<int, 3> orientation{};           // (c2, c3, c_ell) of the fitted oriented count
  Rat constant;                               // u_i = constant * h_fiber(sigma(i))
  std::vector<long> u;                        // oriented counts per class
  std::vector<long> sigma;                    // class i -> supersingular point sigma[i]
  Fq2::E pairing;                             // <u, v_P>
  bool pairing_rational = false;              // <u, v_P> lies in F_l
  long p_mod_ell = 0;
  bool holds = false;
  std::string diagnostic;
};

DotProductVerdict verify_dot_product(long n, long ell);
DotProductVerdict verify_dot_product(const ReductionReport& report, const BrandtData& brandt);

struct RamifiedReport {
  long n = 0, ell = 0, delta = 0;
  bool roots_supersingular = false;    // every CM point reduces to a supersingular point of X0(6)
  int trace_valuation = 0;             // v_ell((24n - 1) p(n))
  int p_valuation = 0;                 // v_ell(p(n))
  bool p_divisible = false;
  std::vector<long> h_fiber;
  bool fibers_divisible = false;       // ell | h_fiber for every point
  ReductionReport report;
};

RamifiedReport ramified_grouping_check(long n, long ell);

// Smallest prime >= 5 with (delta_n / ell) = -1.
long auto_inert_prime(long n, long start = 5);

std::string report_to_json(const ReductionReport& r, const TraceVerdict* ss, const DotProductVerdict* dot);

}  // namespace cmpart
