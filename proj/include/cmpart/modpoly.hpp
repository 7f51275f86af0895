#pragma once

#include "cmpart/ball.hpp"
#include "cmpart/heegner.hpp"
#include "cmpart/qseries.hpp"

#include <functional>
#include <map>
#include <string>
#include <utility>

namespace cmpart {

// Phi(X, Y) = sum coeff(i, j) X^i Y^j with Phi(f(tau), f(m tau)) = 0 for a function f = q^-1 + O(1).
struct ModularPolynomial {
  long m = 0;
  int degree = 0;  // in each variable
  std::map<std::pair<int, int>, Int> coeffs;  // nonzero entries only
  long certified_order = 0;  // Phi(f(tau), f(m tau)) = O(q^certified_order) was checked

  Int coeff(int i, int j) const;
  bool symmetric() const;
  bool monic() const;  // coeff(degree, 0) = coeff(0, degree) = 1
  // Coefficient polynomial of Y^j as ascending coefficients in X.
  std::vector<Int> coeff_in_y(int j) const;
};

// psi(m) = m prod_{p | m} (1 + 1/p)
long psi(long m);

// Modular equation of prime index m for the function whose q-expansion is produced by
// `series` (argument: absolute truncation order). The identity is certified to q^order.
ModularPolynomial modular_equation(const std::function<QSeries(long)>& series, long m, long order);

// Classical Phi_m for prime m <= 23 (m = 23 needs allow_large). Cached on disk.
ModularPolynomial classical_modular_polynomial(long m, bool use_cache = true, bool allow_large = false);

// Phi(X, Y) = (X^m - Y)(X - Y^m) mod m.
bool kronecker_congruence(const ModularPolynomial& phi);

// (Phi_YY - Phi_XY) / Phi_Y at (J, J); throws ConsistencyFailure when Phi_Y(J, J) = 0.
Rat cm_tangent(const Rat& J, const ModularPolynomial& phi);
CBall cm_tangent(const CBall& J, const ModularPolynomial& phi);

// Weight-corrected Masser identity: (E2* E4 / E6)(alpha) = 6 J T + 3 J / (J - 1728) + 4 with
// T = cm_tangent(J, Phi_|disc|).
Rat masser_rhs(const Rat& J, const ModularPolynomial& phi);
CBall masser_rhs(const CBall& J, const ModularPolynomial& phi);

// E2*(tau) reconstructed from the tangent: masser_rhs(j(tau)) E6(tau) / E4(tau).
CBall masser_e2star(const CBall& tau, const ModularPolynomial& phi, long bits);

// P(tau) = -D_{-2}F(tau) + F(tau) E2*(tau) / 6 with E2* taken from masser_e2star.
CBall split_P_via_tangent(const CBall& tau, const ModularPolynomial& phi, long bits);
// Same at the Heegner point of Q (discriminant 1 - 24n), evaluated at its reduced point.
CBall split_P_via_tangent(const QuadForm& q, const ModularPolynomial& phi, long bits);

struct LevelModularEquation {
  long ell = 0;
  ModularPolynomial phi;  // in X = t(tau), Y = t(ell tau)
  Int a0_content;          // content of A_0(X) = Phi(X, 0)
  int a0_valuation = 0;    // v_ell(a0_content)
};

// Level-6 modular equation of prime index ell in {5, 7, 11}, certified to q^200.
LevelModularEquation level6_modular_equation(long ell, bool use_cache = true);

QSeries u_ell(const QSeries& s, long ell);

// Cache text format: "cmpart-modpoly 1", "m degree", then "i j coefficient" lines.
std::string modpoly_to_text(const ModularPolynomial& phi);
ModularPolynomial modpoly_from_text(const std::string& text);

}  // namespace cmpart
