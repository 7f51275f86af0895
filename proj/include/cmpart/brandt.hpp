#pragma once

#include "cmpart/finite_field.hpp"
#include "cmpart/quaternion.hpp"

#include <map>
#include <string>
#include <vector>

namespace cmpart {

struct QuaternionAlgebra {
  long ell = 0;
  Algebra A;
  std::vector<long> ramified;  // -1 stands for the real place
  Lattice maximal;             // a maximal order
};

QuaternionAlgebra quaternion_algebra(long ell);

struct EichlerOrder {
  long ell = 0;
  long level = 1;  // 1 or 6
  Algebra A;
  Lattice maximal;
  Lattice order;
  RatMat4 gram;  // trd(b_i conj b_j); nrd(sum c_i b_i) = c^T gram c / 2
  Int reduced_discriminant;
};

EichlerOrder eichler_order(const QuaternionAlgebra& B, long level);

// (ell - 1) psi(level) / 24
Rat eichler_mass(long ell, long level);

struct IdealClassSet {
  EichlerOrder R;
  std::vector<Lattice> ideals;        // right R-ideals, ideals[0] = R
  std::vector<Rat> norms;             // nrd(I_i)
  std::vector<Lattice> left_orders;   // O_i = O_L(I_i)
  std::vector<long> weights;          // #O_i^x (units including -1)
  Rat mass;                           // sum 1 / weights
  long s() const { return static_cast<long>(ideals.size()); }
};

// p-neighbour traversal from R until the mass formula is exhausted.
IdealClassSet ideal_classes(const EichlerOrder& R);

using RatMatrix = std::vector<std::vector<Rat>>;

struct BrandtMatrix {
  long m = 0;
  RatMatrix b;  // b_ij = #{x in I_i conj(I_j) : nrd x = m nrd(I_i) nrd(I_j)} / #O_j^x
};

// B(1), ..., B(m_max); one lattice enumeration per class pair.
std::vector<BrandtMatrix> brandt_matrices(const IdealClassSet& C, long m_max);
BrandtMatrix brandt_matrix(const IdealClassSet& C, long m);

RatMatrix mat_mul(const RatMatrix& x, const RatMatrix& y);

struct BrandtReport {
  bool identity = true;
  bool symmetry = true;   // w_j b_ij = w_i b_ji
  bool row_sums = true;   // sum_j b_ij(m) = sigma_1(m) for gcd(m, level ell) = 1
  bool hecke = true;      // commutativity, multiplicativity and the prime-power relations
  std::vector<std::string> failures;
  std::vector<std::string> relations_checked;
  bool ok() const { return identity && symmetry && row_sums && hecke; }
};

// Checks all structural invariants for matrices with index <= the size of `mats`.
BrandtReport check_brandt(const IdealClassSet& C, const std::vector<BrandtMatrix>& mats);

// A ring homomorphism from an order to F_p (p | level) or to F_{ell^2} (p = ell), stored by
// its values on the order's basis. Values in F_p have b = 0.
struct LocalCharacter {
  long p = 0;
  std::array<Fq2::E, 4> on_basis{};
};

Fq2::E apply_character(const LocalCharacter& chi, const Lattice& order, const QElt& x, const Fq2& K);

// Orientation data for each class: the two homomorphisms to F_2 and F_3 (level 6 only) and one
// homomorphism to F_{ell^2}, transported from R to every left order O_i.
struct Orientations {
  std::vector<std::vector<LocalCharacter>> chi2, chi3;  // [class][choice], two choices each
  std::vector<LocalCharacter> chi_ell;                  // [class]
};

Orientations orientations(const IdealClassSet& C);

// x in O_i with trd x = t0 and nrd x = (t0^2 - delta)/4, t0 = delta mod 2.
std::vector<QElt> embedding_elements(const IdealClassSet& C, long i, long delta, bool optimal_only);

struct OrientedCounts {
  long delta = 0;
  // [class][c2][c3][c_ell]: number of optimal x with chi2[0](x) = c2, chi3[0](x) = c3 and
  // chi_ell(x) equal to the c_ell-th root of x^2 - t0 x + nrd mod ell (c_ell = 0 when ell | delta).
  std::vector<std::array<std::array<std::array<long, 2>, 2>, 2>> counts;
  std::vector<long> total;  // optimal x per class
  bool ell_ramified = false;
};

// Optimal embeddings of the order of discriminant delta (delta = 1 mod 24) into each O_i,
// split by local orientation. Units of O_i are +-1, so x and embeddings correspond bijectively.
OrientedCounts oriented_counts(const IdealClassSet& C, const Orientations& ori, long delta);

// For a fixed orientation (c2, c3, c_ell): the vector of counts over classes.
std::vector<long> oriented_vector(const OrientedCounts& oc, int c2, int c3, int c_ell);

// Theta route: number of y in Z + 2 O_i with trd y = 0 and nrd y = |delta| per class, then
// optimal counts by Moebius inversion over the conductor.
std::vector<long> theta_counts(const IdealClassSet& C, long i, long abs_delta_max);
std::vector<long> embedding_vector(const IdealClassSet& C, long delta);

// sum_i #{x : trd t0, nrd (t0^2 - delta)/4} / (#O_i^x / 2), to be compared with H(|delta|).
Rat hurwitz_sum(const IdealClassSet& C, long delta);

// Optimal embeddings up to O_i^x-conjugacy at level 1 (the Gross vector).
std::vector<Rat> gross_vector(const IdealClassSet& C, long delta);

struct EigenCheck {
  long m = 0;
  bool eigen = false;
  Rat eigenvalue;
};

// Is v an eigenvector of B(m)^T (the action on classes) for each m?
std::vector<EigenCheck> eigen_checks(const std::vector<BrandtMatrix>& mats, const std::vector<Rat>& v,
                                     const std::vector<long>& ms);

// Class data as JSON text: {ell, level, s, weights, gram_matrices, ideals, brandt: {m: rows}}.
std::string brandt_to_json(const IdealClassSet& C, const std::vector<BrandtMatrix>& mats);

// Cached ideal classes and Brandt matrices keyed by (ell, level) under cache_dir()/brandt.
struct BrandtData {
  IdealClassSet classes;
  std::vector<BrandtMatrix> mats;
};
BrandtData brandt_data(long ell, long level, long m_max, bool use_cache = true);

}  // namespace cmpart
