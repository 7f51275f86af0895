#pragma once

#include "cmpart/common.hpp"

#include <array>
#include <vector>

namespace cmpart {

using QElt = std::array<Rat, 4>;  // x0 + x1 i + x2 j + x3 k
using RatMat4 = std::array<std::array<Rat, 4>, 4>;

// Quaternion algebra (a, b): i^2 = a, j^2 = b, ij = -ji = k.
struct Algebra {
  long a = -1, b = -1;
  QElt mul(const QElt& x, const QElt& y) const;
  QElt conj(const QElt& x) const { return {x[0], -x[1], -x[2], -x[3]}; }
  Rat nrd(const QElt& x) const;
  Rat trd(const QElt& x) const { return 2 * x[0]; }
  // trd(x conj(y)), the bilinear form with nrd(x) = bil(x, x) / 2
  Rat bil(const QElt& x, const QElt& y) const;
};

QElt qelt(long x0, long x1 = 0, long x2 = 0, long x3 = 0);
QElt scale(const QElt& x, const Rat& c);
QElt add(const QElt& x, const QElt& y);
QElt sub(const QElt& x, const QElt& y);

// Hilbert symbol (a, b)_p for p prime or p = -1 (the real place).
int hilbert_symbol(long a, long b, long p);
// Places where (a, b) ramifies, among -1 and the primes dividing 2ab.
std::vector<long> ramified_places(const Algebra& A);

// Full-rank Z-lattice in the algebra, stored as a canonical (Hermite normal form) basis.
class Lattice {
 public:
  Lattice() = default;
  static Lattice from_generators(const std::vector<QElt>& gens);

  const std::array<QElt, 4>& basis() const { return basis_; }
  std::array<Rat, 4> coords(const QElt& x) const;
  bool contains(const QElt& x) const;
  bool contains(const Lattice& o) const;
  Rat covolume() const;  // |det| of the basis matrix
  QElt combo(const std::array<long, 4>& c) const;
  Lattice scaled(const Rat& c) const;
  bool operator==(const Lattice& o) const { return basis_ == o.basis_; }
  bool operator<(const Lattice& o) const;

 private:
  std::array<QElt, 4> basis_{};
  RatMat4 inv_{};  // coords = x * inv_
};

Lattice product(const Algebra& A, const Lattice& L1, const Lattice& L2);
Lattice conjugate(const Algebra& A, const Lattice& L);
Lattice dual(const Lattice& L);  // w.r.t. the coordinate dot product
Lattice intersect(const Lattice& L1, const Lattice& L2);
Lattice left_order(const Algebra& A, const Lattice& I);
Lattice right_order(const Algebra& A, const Lattice& I);
bool is_order(const Algebra& A, const Lattice& O);
// |det(trd(b_i b_j))|; equals (reduced discriminant)^2 for an order.
Rat discriminant(const Algebra& A, const Lattice& O);
Int reduced_discriminant(const Algebra& A, const Lattice& O);
// nrd(I) relative to the order R (square root of the covolume ratio).
Rat ideal_norm(const Lattice& R, const Lattice& I);
RatMat4 gram(const Algebra& A, const Lattice& L);

// LLL-reduced basis of L for the norm form.
std::array<QElt, 4> lll_basis(const Algebra& A, const Lattice& L);

// All x in L with nrd(x) <= bound (both x and -x), exactly verified.
std::vector<QElt> short_vectors(const Algebra& A, const Lattice& L, const Rat& bound);
// Number of x in L with nrd(x) = m for each m = 0..max_norm (after scaling norms by 1/scale).
std::vector<long> norm_counts(const Algebra& A, const Lattice& L, const Rat& scale, long max_norm);

long unit_count(const Algebra& A, const Lattice& O);

// B_{ell, infinity} with a standard maximal order.
struct MaximalOrderData {
  Algebra A;
  Lattice O;
};
MaximalOrderData maximal_order(long ell);

}  // namespace cmpart
