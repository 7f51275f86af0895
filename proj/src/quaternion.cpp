#include "cmpart/quaternion.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace cmpart {

QElt Algebra::mul(const QElt& x, const QElt& y) const {
  const Rat A(a), B(b), AB(a * b);
  return {x[0] * y[0] + A * x[1] * y[1] + B * x[2] * y[2] - AB * x[3] * y[3],
          x[0] * y[1] + x[1] * y[0] - B * x[2] * y[3] + B * x[3] * y[2],
          x[0] * y[2] + x[2] * y[0] + A * x[1] * y[3] - A * x[3] * y[1],
          x[0] * y[3] + x[3] * y[0] + x[1] * y[2] - x[2] * y[1]};
}

Rat Algebra::nrd(const QElt& x) const {
  return x[0] * x[0] - a * x[1] * x[1] - b * x[2] * x[2] + Rat(a * b) * x[3] * x[3];
}

Rat Algebra::bil(const QElt& x, const QElt& y) const {
  return 2 * (x[0] * y[0] - a * x[1] * y[1] - b * x[2] * y[2] + Rat(a * b) * x[3] * y[3]);
}

QElt qelt(long x0, long x1, long x2, long x3) { return {Rat(x0), Rat(x1), Rat(x2), Rat(x3)}; }
QElt scale(const QElt& x, const Rat& c) { return {x[0] * c, x[1] * c, x[2] * c, x[3] * c}; }
QElt add(const QElt& x, const QElt& y) { return {x[0] + y[0], x[1] + y[1], x[2] + y[2], x[3] + y[3]}; }
QElt sub(const QElt& x, const QElt& y) { return {x[0] - y[0], x[1] - y[1], x[2] - y[2], x[3] - y[3]}; }

namespace {

int legendre(long a, long p) { return static_cast<int>(kronecker(Int(a), Int(p))); }

}  // namespace

int hilbert_symbol(long a, long b, long p) {
  if (a == 0 || b == 0) throw InvalidInput("hilbert_symbol needs nonzero entries");
  if (p == -1) return (a < 0 && b < 0) ? -1 : 1;
  long alpha = 0, beta = 0;
  while (a % p == 0) {
    a /= p;
    ++alpha;
  }
  while (b % p == 0) {
    b /= p;
    ++beta;
  }
  if (p == 2) {
    auto eps = [](long u) { return mod((u - 1) / 2, 2); };
    auto omega = [](long u) { return mod((u * u - 1) / 8, 2); };
    long e = eps(a) * eps(b) + alpha * omega(b) + beta * omega(a);
    return (e % 2) ? -1 : 1;
  }
  int s = ((alpha * beta) % 2 == 1 && (p % 4 == 3)) ? -1 : 1;
  if (beta % 2) s *= legendre(a, p);
  if (alpha % 2) s *= legendre(b, p);
  return s;
}

std::vector<long> ramified_places(const Algebra& A) {
  std::set<long> places{-1, 2};
  for (auto [p, e] : factorize(std::labs(A.a))) places.insert(p);
  for (auto [p, e] : factorize(std::labs(A.b))) places.insert(p);
  std::vector<long> out;
  for (long p : places)
    if (hilbert_symbol(A.a, A.b, p) == -1) out.push_back(p);
  return out;
}

// ---- lattices ----

namespace {

using IntRow = std::array<Int, 4>;

std::vector<IntRow> hnf(std::vector<IntRow> A) {
  std::size_t r0 = 0;
  for (int col = 0; col < 4; ++col) {
    std::size_t piv = A.size();
    for (std::size_t i = r0; i < A.size(); ++i)
      if (A[i][col] != 0) {
        piv = i;
        break;
      }
    if (piv == A.size()) continue;
    std::swap(A[r0], A[piv]);
    for (std::size_t i = r0 + 1; i < A.size(); ++i) {
      while (A[i][col] != 0) {
        Int q;
        mpz_fdiv_q(q.get_mpz_t(), A[r0][col].get_mpz_t(), A[i][col].get_mpz_t());
        for (int c = 0; c < 4; ++c) A[r0][c] -= q * A[i][c];
        std::swap(A[r0], A[i]);
      }
    }
    if (A[r0][col] < 0)
      for (auto& v : A[r0]) v = -v;
    for (std::size_t i = 0; i < r0; ++i) {
      Int q;
      mpz_fdiv_q(q.get_mpz_t(), A[i][col].get_mpz_t(), A[r0][col].get_mpz_t());
      if (q != 0)
        for (int c = 0; c < 4; ++c) A[i][c] -= q * A[r0][c];
    }
    ++r0;
  }
  A.resize(r0);
  return A;
}

bool invert(RatMat4 m, RatMat4& inv) {
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) inv[i][j] = (i == j) ? 1 : 0;
  for (int c = 0; c < 4; ++c) {
    int p = c;
    while (p < 4 && m[p][c] == 0) ++p;
    if (p == 4) return false;
    std::swap(m[p], m[c]);
    std::swap(inv[p], inv[c]);
    Rat f = 1 / m[c][c];
    for (int j = 0; j < 4; ++j) {
      m[c][j] *= f;
      inv[c][j] *= f;
    }
    for (int r = 0; r < 4; ++r) {
      if (r == c || m[r][c] == 0) continue;
      Rat g = m[r][c];
      for (int j = 0; j < 4; ++j) {
        m[r][j] -= g * m[c][j];
        inv[r][j] -= g * inv[c][j];
      }
    }
  }
  return true;
}

Rat det4(RatMat4 m) {
  Rat d = 1;
  for (int c = 0; c < 4; ++c) {
    int p = c;
    while (p < 4 && m[p][c] == 0) ++p;
    if (p == 4) return 0;
    if (p != c) {
      std::swap(m[p], m[c]);
      d = -d;
    }
    d *= m[c][c];
    for (int r = c + 1; r < 4; ++r) {
      if (m[r][c] == 0) continue;
      Rat g = m[r][c] / m[c][c];
      for (int j = c; j < 4; ++j) m[r][j] -= g * m[c][j];
    }
  }
  return d;
}

RatMat4 to_mat(const std::array<QElt, 4>& b) {
  RatMat4 m;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) m[i][j] = b[i][j];
  return m;
}

Rat rat_sqrt(const Rat& q) {
  Int n, d;
  if (!mpz_perfect_square_p(q.get_num_mpz_t()) || !mpz_perfect_square_p(q.get_den_mpz_t()))
    throw ConsistencyFailure("ideal norm is not a rational square");
  mpz_sqrt(n.get_mpz_t(), q.get_num_mpz_t());
  mpz_sqrt(d.get_mpz_t(), q.get_den_mpz_t());
  return Rat(n, d);
}

}  // namespace

Lattice Lattice::from_generators(const std::vector<QElt>& gens) {
  Int den = 1;
  for (const auto& g : gens)
    for (const auto& c : g) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den_mpz_t());
  std::vector<IntRow> rows;
  for (const auto& g : gens) {
    IntRow r;
    bool nz = false;
    for (int i = 0; i < 4; ++i) {
      Rat v = g[i] * den;
      r[i] = v.get_num();
      nz = nz || r[i] != 0;
    }
    if (nz) rows.push_back(r);
  }
  rows = hnf(rows);
  if (rows.size() != 4) throw ConsistencyFailure("lattice generators do not have full rank");
  Lattice L;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      L.basis_[i][j] = Rat(rows[i][j], den);
      L.basis_[i][j].canonicalize();
    }
  if (!invert(to_mat(L.basis_), L.inv_)) throw ConsistencyFailure("singular lattice basis");
  return L;
}

std::array<Rat, 4> Lattice::coords(const QElt& x) const {
  std::array<Rat, 4> c;
  for (int j = 0; j < 4; ++j) {
    Rat s = 0;
    for (int i = 0; i < 4; ++i) s += x[i] * inv_[i][j];
    c[j] = s;
  }
  return c;
}

bool Lattice::contains(const QElt& x) const {
  for (const auto& c : coords(x))
    if (c.get_den() != 1) return false;
  return true;
}

bool Lattice::contains(const Lattice& o) const {
  for (const auto& b : o.basis_)
    if (!contains(b)) return false;
  return true;
}

Rat Lattice::covolume() const { return abs(det4(to_mat(basis_))); }

QElt Lattice::combo(const std::array<long, 4>& c) const {
  QElt x{};
  for (int i = 0; i < 4; ++i)
    if (c[i])
      for (int j = 0; j < 4; ++j) x[j] += c[i] * basis_[i][j];
  return x;
}

Lattice Lattice::scaled(const Rat& c) const {
  std::vector<QElt> g;
  for (const auto& b : basis_) g.push_back(scale(b, c));
  return from_generators(g);
}

bool Lattice::operator<(const Lattice& o) const {
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      if (basis_[i][j] < o.basis_[i][j]) return true;
      if (o.basis_[i][j] < basis_[i][j]) return false;
    }
  return false;
}

Lattice product(const Algebra& A, const Lattice& L1, const Lattice& L2) {
  std::vector<QElt> g;
  for (const auto& x : L1.basis())
    for (const auto& y : L2.basis()) g.push_back(A.mul(x, y));
  return Lattice::from_generators(g);
}

Lattice conjugate(const Algebra& A, const Lattice& L) {
  std::vector<QElt> g;
  for (const auto& x : L.basis()) g.push_back(A.conj(x));
  return Lattice::from_generators(g);
}

Lattice dual(const Lattice& L) {
  RatMat4 inv;
  invert(to_mat(L.basis()), inv);
  std::vector<QElt> g;
  for (int c = 0; c < 4; ++c) g.push_back({inv[0][c], inv[1][c], inv[2][c], inv[3][c]});
  return Lattice::from_generators(g);
}

Lattice intersect(const Lattice& L1, const Lattice& L2) {
  Lattice d1 = dual(L1), d2 = dual(L2);
  std::vector<QElt> g(d1.basis().begin(), d1.basis().end());
  g.insert(g.end(), d2.basis().begin(), d2.basis().end());
  return dual(Lattice::from_generators(g));
}

namespace {

Lattice multiplier_order(const Algebra& A, const Lattice& I, bool left) {
  // x -> coords_I(x b) (left) or coords_I(b x) (right) must be integral for every basis b
  const std::array<QElt, 4> E{qelt(1), qelt(0, 1), qelt(0, 0, 1), qelt(0, 0, 0, 1)};
  std::vector<QElt> rows;
  for (const auto& b : I.basis()) {
    std::array<std::array<Rat, 4>, 4> cols;
    for (int c = 0; c < 4; ++c) cols[c] = I.coords(left ? A.mul(E[c], b) : A.mul(b, E[c]));
    for (int r = 0; r < 4; ++r) rows.push_back({cols[0][r], cols[1][r], cols[2][r], cols[3][r]});
  }
  return dual(Lattice::from_generators(rows));
}

}  // namespace

Lattice left_order(const Algebra& A, const Lattice& I) { return multiplier_order(A, I, true); }
Lattice right_order(const Algebra& A, const Lattice& I) { return multiplier_order(A, I, false); }

bool is_order(const Algebra& A, const Lattice& O) {
  if (!O.contains(qelt(1))) return false;
  for (const auto& x : O.basis())
    for (const auto& y : O.basis())
      if (!O.contains(A.mul(x, y))) return false;
  return true;
}

Rat discriminant(const Algebra& A, const Lattice& O) {
  RatMat4 m;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) m[i][j] = A.trd(A.mul(O.basis()[i], O.basis()[j]));
  return abs(det4(m));
}

Int reduced_discriminant(const Algebra& A, const Lattice& O) {
  Rat r = rat_sqrt(discriminant(A, O));
  if (r.get_den() != 1) throw ConsistencyFailure("non-integral discriminant");
  return r.get_num();
}

Rat ideal_norm(const Lattice& R, const Lattice& I) { return rat_sqrt(I.covolume() / R.covolume()); }

RatMat4 gram(const Algebra& A, const Lattice& L) {
  RatMat4 g;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) g[i][j] = A.bil(L.basis()[i], L.basis()[j]);
  return g;
}

std::array<QElt, 4> lll_basis(const Algebra& A, const Lattice& L) {
  std::array<QElt, 4> B = L.basis();
  const int n = 4;
  const Rat delta(3, 4);
  auto G = [&](int i, int j) { return A.bil(B[i], B[j]); };
  int k = 1;
  for (;;) {
    std::array<std::array<Rat, 4>, 4> mu{};
    std::array<Rat, 4> Bn{};
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < i; ++j) {
        Rat s = G(i, j);
        for (int t = 0; t < j; ++t) s -= mu[j][t] * mu[i][t] * Bn[t];
        mu[i][j] = s / Bn[j];
      }
      Rat s = G(i, i);
      for (int t = 0; t < i; ++t) s -= mu[i][t] * mu[i][t] * Bn[t];
      Bn[i] = s;
    }
    if (k >= n) break;
    for (int j = k - 1; j >= 0; --j) {
      // nearest integer to mu[k][j]
      Rat x = mu[k][j] + Rat(1, 2);
      Int q;
      mpz_fdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
      if (q != 0) {
        B[k] = sub(B[k], scale(B[j], Rat(q)));
        for (int t = 0; t < j; ++t) mu[k][t] -= q * mu[j][t];
        mu[k][j] -= q;
      }
    }
    if (Bn[k] >= (delta - mu[k][k - 1] * mu[k][k - 1]) * Bn[k - 1]) {
      ++k;
    } else {
      std::swap(B[k], B[k - 1]);
      k = std::max(k - 1, 1);
    }
  }
  return B;
}

namespace {

// Fincke-Pohst over an LLL-reduced basis; calls visit(coeffs) for every coefficient vector
// with (1/2) c^T G c <= bound (floating-point search with a safety margin, exact check by caller).
template <class Visit>
void fincke_pohst(const std::array<QElt, 4>& B, const Algebra& A, double bound, Visit&& visit) {
  const int n = 4;
  long double G[4][4];
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) G[i][j] = A.bil(B[i], B[j]).get_d() / 2.0L;
  long double Q[4][4] = {};
  for (int i = 0; i < n; ++i) {
    long double s = G[i][i];
    for (int k = 0; k < i; ++k) s -= Q[k][k] * Q[k][i] * Q[k][i];
    Q[i][i] = s;
    for (int j = i + 1; j < n; ++j) {
      long double t = G[i][j];
      for (int k = 0; k < i; ++k) t -= Q[k][k] * Q[k][i] * Q[k][j];
      Q[i][j] = t / Q[i][i];
    }
  }
  std::array<long, 4> x{};
  long double margin = 1e-9L * (1 + bound);
  auto rec = [&](auto&& self, int i, long double rem) -> void {
    if (i < 0) {
      visit(x);
      return;
    }
    long double c = 0;
    for (int j = i + 1; j < n; ++j) c -= Q[i][j] * x[j];
    long double r = std::sqrt(std::max(0.0L, rem) / Q[i][i]) + 1e-9L;
    long lo = static_cast<long>(std::ceil(c - r)), hi = static_cast<long>(std::floor(c + r));
    for (long v = lo; v <= hi; ++v) {
      x[i] = v;
      long double nr = rem - Q[i][i] * (v - c) * (v - c);
      if (nr >= -margin) self(self, i - 1, nr);
    }
    x[i] = 0;
  };
  rec(rec, n - 1, bound + margin);
}

QElt combine(const std::array<QElt, 4>& B, const std::array<long, 4>& c) {
  QElt x{};
  for (int i = 0; i < 4; ++i)
    if (c[i])
      for (int j = 0; j < 4; ++j) x[j] += c[i] * B[i][j];
  return x;
}

}  // namespace

std::vector<QElt> short_vectors(const Algebra& A, const Lattice& L, const Rat& bound) {
  std::array<QElt, 4> B = lll_basis(A, L);
  std::vector<QElt> out;
  fincke_pohst(B, A, bound.get_d(), [&](const std::array<long, 4>& c) {
    QElt x = combine(B, c);
    if (A.nrd(x) <= bound) out.push_back(x);
  });
  return out;
}

std::vector<long> norm_counts(const Algebra& A, const Lattice& L, const Rat& scale_by, long max_norm) {
  std::array<QElt, 4> B = lll_basis(A, L);
  std::vector<long> counts(max_norm + 1, 0);
  Rat bound = scale_by * max_norm;
  fincke_pohst(B, A, bound.get_d(), [&](const std::array<long, 4>& c) {
    Rat nm = A.nrd(combine(B, c)) / scale_by;
    if (nm.get_den() == 1 && nm <= max_norm) ++counts[nm.get_num().get_si()];
  });
  return counts;
}

long unit_count(const Algebra& A, const Lattice& O) {
  long c = 0;
  for (const auto& x : short_vectors(A, O, Rat(1)))
    if (A.nrd(x) == 1) ++c;
  return c;
}

MaximalOrderData maximal_order(long ell) {
  if (!is_prime(ell) || ell < 5) throw InvalidInput("maximal_order needs a prime ell >= 5");
  MaximalOrderData d;
  const Rat h(1, 2), qtr(1, 4);
  if (ell % 4 == 3) {
    d.A = {-1, -ell};
    d.O = Lattice::from_generators({qelt(1), qelt(0, 1), {h, 0, h, 0}, {0, h, 0, h}});
  } else if (ell % 8 == 5) {
    d.A = {-2, -ell};
    d.O = Lattice::from_generators({{h, 0, h, h}, {0, qtr, h, qtr}, qelt(0, 0, 1), qelt(0, 0, 0, 1)});
  } else {
    long q = 3;
    while (!(q % 4 == 3 && is_prime(q) && kronecker(Int(ell), Int(q)) == -1)) ++q;
    long c = 0;
    while ((c * c * ell + 1) % q != 0) ++c;
    d.A = {-ell, -q};
    Rat cq(c, q);
    cq.canonicalize();
    d.O = Lattice::from_generators({{h, 0, h, 0}, {0, h, 0, h}, {0, 0, Rat(1, q), cq}, qelt(0, 0, 0, 1)});
  }
  std::vector<long> ram = ramified_places(d.A);
  if (ram != std::vector<long>{-1, ell}) throw ConsistencyFailure("quaternion algebra has the wrong ramification");
  if (!is_order(d.A, d.O) || reduced_discriminant(d.A, d.O) != ell)
    throw ConsistencyFailure("standard order is not maximal");
  return d;
}

}  // namespace cmpart
