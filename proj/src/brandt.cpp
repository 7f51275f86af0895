#include "cmpart/brandt.hpp"

#include "json.hpp"

#include <filesystem>
#include <fstream>
#include <mutex>
#include <numeric>
#include <set>
#include <sstream>

namespace cmpart {

namespace {

long level_psi(long level) {
  long r = level;
  for (auto [p, e] : factorize(level)) r = r / p * (p + 1);
  return r;
}

Rat rat_of(const std::string& s) {
  Rat q(s);
  q.canonicalize();
  return q;
}

QElt conj_mul(const Algebra& A, const QElt& x, const QElt& y, const QElt& z) {
  return A.mul(A.mul(A.conj(x), y), z);
}

// Smallest-norm elements of L (nrd <= bound, growing) satisfying pred.
template <class Pred>
QElt find_element(const Algebra& A, const Lattice& L, Rat bound, Pred&& pred) {
  for (int round = 0; round < 12; ++round, bound *= 2) {
    auto vs = short_vectors(A, L, bound);
    std::sort(vs.begin(), vs.end(), [&](const QElt& a, const QElt& b) { return A.nrd(a) < A.nrd(b); });
    for (const auto& v : vs)
      if (A.nrd(v) != 0 && pred(v)) return v;
  }
  throw ConsistencyFailure("no lattice element with the required local properties");
}

}  // namespace

QuaternionAlgebra quaternion_algebra(long ell) {
  MaximalOrderData d = maximal_order(ell);
  QuaternionAlgebra B;
  B.ell = ell;
  B.A = d.A;
  B.maximal = d.O;
  B.ramified = ramified_places(d.A);
  return B;
}

EichlerOrder eichler_order(const QuaternionAlgebra& B, long level) {
  if (level != 1 && level != 6) throw InvalidInput("only levels 1 and 6 are supported");
  EichlerOrder E;
  E.ell = B.ell;
  E.level = level;
  E.A = B.A;
  E.maximal = B.maximal;
  if (level == 1) {
    E.order = B.maximal;
  } else {
    const Algebra& A = B.A;
    const Lattice& O = B.maximal;
    auto primitive_at = [&](const QElt& x, long p) { return !O.contains(scale(x, Rat(1, p))); };
    QElt x = find_element(A, O, Rat(8 * level), [&](const QElt& v) {
      Rat n = A.nrd(v);
      if (n.get_den() != 1 || n.get_num() % level != 0) return false;
      Int u = n.get_num() / level;
      if (std::gcd(u.get_si(), level) != 1) return false;
      for (auto [p, e] : factorize(level))
        if (!primitive_at(v, p)) return false;
      return true;
    });
    std::vector<QElt> gens;
    for (const auto& y : O.basis()) {
      gens.push_back(A.mul(x, y));
      gens.push_back(scale(y, Rat(level)));
    }
    Lattice J = Lattice::from_generators(gens);
    E.order = intersect(O, left_order(A, J));
  }
  E.gram = gram(E.A, E.order);
  if (!is_order(E.A, E.order)) throw ConsistencyFailure("Eichler order is not closed under multiplication");
  E.reduced_discriminant = reduced_discriminant(E.A, E.order);
  if (E.reduced_discriminant != Int(level * B.ell)) throw ConsistencyFailure("Eichler order has the wrong discriminant");
  if (!B.maximal.contains(E.order)) throw ConsistencyFailure("Eichler order is not inside the maximal order");
  return E;
}

Rat eichler_mass(long ell, long level) {
  Rat m((ell - 1) * level_psi(level), 24);
  m.canonicalize();
  return m;
}

namespace {

struct ClassBuilder {
  const Algebra& A;
  const Lattice& R;
  std::vector<Lattice> ideals;
  std::vector<Rat> norms;
  std::vector<std::vector<long>> thetas;

  std::vector<long> theta(const Lattice& I, const Rat& n) const { return norm_counts(A, I, n, 6); }

  bool isomorphic(const Lattice& J, const Rat& nJ, std::size_t k) const {
    Lattice L = product(A, J, conjugate(A, ideals[k]));
    Rat t = nJ * norms[k];
    for (const auto& v : short_vectors(A, L, t))
      if (A.nrd(v) == t) return true;
    return false;
  }

  long find(const Lattice& J, const Rat& nJ, const std::vector<long>& th) const {
    for (std::size_t k = 0; k < ideals.size(); ++k)
      if (thetas[k] == th && isomorphic(J, nJ, k)) return static_cast<long>(k);
    return -1;
  }
};

}  // namespace

IdealClassSet ideal_classes(const EichlerOrder& E) {
  const Algebra& A = E.A;
  IdealClassSet C;
  C.R = E;
  Rat target = eichler_mass(E.ell, E.level);
  long p = 2;
  while (!is_prime(p) || (E.level * E.ell) % p == 0) ++p;

  ClassBuilder cb{A, E.order, {}, {}, {}};
  auto add_class = [&](const Lattice& I, const Rat& n) {
    cb.ideals.push_back(I);
    cb.norms.push_back(n);
    cb.thetas.push_back(cb.theta(I, n));
    Lattice OL = left_order(A, I);
    C.ideals.push_back(I);
    C.norms.push_back(n);
    C.left_orders.push_back(OL);
    C.weights.push_back(unit_count(A, OL));
    C.mass += Rat(1, C.weights.back());
  };
  add_class(E.order, Rat(1));
  std::size_t next = 0;
  while (C.mass < target && next < C.ideals.size()) {
    Lattice I = C.ideals[next];
    Rat nI = C.norms[next];
    ++next;
    std::set<Lattice> seen;
    std::array<long, 4> c{};
    for (long idx = 1; idx < p * p * p * p && C.mass < target; ++idx) {
      long t = idx;
      for (int k = 0; k < 4; ++k, t /= p) c[k] = t % p;
      QElt x = I.combo(c);
      Rat q = A.nrd(x) / nI;
      if (q.get_den() != 1 || q.get_num() % p != 0) continue;
      std::vector<QElt> gens;
      for (const auto& r : E.order.basis()) gens.push_back(A.mul(x, r));
      for (const auto& b : I.basis()) gens.push_back(scale(b, Rat(p)));
      Lattice J = Lattice::from_generators(gens);
      if (!seen.insert(J).second) continue;
      Rat nJ = ideal_norm(E.order, J);
      if (cb.find(J, nJ, cb.theta(J, nJ)) < 0) add_class(J, nJ);
    }
  }
  if (C.mass != target)
    throw ConsistencyFailure("ideal class mass " + C.mass.get_str() + " differs from " + target.get_str());
  return C;
}

std::vector<BrandtMatrix> brandt_matrices(const IdealClassSet& C, long m_max) {
  const Algebra& A = C.R.A;
  const long s = C.s();
  std::vector<BrandtMatrix> mats(m_max);
  for (long m = 1; m <= m_max; ++m) {
    mats[m - 1].m = m;
    mats[m - 1].b.assign(s, std::vector<Rat>(s, Rat(0)));
  }
  for (long i = 0; i < s; ++i)
    for (long j = i; j < s; ++j) {
      Lattice L = product(A, C.ideals[i], conjugate(A, C.ideals[j]));
      std::vector<long> counts = norm_counts(A, L, C.norms[i] * C.norms[j], m_max);
      for (long m = 1; m <= m_max; ++m) {
        mats[m - 1].b[i][j] = Rat(counts[m], C.weights[j]);
        mats[m - 1].b[j][i] = Rat(counts[m], C.weights[i]);
      }
    }
  for (auto& M : mats)
    for (auto& row : M.b)
      for (auto& v : row) v.canonicalize();
  return mats;
}

BrandtMatrix brandt_matrix(const IdealClassSet& C, long m) { return brandt_matrices(C, m).back(); }

RatMatrix mat_mul(const RatMatrix& x, const RatMatrix& y) {
  std::size_t n = x.size(), k = y.size(), m = y.empty() ? 0 : y[0].size();
  RatMatrix z(n, std::vector<Rat>(m, Rat(0)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t t = 0; t < k; ++t)
      if (x[i][t] != 0)
        for (std::size_t j = 0; j < m; ++j) z[i][j] += x[i][t] * y[t][j];
  return z;
}

BrandtReport check_brandt(const IdealClassSet& C, const std::vector<BrandtMatrix>& mats) {
  BrandtReport r;
  const long s = C.s();
  const long M = static_cast<long>(mats.size());
  const long bad = C.R.level * C.R.ell;
  auto B = [&](long m) -> const RatMatrix& { return mats[m - 1].b; };
  for (long i = 0; i < s; ++i)
    for (long j = 0; j < s; ++j)
      if (B(1)[i][j] != (i == j ? 1 : 0)) r.identity = false;
  if (!r.identity) r.failures.push_back("B(1) is not the identity");
  for (long m = 1; m <= M; ++m) {
    for (long i = 0; i < s; ++i)
      for (long j = 0; j < s; ++j)
        if (C.weights[j] * B(m)[i][j] != C.weights[i] * B(m)[j][i]) {
          r.symmetry = false;
          r.failures.push_back("weighted symmetry fails for m = " + std::to_string(m));
          i = j = s;
        }
    if (std::gcd(m, bad) != 1) continue;
    for (long i = 0; i < s; ++i) {
      Rat sum = 0;
      for (long j = 0; j < s; ++j) sum += B(m)[i][j];
      if (sum != sigma1(m)) {
        r.row_sums = false;
        r.failures.push_back("row " + std::to_string(i) + " of B(" + std::to_string(m) + ") sums to " + sum.get_str());
      }
    }
  }
  // multiplicativity holds for all coprime indices, level primes included
  for (long a = 2; a <= M; ++a)
    for (long b = a + 1; a * b <= M; ++b) {
      if (std::gcd(a, b) != 1) continue;
      std::string rel = "B(" + std::to_string(a) + ")B(" + std::to_string(b) + ") = B(" + std::to_string(a * b) + ")";
      r.relations_checked.push_back(rel);
      if (mat_mul(B(a), B(b)) != B(a * b)) {
        r.hecke = false;
        r.failures.push_back(rel + " fails");
      }
    }
  {
    // at the ramified prime there is one integral ideal of each norm locally, so B(l^k) = B(l)^k;
    // at primes dividing the Eichler level the norm counts also see the Atkin-Lehner element
    const long p = C.R.ell;
    for (long pk = p; pk * p <= M; pk *= p) {
      std::string rel = "B(" + std::to_string(pk * p) + ") = B(" + std::to_string(pk) + ")B(" + std::to_string(p) + ")";
      r.relations_checked.push_back(rel);
      if (mat_mul(B(pk), B(p)) != B(pk * p)) {
        r.hecke = false;
        r.failures.push_back(rel + " fails");
      }
    }
  }
  for (long a = 2; a <= M; ++a)
    for (long b = a + 1; b <= M; ++b) {
      if (mat_mul(B(a), B(b)) == mat_mul(B(b), B(a))) continue;
      r.hecke = false;
      r.failures.push_back("B(" + std::to_string(a) + ") and B(" + std::to_string(b) + ") do not commute");
    }
  if (M >= 3) r.relations_checked.push_back("B(a)B(b) = B(b)B(a) for 2 <= a < b <= " + std::to_string(M));
  for (long p = 2; p * p <= M; ++p) {
    if (!is_prime(p) || bad % p == 0) continue;
    for (long pk = p; pk * p <= M; pk *= p) {
      RatMatrix rhs = mat_mul(B(pk), B(p));
      const RatMatrix& prev = B(pk / p);
      for (long i = 0; i < s; ++i)
        for (long j = 0; j < s; ++j) rhs[i][j] -= p * prev[i][j];
      std::string rel = "B(" + std::to_string(pk * p) + ") = B(" + std::to_string(pk) + ")B(" + std::to_string(p) +
                        ") - " + std::to_string(p) + "B(" + std::to_string(pk / p) + ")";
      r.relations_checked.push_back(rel);
      if (rhs != B(pk * p)) {
        r.hecke = false;
        r.failures.push_back(rel + " fails");
      }
    }
  }
  return r;
}

// ---- local characters ----

Fq2::E apply_character(const LocalCharacter& chi, const Lattice& order, const QElt& x, const Fq2& K) {
  auto c = order.coords(x);
  if (chi.p == K.ell()) {
    Fq2::E v = K.make(0);
    for (int k = 0; k < 4; ++k) {
      if (c[k].get_den() != 1) throw InvalidInput("element is not in the order");
      v = K.add(v, K.scale(chi.on_basis[k], K.base.red(c[k].get_num())));
    }
    return v;
  }
  Fp F(chi.p);
  long v = 0;
  for (int k = 0; k < 4; ++k) {
    if (c[k].get_den() != 1) throw InvalidInput("element is not in the order");
    v = F.add(v, F.mul(F.red(c[k].get_num()), chi.on_basis[k].a));
  }
  return {v, 0};
}

namespace {

std::vector<LocalCharacter> prime_field_characters(const Algebra& A, const Lattice& R, long p) {
  Fp F(p);
  std::array<std::array<std::array<long, 4>, 4>, 4> prod{};  // coords of b_i b_j
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      auto c = R.coords(A.mul(R.basis()[i], R.basis()[j]));
      for (int k = 0; k < 4; ++k) prod[i][j][k] = F.red(c[k].get_num());
    }
  auto one = R.coords(qelt(1));
  std::vector<LocalCharacter> out;
  for (long idx = 0; idx < p * p * p * p; ++idx) {
    std::array<long, 4> v;
    long t = idx;
    for (int k = 0; k < 4; ++k, t /= p) v[k] = t % p;
    long e = 0;
    for (int k = 0; k < 4; ++k) e = F.add(e, F.mul(F.red(one[k].get_num()), v[k]));
    if (e != 1) continue;
    bool ok = true;
    for (int i = 0; i < 4 && ok; ++i)
      for (int j = 0; j < 4 && ok; ++j) {
        long lhs = 0;
        for (int k = 0; k < 4; ++k) lhs = F.add(lhs, F.mul(prod[i][j][k], v[k]));
        ok = lhs == F.mul(v[i], v[j]);
      }
    if (!ok) continue;
    LocalCharacter chi;
    chi.p = p;
    for (int k = 0; k < 4; ++k) chi.on_basis[k] = {v[k], 0};
    out.push_back(chi);
  }
  return out;
}

LocalCharacter ell_character(const Algebra& A, const Lattice& R, const Fq2& K) {
  const Fp& F = K.base;
  QElt z = find_element(A, R, Rat(4), [&](const QElt& v) {
    long t = F.red(A.trd(v)), n = F.red(A.nrd(v));
    long disc = F.sub(F.mul(t, t), F.mul(4, n));
    return disc != 0 && !F.is_square(disc);
  });
  long tz = F.red(A.trd(z)), nz = F.red(A.nrd(z));
  Fq2::E rho = K.quadratic_root(tz, nz);
  long tr_rho = K.trace(rho);
  long tr_rho2 = K.trace(K.mul(rho, rho));
  long det = F.sub(F.mul(2, tr_rho2), F.mul(tr_rho, tr_rho));
  long dinv = F.inv(det);
  LocalCharacter chi;
  chi.p = K.ell();
  for (int k = 0; k < 4; ++k) {
    const QElt& e = R.basis()[k];
    long t1 = F.red(A.trd(e)), t2 = F.red(A.trd(A.mul(e, z)));
    // [2, tr_rho; tr_rho, tr_rho2] (a, b) = (t1, t2)
    long a = F.mul(dinv, F.sub(F.mul(tr_rho2, t1), F.mul(tr_rho, t2)));
    long b = F.mul(dinv, F.sub(F.mul(2, t2), F.mul(tr_rho, t1)));
    chi.on_basis[k] = K.add(K.make(a), K.mul(K.make(b), rho));
  }
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      Fq2::E lhs = apply_character(chi, R, A.mul(R.basis()[i], R.basis()[j]), K);
      if (lhs != K.mul(chi.on_basis[i], chi.on_basis[j]))
        throw ConsistencyFailure("reduction map at ell is not multiplicative");
    }
  return chi;
}

// chi on O_L(I) from chi on R: y -> chi(conj(x) y x / nrd(I)) / (nrd(x) / nrd(I)).
LocalCharacter transport(const Algebra& A, const Lattice& R, const LocalCharacter& chi, const Lattice& OL,
                         const QElt& x, const Rat& nI, const Fq2& K) {
  Rat u = A.nrd(x) / nI;
  LocalCharacter out;
  out.p = chi.p;
  for (int k = 0; k < 4; ++k) {
    QElt z = scale(conj_mul(A, x, OL.basis()[k], x), 1 / nI);
    Fq2::E v = apply_character(chi, R, z, K);
    if (chi.p == K.ell()) {
      out.on_basis[k] = K.mul(v, K.inv(K.make(K.base.red(u))));
    } else {
      Fp F(chi.p);
      out.on_basis[k] = {F.mul(v.a, F.inv(F.red(u))), 0};
    }
  }
  return out;
}

}  // namespace

Orientations orientations(const IdealClassSet& C) {
  const Algebra& A = C.R.A;
  const Lattice& R = C.R.order;
  Fq2 K(C.R.ell);
  Orientations o;
  std::vector<LocalCharacter> c2, c3;
  if (C.R.level == 6) {
    c2 = prime_field_characters(A, R, 2);
    c3 = prime_field_characters(A, R, 3);
    if (c2.size() != 2 || c3.size() != 2) throw ConsistencyFailure("expected two local characters at 2 and at 3");
  }
  LocalCharacter cl = ell_character(A, R, K);
  const long bad = 6 * C.R.ell;
  for (long i = 0; i < C.s(); ++i) {
    QElt x = find_element(A, C.ideals[i], C.norms[i] * 4, [&](const QElt& v) {
      Rat u = A.nrd(v) / C.norms[i];
      return u.get_den() == 1 && std::gcd(u.get_num().get_si(), bad) == 1;
    });
    std::vector<LocalCharacter> t2, t3;
    for (const auto& chi : c2) t2.push_back(transport(A, R, chi, C.left_orders[i], x, C.norms[i], K));
    for (const auto& chi : c3) t3.push_back(transport(A, R, chi, C.left_orders[i], x, C.norms[i], K));
    o.chi2.push_back(t2);
    o.chi3.push_back(t3);
    o.chi_ell.push_back(transport(A, R, cl, C.left_orders[i], x, C.norms[i], K));
  }
  return o;
}

namespace {

bool optimal_in(const Lattice& O, const QElt& x, long delta) {
  long t0 = mod(delta, 2);
  QElt y = sub(scale(x, Rat(2)), qelt(t0));
  for (auto [p, e] : factorize(-delta)) {
    if (e < 2) continue;
    long d2 = delta / (p * p);
    if (mod(d2, 4) > 1) continue;
    QElt z = scale(add(qelt(d2), scale(y, Rat(1, p))), Rat(1, 2));
    if (O.contains(z)) return false;
  }
  return true;
}

}  // namespace

std::vector<QElt> embedding_elements(const IdealClassSet& C, long i, long delta, bool optimal_only) {
  if (delta >= 0 || mod(delta, 4) > 1) throw InvalidInput("delta must be a negative discriminant");
  const Algebra& A = C.R.A;
  const Lattice& O = C.left_orders[i];
  long t0 = mod(delta, 2);
  Rat n((t0 * t0 - delta) / 4);
  std::vector<QElt> out;
  for (const auto& x : short_vectors(A, O, n))
    if (A.nrd(x) == n && A.trd(x) == t0 && (!optimal_only || optimal_in(O, x, delta))) out.push_back(x);
  return out;
}

OrientedCounts oriented_counts(const IdealClassSet& C, const Orientations& ori, long delta) {
  Fq2 K(C.R.ell);
  const Fp& F = K.base;
  OrientedCounts oc;
  oc.delta = delta;
  long t0 = mod(delta, 2);
  long nn = F.red((t0 * t0 - delta) / 4);
  oc.ell_ramified = mod(delta, C.R.ell) == 0;
  Fq2::E root0 = K.quadratic_root(t0, nn);
  for (long i = 0; i < C.s(); ++i) {
    std::array<std::array<std::array<long, 2>, 2>, 2> cnt{};
    long total = 0;
    for (const auto& x : embedding_elements(C, i, delta, true)) {
      ++total;
      int c2 = 0, c3 = 0, cl = 0;
      if (C.R.level == 6) {
        c2 = static_cast<int>(apply_character(ori.chi2[i][0], C.left_orders[i], x, K).a);
        c3 = static_cast<int>(apply_character(ori.chi3[i][0], C.left_orders[i], x, K).a);
        if (c2 > 1 || c3 > 1) throw ConsistencyFailure("orientation value outside the expected roots");
      }
      Fq2::E v = apply_character(ori.chi_ell[i], C.left_orders[i], x, K);
      cl = (v == root0) ? 0 : 1;
      cnt[c2][c3][cl] += 1;
    }
    oc.counts.push_back(cnt);
    oc.total.push_back(total);
  }
  return oc;
}

std::vector<long> oriented_vector(const OrientedCounts& oc, int c2, int c3, int c_ell) {
  std::vector<long> v;
  for (const auto& c : oc.counts) v.push_back(c[c2][c3][c_ell]);
  return v;
}

std::vector<long> theta_counts(const IdealClassSet& C, long i, long abs_delta_max) {
  const Algebra& A = C.R.A;
  std::vector<QElt> gens{qelt(1)};
  for (const auto& b : C.left_orders[i].basis()) gens.push_back(scale(b, Rat(2)));
  Lattice L = Lattice::from_generators(gens);
  std::vector<long> counts(abs_delta_max + 1, 0);
  for (const auto& y : short_vectors(A, L, Rat(abs_delta_max))) {
    if (A.trd(y) != 0) continue;
    Rat n = A.nrd(y);
    if (n.get_den() == 1 && n > 0) ++counts[n.get_num().get_si()];
  }
  return counts;
}

namespace {

int moebius(long n) {
  int mu = 1;
  for (auto [p, e] : factorize(n)) {
    if (e > 1) return 0;
    mu = -mu;
  }
  return mu;
}

}  // namespace

std::vector<long> embedding_vector(const IdealClassSet& C, long delta) {
  std::vector<long> out;
  for (long i = 0; i < C.s(); ++i) {
    std::vector<long> th = theta_counts(C, i, -delta);
    long opt = 0;
    for (long g = 1; g * g <= -delta; ++g) {
      if ((-delta) % (g * g) != 0 || mod(delta / (g * g), 4) > 1) continue;
      opt += moebius(g) * th[-delta / (g * g)];
    }
    out.push_back(opt);
  }
  return out;
}

Rat hurwitz_sum(const IdealClassSet& C, long delta) {
  Rat s = 0;
  for (long i = 0; i < C.s(); ++i)
    s += Rat(2 * static_cast<long>(embedding_elements(C, i, delta, false).size()), C.weights[i]);
  s.canonicalize();
  return s;
}

std::vector<Rat> gross_vector(const IdealClassSet& C, long delta) {
  long w_delta = delta == -3 ? 6 : delta == -4 ? 4 : 2;
  std::vector<Rat> v;
  for (long i = 0; i < C.s(); ++i) {
    Rat x(static_cast<long>(embedding_elements(C, i, delta, true).size()) * w_delta, C.weights[i]);
    x.canonicalize();
    v.push_back(x);
  }
  return v;
}

std::vector<EigenCheck> eigen_checks(const std::vector<BrandtMatrix>& mats, const std::vector<Rat>& v,
                                     const std::vector<long>& ms) {
  std::vector<EigenCheck> out;
  for (long m : ms) {
    const RatMatrix& B = mats.at(m - 1).b;
    std::vector<Rat> w(v.size(), Rat(0));
    for (std::size_t j = 0; j < v.size(); ++j)
      for (std::size_t i = 0; i < v.size(); ++i) w[j] += B[i][j] * v[i];
    EigenCheck ec;
    ec.m = m;
    std::size_t k = 0;
    while (k < v.size() && v[k] == 0) ++k;
    if (k == v.size()) {
      out.push_back(ec);
      continue;
    }
    ec.eigenvalue = w[k] / v[k];
    ec.eigen = true;
    for (std::size_t j = 0; j < v.size(); ++j)
      if (w[j] != ec.eigenvalue * v[j]) ec.eigen = false;
    out.push_back(ec);
  }
  return out;
}

// ---- serialization and cache ----

namespace {

constexpr const char* kBrandtFormat = "cmpart-brandt 1";

nlohmann::ordered_json matrix_json(const RatMatrix& M) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& r : M) {
    nlohmann::ordered_json row = nlohmann::ordered_json::array();
    for (const auto& v : r) row.push_back(v.get_str());
    rows.push_back(row);
  }
  return rows;
}

nlohmann::ordered_json to_json(const IdealClassSet& C, const std::vector<BrandtMatrix>& mats) {
  nlohmann::ordered_json j;
  j["format"] = kBrandtFormat;
  j["ell"] = std::to_string(C.R.ell);
  j["level"] = std::to_string(C.R.level);
  j["s"] = std::to_string(C.s());
  j["mass"] = C.mass.get_str();
  nlohmann::ordered_json w = nlohmann::ordered_json::array();
  for (long x : C.weights) w.push_back(std::to_string(x));
  j["weights"] = w;
  nlohmann::ordered_json grams = nlohmann::ordered_json::array();
  nlohmann::ordered_json ideals = nlohmann::ordered_json::array();
  for (long i = 0; i < C.s(); ++i) {
    RatMat4 g = gram(C.R.A, C.left_orders[i]);
    RatMatrix gm;
    for (const auto& r : g) gm.emplace_back(r.begin(), r.end());
    grams.push_back(matrix_json(gm));
    RatMatrix bm;
    for (const auto& b : C.ideals[i].basis()) bm.emplace_back(b.begin(), b.end());
    ideals.push_back(matrix_json(bm));
  }
  j["gram_matrices"] = grams;
  j["ideals"] = ideals;
  nlohmann::ordered_json b;
  for (const auto& M : mats) b[std::to_string(M.m)] = matrix_json(M.b);
  j["brandt"] = b;
  return j;
}

std::mutex cache_mu;

}  // namespace

std::string brandt_to_json(const IdealClassSet& C, const std::vector<BrandtMatrix>& mats) {
  return to_json(C, mats).dump();
}

BrandtData brandt_data(long ell, long level, long m_max, bool use_cache) {
  namespace fs = std::filesystem;
  fs::path path = fs::path(cache_dir()) / "brandt" / ("brandt_" + std::to_string(ell) + "_" + std::to_string(level) + ".json");
  EichlerOrder E = eichler_order(quaternion_algebra(ell), level);
  if (use_cache) {
    std::lock_guard<std::mutex> lock(cache_mu);
    std::ifstream in(path);
    if (in) {
      try {
        auto j = nlohmann::json::parse(in);
        if (j.at("format") == kBrandtFormat && static_cast<long>(j.at("brandt").size()) >= m_max) {
          BrandtData d;
          d.classes.R = E;
          for (const auto& im : j.at("ideals")) {
            std::vector<QElt> gens;
            for (const auto& row : im) gens.push_back({rat_of(row[0]), rat_of(row[1]), rat_of(row[2]), rat_of(row[3])});
            Lattice I = Lattice::from_generators(gens);
            Lattice OL = left_order(E.A, I);
            d.classes.ideals.push_back(I);
            d.classes.norms.push_back(ideal_norm(E.order, I));
            d.classes.left_orders.push_back(OL);
            d.classes.weights.push_back(unit_count(E.A, OL));
            d.classes.mass += Rat(1, d.classes.weights.back());
          }
          if (d.classes.mass == eichler_mass(ell, level) && d.classes.ideals[0] == E.order) {
            for (long m = 1; m <= m_max; ++m) {
              BrandtMatrix M;
              M.m = m;
              for (const auto& row : j.at("brandt").at(std::to_string(m))) {
                std::vector<Rat> r;
                for (const auto& v : row) r.push_back(rat_of(v.get<std::string>()));
                M.b.push_back(r);
              }
              d.mats.push_back(M);
            }
            return d;
          }
        }
      } catch (const std::exception&) {
        // stale or damaged cache entry: recompute below
      }
    }
  }
  BrandtData d;
  d.classes = ideal_classes(E);
  d.mats = brandt_matrices(d.classes, m_max);
  if (use_cache) {
    std::lock_guard<std::mutex> lock(cache_mu);
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    fs::path tmp = path;
    tmp += ".tmp";
    {
      std::ofstream out(tmp);
      out << to_json(d.classes, d.mats).dump() << "\n";
    }
    fs::rename(tmp, path, ec);
  }
  return d;
}

}  // namespace cmpart
