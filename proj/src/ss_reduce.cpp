#include "cmpart/ss_reduce.hpp"

#include "cmpart/heegner.hpp"
#include "cmpart/modpoly.hpp"
#include "cmpart/partition.hpp"
#include "cmpart/qseries.hpp"

#include "json.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace cmpart {

bool is_supersingular(Fq2::E j, const Fq2& K) {
  const long ell = K.ell();
  Fq2::E a, b;
  const Fq2::E j1728 = K.make(1728);
  if (K.is_zero(j)) {
    a = K.make(0);
    b = K.make(1);
  } else if (j == j1728) {
    a = K.make(1);
    b = K.make(0);
  } else {
    Fq2::E k = K.mul(j, K.inv(K.sub(j1728, j)));
    a = K.scale(k, 3);
    b = K.scale(k, 2);
  }
  const long half = (ell - 1) / 2;
  long points = 1;  // point at infinity
  for (const auto& x : K.elements()) {
    Fq2::E f = K.add(K.add(K.mul(K.mul(x, x), x), K.mul(a, x)), b);
    if (K.is_zero(f))
      points += 1;
    else
      points += K.base.pow(K.norm(f), half) == 1 ? 2 : 0;
  }
  long trace = mod(ell * ell + 1 - points, ell);
  return trace == 0;
}

std::vector<Fq2::E> supersingular_js(long ell) {
  if (!is_prime(ell) || ell < 5) throw InvalidInput("ell must be a prime >= 5");
  Fq2 K(ell);
  std::vector<Fq2::E> out;
  for (const auto& j : K.elements())
    if (is_supersingular(j, K)) out.push_back(j);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<SupersingularPoint> supersingular_points_X06(long ell) {
  Fq2 K(ell);
  const HauptmodulRelation& rel = hauptmodul_relation();
  std::vector<SupersingularPoint> pts;
  for (const auto& j : supersingular_js(ell)) {
    std::size_t deg = std::max(rel.num.size(), rel.den.size());
    PolyQ f(deg, K.make(0));
    for (std::size_t i = 0; i < rel.num.size(); ++i) f[i] = K.add(f[i], K.make(K.base.red(rel.num[i])));
    for (std::size_t i = 0; i < rel.den.size(); ++i)
      f[i] = K.sub(f[i], K.mul(j, K.make(K.base.red(rel.den[i]))));
    for (const auto& [t, m] : roots_with_multiplicity(f, K)) {
      SupersingularPoint p;
      p.ell = ell;
      p.t = t;
      p.j = j;
      pts.push_back(p);
    }
  }
  std::sort(pts.begin(), pts.end(), [](const auto& x, const auto& y) { return std::tie(x.j, x.t) < std::tie(y.j, y.t); });
  for (std::size_t i = 0; i < pts.size(); ++i) pts[i].id = static_cast<long>(i);
  // complex conjugation maps the Heegner class of [a, b, c] to that of [a, -b, c], which is
  // the W_6-image of a Heegner class; on t this is t -> 72 / t^l
  for (auto& p : pts) {
    if (K.is_zero(p.t)) continue;
    Fq2::E ft = K.mul(K.make(72), K.inv(K.frob(p.t)));
    for (const auto& q : pts)
      if (q.t == ft) p.frobenius_partner = q.id;
  }
  return pts;
}

ReducedClassPolynomial reduce_class_polynomial(long n, long ell) {
  if (!is_prime(ell) || ell < 5) throw InvalidInput("ell must be a prime >= 5");
  ClassPolynomial cp = class_polynomial(n);
  Fp F(ell);
  ReducedClassPolynomial r;
  r.n = n;
  r.ell = ell;
  r.delta = cp.delta;
  r.scaled = mod(cp.delta, ell) == 0;
  if (r.scaled) {
    r.poly = poly_from_ints(cp.H_scaled, F);
  } else {
    std::vector<Rat> c;
    for (const auto& x : cp.H) c.push_back(x * (-cp.delta));
    r.poly = poly_from_rats(c, F);
  }
  r.factorization = factor(r.poly, F);
  return r;
}

Fq2::E reduce_quadratic(const QuadInt& z, Fq2::E root_w, const Fq2& K) {
  return K.add(K.make(K.base.red(z.u)), K.scale(root_w, K.base.red(z.v)));
}

Fq2::E omega_image(long D0, const Fq2& K) { return K.quadratic_root(1, K.base.red((1 - D0) / 4)); }

long ReductionReport::fiber_sum() const {
  long s = 0;
  for (const auto& f : fibers) s += f.h;
  return s;
}

std::vector<long> ReductionReport::h_fiber() const {
  std::vector<long> v;
  for (const auto& f : fibers) v.push_back(f.h);
  return v;
}

namespace {

using Roots = std::vector<std::pair<Fq2::E, int>>;

Roots reduced_roots(const JointPolynomial& jp, Fq2::E w, const Fq2& K) {
  PolyQ f;
  for (const auto& c : jp.coeffs) f.push_back(reduce_quadratic(c, w, K));
  return roots_with_multiplicity(f, K);
}

int multiplicity(const Roots& r, Fq2::E x) {
  for (const auto& [y, m] : r)
    if (y == x) return m;
  return 0;
}

// The multiset {a + c b} weighted by M equals the roots of the shift-c polynomial.
bool reproduces(const Roots& A, const Roots& B, const std::vector<std::vector<int>>& M, const Roots& S, Fq2::E c,
                const Fq2& K) {
  std::map<Fq2::E, int> got;
  for (std::size_t i = 0; i < A.size(); ++i)
    for (std::size_t k = 0; k < B.size(); ++k)
      if (M[i][k]) got[K.add(A[i].first, K.mul(B[k].first, c))] += M[i][k];
  std::map<Fq2::E, int> want(S.begin(), S.end());
  return got == want;
}

}  // namespace

ReductionReport fiber_match(long n, long ell) {
  Discriminant d = discriminant_for(n);
  ReductionReport r;
  r.n = n;
  r.ell = ell;
  r.delta = d.delta;
  r.h = class_number(d);
  r.kronecker = static_cast<int>(kronecker(Int(d.delta), Int(ell)));
  if (r.kronecker == 1) throw InvalidInput("ell splits in the order of discriminant " + std::to_string(d.delta));
  Fq2 K(ell);
  r.points = supersingular_points_X06(ell);
  r.reduced = reduce_class_polynomial(n, ell);

  ClassPolynomial cp = class_polynomial(n);
  Fq2::E w = omega_image(d.fundamental, K);
  // B: reductions of delta P, from the integral scaled polynomial
  PolyQ hs;
  for (const auto& c : cp.H_scaled) hs.push_back(K.make(K.base.red(c)));
  Roots B = roots_with_multiplicity(hs, K);
  long bsum = 0;
  for (const auto& [b, m] : B) bsum += m;
  if (bsum != cp.h) throw ConsistencyFailure("scaled class polynomial does not split over F_{l^2}");

  std::vector<JointPolynomial> base = joint_polynomials(n, std::vector<long>{0}, cp.bits_used);
  Roots A = reduced_roots(base[0], w, K);
  for (const auto& [a, m] : A) {
    bool found = false;
    for (const auto& p : r.points) found = found || p.t == a;
    if (!found) r.t_roots_supersingular = false;
  }
  // A pair (a, b) survives when a + c b is a root for every shift c; its multiplicity is read off
  // at a shift that separates it from the other survivors. Shifts u + v w with v < 2 usually
  // suffice; all of F_{l^2} leaves only genuine pairs.
  std::vector<std::vector<int>> M;
  auto attempt = [&](long v_max, bool last) {
    std::vector<QuadInt> cand;
    for (long v = 0; v < v_max; ++v)
      for (long u = 0; u < ell; ++u)
        if (u || v) cand.push_back({Int(u), Int(v)});
    std::vector<JointPolynomial> joint = joint_polynomials(n, cand, cp.bits_used);
    std::vector<Roots> S;
    std::vector<Fq2::E> cs;
    for (std::size_t k = 0; k < cand.size(); ++k) {
      S.push_back(reduced_roots(joint[k], w, K));
      cs.push_back(reduce_quadratic(cand[k], w, K));
    }
    std::vector<std::pair<std::size_t, std::size_t>> alive;
    for (std::size_t i = 0; i < A.size(); ++i)
      for (std::size_t k = 0; k < B.size(); ++k) {
        bool ok = true;
        for (std::size_t c = 0; c < cs.size() && ok; ++c)
          ok = multiplicity(S[c], K.add(A[i].first, K.mul(B[k].first, cs[c]))) > 0;
        if (ok) alive.emplace_back(i, k);
      }
    M.assign(A.size(), std::vector<int>(B.size(), 0));
    for (auto [i, k] : alive) {
      bool separated = false;
      for (std::size_t c = 0; c < cs.size() && !separated; ++c) {
        Fq2::E x = K.add(A[i].first, K.mul(B[k].first, cs[c]));
        separated = true;
        for (auto [i2, k2] : alive)
          if ((i2 != i || k2 != k) && K.add(A[i2].first, K.mul(B[k2].first, cs[c])) == x) separated = false;
        if (separated) M[i][k] = multiplicity(S[c], x);
      }
      if (!separated) return false;
    }
    bool agree = true;
    for (std::size_t c = 0; c < cs.size(); ++c) agree = agree && reproduces(A, B, M, S[c], cs[c], K);
    if (!agree && !last) return false;
    r.matchings_agree = agree;
    r.shifts = cand;
    return true;
  };
  if (!attempt(2, false) && !attempt(ell, true))
    throw ConsistencyFailure("shift matchings do not determine the reduction pairs at ell = " + std::to_string(ell));
  for (std::size_t i = 0; i < A.size(); ++i) {
    int s = 0;
    for (std::size_t k = 0; k < B.size(); ++k) s += M[i][k];
    if (s != A[i].second) r.matchings_agree = false;
  }
  for (std::size_t k = 0; k < B.size(); ++k) {
    int s = 0;
    for (std::size_t i = 0; i < A.size(); ++i) s += M[i][k];
    if (s != B[k].second) r.matchings_agree = false;
  }

  const bool divides = mod(d.delta, ell) == 0;
  Fq2::E inv_delta = divides ? K.make(1) : K.inv(K.make(d.delta));
  for (const auto& p : r.points) {
    FiberEntry fe;
    fe.point = p.id;
    for (std::size_t i = 0; i < A.size(); ++i) {
      if (A[i].first != p.t) continue;
      for (std::size_t k = 0; k < B.size(); ++k) {
        if (!M[i][k]) continue;
        fe.h += M[i][k];
        Fq2::E v = K.mul(B[k].first, inv_delta);
        for (int m = 0; m < M[i][k]; ++m) r.class_values.push_back(v);
        if (fe.has_value && fe.p_tilde != v) r.values_well_defined = false;
        fe.has_value = true;
        fe.p_tilde = v;
      }
    }
    r.fibers.push_back(fe);
  }
  for (const auto& p : r.points) {
    const FiberEntry& a = r.fibers[p.id];
    const FiberEntry& b = r.fibers[p.frobenius_partner];
    if (a.h != b.h || (a.has_value && b.has_value && K.frob(a.p_tilde) != b.p_tilde)) r.frobenius_equivariant = false;
  }
  return r;
}

TraceVerdict verify_ss_trace(const ReductionReport& report) {
  if (report.kronecker != -1) throw InvalidInput("the supersingular trace congruence needs ell inert");
  Fq2 K(report.ell);
  TraceVerdict v;
  v.n = report.n;
  v.ell = report.ell;
  v.p_mod_ell = K.base.red(euler_p(report.n));
  Fq2::E s = K.make(0);
  for (const auto& f : report.fibers)
    if (f.has_value) s = K.add(s, K.scale(f.p_tilde, f.h));
  v.rhs = K.neg(K.mul(s, K.inv(K.make(report.delta))));
  Fq2::E cs = K.make(0);
  for (const auto& x : report.class_values) cs = K.add(cs, x);
  v.classwise_rhs = K.neg(K.mul(cs, K.inv(K.make(report.delta))));
  v.classwise_holds = v.classwise_rhs == K.make(v.p_mod_ell);
  v.holds = v.rhs == K.make(v.p_mod_ell) && report.fiber_sum() == report.h && report.matchings_agree &&
            report.values_well_defined;
  v.report = report;
  return v;
}

TraceVerdict verify_ss_trace(long n, long ell) {
  Discriminant d = discriminant_for(n);
  if (kronecker(Int(d.delta), Int(ell)) != -1) throw InvalidInput("the supersingular trace congruence needs ell inert");
  return verify_ss_trace(fiber_match(n, ell));
}

namespace {

using IntMatrix = std::vector<std::vector<long>>;

// Adjacency of the supersingular points under Phi(t_k, Y) = 0 mod ell, with multiplicities.
IntMatrix isogeny_graph(const std::vector<SupersingularPoint>& pts, const ModularPolynomial& phi, const Fq2& K) {
  const long s = static_cast<long>(pts.size());
  IntMatrix A(s, std::vector<long>(s, 0));
  for (long k = 0; k < s; ++k) {
    PolyQ f(phi.degree + 1, K.make(0));
    for (const auto& [ij, c] : phi.coeffs) {
      Fq2::E term = K.scale(K.pow(pts[k].t, Int(ij.first)), K.base.red(c));
      f[ij.second] = K.add(f[ij.second], term);
    }
    for (const auto& [y, m] : roots_with_multiplicity(f, K)) {
      bool found = false;
      for (long q = 0; q < s; ++q)
        if (pts[q].t == y) {
          A[k][q] += m;
          found = true;
        }
      if (!found) throw ConsistencyFailure("isogeny leaves the supersingular locus");
    }
  }
  return A;
}

void find_isomorphisms(const std::vector<IntMatrix>& Bs, const std::vector<IntMatrix>& As, long limit,
                       std::vector<std::vector<long>>& out) {
  const long s = static_cast<long>(Bs[0].size());
  std::vector<long> sigma(s, -1);
  std::vector<bool> used(s, false);
  auto rec = [&](auto&& self, long i) -> void {
    if (static_cast<long>(out.size()) >= limit) return;
    if (i == s) {
      out.push_back(sigma);
      return;
    }
    for (long c = 0; c < s; ++c) {
      if (used[c]) continue;
      bool ok = true;
      for (std::size_t g = 0; g < Bs.size() && ok; ++g) {
        if (Bs[g][i][i] != As[g][c][c]) ok = false;
        for (long k = 0; k < i && ok; ++k)
          if (Bs[g][i][k] != As[g][c][sigma[k]] || Bs[g][k][i] != As[g][sigma[k]][c]) ok = false;
      }
      if (!ok) continue;
      sigma[i] = c;
      used[c] = true;
      self(self, i + 1);
      used[c] = false;
      sigma[i] = -1;
    }
  };
  rec(rec, 0);
}

}  // namespace

DotProductVerdict verify_dot_product(const ReductionReport& report, const BrandtData& brandt) {
  if (report.kronecker != -1) throw InvalidInput("the dot-product congruence needs ell inert");
  const IdealClassSet& C = brandt.classes;
  const long ell = report.ell;
  Fq2 K(ell);
  DotProductVerdict v;
  v.n = report.n;
  v.ell = ell;
  v.p_mod_ell = K.base.red(euler_p(report.n));
  if (C.s() != static_cast<long>(report.points.size()))
    throw ConsistencyFailure("Brandt classes (" + std::to_string(C.s()) + ") and supersingular points (" +
                             std::to_string(report.points.size()) + ") differ in number");

  std::vector<IntMatrix> Bs, As;
  for (long p : {5L, 7L, 11L}) {
    if (p == ell || v.hecke_primes.size() == 2) continue;
    v.hecke_primes.push_back(p);
    IntMatrix Bp(C.s(), std::vector<long>(C.s(), 0));
    for (long i = 0; i < C.s(); ++i)
      for (long j = 0; j < C.s(); ++j) {
        const Rat& x = brandt.mats.at(p - 1).b[i][j];
        if (x.get_den() != 1) throw ConsistencyFailure("non-integral Brandt entry at level 6");
        Bp[i][j] = x.get_num().get_si();
      }
    Bs.push_back(Bp);
    As.push_back(isogeny_graph(report.points, level6_modular_equation(p).phi, K));
  }
  std::vector<std::vector<long>> isos;
  find_isomorphisms(Bs, As, 200000, isos);
  v.isomorphisms = static_cast<long>(isos.size());
  if (isos.empty()) throw ConsistencyFailure("no isomorphism between the Brandt and isogeny graphs");

  Orientations ori = orientations(C);
  OrientedCounts oc = oriented_counts(C, ori, report.delta);
  std::vector<long> h = report.h_fiber();
  bool found = false;
  for (int c2 = 0; c2 < 2 && !found; ++c2)
    for (int c3 = 0; c3 < 2 && !found; ++c3)
      for (int cl = 0; cl < 2 && !found; ++cl) {
        std::vector<long> u = oriented_vector(oc, c2, c3, cl);
        for (const auto& sigma : isos) {
          Rat c = 0;
          bool ok = true;
          for (long i = 0; i < C.s() && ok; ++i) {
            long hv = h[sigma[i]];
            if (hv == 0) {
              ok = u[i] == 0;
            } else if (c == 0) {
              c = Rat(u[i], hv);
              c.canonicalize();
              ok = c != 0;
            } else {
              ok = Rat(u[i]) == c * hv;
            }
          }
          if (!ok) continue;
          found = true;
          v.orientation = {c2, c3, cl};
          v.constant = c;
          v.u = u;
          v.sigma = sigma;
          break;
        }
      }
  if (!found) {
    v.diagnostic = "no orientation and graph isomorphism make the oriented counts proportional to the fiber counts";
    throw ConsistencyFailure(v.diagnostic);
  }
  Fq2::E s = K.make(0);
  for (long i = 0; i < C.s(); ++i) {
    const FiberEntry& f = report.fibers[v.sigma[i]];
    if (v.u[i] && f.has_value) s = K.add(s, K.scale(f.p_tilde, v.u[i]));
  }
  v.pairing = s;
  v.pairing_rational = K.in_prime_field(s);
  Fq2::E rhs = K.neg(K.mul(s, K.inv(K.make(report.delta))));
  v.holds = v.constant == 1 && v.pairing_rational && rhs == K.make(v.p_mod_ell);
  if (v.constant != 1) v.diagnostic = "oriented counts equal " + v.constant.get_str() + " times the fiber counts";
  return v;
}

DotProductVerdict verify_dot_product(long n, long ell) {
  Discriminant d = discriminant_for(n);
  if (kronecker(Int(d.delta), Int(ell)) != -1) throw InvalidInput("the dot-product congruence needs ell inert");
  return verify_dot_product(fiber_match(n, ell), brandt_data(ell, 6, 35));
}

RamifiedReport ramified_grouping_check(long n, long ell) {
  Discriminant d = discriminant_for(n);
  if (mod(d.delta, ell) != 0) throw InvalidInput("ell must divide the discriminant");
  RamifiedReport r;
  r.n = n;
  r.ell = ell;
  r.delta = d.delta;
  r.report = fiber_match(n, ell);
  r.roots_supersingular = r.report.t_roots_supersingular && r.report.fiber_sum() == r.report.h;
  Int p = euler_p(n);
  r.p_valuation = valuation(p, ell);
  r.trace_valuation = valuation(p * Int(-d.delta), ell);
  r.p_divisible = r.p_valuation >= 1;
  r.h_fiber = r.report.h_fiber();
  r.fibers_divisible = std::all_of(r.h_fiber.begin(), r.h_fiber.end(), [&](long x) { return x % ell == 0; });
  return r;
}

long auto_inert_prime(long n, long start) {
  Discriminant d = discriminant_for(n);
  for (long ell = std::max(5L, start);; ++ell)
    if (is_prime(ell) && kronecker(Int(d.delta), Int(ell)) == -1) return ell;
}

std::string report_to_json(const ReductionReport& r, const TraceVerdict* ss, const DotProductVerdict* dot) {
  Fq2 K(r.ell);
  nlohmann::ordered_json j;
  j["n"] = std::to_string(r.n);
  j["ell"] = std::to_string(r.ell);
  j["delta"] = std::to_string(r.delta);
  j["h"] = std::to_string(r.h);
  nlohmann::ordered_json fac = nlohmann::ordered_json::array();
  fac.push_back({nlohmann::ordered_json::array({std::to_string(r.reduced.factorization.unit)}), "1"});
  for (const auto& [f, m] : r.reduced.factorization.factors) {
    nlohmann::ordered_json co = nlohmann::ordered_json::array();
    for (long c : f) co.push_back(std::to_string(c));
    fac.push_back({co, std::to_string(m)});
  }
  j["factorization"] = fac;
  j["factorization_text"] = r.reduced.text();
  j["scaled"] = r.reduced.scaled;
  nlohmann::ordered_json pts = nlohmann::ordered_json::array();
  nlohmann::ordered_json vp = nlohmann::ordered_json::array();
  nlohmann::ordered_json hf = nlohmann::ordered_json::array();
  for (const auto& p : r.points) {
    pts.push_back({{"t", {std::to_string(p.t.a), std::to_string(p.t.b)}},
                   {"j", {std::to_string(p.j.a), std::to_string(p.j.b)}},
                   {"frobenius_partner", std::to_string(p.frobenius_partner)}});
    const FiberEntry& f = r.fibers[p.id];
    if (f.has_value)
      vp.push_back({std::to_string(f.p_tilde.a), std::to_string(f.p_tilde.b)});
    else
      vp.push_back(nullptr);
    hf.push_back(std::to_string(f.h));
  }
  j["points"] = pts;
  j["v_P"] = vp;
  j["h_fiber"] = hf;
  j["fiber_sum"] = std::to_string(r.fiber_sum());
  j["matchings_agree"] = r.matchings_agree;
  j["values_well_defined"] = r.values_well_defined;
  j["frobenius_equivariant"] = r.frobenius_equivariant;
  if (ss) {
    j["p_mod_ell"] = std::to_string(ss->p_mod_ell);
    j["ss_trace_rhs"] = {std::to_string(ss->rhs.a), std::to_string(ss->rhs.b)};
    j["verdict_ss_trace"] = ss->holds;
    j["classwise_rhs"] = {std::to_string(ss->classwise_rhs.a), std::to_string(ss->classwise_rhs.b)};
    j["classwise_holds"] = ss->classwise_holds;
  }
  if (dot) {
    j["verdict_dot_product"] = dot->holds;
    j["pairing"] = {std::to_string(dot->pairing.a), std::to_string(dot->pairing.b)};
    j["orientation_constant"] = dot->constant.get_str();
  }
  return j.dump();
}

}  // namespace cmpart
