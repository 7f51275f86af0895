#include "cmpart/cm_trace.hpp"

#include "cmpart/partition.hpp"

#include <cmath>

namespace cmpart {

SingularModuli singular_moduli(long n, long bits) {
  Discriminant d = discriminant_for(n);
  SingularModuli sm;
  sm.forms = enumerate_classes(d);
  sm.bits = bits;
  for (const auto& f : sm.forms) {
    EvalPoint ep = evaluation_point(f);
    CMPoint cp = cm_point(ep.form, bits);
    QPoint z = make_qpoint(cp.value);
    EvalContext ctx;
    ctx.bits = bits;
    CBall v = eval_P(z, ctx);
    if (atkin_lehner_sign(ep.w) < 0) v = -v;
    sm.terms_used = std::max(sm.terms_used, ctx.terms_used);
    sm.points.push_back(ep);
    sm.values.push_back(std::move(v));
  }
  return sm;
}

long initial_bits(long n) {
  Discriminant d = discriminant_for(n);
  long h = class_number(d);
  return 128 + static_cast<long>(std::ceil(h * std::log2(static_cast<double>(-d.delta))));
}

namespace {

// Bits needed to hold prod (1 + |v|) with some headroom.
long magnitude_bits(const std::vector<CBall>& vals) {
  double s = 0;
  for (const auto& v : vals) s += std::log2(1 + std::exp2(std::max(-60.0, v.abs_upper_log2())));
  return static_cast<long>(std::ceil(s)) + 64;
}

}  // namespace

TraceResult trace(long n, long start_bits, int max_rounds) {
  Discriminant d = discriminant_for(n);
  long bits = start_bits > 0 ? start_bits : initial_bits(n);
  for (int round = 0; round < max_rounds; ++round, bits *= 2) {
    SingularModuli sm = singular_moduli(n, bits);
    CBall sum = CBall::from_si(0, bits);
    for (const auto& v : sm.values) sum = sum + v;
    if (!sum.im.contains(Rat(0))) throw ConsistencyFailure("trace has a nonzero imaginary part");
    Int T;
    try {
      T = recognize_integer(sum.re);
    } catch (const PrecisionFailure&) {
      continue;
    }
    TraceResult r;
    r.n = n;
    r.delta = d.delta;
    r.h = static_cast<long>(sm.values.size());
    r.numeric_trace = sum;
    r.exact_trace = T;
    r.bits_used = bits;
    r.terms_used = sm.terms_used;
    Int m = -d.delta;
    if (T % m != 0) throw ConsistencyFailure("trace " + T.get_str() + " is not divisible by " + m.get_str());
    r.p_of_n = T / m;
    if (r.p_of_n != euler_p(n))
      throw ConsistencyFailure("trace gives p(" + std::to_string(n) + ") = " + r.p_of_n.get_str() +
                               " but the recurrence gives " + euler_p(n).get_str());
    return r;
  }
  throw PrecisionFailure("trace recognition failed for n = " + std::to_string(n));
}

std::vector<CBall> ball_poly_from_roots(const std::vector<CBall>& roots) {
  mpfr_prec_t prec = roots.empty() ? 128 : roots[0].prec();
  std::vector<CBall> c{CBall::from_si(1, prec)};
  for (const auto& r : roots) {
    std::vector<CBall> next(c.size() + 1, CBall::from_si(0, prec));
    for (std::size_t i = 0; i < c.size(); ++i) {
      next[i + 1] = next[i + 1] + c[i];
      next[i] = next[i] - c[i] * r;
    }
    c = std::move(next);
  }
  return c;
}

namespace {

std::vector<Int> recognize_integer_poly(const std::vector<CBall>& c, long& bad_index) {
  std::vector<Int> out;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (!c[i].im.contains(Rat(0))) {
      bad_index = static_cast<long>(i);
      throw PrecisionFailure("coefficient " + std::to_string(i) + " is not real within its radius");
    }
    try {
      out.push_back(recognize_integer(c[i].re));
    } catch (const PrecisionFailure&) {
      bad_index = static_cast<long>(i);
      throw;
    }
  }
  return out;
}

}  // namespace

ClassPolynomial class_polynomial(long n, long start_bits, int max_rounds) {
  Discriminant d = discriminant_for(n);
  TraceResult tr = trace(n, start_bits, max_rounds);
  long bits = tr.bits_used;
  long bad = -1;
  for (int round = 0; round < max_rounds; ++round) {
    SingularModuli sm = singular_moduli(n, bits);
    std::vector<CBall> scaled;
    for (const auto& v : sm.values) scaled.push_back(mul_si(v, d.delta));
    long need = magnitude_bits(scaled);
    if (need > bits) {
      bits = std::max(2 * bits, need);
      continue;
    }
    std::vector<CBall> poly = ball_poly_from_roots(scaled);
    std::vector<Int> Hs;
    try {
      Hs = recognize_integer_poly(poly, bad);
    } catch (const PrecisionFailure&) {
      bits *= 2;
      continue;
    }
    ClassPolynomial cp;
    cp.n = n;
    cp.delta = d.delta;
    cp.h = static_cast<long>(sm.values.size());
    cp.H_scaled = Hs;
    cp.bits_used = bits;
    cp.terms_used = sm.terms_used;
    if (Hs.back() != 1) throw ConsistencyFailure("scaled class polynomial is not monic");
    for (long i = 0; i <= cp.h; ++i) {
      Rat c(Hs[i], ipow(Int(d.delta), cp.h - i));
      c.canonicalize();
      cp.H.push_back(c);
    }
    if (cp.H[cp.h - 1] != Rat(-tr.exact_trace))
      throw ConsistencyFailure("class polynomial subleading coefficient disagrees with the trace");
    return cp;
  }
  throw PrecisionFailure("class polynomial recognition failed for n = " + std::to_string(n) + " at coefficient " +
                         std::to_string(bad));
}

std::vector<CBall> hauptmodul_values(const SingularModuli& sm) {
  const HauptmodulRelation& rel = hauptmodul_relation();
  std::vector<CBall> out;
  for (const auto& ep : sm.points) {
    CMPoint cp = cm_point(ep.form, sm.bits);
    QPoint z = make_qpoint(cp.value);
    EvalContext ctx;
    ctx.bits = sm.bits;
    CBall t = eval_hauptmodul(z, ctx);
    if (ep.w != AL_ID) {
      const auto& m = rel.atkin_lehner[ep.w];
      CBall num = mul_si(t, m[0]) + CBall::from_si(m[1], sm.bits);
      CBall den = mul_si(t, m[2]) + CBall::from_si(m[3], sm.bits);
      t = num / den;
    }
    out.push_back(std::move(t));
  }
  return out;
}

QuadInt recognize_quadratic_integer(const CBall& z, long D0) {
  mpfr_prec_t p = z.prec();
  RBall root = sqrt(RBall::from_si(-D0, p));
  Int v = recognize_integer(mul_si(z.im, 2) / root);
  RBall u = z.re - RBall::from_int(v, p) / RBall::from_si(2, p);
  return {recognize_integer(u), v};
}

std::vector<JointPolynomial> joint_polynomials(long n, const std::vector<long>& shifts, long start_bits,
                                               int max_rounds) {
  std::vector<QuadInt> q;
  for (long c : shifts) q.push_back({Int(c), Int(0)});
  return joint_polynomials(n, q, start_bits, max_rounds);
}

std::vector<JointPolynomial> joint_polynomials(long n, const std::vector<QuadInt>& shifts, long start_bits,
                                               int max_rounds) {
  Discriminant d = discriminant_for(n);
  long bits = start_bits > 0 ? start_bits : initial_bits(n);
  for (int round = 0; round < max_rounds; ++round) {
    SingularModuli sm = singular_moduli(n, bits);
    std::vector<CBall> tv = hauptmodul_values(sm);
    std::vector<JointPolynomial> out;
    bool retry = false;
    // w = (1 + sqrt(D0)) / 2
    RBall half = RBall::from_si(1, bits) / RBall::from_si(2, bits);
    CBall w(half, sqrt(RBall::from_si(-d.fundamental, bits)) * half);
    for (const QuadInt& c : shifts) {
      CBall cv = CBall::from_int(c.u, bits) + w * RBall::from_int(c.v, bits);
      std::vector<CBall> roots;
      for (std::size_t i = 0; i < tv.size(); ++i) roots.push_back(tv[i] + mul_si(sm.values[i], d.delta) * cv);
      long need = magnitude_bits(roots);
      if (need > bits) {
        bits = std::max(2 * bits, need);
        retry = true;
        break;
      }
      std::vector<CBall> poly = ball_poly_from_roots(roots);
      JointPolynomial jp;
      jp.shift = c;
      try {
        for (const auto& co : poly) jp.coeffs.push_back(recognize_quadratic_integer(co, d.fundamental));
      } catch (const PrecisionFailure&) {
        bits *= 2;
        retry = true;
        break;
      }
      out.push_back(std::move(jp));
    }
    if (!retry) return out;
  }
  throw PrecisionFailure("joint polynomial recognition failed for n = " + std::to_string(n));
}

}  // namespace cmpart
