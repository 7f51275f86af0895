#include "cmpart/ball.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace cmpart {

namespace {

constexpr mpfr_prec_t R = RBall::kRadPrec;

struct Tmp {
  mpfr_t v;
  explicit Tmp(mpfr_prec_t p = R) { mpfr_init2(v, p); }
  ~Tmp() { mpfr_clear(v); }
  Tmp(const Tmp&) = delete;
  Tmp& operator=(const Tmp&) = delete;
  operator mpfr_ptr() { return v; }
  mpfr_ptr operator->() { return v; }
};

// rad += |m| * 2^(1 - prec(m)); bounds a round-to-nearest error with margin.
void add_round_err(mpfr_ptr rad, mpfr_srcptr m) {
  if (mpfr_zero_p(m)) return;
  Tmp t;
  mpfr_abs(t, m, MPFR_RNDU);
  mpfr_mul_2si(t, t, 1 - static_cast<long>(mpfr_get_prec(m)), MPFR_RNDU);
  mpfr_add(rad, rad, t, MPFR_RNDU);
}

// |m| rounded up (or down) to radius precision
void abs_up(mpfr_ptr out, mpfr_srcptr m) { mpfr_abs(out, m, MPFR_RNDU); }
void abs_down(mpfr_ptr out, mpfr_srcptr m) { mpfr_abs(out, m, MPFR_RNDD); }

Rat exact(mpfr_srcptr x) {
  Rat q;
  mpfr_get_q(q.get_mpq_t(), x);
  return q;
}

}  // namespace

RBall::RBall(mpfr_prec_t prec) {
  mpfr_init2(mid_, prec);
  mpfr_init2(rad_, R);
  mpfr_set_zero(mid_, 1);
  mpfr_set_zero(rad_, 1);
}

RBall::RBall(const RBall& o) {
  mpfr_init2(mid_, o.prec());
  mpfr_init2(rad_, R);
  mpfr_set(mid_, o.mid_, MPFR_RNDN);
  mpfr_set(rad_, o.rad_, MPFR_RNDU);
}

RBall::RBall(RBall&& o) noexcept {
  mpfr_init2(mid_, 2);
  mpfr_init2(rad_, R);
  mpfr_swap(mid_, o.mid_);
  mpfr_swap(rad_, o.rad_);
}

RBall& RBall::operator=(const RBall& o) {
  if (this != &o) {
    mpfr_set_prec(mid_, o.prec());
    mpfr_set(mid_, o.mid_, MPFR_RNDN);
    mpfr_set(rad_, o.rad_, MPFR_RNDU);
  }
  return *this;
}

RBall& RBall::operator=(RBall&& o) noexcept {
  mpfr_swap(mid_, o.mid_);
  mpfr_swap(rad_, o.rad_);
  return *this;
}

RBall::~RBall() {
  mpfr_clear(mid_);
  mpfr_clear(rad_);
}

RBall RBall::from_int(const Int& z, mpfr_prec_t prec) {
  RBall b(prec);
  if (mpfr_set_z(b.mid_, z.get_mpz_t(), MPFR_RNDN) != 0) add_round_err(b.rad_, b.mid_);
  return b;
}

RBall RBall::from_rat(const Rat& q, mpfr_prec_t prec) {
  RBall b(prec);
  if (mpfr_set_q(b.mid_, q.get_mpq_t(), MPFR_RNDN) != 0) add_round_err(b.rad_, b.mid_);
  return b;
}

RBall RBall::from_si(long v, mpfr_prec_t prec) {
  RBall b(prec);
  if (mpfr_set_si(b.mid_, v, MPFR_RNDN) != 0) add_round_err(b.rad_, b.mid_);
  return b;
}

RBall RBall::pi(mpfr_prec_t prec) {
  RBall b(prec);
  mpfr_const_pi(b.mid_, MPFR_RNDN);
  add_round_err(b.rad_, b.mid_);
  return b;
}

double RBall::rad_log2() const {
  if (mpfr_zero_p(rad_)) return -std::numeric_limits<double>::infinity();
  Tmp t;
  mpfr_log2(t, rad_, MPFR_RNDU);
  return mpfr_get_d(t, MPFR_RNDU);
}

double RBall::abs_upper_d() const {
  Tmp t;
  abs_up(t, mid_);
  mpfr_add(t, t, rad_, MPFR_RNDU);
  return mpfr_get_d(t, MPFR_RNDU);
}

double RBall::abs_upper_log2() const {
  Tmp t;
  abs_up(t, mid_);
  mpfr_add(t, t, rad_, MPFR_RNDU);
  if (mpfr_zero_p(t)) return -std::numeric_limits<double>::infinity();
  mpfr_log2(t, t, MPFR_RNDU);
  return mpfr_get_d(t, MPFR_RNDU);
}

bool RBall::contains(const Rat& q) const {
  Rat d = q - exact(mid_);
  return abs(d) <= exact(rad_);
}

bool RBall::contains_zero() const { return contains(Rat(0)); }

bool RBall::positive() const {
  Tmp t;
  abs_down(t, mid_);
  return mpfr_sgn(mid_) > 0 && mpfr_cmp(t, rad_) > 0;
}

bool RBall::negative() const {
  Tmp t;
  abs_down(t, mid_);
  return mpfr_sgn(mid_) < 0 && mpfr_cmp(t, rad_) > 0;
}

bool RBall::overlaps(const RBall& o) const {
  return abs(exact(mid_) - exact(o.mid_)) <= exact(rad_) + exact(o.rad_);
}

bool RBall::contains(const RBall& o) const {
  return abs(exact(mid_) - exact(o.mid_)) + exact(o.rad_) <= exact(rad_);
}

void RBall::add_error(mpfr_srcptr e) {
  Tmp t;
  mpfr_abs(t, e, MPFR_RNDU);
  mpfr_add(rad_, rad_, t, MPFR_RNDU);
}

void RBall::add_error_log2(double lg) {
  if (std::isinf(lg) && lg < 0) return;
  Tmp t;
  // 2^ceil-ish: add a tiny margin for the double rounding of lg itself
  mpfr_set_d(t, lg + 1e-9 * std::max(1.0, std::abs(lg)), MPFR_RNDU);
  mpfr_exp2(t, t, MPFR_RNDU);
  mpfr_add(rad_, rad_, t, MPFR_RNDU);
}

std::string RBall::to_string(int digits) const {
  std::vector<char> buf(static_cast<std::size_t>(digits) + 64);
  mpfr_snprintf(buf.data(), buf.size(), "%.*Rg", digits, mid_);
  std::string s(buf.data());
  mpfr_snprintf(buf.data(), buf.size(), " +/- %.3Rg", rad_);
  return s + buf.data();
}

RBall RBall::operator-() const {
  RBall r(*this);
  mpfr_neg(r.mid_, r.mid_, MPFR_RNDN);
  return r;
}

RBall operator+(const RBall& a, const RBall& b) {
  RBall r(std::max(a.prec(), b.prec()));
  int t = mpfr_add(r.mid_mut(), a.mid(), b.mid(), MPFR_RNDN);
  mpfr_add(r.rad_mut(), a.rad(), b.rad(), MPFR_RNDU);
  if (t) add_round_err(r.rad_mut(), r.mid());
  return r;
}

RBall operator-(const RBall& a, const RBall& b) {
  RBall r(std::max(a.prec(), b.prec()));
  int t = mpfr_sub(r.mid_mut(), a.mid(), b.mid(), MPFR_RNDN);
  mpfr_add(r.rad_mut(), a.rad(), b.rad(), MPFR_RNDU);
  if (t) add_round_err(r.rad_mut(), r.mid());
  return r;
}

RBall operator*(const RBall& a, const RBall& b) {
  RBall r(std::max(a.prec(), b.prec()));
  int t = mpfr_mul(r.mid_mut(), a.mid(), b.mid(), MPFR_RNDN);
  Tmp x, y;
  abs_up(x, a.mid());
  mpfr_mul(x, x, b.rad(), MPFR_RNDU);
  abs_up(y, b.mid());
  mpfr_mul(y, y, a.rad(), MPFR_RNDU);
  mpfr_add(x, x, y, MPFR_RNDU);
  mpfr_mul(y, a.rad(), b.rad(), MPFR_RNDU);
  mpfr_add(r.rad_mut(), x, y, MPFR_RNDU);
  if (t) add_round_err(r.rad_mut(), r.mid());
  return r;
}

RBall operator/(const RBall& a, const RBall& b) {
  Tmp den;
  abs_down(den, b.mid());
  mpfr_sub(den, den, b.rad(), MPFR_RNDD);
  if (mpfr_sgn(den) <= 0) throw PrecisionFailure("division by a ball containing zero");
  RBall r(std::max(a.prec(), b.prec()));
  int t = mpfr_div(r.mid_mut(), a.mid(), b.mid(), MPFR_RNDN);
  Tmp q, num;
  abs_up(q, a.mid());
  Tmp bd;
  abs_down(bd, b.mid());
  mpfr_div(q, q, bd, MPFR_RNDU);
  mpfr_mul(num, q, b.rad(), MPFR_RNDU);
  mpfr_add(num, num, a.rad(), MPFR_RNDU);
  mpfr_div(r.rad_mut(), num, den, MPFR_RNDU);
  if (t) add_round_err(r.rad_mut(), r.mid());
  return r;
}

RBall sqrt(const RBall& a) {
  Tmp lo;
  mpfr_sub(lo, a.mid(), a.rad(), MPFR_RNDD);
  if (mpfr_sgn(lo) <= 0) {
    if (mpfr_zero_p(a.rad()) && mpfr_zero_p(a.mid())) return RBall(a.prec());
    throw PrecisionFailure("sqrt of a ball reaching zero or below");
  }
  RBall r(a.prec());
  int t = mpfr_sqrt(r.mid_mut(), a.mid(), MPFR_RNDN);
  mpfr_sqrt(lo, lo, MPFR_RNDD);
  mpfr_div(r.rad_mut(), a.rad(), lo, MPFR_RNDU);
  if (t) add_round_err(r.rad_mut(), r.mid());
  return r;
}

RBall exp(const RBall& a) {
  RBall r(a.prec());
  int t = mpfr_exp(r.mid_mut(), a.mid(), MPFR_RNDN);
  if (!mpfr_zero_p(a.rad())) {
    Tmp up, em;
    mpfr_exp(up, a.mid(), MPFR_RNDU);
    mpfr_expm1(em, a.rad(), MPFR_RNDU);
    mpfr_mul(r.rad_mut(), up, em, MPFR_RNDU);
  }
  if (t) add_round_err(r.rad_mut(), r.mid());
  return r;
}

RBall cos(const RBall& a) {
  RBall r(a.prec());
  int t = mpfr_cos(r.mid_mut(), a.mid(), MPFR_RNDN);
  mpfr_set(r.rad_mut(), a.rad(), MPFR_RNDU);
  if (t) add_round_err(r.rad_mut(), r.mid());
  return r;
}

RBall sin(const RBall& a) {
  RBall r(a.prec());
  int t = mpfr_sin(r.mid_mut(), a.mid(), MPFR_RNDN);
  mpfr_set(r.rad_mut(), a.rad(), MPFR_RNDU);
  if (t) add_round_err(r.rad_mut(), r.mid());
  return r;
}

RBall mul_si(const RBall& a, long k) {
  RBall r(a.prec());
  int t = mpfr_mul_si(r.mid_mut(), a.mid(), k, MPFR_RNDN);
  mpfr_mul_ui(r.rad_mut(), a.rad(), static_cast<unsigned long>(k < 0 ? -k : k), MPFR_RNDU);
  if (t) add_round_err(r.rad_mut(), r.mid());
  return r;
}

RBall div_si(const RBall& a, long k) {
  if (k == 0) throw InvalidInput("division by zero");
  RBall r(a.prec());
  int t = mpfr_div_si(r.mid_mut(), a.mid(), k, MPFR_RNDN);
  mpfr_div_ui(r.rad_mut(), a.rad(), static_cast<unsigned long>(k < 0 ? -k : k), MPFR_RNDU);
  if (t) add_round_err(r.rad_mut(), r.mid());
  return r;
}

double CBall::abs_upper_log2() const {
  Tmp x, y;
  abs_up(x, re.mid());
  mpfr_add(x, x, re.rad(), MPFR_RNDU);
  abs_up(y, im.mid());
  mpfr_add(y, y, im.rad(), MPFR_RNDU);
  mpfr_hypot(x, x, y, MPFR_RNDU);
  if (mpfr_zero_p(x)) return -std::numeric_limits<double>::infinity();
  mpfr_log2(x, x, MPFR_RNDU);
  return mpfr_get_d(x, MPFR_RNDU);
}

double CBall::abs_upper_d() const { return std::exp2(abs_upper_log2()) * (1 + 1e-12); }

double CBall::rad_log2() const { return std::max(re.rad_log2(), im.rad_log2()); }

std::string CBall::to_string(int digits) const { return "(" + re.to_string(digits) + ") + i(" + im.to_string(digits) + ")"; }

CBall operator+(const CBall& a, const CBall& b) { return {a.re + b.re, a.im + b.im}; }
CBall operator-(const CBall& a, const CBall& b) { return {a.re - b.re, a.im - b.im}; }
CBall operator*(const CBall& a, const CBall& b) { return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re}; }
CBall operator*(const CBall& a, const RBall& b) { return {a.re * b, a.im * b}; }
CBall sqr(const CBall& a) { return {a.re * a.re - a.im * a.im, mul_si(a.re * a.im, 2)}; }
RBall abs2(const CBall& a) { return a.re * a.re + a.im * a.im; }
CBall operator/(const CBall& a, const CBall& b) {
  RBall d = abs2(b);
  CBall n = a * b.conj();
  return {n.re / d, n.im / d};
}
CBall operator/(const CBall& a, const RBall& b) { return {a.re / b, a.im / b}; }
CBall exp(const CBall& z) {
  RBall m = exp(z.re);
  return {m * cos(z.im), m * sin(z.im)};
}
CBall mul_si(const CBall& a, long k) { return {mul_si(a.re, k), mul_si(a.im, k)}; }

Int recognize_integer(const RBall& b) {
  Int k;
  mpfr_get_z(k.get_mpz_t(), b.mid(), MPFR_RNDN);
  // the ball must contain exactly one integer: radius below 1/2 and k inside
  Rat rad = exact(b.rad());
  if (rad * 2 >= 1 || abs(exact(b.mid()) - Rat(k)) > rad)
    throw PrecisionFailure("integer recognition failed: ball " + b.to_string(12));
  return k;
}

Rat recognize_rational(const RBall& b, const Int& denom_bound) {
  Rat rad = exact(b.rad());
  if (rad * 2 * denom_bound * denom_bound >= 1)
    throw PrecisionFailure("rational recognition: radius too large for the denominator bound");
  Rat x = exact(b.mid());
  // continued-fraction convergents of x
  Int h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  Int num = x.get_num(), den = x.get_den();
  while (true) {
    Int a;
    mpz_fdiv_q(a.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    Int h2 = a * h1 + h0, k2 = a * k1 + k0;
    if (k2 > denom_bound) break;
    Rat cand(h2, k2);
    cand.canonicalize();
    if (abs(cand - x) <= rad) return cand;
    h0 = h1;
    h1 = h2;
    k0 = k1;
    k1 = k2;
    Int r = num - a * den;
    if (r == 0) break;
    num = den;
    den = r;
  }
  throw PrecisionFailure("rational recognition failed: no rational of bounded denominator in ball");
}

}  // namespace cmpart
