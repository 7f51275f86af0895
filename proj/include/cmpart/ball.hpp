#pragma once

#include "cmpart/common.hpp"

#include <mpfr.h>

#include <string>

namespace cmpart {

// Real ball [mid - rad, mid + rad]. The midpoint carries the working precision, the radius
// is a short upward-rounded float. Every operation returns a ball containing all exact results
// for inputs drawn from the operand balls.
class RBall {
 public:
  static constexpr mpfr_prec_t kRadPrec = 64;

  explicit RBall(mpfr_prec_t prec = 128);
  RBall(const RBall& o);
  RBall(RBall&& o) noexcept;
  RBall& operator=(const RBall& o);
  RBall& operator=(RBall&& o) noexcept;
  ~RBall();

  static RBall from_int(const Int& z, mpfr_prec_t prec);
  static RBall from_rat(const Rat& q, mpfr_prec_t prec);
  static RBall from_si(long v, mpfr_prec_t prec);
  static RBall pi(mpfr_prec_t prec);

  mpfr_prec_t prec() const { return mpfr_get_prec(mid_); }
  mpfr_srcptr mid() const { return mid_; }
  mpfr_srcptr rad() const { return rad_; }
  mpfr_ptr mid_mut() { return mid_; }
  mpfr_ptr rad_mut() { return rad_; }

  double mid_d() const { return mpfr_get_d(mid_, MPFR_RNDN); }
  double rad_d() const { return mpfr_get_d(rad_, MPFR_RNDU); }
  // log2 of the radius (-inf for an exact ball).
  double rad_log2() const;
  // upper bound of |x| as a double (may be +inf for huge values)
  double abs_upper_d() const;
  double abs_upper_log2() const;

  bool contains(const Rat& q) const;
  bool contains_zero() const;
  bool positive() const;  // strictly, for every point of the ball
  bool negative() const;
  // the two balls share at least one point
  bool overlaps(const RBall& o) const;
  bool contains(const RBall& o) const;

  void add_error(mpfr_srcptr e);  // rad += e
  void add_error_log2(double lg);  // rad += 2^lg (rounded up)

  std::string to_string(int digits = 20) const;

  RBall operator-() const;

 private:
  mpfr_t mid_;
  mpfr_t rad_;
};

RBall operator+(const RBall& a, const RBall& b);
RBall operator-(const RBall& a, const RBall& b);
RBall operator*(const RBall& a, const RBall& b);
RBall operator/(const RBall& a, const RBall& b);
RBall sqrt(const RBall& a);
RBall exp(const RBall& a);
RBall cos(const RBall& a);
RBall sin(const RBall& a);
RBall mul_si(const RBall& a, long k);
RBall div_si(const RBall& a, long k);

class CBall {
 public:
  explicit CBall(mpfr_prec_t prec = 128) : re(prec), im(prec) {}
  CBall(RBall r, RBall i) : re(std::move(r)), im(std::move(i)) {}
  static CBall from_int(const Int& z, mpfr_prec_t prec) { return {RBall::from_int(z, prec), RBall::from_si(0, prec)}; }
  static CBall from_si(long v, mpfr_prec_t prec) { return {RBall::from_si(v, prec), RBall::from_si(0, prec)}; }
  static CBall from_rat(const Rat& q, mpfr_prec_t prec) { return {RBall::from_rat(q, prec), RBall::from_si(0, prec)}; }

  mpfr_prec_t prec() const { return re.prec(); }
  CBall conj() const { return {re, -im}; }
  CBall operator-() const { return {-re, -im}; }
  double abs_upper_d() const;
  double abs_upper_log2() const;
  double rad_log2() const;  // log2 of max(re radius, im radius)
  bool overlaps(const CBall& o) const { return re.overlaps(o.re) && im.overlaps(o.im); }
  bool contains(const CBall& o) const { return re.contains(o.re) && im.contains(o.im); }
  std::string to_string(int digits = 20) const;

  RBall re, im;
};

CBall operator+(const CBall& a, const CBall& b);
CBall operator-(const CBall& a, const CBall& b);
CBall operator*(const CBall& a, const CBall& b);
CBall operator*(const CBall& a, const RBall& b);
CBall operator/(const CBall& a, const CBall& b);
CBall operator/(const CBall& a, const RBall& b);
CBall exp(const CBall& z);
CBall mul_si(const CBall& a, long k);
CBall sqr(const CBall& a);
RBall abs2(const CBall& a);

// Unique integer inside the ball, or throws PrecisionFailure.
Int recognize_integer(const RBall& b);
// Unique rational with denominator <= denom_bound inside the ball; requires
// radius < 1/(2 denom_bound^2). Throws PrecisionFailure otherwise.
Rat recognize_rational(const RBall& b, const Int& denom_bound);

}  // namespace cmpart
