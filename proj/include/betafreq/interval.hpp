#pragma once

#include "betafreq/rational.hpp"

#include <mpfr.h>

#include <string>
#include <utility>

namespace betafreq {

// Closed interval [lo, hi] with mpfr endpoints, rounded outward by every
// operation. This is the working representation behind CertifiedReal and
// the orbit engine.
class Iv {
 public:
  explicit Iv(mpfr_prec_t prec = 128);
  Iv(const Iv& other);
  Iv(Iv&& other) noexcept;
  Iv& operator=(const Iv& other);
  Iv& operator=(Iv&& other) noexcept;
  ~Iv();

  mpfr_prec_t prec() const { return mpfr_get_prec(lo_); }
  // Reallocates endpoints at the given precision (value is discarded).
  void reset_prec(mpfr_prec_t prec);

  static Iv from_rational(const Rational& q, mpfr_prec_t prec);
  static Iv from_si(long v, mpfr_prec_t prec);

  void set_rational(const Rational& q);
  void set_si(long v);
  void set(const Iv& other);  // rounds into this precision

  mpfr_srcptr lo() const { return lo_; }
  mpfr_srcptr hi() const { return hi_; }
  mpfr_ptr lo() { return lo_; }
  mpfr_ptr hi() { return hi_; }

  bool valid() const;  // finite and lo <= hi
  Rational lo_rational() const;
  Rational hi_rational() const;
  Rational radius_upper() const;  // exact (hi - lo)/2, >= true radius
  double approx() const;          // midpoint approximation
  // True when width <= 2^e.
  bool width_below_2exp(long e) const;

  std::string str(int decimals) const;

 private:
  mpfr_t lo_, hi_;
};

// All results are written into `r` at r's precision, outward rounded.
// Aliasing r with an operand is allowed.
void iv_add(Iv& r, const Iv& a, const Iv& b);
void iv_sub(Iv& r, const Iv& a, const Iv& b);
void iv_neg(Iv& r, const Iv& a);
void iv_mul(Iv& r, const Iv& a, const Iv& b);
void iv_div(Iv& r, const Iv& a, const Iv& b);  // b must exclude 0
void iv_add_q(Iv& r, const Iv& a, const Rational& q);
void iv_sub_si(Iv& r, const Iv& a, long v);
void iv_mul_si(Iv& r, const Iv& a, long v);
void iv_pow_ui(Iv& r, const Iv& a, unsigned long e);  // requires a.lo >= 0
void iv_log(Iv& r, const Iv& a);  // requires a.lo > 0
void iv_exp(Iv& r, const Iv& a);
void iv_sqrt(Iv& r, const Iv& a);  // requires a.lo >= 0

// -1 if a < b certified (a.hi < b.lo), +1 if a > b certified, 0 if the
// enclosures touch or overlap.
int iv_cmp(const Iv& a, const Iv& b);
int iv_cmp_q(const Iv& a, const Rational& q);

// Certified containment of a in the closed interval [lo, hi].
bool iv_inside(const Iv& a, const Iv& lo, const Iv& hi);
// Certified disjointness from [lo, hi].
bool iv_outside(const Iv& a, const Iv& lo, const Iv& hi);

}  // namespace betafreq
