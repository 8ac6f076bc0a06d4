#include "betafreq/interval.hpp"

#include "betafreq/errors.hpp"

#include <algorithm>
#include <cassert>
#include <cstdio>
#include <vector>

namespace betafreq {

Iv::Iv(mpfr_prec_t prec) {
  mpfr_init2(lo_, prec);
  mpfr_init2(hi_, prec);
  mpfr_set_zero(lo_, 1);
  mpfr_set_zero(hi_, 1);
}

Iv::Iv(const Iv& other) {
  mpfr_init2(lo_, other.prec());
  mpfr_init2(hi_, other.prec());
  mpfr_set(lo_, other.lo_, MPFR_RNDD);
  mpfr_set(hi_, other.hi_, MPFR_RNDU);
}

Iv::Iv(Iv&& other) noexcept {
  mpfr_init2(lo_, MPFR_PREC_MIN);
  mpfr_init2(hi_, MPFR_PREC_MIN);
  mpfr_swap(lo_, other.lo_);
  mpfr_swap(hi_, other.hi_);
}

Iv& Iv::operator=(const Iv& other) {
  if (this != &other) {
    mpfr_set_prec(lo_, other.prec());
    mpfr_set_prec(hi_, other.prec());
    mpfr_set(lo_, other.lo_, MPFR_RNDD);
    mpfr_set(hi_, other.hi_, MPFR_RNDU);
  }
  return *this;
}

Iv& Iv::operator=(Iv&& other) noexcept {
  if (this != &other) {
    mpfr_swap(lo_, other.lo_);
    mpfr_swap(hi_, other.hi_);
  }
  return *this;
}

Iv::~Iv() {
  mpfr_clear(lo_);
  mpfr_clear(hi_);
}

void Iv::reset_prec(mpfr_prec_t prec) {
  mpfr_set_prec(lo_, prec);
  mpfr_set_prec(hi_, prec);
  mpfr_set_zero(lo_, 1);
  mpfr_set_zero(hi_, 1);
}

Iv Iv::from_rational(const Rational& q, mpfr_prec_t prec) {
  Iv r(prec);
  r.set_rational(q);
  return r;
}

Iv Iv::from_si(long v, mpfr_prec_t prec) {
  Iv r(prec);
  r.set_si(v);
  return r;
}

void Iv::set_rational(const Rational& q) {
  mpfr_set_q(lo_, q.backend().data(), MPFR_RNDD);
  mpfr_set_q(hi_, q.backend().data(), MPFR_RNDU);
}

void Iv::set_si(long v) {
  mpfr_set_si(lo_, v, MPFR_RNDD);
  mpfr_set_si(hi_, v, MPFR_RNDU);
}

void Iv::set(const Iv& other) {
  mpfr_set(lo_, other.lo_, MPFR_RNDD);
  mpfr_set(hi_, other.hi_, MPFR_RNDU);
}

bool Iv::valid() const {
  return mpfr_number_p(lo_) && mpfr_number_p(hi_) &&
         mpfr_cmp(lo_, hi_) <= 0;
}

namespace {

Rational mpfr_to_rational(mpfr_srcptr x) {
  Rational q;
  mpfr_get_q(q.backend().data(), x);
  return q;
}

}  // namespace

Rational Iv::lo_rational() const { return mpfr_to_rational(lo_); }
Rational Iv::hi_rational() const { return mpfr_to_rational(hi_); }

Rational Iv::radius_upper() const {
  return (hi_rational() - lo_rational()) / 2;
}

double Iv::approx() const {
  double a = mpfr_get_d(lo_, MPFR_RNDN);
  double b = mpfr_get_d(hi_, MPFR_RNDN);
  return (a + b) / 2;
}

bool Iv::width_below_2exp(long e) const {
  if (!valid()) return false;
  if (mpfr_equal_p(lo_, hi_)) return true;
  mpfr_t w;
  mpfr_init2(w, prec());
  mpfr_sub(w, hi_, lo_, MPFR_RNDU);
  bool ok = mpfr_cmp_si_2exp(w, 1, e) <= 0;
  mpfr_clear(w);
  return ok;
}

std::string Iv::str(int decimals) const {
  char* lo_s = nullptr;
  char* hi_s = nullptr;
  mpfr_asprintf(&lo_s, "%.*Rg", decimals, lo_);
  mpfr_asprintf(&hi_s, "%.*Rg", decimals, hi_);
  std::string out = std::string("[") + lo_s + ", " + hi_s + "]";
  mpfr_free_str(lo_s);
  mpfr_free_str(hi_s);
  return out;
}

void iv_add(Iv& r, const Iv& a, const Iv& b) {
  mpfr_add(r.lo(), a.lo(), b.lo(), MPFR_RNDD);
  mpfr_add(r.hi(), a.hi(), b.hi(), MPFR_RNDU);
}

void iv_sub(Iv& r, const Iv& a, const Iv& b) {
  if (&r == &b) {
    Iv tmp(b);
    iv_sub(r, a, tmp);
    return;
  }
  mpfr_sub(r.lo(), a.lo(), b.hi(), MPFR_RNDD);
  mpfr_sub(r.hi(), a.hi(), b.lo(), MPFR_RNDU);
}

void iv_neg(Iv& r, const Iv& a) {
  if (&r == &a) {
    mpfr_swap(r.lo(), r.hi());
    mpfr_neg(r.lo(), r.lo(), MPFR_RNDD);
    mpfr_neg(r.hi(), r.hi(), MPFR_RNDU);
    return;
  }
  mpfr_neg(r.lo(), a.hi(), MPFR_RNDD);
  mpfr_neg(r.hi(), a.lo(), MPFR_RNDU);
}

namespace {

// Generic product: min/max over the four endpoint products, each computed
// with the rounding that preserves enclosure.
void mul_generic(Iv& r, const Iv& a, const Iv& b) {
  mpfr_t p, best_lo, best_hi;
  mpfr_prec_t prec = r.prec();
  mpfr_init2(p, prec);
  mpfr_init2(best_lo, prec);
  mpfr_init2(best_hi, prec);
  mpfr_srcptr as[2] = {a.lo(), a.hi()};
  mpfr_srcptr bs[2] = {b.lo(), b.hi()};
  bool first = true;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      mpfr_mul(p, as[i], bs[j], MPFR_RNDD);
      if (first || mpfr_cmp(p, best_lo) < 0) mpfr_set(best_lo, p, MPFR_RNDD);
      mpfr_mul(p, as[i], bs[j], MPFR_RNDU);
      if (first || mpfr_cmp(p, best_hi) > 0) mpfr_set(best_hi, p, MPFR_RNDU);
      first = false;
    }
  mpfr_set(r.lo(), best_lo, MPFR_RNDD);
  mpfr_set(r.hi(), best_hi, MPFR_RNDU);
  mpfr_clear(p);
  mpfr_clear(best_lo);
  mpfr_clear(best_hi);
}

}  // namespace

void iv_mul(Iv& r, const Iv& a, const Iv& b) {
  // Fast path for the dominant case in orbit stepping: both operands
  // nonnegative, so lo*lo and hi*hi are the extremes.
  if (&r != &a && &r != &b && mpfr_sgn(a.lo()) >= 0 && mpfr_sgn(b.lo()) >= 0) {
    mpfr_mul(r.lo(), a.lo(), b.lo(), MPFR_RNDD);
    mpfr_mul(r.hi(), a.hi(), b.hi(), MPFR_RNDU);
    return;
  }
  Iv tmp(r.prec());
  mul_generic(tmp, a, b);
  r.set(tmp);
}

void iv_div(Iv& r, const Iv& a, const Iv& b) {
  if (mpfr_sgn(b.lo()) <= 0 && mpfr_sgn(b.hi()) >= 0)
    throw DomainError("interval division by an enclosure containing zero");
  mpfr_t q, best_lo, best_hi;
  mpfr_prec_t prec = r.prec();
  mpfr_init2(q, prec);
  mpfr_init2(best_lo, prec);
  mpfr_init2(best_hi, prec);
  mpfr_srcptr as[2] = {a.lo(), a.hi()};
  mpfr_srcptr bs[2] = {b.lo(), b.hi()};
  bool first = true;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      mpfr_div(q, as[i], bs[j], MPFR_RNDD);
      if (first || mpfr_cmp(q, best_lo) < 0) mpfr_set(best_lo, q, MPFR_RNDD);
      mpfr_div(q, as[i], bs[j], MPFR_RNDU);
      if (first || mpfr_cmp(q, best_hi) > 0) mpfr_set(best_hi, q, MPFR_RNDU);
      first = false;
    }
  mpfr_set(r.lo(), best_lo, MPFR_RNDD);
  mpfr_set(r.hi(), best_hi, MPFR_RNDU);
  mpfr_clear(q);
  mpfr_clear(best_lo);
  mpfr_clear(best_hi);
}

void iv_add_q(Iv& r, const Iv& a, const Rational& q) {
  mpfr_add_q(r.lo(), a.lo(), q.backend().data(), MPFR_RNDD);
  mpfr_add_q(r.hi(), a.hi(), q.backend().data(), MPFR_RNDU);
}

void iv_sub_si(Iv& r, const Iv& a, long v) {
  mpfr_sub_si(r.lo(), a.lo(), v, MPFR_RNDD);
  mpfr_sub_si(r.hi(), a.hi(), v, MPFR_RNDU);
}

void iv_mul_si(Iv& r, const Iv& a, long v) {
  if (v >= 0) {
    mpfr_mul_si(r.lo(), a.lo(), v, MPFR_RNDD);
    mpfr_mul_si(r.hi(), a.hi(), v, MPFR_RNDU);
  } else {
    if (&r == &a) {
      Iv tmp(a);
      iv_mul_si(r, tmp, v);
      return;
    }
    mpfr_mul_si(r.lo(), a.hi(), v, MPFR_RNDD);
    mpfr_mul_si(r.hi(), a.lo(), v, MPFR_RNDU);
  }
}

void iv_pow_ui(Iv& r, const Iv& a, unsigned long e) {
  if (mpfr_sgn(a.lo()) < 0)
    throw DomainError("iv_pow_ui requires a nonnegative base enclosure");
  mpfr_pow_ui(r.lo(), a.lo(), e, MPFR_RNDD);
  mpfr_pow_ui(r.hi(), a.hi(), e, MPFR_RNDU);
}

void iv_log(Iv& r, const Iv& a) {
  if (mpfr_sgn(a.lo()) <= 0)
    throw DomainError("iv_log requires a strictly positive enclosure");
  mpfr_log(r.lo(), a.lo(), MPFR_RNDD);
  mpfr_log(r.hi(), a.hi(), MPFR_RNDU);
}

void iv_exp(Iv& r, const Iv& a) {
  mpfr_exp(r.lo(), a.lo(), MPFR_RNDD);
  mpfr_exp(r.hi(), a.hi(), MPFR_RNDU);
}

void iv_sqrt(Iv& r, const Iv& a) {
  if (mpfr_sgn(a.lo()) < 0)
    throw DomainError("iv_sqrt requires a nonnegative enclosure");
  mpfr_sqrt(r.lo(), a.lo(), MPFR_RNDD);
  mpfr_sqrt(r.hi(), a.hi(), MPFR_RNDU);
}

int iv_cmp(const Iv& a, const Iv& b) {
  if (mpfr_cmp(a.hi(), b.lo()) < 0) return -1;
  if (mpfr_cmp(a.lo(), b.hi()) > 0) return 1;
  return 0;
}

int iv_cmp_q(const Iv& a, const Rational& q) {
  if (mpfr_cmp_q(a.hi(), q.backend().data()) < 0) return -1;
  if (mpfr_cmp_q(a.lo(), q.backend().data()) > 0) return 1;
  return 0;
}

bool iv_inside(const Iv& a, const Iv& lo, const Iv& hi) {
  return mpfr_cmp(a.lo(), lo.hi()) >= 0 && mpfr_cmp(a.hi(), hi.lo()) <= 0;
}

bool iv_outside(const Iv& a, const Iv& lo, const Iv& hi) {
  return mpfr_cmp(a.hi(), lo.lo()) < 0 || mpfr_cmp(a.lo(), hi.hi()) > 0;
}

}  // namespace betafreq
