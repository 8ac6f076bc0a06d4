#include "betafreq/roots.hpp"

#include "betafreq/errors.hpp"

#include <mpfr.h>

#include <algorithm>
#include <sstream>

namespace betafreq {

Poly::Poly(std::vector<Int> coeffs) : c(std::move(coeffs)) {
  while (c.size() > 1 && c.back() == 0) c.pop_back();
  if (c.empty()) c.push_back(Int(0));
}

Poly Poly::derivative() const {
  std::vector<Int> d;
  for (size_t i = 1; i < c.size(); ++i) d.push_back(c[i] * Int(i));
  if (d.empty()) d.push_back(Int(0));
  return Poly(std::move(d));
}

int Poly::sign_at(const Rational& x) const {
  // sign(p(a/b)) = sign(sum c_i a^i b^{deg-i}), computed in integers.
  const Int a = numerator(x);
  const Int b = denominator(x);
  const int deg = degree();
  Int acc = c[deg];
  Int bp = 1;
  for (int i = deg - 1; i >= 0; --i) {
    bp *= b;
    acc = acc * a + c[i] * bp;
  }
  return acc.sign();
}

Rational Poly::eval(const Rational& x) const {
  Rational acc = Rational(c[degree()]);
  for (int i = degree() - 1; i >= 0; --i) acc = acc * x + Rational(c[i]);
  return acc;
}

std::string Poly::str() const {
  std::ostringstream os;
  bool any = false;
  for (int i = degree(); i >= 0; --i) {
    if (c[i] == 0 && degree() > 0) continue;
    if (any) os << (c[i] > 0 ? " + " : " - ");
    else if (c[i] < 0) os << "-";
    Int mag = abs(c[i]);
    if (mag != 1 || i == 0) os << mag.str();
    if (i >= 1) os << "x";
    if (i >= 2) os << "^" << i;
    any = true;
  }
  if (!any) os << "0";
  return os.str();
}

Poly Poly::critical(unsigned n) {
  std::vector<Int> c(n + 2, Int(0));
  c[0] = -1;
  c[n] = -1;
  c[n + 1] = 1;
  return Poly(std::move(c));
}

namespace {

void mpfr_poly_eval(mpfr_t r, const Poly& p, mpfr_srcptr x) {
  mpfr_set_z(r, p.c[p.degree()].backend().data(), MPFR_RNDN);
  for (int i = p.degree() - 1; i >= 0; --i) {
    mpfr_mul(r, r, x, MPFR_RNDN);
    mpfr_add_z(r, r, p.c[i].backend().data(), MPFR_RNDN);
  }
}

// Sign of p at a rational point, certified by outward-rounded interval
// Horner; 0 means the enclosure straddles zero and the caller must fall
// back to exact arithmetic. Far cheaper than an exact evaluation when the
// point has millions of bits.
int interval_sign_at(const Poly& p, const Rational& x, mpfr_prec_t wp) {
  Iv xi = Iv::from_rational(x, wp);
  Iv acc(wp), t(wp);
  mpfr_set_z(acc.lo(), p.c[p.degree()].backend().data(), MPFR_RNDD);
  mpfr_set_z(acc.hi(), p.c[p.degree()].backend().data(), MPFR_RNDU);
  for (int i = p.degree() - 1; i >= 0; --i) {
    iv_mul(t, acc, xi);
    mpfr_add_z(acc.lo(), t.lo(), p.c[i].backend().data(), MPFR_RNDD);
    mpfr_add_z(acc.hi(), t.hi(), p.c[i].backend().data(), MPFR_RNDU);
  }
  if (mpfr_sgn(acc.lo()) > 0) return 1;
  if (mpfr_sgn(acc.hi()) < 0) return -1;
  return 0;
}

int certified_sign_at(const Poly& p, const Rational& x, mpfr_prec_t wp) {
  int s = interval_sign_at(p, x, wp);
  return s != 0 ? s : p.sign_at(x);
}

Rational mpfr_to_rational(mpfr_srcptr x) {
  Rational q;
  mpfr_get_q(q.backend().data(), x);
  return q;
}

Rational pow2_neg(long bits) {
  Int d = Int(1) << bits;
  return Rational(Int(1), d);
}

}  // namespace

std::shared_ptr<const RootDescriptor> RootDescriptor::isolate(
    const Poly& p, const Rational& lo, const Rational& hi) {
  if (p.degree() < 1)
    throw NoSignChange("constant polynomial has no root: " + p.str());
  if (!(lo < hi))
    throw DomainError("empty search interval for " + p.str());

  constexpr int kGrid = 128;
  std::vector<Rational> pts(kGrid + 1);
  std::vector<int> sgn(kGrid + 1);
  for (int i = 0; i <= kGrid; ++i) {
    pts[i] = lo + (hi - lo) * Rational(i, kGrid);
    sgn[i] = p.sign_at(pts[i]);
  }

  // Collect sign changes and exact grid hits.
  std::vector<std::pair<Rational, Rational>> changes;
  std::vector<Rational> zeros;
  for (int i = 0; i <= kGrid; ++i)
    if (sgn[i] == 0) zeros.push_back(pts[i]);
  for (int i = 0; i < kGrid; ++i)
    if (sgn[i] * sgn[i + 1] < 0) changes.emplace_back(pts[i], pts[i + 1]);

  auto evidence = [&]() {
    std::ostringstream os;
    os << p.str() << " on [" << rational_to_string(lo) << ", "
       << rational_to_string(hi) << "]:";
    for (auto& z : zeros) os << " zero at " << rational_to_string(z) << ";";
    for (auto& ch : changes)
      os << " sign change in [" << rational_to_string(ch.first) << ", "
         << rational_to_string(ch.second) << "];";
    return os.str();
  };

  if (changes.size() + zeros.size() > 1)
    throw MultipleSignChanges("multiple candidate roots: " + evidence());
  if (changes.empty() && zeros.empty())
    throw NoSignChange("no sign change: " + evidence());

  auto rd = std::shared_ptr<RootDescriptor>(new RootDescriptor());
  rd->p_ = p;
  rd->dp_ = p.derivative();
  rd->ilo_ = lo;
  rd->ihi_ = hi;
  if (!zeros.empty()) {
    rd->exact_ = true;
    rd->exact_value_ = zeros[0];
    rd->clo_ = rd->chi_ = zeros[0];
    return rd;
  }
  rd->clo_ = changes[0].first;
  rd->chi_ = changes[0].second;
  rd->sign_lo_ = p.sign_at(rd->clo_);
  rd->cur_bits_ = 0;
  return rd;
}

std::shared_ptr<const RootDescriptor> RootDescriptor::exact_rational(
    const Rational& v) {
  auto rd = std::shared_ptr<RootDescriptor>(new RootDescriptor());
  rd->p_ = Poly({-numerator(v), denominator(v)});
  rd->dp_ = rd->p_.derivative();
  rd->ilo_ = v - 1;
  rd->ihi_ = v + 1;
  rd->exact_ = true;
  rd->exact_value_ = v;
  rd->clo_ = rd->chi_ = v;
  return rd;
}

std::pair<Rational, Rational> RootDescriptor::bracket(long bits) const {
  std::lock_guard<std::mutex> lock(mu_);
  if (!exact_) refine_to_bits(bits);
  return {clo_, chi_};
}

Rational RootDescriptor::exact_value() const {
  if (!exact_) throw DomainError("root is not an exact rational");
  return exact_value_;
}

// Caller holds mu_. Newton iterations with a doubling bit target; every
// adopted bracket is re-certified by exact integer sign evaluation, with
// plain bisection as the fallback, so the bracket invariant never breaks.
void RootDescriptor::refine_to_bits(long bits) const {
  while (chi_ - clo_ > pow2_neg(bits)) {
    long next_bits = std::min(std::max(2 * cur_bits_, 64L), bits + 2);
    mpfr_prec_t wp = static_cast<mpfr_prec_t>(next_bits + 64);
    mpfr_t x, fx, dfx;
    mpfr_init2(x, wp);
    mpfr_init2(fx, wp);
    mpfr_init2(dfx, wp);
    Rational mid = (clo_ + chi_) / 2;
    mpfr_set_q(x, mid.backend().data(), MPFR_RNDN);
    int iters = 0;
    for (long have = std::max(cur_bits_, 1L); have < next_bits && iters < 64;
         have *= 2, ++iters) {
      mpfr_poly_eval(fx, p_, x);
      mpfr_poly_eval(dfx, dp_, x);
      if (mpfr_zero_p(dfx)) break;
      mpfr_div(fx, fx, dfx, MPFR_RNDN);
      mpfr_sub(x, x, fx, MPFR_RNDN);
    }
    Rational xq = mpfr_to_rational(x);
    mpfr_clear(x);
    mpfr_clear(fx);
    mpfr_clear(dfx);

    Rational h = pow2_neg(next_bits);
    Rational lo2 = std::max(Rational(xq - h), clo_);
    Rational hi2 = std::min(Rational(xq + h), chi_);
    bool adopted = false;
    if (lo2 < hi2) {
      int slo = certified_sign_at(p_, lo2, wp);
      if (slo == 0) {
        exact_ = true;
        exact_value_ = lo2;
        clo_ = chi_ = lo2;
        return;
      }
      int shi = certified_sign_at(p_, hi2, wp);
      if (shi == 0) {
        exact_ = true;
        exact_value_ = hi2;
        clo_ = chi_ = hi2;
        return;
      }
      if (slo == sign_lo_ && shi == -sign_lo_) {
        clo_ = lo2;
        chi_ = hi2;
        cur_bits_ = next_bits - 1;
        adopted = true;
      }
    }
    if (!adopted) {
      Rational m = (clo_ + chi_) / 2;
      int s = certified_sign_at(p_, m, wp);
      if (s == 0) {
        exact_ = true;
        exact_value_ = m;
        clo_ = chi_ = m;
        return;
      }
      if (s == sign_lo_) clo_ = m;
      else chi_ = m;
      cur_bits_ += 1;
    }
  }
}

Iv RootDescriptor::enclosure(mpfr_prec_t prec) const {
  std::lock_guard<std::mutex> lock(mu_);
  if (exact_) return Iv::from_rational(exact_value_, prec);
  refine_to_bits(static_cast<long>(prec));
  if (exact_) return Iv::from_rational(exact_value_, prec);
  Iv r(prec);
  mpfr_set_q(r.lo(), clo_.backend().data(), MPFR_RNDD);
  mpfr_set_q(r.hi(), chi_.backend().data(), MPFR_RNDU);
  return r;
}

}  // namespace betafreq
