#include "betafreq/algebraic.hpp"

#include "betafreq/errors.hpp"

#include <algorithm>
#include <cassert>

namespace betafreq {

namespace {

void trim(std::vector<Int>& c) {
  while (!c.empty() && c.back() == 0) c.pop_back();
}

int int_poly_sign_at(const std::vector<Int>& c, const Rational& x) {
  if (c.empty()) return 0;
  const Int a = numerator(x);
  const Int b = denominator(x);
  const int deg = static_cast<int>(c.size()) - 1;
  Int acc = c[deg];
  Int bp = 1;
  for (int i = deg - 1; i >= 0; --i) {
    bp *= b;
    acc = acc * a + c[i] * bp;
  }
  return acc.sign();
}

// Euclidean gcd over Q[x], returned as a primitive integer vector.
std::vector<Int> poly_gcd(const std::vector<Int>& pa,
                          const std::vector<Int>& pb) {
  std::vector<Rational> a(pa.begin(), pa.end()), b(pb.begin(), pb.end());
  auto rtrim = [](std::vector<Rational>& v) {
    while (!v.empty() && v.back() == 0) v.pop_back();
  };
  rtrim(a);
  rtrim(b);
  if (a.size() < b.size()) std::swap(a, b);
  while (!b.empty()) {
    // a <- a mod b
    while (a.size() >= b.size() && !a.empty()) {
      Rational q = a.back() / b.back();
      size_t shift = a.size() - b.size();
      for (size_t i = 0; i < b.size(); ++i) a[shift + i] -= q * b[i];
      rtrim(a);
      if (!a.empty() && a.size() >= b.size() && a.back() == 0) rtrim(a);
    }
    std::swap(a, b);
  }
  // Clear denominators, remove content.
  Int lcm_den = 1;
  for (auto& q : a) lcm_den = lcm(lcm_den, denominator(q));
  std::vector<Int> out;
  out.reserve(a.size());
  for (auto& q : a) out.push_back(Int(numerator(q) * (lcm_den / denominator(q))));
  Int content = 0;
  for (auto& v : out) content = gcd(content, v);
  if (content > 1)
    for (auto& v : out) v /= content;
  return out;
}

}  // namespace

void append_prime_factors(Int v, std::vector<Int>& out) {
  if (v < 0) v = -v;
  for (unsigned long p = 2; v > 1 && p <= 1000000; p += (p == 2 ? 1UL : 2UL)) {
    if (mpz_divisible_ui_p(v.backend().data(), p)) {
      out.push_back(Int(p));
      do {
        mpz_divexact_ui(v.backend().data(), v.backend().data(), p);
      } while (mpz_divisible_ui_p(v.backend().data(), p));
    }
  }
  if (v > 1) out.push_back(v);
}

AlgebraicField::AlgebraicField(RootPtr root) : root_(std::move(root)) {
  if (!root_) throw DomainError("null root for algebraic field");
  g_ = root_->poly();
  if (g_.degree() < 1) throw DomainError("algebraic field needs degree >= 1");
  if (root_->exact()) {
    exact_root_ = true;
    exact_root_value_ = root_->exact_value();
  }
  append_prime_factors(g_.c[g_.degree()], lc_primes_);
  std::sort(lc_primes_.begin(), lc_primes_.end());
  lc_primes_.erase(std::unique(lc_primes_.begin(), lc_primes_.end()),
                   lc_primes_.end());
}

ModPoly AlgebraicField::reduce(std::vector<Int> c, Int den) const {
  const int d = g_.degree();
  const Int& lc = g_.c[d];
  trim(c);
  while (static_cast<int>(c.size()) - 1 >= d) {
    size_t m = c.size() - 1;
    Int top = std::move(c.back());
    c.pop_back();
    if (top == 0) continue;
    if (lc != 1) {
      for (auto& v : c) v *= lc;
      den *= lc;
    }
    for (int i = 0; i < d; ++i) c[m - d + i] -= top * g_.c[i];
    trim(c);
  }
  ModPoly r;
  r.c = std::move(c);
  r.den = std::move(den);
  return r;
}

ModPoly AlgebraicField::canonical(const ModPoly& a) const {
  ModPoly r = a;
  trim(r.c);
  if (r.c.empty()) {
    r.den = 1;
    return r;
  }
  Int content = abs(r.den);
  for (auto& v : r.c) content = gcd(content, v);
  if (content > 1) {
    for (auto& v : r.c) v /= content;
    r.den /= content;
  }
  if (r.den < 0) {
    r.den = -r.den;
    for (auto& v : r.c) v = -v;
  }
  return r;
}

ModPoly AlgebraicField::remove_content(const ModPoly& a,
                                       const std::vector<Int>& primes) const {
  ModPoly r = a;
  trim(r.c);
  if (r.c.empty()) {
    r.den = 1;
    return r;
  }
  // For each prime, find the minimum valuation across the coefficients and
  // the denominator. Valuations well above the running minimum are never
  // computed exactly: a single divisibility test by p^e confirms "at least
  // e", which matters when the denominator is a huge prime power.
  Int scratch, pe;
  for (const Int& p : primes) {
    long e = -1;
    auto update = [&](const Int& v) {
      if (v == 0 || e == 0) return;
      if (e > 0 && mpz_divisible_p(v.backend().data(), pe.backend().data()))
        return;  // valuation >= e, the minimum is unchanged
      long ev = static_cast<long>(mpz_remove(scratch.backend().data(),
                                             v.backend().data(),
                                             p.backend().data()));
      if (e < 0 || ev < e) {
        e = ev;
        if (e > 0) pe = pow(p, static_cast<unsigned>(e));
      }
    };
    for (const auto& v : r.c) update(v);
    update(r.den);
    if (e <= 0) continue;
    mpz_divexact(r.den.backend().data(), r.den.backend().data(),
                 pe.backend().data());
    for (auto& v : r.c)
      mpz_divexact(v.backend().data(), v.backend().data(),
                   pe.backend().data());
  }
  if (r.den < 0) {
    r.den = -r.den;
    for (auto& v : r.c) v = -v;
  }
  return r;
}

ModPoly AlgebraicField::from_rational(const Rational& q) const {
  ModPoly r;
  if (numerator(q) != 0) r.c.push_back(Int(numerator(q)));
  r.den = denominator(q);
  return r;
}

ModPoly AlgebraicField::x() const {
  return reduce({Int(0), Int(1)}, Int(1));
}

ModPoly AlgebraicField::add(const ModPoly& a, const ModPoly& b) const {
  ModPoly r;
  r.c.resize(std::max(a.c.size(), b.c.size()), Int(0));
  for (size_t i = 0; i < a.c.size(); ++i) r.c[i] = a.c[i] * b.den;
  for (size_t i = 0; i < b.c.size(); ++i) r.c[i] += b.c[i] * a.den;
  r.den = a.den * b.den;
  trim(r.c);
  return r;
}

ModPoly AlgebraicField::sub(const ModPoly& a, const ModPoly& b) const {
  ModPoly r;
  r.c.resize(std::max(a.c.size(), b.c.size()), Int(0));
  for (size_t i = 0; i < a.c.size(); ++i) r.c[i] = a.c[i] * b.den;
  for (size_t i = 0; i < b.c.size(); ++i) r.c[i] -= b.c[i] * a.den;
  r.den = a.den * b.den;
  trim(r.c);
  return r;
}

ModPoly AlgebraicField::neg(const ModPoly& a) const {
  ModPoly r = a;
  for (auto& v : r.c) v = -v;
  return r;
}

ModPoly AlgebraicField::mul(const ModPoly& a, const ModPoly& b) const {
  if (a.c.empty() || b.c.empty()) return from_rational(Rational(0));
  std::vector<Int> conv(a.c.size() + b.c.size() - 1, Int(0));
  for (size_t i = 0; i < a.c.size(); ++i)
    for (size_t j = 0; j < b.c.size(); ++j) conv[i + j] += a.c[i] * b.c[j];
  return reduce(std::move(conv), Int(a.den * b.den));
}

ModPoly AlgebraicField::scale(const ModPoly& a, const Rational& s) const {
  ModPoly r = a;
  for (auto& v : r.c) v *= numerator(s);
  r.den *= denominator(s);
  trim(r.c);
  return r;
}

ModPoly AlgebraicField::t_map(const ModPoly& a, long k) const {
  std::vector<Int> c(a.c.size() + 1, Int(0));
  for (size_t i = 0; i < a.c.size(); ++i) c[i + 1] = a.c[i];
  ModPoly r = reduce(std::move(c), Int(a.den));
  if (k != 0) {
    if (r.c.empty()) r.c.push_back(Int(0));
    r.c[0] -= Int(k) * r.den;
    trim(r.c);
  }
  return r;
}

ModPoly AlgebraicField::xpow(size_t e) const {
  if (e == 0) return from_rational(Rational(1));
  // Powers-of-two ladder, extended under the lock; products computed outside.
  size_t top_bit = 0;
  while ((size_t{1} << (top_bit + 1)) <= e) ++top_bit;
  {
    std::lock_guard<std::mutex> lock(pow_mu_);
    if (pow2_.empty()) pow2_.push_back(x());
  }
  for (;;) {
    ModPoly last;
    size_t have;
    {
      std::lock_guard<std::mutex> lock(pow_mu_);
      have = pow2_.size();
      if (have > top_bit) break;
      last = pow2_.back();
    }
    ModPoly next = mul(last, last);
    std::lock_guard<std::mutex> lock(pow_mu_);
    if (pow2_.size() == have) pow2_.push_back(canonical(next));
  }
  ModPoly r = from_rational(Rational(1));
  bool first = true;
  for (size_t t = 0; t <= top_bit; ++t) {
    if (!(e & (size_t{1} << t))) continue;
    ModPoly p;
    {
      std::lock_guard<std::mutex> lock(pow_mu_);
      p = pow2_[t];
    }
    r = first ? p : mul(r, p);
    first = false;
  }
  return r;
}

bool AlgebraicField::is_zero(const ModPoly& a) const { return sign(a) == 0; }

bool AlgebraicField::factor_vanishes_at_root(const std::vector<Int>& h) const {
  for (long bits = 256; bits <= (1 << 16); bits *= 2) {
    auto [lo, hi] = root_->bracket(bits);
    int slo = int_poly_sign_at(h, lo);
    int shi = int_poly_sign_at(h, hi);
    if (slo != 0 && shi != 0) return slo != shi;
  }
  throw PrecisionBudgetExceeded("cannot separate gcd factor from root bracket");
}

int AlgebraicField::sign(const ModPoly& a) const {
  ModPoly v = canonical(a);
  if (v.c.empty()) return 0;
  if (exact_root_) {
    int s = int_poly_sign_at(v.c, exact_root_value_);
    return s * v.den.sign();
  }
  long height = 0;
  for (const auto& ci : v.c) {
    Int m = abs(ci) + 1;
    height = std::max(height, static_cast<long>(msb(m)) + 2);
  }
  bool zero_checked = false;
  for (mpfr_prec_t prec = static_cast<mpfr_prec_t>(height) + 64;
       prec <= static_cast<mpfr_prec_t>(height) + (1 << 20); prec *= 2) {
    Iv e = eval(v, prec);
    int c = iv_cmp_q(e, Rational(0));
    if (c != 0) return c;
    if (!zero_checked && prec >= static_cast<mpfr_prec_t>(height) + 256) {
      zero_checked = true;
      std::vector<Int> h = poly_gcd(v.c, g_.c);
      if (h.size() >= 2 && factor_vanishes_at_root(h)) return 0;
    }
  }
  throw PrecisionBudgetExceeded("sign of algebraic value did not resolve");
}

int AlgebraicField::compare(const ModPoly& a, const ModPoly& b) const {
  return sign(sub(a, b));
}

int AlgebraicField::compare_frac(const ModPoly& a, const AlgFrac& f) const {
  int sd = sign(f.den);
  if (sd == 0) throw DomainError("fraction denominator vanishes at the root");
  return sign(sub(mul(a, f.den), f.num)) * sd;
}

int AlgebraicField::compare_fracs(const AlgFrac& a, const AlgFrac& b) const {
  int sa = sign(a.den), sb = sign(b.den);
  if (sa == 0 || sb == 0)
    throw DomainError("fraction denominator vanishes at the root");
  return sign(sub(mul(a.num, b.den), mul(b.num, a.den))) * sa * sb;
}

Iv AlgebraicField::eval(const ModPoly& a, mpfr_prec_t prec) const {
  if (a.c.empty()) return Iv::from_si(0, prec);
  Iv xe = root_->enclosure(prec);
  Iv acc(prec);
  mpfr_set_z(acc.lo(), a.c.back().backend().data(), MPFR_RNDD);
  mpfr_set_z(acc.hi(), a.c.back().backend().data(), MPFR_RNDU);
  Iv tmp(prec);
  for (size_t i = a.c.size() - 1; i-- > 0;) {
    iv_mul(tmp, acc, xe);
    mpfr_add_z(acc.lo(), tmp.lo(), a.c[i].backend().data(), MPFR_RNDD);
    mpfr_add_z(acc.hi(), tmp.hi(), a.c[i].backend().data(), MPFR_RNDU);
  }
  Iv r(prec);
  if (a.den > 0) {
    mpfr_div_z(r.lo(), acc.lo(), a.den.backend().data(), MPFR_RNDD);
    mpfr_div_z(r.hi(), acc.hi(), a.den.backend().data(), MPFR_RNDU);
  } else {
    mpfr_div_z(r.lo(), acc.hi(), a.den.backend().data(), MPFR_RNDD);
    mpfr_div_z(r.hi(), acc.lo(), a.den.backend().data(), MPFR_RNDU);
  }
  return r;
}

ModPoly AlgebraicField::word_poly(const std::uint8_t* d, size_t len) const {
  if (len == 0) return from_rational(Rational(0));
  if (len <= 32) {
    ModPoly v = from_rational(Rational(d[0]));
    for (size_t i = 1; i < len; ++i) v = t_map(v, -static_cast<long>(d[i]));
    return v;
  }
  size_t h = 1;
  while (h * 2 < len) h *= 2;
  ModPoly wl = word_poly(d, len - h);
  ModPoly wr = word_poly(d + (len - h), h);
  // Denominators here only ever contain factors of lc(g), so valuation
  // stripping removes the full content at a fraction of the gcd cost.
  return remove_content(add(mul(wl, xpow(h)), wr), lc_primes_);
}

ModPoly AlgebraicField::value_after(const Rational& x0, const std::uint8_t* d,
                                    size_t len) const {
  ModPoly lead = scale(xpow(len), x0);
  ModPoly w = word_poly(d, len);
  return canonical(sub(lead, w));
}

}  // namespace betafreq
