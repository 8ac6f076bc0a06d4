#include "betafreq/dynamics.hpp"

#include "betafreq/errors.hpp"

#include <algorithm>
#include <sstream>

namespace betafreq {

namespace {

ModPoly fn_at_beta(const AlgebraicField& f, int n) {
  // Horner evaluation of f_n(x) = x^{n+1} - x^n - 1 at the field's root.
  Poly fn = Poly::critical(static_cast<unsigned>(n));
  ModPoly xp = f.x();
  ModPoly acc = f.from_rational(Rational(fn.c[fn.degree()]));
  for (int i = fn.degree() - 1; i >= 0; --i)
    acc = f.add(f.mul(acc, xp), f.from_rational(Rational(fn.c[i])));
  return acc;
}

std::vector<std::uint8_t> to_bytes(const std::vector<int>& w) {
  std::vector<std::uint8_t> b;
  b.reserve(w.size());
  for (int d : w) b.push_back(static_cast<std::uint8_t>(d));
  return b;
}

long coeff_height(const ModPoly& p) {
  long h = 1;
  for (const auto& ci : p.c) {
    Int m = abs(ci) + 1;
    h = std::max(h, static_cast<long>(msb(m)) + 2);
  }
  Int dm = abs(p.den) + 1;
  h = std::max(h, static_cast<long>(msb(dm)) + 2);
  return h;
}

}  // namespace

BetaContext::BetaContext(int M, int n, const Rational& beta)
    : M_(M), n_(n), beta_(CertifiedReal::from_rational(beta)) {
  field_ = std::make_shared<AlgebraicField>(RootDescriptor::exact_rational(beta));
  init();
}

BetaContext::BetaContext(int M, int n, RootPtr beta_root) : M_(M), n_(n) {
  beta_ = CertifiedReal::from_root(beta_root);
  field_ = std::make_shared<AlgebraicField>(std::move(beta_root));
  init();
}

void BetaContext::init() {
  if (M_ < 1) throw DomainError("M must be >= 1");
  if (n_ < 1) throw DomainError("n must be >= 1");
  const AlgebraicField& f = *field_;
  ModPoly xp = f.x();
  if (f.sign(f.sub(xp, f.from_rational(Rational(1)))) <= 0)
    throw DomainError("beta must be > 1");
  if (f.sign(f.sub(xp, f.from_rational(Rational(2)))) >= 0)
    throw DomainError("beta must be < 2");
  // beta < beta_n is equivalent to f_n(beta) < 0 (f_n increases on (1,2)).
  int s = f.sign(fn_at_beta(f, n_));
  if (s < 0) {
    validated_ = true;
  } else {
    validated_ = false;
    std::ostringstream os;
    os << "beta " << (s == 0 ? "equals" : "exceeds") << " beta_" << n_
       << " (f_" << n_ << "(beta) " << (s == 0 ? "= 0" : "> 0")
       << "); Theorem 1.2 hypotheses fail";
    validation_msg_ = os.str();
  }
  right_.value = CertifiedReal::from_si(M_) /
                 (beta_ - CertifiedReal::from_si(1));
  right_.alg.num = f.from_rational(Rational(M_));
  right_.alg.den = f.sub(xp, f.from_rational(Rational(1)));
}

Iv frac_box(const AlgebraicField& f, const AlgFrac& a, mpfr_prec_t prec) {
  for (mpfr_prec_t p = prec;; p *= 2) {
    try {
      Iv num = f.eval(a.num, p);
      Iv den = f.eval(a.den, p);
      Iv r(prec);
      Iv q(p);
      iv_div(q, num, den);
      r.set(q);
      return r;
    } catch (const DomainError&) {
      // denominator enclosure still straddles 0; tighten and retry
      if (p > (mpfr_prec_t(1) << 16)) throw;
    }
  }
}

XVal make_xval(const BetaContext& ctx, const Endpoint& e, mpfr_prec_t prec) {
  return XVal{e.alg, frac_box(*ctx.field(), e.alg, prec)};
}

XVal make_xval(const BetaContext& ctx, const AlgFrac& a, mpfr_prec_t prec) {
  return XVal{a, frac_box(*ctx.field(), a, prec)};
}

Endpoint BetaContext::fixed_point(int k) const {
  const AlgebraicField& f = *field_;
  Endpoint e;
  e.value = CertifiedReal::from_si(k) / (beta_ - CertifiedReal::from_si(1));
  e.alg.num = f.from_rational(Rational(k));
  e.alg.den = f.sub(f.x(), f.from_rational(Rational(1)));
  return e;
}

CertifiedReal apply_map(const BetaContext& ctx, int k, const CertifiedReal& y,
                        long l) {
  if (k < 0 || k > ctx.M()) throw DomainError("digit out of range");
  if (l < 1) throw DomainError("repetition count must be >= 1");
  if (k == 0) return ctx.beta().pow_i(l) * y;
  CertifiedReal fp =
      CertifiedReal::from_si(k) / (ctx.beta() - CertifiedReal::from_si(1));
  return ctx.beta().pow_i(l) * (y - fp) + fp;
}

CertifiedReal eval_periodic(const BetaContext& ctx, const std::vector<int>& w) {
  if (w.empty()) throw DomainError("periodic word must be nonempty");
  CertifiedReal acc = CertifiedReal::from_si(w[0]);
  for (size_t i = 1; i < w.size(); ++i)
    acc = acc * ctx.beta() + CertifiedReal::from_si(w[i]);
  CertifiedReal den =
      ctx.beta().pow_i(static_cast<long>(w.size())) - CertifiedReal::from_si(1);
  return acc / den;
}

Endpoint make_periodic(const BetaContext& ctx, const std::vector<int>& w) {
  const AlgebraicField& f = *ctx.field();
  Endpoint e;
  e.value = eval_periodic(ctx, w);
  auto bytes = to_bytes(w);
  // value_after(0, w) = -sum w_i x^{|w|-i}
  e.alg.num = f.neg(f.value_after(Rational(0), bytes.data(), bytes.size()));
  e.alg.den = f.sub(f.xpow(w.size()), f.from_rational(Rational(1)));
  return e;
}

Endpoint make_t_image(const BetaContext& ctx, int k, const Endpoint& e) {
  const AlgebraicField& f = *ctx.field();
  Endpoint r;
  r.value = apply_map(ctx, k, e.value, 1);
  r.alg.num = f.sub(f.mul(f.x(), e.alg.num),
                    f.scale(e.alg.den, Rational(k)));
  r.alg.den = e.alg.den;
  return r;
}

int endpoint_cmp(const BetaContext& ctx, const Endpoint& a, const Endpoint& b) {
  const AlgebraicField& f = *ctx.field();
  int s = f.sign(f.sub(f.mul(a.alg.num, b.alg.den), f.mul(b.alg.num, a.alg.den)));
  return s * f.sign(a.alg.den) * f.sign(b.alg.den);
}

PairGeometry build_geometry(const BetaContext& ctx, int k1, int k2) {
  if (!(0 <= k1 && k1 < k2 && k2 <= ctx.M()))
    throw DomainError("build_geometry requires 0 <= k1 < k2 <= M");
  const int n = ctx.n();
  PairGeometry g;
  g.k1 = k1;
  g.k2 = k2;
  g.I_pair = {ctx.fixed_point(k1), ctx.fixed_point(k2)};
  // Switch region endpoints Pi((k2,k1^inf)) = k2/b + k1/(b(b-1)) and
  // Pi((k1,k2^inf)) = k1/b + k2/(b(b-1)), built in closed form.
  {
    const AlgebraicField& f = *ctx.field();
    ModPoly xp = f.x();
    ModPoly xm1 = f.sub(xp, f.from_rational(Rational(1)));
    auto mk = [&](int a, int b) {
      // a/beta + b/(beta(beta-1)) = (a(beta-1)+b) / (beta(beta-1))
      Endpoint e;
      e.value = (CertifiedReal::from_si(a) * (ctx.beta() - CertifiedReal::from_si(1)) +
                 CertifiedReal::from_si(b)) /
                (ctx.beta() * (ctx.beta() - CertifiedReal::from_si(1)));
      e.alg.num = f.add(f.scale(xm1, Rational(a)), f.from_rational(Rational(b)));
      e.alg.den = f.mul(xp, xm1);
      return e;
    };
    g.S_pair = {mk(k2, k1), mk(k1, k2)};
  }

  auto rep = [&](int first, int second, int reps_second) {
    std::vector<int> w{first};
    for (int i = 0; i < reps_second; ++i) w.push_back(second);
    return w;
  };
  std::vector<int> w_ahi_lo = rep(k1, k2, n);          // (k1, k2^n)
  std::vector<int> w_alo_hi = rep(k2, k1, n);          // (k2, k1^n)
  std::vector<int> w_ahi_hi = [&] {                    // (k2, k1, k2^{n-1})
    std::vector<int> w{k2, k1};
    for (int i = 0; i < n - 1; ++i) w.push_back(k2);
    return w;
  }();
  std::vector<int> w_alo_lo = [&] {                    // (k1, k2, k1^{n-1})
    std::vector<int> w{k1, k2};
    for (int i = 0; i < n - 1; ++i) w.push_back(k1);
    return w;
  }();
  g.A_hi = {make_periodic(ctx, w_ahi_lo), make_periodic(ctx, w_ahi_hi)};
  g.A_lo = {make_periodic(ctx, w_alo_lo), make_periodic(ctx, w_alo_hi)};
  g.D_pair = {make_t_image(ctx, k2, g.A_lo.lo), make_t_image(ctx, k1, g.A_hi.hi)};

  {
    std::vector<int> w_lo{0, 1};
    for (int i = 0; i < n - 1; ++i) w_lo.push_back(0);
    std::vector<int> w_hi{ctx.M(), ctx.M() - 1};
    for (int i = 0; i < n - 1; ++i) w_hi.push_back(ctx.M());
    g.D_global = {make_t_image(ctx, 1, make_periodic(ctx, w_lo)),
                  make_t_image(ctx, ctx.M() - 1, make_periodic(ctx, w_hi))};
  }

  auto require = [&](bool ok, const char* what) {
    if (ok) return;
    std::ostringstream os;
    os << "pair (" << k1 << "," << k2 << "): " << what
       << (ctx.validated() ? " (insufficient precision is ruled out: checks are exact)"
                           : "; context failed validation: " + ctx.validation_message());
    throw InclusionViolated(os.str());
  };
  // Lemma 2.4: both anchor intervals sit strictly inside the switch region.
  require(endpoint_cmp(ctx, g.S_pair.lo, g.A_hi.lo) < 0, "S.lo < A_hi.lo fails");
  require(endpoint_cmp(ctx, g.A_hi.hi, g.S_pair.hi) < 0, "A_hi.hi < S.hi fails");
  require(endpoint_cmp(ctx, g.S_pair.lo, g.A_lo.lo) < 0, "S.lo < A_lo.lo fails");
  require(endpoint_cmp(ctx, g.A_lo.hi, g.S_pair.hi) < 0, "A_lo.hi < S.hi fails");
  require(endpoint_cmp(ctx, g.A_hi.lo, g.A_hi.hi) < 0, "A_hi degenerate");
  require(endpoint_cmp(ctx, g.A_lo.lo, g.A_lo.hi) < 0, "A_lo degenerate");
  // D-chain: D_pair inside D_global inside (0, M/(beta-1)).
  require(endpoint_cmp(ctx, g.D_global.lo, g.D_pair.lo) <= 0,
          "D_pair.lo below D_global.lo");
  require(endpoint_cmp(ctx, g.D_pair.hi, g.D_global.hi) <= 0,
          "D_pair.hi above D_global.hi");
  Endpoint zero;
  zero.value = CertifiedReal::from_si(0);
  zero.alg.num = ctx.field()->from_rational(Rational(0));
  zero.alg.den = ctx.field()->from_rational(Rational(1));
  require(endpoint_cmp(ctx, zero, g.D_global.lo) < 0, "D_global.lo <= 0");
  require(endpoint_cmp(ctx, g.D_global.hi, ctx.right_endpoint()) < 0,
          "D_global.hi >= M/(beta-1)");
  return g;
}

Tri admissible_step(const BetaContext& ctx, const CertifiedReal& y, int k) {
  CertifiedReal t = apply_map(ctx, k, y, 1);
  if (t.is_rational() && ctx.right_endpoint().value.is_rational()) {
    Rational v = t.rational_value();
    Rational r = ctx.right_endpoint().value.rational_value();
    return (v >= 0 && v <= r) ? Tri::Yes : Tri::No;
  }
  Ordering lo = compare_q(t, Rational(0));
  if (lo == Ordering::Less) return Tri::No;
  Ordering hi = compare(t, ctx.right_endpoint().value);
  if (hi == Ordering::Greater) return Tri::No;
  if (lo == Ordering::Greater && hi == Ordering::Less) return Tri::Yes;
  return Tri::Undecided;
}

OrbitEngine::OrbitEngine(const BetaContext& ctx, const Rational& x0,
                         mpfr_prec_t shadow_prec)
    : ctx_(&ctx),
      x0_(x0),
      counts_(static_cast<size_t>(ctx.M()) + 1, 0),
      shadow_prec_(shadow_prec),
      beta_s_(ctx.beta().enclosure(shadow_prec)),
      beta_fast_(608),
      cur_(shadow_prec + 32),
      tmp_(shadow_prec + 32),
      anchor_(shadow_prec + kChainBudget + 64) {
  beta_fast_.set(beta_s_);
  cur_.set_rational(x0);
  // Prime support of the content accumulated by symbolic orbit extensions:
  // denominators only ever gain factors of lc(g) and of den(x0).
  content_primes_ = ctx.field()->lc_primes();
  append_prime_factors(Int(denominator(x0)), content_primes_);
  std::sort(content_primes_.begin(), content_primes_.end());
  content_primes_.erase(
      std::unique(content_primes_.begin(), content_primes_.end()),
      content_primes_.end());
}

void OrbitEngine::push(int k) {
  if (k < 0 || k > ctx_->M()) throw DomainError("digit out of range");
  iv_mul(tmp_, beta_s_, cur_);
  iv_sub_si(cur_, tmp_, k);
  digits_.push_back(static_cast<std::uint8_t>(k));
  counts_[static_cast<size_t>(k)] += 1;
}

const ModPoly& OrbitEngine::symbolic() {
  const AlgebraicField& f = *ctx_->field();
  if (sym_valid_ && sym_at_ < digits_.size()) {
    // extend the cached value instead of rebuilding from scratch:
    // appending the word w of length m maps v to x^m v - sum w_i x^{m-1-i}
    size_t m = digits_.size() - sym_at_;
    sym_ = f.remove_content(f.sub(f.mul(sym_, f.xpow(m)),
                                  f.word_poly(digits_.data() + sym_at_, m)),
                            content_primes_);
    sym_at_ = digits_.size();
    ++rebuilds_;
  } else if (!sym_valid_) {
    sym_ = f.value_after(x0_, digits_.data(), digits_.size());
    sym_at_ = digits_.size();
    sym_valid_ = true;
    ++rebuilds_;
  }
  return sym_;
}

void OrbitEngine::resync_shadow(mpfr_prec_t slack) {
  const size_t L = digits_.size();
  const AlgebraicField& f = *ctx_->field();
  // Chained resync: the point after the segment w of length m past the
  // anchor equals beta^m * anchor - value(w). All three factors are cheap
  // certified intervals, so this avoids the full symbolic evaluation as
  // long as the anchor's precision surplus has not been spent (the width
  // inflates by roughly beta^m per link; the check below is self-adaptive).
  if (anchor_valid_ && anchor_at_ == L) {
    // Already synced at this position; repeated queries here that the
    // shadow cannot decide fall through to the exact symbolic path.
    cur_.set(anchor_);
    return;
  }
  if (anchor_valid_ && anchor_at_ < L && L - anchor_at_ <= kChainMaxSegment) {
    size_t m = L - anchor_at_;
    ModPoly w = f.word_poly(digits_.data() + anchor_at_, m);
    mpfr_prec_t p =
        static_cast<mpfr_prec_t>(coeff_height(w) + kChainBudget) + slack;
    Iv wv = f.eval(w, p);
    Iv bp(p), nv(p), t(p);
    iv_pow_ui(bp, ctx_->beta().enclosure(p), static_cast<unsigned long>(m));
    iv_mul(t, bp, anchor_);
    iv_sub(nv, t, wv);
    if (nv.width_below_2exp(-static_cast<long>(slack) + 8)) {
      anchor_.set(nv);
      anchor_at_ = L;
      cur_.set(nv);
      return;
    }
  }
  const ModPoly& v = symbolic();
  long h = coeff_height(v);
  Iv fresh =
      f.eval(v, static_cast<mpfr_prec_t>(h + kChainBudget) + slack + 64);
  anchor_.set(fresh);
  anchor_at_ = L;
  anchor_valid_ = true;
  cur_.set(fresh);
}

Tri OrbitEngine::step_admissible(int k) {
  if (k < 0 || k > ctx_->M()) return Tri::No;
  auto test = [&](mpfr_prec_t p) -> Tri {
    Iv next(shadow_prec_ + 32);
    iv_mul(next, beta_s_, cur_);
    iv_sub_si(next, next, k);
    Iv r = ctx_->right_endpoint().value.enclosure(p);
    if (mpfr_sgn(next.lo()) >= 0 && mpfr_cmp(next.hi(), r.lo()) <= 0)
      return Tri::Yes;
    if (mpfr_sgn(next.hi()) < 0 || mpfr_cmp(next.lo(), r.hi()) > 0)
      return Tri::No;
    return Tri::Undecided;
  };
  Tri r = test(256);
  if (r != Tri::Undecided) return r;
  if (!(sym_valid_ && sym_at_ == digits_.size() &&
        cur_.width_below_2exp(-static_cast<long>(shadow_prec_) + 8))) {
    resync_shadow(shadow_prec_);
    r = test(shadow_prec_);
    if (r != Tri::Undecided) return r;
  }
  const AlgebraicField& f = *ctx_->field();
  ModPoly next = f.t_map(symbolic(), k);
  if (f.sign(next) < 0) return Tri::No;
  return f.compare_frac(next, ctx_->right_endpoint().alg) <= 0 ? Tri::Yes
                                                               : Tri::No;
}

Tri OrbitEngine::member(const CInterval& t) {
  auto test = [&](mpfr_prec_t p) -> Tri {
    Iv lo = t.lo.value.enclosure(p);
    Iv hi = t.hi.value.enclosure(p);
    if (mpfr_cmp(cur_.lo(), lo.hi()) >= 0 && mpfr_cmp(cur_.hi(), hi.lo()) <= 0)
      return Tri::Yes;
    if (mpfr_cmp(cur_.hi(), lo.lo()) < 0 || mpfr_cmp(cur_.lo(), hi.hi()) > 0)
      return Tri::No;
    return Tri::Undecided;
  };
  Tri r = test(256);
  if (r != Tri::Undecided) return r;
  r = test(shadow_prec_);
  if (r != Tri::Undecided) return r;
  if (!(sym_valid_ && sym_at_ == digits_.size() &&
        cur_.width_below_2exp(-static_cast<long>(shadow_prec_) + 8))) {
    resync_shadow(shadow_prec_);
    r = test(shadow_prec_);
    if (r != Tri::Undecided) return r;
  }
  const AlgebraicField& f = *ctx_->field();
  int c1 = f.compare_frac(symbolic(), t.lo.alg);
  if (c1 < 0) return Tri::No;
  int c2 = f.compare_frac(symbolic(), t.hi.alg);
  return c2 <= 0 ? Tri::Yes : Tri::No;
}

int OrbitEngine::cmp(const Endpoint& e) {
  for (mpfr_prec_t p : {mpfr_prec_t(256), shadow_prec_}) {
    Iv enc = e.value.enclosure(p);
    if (mpfr_cmp(cur_.hi(), enc.lo()) < 0) return -1;
    if (mpfr_cmp(cur_.lo(), enc.hi()) > 0) return 1;
  }
  resync_shadow(shadow_prec_);
  Iv enc = e.value.enclosure(shadow_prec_);
  if (mpfr_cmp(cur_.hi(), enc.lo()) < 0) return -1;
  if (mpfr_cmp(cur_.lo(), enc.hi()) > 0) return 1;
  return ctx_->field()->compare_frac(symbolic(), e.alg);
}

int OrbitEngine::cmp_after(const std::uint8_t* extra, size_t elen,
                           const XVal& e) {
  auto walk_try = [&](const Iv& beta, mpfr_prec_t p) -> int {
    Iv w(p);
    w.set(cur_);
    Iv t(p);
    for (size_t i = 0; i < elen; ++i) {
      iv_mul(t, beta, w);
      iv_sub_si(w, t, extra[i]);
    }
    if (mpfr_cmp(w.hi(), e.box.lo()) < 0) return -1;
    if (mpfr_cmp(w.lo(), e.box.hi()) > 0) return 1;
    return 2;  // this walk cannot separate
  };
  // cheap low-precision pass first; the full-precision shadow walk is only
  // needed near interval boundaries
  int r = walk_try(beta_fast_, 576);
  if (r != 2) return r;
  r = walk_try(beta_s_, shadow_prec_ + 32);
  if (r != 2) return r;
  if (!(sym_valid_ && sym_at_ == digits_.size() &&
        cur_.width_below_2exp(-static_cast<long>(shadow_prec_) + 8))) {
    resync_shadow(shadow_prec_);
    r = walk_try(beta_s_, shadow_prec_ + 32);
    if (r != 2) return r;
  }
  const AlgebraicField& f = *ctx_->field();
  ModPoly v = symbolic();
  if (elen > 0)
    v = f.sub(f.mul(v, f.xpow(elen)), f.word_poly(extra, elen));
  return f.compare_frac(v, e.alg);
}

bool OrbitEngine::in_after(const std::uint8_t* extra, size_t elen,
                           const XVal& lo, const XVal& hi) {
  return cmp_after(extra, elen, lo) >= 0 && cmp_after(extra, elen, hi) <= 0;
}

Iv OrbitEngine::enclosure(mpfr_prec_t prec) {
  if (!cur_.width_below_2exp(1 - static_cast<long>(prec))) {
    if (prec <= shadow_prec_) {
      resync_shadow(shadow_prec_);
    } else {
      const ModPoly& v = symbolic();
      long h = coeff_height(v);
      return ctx_->field()->eval(v, static_cast<mpfr_prec_t>(h) + prec + 64);
    }
  }
  Iv r(prec);
  r.set(cur_);
  return r;
}

}  // namespace betafreq
