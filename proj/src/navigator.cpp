#include "betafreq/navigator.hpp"

#include "betafreq/errors.hpp"

#include <algorithm>
#include <sstream>

namespace betafreq {

namespace {

int xval_cmp(const AlgebraicField& f, const XVal& a, const XVal& b) {
  if (mpfr_cmp(a.box.hi(), b.box.lo()) < 0) return -1;
  if (mpfr_cmp(a.box.lo(), b.box.hi()) > 0) return 1;
  return f.compare_fracs(a.alg, b.alg);
}

// T_k applied to an exact fraction: (x*num - k*den) / den.
AlgFrac frac_step(const AlgebraicField& f, const AlgFrac& v, int k) {
  AlgFrac r;
  r.num = f.sub(f.t_map(v.num, 0), f.scale(v.den, Rational(k)));
  r.den = v.den;
  return r;
}

// T_k^{-1} applied to an exact fraction: (num + k*den) / (x*den).
AlgFrac frac_unstep(const AlgebraicField& f, const AlgFrac& v, int k) {
  AlgFrac r;
  r.num = f.add(v.num, f.scale(v.den, Rational(k)));
  r.den = f.t_map(v.den, 0);
  return r;
}

}  // namespace

FracProbe::FracProbe(const BetaContext& ctx, AlgFrac start, mpfr_prec_t prec)
    : ctx_(&ctx), prec_(prec), beta_(ctx.field()->root()->enclosure(prec)) {
  states_.push_back(make_xval(ctx, start, prec));
}

int FracProbe::cmp_after(const std::vector<std::uint8_t>& extra,
                         const XVal& e) {
  const AlgebraicField& f = *ctx_->field();
  size_t cp = 0;
  while (cp < word_.size() && cp < extra.size() && word_[cp] == extra[cp]) ++cp;
  word_.resize(cp);
  states_.resize(cp + 1);
  for (size_t i = cp; i < extra.size(); ++i) {
    int k = extra[i];
    const XVal& prev = states_.back();
    XVal next;
    next.alg = frac_step(f, prev.alg, k);
    next.box = Iv(prec_);
    Iv t(prec_);
    iv_mul(t, beta_, prev.box);
    iv_sub_si(next.box, t, k);
    states_.push_back(std::move(next));
    word_.push_back(static_cast<std::uint8_t>(k));
  }
  return xval_cmp(f, states_.back(), e);
}

NavPlan::NavPlan(const BetaContext& ctx, NavRequest req)
    : ctx_(&ctx),
      req_(std::move(req)),
      beta_(ctx.field()->root()->enclosure(512)) {
  std::sort(req_.allowed_digits.begin(), req_.allowed_digits.end());
  req_.allowed_digits.erase(
      std::unique(req_.allowed_digits.begin(), req_.allowed_digits.end()),
      req_.allowed_digits.end());
  if (req_.allowed_digits.empty())
    throw DomainError("navigation needs at least one allowed digit");
  for (int k : req_.allowed_digits)
    if (k < 0 || k > ctx.M()) throw DomainError("allowed digit out of range");
  if (req_.max_len < 0) throw DomainError("max_len must be nonnegative");
  if (cmp_vals(req_.target_lo, req_.target_hi) > 0)
    throw DomainError("navigation target is empty");
  if (cmp_vals(req_.constraint_lo, req_.target_lo) > 0 ||
      cmp_vals(req_.target_hi, req_.constraint_hi) > 0)
    throw DomainError("navigation target is not inside the state constraint");
  layers_.push_back({Range{req_.target_lo, req_.target_hi}});
}

int NavPlan::cmp_vals(const XVal& a, const XVal& b) const {
  return xval_cmp(*ctx_->field(), a, b);
}

void NavPlan::ensure_layer(size_t d) {
  const AlgebraicField& f = *ctx_->field();
  while (layers_.size() <= d && !saturated_) {
    const std::vector<Range>& prev = layers_.back();
    std::vector<Range> cand = prev;
    for (const Range& r : prev) {
      for (int k : req_.allowed_digits) {
        XVal lo, hi;
        lo.alg = frac_unstep(f, r.lo.alg, k);
        hi.alg = frac_unstep(f, r.hi.alg, k);
        Iv t(512);
        iv_add_q(t, r.lo.box, Rational(k));
        lo.box = Iv(512);
        iv_div(lo.box, t, beta_);
        iv_add_q(t, r.hi.box, Rational(k));
        hi.box = Iv(512);
        iv_div(hi.box, t, beta_);
        if (cmp_vals(lo, req_.constraint_lo) < 0) lo = req_.constraint_lo;
        if (cmp_vals(hi, req_.constraint_hi) > 0) hi = req_.constraint_hi;
        if (cmp_vals(lo, hi) > 0) continue;
        cand.push_back(Range{std::move(lo), std::move(hi)});
      }
    }
    std::sort(cand.begin(), cand.end(), [&](const Range& a, const Range& b) {
      return cmp_vals(a.lo, b.lo) < 0;
    });
    std::vector<Range> merged;
    for (Range& r : cand) {
      if (!merged.empty() && cmp_vals(r.lo, merged.back().hi) <= 0) {
        if (cmp_vals(r.hi, merged.back().hi) > 0)
          merged.back().hi = std::move(r.hi);
      } else {
        merged.push_back(std::move(r));
      }
    }
    bool same = merged.size() == prev.size();
    for (size_t i = 0; same && i < merged.size(); ++i)
      same = cmp_vals(merged[i].lo, prev[i].lo) == 0 &&
             cmp_vals(merged[i].hi, prev[i].hi) == 0;
    if (same)
      saturated_ = true;
    else
      layers_.push_back(std::move(merged));
  }
}

bool NavPlan::probe_in_layer(PointProbe& p,
                             const std::vector<std::uint8_t>& extra,
                             size_t layer) {
  for (const Range& r : layers_[layer])
    if (p.in_after(extra, r.lo, r.hi)) return true;
  return false;
}

Word NavPlan::navigate(PointProbe& p) {
  std::vector<std::uint8_t> extra;
  if (p.cmp_after(extra, req_.constraint_lo) < 0 ||
      p.cmp_after(extra, req_.constraint_hi) > 0)
    throw DomainError("navigation start lies outside the state constraint");
  for (size_t d = 0;; ++d) {
    if (d > static_cast<size_t>(req_.max_len)) {
      std::ostringstream os;
      os << "target not reachable within " << req_.max_len << " steps";
      throw NotReachableWithinCutoff(os.str());
    }
    ensure_layer(d);
    if (d >= layers_.size()) {
      // Reachable set stopped growing below this depth; the start was
      // tested against its final form already.
      throw NotReachableWithinCutoff(
          "target unreachable: backward-reachable set saturated at depth " +
          std::to_string(layers_.size() - 1));
    }
    if (!probe_in_layer(p, extra, d)) continue;
    Word w(ctx_->M());
    for (size_t m = d; m > 0; --m) {
      bool found = false;
      for (int k : req_.allowed_digits) {
        extra.push_back(static_cast<std::uint8_t>(k));
        if (probe_in_layer(p, extra, m - 1)) {
          found = true;
          break;
        }
        extra.pop_back();
      }
      if (!found)
        throw PrecisionBudgetExceeded(
            "navigation extraction lost the certified path");
    }
    for (std::uint8_t k : extra) w.push(k);
    return w;
  }
}

Word navigate(const BetaContext& ctx, PointProbe& p, const NavRequest& req) {
  NavPlan plan(ctx, req);
  return plan.navigate(p);
}

long hitting_run(const BetaContext& ctx, int k, const AlgFrac& start,
                 const XVal& target_lo, const XVal& target_hi,
                 long max_iter) {
  const AlgebraicField& f = *ctx.field();
  if (k < 0 || k > ctx.M()) throw DomainError("digit out of range");
  Iv beta = f.root()->enclosure(512);
  XVal zero = make_xval(ctx, AlgFrac{f.from_rational(Rational(0)),
                                     f.from_rational(Rational(1))});
  XVal right = make_xval(ctx, ctx.right_endpoint());
  XVal cur = make_xval(ctx, start);
  auto step = [&](XVal& v) {
    v.alg = frac_step(f, v.alg, k);
    Iv t(512);
    iv_mul(t, beta, v.box);
    iv_sub_si(v.box, t, k);
  };
  XVal first = cur;
  step(first);
  if (xval_cmp(f, first, cur) == 0)
    throw Diverged("start is the fixed point of T_k; the orbit never moves");
  cur = std::move(first);
  for (long l = 1; l <= max_iter; ++l) {
    if (l > 1) {
      step(cur);
      if (l % 128 == 0) cur.box = frac_box(f, cur.alg, 512);
    }
    if (xval_cmp(f, cur, target_lo) >= 0 && xval_cmp(f, cur, target_hi) <= 0)
      return l;
    if (xval_cmp(f, cur, zero) < 0 || xval_cmp(f, cur, right) > 0)
      throw Diverged(
          "orbit left the expansion interval before hitting the target");
  }
  throw Diverged("hitting run exceeded the iteration cutoff");
}

}  // namespace betafreq
