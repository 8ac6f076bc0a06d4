#include "betafreq/balancer.hpp"

#include "betafreq/errors.hpp"

namespace betafreq {

namespace {

NavRequest anchor_request(const BetaContext& ctx, const PairGeometry& g,
                          bool high) {
  NavRequest req;
  const CInterval& a = high ? g.A_hi : g.A_lo;
  req.target_lo = make_xval(ctx, a.lo);
  req.target_hi = make_xval(ctx, a.hi);
  req.allowed_digits = {g.k1, g.k2};
  req.constraint_lo = make_xval(ctx, g.D_pair.lo);
  req.constraint_hi = make_xval(ctx, g.D_pair.hi);
  return req;
}

}  // namespace

BalancerState::BalancerState(const BetaContext& ctx, int k1, int k2,
                             const Rational& p_k1, OrbitEngine& eng,
                             Side initial)
    : ctx_(&ctx),
      eng_(&eng),
      probe_(eng),
      k1_(k1),
      k2_(k2),
      p_(p_k1),
      geom_(build_geometry(ctx, k1, k2)),
      alo_lo_(make_xval(ctx, geom_.A_lo.lo)),
      alo_hi_(make_xval(ctx, geom_.A_lo.hi)),
      ahi_lo_(make_xval(ctx, geom_.A_hi.lo)),
      ahi_hi_(make_xval(ctx, geom_.A_hi.hi)),
      side_(initial) {
  const Rational eps(1, ctx.n() + 1);
  if (p_ < eps || p_ > 1 - eps)
    throw NotInSimplex("pair target frequency outside [1/(n+1), n/(n+1)]");
  to_low_.emplace(ctx, anchor_request(ctx, geom_, false));
  to_high_.emplace(ctx, anchor_request(ctx, geom_, true));
  NavPlan& plan = side_ == Side::Low ? *to_low_ : *to_high_;
  Word c = plan.navigate(probe_);
  for (int k : c.digits) queue_.push_back(static_cast<std::uint8_t>(k));
  connector_len_ = queue_.size();
}

void BalancerState::commit(int k) {
  eng_->push(k);
  ++len_;
  if (k == k1_) ++c1_;
}

std::vector<std::uint8_t> BalancerState::plan_block() {
  const bool low = side_ == Side::Low;
  const int lead = low ? k2_ : k1_;
  const int run = low ? k1_ : k2_;
  const XVal& alo = low ? alo_lo_ : ahi_lo_;
  const XVal& ahi = low ? alo_hi_ : ahi_hi_;
  std::vector<std::uint8_t> extra{static_cast<std::uint8_t>(lead)};
  const long cap = 64 + 16L * (ctx_->n() + 2);
  // certified local interval walk; only boundary-grazing steps fall back to
  // the engine's exact query
  Iv beta = ctx_->beta().enclosure(576);
  Iv walk(576), t(576);
  walk.set(eng_->enclosure(512));
  iv_mul(t, beta, walk);
  iv_sub_si(walk, t, lead);
  long l = 0;
  for (;;) {
    extra.push_back(static_cast<std::uint8_t>(run));
    ++l;
    iv_mul(t, beta, walk);
    iv_sub_si(walk, t, run);
    // the drift-sign guarantees need l >= n, so shorter returns are skipped
    if (l >= ctx_->n()) {
      int clo = iv_cmp(walk, alo.box);
      int chi = iv_cmp(walk, ahi.box);
      if (clo > 0 && chi < 0) break;  // certified inside the anchor
      if ((clo == 0 || chi == 0) &&
          eng_->in_after(extra.data(), extra.size(), alo, ahi))
        break;
    }
    if (l > cap)
      throw Diverged("balancer block failed to return to its anchor interval");
  }
  if (l > max_run_) max_run_ = l;
  return extra;
}

void BalancerState::plan() {
  Rational d = discrepancy();
  if ((side_ == Side::Low && d > 0) || (side_ == Side::High && d < 0)) {
    side_ = side_ == Side::Low ? Side::High : Side::Low;
    NavPlan& plan = side_ == Side::Low ? *to_low_ : *to_high_;
    Word c = plan.navigate(probe_);
    for (int k : c.digits) queue_.push_back(static_cast<std::uint8_t>(k));
    if (!queue_.empty()) return;
  }
  for (std::uint8_t k : plan_block()) queue_.push_back(k);
}

int BalancerState::next_digit() {
  if (queue_.empty()) plan();
  int k = queue_.front();
  queue_.pop_front();
  commit(k);
  return k;
}

Word BalancerState::emit_block() {
  if (!queue_.empty())
    throw DomainError("emit_block called with pending queued digits");
  Word w(ctx_->M());
  for (std::uint8_t k : plan_block()) {
    commit(k);
    w.push(k);
  }
  return w;
}

}  // namespace betafreq
