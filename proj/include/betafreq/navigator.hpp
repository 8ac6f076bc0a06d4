#pragma once

#include "betafreq/dynamics.hpp"

#include <vector>

namespace betafreq {

// Abstract exact orbit point that can be tentatively advanced by a digit
// word without committing it. cmp_after is exact (-1/0/+1): the concrete
// probes use a numeric shadow first and fall back to algebraic signs.
struct PointProbe {
  virtual ~PointProbe() = default;
  virtual int cmp_after(const std::vector<std::uint8_t>& extra,
                        const XVal& e) = 0;
  bool in_after(const std::vector<std::uint8_t>& extra, const XVal& lo,
                const XVal& hi) {
    return cmp_after(extra, lo) >= 0 && cmp_after(extra, hi) <= 0;
  }
};

// Standalone probe for an arbitrary algebraic starting point.
class FracProbe : public PointProbe {
 public:
  FracProbe(const BetaContext& ctx, AlgFrac start, mpfr_prec_t prec = 512);
  int cmp_after(const std::vector<std::uint8_t>& extra,
                const XVal& e) override;

 private:
  const BetaContext* ctx_;
  mpfr_prec_t prec_;
  Iv beta_;
  std::vector<std::uint8_t> word_;  // cached tentative prefix
  std::vector<XVal> states_;        // states_[i] = point after word_[0..i)
};

// Probe over a live orbit engine (shadow fast path, symbolic fallback).
class EngineProbe : public PointProbe {
 public:
  explicit EngineProbe(OrbitEngine& eng) : eng_(&eng) {}
  int cmp_after(const std::vector<std::uint8_t>& extra,
                const XVal& e) override {
    return eng_->cmp_after(extra.data(), extra.size(), e);
  }

 private:
  OrbitEngine* eng_;
};

struct NavRequest {
  XVal target_lo, target_hi;
  std::vector<int> allowed_digits;
  XVal constraint_lo, constraint_hi;
  int max_len = 64;
};

// Backward-reachability layers W_j for a fixed request: W_0 = target,
// W_{j+1} = W_j  union  { (I + k)/beta  intersect  constraint } over allowed
// digits k and component intervals I of W_j. All endpoints are exact
// algebraic fractions, so layer geometry never needs precision escalation.
// A point reaches the target in at most j admissible steps iff it lies in
// W_j; the minimal such j is the shortest word length, and digit-ascending
// extraction yields the lexicographically smallest shortest word.
class NavPlan {
 public:
  NavPlan(const BetaContext& ctx, NavRequest req);

  // Shortest word (ties broken lexicographically) steering the probe's
  // point into the target while every intermediate point stays inside the
  // state constraint. Throws NotReachableWithinCutoff past max_len, and
  // DomainError if the start violates the constraint.
  Word navigate(PointProbe& p);

  size_t layers_built() const { return layers_.size(); }

 private:
  struct Range {
    XVal lo, hi;
  };
  void ensure_layer(size_t d);
  bool probe_in_layer(PointProbe& p, const std::vector<std::uint8_t>& extra,
                      size_t layer);
  int cmp_vals(const XVal& a, const XVal& b) const;

  const BetaContext* ctx_;
  NavRequest req_;
  Iv beta_;
  std::vector<std::vector<Range>> layers_;
  bool saturated_ = false;  // W_{j+1} == W_j: no further growth possible
};

// One-shot convenience wrapper.
Word navigate(const BetaContext& ctx, PointProbe& p, const NavRequest& req);

// Minimal l >= 1 with T_k^l(start) in [target_lo, target_hi]; throws
// Diverged when the orbit leaves [0, M/(beta-1)] or fails to hit within
// max_iter steps (fixed point included).
long hitting_run(const BetaContext& ctx, int k, const AlgFrac& start,
                 const XVal& target_lo, const XVal& target_hi,
                 long max_iter = 100000);

}  // namespace betafreq
