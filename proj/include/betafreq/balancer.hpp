#pragma once

#include "betafreq/dynamics.hpp"
#include "betafreq/navigator.hpp"

#include <deque>
#include <optional>

namespace betafreq {

enum class Side { Low, High };

// Emits an unbounded digit stream over {k1, k2} whose orbit stays inside
// D_pair and whose prefix digit counts track an exact rational target
// frequency within a bounded discrepancy. Blocks alternate between the two
// anchor intervals: on side Low each block is (k2, k1^l) returning to A_lo
// (discrepancy drifts up), on side High (k1, k2^l) returning to A_hi
// (drifts down). The side flips when the discrepancy strictly crosses zero;
// at exactly zero the stream stays on its side, so extremal targets yield
// an eventually periodic stream instead of endless side-switching.
class BalancerState {
 public:
  // Plans (but does not commit) an initial connector word steering the
  // engine's point into the anchor interval of `initial` over {k1, k2}
  // within D_pair. Throws NotInSimplex when p_k1 is outside
  // [1/(n+1), n/(n+1)] and DomainError when the point is outside D_pair.
  BalancerState(const BetaContext& ctx, int k1, int k2, const Rational& p_k1,
                OrbitEngine& eng, Side initial = Side::Low);

  const PairGeometry& geometry() const { return geom_; }
  Side side() const { return side_; }
  int k1() const { return k1_; }
  int k2() const { return k2_; }
  const Rational& p_k1() const { return p_; }

  // Committed stream statistics (connectors included).
  long long emitted() const { return len_; }
  long long emitted_k1() const { return c1_; }
  // |emitted|_{k1} - p_k1 * |emitted|, exact.
  Rational discrepancy() const { return Rational(c1_) - p_ * Rational(len_); }

  size_t connector_len() const { return connector_len_; }
  long max_run() const { return max_run_; }  // observed block run bound n'

  // Emits exactly one digit: commits it to the engine and the counters.
  int next_digit();

  // Plans and commits one full block on the current side (no switch
  // logic); requires no queued digits.
  Word emit_block();

 private:
  void plan();
  std::vector<std::uint8_t> plan_block();
  void commit(int k);

  const BetaContext* ctx_;
  OrbitEngine* eng_;
  EngineProbe probe_;
  int k1_, k2_;
  Rational p_;
  PairGeometry geom_;
  XVal alo_lo_, alo_hi_, ahi_lo_, ahi_hi_;
  std::optional<NavPlan> to_low_, to_high_;
  Side side_;
  std::deque<std::uint8_t> queue_;
  long long len_ = 0, c1_ = 0;
  size_t connector_len_ = 0;
  long max_run_ = 0;
};

inline BalancerState init_balancer(const BetaContext& ctx, int k1, int k2,
                                   const Rational& p_k1, OrbitEngine& eng) {
  return BalancerState(ctx, k1, k2, p_k1, eng);
}

}  // namespace betafreq
