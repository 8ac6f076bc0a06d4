#pragma once

#include "betafreq/balancer.hpp"
#include "betafreq/dynamics.hpp"
#include "betafreq/navigator.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace betafreq {

// Exact rational digit-frequency target (p_0, ..., p_M).
struct FreqVector {
  std::vector<Rational> p;

  int M() const { return static_cast<int>(p.size()) - 1; }
  bool in_simplex() const;            // nonnegative, sums to 1
  bool in_truncated(int n) const;     // additionally every p_k <= n/(n+1)
  double sup_error(const std::vector<long long>& counts) const;
};

// Lexicographic enumeration of ordered digit pairs (k1, k2), k1 != k2.
std::vector<std::pair<int, int>> ordered_pairs(int M);

// Convex weights over ordered pairs: p = sum r_{k1,k2} v_{n,k1,k2} where
// v places n/(n+1) on k1 and 1/(n+1) on k2.
struct PairWeights {
  int M = 0, n = 1;
  std::vector<Rational> r;  // indexed in ordered_pairs(M) order

  // Exact reconstruction: p_k = sum_{k2} n r_{k,k2}/(n+1)
  //                             + sum_{k1} r_{k1,k}/(n+1).
  bool reconstructs(const FreqVector& p) const;
};

// Exact convex decomposition of p over the extremal vectors; vertex inputs
// return indicator weights, everything else goes through a rational
// phase-1 simplex with Bland's rule. Throws NotInSimplex.
PairWeights decompose(const FreqVector& p, int n);

struct Checkpoint {
  long long N = 0;
  std::vector<long long> counts;
};

// Theorem 1.2 / Theorem 1.4 digit stream scheduler. Rounds i = 1, 2, ...
// allocate floor(i^2 r_pair) balanced digits per weighted pair, joined by
// shortest-path connectors inside the global state space.
class ExpansionStream {
 public:
  // Converging mode: every digit frequency tends to the target.
  ExpansionStream(const BetaContext& ctx, const Rational& x,
                  FreqVector target);
  // Oscillating mode: frequencies on the digit set D never converge while
  // those on its complement converge to p_partial. p_partial maps digits
  // outside D to their target frequencies.
  ExpansionStream(const BetaContext& ctx, const Rational& x,
                  std::vector<int> D, std::map<int, Rational> p_partial);

  // Emits digits until exactly digit_budget digits are committed. One call
  // per stream.
  void run(long long digit_budget);

  const BetaContext& ctx() const { return *ctx_; }
  OrbitEngine& engine() { return eng_; }
  const OrbitEngine& engine() const { return eng_; }
  long long emitted() const { return static_cast<long long>(eng_.length()); }
  const std::vector<Checkpoint>& checkpoints() const { return checkpoints_; }
  // N at the end of each completed round.
  const std::vector<long long>& round_ends() const { return round_ends_; }
  bool oscillating() const { return oscillating_; }
  const FreqVector& target() const { return target_; }
  // Oscillating mode only: the two alternating targets and the prefix
  // lengths at which the stream switched between them. switch_stages()[i]
  // is the stage (1-based) that ended at switch_points()[i]; odd stages
  // chased q, even stages chased q_alt.
  const FreqVector& q() const { return target_; }
  const FreqVector& q_alt() const { return q_alt_; }
  const std::vector<long long>& switch_points() const {
    return switch_points_;
  }
  const std::vector<int>& switch_stages() const { return switch_stages_; }

 private:
  struct BudgetReached {};
  void check_budget();
  void record();
  void connector_to_pair(size_t pair_idx, bool first);
  const FreqVector& stage_target() const;
  const PairWeights& stage_weights() const;
  Rational switch_tolerance(int stage) const;

  const BetaContext* ctx_;
  Rational x_;
  OrbitEngine eng_;
  bool oscillating_ = false;
  FreqVector target_;           // converging target, or q in oscillate mode
  FreqVector q_alt_;            // q' in oscillate mode
  PairWeights weights_, weights_alt_;
  Rational sep_;                // min_{k in D} |q_k - q'_k|
  std::vector<std::pair<int, int>> pairs_;
  std::map<size_t, PairGeometry> geoms_;
  std::map<std::pair<size_t, bool>, NavPlan> plans_;
  long long budget_ = 0;
  bool ran_ = false;
  int stage_ = 1;
  std::vector<Checkpoint> checkpoints_;
  std::vector<long long> round_ends_;
  std::vector<long long> switch_points_;
  std::vector<int> switch_stages_;
};

ExpansionStream synthesize(const BetaContext& ctx, const Rational& x,
                           FreqVector target, long long digit_budget);
ExpansionStream synthesize_nonconvergent(const BetaContext& ctx,
                                         const Rational& x,
                                         std::vector<int> D,
                                         std::map<int, Rational> p_partial,
                                         long long digit_budget);

}  // namespace betafreq
