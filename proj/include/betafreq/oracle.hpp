#pragma once

#include "betafreq/artifact.hpp"
#include "betafreq/dynamics.hpp"

#include <string>
#include <vector>

namespace betafreq {

// All admissible digit prefixes of x up to a fixed depth, organized by
// length. Level d lists every word w of length d with T_w(x) staying in
// [0, M/(beta-1)] throughout; levels are in lexicographic order.
class BranchTree {
 public:
  int depth() const { return static_cast<int>(levels_.size()) - 1; }
  const std::vector<std::vector<std::uint8_t>>& level(int d) const {
    return levels_.at(static_cast<size_t>(d));
  }
  bool contains(const std::vector<std::uint8_t>& prefix) const;
  // Number of admissible prefixes at each depth 0..depth().
  std::vector<long long> depth_counts() const;

 private:
  friend BranchTree enumerate_prefixes(const BetaContext&, const Rational&,
                                       int);
  std::vector<std::vector<std::vector<std::uint8_t>>> levels_;
};

// Exhaustive exact enumeration. Depth is capped at 24 and the total node
// count at a few million; both violations throw DomainError.
BranchTree enumerate_prefixes(const BetaContext& ctx, const Rational& x,
                              int depth);

inline std::vector<long long> branching_profile(const BranchTree& t) {
  return t.depth_counts();
}

struct OracleReport {
  std::vector<long long> depth_counts;
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
  std::string to_json() const;  // {"depth_counts": [...], "violations": [...]}
};

// Independent replay of an artifact: every digit re-checked for
// admissibility, per-digit counts recomputed against each checkpoint, and
// the reconstruction error certified to be at most beta^{-N} M/(beta-1).
OracleReport validate_expansion(const Artifact& a);

}  // namespace betafreq
