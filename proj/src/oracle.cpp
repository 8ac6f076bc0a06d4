#include "betafreq/oracle.hpp"

#include "betafreq/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <sstream>

namespace betafreq {

namespace {

constexpr int kMaxDepth = 24;
constexpr long long kMaxNodes = 4000000;

}  // namespace

bool BranchTree::contains(const std::vector<std::uint8_t>& prefix) const {
  if (prefix.size() >= levels_.size()) return false;
  const auto& lvl = levels_[prefix.size()];
  return std::binary_search(lvl.begin(), lvl.end(), prefix);
}

std::vector<long long> BranchTree::depth_counts() const {
  std::vector<long long> c;
  for (const auto& lvl : levels_) c.push_back(static_cast<long long>(lvl.size()));
  return c;
}

BranchTree enumerate_prefixes(const BetaContext& ctx, const Rational& x,
                              int depth) {
  if (depth < 0 || depth > kMaxDepth)
    throw DomainError("enumeration depth must be in [0, 24]");
  const AlgebraicField& f = *ctx.field();
  ModPoly x0 = f.from_rational(x);
  const AlgFrac& R = ctx.right_endpoint().alg;
  if (x < 0 || f.compare_frac(x0, R) > 0)
    throw DomainError("x outside the expansion state space [0, M/(beta-1)]");

  BranchTree t;
  t.levels_.assign(static_cast<size_t>(depth) + 1, {});
  t.levels_[0].push_back({});
  // exact orbit value for each live prefix, parallel to the level entries
  std::vector<ModPoly> vals{x0};
  long long nodes = 1;
  for (int d = 1; d <= depth; ++d) {
    std::vector<ModPoly> next_vals;
    const auto& prev = t.levels_[static_cast<size_t>(d) - 1];
    auto& cur = t.levels_[static_cast<size_t>(d)];
    for (size_t i = 0; i < prev.size(); ++i) {
      for (int k = 0; k <= ctx.M(); ++k) {
        ModPoly v = f.t_map(vals[i], k);
        if (f.sign(v) < 0 || f.compare_frac(v, R) > 0) continue;
        std::vector<std::uint8_t> w = prev[i];
        w.push_back(static_cast<std::uint8_t>(k));
        cur.push_back(std::move(w));
        next_vals.push_back(std::move(v));
        if (++nodes > kMaxNodes)
          throw DomainError("branch enumeration exceeded the node budget");
      }
    }
    vals = std::move(next_vals);
  }
  return t;
}

std::string OracleReport::to_json() const {
  nlohmann::ordered_json doc;
  doc["depth_counts"] = depth_counts;
  doc["violations"] = violations;
  return doc.dump(2) + "\n";
}

OracleReport validate_expansion(const Artifact& a) {
  OracleReport rep;
  auto flag = [&rep](const std::string& msg) { rep.violations.push_back(msg); };

  BetaContext ctx = context_of(a);
  const AlgebraicField& f = *ctx.field();
  if (a.x <= 0 ||
      f.compare_frac(f.from_rational(a.x), ctx.right_endpoint().alg) >= 0)
    flag("x outside the open interval (0, M/(beta-1))");
  for (size_t t = 0; t < a.targets.size(); ++t) {
    Rational sum(0);
    bool nonneg = true;
    for (const Rational& p : a.targets[t]) {
      if (p < 0) nonneg = false;
      sum += p;
    }
    if (!nonneg || sum != 1)
      flag("target vector " + std::to_string(t) + " is not in the simplex");
  }
  if ((a.mode == "oscillate") != (a.targets.size() == 2))
    flag("mode and target count disagree");

  // replay: every digit must be an admissible step of the exact orbit;
  // staying in [0, M/(beta-1)] for all N certifies the reconstruction
  // bound |x - sum a_i beta^{-i}| = beta^{-N} |T_w(x)| <= beta^{-N} R
  OrbitEngine eng(ctx, a.x);
  size_t next_cp = 0;
  for (size_t i = 0; i < a.digits.size(); ++i) {
    int k = a.digits[i];
    if (eng.step_admissible(k) != Tri::Yes) {
      std::ostringstream os;
      os << "digit " << k << " at position " << i
         << " leaves the state space";
      flag(os.str());
      break;
    }
    eng.push(k);
    long long N = static_cast<long long>(i) + 1;
    while (next_cp < a.checkpoints.size() && a.checkpoints[next_cp].N == N) {
      if (a.checkpoints[next_cp].counts != eng.counts()) {
        std::ostringstream os;
        os << "checkpoint at N=" << N << " disagrees with the recount";
        flag(os.str());
      }
      ++next_cp;
    }
  }
  for (; next_cp < a.checkpoints.size(); ++next_cp) {
    std::ostringstream os;
    os << "checkpoint at N=" << a.checkpoints[next_cp].N
       << " beyond the digit stream";
    flag(os.str());
  }

  long long prev_N = 0;
  int prev_stage = 0;
  for (const auto& [N, stage] : a.switches) {
    if (N <= prev_N || stage != prev_stage + 1) {
      flag("switch records are not an increasing stage sequence");
      break;
    }
    prev_N = N;
    prev_stage = stage;
  }
  return rep;
}

}  // namespace betafreq
