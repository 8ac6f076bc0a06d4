// Release gate: every blocking behavior exercised end to end, one verdict
// line per criterion. Exits nonzero when any criterion fails.
#include "betafreq/artifact.hpp"
#include "betafreq/balancer.hpp"
#include "betafreq/bounds.hpp"
#include "betafreq/dynamics.hpp"
#include "betafreq/errors.hpp"
#include "betafreq/oracle.hpp"
#include "betafreq/synthesis.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <string>
#include <vector>

using namespace betafreq;

namespace {

int g_failures = 0;

void run_criterion(int idx, const char* name, double budget_s,
                   const std::function<bool(std::string&)>& body) {
  std::string detail;
  bool ok = false;
  auto t0 = std::chrono::steady_clock::now();
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                              t0)
                    .count();
  if (secs > budget_s) {
    ok = false;
    detail += detail.empty() ? "" : "; ";
    detail += "over time budget";
  }
  std::printf("criterion %d (%s): %s  [%.1fs / %.0fs]%s%s\n", idx, name,
              ok ? "PASS" : "FAIL", secs, budget_s, detail.empty() ? "" : " — ",
              detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

FreqVector fv(std::vector<Rational> p) {
  FreqVector f;
  f.p = std::move(p);
  return f;
}

// An exact rational strictly between two endpoint values.
Rational rational_between(const BetaContext& ctx, const Endpoint& lo,
                          const Endpoint& hi) {
  const AlgebraicField& f = *ctx.field();
  double a = make_xval(ctx, lo).box.approx();
  double b = make_xval(ctx, hi).box.approx();
  for (long long den = 1LL << 12;; den <<= 2) {
    Rational x(llround((a + b) / 2.0 * static_cast<double>(den)), den);
    if (f.compare_frac(f.from_rational(x), lo.alg) > 0 &&
        f.compare_frac(f.from_rational(x), hi.alg) < 0)
      return x;
  }
}

std::vector<long long> counts_at(const std::vector<std::uint8_t>& digits,
                                 long long N, int M) {
  std::vector<long long> c(static_cast<size_t>(M) + 1, 0);
  for (long long i = 0; i < N; ++i) c[digits[static_cast<size_t>(i)]] += 1;
  return c;
}

// Random rational point of the truncated simplex (every coordinate at most
// n/(n+1)) by rejection, with the barycenter as a deterministic fallback.
FreqVector random_truncated(std::mt19937_64& rng, int M, int n) {
  const Rational cap(n, n + 1);
  std::uniform_int_distribution<long> coord(1, 1000);
  for (int attempt = 0; attempt < 400; ++attempt) {
    std::vector<Rational> p(static_cast<size_t>(M) + 1);
    long total = 0;
    std::vector<long> w(static_cast<size_t>(M) + 1);
    for (auto& wk : w) {
      wk = coord(rng);
      total += wk;
    }
    bool fits = true;
    for (int k = 0; k <= M; ++k) {
      p[static_cast<size_t>(k)] = Rational(w[static_cast<size_t>(k)], total);
      if (p[static_cast<size_t>(k)] > cap) fits = false;
    }
    if (fits) return fv(std::move(p));
  }
  return fv(std::vector<Rational>(static_cast<size_t>(M) + 1,
                                  Rational(1, M + 1)));
}

bool crit_table(std::string& detail) {
  const std::vector<unsigned> ns{1, 2, 3, 4, 5, 10, 25, 50, 100};
  const char* betas[] = {"1.618", "1.466", "1.380", "1.325", "1.285",
                         "1.184", "1.098", "1.058", "1.034"};
  const double uppers[] = {2.0, 2.0, 2.0, 1.894, 1.761, 1.432, 1.207, 1.116,
                           1.064};
  std::vector<TableRow> rows = critical_table(2, ns);
  if (rows.size() != ns.size()) {
    detail = "row count mismatch";
    return false;
  }
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].beta_n != betas[i]) {
      detail = "beta_" + std::to_string(ns[i]) + " = " + rows[i].beta_n;
      return false;
    }
    const bool sharp_rows = ns[i] == 10 || ns[i] == 25;
    if (rows[i].reproduced == sharp_rows) {
      detail = "reproduced flag wrong at n=" + std::to_string(ns[i]);
      return false;
    }
    if (!sharp_rows &&
        std::abs(std::atof(rows[i].upper.c_str()) - uppers[i]) > 0.001 + 1e-9) {
      detail = "upper bound at n=" + std::to_string(ns[i]) + " = " +
               rows[i].upper;
      return false;
    }
  }
  return true;
}

bool crit_worked_bound(std::string& detail) {
  BernoulliParams q(fv({Rational(4, 5), Rational(3, 20), Rational(1, 20)}));
  FreqVector p = fv({Rational(5, 6), Rational(1, 6), Rational(0)});
  CertifiedReal beta = CertifiedReal::from_rational(Rational(32, 25));
  double a = local_dim_bound(p, q, beta).approx();
  double b = corollary_dim_bound(5, q, beta).approx();
  if (std::abs(a - 2.034) > 0.001 || std::abs(b - 2.034) > 0.001) {
    detail = "bounds " + std::to_string(a) + ", " + std::to_string(b);
    return false;
  }
  return true;
}

bool crit_sandwich(std::string& detail) {
  for (unsigned n = 3; n <= 1000; ++n) {
    if (!check_lower(n)) {
      detail = "lower certificate failed at n=" + std::to_string(n);
      return false;
    }
    if (compare(lower_envelope(n), beta_n(n)) != Ordering::Less ||
        compare(beta_n(n), upper_envelope_uncapped(1, n)) != Ordering::Less) {
      detail = "sandwich failed at n=" + std::to_string(n);
      return false;
    }
  }
  return true;
}

bool crit_balancer(std::string& detail) {
  struct Case {
    int M, n, k1, k2;
    Rational p;
  };
  const std::vector<Case> cases{
      {1, 1, 0, 1, Rational(1, 2)}, {1, 2, 0, 1, Rational(1, 3)},
      {1, 2, 0, 1, Rational(3, 5)}, {1, 3, 0, 1, Rational(1, 2)},
      {2, 1, 0, 2, Rational(1, 2)}, {2, 2, 0, 1, Rational(2, 5)},
      {2, 2, 1, 2, Rational(5, 8)}, {2, 3, 0, 2, Rational(1, 4)},
      {2, 3, 0, 1, Rational(3, 4)}, {2, 1, 1, 2, Rational(1, 2)}};
  const long long kDigits = 1000000, kSplit = 100000;
  for (size_t c = 0; c < cases.size(); ++c) {
    const Case& cs = cases[c];
    BetaContext ctx(cs.M, cs.n,
                    scaled_beta_n(static_cast<unsigned>(cs.n),
                                  Rational(99, 100)));
    PairGeometry g = build_geometry(ctx, cs.k1, cs.k2);
    Rational x = rational_between(ctx, g.D_pair.lo, g.D_pair.hi);
    OrbitEngine eng(ctx, x, 16384);
    BalancerState bal(ctx, cs.k1, cs.k2, cs.p, eng);
    Rational early(0), late(0);
    for (long long i = 1; i <= kDigits; ++i) {
      bal.next_digit();
      Rational d = bal.discrepancy();
      if (d < 0) d = -d;
      Rational& bucket = i <= kSplit ? early : late;
      if (d > bucket) bucket = d;
      if (i % kSplit == 0 && eng.member(g.D_pair) != Tri::Yes) {
        detail = "case " + std::to_string(c) + " left the pair state space";
        return false;
      }
    }
    if (late != early) {
      detail = "case " + std::to_string(c) + " discrepancy grew: early " +
               early.str() + " late " + late.str();
      return false;
    }
  }
  return true;
}

bool crit_synthesis(std::string& detail) {
  std::mt19937_64 rng(20260823);
  const long long kDigits = 200000;
  for (int c = 0; c < 20; ++c) {
    const int M = c % 3 + 1, n = (c / 3) % 3 + 1;
    BetaContext ctx(M, n,
                    scaled_beta_n(static_cast<unsigned>(n), Rational(99, 100)));
    FreqVector p = random_truncated(rng, M, n);
    Rational x(std::uniform_int_distribution<long>(1, 999)(rng), 1000);
    ExpansionStream s = synthesize(ctx, x, p, kDigits);
    Artifact a = make_artifact(s);
    double sup = p.sup_error(s.engine().counts());
    if (sup > 0.05) {
      detail = "case " + std::to_string(c) + " sup error " +
               std::to_string(sup);
      return false;
    }
    std::vector<long long> ends;
    for (long long e : s.round_ends())
      if (e <= kDigits) ends.push_back(e);
    // integer digit counts quantize the sup error at the 1/N scale, so
    // monotonicity is asserted up to that noise floor
    size_t from = ends.size() > 5 ? ends.size() - 5 : 0;
    double prev = 2.0;
    for (size_t i = from; i < ends.size(); ++i) {
      double se = p.sup_error(counts_at(a.digits, ends[i], M));
      if (se > prev + 1e-3) {
        detail = "case " + std::to_string(c) +
                 " sup error rose across round boundaries";
        return false;
      }
      prev = se;
    }
    OracleReport rep = validate_expansion(a);
    if (!rep.ok()) {
      detail = "case " + std::to_string(c) + " replay: " + rep.violations[0];
      return false;
    }
  }
  return true;
}

bool crit_oscillation(std::string& detail) {
  BetaContext ctx(2, 2, scaled_beta_n(2, Rational(99, 100)));
  const long long kDigits = 200000;
  ExpansionStream s = synthesize_nonconvergent(ctx, Rational(1), {0, 1},
                                               {{2, Rational(1, 2)}}, kDigits);
  Artifact a = make_artifact(s);
  const std::vector<long long>& sw = s.switch_points();
  if (sw.size() < 2) {
    detail = "fewer than two stage switches";
    return false;
  }
  long long n1 = sw[sw.size() - 2], n2 = sw[sw.size() - 1];
  double f1 = static_cast<double>(counts_at(a.digits, n1, 2)[0]) /
              static_cast<double>(n1);
  double f2 = static_cast<double>(counts_at(a.digits, n2, 2)[0]) /
              static_cast<double>(n2);
  Rational gap = s.q().p[0] - s.q_alt().p[0];
  if (gap < 0) gap = -gap;
  if (std::abs(f1 - f2) < 0.5 * gap.convert_to<double>()) {
    detail = "digit-0 subsequence frequencies too close: " +
             std::to_string(f1) + " vs " + std::to_string(f2);
    return false;
  }
  double f2final = static_cast<double>(s.engine().counts()[2]) /
                   static_cast<double>(kDigits);
  if (std::abs(f2final - 0.5) > 0.05) {
    detail = "digit-2 frequency " + std::to_string(f2final);
    return false;
  }
  return true;
}

bool crit_decomposition(std::string& detail) {
  std::mt19937_64 rng(411);
  for (int M = 1; M <= 4; ++M) {
    for (int n = 1; n <= 5; ++n) {
      for (int t = 0; t < 1000; ++t) {
        FreqVector p = random_truncated(rng, M, n);
        PairWeights w = decompose(p, n);
        if (!w.reconstructs(p)) {
          detail = "reconstruction failed at M=" + std::to_string(M) +
                   " n=" + std::to_string(n);
          return false;
        }
      }
      // every extremal vector must come back as an indicator weight
      const auto pairs = ordered_pairs(M);
      for (size_t i = 0; i < pairs.size(); ++i) {
        std::vector<Rational> v(static_cast<size_t>(M) + 1, Rational(0));
        v[static_cast<size_t>(pairs[i].first)] = Rational(n, n + 1);
        v[static_cast<size_t>(pairs[i].second)] += Rational(1, n + 1);
        PairWeights w = decompose(fv(v), n);
        int ones = 0;
        bool zeros = true;
        for (size_t j = 0; j < w.r.size(); ++j) {
          if (w.r[j] == 1)
            ++ones;
          else if (w.r[j] != 0)
            zeros = false;
        }
        if (ones != 1 || !zeros) {
          detail = "vertex decomposition not an indicator at M=" +
                   std::to_string(M) + " n=" + std::to_string(n);
          return false;
        }
      }
    }
  }
  return true;
}

bool crit_oracle(std::string& detail) {
  // endpoints branch nowhere
  for (int M : {1, 2}) {
    BetaContext ctx(M, 1, Rational(3, 2));
    for (const Rational& x : {Rational(0), Rational(2 * M)}) {
      BranchTree t = enumerate_prefixes(ctx, x, 8);
      for (long long c : t.depth_counts())
        if (c != 1) {
          detail = "endpoint tree branched at M=" + std::to_string(M);
          return false;
        }
    }
  }
  BetaContext golden(1, 1, beta_n_root(1));
  BranchTree t2 = enumerate_prefixes(golden, Rational(1), 2);
  if (t2.depth_counts() != std::vector<long long>{1, 2, 3}) {
    detail = "golden depth-2 profile wrong";
    return false;
  }
  // synthesis requires a base strictly below the critical one, so the
  // prefix check runs just under it
  BetaContext below(1, 1, scaled_beta_n(1, Rational(99, 100)));
  ExpansionStream s =
      synthesize(below, Rational(1), fv({Rational(1, 2), Rational(1, 2)}),
                 200);
  BranchTree t18 = enumerate_prefixes(below, Rational(1), 18);
  Artifact a = make_artifact(s);
  for (size_t len = 1; len <= 18; ++len) {
    std::vector<std::uint8_t> prefix(a.digits.begin(),
                                     a.digits.begin() + static_cast<long>(len));
    if (!t18.contains(prefix)) {
      detail = "synthesized prefix of length " + std::to_string(len) +
               " missing from tree";
      return false;
    }
  }
  return true;
}

bool crit_inclusions(std::string& detail) {
  for (int M = 1; M <= 4; ++M) {
    for (unsigned n = 1; n <= 5; ++n) {
      auto [blo, bhi] = beta_n_root(n)->bracket(40);
      for (int j = 1; j <= 20; ++j) {
        Rational beta = 1 + Rational(j) * (blo - 1) / 21;
        BetaContext ctx(M, static_cast<int>(n), beta);
        for (int k1 = 0; k1 < M; ++k1)
          for (int k2 = k1 + 1; k2 <= M; ++k2) {
            try {
              build_geometry(ctx, k1, k2);
            } catch (const Error& e) {
              detail = "inclusion failed below the threshold at M=" +
                       std::to_string(M) + " n=" + std::to_string(n) + ": " +
                       e.what();
              return false;
            }
          }
      }
      Rational bad = bhi + Rational(1, 1000000);
      BetaContext ctx(M, static_cast<int>(n), bad);
      bool violated = false;
      for (int k1 = 0; k1 < M && !violated; ++k1)
        for (int k2 = k1 + 1; k2 <= M && !violated; ++k2) {
          try {
            build_geometry(ctx, k1, k2);
          } catch (const InclusionViolated&) {
            violated = true;
          }
        }
      if (!violated) {
        detail = "no inclusion violated above the threshold at M=" +
                 std::to_string(M) + " n=" + std::to_string(n);
        return false;
      }
    }
  }
  return true;
}

}  // namespace

int main() {
  run_criterion(1, "critical-base table", 5, crit_table);
  run_criterion(2, "worked dimension bound", 1, crit_worked_bound);
  run_criterion(3, "envelope sandwich", 60, crit_sandwich);
  run_criterion(4, "balancer boundedness", 600, crit_balancer);
  run_criterion(5, "synthesis convergence", 1200, crit_synthesis);
  run_criterion(6, "oscillating synthesis", 120, crit_oscillation);
  run_criterion(7, "decomposition exactness", 30, crit_decomposition);
  run_criterion(8, "prefix-tree ground truth", 60, crit_oracle);
  run_criterion(9, "interval inclusions", 30, crit_inclusions);
  if (g_failures == 0) {
    std::printf("all 9 criteria passed\n");
    return 0;
  }
  std::printf("%d criteria failed\n", g_failures);
  return 1;
}
