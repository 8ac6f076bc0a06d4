#pragma once

#include "betafreq/algebraic.hpp"
#include "betafreq/interval.hpp"
#include "betafreq/rational.hpp"
#include "betafreq/real.hpp"
#include "betafreq/roots.hpp"

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace betafreq {

enum class Tri { Yes, No, Undecided };

// Finite digit word over {0, ..., M} with per-digit counts.
struct Word {
  std::vector<int> digits;
  std::vector<long long> counts;

  explicit Word(int M) : counts(static_cast<size_t>(M) + 1, 0) {}
  void push(int k) {
    digits.push_back(k);
    counts[static_cast<size_t>(k)] += 1;
  }
  size_t size() const { return digits.size(); }
};

// Interval endpoint carried in both numeric (provenance DAG) and exact
// symbolic (rational function of beta) form.
struct Endpoint {
  CertifiedReal value;
  AlgFrac alg;
};

struct CInterval {
  Endpoint lo, hi;
};

// Lightweight exact point: algebraic fraction plus a fixed-precision
// outward-rounded box used as a fast pre-filter in comparisons.
struct XVal {
  AlgFrac alg;
  Iv box;
};

class BetaContext;

// Certified enclosure of an AlgFrac value at the given working precision.
Iv frac_box(const AlgebraicField& f, const AlgFrac& a, mpfr_prec_t prec);
XVal make_xval(const BetaContext& ctx, const Endpoint& e,
               mpfr_prec_t prec = 512);
XVal make_xval(const BetaContext& ctx, const AlgFrac& a,
               mpfr_prec_t prec = 512);

// The global parameter object (M, beta, n). beta is always an explicit
// algebraic number: a rational or the distinguished root of an integer
// polynomial. 1 < beta < 2 is required; beta < beta_n is validated and
// recorded (synthesis refuses to run when it fails).
class BetaContext {
 public:
  BetaContext(int M, int n, const Rational& beta);
  BetaContext(int M, int n, RootPtr beta_root);

  int M() const { return M_; }
  int n() const { return n_; }
  const CertifiedReal& beta() const { return beta_; }
  const std::shared_ptr<const AlgebraicField>& field() const { return field_; }
  bool beta_rational() const { return beta_.is_rational(); }
  Rational beta_rat() const { return beta_.rational_value(); }

  bool validated() const { return validated_; }
  const std::string& validation_message() const { return validation_msg_; }

  const Endpoint& right_endpoint() const { return right_; }  // M/(beta-1)
  Endpoint fixed_point(int k) const;                         // k/(beta-1)

 private:
  void init();
  int M_, n_;
  CertifiedReal beta_;
  std::shared_ptr<const AlgebraicField> field_;
  bool validated_ = false;
  std::string validation_msg_;
  Endpoint right_;
};

// T_k^l(y) via the telescoped identity T_k^l(y) = beta^l (y - k/(beta-1))
// + k/(beta-1), one power instead of l multiplications.
CertifiedReal apply_map(const BetaContext& ctx, int k, const CertifiedReal& y,
                        long l = 1);

// Value of the periodic expansion (w)^infinity.
CertifiedReal eval_periodic(const BetaContext& ctx, const std::vector<int>& w);

// Symbolic counterparts used to build interval geometry.
Endpoint make_periodic(const BetaContext& ctx, const std::vector<int>& w);
Endpoint make_t_image(const BetaContext& ctx, int k, const Endpoint& e);
// Exact three-way comparison of two endpoints at beta.
int endpoint_cmp(const BetaContext& ctx, const Endpoint& a, const Endpoint& b);

// The named interval hierarchy for a digit pair k1 < k2 (paper section 2).
struct PairGeometry {
  int k1 = 0, k2 = 0;
  CInterval I_pair;    // [k1/(beta-1), k2/(beta-1)]
  CInterval S_pair;    // switch region
  CInterval A_hi;      // [Pi((k1,k2^n)^inf), Pi((k2,k1,k2^{n-1})^inf)]
  CInterval A_lo;      // [Pi((k1,k2,k1^{n-1})^inf), Pi((k2,k1^n)^inf)]
  CInterval D_pair;    // pair state space
  CInterval D_global;  // global state space D_{beta,M,n}
};

// Populates all intervals and re-verifies the Lemma 2.4 inclusions (plus
// the D-chain) by exact algebraic comparison; throws InclusionViolated.
PairGeometry build_geometry(const BetaContext& ctx, int k1, int k2);

// Certified test for T_k(y) in [0, M/(beta-1)].
Tri admissible_step(const BetaContext& ctx, const CertifiedReal& y, int k);

// Incremental orbit of an exact rational starting point under a digit
// sequence. Fast path: outward-rounded shadow interval at fixed precision.
// When the shadow cannot decide a membership query, the exact orbit value
// is rebuilt symbolically (binary splitting over the digit word) and the
// query is answered exactly, so member() never returns Undecided.
class OrbitEngine {
 public:
  OrbitEngine(const BetaContext& ctx, const Rational& x0,
              mpfr_prec_t shadow_prec = 4096);

  const BetaContext& ctx() const { return *ctx_; }
  const Rational& x0() const { return x0_; }
  size_t length() const { return digits_.size(); }
  const std::vector<std::uint8_t>& digits() const { return digits_; }
  const std::vector<long long>& counts() const { return counts_; }

  void push(int k);
  // Would T_k keep the orbit inside [0, M/(beta-1)]? Exact, no commit.
  Tri step_admissible(int k);
  // Exact membership of the current point in the closed interval t.
  Tri member(const CInterval& t);
  // Exact three-way comparison of the current point against an endpoint.
  int cmp(const Endpoint& e);
  // Exact comparison of T_{extra[elen-1]} o ... o T_{extra[0]} applied to
  // the current point against e, without committing the extra digits.
  int cmp_after(const std::uint8_t* extra, size_t elen, const XVal& e);
  // Exact membership of the tentatively advanced point in [lo, hi].
  bool in_after(const std::uint8_t* extra, size_t elen, const XVal& lo,
                const XVal& hi);
  // Enclosure of the current point with width <= 2^{1-prec}.
  Iv enclosure(mpfr_prec_t prec);
  double approx() const { return cur_.approx(); }
  // Number of symbolic rebuilds performed (diagnostics).
  long rebuilds() const { return rebuilds_; }

 private:
  // Extra precision carried by the resync anchor beyond the shadow; it is
  // spent gradually by chained numeric resyncs before the next full
  // symbolic evaluation becomes necessary.
  static constexpr long kChainBudget = 200000;
  // Longest digit span bridged by a single chained resync.
  static constexpr size_t kChainMaxSegment = 200000;

  const ModPoly& symbolic();
  void resync_shadow(mpfr_prec_t slack);

  const BetaContext* ctx_;
  Rational x0_;
  std::vector<std::uint8_t> digits_;
  std::vector<long long> counts_;
  mpfr_prec_t shadow_prec_;
  Iv beta_s_, beta_fast_, cur_, tmp_;
  ModPoly sym_;
  size_t sym_at_ = 0;
  bool sym_valid_ = false;
  Iv anchor_;  // high-precision enclosure of the orbit point at anchor_at_
  size_t anchor_at_ = 0;
  bool anchor_valid_ = false;
  std::vector<Int> content_primes_;  // prime support of extension content
  long rebuilds_ = 0;
};

}  // namespace betafreq
