#include "betafreq/synthesis.hpp"

#include "betafreq/errors.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace betafreq {

namespace {

// Largest integer <= a (a >= 0).
long long floor_ll(const Rational& a) {
  Int q = numerator(a) / denominator(a);
  return q.convert_to<long long>();
}

Rational exact_sup_error(const FreqVector& p,
                         const std::vector<long long>& counts, long long N) {
  Rational worst(0);
  for (size_t k = 0; k < p.p.size(); ++k) {
    Rational e = abs(Rational(counts[k], N) - p.p[k]);
    if (e > worst) worst = e;
  }
  return worst;
}

// Dense exact-rational phase-1 simplex with Bland's rule:
// minimize sum(s) subject to A r + s = b, r >= 0, s >= 0.
// Returns the r part of the optimal basic solution, or nullopt when the
// optimum is positive (infeasible system).
std::optional<std::vector<Rational>> phase1_simplex(
    const std::vector<std::vector<Rational>>& A,
    const std::vector<Rational>& b) {
  const size_t m = A.size(), nv = A[0].size();
  const size_t cols = nv + m;  // structural + artificial
  // tableau rows: m constraint rows + objective row; last column is rhs
  std::vector<std::vector<Rational>> T(m + 1,
                                       std::vector<Rational>(cols + 1, 0));
  std::vector<size_t> basis(m);
  for (size_t i = 0; i < m; ++i) {
    for (size_t j = 0; j < nv; ++j) T[i][j] = A[i][j];
    T[i][nv + i] = 1;
    T[i][cols] = b[i];
    basis[i] = nv + i;
  }
  // objective: minimize sum of artificials; reduced costs after pricing out
  for (size_t j = 0; j <= cols; ++j) {
    Rational s(0);
    for (size_t i = 0; i < m; ++i) s += T[i][j];
    T[m][j] = -s;
  }
  for (size_t j = nv; j < cols; ++j) T[m][j] = 0;
  for (;;) {
    // Bland: entering = smallest column with negative reduced cost
    size_t enter = cols;
    for (size_t j = 0; j < cols; ++j)
      if (T[m][j] < 0) {
        enter = j;
        break;
      }
    if (enter == cols) break;
    // ratio test, ties broken by smallest basis index (Bland)
    size_t leave = m;
    Rational best(0);
    for (size_t i = 0; i < m; ++i) {
      if (T[i][enter] <= 0) continue;
      Rational ratio = T[i][cols] / T[i][enter];
      if (leave == m || ratio < best ||
          (ratio == best && basis[i] < basis[leave])) {
        leave = i;
        best = ratio;
      }
    }
    if (leave == m) return std::nullopt;  // unbounded: cannot happen here
    // pivot
    Rational piv = T[leave][enter];
    for (size_t j = 0; j <= cols; ++j) T[leave][j] /= piv;
    for (size_t i = 0; i <= m; ++i) {
      if (i == leave || T[i][enter] == 0) continue;
      Rational f = T[i][enter];
      for (size_t j = 0; j <= cols; ++j) T[i][j] -= f * T[leave][j];
    }
    basis[leave] = enter;
  }
  if (T[m][cols] != 0) return std::nullopt;  // positive infeasibility
  std::vector<Rational> r(nv, Rational(0));
  for (size_t i = 0; i < m; ++i)
    if (basis[i] < nv) r[basis[i]] = T[i][cols];
  return r;
}

}  // namespace

bool FreqVector::in_simplex() const {
  Rational s(0);
  for (const Rational& v : p) {
    if (v < 0) return false;
    s += v;
  }
  return s == 1;
}

bool FreqVector::in_truncated(int n) const {
  if (!in_simplex()) return false;
  Rational cap(n, n + 1);
  for (const Rational& v : p)
    if (v > cap) return false;
  return true;
}

double FreqVector::sup_error(const std::vector<long long>& counts) const {
  long long N = 0;
  for (long long c : counts) N += c;
  if (N == 0) return 0.0;
  return exact_sup_error(*this, counts, N).convert_to<double>();
}

std::vector<std::pair<int, int>> ordered_pairs(int M) {
  std::vector<std::pair<int, int>> v;
  for (int k1 = 0; k1 <= M; ++k1)
    for (int k2 = 0; k2 <= M; ++k2)
      if (k1 != k2) v.emplace_back(k1, k2);
  return v;
}

bool PairWeights::reconstructs(const FreqVector& p) const {
  if (p.M() != M) return false;
  Rational total(0);
  for (const Rational& w : r) {
    if (w < 0) return false;
    total += w;
  }
  if (total != 1) return false;
  auto pairs = ordered_pairs(M);
  std::vector<Rational> acc(static_cast<size_t>(M) + 1, Rational(0));
  for (size_t i = 0; i < pairs.size(); ++i) {
    acc[static_cast<size_t>(pairs[i].first)] += Rational(n, n + 1) * r[i];
    acc[static_cast<size_t>(pairs[i].second)] += Rational(1, n + 1) * r[i];
  }
  for (size_t k = 0; k < acc.size(); ++k)
    if (acc[k] != p.p[k]) return false;
  return true;
}

PairWeights decompose(const FreqVector& p, int n) {
  const int M = p.M();
  if (M < 1) throw DomainError("decompose needs at least two digits");
  if (!p.in_truncated(n))
    throw NotInSimplex("target frequency vector outside Delta_{M,1/(n+1)}");
  auto pairs = ordered_pairs(M);
  PairWeights w;
  w.M = M;
  w.n = n;
  w.r.assign(pairs.size(), Rational(0));
  // vertex inputs return indicator weights
  for (size_t i = 0; i < pairs.size(); ++i) {
    bool vertex = true;
    for (int k = 0; k <= M && vertex; ++k) {
      Rational want = k == pairs[i].first    ? Rational(n, n + 1)
                      : k == pairs[i].second ? Rational(1, n + 1)
                                             : Rational(0);
      vertex = p.p[static_cast<size_t>(k)] == want;
    }
    if (vertex) {
      w.r[i] = 1;
      return w;
    }
  }
  std::vector<std::vector<Rational>> A(
      static_cast<size_t>(M) + 1, std::vector<Rational>(pairs.size(), 0));
  for (size_t i = 0; i < pairs.size(); ++i) {
    A[static_cast<size_t>(pairs[i].first)][i] = Rational(n, n + 1);
    A[static_cast<size_t>(pairs[i].second)][i] = Rational(1, n + 1);
  }
  auto sol = phase1_simplex(A, p.p);
  if (!sol)
    throw NotInSimplex(
        "no convex decomposition over the extremal pair vectors");
  w.r = std::move(*sol);
  if (!w.reconstructs(p))
    throw NotInSimplex("decomposition failed its exact reconstruction check");
  return w;
}

ExpansionStream::ExpansionStream(const BetaContext& ctx, const Rational& x,
                                 FreqVector target)
    : ctx_(&ctx), x_(x), eng_(ctx, x), target_(std::move(target)) {
  if (!ctx.validated()) throw HypothesisViolated(ctx.validation_message());
  if (static_cast<int>(target_.p.size()) != ctx.M() + 1)
    throw DomainError("frequency vector has the wrong number of digits");
  const AlgebraicField& f = *ctx.field();
  if (!(x_ > 0) ||
      f.compare_frac(f.from_rational(x_), ctx.right_endpoint().alg) >= 0)
    throw DomainError(
        "x must be interior to (0, M/(beta-1)); endpoints have unique "
        "expansions");
  weights_ = decompose(target_, ctx.n());
  pairs_ = ordered_pairs(ctx.M());
}

ExpansionStream::ExpansionStream(const BetaContext& ctx, const Rational& x,
                                 std::vector<int> D,
                                 std::map<int, Rational> p_partial)
    : ExpansionStream(ctx, x, [&] {
        // Build the first oscillation target q; its mirror is derived in
        // the constructor body below.
        std::set<int> ds(D.begin(), D.end());
        if (ds.size() != D.size())
          throw DomainError("oscillation digit set has repeated digits");
        if (ds.size() < 2)
          throw DomainError(
              "oscillation needs at least two digits with no frequency");
        for (int k : ds)
          if (k < 0 || k > ctx.M())
            throw DomainError("oscillation digit out of range");
        const int n = ctx.n();
        Rational fixed_sum(0);
        for (int k = 0; k <= ctx.M(); ++k) {
          if (ds.count(k)) continue;
          auto it = p_partial.find(k);
          if (it == p_partial.end())
            throw DomainError(
                "missing target frequency for a digit outside the "
                "oscillation set");
          if (it->second < 0 || it->second > Rational(n, n + 1))
            throw NotInSimplex(
                "fixed frequency outside [0, n/(n+1)]");
          fixed_sum += it->second;
        }
        const Rational m = 1 - fixed_sum;
        if (m <= 0) {
          std::ostringstream os;
          os << "no residual mass for the oscillating digits: fixed "
                "frequencies already sum to "
             << rational_to_string(fixed_sum);
          throw InfeasibleTargets(os.str());
        }
        const long d = static_cast<long>(ds.size());
        // zero-sum perturbation delta = (1, ..., 1, -(d-1)) over D
        Rational c(1, 2 * d * d);
        for (long mag : {1L, d - 1}) {
          Rational hi_room =
              (Rational(n, n + 1) - m / d) / (m * Rational(mag));
          Rational lo_room = Rational(1, d * mag);
          c = std::min(c, std::min(hi_room, lo_room));
        }
        if (c <= 0) {
          std::ostringstream os;
          os << "cannot fit two distinct targets: residual mass "
             << rational_to_string(m) << " over " << d
             << " digits leaves no room below n/(n+1)";
          throw InfeasibleTargets(os.str());
        }
        FreqVector q;
        q.p.assign(static_cast<size_t>(ctx.M()) + 1, Rational(0));
        long seen = 0;
        for (int k = 0; k <= ctx.M(); ++k) {
          if (!ds.count(k)) {
            q.p[static_cast<size_t>(k)] = p_partial.at(k);
            continue;
          }
          ++seen;
          Rational delta = seen == d ? Rational(-(d - 1)) : Rational(1);
          q.p[static_cast<size_t>(k)] = m * (Rational(1, d) + c * delta);
        }
        return q;
      }()) {
  std::set<int> ds(D.begin(), D.end());
  oscillating_ = true;
  // mirror target: q'_k = 2 m / d - q_k on D, identical off D
  Rational fixed_sum(0);
  for (int k = 0; k <= ctx.M(); ++k)
    if (!ds.count(k)) fixed_sum += target_.p[static_cast<size_t>(k)];
  const Rational m = 1 - fixed_sum;
  const long d = static_cast<long>(ds.size());
  q_alt_ = target_;
  sep_ = Rational(0);
  bool first_sep = true;
  for (int k : ds) {
    Rational& alt = q_alt_.p[static_cast<size_t>(k)];
    alt = 2 * m / d - alt;
    Rational gap = abs(target_.p[static_cast<size_t>(k)] - alt);
    if (first_sep || gap < sep_) sep_ = gap;
    first_sep = false;
  }
  if (!q_alt_.in_truncated(ctx.n()) || sep_ <= 0)
    throw InfeasibleTargets("mirrored oscillation target left the simplex");
  weights_alt_ = decompose(q_alt_, ctx.n());
}

const FreqVector& ExpansionStream::stage_target() const {
  return (!oscillating_ || stage_ % 2 == 1) ? target_ : q_alt_;
}

const PairWeights& ExpansionStream::stage_weights() const {
  return (!oscillating_ || stage_ % 2 == 1) ? weights_ : weights_alt_;
}

Rational ExpansionStream::switch_tolerance(int stage) const {
  if (stage <= 1) return Rational(3) * sep_ / 2;
  int e = std::min(std::max(0, stage - 3), 30);
  return sep_ / 5 / Rational(1L << e);
}

void ExpansionStream::check_budget() {
  if (emitted() >= budget_) throw BudgetReached{};
}

void ExpansionStream::record() {
  long long N = emitted();
  if (N == 0 || (!checkpoints_.empty() && checkpoints_.back().N == N)) return;
  checkpoints_.push_back(Checkpoint{N, eng_.counts()});
}

void ExpansionStream::connector_to_pair(size_t pair_idx, bool first) {
  auto it = geoms_.find(pair_idx);
  if (it == geoms_.end())
    it = geoms_
             .emplace(pair_idx,
                      build_geometry(
                          *ctx_,
                          std::min(pairs_[pair_idx].first,
                                   pairs_[pair_idx].second),
                          std::max(pairs_[pair_idx].first,
                                   pairs_[pair_idx].second)))
             .first;
  const PairGeometry& g = it->second;
  auto key = std::make_pair(pair_idx, first);
  auto pit = plans_.find(key);
  if (pit == plans_.end()) {
    NavRequest req;
    req.target_lo = make_xval(*ctx_, g.A_lo.lo);
    req.target_hi = make_xval(*ctx_, g.A_lo.hi);
    for (int k = 0; k <= ctx_->M(); ++k) req.allowed_digits.push_back(k);
    if (first) {
      const AlgebraicField& f = *ctx_->field();
      req.constraint_lo = make_xval(
          *ctx_, AlgFrac{f.from_rational(Rational(0)),
                         f.from_rational(Rational(1))});
      req.constraint_hi = make_xval(*ctx_, ctx_->right_endpoint());
    } else {
      req.constraint_lo = make_xval(*ctx_, g.D_global.lo);
      req.constraint_hi = make_xval(*ctx_, g.D_global.hi);
    }
    pit = plans_.emplace(key, NavPlan(*ctx_, std::move(req))).first;
  }
  EngineProbe probe(eng_);
  Word w = pit->second.navigate(probe);
  for (int k : w.digits) {
    eng_.push(k);
    check_budget();
  }
}

void ExpansionStream::run(long long digit_budget) {
  if (ran_) throw DomainError("expansion stream already run");
  ran_ = true;
  budget_ = digit_budget;
  if (budget_ <= 0) return;
  try {
    bool first = true;
    for (long long i = 1;; ++i) {
      const PairWeights& w = stage_weights();
      for (size_t pi = 0; pi < pairs_.size(); ++pi) {
        if (w.r[pi] == 0) continue;
        long long nip = floor_ll(Rational(i * i) * w.r[pi]);
        if (nip == 0) continue;
        connector_to_pair(pi, first);
        first = false;
        record();
        // the geometry is built for the unordered pair; the ordered pair's
        // heavy digit decides which of the two digits gets n/(n+1)
        auto [heavy, light] = pairs_[pi];
        int lo = std::min(heavy, light), hi = std::max(heavy, light);
        Rational p_lo = heavy < light
                            ? Rational(ctx_->n(), ctx_->n() + 1)
                            : Rational(1, ctx_->n() + 1);
        BalancerState bal(*ctx_, lo, hi, p_lo, eng_);
        for (long long t = 0; t < nip; ++t) {
          bal.next_digit();
          check_budget();
        }
        record();
      }
      round_ends_.push_back(emitted());
      if (oscillating_ && emitted() > 0) {
        Rational err =
            exact_sup_error(stage_target(), eng_.counts(), emitted());
        if (err <= switch_tolerance(stage_)) {
          switch_points_.push_back(emitted());
          switch_stages_.push_back(stage_);
          ++stage_;
        }
      }
    }
  } catch (BudgetReached&) {
  }
  record();
}

ExpansionStream synthesize(const BetaContext& ctx, const Rational& x,
                           FreqVector target, long long digit_budget) {
  ExpansionStream s(ctx, x, std::move(target));
  s.run(digit_budget);
  return s;
}

ExpansionStream synthesize_nonconvergent(const BetaContext& ctx,
                                         const Rational& x,
                                         std::vector<int> D,
                                         std::map<int, Rational> p_partial,
                                         long long digit_budget) {
  ExpansionStream s(ctx, x, std::move(D), std::move(p_partial));
  s.run(digit_budget);
  return s;
}

}  // namespace betafreq
