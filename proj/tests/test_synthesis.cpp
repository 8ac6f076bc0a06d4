#include <doctest.h>

#include "betafreq/errors.hpp"
#include "betafreq/synthesis.hpp"

#include <cmath>
#include <random>

using namespace betafreq;

namespace {

FreqVector fv(std::vector<Rational> v) {
  FreqVector f;
  f.p = std::move(v);
  return f;
}

// random point of Delta_{M,1/(n+1)} with small rational entries
FreqVector random_truncated(std::mt19937& rng, int M, int n) {
  const Rational cap(n, n + 1);
  for (;;) {
    std::vector<Rational> v;
    Rational sum(0);
    std::uniform_int_distribution<int> num(0, 60);
    for (int k = 0; k < M; ++k) {
      Rational x(num(rng), 120);
      v.push_back(x);
      sum += x;
    }
    v.push_back(1 - sum);
    bool ok = true;
    for (const Rational& x : v) ok = ok && x >= 0 && x <= cap;
    if (ok) return fv(std::move(v));
  }
}

// Exact rational replay for rational beta: admissibility + reconstruction.
void replay_rational(const BetaContext& ctx, const Rational& beta,
                     const Rational& x0,
                     const std::vector<std::uint8_t>& digits) {
  Rational R = ctx.right_endpoint().value.rational_value();
  Rational y = x0;
  for (std::uint8_t d : digits) {
    y = beta * y - d;
    REQUIRE(y >= 0);
    REQUIRE(y <= R);
  }
  // |x - sum a_i beta^{-i}| = beta^{-N} |y| <= beta^{-N} R by the above
  Rational acc(0);
  for (auto it = digits.rbegin(); it != digits.rend(); ++it)
    acc = (acc + *it) / beta;
  Rational err = abs(x0 - acc);
  Rational bound = R;
  for (size_t i = 0; i < digits.size(); ++i) bound /= beta;
  REQUIRE(err <= bound);
}

}  // namespace

TEST_CASE("decompose: vertices give indicator weights") {
  for (int M = 1; M <= 3; ++M)
    for (int n = 1; n <= 3; ++n) {
      auto pairs = ordered_pairs(M);
      auto vertex_of = [&](size_t i) {
        std::vector<Rational> v(static_cast<size_t>(M) + 1, Rational(0));
        v[static_cast<size_t>(pairs[i].first)] = Rational(n, n + 1);
        v[static_cast<size_t>(pairs[i].second)] = Rational(1, n + 1);
        return v;
      };
      for (size_t i = 0; i < pairs.size(); ++i) {
        std::vector<Rational> v = vertex_of(i);
        // for n=1 the vertices of (a,b) and (b,a) coincide; the indicator
        // deterministically lands on the first lexicographic match
        size_t expect = 0;
        while (vertex_of(expect) != v) ++expect;
        PairWeights w = decompose(fv(v), n);
        for (size_t j = 0; j < w.r.size(); ++j)
          CHECK(w.r[j] == (expect == j ? 1 : 0));
      }
    }
}

TEST_CASE("decompose: uniform and random targets reconstruct exactly") {
  std::mt19937 rng(11);
  for (int M = 1; M <= 3; ++M)
    for (int n = 1; n <= 4; ++n) {
      FreqVector uni;
      uni.p.assign(static_cast<size_t>(M) + 1, Rational(1, M + 1));
      if (uni.in_truncated(n)) {
        PairWeights w = decompose(uni, n);
        CHECK(w.reconstructs(uni));
      }
      for (int t = 0; t < 25; ++t) {
        FreqVector p = random_truncated(rng, M, n);
        PairWeights w = decompose(p, n);
        CHECK(w.reconstructs(p));
      }
    }
}

TEST_CASE("decompose rejects vectors outside the truncated simplex") {
  CHECK_THROWS_AS(decompose(fv({Rational(0), Rational(1)}), 1), NotInSimplex);
  CHECK_THROWS_AS(decompose(fv({Rational(1, 2), Rational(1, 3)}), 1),
                  NotInSimplex);
  CHECK_THROWS_AS(
      decompose(fv({Rational(3, 4), Rational(1, 4)}), 2),  // 3/4 > 2/3
      NotInSimplex);
}

TEST_CASE("synthesis converges to a balanced binary target") {
  BetaContext ctx(1, 1, Rational(3, 2));
  ExpansionStream s =
      synthesize(ctx, Rational(1), fv({Rational(1, 2), Rational(1, 2)}),
                 20000);
  CHECK(s.emitted() == 20000);
  CHECK(s.target().sup_error(s.engine().counts()) <= 0.02);
  replay_rational(ctx, Rational(3, 2), Rational(1), s.engine().digits());
  // round-boundary errors settle down
  const auto& ends = s.round_ends();
  REQUIRE(ends.size() >= 6);
  double prev = 1.0;
  for (size_t i = ends.size() - 5; i < ends.size(); ++i) {
    const Checkpoint* cp = nullptr;
    for (const auto& c : s.checkpoints())
      if (c.N <= ends[i]) cp = &c;
    REQUIRE(cp != nullptr);
    double e = s.target().sup_error(cp->counts);
    CHECK(e <= prev + 0.01);
    prev = e;
  }
}

TEST_CASE("synthesis: simply normal three-digit target") {
  BetaContext ctx(2, 1, Rational(8, 5));  // 1.6 < beta_1
  FreqVector p;
  p.p.assign(3, Rational(1, 3));
  ExpansionStream s = synthesize(ctx, Rational(11, 5), p, 20000);
  CHECK(p.sup_error(s.engine().counts()) <= 0.05);
  replay_rational(ctx, Rational(8, 5), Rational(11, 5), s.engine().digits());
}

TEST_CASE("synthesis input validation") {
  BetaContext ctx(1, 1, Rational(3, 2));
  FreqVector half = fv({Rational(1, 2), Rational(1, 2)});
  CHECK_THROWS_AS(synthesize(ctx, Rational(0), half, 10), DomainError);
  CHECK_THROWS_AS(synthesize(ctx, Rational(2), half, 10), DomainError);
  CHECK_THROWS_AS(
      synthesize(ctx, Rational(1), fv({Rational(0), Rational(1)}), 10),
      NotInSimplex);
  BetaContext bad(1, 2, Rational(3, 2));  // 1.5 > beta_2
  CHECK_THROWS_AS(synthesize(bad, Rational(1), half, 10),
                  HypothesisViolated);
}

TEST_CASE("oscillating targets are constructed as designed") {
  // M=2, n=2, D={0,1}, p_2 = 1/2: residual mass 1/2 over two digits with
  // c = 1/8 gives q = (5/16, 3/16, 1/2) and the mirrored q'.
  BetaContext ctx(2, 2, Rational(7, 5));  // 1.4 < beta_2 = 1.4655
  ExpansionStream s(ctx, Rational(1), {0, 1}, {{2, Rational(1, 2)}});
  CHECK(s.q().p == std::vector<Rational>{Rational(5, 16), Rational(3, 16),
                                         Rational(1, 2)});
  CHECK(s.q_alt().p == std::vector<Rational>{Rational(3, 16), Rational(5, 16),
                                             Rational(1, 2)});
}

TEST_CASE("oscillating stream alternates between its two targets") {
  BetaContext ctx(1, 2, Rational(7, 5));
  ExpansionStream s = synthesize_nonconvergent(ctx, Rational(1), {0, 1}, {},
                                               30000);
  // q = (5/8, 3/8), mirrored (3/8, 5/8); separation 1/4
  CHECK(s.q().p == std::vector<Rational>{Rational(5, 8), Rational(3, 8)});
  CHECK(s.q_alt().p ==
        std::vector<Rational>{Rational(3, 8), Rational(5, 8)});
  REQUIRE(s.switch_points().size() >= 2);
  // from stage 2 on, switches certify closeness to the stage's target
  for (size_t i = 0; i < s.switch_points().size(); ++i) {
    if (s.switch_stages()[i] < 2) continue;
    long long N = s.switch_points()[i];
    const Checkpoint* cp = nullptr;
    for (const auto& c : s.checkpoints())
      if (c.N <= N) cp = &c;
    REQUIRE(cp != nullptr);
    REQUIRE(cp->N == N);  // switches happen at recorded boundaries
    bool toward_q = s.switch_stages()[i] % 2 == 1;
    double target0 = toward_q ? 5.0 / 8.0 : 3.0 / 8.0;
    double freq0 = static_cast<double>(cp->counts[0]) / static_cast<double>(N);
    CHECK(std::abs(freq0 - target0) <= 0.06);
  }
  replay_rational(ctx, Rational(7, 5), Rational(1), s.engine().digits());
}

TEST_CASE("oscillation preconditions") {
  BetaContext ctx(1, 1, Rational(3, 2));
  CHECK_THROWS_AS(ExpansionStream(ctx, Rational(1), {0}, {}), DomainError);
  // n=1, M=1: both oscillating digits would need frequency 1/2 +- c <= 1/2
  CHECK_THROWS_AS(ExpansionStream(ctx, Rational(1), {0, 1}, {}),
                  InfeasibleTargets);
  BetaContext c2(2, 2, Rational(7, 5));
  CHECK_THROWS_AS(
      ExpansionStream(c2, Rational(1), {0, 1}, {{2, Rational(1)}}),
      NotInSimplex);
  // fixed frequencies eating all the mass leave nothing to oscillate
  BetaContext c3(3, 2, Rational(7, 5));
  CHECK_THROWS_AS(
      ExpansionStream(c3, Rational(1), {0, 1},
                      {{2, Rational(1, 2)}, {3, Rational(1, 2)}}),
      InfeasibleTargets);
}
