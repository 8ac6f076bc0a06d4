#include <doctest.h>

#include "betafreq/dynamics.hpp"
#include "betafreq/errors.hpp"

#include <random>

using namespace betafreq;

namespace {

RootPtr golden() {
  return RootDescriptor::isolate(Poly({-1, -1, 1}), Rational(1), Rational(2));
}

RootPtr beta_n_root(unsigned n) {
  return RootDescriptor::isolate(Poly::critical(n), Rational(1), Rational(2));
}

// s * beta_n as a root: if f_n(y) = 0 and x = s y then
// g(x) = q^{n+1} x^{n+1} - p q^n x^n - p^{n+1} vanishes, with s = p/q.
RootPtr scaled_beta_n(unsigned n, const Rational& s) {
  Int p = numerator(s), q = denominator(s);
  std::vector<Int> c(n + 2, Int(0));
  c[n + 1] = pow(q, n + 1);
  c[n] = -p * pow(q, n);
  c[0] = -pow(p, n + 1);
  return RootDescriptor::isolate(Poly(std::move(c)), Rational(1, 2),
                                 Rational(2));
}

}  // namespace

TEST_CASE("context validation") {
  BetaContext ok(1, 1, Rational(3, 2));  // 1.5 < beta_1 = 1.618
  CHECK(ok.validated());
  BetaContext bad(1, 2, Rational(3, 2));  // 1.5 > beta_2 = 1.4655
  CHECK_FALSE(bad.validated());
  CHECK(bad.validation_message().find("beta_2") != std::string::npos);
  CHECK_THROWS_AS(BetaContext(1, 1, Rational(1)), DomainError);
  CHECK_THROWS_AS(BetaContext(1, 1, Rational(5, 2)), DomainError);
  CHECK_THROWS_AS(BetaContext(0, 1, Rational(3, 2)), DomainError);
}

TEST_CASE("scaled beta_n root sits below beta_n") {
  for (unsigned n : {1u, 2u, 3u}) {
    BetaContext ctx(2, static_cast<int>(n), scaled_beta_n(n, Rational(99, 100)));
    CHECK(ctx.validated());
    // and at beta_n itself validation reports equality
    BetaContext at(2, static_cast<int>(n), beta_n_root(n));
    CHECK_FALSE(at.validated());
    CHECK(at.validation_message().find("= 0") != std::string::npos);
  }
}

TEST_CASE("apply_map identities") {
  BetaContext ctx(1, 1, Rational(3, 2));
  auto y = CertifiedReal::from_rational(Rational(2, 3));
  CHECK(apply_map(ctx, 0, y).rational_value() == Rational(1));
  // fixed point of T_1 is 1/(beta-1) = 2
  auto fp = CertifiedReal::from_si(2);
  CHECK(apply_map(ctx, 1, fp, 7).rational_value() == Rational(2));
  // beta=3/2, k=1, y=1, l=2 -> beta^2(1-2)+2 = -1/4
  CHECK(apply_map(ctx, 1, CertifiedReal::from_si(1), 2).rational_value() ==
        Rational(-1, 4));
}

TEST_CASE("telescoping: T_k^l equals l-fold T_k") {
  BetaContext ctx(2, 1, Rational(8, 5));
  std::mt19937 rng(42);
  std::uniform_int_distribution<int> kd(0, 2), ld(1, 30), yd(-10, 30);
  for (int t = 0; t < 30; ++t) {
    int k = kd(rng), l = ld(rng);
    auto y = CertifiedReal::from_rational(Rational(yd(rng), 7));
    auto once = apply_map(ctx, k, y, l);
    auto iter = y;
    for (int i = 0; i < l; ++i) iter = apply_map(ctx, k, iter, 1);
    CHECK(once.rational_value() == iter.rational_value());
  }
}

TEST_CASE("eval_periodic basics") {
  BetaContext ctx(1, 1, Rational(3, 2));
  CHECK(eval_periodic(ctx, {1}).rational_value() == Rational(2));
  CHECK(eval_periodic(ctx, {1, 1}).rational_value() == Rational(2));
  BetaContext gctx(1, 1, golden());
  auto one = eval_periodic(gctx, {1, 0});
  // (beta*1+0)/(beta^2-1) = beta/beta = 1 since beta^2 = beta+1
  auto& f = *gctx.field();
  Endpoint e = make_periodic(gctx, {1, 0});
  CHECK(f.compare_frac(f.from_rational(Rational(1)),
                       AlgFrac{e.alg.num, e.alg.den}) == 0);
  CHECK(compare_q(one, Rational(999, 1000)) == Ordering::Greater);
  CHECK(compare_q(one, Rational(1001, 1000)) == Ordering::Less);
}

TEST_CASE("switch region closed form") {
  // M=1, n=1, beta = 1.318: S = [1/beta, 1/(beta(beta-1))]
  BetaContext ctx(1, 1, Rational(1318, 1000));
  PairGeometry g = build_geometry(ctx, 0, 1);
  Rational lo = g.S_pair.lo.value.rational_value();
  Rational hi = g.S_pair.hi.value.rational_value();
  CHECK(lo == Rational(1000, 1318));
  CHECK(hi == Rational(1000 * 1000, 1318 * 318));
  CHECK(rational_to_decimal(lo, 4) == "0.7587");
  CHECK(rational_to_decimal(hi, 4) == "2.3859");
}

TEST_CASE("geometry inclusions hold below beta_n and fail at beta_n") {
  for (int M = 1; M <= 3; ++M)
    for (int n = 1; n <= 3; ++n) {
      BetaContext ctx(M, n, scaled_beta_n(static_cast<unsigned>(n),
                                          Rational(97, 100)));
      for (int k1 = 0; k1 < M; ++k1)
        for (int k2 = k1 + 1; k2 <= M; ++k2) CHECK_NOTHROW(build_geometry(ctx, k1, k2));
    }
  BetaContext boundary(1, 2, beta_n_root(2));
  CHECK_THROWS_AS(build_geometry(boundary, 0, 1), InclusionViolated);
}

TEST_CASE("admissible_step") {
  BetaContext ctx(1, 1, Rational(3, 2));
  CHECK(admissible_step(ctx, CertifiedReal::from_si(0), 0) == Tri::Yes);
  CHECK(admissible_step(ctx, CertifiedReal::from_si(0), 1) == Tri::No);
  CHECK(admissible_step(ctx, CertifiedReal::from_si(2), 1) == Tri::Yes);

  BetaContext gctx(1, 1, golden());
  auto phi = gctx.right_endpoint().value;  // 1/(phi-1) = phi
  CHECK(admissible_step(gctx, phi, 0) == Tri::No);
}

TEST_CASE("orbit engine exact vs naive rational iteration") {
  BetaContext ctx(2, 1, Rational(3, 2));
  OrbitEngine eng(ctx, Rational(7, 5));
  Rational x(7, 5);
  std::mt19937 rng(7);
  Rational R = ctx.right_endpoint().value.rational_value();
  for (int i = 0; i < 500; ++i) {
    // greedy-ish admissible digit choice
    int pick = -1;
    for (int k = ctx.M(); k >= 0; --k) {
      Rational t = Rational(3, 2) * x - k;
      if (t >= 0 && t <= R) {
        pick = k;
        break;
      }
    }
    REQUIRE(pick >= 0);
    eng.push(pick);
    x = Rational(3, 2) * x - pick;
  }
  Iv enc = eng.enclosure(200);
  CHECK(enc.lo_rational() <= x);
  CHECK(enc.hi_rational() >= x);
}

TEST_CASE("orbit engine detects exact zero at golden ratio") {
  BetaContext gctx(1, 1, golden());
  OrbitEngine eng(gctx, Rational(1));
  eng.push(1);  // T_1(1) = phi - 1
  eng.push(1);  // phi(phi-1) - 1 = 0 exactly
  Endpoint zero;
  zero.value = CertifiedReal::from_si(0);
  zero.alg.num = gctx.field()->from_rational(Rational(0));
  zero.alg.den = gctx.field()->from_rational(Rational(1));
  CHECK(eng.cmp(zero) == 0);
}

TEST_CASE("orbit engine long greedy run with algebraic base") {
  BetaContext ctx(1, 2, scaled_beta_n(2, Rational(99, 100)));
  OrbitEngine eng(ctx, Rational(1, 3), 512);  // small shadow forces rebuilds
  for (int i = 0; i < 20000; ++i) {
    int pick = -1;
    for (int k = ctx.M(); k >= 0; --k)
      if (eng.step_admissible(k) == Tri::Yes) {
        pick = k;
        break;
      }
    REQUIRE(pick >= 0);
    eng.push(pick);
  }
  CHECK(eng.length() == 20000);
  CHECK(eng.rebuilds() > 0);
  Iv enc = eng.enclosure(64);
  CHECK(enc.lo_rational() >= 0);
  Rational r_hi = ctx.right_endpoint().value.enclosure(128).hi_rational();
  CHECK(enc.hi_rational() <= r_hi);
  // digit counts agree with the stored word
  long long total = 0;
  for (long long c : eng.counts()) total += c;
  CHECK(total == 20000);
}
