#include <doctest.h>

#include "betafreq/errors.hpp"
#include "betafreq/interval.hpp"
#include "betafreq/rational.hpp"
#include "betafreq/real.hpp"
#include "betafreq/roots.hpp"

#include <random>
#include <vector>

using namespace betafreq;

TEST_CASE("rational parsing") {
  CHECK(parse_rational("3/4") == Rational(3, 4));
  CHECK(parse_rational("-3/4") == Rational(-3, 4));
  CHECK(parse_rational("1.285") == Rational(1285, 1000));
  CHECK(parse_rational("-0.5") == Rational(-1, 2));
  CHECK(parse_rational("42") == Rational(42));
  CHECK(parse_rational("-0.125") == Rational(-1, 8));
  CHECK_THROWS_AS(parse_rational("1/0"), ParseError);
  CHECK_THROWS_AS(parse_rational("abc"), ParseError);
  CHECK_THROWS_AS(parse_rational(""), ParseError);
  CHECK_THROWS_AS(parse_rational("1.2.3"), ParseError);
}

TEST_CASE("rational decimal rendering") {
  CHECK(rational_to_decimal(Rational(1285, 1000), 3) == "1.285");
  CHECK(rational_to_decimal(Rational(2, 3), 4) == "0.6667");
  CHECK(rational_to_decimal(Rational(-1, 2), 1) == "-0.5");
  CHECK(rational_to_decimal(Rational(1, 2), 0) == "1");   // half away from zero
  CHECK(rational_to_decimal(Rational(5), 2) == "5.00");
  CHECK(rational_to_string(Rational(3, 4)) == "3/4");
  CHECK(rational_to_string(Rational(-6, 8)) == "-3/4");
  CHECK(rational_to_string(Rational(7)) == "7");
}

TEST_CASE("interval arithmetic encloses rational arithmetic") {
  std::mt19937 rng(12345);
  std::uniform_int_distribution<int> num(-50, 50), den(1, 40);
  for (int trial = 0; trial < 200; ++trial) {
    Rational a(num(rng), den(rng)), b(num(rng), den(rng));
    Iv ia = Iv::from_rational(a, 64), ib = Iv::from_rational(b, 64);
    Iv r(64);
    iv_add(r, ia, ib);
    CHECK(r.lo_rational() <= a + b);
    CHECK(r.hi_rational() >= a + b);
    iv_sub(r, ia, ib);
    CHECK(r.lo_rational() <= a - b);
    CHECK(r.hi_rational() >= a - b);
    iv_mul(r, ia, ib);
    CHECK(r.lo_rational() <= a * b);
    CHECK(r.hi_rational() >= a * b);
    if (b != 0 && sign_of(b) != 0) {
      iv_div(r, ia, ib);
      CHECK(r.lo_rational() <= a / b);
      CHECK(r.hi_rational() >= a / b);
    }
  }
}

TEST_CASE("interval division by zero enclosure throws") {
  Iv a = Iv::from_si(1, 64);
  Iv b(64);
  mpfr_set_si(b.lo(), -1, MPFR_RNDD);
  mpfr_set_si(b.hi(), 1, MPFR_RNDU);
  Iv r(64);
  CHECK_THROWS_AS(iv_div(r, a, b), DomainError);
}

TEST_CASE("interval exp/log round trip and comparisons") {
  Iv x = Iv::from_rational(Rational(7, 5), 128);
  Iv l(128), e(128);
  iv_log(l, x);
  iv_exp(e, l);
  CHECK(e.lo_rational() <= Rational(7, 5));
  CHECK(e.hi_rational() >= Rational(7, 5));
  CHECK(iv_cmp_q(x, Rational(1)) > 0);
  CHECK(iv_cmp_q(x, Rational(2)) < 0);
  CHECK(iv_cmp_q(x, Rational(7, 5)) == 0);
}

TEST_CASE("root isolation: golden ratio") {
  auto r = RootDescriptor::isolate(Poly({-1, -1, 1}), Rational(1), Rational(2));
  CHECK_FALSE(r->exact());
  Iv enc = r->enclosure(128);
  // (1+sqrt(5))/2 as an independent check through the sqrt DAG.
  auto phi = (CertifiedReal::from_si(1) +
              CertifiedReal::sqrt(CertifiedReal::from_si(5))) /
             CertifiedReal::from_si(2);
  Iv phi_enc = phi.enclosure(192);
  CHECK(enc.lo_rational() <= phi_enc.hi_rational());
  CHECK(enc.hi_rational() >= phi_enc.lo_rational());
  CHECK(enc.radius_upper() <= Rational(1, Int(1) << 120));
}

TEST_CASE("root isolation: 1.80194 cubic") {
  auto r =
      RootDescriptor::isolate(Poly({1, -2, -1, 1}), Rational(1), Rational(2));
  auto v = CertifiedReal::from_root(r);
  CHECK(v.decimal(5) == "1.80194");
}

TEST_CASE("root isolation: exact linear root") {
  auto r = RootDescriptor::isolate(Poly({-2, 1}), Rational(1), Rational(3));
  CHECK(r->exact());
  CHECK(r->exact_value() == 2);
  auto v = CertifiedReal::from_root(r);
  CHECK(v.is_rational());
  CHECK(v.rational_value() == 2);
}

TEST_CASE("root isolation failure modes report evidence") {
  // x^2 + 1 has no real roots.
  CHECK_THROWS_AS(
      RootDescriptor::isolate(Poly({1, 0, 1}), Rational(0), Rational(2)),
      NoSignChange);
  // (x-1)(x-2) = x^2 - 3x + 2 has two roots in (0, 3).
  try {
    RootDescriptor::isolate(Poly({2, -3, 1}), Rational(0), Rational(3));
    CHECK(false);
  } catch (const MultipleSignChanges& e) {
    CHECK(std::string(e.what()).find("[") != std::string::npos);
  }
}

TEST_CASE("refine to tiny radius matches closed form") {
  auto r = RootDescriptor::isolate(Poly({-1, -1, 1}), Rational(1), Rational(2));
  auto root = CertifiedReal::from_root(r);
  Rational target(1, Int("1000000000000000000000000000000"));  // 1e-30
  Iv enc = root.refine_to_radius(target);
  CHECK(enc.radius_upper() <= target);
  auto phi = (CertifiedReal::from_si(1) +
              CertifiedReal::sqrt(CertifiedReal::from_si(5))) /
             CertifiedReal::from_si(2);
  CHECK(root.decimal(30) == phi.decimal(30));
}

TEST_CASE("beta_2 prints as 1.466") {
  auto r = RootDescriptor::isolate(Poly::critical(2), Rational(1), Rational(2));
  auto b2 = CertifiedReal::from_root(r);
  Iv enc = b2.refine_to_radius(Rational(1, 1000));
  CHECK(enc.radius_upper() <= Rational(1, 1000));
  CHECK(b2.decimal(3) == "1.466");
  CHECK(b2.decimal(4) == "1.4656");
}

TEST_CASE("exact rational CertifiedReal has zero radius") {
  auto v = CertifiedReal::from_rational(Rational(3, 2));
  CHECK(v.is_rational());
  Iv enc = v.refine_to_radius(Rational(0));
  CHECK(enc.radius_upper() == 0);
}

TEST_CASE("three-way compare") {
  auto one = CertifiedReal::from_si(1);
  auto two = CertifiedReal::from_si(2);
  CHECK(compare(one, two) == Ordering::Less);
  CHECK(compare(two, one) == Ordering::Greater);
  CHECK(compare(one, one) == Ordering::Undecided);  // equal never separates

  auto r = RootDescriptor::isolate(Poly({-1, -1, 1}), Rational(1), Rational(2));
  auto phi = CertifiedReal::from_root(r);
  CHECK(compare_q(phi, Rational(1618, 1000)) == Ordering::Greater);
  CHECK(compare_q(phi, Rational(1619, 1000)) == Ordering::Less);
}

TEST_CASE("monotone refinement on random DAGs") {
  std::mt19937 rng(777);
  std::uniform_int_distribution<int> pick(0, 4), num(1, 9);
  auto r5 = CertifiedReal::sqrt(CertifiedReal::from_si(5));
  for (int trial = 0; trial < 50; ++trial) {
    CertifiedReal v = r5;  // seed with an irrational so DAGs stay non-trivial
    for (int step = 0; step < 8; ++step) {
      auto w = CertifiedReal::from_rational(Rational(num(rng), num(rng)));
      switch (pick(rng)) {
        case 0: v = v + w; break;
        case 1: v = v - w; break;
        case 2: v = v * w; break;
        case 3: v = v / w; break;
        case 4: v = CertifiedReal::exp(v - v - w); break;
      }
    }
    Iv lo_prec = v.enclosure(128);
    Iv hi_prec = v.enclosure(512);
    CHECK(lo_prec.lo_rational() <= hi_prec.lo_rational());
    CHECK(hi_prec.hi_rational() <= lo_prec.hi_rational());
  }
}

TEST_CASE("root residual bound for critical polynomials") {
  std::vector<unsigned> ns = {1,  2,  3,   4,   5,   10,  25, 50,
                              75, 100, 250, 500, 750, 1000};
  for (unsigned n : ns) {
    Poly f = Poly::critical(n);
    auto r = RootDescriptor::isolate(f, Rational(1), Rational(2));
    Iv enc = r->enclosure(80);
    Rational mid = (enc.lo_rational() + enc.hi_rational()) / 2;
    Rational radius = enc.radius_upper();
    // |f'| on [1,2] is at most sum_i |c_i| i 2^{i-1}.
    Rational dbound(0);
    Rational p2(1);
    for (int i = 1; i <= f.degree(); ++i) {
      dbound += Rational(abs(f.c[i]) * Int(i)) * p2;
      p2 *= 2;
    }
    Rational residual = abs(f.eval(mid));
    CHECK(residual <= dbound * radius);
  }
}

TEST_CASE("pow_i on rationals and enclosures") {
  auto half = CertifiedReal::from_rational(Rational(1, 2));
  CHECK(half.pow_i(10).rational_value() == Rational(1, 1024));
  CHECK(half.pow_i(-2).rational_value() == Rational(4));
  auto r2 = CertifiedReal::sqrt(CertifiedReal::from_si(2));
  auto sq = r2.pow_i(2);
  CHECK(compare_q(sq, Rational(19, 10)) == Ordering::Greater);
  CHECK(compare_q(sq, Rational(21, 10)) == Ordering::Less);
}
