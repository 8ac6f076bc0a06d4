#include "betafreq/real.hpp"

#include "betafreq/errors.hpp"

#include <cstdlib>
#include <mutex>

namespace betafreq {

mpfr_prec_t default_max_prec() {
  static mpfr_prec_t cached = [] {
    if (const char* env = std::getenv("BETAFREQ_MAX_PREC")) {
      long v = std::atol(env);
      if (v >= 64) return static_cast<mpfr_prec_t>(v);
    }
    return static_cast<mpfr_prec_t>(1 << 16);
  }();
  return cached;
}

namespace detail {

struct Expr {
  enum class Kind { Rat, Root, Add, Sub, Mul, Div, Neg, PowI, Log, Exp, Sqrt };

  Kind kind;
  Rational rat;  // Kind::Rat
  RootPtr root;  // Kind::Root
  std::shared_ptr<const Expr> a, b;
  long ipow = 0;

  // Enclosure cache; reused when the cached precision suffices.
  mutable std::mutex mu;
  mutable mpfr_prec_t cached_prec = 0;
  mutable Iv cached;

  Iv eval(mpfr_prec_t prec) const;
};

namespace {

using ExprP = std::shared_ptr<const Expr>;

ExprP make_rat(const Rational& q) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Rat;
  e->rat = q;
  return e;
}

Iv pow_iv(const Iv& base, unsigned long e, mpfr_prec_t prec) {
  Iv acc = Iv::from_si(1, prec);
  Iv sq(base);
  while (e > 0) {
    if (e & 1) iv_mul(acc, acc, sq);
    e >>= 1;
    if (e) iv_mul(sq, sq, sq);
  }
  return acc;
}

}  // namespace

Iv Expr::eval(mpfr_prec_t prec) const {
  {
    std::lock_guard<std::mutex> lock(mu);
    if (cached_prec >= prec) {
      // Round outward to the requested precision: handing back the wider
      // cached interval would silently drag its precision into all of the
      // caller's subsequent arithmetic.
      Iv r(prec);
      r.set(cached);
      return r;
    }
  }
  Iv r(prec);
  switch (kind) {
    case Kind::Rat:
      r.set_rational(rat);
      break;
    case Kind::Root:
      r = root->enclosure(prec);
      break;
    case Kind::Add:
      iv_add(r, a->eval(prec), b->eval(prec));
      break;
    case Kind::Sub:
      iv_sub(r, a->eval(prec), b->eval(prec));
      break;
    case Kind::Mul:
      iv_mul(r, a->eval(prec), b->eval(prec));
      break;
    case Kind::Div:
      iv_div(r, a->eval(prec), b->eval(prec));
      break;
    case Kind::Neg:
      iv_neg(r, a->eval(prec));
      break;
    case Kind::PowI: {
      Iv base = a->eval(prec);
      if (ipow >= 0) {
        r = pow_iv(base, static_cast<unsigned long>(ipow), prec);
      } else {
        Iv num = Iv::from_si(1, prec);
        Iv p = pow_iv(base, static_cast<unsigned long>(-ipow), prec);
        iv_div(r, num, p);
      }
      break;
    }
    case Kind::Log:
      iv_log(r, a->eval(prec));
      break;
    case Kind::Exp:
      iv_exp(r, a->eval(prec));
      break;
    case Kind::Sqrt:
      iv_sqrt(r, a->eval(prec));
      break;
  }
  std::lock_guard<std::mutex> lock(mu);
  if (prec > cached_prec) {
    cached = r;
    cached_prec = prec;
  }
  return r;
}

}  // namespace detail

using detail::Expr;
using ExprP = std::shared_ptr<const Expr>;

namespace {

std::shared_ptr<Expr> unary(Expr::Kind k, ExprP a) {
  auto e = std::make_shared<Expr>();
  e->kind = k;
  e->a = std::move(a);
  return e;
}

std::shared_ptr<Expr> binary(Expr::Kind k, ExprP a, ExprP b) {
  auto e = std::make_shared<Expr>();
  e->kind = k;
  e->a = std::move(a);
  e->b = std::move(b);
  return e;
}

}  // namespace

CertifiedReal::CertifiedReal() : e_(detail::make_rat(Rational(0))) {}
CertifiedReal::CertifiedReal(ExprP e) : e_(std::move(e)) {}

CertifiedReal CertifiedReal::from_rational(const Rational& q) {
  return CertifiedReal(detail::make_rat(q));
}

CertifiedReal CertifiedReal::from_si(long v) {
  return CertifiedReal(detail::make_rat(Rational(v)));
}

CertifiedReal CertifiedReal::from_root(RootPtr root) {
  if (!root) throw DomainError("null root descriptor");
  if (root->exact()) return from_rational(root->exact_value());
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Root;
  e->root = std::move(root);
  return CertifiedReal(e);
}

bool CertifiedReal::is_rational() const {
  return e_->kind == Expr::Kind::Rat;
}

Rational CertifiedReal::rational_value() const {
  if (!is_rational()) throw DomainError("value is not rational-only");
  return e_->rat;
}

// Arithmetic folds eagerly when both operands are rational literals, so
// rational provenance stays exact through entire pipelines.
CertifiedReal operator+(const CertifiedReal& x, const CertifiedReal& y) {
  if (x.is_rational() && y.is_rational())
    return CertifiedReal::from_rational(x.e_->rat + y.e_->rat);
  return CertifiedReal(binary(Expr::Kind::Add, x.e_, y.e_));
}

CertifiedReal operator-(const CertifiedReal& x, const CertifiedReal& y) {
  if (x.is_rational() && y.is_rational())
    return CertifiedReal::from_rational(x.e_->rat - y.e_->rat);
  return CertifiedReal(binary(Expr::Kind::Sub, x.e_, y.e_));
}

CertifiedReal operator*(const CertifiedReal& x, const CertifiedReal& y) {
  if (x.is_rational() && y.is_rational())
    return CertifiedReal::from_rational(x.e_->rat * y.e_->rat);
  return CertifiedReal(binary(Expr::Kind::Mul, x.e_, y.e_));
}

CertifiedReal operator/(const CertifiedReal& x, const CertifiedReal& y) {
  if (y.is_rational() && y.e_->rat == 0)
    throw DomainError("division by exact zero");
  if (x.is_rational() && y.is_rational())
    return CertifiedReal::from_rational(x.e_->rat / y.e_->rat);
  return CertifiedReal(binary(Expr::Kind::Div, x.e_, y.e_));
}

CertifiedReal operator-(const CertifiedReal& x) {
  if (x.is_rational()) return CertifiedReal::from_rational(-x.e_->rat);
  return CertifiedReal(unary(Expr::Kind::Neg, x.e_));
}

CertifiedReal CertifiedReal::pow_i(long e) const {
  if (is_rational()) {
    Rational base = e_->rat;
    if (e < 0 && base == 0) throw DomainError("0 to a negative power");
    Rational acc(1);
    Rational sq = base;
    unsigned long m = static_cast<unsigned long>(e < 0 ? -e : e);
    while (m > 0) {
      if (m & 1) acc *= sq;
      m >>= 1;
      if (m) sq *= sq;
    }
    if (e < 0) acc = Rational(1) / acc;
    return from_rational(acc);
  }
  auto n = unary(Expr::Kind::PowI, e_);
  n->ipow = e;
  return CertifiedReal(n);
}

CertifiedReal CertifiedReal::log(const CertifiedReal& x) {
  return CertifiedReal(unary(Expr::Kind::Log, x.e_));
}

CertifiedReal CertifiedReal::exp(const CertifiedReal& x) {
  return CertifiedReal(unary(Expr::Kind::Exp, x.e_));
}

CertifiedReal CertifiedReal::sqrt(const CertifiedReal& x) {
  return CertifiedReal(unary(Expr::Kind::Sqrt, x.e_));
}

Iv CertifiedReal::enclosure(mpfr_prec_t prec) const { return e_->eval(prec); }

Iv CertifiedReal::refine_to_radius(const Rational& target_radius,
                                   mpfr_prec_t max_prec) const {
  if (target_radius < 0) throw DomainError("negative target radius");
  for (mpfr_prec_t prec = 128;; prec *= 2) {
    if (prec > max_prec)
      throw PrecisionBudgetExceeded(
          "cannot reach target radius " + rational_to_string(target_radius) +
          " within " + std::to_string(max_prec) + " bits");
    Iv r = enclosure(prec);
    if (r.valid() && r.radius_upper() <= target_radius) return r;
  }
}

double CertifiedReal::approx() const { return enclosure(128).approx(); }

std::string CertifiedReal::decimal(int digits, mpfr_prec_t max_prec) const {
  Iv last(128);
  for (mpfr_prec_t prec = 128; prec <= max_prec; prec *= 2) {
    last = enclosure(prec);
    std::string lo = rational_to_decimal(last.lo_rational(), digits);
    std::string hi = rational_to_decimal(last.hi_rational(), digits);
    if (lo == hi) return lo;
  }
  return rational_to_decimal((last.lo_rational() + last.hi_rational()) / 2,
                             digits);
}

Ordering compare(const CertifiedReal& a, const CertifiedReal& b,
                 mpfr_prec_t max_prec) {
  if (a.is_rational() && b.is_rational()) {
    Rational x = a.rational_value(), y = b.rational_value();
    if (x < y) return Ordering::Less;
    if (x > y) return Ordering::Greater;
    return Ordering::Undecided;  // equal enclosures can never separate
  }
  for (mpfr_prec_t prec = 128; prec <= max_prec; prec *= 2) {
    int c = iv_cmp(a.enclosure(prec), b.enclosure(prec));
    if (c < 0) return Ordering::Less;
    if (c > 0) return Ordering::Greater;
  }
  return Ordering::Undecided;
}

Ordering compare_q(const CertifiedReal& a, const Rational& b,
                   mpfr_prec_t max_prec) {
  return compare(a, CertifiedReal::from_rational(b), max_prec);
}

}  // namespace betafreq
