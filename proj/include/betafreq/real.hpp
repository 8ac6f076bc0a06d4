#pragma once

#include "betafreq/interval.hpp"
#include "betafreq/rational.hpp"
#include "betafreq/roots.hpp"

#include <memory>
#include <string>

namespace betafreq {

enum class Ordering { Less, Greater, Undecided };

namespace detail {
struct Expr;
}

// Default cap for lazy precision escalation, overridable by the
// BETAFREQ_MAX_PREC environment variable.
mpfr_prec_t default_max_prec();

// An exact real number carried as a provenance DAG (rational literals,
// polynomial roots, arithmetic, log/exp/sqrt), evaluated on demand to a
// certified enclosure at any precision. Immutable and cheap to copy.
class CertifiedReal {
 public:
  CertifiedReal();  // zero
  static CertifiedReal from_rational(const Rational& q);
  static CertifiedReal from_si(long v);
  static CertifiedReal from_root(RootPtr root);

  friend CertifiedReal operator+(const CertifiedReal&, const CertifiedReal&);
  friend CertifiedReal operator-(const CertifiedReal&, const CertifiedReal&);
  friend CertifiedReal operator*(const CertifiedReal&, const CertifiedReal&);
  friend CertifiedReal operator/(const CertifiedReal&, const CertifiedReal&);
  friend CertifiedReal operator-(const CertifiedReal&);
  CertifiedReal pow_i(long e) const;
  static CertifiedReal log(const CertifiedReal&);   // argument must be > 0
  static CertifiedReal exp(const CertifiedReal&);
  static CertifiedReal sqrt(const CertifiedReal&);  // argument must be >= 0

  // True when the DAG contains no root/log/exp/sqrt node; the value is then
  // available exactly.
  bool is_rational() const;
  Rational rational_value() const;

  Iv enclosure(mpfr_prec_t prec) const;
  // Escalates precision until the enclosure radius is <= target_radius;
  // throws PrecisionBudgetExceeded past max_prec.
  Iv refine_to_radius(const Rational& target_radius,
                      mpfr_prec_t max_prec = default_max_prec()) const;
  double approx() const;
  // Decimal rendering rounded to `digits` places; escalates until both
  // enclosure endpoints round identically (midpoint past the budget).
  std::string decimal(int digits, mpfr_prec_t max_prec = default_max_prec()) const;

 private:
  explicit CertifiedReal(std::shared_ptr<const detail::Expr> e);
  std::shared_ptr<const detail::Expr> e_;
};

// Three-way certified comparison with lazy escalation; exact when both
// operands are rational-only.
Ordering compare(const CertifiedReal& a, const CertifiedReal& b,
                 mpfr_prec_t max_prec = default_max_prec());
Ordering compare_q(const CertifiedReal& a, const Rational& b,
                   mpfr_prec_t max_prec = default_max_prec());

}  // namespace betafreq
