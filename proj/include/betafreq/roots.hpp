#pragma once

#include "betafreq/interval.hpp"
#include "betafreq/rational.hpp"

#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace betafreq {

// Univariate polynomial with integer coefficients, c[i] * x^i.
struct Poly {
  std::vector<Int> c;

  Poly() = default;
  explicit Poly(std::vector<Int> coeffs);

  int degree() const { return static_cast<int>(c.size()) - 1; }
  Poly derivative() const;
  // Exact sign of the value at a rational point.
  int sign_at(const Rational& x) const;
  Rational eval(const Rational& x) const;
  std::string str() const;

  // x^{n+1} - x^n - 1, whose root in (1,2) is the critical base beta_n.
  static Poly critical(unsigned n);
};

// A single real root of an integer polynomial, isolated in a rational
// interval with a strict sign change, refinable to any precision.
// Thread-safe; refinement state is cached across calls.
class RootDescriptor {
 public:
  // Validates the sign-change structure of [lo, hi] on a subdivision grid.
  // Throws NoSignChange / MultipleSignChanges (with subinterval evidence).
  static std::shared_ptr<const RootDescriptor> isolate(const Poly& p,
                                                       const Rational& lo,
                                                       const Rational& hi);

  // Wraps an exact rational value as the root of (qx - p).
  static std::shared_ptr<const RootDescriptor> exact_rational(
      const Rational& v);

  bool exact() const { return exact_; }
  Rational exact_value() const;  // only when exact()

  const Poly& poly() const { return p_; }
  Rational isolating_lo() const { return ilo_; }
  Rational isolating_hi() const { return ihi_; }

  // Enclosure of width at most 2^{-prec}, represented at `prec` bits.
  Iv enclosure(mpfr_prec_t prec) const;

  // Current certified bracket (both endpoints rational), refined to at
  // least `bits` correct bits first.
  std::pair<Rational, Rational> bracket(long bits) const;

 private:
  RootDescriptor() = default;

  void refine_to_bits(long bits) const;

  Poly p_, dp_;
  Rational ilo_, ihi_;
  // Refinement may discover an exact rational root, hence mutable.
  mutable bool exact_ = false;
  mutable Rational exact_value_;
  int sign_lo_ = 0;  // sign of p_ at the lower bracket endpoint

  mutable std::mutex mu_;
  mutable Rational clo_, chi_;  // current certified bracket
  mutable long cur_bits_ = 0;   // width <= 2^{-cur_bits_}
};

using RootPtr = std::shared_ptr<const RootDescriptor>;

}  // namespace betafreq
