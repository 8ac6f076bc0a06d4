#pragma once

#include "betafreq/interval.hpp"
#include "betafreq/rational.hpp"
#include "betafreq/roots.hpp"

#include <cstdint>
#include <memory>
#include <mutex>
#include <vector>

namespace betafreq {

// Element of Q[x]/(g), stored as an integer coefficient vector over a
// common integer denominator: value = (sum c_i x^i) / den.
struct ModPoly {
  std::vector<Int> c;
  Int den = 1;
};

// A rational function of the root, kept as a numerator/denominator pair so
// no inversion in Q[x]/(g) is ever required (g may be reducible).
struct AlgFrac {
  ModPoly num, den;
};

// Exact arithmetic and sign determination at a fixed algebraic number: the
// distinguished root of g carried by a RootDescriptor. Orbit values are
// polynomials in the root with linearly growing coefficients; the binary
// splitting in value_after makes million-step exact rebuilds cheap.
class AlgebraicField {
 public:
  explicit AlgebraicField(RootPtr root);

  const RootPtr& root() const { return root_; }
  int degree() const { return g_.degree(); }

  ModPoly from_rational(const Rational& q) const;
  ModPoly x() const;  // the root symbol

  ModPoly add(const ModPoly& a, const ModPoly& b) const;
  ModPoly sub(const ModPoly& a, const ModPoly& b) const;
  ModPoly neg(const ModPoly& a) const;
  ModPoly mul(const ModPoly& a, const ModPoly& b) const;
  ModPoly scale(const ModPoly& a, const Rational& s) const;
  // x * a - k, one step of the map T_k.
  ModPoly t_map(const ModPoly& a, long k) const;
  // x^e mod g; powers of two are cached.
  ModPoly xpow(size_t e) const;

  bool is_zero(const ModPoly& a) const;  // exact value-at-root test
  // Exact sign of the value at the root (-1, 0, +1).
  int sign(const ModPoly& a) const;
  int compare(const ModPoly& a, const ModPoly& b) const;
  // Compare a against the fraction f (f.den must be nonzero at the root).
  int compare_frac(const ModPoly& a, const AlgFrac& f) const;
  // Compare two fractions (both denominators nonzero at the root).
  int compare_fracs(const AlgFrac& a, const AlgFrac& b) const;

  Iv eval(const ModPoly& a, mpfr_prec_t prec) const;

  // Exact orbit value after applying T_{d[0]}, ..., T_{d[len-1]} to x0:
  // x^len * x0 - sum d[i] x^{len-1-i}, reduced mod g. Binary splitting.
  ModPoly value_after(const Rational& x0, const std::uint8_t* d,
                      size_t len) const;

  // Canonical form: content removed, den > 0. Used before serialization
  // and hashing; arithmetic does not canonicalize eagerly.
  ModPoly canonical(const ModPoly& a) const;

  // Content removal restricted to the given primes, by valuation stripping.
  // Much cheaper than the full gcd in canonical() when the prime support of
  // the content is known in advance: the content always divides den, and in
  // an orbit extension den only ever accumulates factors of lc(g) and of
  // the starting denominator, so passing those primes removes all of it.
  ModPoly remove_content(const ModPoly& a, const std::vector<Int>& primes) const;

  // Prime factors of lc(g): the prime support of every denominator built
  // purely from integer digit words (no rational starting point).
  const std::vector<Int>& lc_primes() const { return lc_primes_; }

  // Polynomial whose value at the root is sum d[i] x^{len-1-i}.
  ModPoly word_poly(const std::uint8_t* d, size_t len) const;

 private:
  ModPoly reduce(std::vector<Int> c, Int den) const;
  bool factor_vanishes_at_root(const std::vector<Int>& h) const;

  Poly g_;
  RootPtr root_;
  bool exact_root_ = false;
  Rational exact_root_value_;

  std::vector<Int> lc_primes_;

  mutable std::mutex pow_mu_;
  mutable std::vector<ModPoly> pow2_;  // pow2_[t] = x^(2^t) mod g
};

// Appends the prime factorization support of |v| to out (trial division by
// primes up to 10^6; any remaining cofactor is appended whole, which is
// still a valid divisibility witness for valuation stripping).
void append_prime_factors(Int v, std::vector<Int>& out);

}  // namespace betafreq
