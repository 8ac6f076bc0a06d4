#pragma once

#include "betafreq/real.hpp"
#include "betafreq/roots.hpp"
#include "betafreq/synthesis.hpp"

#include <string>
#include <vector>

namespace betafreq {

// The critical base beta_n: unique root of x^{n+1} - x^n - 1 in (1, 2).
RootPtr beta_n_root(unsigned n);
CertifiedReal beta_n(unsigned n);

// s * beta_n as an explicit algebraic number (s = p/q rational, s*beta_n
// assumed to stay inside (s, 2s)); used to build contexts with beta
// slightly below the critical threshold.
RootPtr scaled_beta_n(unsigned n, const Rational& s);

// The generalized golden ratio G(M): k+1 when M = 2k, and
// (k + 1 + sqrt(k^2 + 6k + 5))/2 when M = 2k + 1.
CertifiedReal generalized_golden(int M);

// 1 + (ln n - ln ln n)/n; a certified lower bound for beta_n once n >= 3.
// Throws DomainError for n <= 1.
CertifiedReal lower_envelope(unsigned n);
// Certifies f_n(lower_envelope(n)) < 0, i.e. lower_envelope(n) < beta_n.
// True for every n >= 3; false at n = 2 (the estimate needs ln ln n > 0).
bool check_lower(unsigned n);

// exp(ln M/(n+1) + H(1/(n+1))) with H the natural-log binary entropy;
// the capped variant takes the minimum with G(M).
CertifiedReal upper_envelope_uncapped(int M, unsigned n);
CertifiedReal upper_envelope(int M, unsigned n);

// Hoeffding counting bound exp(N ((1/(n+1)+eps) ln M + H(1/(n+1)+eps)))
// on the number of admissible words of length N whose digit-k frequency
// exceeds n/(n+1) - eps. Requires 0 <= eps < n/(n+1).
CertifiedReal count_bound(int M, unsigned n, long N, const Rational& eps);

// Strictly positive Bernoulli weights with the two largest values
// distinguished: q_star = max_k q_k, q_star2 = largest value below it
// (equal to q_star when all entries tie).
struct BernoulliParams {
  FreqVector q;

  explicit BernoulliParams(FreqVector weights);
  Rational q_star() const { return star_; }
  Rational q_star2() const { return star2_; }

 private:
  Rational star_, star2_;
};

// Local dimension bound -sum_k p_k ln q_k / ln beta for the Bernoulli
// convolution with weights q at a point with digit frequencies p.
CertifiedReal local_dim_bound(const FreqVector& p, const BernoulliParams& q,
                              const CertifiedReal& beta);

// -(n ln q* + ln q**)/((n+1) ln beta); requires beta < beta_n certified,
// else HypothesisViolated.
CertifiedReal corollary_dim_bound(unsigned n, const BernoulliParams& q,
                                  const CertifiedReal& beta);

// One row of the critical-base table: beta_n and the capped upper bound
// for beta*_{M,n}, rendered to 3 decimals. Rows whose published value is
// known to be sharper than the formula reproduces are flagged.
struct TableRow {
  unsigned n = 1;
  std::string beta_n;
  std::string upper;
  bool reproduced = true;
};

std::vector<TableRow> critical_table(int M, const std::vector<unsigned>& ns);
std::string table_csv(const std::vector<TableRow>& rows);
std::string table_json(const std::vector<TableRow>& rows);

}  // namespace betafreq
