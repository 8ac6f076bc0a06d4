#include "betafreq/bounds.hpp"

#include "betafreq/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <sstream>

namespace betafreq {

namespace {

// Binary entropy with natural logs, t in (0, 1).
CertifiedReal entropy(const Rational& t) {
  CertifiedReal ct = CertifiedReal::from_rational(t);
  CertifiedReal cu = CertifiedReal::from_rational(1 - t);
  return -(ct * CertifiedReal::log(ct)) - cu * CertifiedReal::log(cu);
}

// min certified to default precision; an undecided comparison means the
// two values agree to the full budget, so either one serves.
CertifiedReal cr_min(const CertifiedReal& a, const CertifiedReal& b) {
  return compare(a, b) == Ordering::Greater ? b : a;
}

}  // namespace

RootPtr beta_n_root(unsigned n) {
  if (n < 1) throw DomainError("beta_n requires n >= 1");
  return RootDescriptor::isolate(Poly::critical(n), Rational(1), Rational(2));
}

CertifiedReal beta_n(unsigned n) {
  return CertifiedReal::from_root(beta_n_root(n));
}

RootPtr scaled_beta_n(unsigned n, const Rational& s) {
  if (s <= 0) throw DomainError("scale must be positive");
  // y = s x with x^{n+1} - x^n - 1 = 0 satisfies
  // q^{n+1} y^{n+1} - p q^n y^n - p^{n+1} = 0 for s = p/q; this has exactly
  // one positive root (one coefficient sign change), so (s, 2s) isolates it.
  Int p = numerator(s), q = denominator(s);
  std::vector<Int> c(static_cast<size_t>(n) + 2, Int(0));
  Int pn1 = pow(p, n + 1);
  c[0] = -pn1;
  c[n] = -p * pow(q, n);
  c[n + 1] = pow(q, n + 1);
  return RootDescriptor::isolate(Poly(std::move(c)), s, 2 * s);
}

CertifiedReal generalized_golden(int M) {
  if (M < 1) throw DomainError("generalized_golden requires M >= 1");
  long k = M / 2;
  if (M % 2 == 0) return CertifiedReal::from_si(k + 1);
  CertifiedReal disc =
      CertifiedReal::sqrt(CertifiedReal::from_si(k * k + 6 * k + 5));
  return (CertifiedReal::from_si(k + 1) + disc) /
         CertifiedReal::from_si(2);
}

CertifiedReal lower_envelope(unsigned n) {
  if (n <= 1)
    throw DomainError("lower_envelope needs n >= 2 (ln ln n undefined)");
  CertifiedReal ln_n = CertifiedReal::log(CertifiedReal::from_si(n));
  CertifiedReal lnln_n = CertifiedReal::log(ln_n);
  return CertifiedReal::from_si(1) +
         (ln_n - lnln_n) / CertifiedReal::from_si(n);
}

bool check_lower(unsigned n) {
  CertifiedReal e = lower_envelope(n);
  // f_n(e) = e^n (e - 1) - 1
  CertifiedReal f =
      e.pow_i(static_cast<long>(n)) * (e - CertifiedReal::from_si(1)) -
      CertifiedReal::from_si(1);
  Ordering o = compare_q(f, Rational(0));
  if (o == Ordering::Undecided)
    throw PrecisionBudgetExceeded(
        "could not certify the sign of f_n at the lower envelope");
  return o == Ordering::Less;
}

CertifiedReal upper_envelope_uncapped(int M, unsigned n) {
  if (M < 1 || n < 1) throw DomainError("upper_envelope needs M, n >= 1");
  Rational t(1, static_cast<long>(n) + 1);
  CertifiedReal rate =
      CertifiedReal::from_rational(t) *
          CertifiedReal::log(CertifiedReal::from_si(M)) +
      entropy(t);
  return CertifiedReal::exp(rate);
}

CertifiedReal upper_envelope(int M, unsigned n) {
  return cr_min(upper_envelope_uncapped(M, n), generalized_golden(M));
}

CertifiedReal count_bound(int M, unsigned n, long N, const Rational& eps) {
  if (M < 1 || n < 1 || N < 0) throw DomainError("count_bound domain");
  Rational t = Rational(1, static_cast<long>(n) + 1) + eps;
  if (eps < 0 || t >= 1)
    throw DomainError("count_bound needs 0 <= eps < n/(n+1)");
  CertifiedReal rate =
      CertifiedReal::from_rational(t) *
          CertifiedReal::log(CertifiedReal::from_si(M)) +
      entropy(t);
  return CertifiedReal::exp(CertifiedReal::from_si(N) * rate);
}

BernoulliParams::BernoulliParams(FreqVector weights) : q(std::move(weights)) {
  if (q.p.empty()) throw DomainError("empty Bernoulli weight vector");
  for (const Rational& w : q.p)
    if (w <= 0)
      throw DomainError("Bernoulli weights must be strictly positive");
  star_ = *std::max_element(q.p.begin(), q.p.end());
  star2_ = star_;
  bool found = false;
  for (const Rational& w : q.p)
    if (w != star_ && (!found || w > star2_)) {
      star2_ = w;
      found = true;
    }
  if (!found) star2_ = star_;  // all weights tie
}

CertifiedReal local_dim_bound(const FreqVector& p, const BernoulliParams& q,
                              const CertifiedReal& beta) {
  if (p.p.size() != q.q.p.size())
    throw DomainError("frequency and weight vectors have different lengths");
  if (compare_q(beta, Rational(1)) != Ordering::Greater)
    throw DomainError("local_dim_bound needs beta > 1");
  CertifiedReal num = CertifiedReal::from_si(0);
  for (size_t k = 0; k < p.p.size(); ++k) {
    if (p.p[k] == 0) continue;
    num = num + CertifiedReal::from_rational(p.p[k]) *
                    CertifiedReal::log(
                        CertifiedReal::from_rational(q.q.p[k]));
  }
  return -num / CertifiedReal::log(beta);
}

CertifiedReal corollary_dim_bound(unsigned n, const BernoulliParams& q,
                                  const CertifiedReal& beta) {
  if (compare(beta, beta_n(n)) != Ordering::Less)
    throw HypothesisViolated("corollary requires beta < beta_n certified");
  if (compare_q(beta, Rational(1)) != Ordering::Greater)
    throw DomainError("corollary_dim_bound needs beta > 1");
  CertifiedReal num =
      CertifiedReal::from_si(n) *
          CertifiedReal::log(CertifiedReal::from_rational(q.q_star())) +
      CertifiedReal::log(CertifiedReal::from_rational(q.q_star2()));
  return -num / (CertifiedReal::from_si(static_cast<long>(n) + 1) *
                 CertifiedReal::log(beta));
}

std::vector<TableRow> critical_table(int M, const std::vector<unsigned>& ns) {
  if (ns.empty()) throw DomainError("empty n list");
  std::vector<TableRow> rows;
  for (unsigned n : ns) {
    TableRow r;
    r.n = n;
    r.beta_n = beta_n(n).decimal(3);
    r.upper = upper_envelope(M, n).decimal(3);
    // the published M=2 table sharpens these two entries by methods the
    // formula does not reproduce
    r.reproduced = !(M == 2 && (n == 10 || n == 25));
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string table_csv(const std::vector<TableRow>& rows) {
  std::ostringstream os;
  os << "n,beta_n,upper_bound,reproduced\n";
  for (const TableRow& r : rows)
    os << r.n << ',' << r.beta_n << ',' << r.upper << ','
       << (r.reproduced ? "yes" : "no") << '\n';
  return os.str();
}

std::string table_json(const std::vector<TableRow>& rows) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::array();
  for (const TableRow& r : rows)
    doc.push_back({{"n", r.n},
                   {"beta_n", r.beta_n},
                   {"upper_bound", r.upper},
                   {"reproduced", r.reproduced}});
  return doc.dump(2) + "\n";
}

}  // namespace betafreq
