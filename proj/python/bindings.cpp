// Python bindings. All exact inputs travel as strings ("3/2", "0.99"), all
// bulk outputs as canonical JSON, so no precision is lost at the boundary.
#include "betafreq/artifact.hpp"
#include "betafreq/bounds.hpp"
#include "betafreq/context_spec.hpp"
#include "betafreq/errors.hpp"
#include "betafreq/oracle.hpp"
#include "betafreq/synthesis.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <string>
#include <vector>

namespace py = pybind11;
using namespace betafreq;

namespace {

FreqVector to_freq(const std::vector<std::string>& entries) {
  FreqVector f;
  for (const std::string& e : entries) f.p.push_back(parse_rational(e));
  return f;
}

std::string py_beta_n(unsigned n, int digits) {
  return beta_n(n).decimal(digits);
}

std::string py_golden(int M, int digits) {
  return generalized_golden(M).decimal(digits);
}

std::string py_table(int M, const std::vector<unsigned>& ns,
                     const std::string& format) {
  std::vector<TableRow> rows = critical_table(M, ns);
  if (format == "csv") return table_csv(rows);
  if (format == "json") return table_json(rows);
  throw ParseError("format must be 'csv' or 'json'");
}

std::string py_synthesize(int M, int n, const std::string& beta,
                          const std::string& x,
                          const std::vector<std::string>& target,
                          long long digits) {
  BetaContext ctx = context_from_spec(M, n, beta);
  ExpansionStream s =
      synthesize(ctx, parse_rational(x), to_freq(target), digits);
  return artifact_to_json(make_artifact(s));
}

std::string py_oscillate(int M, int n, const std::string& beta,
                         const std::string& x, const std::vector<int>& D,
                         const std::map<int, std::string>& fixed,
                         long long digits) {
  BetaContext ctx = context_from_spec(M, n, beta);
  std::map<int, Rational> partial;
  for (const auto& [k, v] : fixed) partial[k] = parse_rational(v);
  ExpansionStream s = synthesize_nonconvergent(ctx, parse_rational(x), D,
                                               partial, digits);
  return artifact_to_json(make_artifact(s));
}

std::string py_validate(const std::string& artifact_json) {
  return validate_expansion(artifact_from_json(artifact_json)).to_json();
}

std::vector<long long> py_profile(int M, int n, const std::string& beta,
                                  const std::string& x, int depth) {
  BetaContext ctx = context_from_spec(M, n, beta);
  return branching_profile(enumerate_prefixes(ctx, parse_rational(x), depth));
}

double py_local_dim(const std::vector<std::string>& p,
                    const std::vector<std::string>& q,
                    const std::string& beta) {
  return local_dim_bound(to_freq(p), BernoulliParams(to_freq(q)),
                         CertifiedReal::from_rational(parse_rational(beta)))
      .approx();
}

double py_corollary_dim(unsigned n, const std::vector<std::string>& q,
                        const std::string& beta) {
  return corollary_dim_bound(n, BernoulliParams(to_freq(q)),
                             CertifiedReal::from_rational(parse_rational(beta)))
      .approx();
}

}  // namespace

PYBIND11_MODULE(betafreq, m) {
  m.doc() =
      "Digit-frequency toolkit for beta-expansions: synthesis of expansions "
      "with prescribed digit frequencies, discrepancy-balanced streams, "
      "prefix-tree oracles, and local dimension bounds.";

  py::register_exception<Error>(m, "BetaError", PyExc_ValueError);

  m.def("beta_n", &py_beta_n, py::arg("n"), py::arg("digits") = 12,
        "Decimal expansion of the critical base for run parameter n.");
  m.def("generalized_golden", &py_golden, py::arg("M"), py::arg("digits") = 12,
        "Decimal expansion of the generalized golden ratio for alphabet "
        "{0..M}.");
  m.def("critical_table", &py_table, py::arg("M"), py::arg("ns"),
        py::arg("format") = "csv",
        "Critical-base table with capped upper bounds, as CSV or JSON text.");
  m.def("synthesize", &py_synthesize, py::arg("M"), py::arg("n"),
        py::arg("beta"), py::arg("x"), py::arg("target"), py::arg("digits"),
        "Expansion of x with digit frequencies converging to target; returns "
        "the artifact as canonical JSON.");
  m.def("oscillate", &py_oscillate, py::arg("M"), py::arg("n"), py::arg("beta"),
        py::arg("x"), py::arg("D"), py::arg("fixed"), py::arg("digits"),
        "Expansion whose frequencies on the digit set D never settle while "
        "the fixed digits converge; returns the artifact as canonical JSON.");
  m.def("validate", &py_validate, py::arg("artifact_json"),
        "Independent replay of an artifact; returns the report as JSON.");
  m.def("branching_profile", &py_profile, py::arg("M"), py::arg("n"),
        py::arg("beta"), py::arg("x"), py::arg("depth"),
        "Number of admissible digit prefixes of x at each depth.");
  m.def("local_dim_bound", &py_local_dim, py::arg("p"), py::arg("q"),
        py::arg("beta"),
        "Upper bound on the local dimension of the Bernoulli convolution "
        "with weights q at a point with digit frequencies p.");
  m.def("corollary_dim_bound", &py_corollary_dim, py::arg("n"), py::arg("q"),
        py::arg("beta"),
        "Local dimension bound from the extremal frequency vector for run "
        "parameter n; requires beta below the critical base.");
}
