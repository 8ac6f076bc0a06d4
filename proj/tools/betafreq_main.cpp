#include "betafreq/artifact.hpp"
#include "betafreq/bounds.hpp"
#include "betafreq/context_spec.hpp"
#include "betafreq/errors.hpp"
#include "betafreq/oracle.hpp"
#include "betafreq/synthesis.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace betafreq;

std::vector<Rational> parse_vector(const std::string& s) {
  std::vector<Rational> v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) throw ParseError("empty entry in vector '" + s + "'");
    v.push_back(parse_rational(item));
  }
  if (v.empty()) throw ParseError("empty vector");
  return v;
}

std::vector<Int> parse_int_vector(const std::string& s) {
  std::vector<Int> v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) v.emplace_back(item);
  if (v.empty()) throw ParseError("empty coefficient list");
  return v;
}

BetaContext make_context(int M, int n, const std::string& beta_spec) {
  return context_from_spec(M, n, beta_spec);
}

void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw DomainError("cannot open " + out_path + " for writing");
  f << text;
}

FreqVector to_freq(std::vector<Rational> v) {
  FreqVector f;
  f.p = std::move(v);
  return f;
}

int cmd_solve(unsigned beta_n_arg, int golden_arg, const std::string& root_arg,
              int digits) {
  int given = (beta_n_arg > 0) + (golden_arg > 0) + !root_arg.empty();
  if (given != 1)
    throw DomainError("solve needs exactly one of --beta-n, --golden, --root");
  CertifiedReal v = CertifiedReal::from_si(0);
  if (beta_n_arg > 0) {
    v = beta_n(beta_n_arg);
  } else if (golden_arg > 0) {
    v = generalized_golden(golden_arg);
  } else {
    std::vector<Int> desc = parse_int_vector(root_arg);
    std::vector<Int> asc(desc.rbegin(), desc.rend());
    v = CertifiedReal::from_root(
        RootDescriptor::isolate(Poly(std::move(asc)), Rational(1),
                                Rational(2)));
  }
  std::cout << v.decimal(digits) << "\n";
  return 0;
}

int cmd_table(int M, const std::string& n_list, const std::string& format,
              const std::string& out) {
  std::vector<unsigned> ns;
  std::stringstream ss(n_list);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) ns.push_back(static_cast<unsigned>(std::stoul(item)));
  if (ns.empty()) throw DomainError("table needs a non-empty n list");
  auto rows = critical_table(M, ns);
  emit(out, format == "json" ? table_json(rows) : table_csv(rows));
  return 0;
}

void print_summary(const ExpansionStream& s) {
  std::cout << "digits emitted: " << s.emitted() << "\n";
  std::cout << "final sup-error vs first target: "
            << s.target().sup_error(s.engine().counts()) << "\n";
  if (s.oscillating())
    std::cout << "target switches: " << s.switch_points().size() << "\n";
}

int cmd_synth(int M, int n, const std::string& beta_spec,
              const std::string& x, const std::string& target,
              long long digits, const std::string& out) {
  BetaContext ctx = make_context(M, n, beta_spec);
  ExpansionStream s = synthesize(ctx, parse_rational(x),
                                 to_freq(parse_vector(target)), digits);
  emit(out, artifact_to_json(make_artifact(s)));
  if (!out.empty() && out != "-") print_summary(s);
  return 0;
}

int cmd_oscillate(int M, int n, const std::string& beta_spec,
                  const std::string& x, const std::string& d_set,
                  const std::vector<std::string>& fixed, long long digits,
                  const std::string& out) {
  BetaContext ctx = make_context(M, n, beta_spec);
  std::vector<int> D;
  for (const Rational& r : parse_vector(d_set)) {
    if (denominator(r) != 1) throw ParseError("oscillation digits must be integers");
    D.push_back(static_cast<int>(numerator(r).convert_to<long>()));
  }
  std::map<int, Rational> p_partial;
  for (const std::string& f : fixed) {
    size_t eq = f.find('=');
    if (eq == std::string::npos)
      throw ParseError("--fix expects digit=frequency, got '" + f + "'");
    p_partial[std::stoi(f.substr(0, eq))] = parse_rational(f.substr(eq + 1));
  }
  ExpansionStream s = synthesize_nonconvergent(ctx, parse_rational(x),
                                               std::move(D),
                                               std::move(p_partial), digits);
  emit(out, artifact_to_json(make_artifact(s)));
  if (!out.empty() && out != "-") print_summary(s);
  return 0;
}

int cmd_analyze(const std::string& artifact_path, const std::string& q_arg,
                const std::string& beta_arg, unsigned bound_n) {
  Artifact a = read_artifact(artifact_path);
  std::cout << "mode: " << a.mode << ", M=" << a.M << ", n=" << a.n
            << ", digits=" << a.digits.size() << "\n";
  FreqVector p0 = to_freq(a.targets.at(0));
  double max_err = 0.0;
  std::cout << "checkpoint frequency trajectory (N";
  for (int k = 0; k <= a.M; ++k) std::cout << ", freq_" << k;
  std::cout << ", sup_error)\n";
  for (const Checkpoint& cp : a.checkpoints) {
    double e = p0.sup_error(cp.counts);
    if (e > max_err) max_err = e;
    std::cout << cp.N;
    for (long long c : cp.counts)
      std::cout << ", " << static_cast<double>(c) / static_cast<double>(cp.N);
    std::cout << ", " << e << "\n";
  }
  std::cout << "max checkpoint sup-error vs first target: " << max_err << "\n";
  if (!q_arg.empty()) {
    if (beta_arg.empty() || bound_n == 0)
      throw DomainError("--q needs --beta and --bound-n");
    BernoulliParams q(to_freq(parse_vector(q_arg)));
    CertifiedReal beta = CertifiedReal::from_rational(parse_rational(beta_arg));
    CertifiedReal bound = corollary_dim_bound(bound_n, q, beta);
    std::cout << "local dimension bound: " << bound.decimal(3) << "\n";
  }
  return 0;
}

int cmd_oracle(const std::string& artifact_path, int M, int n,
               const std::string& beta_spec, const std::string& x, int depth,
               const std::string& out) {
  if (!artifact_path.empty()) {
    Artifact a = read_artifact(artifact_path);
    OracleReport rep = validate_expansion(a);
    emit(out, rep.to_json());
    return rep.ok() ? 0 : 2;
  }
  BetaContext ctx = make_context(M, n, beta_spec);
  BranchTree t = enumerate_prefixes(ctx, parse_rational(x), depth);
  OracleReport rep;
  rep.depth_counts = t.depth_counts();
  emit(out, rep.to_json());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"beta-expansion synthesis with prescribed digit frequencies"};
  app.require_subcommand(1);

  // solve
  auto* solve = app.add_subcommand("solve", "print a certified constant");
  unsigned s_beta_n = 0;
  int s_golden = 0, s_digits = 6;
  std::string s_root;
  solve->add_option("--beta-n", s_beta_n, "critical base beta_n for this n");
  solve->add_option("--golden", s_golden, "generalized golden ratio G(M)");
  solve->add_option("--root", s_root,
                    "integer polynomial, descending coefficients; root in (1,2)");
  solve->add_option("--digits", s_digits, "decimal places (default 6)");

  // table
  auto* table = app.add_subcommand("table", "critical-base table (CSV/JSON)");
  int t_M = 2;
  std::string t_ns = "1,2,3,4,5,10,25,50,100", t_fmt = "csv", t_out;
  table->add_option("--M", t_M, "largest digit (default 2)");
  table->add_option("--n-list", t_ns, "comma-separated n values");
  table->add_option("--format", t_fmt, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  table->add_option("--out", t_out, "output file (default stdout)");

  // shared synth/oscillate options
  int g_M = 1, g_n = 1;
  std::string g_beta = "auto", g_x = "1", g_out;
  long long g_digits = 100000;

  auto* synth = app.add_subcommand("synth",
                                   "synthesize an expansion with target "
                                   "digit frequencies");
  std::string sy_target;
  synth->add_option("--M", g_M, "largest digit");
  synth->add_option("--n", g_n, "frequency truncation parameter");
  synth->add_option("--beta", g_beta,
                    "base: 'auto', a rational/decimal, or poly:c_d,...,c_0@lo,hi");
  synth->add_option("--x", g_x, "expansion point (exact rational)");
  synth->add_option("--target", sy_target, "frequency vector p_0,...,p_M")
      ->required();
  synth->add_option("--digits", g_digits, "digit budget");
  synth->add_option("--out", g_out, "artifact path (default stdout)");

  auto* osc = app.add_subcommand("oscillate",
                                 "synthesize an expansion whose frequencies "
                                 "on a digit set never converge");
  std::string o_dset;
  std::vector<std::string> o_fixed;
  osc->add_option("--M", g_M, "largest digit");
  osc->add_option("--n", g_n, "frequency truncation parameter");
  osc->add_option("--beta", g_beta, "base specification (as in synth)");
  osc->add_option("--x", g_x, "expansion point (exact rational)");
  osc->add_option("--oscillate-digits", o_dset,
                  "digits whose frequencies must not converge")
      ->required();
  osc->add_option("--fix", o_fixed,
                  "digit=frequency for each digit outside the set");
  osc->add_option("--digits", g_digits, "digit budget");
  osc->add_option("--out", g_out, "artifact path (default stdout)");

  auto* analyze = app.add_subcommand("analyze", "inspect an artifact");
  std::string a_art, a_q, a_beta;
  unsigned a_bound_n = 0;
  analyze->add_option("--artifact", a_art, "artifact path")->required();
  analyze->add_option("--q", a_q, "Bernoulli weights for a dimension bound");
  analyze->add_option("--beta", a_beta, "base for the dimension bound");
  analyze->add_option("--bound-n", a_bound_n, "n for the dimension bound");

  auto* oracle = app.add_subcommand("oracle",
                                    "validate an artifact or enumerate all "
                                    "admissible prefixes");
  std::string r_art, r_beta = "auto", r_x = "0", r_out;
  int r_M = 1, r_n = 1, r_depth = 10;
  oracle->add_option("--artifact", r_art, "artifact to validate");
  oracle->add_option("--M", r_M, "largest digit (enumeration)");
  oracle->add_option("--n", r_n, "parameter n (enumeration)");
  oracle->add_option("--beta", r_beta, "base specification (enumeration)");
  oracle->add_option("--x", r_x, "point to enumerate");
  oracle->add_option("--depth", r_depth, "enumeration depth (<= 24)");
  oracle->add_option("--out", r_out, "report path (default stdout)");

  try {
    app.parse(argc, argv);
    if (solve->parsed()) return cmd_solve(s_beta_n, s_golden, s_root, s_digits);
    if (table->parsed()) return cmd_table(t_M, t_ns, t_fmt, t_out);
    if (synth->parsed())
      return cmd_synth(g_M, g_n, g_beta, g_x, sy_target, g_digits, g_out);
    if (osc->parsed())
      return cmd_oscillate(g_M, g_n, g_beta, g_x, o_dset, o_fixed, g_digits,
                           g_out);
    if (analyze->parsed()) return cmd_analyze(a_art, a_q, a_beta, a_bound_n);
    if (oracle->parsed())
      return cmd_oracle(r_art, r_M, r_n, r_beta, r_x, r_depth, r_out);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const betafreq::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(e.category());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
