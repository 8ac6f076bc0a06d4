#include "betafreq/artifact.hpp"

#include "betafreq/errors.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace betafreq {

namespace {

using json = nlohmann::ordered_json;

constexpr size_t kChunk = 10000;

Rational sup_error_exact(const std::vector<Rational>& p,
                         const std::vector<long long>& counts, long long N) {
  Rational worst(0);
  for (size_t k = 0; k < p.size(); ++k) {
    Rational e = abs(Rational(counts[k], N) - p[k]);
    if (e > worst) worst = e;
  }
  return worst;
}

Rational parse_rat(const json& j, const char* what) {
  if (!j.is_string())
    throw ParseError(std::string(what) + " must be a rational string");
  try {
    return parse_rational(j.get<std::string>());
  } catch (const std::exception& e) {
    throw ParseError(std::string("bad ") + what + ": " + e.what());
  }
}

}  // namespace

Artifact make_artifact(const ExpansionStream& s) {
  const BetaContext& ctx = s.ctx();
  Artifact a;
  a.M = ctx.M();
  a.n = ctx.n();
  const RootPtr& root = ctx.field()->root();
  if (root->exact()) {
    a.beta_rational = true;
    a.beta_value = root->exact_value();
  } else {
    a.beta_rational = false;
    a.beta_poly = root->poly().c;
    a.beta_lo = root->isolating_lo();
    a.beta_hi = root->isolating_hi();
  }
  a.x = s.engine().x0();
  a.mode = s.oscillating() ? "oscillate" : "target";
  a.targets.push_back(s.target().p);
  if (s.oscillating()) a.targets.push_back(s.q_alt().p);
  a.digits = s.engine().digits();
  a.checkpoints = s.checkpoints();
  for (size_t i = 0; i < s.switch_points().size(); ++i)
    a.switches.emplace_back(s.switch_points()[i], s.switch_stages()[i]);
  return a;
}

std::string artifact_to_json(const Artifact& a) {
  json h;
  h["M"] = a.M;
  h["n"] = a.n;
  if (a.beta_rational) {
    h["beta"] = json{{"rational", rational_to_string(a.beta_value)}};
  } else {
    json coeffs = json::array();
    for (const Int& c : a.beta_poly) coeffs.push_back(c.str());
    h["beta"] = json{{"poly", coeffs},
                     {"interval", json::array({rational_to_string(a.beta_lo),
                                               rational_to_string(a.beta_hi)})}};
  }
  h["x"] = rational_to_string(a.x);
  h["mode"] = a.mode;
  json targets = json::array();
  for (const auto& t : a.targets) {
    json tv = json::array();
    for (const Rational& p : t) tv.push_back(rational_to_string(p));
    targets.push_back(tv);
  }
  h["targets"] = targets;

  json chunks = json::array();
  for (size_t i = 0; i < a.digits.size(); i += kChunk) {
    json chunk = json::array();
    size_t end = std::min(a.digits.size(), i + kChunk);
    for (size_t j = i; j < end; ++j) chunk.push_back(int(a.digits[j]));
    chunks.push_back(std::move(chunk));
  }

  json cps = json::array();
  for (const Checkpoint& cp : a.checkpoints) {
    json jc;
    jc["N"] = cp.N;
    jc["counts"] = cp.counts;
    if (!a.targets.empty() && cp.N > 0)
      jc["sup_error"] =
          rational_to_string(sup_error_exact(a.targets[0], cp.counts, cp.N));
    cps.push_back(std::move(jc));
  }

  json sw = json::array();
  for (const auto& [N, stage] : a.switches)
    sw.push_back(json{{"N", N}, {"stage", stage}});

  json doc;
  doc["header"] = h;
  doc["digits"] = json{{"chunk_size", kChunk}, {"chunks", chunks}};
  doc["checkpoints"] = cps;
  doc["switches"] = sw;
  return doc.dump(2) + "\n";
}

Artifact artifact_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const std::exception& e) {
    throw ParseError(std::string("artifact is not valid JSON: ") + e.what());
  }
  try {
    Artifact a;
    const json& h = doc.at("header");
    a.M = h.at("M").get<int>();
    a.n = h.at("n").get<int>();
    if (a.M < 1 || a.n < 1) throw ParseError("M and n must be positive");
    const json& b = h.at("beta");
    if (b.contains("rational")) {
      a.beta_rational = true;
      a.beta_value = parse_rat(b.at("rational"), "beta");
    } else {
      a.beta_rational = false;
      for (const json& c : b.at("poly"))
        a.beta_poly.emplace_back(c.get<std::string>());
      if (a.beta_poly.size() < 2)
        throw ParseError("beta polynomial needs degree >= 1");
      a.beta_lo = parse_rat(b.at("interval").at(0), "beta interval");
      a.beta_hi = parse_rat(b.at("interval").at(1), "beta interval");
    }
    a.x = parse_rat(h.at("x"), "x");
    a.mode = h.at("mode").get<std::string>();
    if (a.mode != "target" && a.mode != "oscillate")
      throw ParseError("mode must be \"target\" or \"oscillate\"");
    for (const json& t : h.at("targets")) {
      std::vector<Rational> tv;
      for (const json& p : t) tv.push_back(parse_rat(p, "target entry"));
      if (static_cast<int>(tv.size()) != a.M + 1)
        throw ParseError("target vector length must be M + 1");
      a.targets.push_back(std::move(tv));
    }
    for (const json& chunk : doc.at("digits").at("chunks"))
      for (const json& d : chunk) {
        int v = d.get<int>();
        if (v < 0 || v > a.M)
          throw ParseError("digit " + std::to_string(v) +
                           " outside the alphabet {0, ..., " +
                           std::to_string(a.M) + "}");
        a.digits.push_back(static_cast<std::uint8_t>(v));
      }
    for (const json& jc : doc.at("checkpoints")) {
      Checkpoint cp;
      cp.N = jc.at("N").get<long long>();
      cp.counts = jc.at("counts").get<std::vector<long long>>();
      if (static_cast<int>(cp.counts.size()) != a.M + 1)
        throw ParseError("checkpoint counts length must be M + 1");
      long long total = 0;
      for (long long c : cp.counts) {
        if (c < 0) throw ParseError("negative checkpoint count");
        total += c;
      }
      if (total != cp.N)
        throw ParseError("checkpoint counts do not sum to its N");
      a.checkpoints.push_back(std::move(cp));
    }
    for (const json& js : doc.at("switches"))
      a.switches.emplace_back(js.at("N").get<long long>(),
                              js.at("stage").get<int>());
    return a;
  } catch (const json::exception& e) {
    throw ParseError(std::string("artifact structure invalid: ") + e.what());
  }
}

void write_artifact(const std::string& path, const Artifact& a) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DomainError("cannot open " + path + " for writing");
  out << artifact_to_json(a);
}

Artifact read_artifact(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return artifact_from_json(ss.str());
}

BetaContext context_of(const Artifact& a) {
  if (a.beta_rational) return BetaContext(a.M, a.n, a.beta_value);
  RootPtr root =
      RootDescriptor::isolate(Poly(a.beta_poly), a.beta_lo, a.beta_hi);
  return BetaContext(a.M, a.n, std::move(root));
}

}  // namespace betafreq
