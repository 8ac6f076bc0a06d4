#include "betafreq/context_spec.hpp"

#include "betafreq/bounds.hpp"
#include "betafreq/errors.hpp"

#include <sstream>

namespace betafreq {

namespace {

std::vector<Rational> parse_vector(const std::string& s) {
  std::vector<Rational> v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) v.push_back(parse_rational(item));
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

}  // namespace

BetaContext context_from_spec(int M, int n, const std::string& beta_spec) {
  if (beta_spec == "auto")
    return BetaContext(
        M, n, scaled_beta_n(static_cast<unsigned>(n), Rational(999, 1000)));
  if (beta_spec.rfind("poly:", 0) == 0) {
    std::string body = beta_spec.substr(5);
    size_t at = body.find('@');
    if (at == std::string::npos)
      throw ParseError("polynomial beta needs '@lo,hi' isolating interval");
    std::vector<Int> desc = parse_int_vector(body.substr(0, at));
    std::vector<Rational> iv = parse_vector(body.substr(at + 1));
    if (iv.size() != 2)
      throw ParseError("isolating interval needs two endpoints");
    std::vector<Int> asc(desc.rbegin(), desc.rend());
    return BetaContext(
        M, n, RootDescriptor::isolate(Poly(std::move(asc)), iv[0], iv[1]));
  }
  return BetaContext(M, n, parse_rational(beta_spec));
}

}  // namespace betafreq
