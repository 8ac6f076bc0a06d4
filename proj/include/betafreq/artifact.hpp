#pragma once

#include "betafreq/synthesis.hpp"

#include <string>
#include <vector>

namespace betafreq {

// On-disk expansion record. Exact values (beta, x, targets, errors) are
// stored as rational strings; digits are chunked integer arrays. The JSON
// form is canonical: parsing and re-serializing is byte-identical.
struct Artifact {
  int M = 1, n = 1;
  bool beta_rational = true;
  Rational beta_value;           // when beta_rational
  std::vector<Int> beta_poly;    // ascending coefficients, otherwise
  Rational beta_lo, beta_hi;     // isolating interval for the poly root
  Rational x;
  std::string mode = "target";   // "target" | "oscillate"
  std::vector<std::vector<Rational>> targets;  // one vector, or q and q'
  std::vector<std::uint8_t> digits;
  std::vector<Checkpoint> checkpoints;
  std::vector<std::pair<long long, int>> switches;  // (N, stage), oscillate
};

Artifact make_artifact(const ExpansionStream& s);

// Canonical JSON text (ends with a newline).
std::string artifact_to_json(const Artifact& a);
// Throws ParseError on malformed input, out-of-range digits, or
// inconsistent checkpoint shapes.
Artifact artifact_from_json(const std::string& text);

void write_artifact(const std::string& path, const Artifact& a);
Artifact read_artifact(const std::string& path);

// Rebuilds the expansion context an artifact was produced under.
BetaContext context_of(const Artifact& a);

}  // namespace betafreq
