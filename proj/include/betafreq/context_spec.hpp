#pragma once

#include "betafreq/dynamics.hpp"

#include <string>

namespace betafreq {

// Builds a BetaContext from a textual beta specification:
//   "auto"                        just below the critical base for n
//   "3/2", "1.38"                 exact rational / terminating decimal
//   "poly:c_d,...,c_0@lo,hi"      descending integer coefficients with a
//                                 rational isolating interval for the root
// Throws ParseError on malformed input.
BetaContext context_from_spec(int M, int n, const std::string& beta_spec);

}  // namespace betafreq
