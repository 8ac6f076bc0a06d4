#include "betafreq/rational.hpp"

#include "betafreq/errors.hpp"

#include <cctype>

namespace betafreq {

namespace {

bool is_integer_text(const std::string& s) {
  if (s.empty()) return false;
  size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

}  // namespace

Rational parse_rational(const std::string& text) {
  if (text.empty()) throw ParseError("empty rational literal");
  auto slash = text.find('/');
  if (slash != std::string::npos) {
    std::string num = text.substr(0, slash);
    std::string den = text.substr(slash + 1);
    if (!is_integer_text(num) || !is_integer_text(den))
      throw ParseError("bad rational literal: " + text);
    Int d(den);
    if (d == 0) throw ParseError("zero denominator: " + text);
    return Rational(Int(num), d);
  }
  auto dot = text.find('.');
  if (dot != std::string::npos) {
    std::string head = text.substr(0, dot);
    std::string tail = text.substr(dot + 1);
    bool neg = !head.empty() && head[0] == '-';
    if (head == "-" || head == "+" || head.empty()) head += "0";
    if (!is_integer_text(head)) throw ParseError("bad decimal literal: " + text);
    for (char c : tail)
      if (!std::isdigit(static_cast<unsigned char>(c)))
        throw ParseError("bad decimal literal: " + text);
    Int scale = 1;
    for (size_t i = 0; i < tail.size(); ++i) scale *= 10;
    Int frac = tail.empty() ? Int(0) : Int(tail);
    Int whole(head);
    Int numer = abs(whole) * scale + frac;
    if (neg || whole < 0) numer = -numer;
    return Rational(numer, scale);
  }
  if (!is_integer_text(text)) throw ParseError("bad rational literal: " + text);
  return Rational(Int(text));
}

std::string rational_to_string(const Rational& q) {
  if (denominator(q) == 1) return numerator(q).str();
  return numerator(q).str() + "/" + denominator(q).str();
}

std::string rational_to_decimal(const Rational& q, int digits) {
  Int scale = 1;
  for (int i = 0; i < digits; ++i) scale *= 10;
  Rational scaled = q * scale;
  Int n = numerator(scaled), d = denominator(scaled);
  Int quot, rem;
  divide_qr(abs(n), d, quot, rem);
  if (2 * rem >= d) quot += 1;  // round half away from zero
  std::string body = quot.str();
  while (static_cast<int>(body.size()) <= digits) body = "0" + body;
  std::string out = (q < 0 && quot != 0) ? "-" : "";
  if (digits == 0) return out + body;
  out += body.substr(0, body.size() - digits);
  out += ".";
  out += body.substr(body.size() - digits);
  return out;
}

}  // namespace betafreq
