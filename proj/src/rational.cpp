#include "gqm/rational.hpp"

#include "gqm/error.hpp"

#include <cctype>

namespace gqm {

std::string to_string(const Rational& r) {
  const auto num = boost::multiprecision::numerator(r);
  const auto den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

namespace {

bool is_integer_text(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  const auto num_text = text.substr(0, slash);
  if (!is_integer_text(num_text)) throw ParseError("bad rational '" + std::string(text) + "'");
  std::string num_str(num_text[0] == '+' ? num_text.substr(1) : num_text);
  if (slash == std::string_view::npos) return Rational(BigInt(num_str));
  const auto den_text = text.substr(slash + 1);
  if (!is_integer_text(den_text) || den_text[0] == '-' || den_text[0] == '+') {
    throw ParseError("bad rational '" + std::string(text) + "'");
  }
  BigInt den(std::string{den_text});
  if (den == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
  return Rational(BigInt(num_str), den);
}

BigInt floor(const Rational& r) {
  const BigInt num = boost::multiprecision::numerator(r);
  const BigInt den = boost::multiprecision::denominator(r);
  BigInt q = num / den;  // truncates toward zero
  if (num < 0 && q * den != num) q -= 1;
  return q;
}

BigInt ceil(const Rational& r) { return -floor(Rational(-r)); }

}  // namespace gqm
