#include "lightclock/scalar.hpp"

#include <cctype>
#include <cstdlib>
#include <optional>

namespace lightclock {

namespace {

std::optional<BigInt> integer_root(const BigInt& n) {
  if (n < 0) return std::nullopt;
  BigInt remainder;
  BigInt root = boost::multiprecision::sqrt(n, remainder);
  if (remainder != 0) return std::nullopt;
  return root;
}

BigInt pow10(unsigned exponent) {
  BigInt result = 1;
  for (unsigned i = 0; i < exponent; ++i) result *= 10;
  return result;
}

}  // namespace

bool is_rational_square(const Rational& x) {
  return integer_root(boost::multiprecision::numerator(x)).has_value() &&
         integer_root(boost::multiprecision::denominator(x)).has_value();
}

Rational exact_sqrt(const Rational& x) {
  auto num = integer_root(boost::multiprecision::numerator(x));
  auto den = integer_root(boost::multiprecision::denominator(x));
  if (!num || !den) {
    throw Error(ErrorKind::Domain, to_string(x) + " is not the square of a rational");
  }
  return Rational(*num, *den);
}

Rational rational_from_double(double x) {
  if (!std::isfinite(x)) throw Error(ErrorKind::Domain, "non-finite value has no rational form");
  return Rational(x);
}

Rational parse_rational(std::string_view text) {
  auto fail = [&]() -> Error {
    return Error(ErrorKind::Parameter, "not a rational literal: '" + std::string(text) + "'");
  };
  if (text.empty()) throw fail();

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    Rational num = parse_rational(text.substr(0, slash));
    Rational den = parse_rational(text.substr(slash + 1));
    if (den == 0) throw Error(ErrorKind::Parameter, "zero denominator in '" + std::string(text) + "'");
    return num / den;
  }

  std::size_t pos = 0;
  bool negative = false;
  if (text[pos] == '+' || text[pos] == '-') {
    negative = text[pos] == '-';
    ++pos;
  }
  std::string digits;
  unsigned fraction_digits = 0;
  bool seen_point = false;
  for (; pos < text.size(); ++pos) {
    char ch = text[pos];
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      digits.push_back(ch);
      if (seen_point) ++fraction_digits;
    } else if (ch == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (digits.empty()) throw fail();

  long exponent = 0;
  if (pos < text.size()) {
    if (text[pos] != 'e' && text[pos] != 'E') throw fail();
    std::string exp_text(text.substr(pos + 1));
    if (exp_text.empty()) throw fail();
    char* end = nullptr;
    exponent = std::strtol(exp_text.c_str(), &end, 10);
    if (*end != '\0' || exponent > 4000 || exponent < -4000) throw fail();
  }

  // a leading zero would make GMP read the digits as octal
  const auto first = digits.find_first_not_of('0');
  Rational value{first == std::string::npos ? BigInt(0) : BigInt(digits.substr(first))};
  long scale = exponent - static_cast<long>(fraction_digits);
  if (scale > 0) value *= Rational(pow10(static_cast<unsigned>(scale)));
  if (scale < 0) value /= Rational(pow10(static_cast<unsigned>(-scale)));
  return negative ? Rational(-value) : value;
}

std::string to_string(const Rational& x) {
  return x.str();
}

}  // namespace lightclock
