#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <stdexcept>
#include <string>

namespace linesum {

// Arbitrary-precision integers and rationals.  Rationals are kept in lowest
// terms with positive denominator by the backing type.
using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

// Raised on bad user-facing input: malformed data, violated preconditions,
// unsupported ring/shape combinations.  The CLI maps it to exit code 2.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline bool is_integral(const Rat& r) { return denominator(r) == 1; }

// "7", "-3", "2/9".  Denominator printed only when it is not 1.
inline std::string rat_to_string(const Rat& r) {
  Rat v = r;
  Int num = numerator(v);
  Int den = denominator(v);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

// Accepts the same shapes rat_to_string emits: [+-]digits[/digits].
inline std::optional<Rat> rat_from_string(const std::string& s) {
  std::size_t i = 0;
  auto digits = [&](std::size_t from, std::size_t to) {
    if (from >= to) return false;
    for (std::size_t k = from; k < to; ++k)
      if (s[k] < '0' || s[k] > '9') return false;
    return true;
  };
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
  std::size_t slash = s.find('/');
  if (slash == std::string::npos) {
    if (!digits(i, s.size())) return std::nullopt;
    return Rat(Int(s));
  }
  if (!digits(i, slash) || !digits(slash + 1, s.size())) return std::nullopt;
  Int num(s.substr(0, slash));
  Int den(s.substr(slash + 1));
  if (den == 0) return std::nullopt;
  Rat v(num, den);
  return v;
}

// Quotient q minimizing |a - q*b|; on a tie the truncated quotient is kept.
// Requires b != 0.
inline Int round_div(const Int& a, const Int& b) {
  Int q = a / b;
  Int r = a - q * b;
  if (2 * abs(r) > abs(b)) q += ((r < 0) == (b < 0)) ? 1 : -1;
  return q;
}

inline Int floor_div(const Int& a, const Int& b) {
  Int q = a / b;
  if (q * b != a && ((a < 0) != (b < 0))) --q;
  return q;
}

inline Int ceil_div(const Int& a, const Int& b) { return -floor_div(-a, b); }

// Largest integer <= r.
inline Int rat_floor(const Rat& r) {
  Rat v = r;
  return floor_div(numerator(v), denominator(v));
}

inline Int rat_ceil(const Rat& r) {
  Rat v = r;
  return ceil_div(numerator(v), denominator(v));
}

}  // namespace linesum
