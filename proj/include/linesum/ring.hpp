#pragma once

#include <string>
#include <vector>

#include "linesum/numeric.hpp"

namespace linesum {

namespace detail {

// Deterministic Miller-Rabin with the fixed base set {2,...,37}; correct for
// all n below 3.3e24, a strong probable-prime test beyond that.
inline bool is_prime(const Int& n) {
  if (n < 2) return false;
  static const int small_primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (int p : small_primes) {
    if (n == p) return true;
    if (n % p == 0) return false;
  }
  Int d = n - 1;
  unsigned s = 0;
  while (d % 2 == 0) {
    d /= 2;
    ++s;
  }
  for (int a : small_primes) {
    Int x = boost::multiprecision::powm(Int(a), d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (unsigned i = 0; i + 1 < s; ++i) {
      x = x * x % n;
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

}  // namespace detail

enum class RingKind { Integers, Rationals, PrimeField };

// Runtime description of the coefficient ring: Z, Q, or F_p for a prime p.
// Elements are carried uniformly as Rat values; `canonical` maps a raw value
// to the ring's canonical representative (for F_p the residue in [0, p)).
class RingSpec {
 public:
  static RingSpec integers() { return RingSpec(RingKind::Integers, 0); }
  static RingSpec rationals() { return RingSpec(RingKind::Rationals, 0); }
  static RingSpec prime_field(const Int& p) {
    if (!detail::is_prime(p)) throw ValidationError("ring: modulus " + p.str() + " is not prime");
    return RingSpec(RingKind::PrimeField, p);
  }

  RingKind kind() const { return kind_; }
  bool is_field() const { return kind_ != RingKind::Integers; }
  const Int& modulus() const {
    if (kind_ != RingKind::PrimeField) throw ValidationError("ring: modulus requested from " + name());
    return modulus_;
  }

  bool operator==(const RingSpec& o) const { return kind_ == o.kind_ && modulus_ == o.modulus_; }
  bool operator!=(const RingSpec& o) const { return !(*this == o); }

  // Whether v denotes an element of the ring (an integer for Z and F_p).
  bool contains(const Rat& v) const {
    return kind_ == RingKind::Rationals || is_integral(v);
  }

  Rat canonical(const Rat& v) const {
    switch (kind_) {
      case RingKind::Rationals:
        return v;
      case RingKind::Integers:
        if (!is_integral(v)) throw ValidationError("ring: " + rat_to_string(v) + " is not an integer");
        return v;
      case RingKind::PrimeField: {
        if (!is_integral(v)) throw ValidationError("ring: " + rat_to_string(v) + " is not an integer");
        Rat c = v;
        Int r = numerator(c) % modulus_;
        if (r < 0) r += modulus_;
        return Rat(r);
      }
    }
    return v;
  }

  Rat add(const Rat& a, const Rat& b) const {
    Rat c = a + b;
    return canonical(c);
  }
  Rat sub(const Rat& a, const Rat& b) const {
    Rat c = a - b;
    return canonical(c);
  }
  Rat mul(const Rat& a, const Rat& b) const {
    Rat c = a * b;
    return canonical(c);
  }
  Rat neg(const Rat& a) const {
    Rat c = -a;
    return canonical(c);
  }

  bool is_zero(const Rat& a) const { return canonical(a) == 0; }
  bool is_one(const Rat& a) const { return canonical(a) == 1; }

  bool is_unit(const Rat& a) const {
    Rat c = canonical(a);
    switch (kind_) {
      case RingKind::Integers:
        return c == 1 || c == -1;
      default:
        return c != 0;
    }
  }

  Rat inv(const Rat& a) const {
    Rat c = canonical(a);
    switch (kind_) {
      case RingKind::Rationals:
        if (c == 0) throw ValidationError("ring: division by zero");
        return 1 / c;
      case RingKind::Integers:
        if (c == 1 || c == -1) return c;
        throw ValidationError("ring: " + rat_to_string(c) + " is not a unit in Z");
      case RingKind::PrimeField: {
        if (c == 0) throw ValidationError("ring: division by zero");
        Int x = boost::multiprecision::powm(numerator(c), modulus_ - 2, modulus_);
        return Rat(x);
      }
    }
    return c;
  }

  Rat div(const Rat& a, const Rat& b) const { return mul(a, inv(b)); }

  std::string name() const {
    switch (kind_) {
      case RingKind::Integers:
        return "Z";
      case RingKind::Rationals:
        return "Q";
      case RingKind::PrimeField:
        return "F_" + modulus_.str();
    }
    return "?";
  }

  // Compact stable key for caches and serialization.
  std::string token() const {
    switch (kind_) {
      case RingKind::Integers:
        return "Z";
      case RingKind::Rationals:
        return "Q";
      case RingKind::PrimeField:
        return "F" + modulus_.str();
    }
    return "?";
  }

  // Inverse of token(); also accepts "F_p".
  static RingSpec from_token(const std::string& t) {
    if (t == "Z") return integers();
    if (t == "Q") return rationals();
    if (t.size() > 1 && t[0] == 'F') {
      std::string digits = t.substr(t[1] == '_' ? 2 : 1);
      if (!digits.empty() && digits.find_first_not_of("0123456789") == std::string::npos)
        return prime_field(Int(digits));
    }
    throw ValidationError("ring: unrecognized ring token '" + t + "'");
  }

 private:
  RingSpec(RingKind kind, Int modulus) : kind_(kind), modulus_(std::move(modulus)) {}

  RingKind kind_;
  Int modulus_;
};

}  // namespace linesum
