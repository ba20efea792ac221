#pragma once

#include <gmpxx.h>

#include <cctype>
#include <string>
#include <string_view>

#include "cfseries/errors.hpp"

namespace cfs {

using Rational = mpq_class;
using BigInt = mpz_class;

/// Parses `p`, `-p`, `p/q` (base 10). The result is canonical.
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  const auto bad = [&] { return ParseError("bad rational literal '" + s + "'"); };
  if (s.empty()) throw bad();
  std::size_t i = 0;
  if (s[i] == '+' || s[i] == '-') ++i;
  std::size_t digits = 0, slash = std::string::npos;
  for (; i < s.size(); ++i) {
    const char ch = s[i];
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      ++digits;
    } else if (ch == '/' && slash == std::string::npos && digits > 0) {
      slash = i;
      digits = 0;
    } else {
      throw bad();
    }
  }
  if (digits == 0) throw bad();
  if (s[0] == '+') s.erase(0, 1);
  Rational r;
  if (r.set_str(s, 10) != 0) throw bad();
  if (r.get_den() == 0) throw ParseError("zero denominator in '" + s + "'");
  r.canonicalize();
  return r;
}

/// `p/q`, or `p` when the denominator is one.
inline std::string to_string(const Rational& r) { return r.get_str(10); }

inline BigInt factorial(unsigned long n) {
  BigInt f;
  mpz_fac_ui(f.get_mpz_t(), n);
  return f;
}

inline BigInt binomial(unsigned long n, unsigned long k) {
  BigInt b;
  mpz_bin_uiui(b.get_mpz_t(), n, k);
  return b;
}

inline BigInt power(const BigInt& base, unsigned long exponent) {
  BigInt p;
  mpz_pow_ui(p.get_mpz_t(), base.get_mpz_t(), exponent);
  return p;
}

} // namespace cfs
