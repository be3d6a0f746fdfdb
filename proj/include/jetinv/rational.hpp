#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace jetinv {

using Integer = mpz_class;
using Rational = mpq_class;

/// Base error for all invalid-input conditions raised by this library.
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A requested configuration is recognized but deliberately out of scope.
struct unsupported_error : error {
  using error::error;
};

/// An internal consistency check failed; indicates a bug, not bad input.
struct internal_error : error {
  using error::error;
};

inline std::string to_string(const Rational& q) { return q.get_str(); }

inline std::string to_string(const Integer& z) { return z.get_str(); }

/// Parses "a" or "a/b" with optional leading sign. Throws error on junk.
inline Rational rational_from_string(const std::string& s) {
  Rational q;
  if (q.set_str(s, 10) != 0) throw error("bad rational literal: '" + s + "'");
  q.canonicalize();
  return q;
}

inline Integer factorial(int n) {
  Integer r;
  mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(n));
  return r;
}

inline Integer binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  Integer r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n),
               static_cast<unsigned long>(k));
  return r;
}

/// Falling factorial i!/(i-r)!; the weight-shift factor of t^r generators.
inline Integer falling_factorial(int i, int r) {
  if (r < 0 || r > i) return 0;
  Integer acc = 1;
  for (int t = 0; t < r; ++t) acc *= (i - t);
  return acc;
}

}  // namespace jetinv
