#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <string>
#include <string_view>

namespace powercast {

/// Exact rational number. Every position, weight, time and power value in the
/// library is a Scalar; floating point appears only at the display layer.
using Scalar = mpq_class;

/// Parses "7", "-3/4", "0.125" or "-12.5". Throws std::invalid_argument.
Scalar parse_scalar(std::string_view text);

/// Lossless "num/den" form ("num" when the denominator is 1).
std::string format_scalar(const Scalar& value);

/// Decimal rendering rounded half away from zero to `digits` fractional digits.
std::string format_decimal(const Scalar& value, int digits);

/// value * 2^k, exact.
Scalar times_pow2(const Scalar& value, std::size_t k);

/// 2^k - 1 as a Scalar.
Scalar pow2_minus_one(std::size_t k);

/// num/den in lowest terms.
inline Scalar fraction(long num, long den) {
  Scalar q(num, den);
  q.canonicalize();
  return q;
}

inline Scalar abs(const Scalar& value) { return value < 0 ? Scalar(-value) : value; }
inline const Scalar& min(const Scalar& a, const Scalar& b) { return b < a ? b : a; }
inline const Scalar& max(const Scalar& a, const Scalar& b) { return a < b ? b : a; }

/// Approximate conversion for prefilters and reports.
inline double to_double(const Scalar& value) { return value.get_d(); }

}  // namespace powercast
