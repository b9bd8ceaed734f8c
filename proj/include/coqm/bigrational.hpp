#pragma once

#include <gmpxx.h>

#include <string>

namespace coqm {

/// Exact rational value of a finite double.
[[nodiscard]] mpq_class exact_rational(double x);

/// Smallest integer >= q.
[[nodiscard]] mpz_class ceil_rational(const mpq_class& q);

/// q^e for e >= 0.
[[nodiscard]] mpq_class pow_rational(const mpq_class& q, unsigned e);
[[nodiscard]] mpz_class pow_integer(const mpz_class& z, unsigned e);

/// Natural logarithm of a positive rational, accurate to double precision even when
/// numerator or denominator far exceed the double range.
[[nodiscard]] double log_rational(const mpq_class& q);
[[nodiscard]] double log_integer(const mpz_class& z);

/// Nearest double; +-inf or 0 when out of range.
[[nodiscard]] double to_double(const mpq_class& q);

/// Decimal digits of |z| (exact).
[[nodiscard]] std::size_t decimal_digits(const mpz_class& z);

/// "num/den" in base 10 (just "num" for integers).
[[nodiscard]] std::string to_string(const mpq_class& q);
[[nodiscard]] std::string to_string(const mpz_class& z);
[[nodiscard]] mpq_class parse_rational(const std::string& s);

/// Short human form such as "1.2345e+105" (from the log, so never overflows).
[[nodiscard]] std::string scientific(const mpq_class& q, int digits = 6);

}  // namespace coqm
