#include "coqm/bigrational.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

#include "coqm/errors.hpp"

namespace coqm {

mpq_class exact_rational(double x) {
  require(std::isfinite(x), "exact_rational: non-finite input");
  mpq_class q(x);  // mpq_set_d is exact
  q.canonicalize();
  return q;
}

mpz_class ceil_rational(const mpq_class& q) {
  mpz_class z;
  mpz_cdiv_q(z.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return z;
}

mpz_class pow_integer(const mpz_class& z, unsigned e) {
  mpz_class out;
  mpz_pow_ui(out.get_mpz_t(), z.get_mpz_t(), e);
  return out;
}

mpq_class pow_rational(const mpq_class& q, unsigned e) {
  mpq_class out(pow_integer(q.get_num(), e), pow_integer(q.get_den(), e));
  out.canonicalize();
  return out;
}

double log_integer(const mpz_class& z) {
  require(sgn(z) > 0, "log_integer: argument must be positive");
  long exp2 = 0;
  const double mant = mpz_get_d_2exp(&exp2, z.get_mpz_t());
  return std::log(mant) + static_cast<double>(exp2) * std::numbers::ln2;
}

double log_rational(const mpq_class& q) {
  require(sgn(q) > 0, "log_rational: argument must be positive");
  return log_integer(q.get_num()) - log_integer(q.get_den());
}

double to_double(const mpq_class& q) {
  if (sgn(q) == 0) return 0.0;
  const double l = log_rational(abs(q));
  if (l > 709.0) return sgn(q) * HUGE_VAL;
  if (l < -745.0) return 0.0;
  return mpq_get_d(q.get_mpq_t());
}

std::size_t decimal_digits(const mpz_class& z) {
  if (sgn(z) == 0) return 1;
  return mpz_class(abs(z)).get_str(10).size();
}

std::string to_string(const mpz_class& z) { return z.get_str(10); }

std::string to_string(const mpq_class& q) { return q.get_str(10); }

mpq_class parse_rational(const std::string& s) {
  mpq_class q;
  if (q.set_str(s, 10) != 0) throw ValidationError("parse_rational: not a rational: " + s);
  q.canonicalize();
  return q;
}

std::string scientific(const mpq_class& q, int digits) {
  if (sgn(q) == 0) return "0";
  const double l10 = log_rational(abs(q)) / std::numbers::ln10;
  double e = std::floor(l10);
  double mant = std::pow(10.0, l10 - e);
  if (mant >= 10.0) {
    mant /= 10.0;
    e += 1.0;
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s%.*fe%+.0f", sgn(q) < 0 ? "-" : "", digits - 1, mant, e);
  return buf;
}

}  // namespace coqm
