#include "disktau/rational.hpp"

#include "disktau/errors.hpp"

#include <cctype>

namespace disktau {

Rational frac(long p, long q) {
  if (q == 0) throw DomainError("zero denominator");
  Rational r(p, q);
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

Rational parse_rational(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw ParseError("empty rational");
  for (char c : s) {
    if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '/' || c == '+'))
      throw ParseError("bad rational: " + s);
  }
  Rational r;
  if (r.set_str(s, 10) != 0 || r.get_den() == 0) throw ParseError("bad rational: " + s);
  r.canonicalize();
  return r;
}

Integer factorial(long n) {
  if (n < 0) throw DomainError("factorial of negative number");
  Integer r;
  mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(n));
  return r;
}

Integer double_factorial(long n) {
  if (n < -1) throw DomainError("double factorial below -1");
  if (n <= 0) return 1;
  Integer r;
  mpz_2fac_ui(r.get_mpz_t(), static_cast<unsigned long>(n));
  return r;
}

Integer binomial(long n, long k) {
  if (n < 0 || k < 0 || k > n) return 0;
  Integer r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return r;
}

Integer multinomial(long n, std::span<const long> parts) {
  long total = 0;
  for (long p : parts) {
    if (p < 0) return 0;
    total += p;
  }
  if (total != n) return 0;
  Integer r = factorial(n);
  for (long p : parts) r /= factorial(p);
  return r;
}

Integer falling_factorial(long x, long k) {
  Integer r = 1;
  for (long i = 0; i < k; ++i) r *= x - i;
  return r;
}

}  // namespace disktau
