#pragma once

#include <gmpxx.h>

#include <span>
#include <string>
#include <string_view>

namespace disktau {

using Rational = mpq_class;
using Integer = mpz_class;

// p/q in lowest terms.
Rational frac(long p, long q);

// "p/q", or "p" when q == 1.
std::string to_string(const Rational& r);
// Accepts "p", "-p" and "p/q"; the result is canonicalized.
Rational parse_rational(std::string_view text);

Integer factorial(long n);
// n!! for odd n >= -1; (-1)!! = 1.
Integer double_factorial(long n);
// Zero outside 0 <= k <= n.
Integer binomial(long n, long k);
// Zero when a part is negative or the parts do not sum to n.
Integer multinomial(long n, std::span<const long> parts);
// x (x-1) ... (x-k+1)
Integer falling_factorial(long x, long k);

}  // namespace disktau
