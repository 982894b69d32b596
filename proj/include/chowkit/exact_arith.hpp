#pragma once

// Exact rational scalars and the combinatorial numbers used by the
// coefficient formulas (Bernoulli numbers, factorials, double factorials).

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace chowkit {

/// Arbitrary-precision integer.
using Integer = mpz_class;

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator (every constructor below canonicalizes).
using Rational = mpq_class;

/// Thrown when a combinatorial function receives an argument outside its domain.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

Rational make_rational(long num, long den = 1);

/// Parses "p", "-p" or "p/q" into a canonical rational. Throws DomainError on
/// malformed input or a zero denominator.
Rational parse_rational(const std::string& text);

/// Canonical text form: "p" for integers, "p/q" otherwise.
std::string to_string(const Rational& q);

/// B_m from the recurrence sum_{j=0}^{m} C(m+1, j) B_j = 0, B_0 = 1 (so B_1 = -1/2).
/// The table is memoized and grown on demand; safe to call concurrently.
Rational bernoulli(long m);

/// n! for n >= 0, memoized.
Integer factorial(long n);

/// C(n, k) for 0 <= k <= n.
Integer binomial(long n, long k);

/// n!! for odd n >= -1, with (-1)!! = 1.
Integer double_factorial(long n);

/// 2^e for any integer e (negative exponents give 1/2^|e|).
Rational pow2(long e);

/// (-1)^e.
inline int sign_pow(long e) { return (e % 2 == 0) ? 1 : -1; }

}  // namespace chowkit
