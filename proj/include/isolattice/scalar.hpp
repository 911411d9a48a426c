#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

#include "isolattice/errors.hpp"

namespace isolattice {

using Integer = mpz_class;

/// Arbitrary-precision rational. GMP keeps every result in lowest terms with a
/// positive denominator; make_rational() enforces the same on construction.
using Rational = mpq_class;

Rational make_rational(const Integer& numerator, const Integer& denominator);

/// Parses "p", "p/q" or "-p/q" (decimal). Throws InvalidArgument on zero
/// denominator or bad syntax.
Rational parse_rational(std::string_view text);

/// Lowest-terms "p/q", or "p" when the denominator is one.
std::string to_string(const Rational& value);
std::string to_string(const Integer& value);

inline bool is_integral(const Rational& value) { return value.get_den() == 1; }

/// Floor division and non-negative remainder for b > 0.
Integer floor_div(const Integer& a, const Integer& b);
Integer mod_nonneg(const Integer& a, const Integer& m);

Integer gcd(const Integer& a, const Integer& b);
Integer lcm(const Integer& a, const Integer& b);

/// Returns g = gcd(a, b) >= 0 and sets s, t with s*a + t*b = g.
Integer gcdext(const Integer& a, const Integer& b, Integer& s, Integer& t);

/// Largest k with prime^k | value; value must be nonzero.
unsigned long valuation(const Integer& value, const Integer& prime);

Integer pow(const Integer& base, unsigned long exponent);

bool is_probable_prime(const Integer& value);

/// Inverse of a modulo m. Throws InvalidArgument if gcd(a, m) != 1.
Integer inverse_mod(const Integer& a, const Integer& m);

/// Reduces p/q into [0, m) when gcd(q, m) = 1.
Integer reduce_mod(const Rational& value, const Integer& m);

/// An element of Z/mZ with m >= 2, stored as its representative in [0, m).
class ResidueInt {
public:
    ResidueInt(Integer value, Integer modulus);

    const Integer& value() const noexcept { return value_; }
    const Integer& modulus() const noexcept { return modulus_; }

    bool is_unit() const;
    ResidueInt inverse() const;

    friend ResidueInt operator+(const ResidueInt& a, const ResidueInt& b);
    friend ResidueInt operator-(const ResidueInt& a, const ResidueInt& b);
    friend ResidueInt operator*(const ResidueInt& a, const ResidueInt& b);
    ResidueInt operator-() const;

    friend bool operator==(const ResidueInt& a, const ResidueInt& b) {
        return a.modulus_ == b.modulus_ && a.value_ == b.value_;
    }

private:
    Integer value_;
    Integer modulus_;
};

std::string to_string(const ResidueInt& value);

}  // namespace isolattice
