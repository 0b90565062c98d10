#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace nld {

using Integer = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;

/// Parses "p", "-p" or "p/q".
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);
std::string to_string(const Integer& z);

Integer gcd(const Integer& a, const Integer& b);
Integer lcm(const Integer& a, const Integer& b);

/// Divides an integer vector by the gcd of its entries (no-op for the zero vector).
void reduce_by_gcd(std::span<Integer> v);

/// Scales a rational vector by a positive factor so that every entry is an integer
/// and the entries share no common factor.
std::vector<Integer> to_primitive_integers(std::span<const Rational> v);

inline Integer numerator_of(const Rational& q) { return boost::multiprecision::numerator(q); }
inline Integer denominator_of(const Rational& q) { return boost::multiprecision::denominator(q); }

/// Rank of an integer matrix given row-wise, computed exactly (fraction-free elimination).
std::size_t exact_rank(std::vector<std::vector<Integer>> rows);

}  // namespace nld
