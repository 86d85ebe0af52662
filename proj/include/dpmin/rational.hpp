#ifndef DPMIN_RATIONAL_HPP
#define DPMIN_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>

namespace dpmin {

// Exact arbitrary-precision rational.  Every semantic path in the library
// uses Rat; floating point appears only in diagnostic output (slope fits).
using Rat = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// Largest integer <= q.
BigInt rat_floor(const Rat& q);

// Smallest integer >= q.
BigInt rat_ceil(const Rat& q);

bool rat_is_integer(const Rat& q);

// Canonical text form: "p/q" with q > 1, otherwise just "p".
std::string rat_to_string(const Rat& q);

// Parses "p", "-p", "p/q" (q > 0).  Throws ParseError on malformed input.
Rat parse_rational(std::string_view text);

}  // namespace dpmin

#endif  // DPMIN_RATIONAL_HPP
