#ifndef EPSLOG_RATIONAL_HPP
#define EPSLOG_RATIONAL_HPP

#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace epslog {

// All arithmetic in this library is exact. Rat is always kept in canonical
// form (gcd-reduced, positive denominator) by the backend.
using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

// Parses "p" or "p/q" with q > 0. Throws std::invalid_argument on anything
// else (decimals are rejected on purpose: no silent rounding).
Rat parse_rat(const std::string& text);

// Renders as "p" when q == 1, otherwise "p/q".
std::string rat_to_string(const Rat& r);

}  // namespace epslog

#endif  // EPSLOG_RATIONAL_HPP
