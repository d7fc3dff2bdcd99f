#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace atm {

using BigInt = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

// Parses "3", "-0.25", "1e-3", "7/100" into an exact rational.
Rat rat_from_text(const std::string& text);

// "7/100" for non-integers, "5" for integers.
std::string rat_to_text(const Rat& r);

// Decimal rendering with `sig` significant digits, trailing zeros trimmed.
std::string rat_to_decimal(const Rat& r, int sig = 6);

}  // namespace atm
