#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace toricdef {

using Rational = mpq_class;
using Integer = mpz_class;

// Integer vectors: ray generators and lattice degrees.
using IntVec = std::vector<std::int64_t>;

// "num/den" with positive denominator, always carrying the slash.
std::string to_string(const Rational& q);

// Accepts "n", "n/d", optional leading sign; throws std::invalid_argument.
Rational parse_rational(std::string_view text);

std::int64_t dot(const IntVec& a, const IntVec& b);

std::string to_string(const IntVec& v);

}  // namespace toricdef
