#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace gradcode {

using BigInt = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline BigInt rat_num(const Rat& r) { return boost::multiprecision::numerator(r); }
inline BigInt rat_den(const Rat& r) { return boost::multiprecision::denominator(r); }

BigInt rat_floor(const Rat& r);
BigInt rat_ceil(const Rat& r);

// "p/q", "p", or a decimal literal like "0.87" (parsed exactly as 87/100).
Rat parse_rational(const std::string& text);

// "p" when the denominator is 1, "p/q" otherwise.
std::string rat_str(const Rat& r);

double rat_double(const Rat& r);

// C(n, k); zero outside 0 <= k <= n.
BigInt binomial(long long n, long long k);

// C(n, k) guaranteed to fit a long long (throws ConfigError otherwise).
long long binomial_ll(long long n, long long k);

}  // namespace gradcode
