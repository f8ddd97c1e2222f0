#pragma once

#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "delone/int128.hpp"

namespace delone {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigInt to_big(Int v) {
    bool neg = v < 0;
    unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(v + 1)) + 1 : static_cast<unsigned __int128>(v);
    BigInt r = static_cast<unsigned long long>(u >> 64);
    r <<= 64;
    r += static_cast<unsigned long long>(u & 0xFFFFFFFFFFFFFFFFULL);
    return neg ? BigInt(-r) : r;
}

inline BigInt big_pow2(long long k) { return BigInt(1) << static_cast<unsigned>(k); }

// "a/b" for rationals, decimal for integers.
inline std::string to_string(const Rational& q) { return q.str(); }

Rational parse_rational(const std::string& text);

}  // namespace delone
