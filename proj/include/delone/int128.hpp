#pragma once

#include <cstdint>
#include <string>

#include "delone/errors.hpp"

namespace delone {

// Lattice coordinates and cube sizes. Every operation that can grow a value
// goes through the checked helpers below; overflow is a CapacityError.
using Int = __int128;

inline constexpr int kIntBits = 127;

inline Int checked_add(Int a, Int b) {
    Int r;
    if (__builtin_add_overflow(a, b, &r)) throw CapacityError("128-bit overflow in addition");
    return r;
}

inline Int checked_sub(Int a, Int b) {
    Int r;
    if (__builtin_sub_overflow(a, b, &r)) throw CapacityError("128-bit overflow in subtraction");
    return r;
}

inline Int checked_mul(Int a, Int b) {
    Int r;
    if (__builtin_mul_overflow(a, b, &r)) throw CapacityError("128-bit overflow in multiplication");
    return r;
}

inline Int pow2(long long k) {
    if (k < 0 || k >= 126) throw CapacityError("2^" + std::to_string(k) + " exceeds the coordinate width");
    return Int{1} << k;
}

inline Int checked_pow(Int base, long long e) {
    Int r = 1;
    for (long long i = 0; i < e; ++i) r = checked_mul(r, base);
    return r;
}

// Floor division, correct for negative numerators.
inline Int floor_div(Int a, Int b) {
    Int q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

inline Int floor_mod(Int a, Int b) { return a - floor_div(a, b) * b; }

std::string to_string(Int v);
Int parse_int(const std::string& s);

}  // namespace delone
