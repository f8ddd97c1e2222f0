#pragma once

#include <compare>
#include <string>

#include "delone/int128.hpp"

namespace delone {

// Exact dyadic rational num / 2^exp, kept normalized (num odd or exp == 0).
class Dyadic {
public:
    Dyadic() = default;
    Dyadic(Int integer) : num_(integer) {}  // NOLINT(google-explicit-constructor)
    Dyadic(Int num, int exp);

    static Dyadic parse(const std::string& text);

    Int numerator() const { return num_; }
    int exponent() const { return exp_; }

    Dyadic operator+(const Dyadic& o) const;
    Dyadic operator-(const Dyadic& o) const;
    Dyadic operator-() const { return Dyadic(-num_, exp_); }
    Dyadic operator*(const Dyadic& o) const;

    std::strong_ordering operator<=>(const Dyadic& o) const;
    bool operator==(const Dyadic& o) const { return num_ == o.num_ && exp_ == o.exp_; }

    Int floor() const;
    Int ceil() const;
    long double to_long_double() const;
    double to_double() const { return static_cast<double>(to_long_double()); }

    // Exact decimal expansion; terminates because the denominator is 2^exp.
    std::string to_decimal() const;

private:
    void normalize();

    Int num_ = 0;
    int exp_ = 0;
};

}  // namespace delone
