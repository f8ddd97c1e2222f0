#include "delone/dyadic.hpp"

#include <algorithm>
#include <cmath>

namespace delone {

std::string to_string(Int v) {
    if (v == 0) return "0";
    bool neg = v < 0;
    // Work in unsigned space so the minimum value does not overflow.
    unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(v + 1)) + 1 : static_cast<unsigned __int128>(v);
    std::string out;
    while (u > 0) {
        out.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
        u /= 10;
    }
    if (neg) out.push_back('-');
    std::reverse(out.begin(), out.end());
    return out;
}

Int parse_int(const std::string& s) {
    if (s.empty()) throw UsageError("empty integer literal");
    size_t i = 0;
    bool neg = false;
    if (s[0] == '-' || s[0] == '+') {
        neg = s[0] == '-';
        i = 1;
    }
    if (i == s.size()) throw UsageError("bad integer literal '" + s + "'");
    Int v = 0;
    for (; i < s.size(); ++i) {
        if (s[i] < '0' || s[i] > '9') throw UsageError("bad integer literal '" + s + "'");
        v = checked_add(checked_mul(v, 10), s[i] - '0');
    }
    return neg ? -v : v;
}

Dyadic::Dyadic(Int num, int exp) : num_(num), exp_(exp) {
    if (exp < 0) {
        num_ = checked_mul(num, pow2(-exp));
        exp_ = 0;
    }
    normalize();
}

void Dyadic::normalize() {
    if (num_ == 0) {
        exp_ = 0;
        return;
    }
    while (exp_ > 0 && (num_ & 1) == 0) {
        num_ /= 2;
        --exp_;
    }
}

Dyadic Dyadic::parse(const std::string& text) {
    auto slash = text.find('/');
    if (slash != std::string::npos) {
        Int num = parse_int(text.substr(0, slash));
        Int den = parse_int(text.substr(slash + 1));
        if (den <= 0 || (den & (den - 1)) != 0)
            throw UsageError("'" + text + "' is not a dyadic rational");
        int e = 0;
        while ((Int{1} << e) != den) ++e;
        return Dyadic(num, e);
    }
    auto dot = text.find('.');
    if (dot == std::string::npos) return Dyadic(parse_int(text));
    std::string frac = text.substr(dot + 1);
    std::string whole = text.substr(0, dot);
    bool neg = !whole.empty() && whole[0] == '-';
    if (whole.empty() || whole == "-" || whole == "+") whole += "0";
    Int n = parse_int(whole + frac);
    if (neg && n > 0) n = -n;
    int len = static_cast<int>(frac.size());
    Int five = checked_pow(5, len);
    if (n % five != 0) throw UsageError("'" + text + "' is not a dyadic rational");
    return Dyadic(n / five, len);
}

Dyadic Dyadic::operator+(const Dyadic& o) const {
    int e = std::max(exp_, o.exp_);
    Int a = checked_mul(num_, pow2(e - exp_));
    Int b = checked_mul(o.num_, pow2(e - o.exp_));
    return Dyadic(checked_add(a, b), e);
}

Dyadic Dyadic::operator-(const Dyadic& o) const { return *this + (-o); }

Dyadic Dyadic::operator*(const Dyadic& o) const {
    return Dyadic(checked_mul(num_, o.num_), exp_ + o.exp_);
}

std::strong_ordering Dyadic::operator<=>(const Dyadic& o) const {
    Int diff = (*this - o).num_;
    if (diff < 0) return std::strong_ordering::less;
    if (diff > 0) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

Int Dyadic::floor() const { return exp_ == 0 ? num_ : floor_div(num_, pow2(exp_)); }

Int Dyadic::ceil() const { return -Dyadic(-num_, exp_).floor(); }

long double Dyadic::to_long_double() const {
    return std::ldexp(static_cast<long double>(num_), -exp_);
}

std::string Dyadic::to_decimal() const {
    if (exp_ == 0) return to_string(num_);
    bool neg = num_ < 0;
    Int a = neg ? -num_ : num_;
    Int whole = a >> exp_;
    Int frac = a - (whole << exp_);
    // frac / 2^exp == frac * 5^exp / 10^exp; emit digit by digit to stay in range.
    std::string digits;
    while (frac != 0) {
        frac = checked_mul(frac, 10);
        digits.push_back(static_cast<char>('0' + static_cast<int>(frac >> exp_)));
        frac &= (Int{1} << exp_) - 1;
    }
    return (neg ? "-" : "") + to_string(whole) + "." + digits;
}

}  // namespace delone
