#include "delone/lattice.hpp"

#include <algorithm>
#include <string>

namespace delone {

LatticePoint::LatticePoint(int dim) : dim_(dim) {
    if (dim < 1 || dim > kMaxDim) throw UsageError("dimension " + std::to_string(dim) + " out of range");
}

LatticePoint::LatticePoint(std::initializer_list<long long> coords)
    : LatticePoint(static_cast<int>(coords.size())) {
    size_t i = 0;
    for (long long v : coords) c_[i++] = v;
}

LatticePoint LatticePoint::filled(int dim, Int value) {
    LatticePoint p(dim);
    for (int i = 0; i < dim; ++i) p[i] = value;
    return p;
}

LatticePoint LatticePoint::operator+(const LatticePoint& o) const {
    LatticePoint r(dim_);
    for (int i = 0; i < dim_; ++i) r[i] = checked_add((*this)[i], o[i]);
    return r;
}

LatticePoint LatticePoint::operator-(const LatticePoint& o) const {
    LatticePoint r(dim_);
    for (int i = 0; i < dim_; ++i) r[i] = checked_sub((*this)[i], o[i]);
    return r;
}

bool LatticePoint::operator==(const LatticePoint& o) const {
    return dim_ == o.dim_ && std::equal(c_.begin(), c_.begin() + dim_, o.c_.begin());
}

bool LatticePoint::operator<(const LatticePoint& o) const {
    return std::lexicographical_compare(c_.begin(), c_.begin() + dim_, o.c_.begin(), o.c_.begin() + o.dim_);
}

bool CubicSet::contains(const LatticePoint& x) const {
    for (int i = 0; i < dim(); ++i) {
        if (x[i] < base[i] || x[i] - base[i] >= side) return false;
    }
    return true;
}

bool CubicSet::contains(const CubicSet& other) const {
    return contains(other.base) && contains(maximal_corner(other));
}

LatticePoint maximal_corner(const CubicSet& s) {
    return s.base + LatticePoint::filled(s.dim(), s.side - 1);
}

std::vector<CubicSet> natural_partition(const CubicSet& s, Int r) {
    if (r <= 0 || s.side % r != 0)
        throw DivisibilityError(to_string(r) + " does not divide sidelength " + to_string(s.side));
    const int d = s.dim();
    const Int per_axis = s.side / r;
    Int count = checked_pow(per_axis, d);
    if (count > (Int{1} << 26)) throw CapacityError("natural partition with " + to_string(count) + " members");

    std::vector<CubicSet> out;
    out.reserve(static_cast<size_t>(count));
    std::array<Int, kMaxDim> idx{};
    for (Int n = 0; n < count; ++n) {
        CubicSet c{LatticePoint(d), r};
        for (int i = 0; i < d; ++i) c.base[i] = s.base[i] + idx[static_cast<size_t>(i)] * r;
        out.push_back(c);
        // Increment with the last coordinate fastest.
        for (int i = d - 1; i >= 0; --i) {
            if (++idx[static_cast<size_t>(i)] < per_axis) break;
            idx[static_cast<size_t>(i)] = 0;
        }
    }
    return out;
}

Located locate(const CubicSet& s, Int r, const LatticePoint& x) {
    if (r <= 0 || s.side % r != 0)
        throw DivisibilityError(to_string(r) + " does not divide sidelength " + to_string(s.side));
    if (!s.contains(x)) throw RangeError("point outside cubic set");
    const Int per_axis = s.side / r;
    Located loc{0, CubicSet{LatticePoint(s.dim()), r}};
    for (int i = 0; i < s.dim(); ++i) {
        Int m = (x[i] - s.base[i]) / r;
        loc.index = checked_add(checked_mul(loc.index, per_axis), m);
        loc.subcube.base[i] = s.base[i] + m * r;
    }
    loc.index += 1;
    return loc;
}

std::vector<LatticePoint> lattice_ball(std::span<const Rational> center, const Rational& radius) {
    if (radius <= 0) throw UsageError("ball radius must be positive");
    const int d = static_cast<int>(center.size());
    const Rational r2 = radius * radius;
    std::array<Int, kMaxDim> lo{}, hi{};
    for (int i = 0; i < d; ++i) {
        Rational a = center[i] - radius;
        Rational b = center[i] + radius;
        // floor / ceil of rationals via integer division on numerator/denominator.
        BigInt fa = numerator(a) / denominator(a);
        if (fa * denominator(a) > numerator(a)) fa -= 1;
        BigInt cb = numerator(b) / denominator(b);
        if (cb * denominator(b) < numerator(b)) cb += 1;
        lo[static_cast<size_t>(i)] = static_cast<long long>(fa);
        hi[static_cast<size_t>(i)] = static_cast<long long>(cb);
    }
    std::vector<LatticePoint> out;
    LatticePoint z(d);
    for (int i = 0; i < d; ++i) z[i] = lo[static_cast<size_t>(i)];
    while (true) {
        Rational dist2 = 0;
        for (int i = 0; i < d; ++i) {
            Rational diff = Rational(static_cast<long long>(z[i])) - center[i];
            dist2 += diff * diff;
        }
        if (dist2 < r2) out.push_back(z);
        int i = d - 1;
        for (; i >= 0; --i) {
            if (++z[i] <= hi[static_cast<size_t>(i)]) break;
            z[i] = lo[static_cast<size_t>(i)];
        }
        if (i < 0) break;
    }
    return out;
}

bool Box::empty() const {
    for (int i = 0; i < dim(); ++i) {
        if (!(lo[static_cast<size_t>(i)] < hi[static_cast<size_t>(i)])) return true;
    }
    return dim() == 0;
}

Dyadic Box::volume() const {
    if (empty()) return Dyadic(0);
    Dyadic v(1);
    for (int i = 0; i < dim(); ++i) v = v * (hi[static_cast<size_t>(i)] - lo[static_cast<size_t>(i)]);
    return v;
}

Rational parse_rational(const std::string& text) {
    auto slash = text.find('/');
    if (slash != std::string::npos) {
        Rational q(BigInt(text.substr(0, slash)), BigInt(text.substr(slash + 1)));
        return q;
    }
    auto dot = text.find('.');
    if (dot == std::string::npos) return Rational(BigInt(text));
    std::string whole = text.substr(0, dot);
    std::string frac = text.substr(dot + 1);
    bool neg = !whole.empty() && whole[0] == '-';
    if (whole.empty() || whole == "-" || whole == "+") whole += "0";
    BigInt n(whole + frac);
    BigInt den = 1;
    for (size_t i = 0; i < frac.size(); ++i) den *= 10;
    if (neg && n > 0) n = -n;
    return Rational(n, den);
}

}  // namespace delone
