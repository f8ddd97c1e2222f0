#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "delone/bignum.hpp"
#include "delone/dyadic.hpp"
#include "delone/int128.hpp"

namespace delone {

inline constexpr int kMaxDim = 8;

// Point of Z^d. Coordinates beyond dim() are zero.
class LatticePoint {
public:
    LatticePoint() = default;
    explicit LatticePoint(int dim);
    LatticePoint(std::initializer_list<long long> coords);
    static LatticePoint filled(int dim, Int value);

    int dim() const { return dim_; }
    Int& operator[](int i) { return c_[static_cast<size_t>(i)]; }
    Int operator[](int i) const { return c_[static_cast<size_t>(i)]; }

    LatticePoint operator+(const LatticePoint& o) const;
    LatticePoint operator-(const LatticePoint& o) const;
    bool operator==(const LatticePoint& o) const;
    bool operator<(const LatticePoint& o) const;  // lexicographic

private:
    std::array<Int, kMaxDim> c_{};
    int dim_ = 0;
};

struct CubicSet {
    LatticePoint base;
    Int side = 1;

    int dim() const { return base.dim(); }
    bool contains(const LatticePoint& x) const;
    bool contains(const CubicSet& other) const;
    bool operator==(const CubicSet& o) const { return base == o.base && side == o.side; }
};

LatticePoint maximal_corner(const CubicSet& s);

// The r-natural partition, lexicographic in the sub-cube multi-index with the
// first coordinate most significant.
std::vector<CubicSet> natural_partition(const CubicSet& s, Int r);

struct Located {
    Int index;  // 1-based position in natural_partition(s, r)
    CubicSet subcube;
};

Located locate(const CubicSet& s, Int r, const LatticePoint& x);

// All z in Z^d with |z - center| < radius (open Euclidean ball).
std::vector<LatticePoint> lattice_ball(std::span<const Rational> center, const Rational& radius);

// Axis-aligned box [lo, hi) with dyadic corners.
struct Box {
    std::vector<Dyadic> lo;
    std::vector<Dyadic> hi;

    int dim() const { return static_cast<int>(lo.size()); }
    bool empty() const;
    Dyadic volume() const;
};

}  // namespace delone
