#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "delone/lattice.hpp"

namespace delone {

// Dense d-dimensional cube of colour values, row-major with the first
// coordinate most significant (the natural-partition order).
struct Grid {
    int d = 2;
    long long side = 0;
    std::vector<std::uint8_t> values;

    Grid() = default;
    Grid(int dim, long long s);

    size_t index(const LatticePoint& local) const;
    std::uint8_t at(const LatticePoint& local) const { return values[index(local)]; }
    std::uint8_t& at(const LatticePoint& local) { return values[index(local)]; }
    LatticePoint point(size_t linear) const;
    size_t cells() const { return values.size(); }

    bool operator==(const Grid&) const = default;
};

// Binary PGM (P5) or ASCII (P2); colour 1 maps to 0, colour 2 to 255. For
// d > 2 the slice x_3 = ... = x_d = 0 is written. The x_2 axis points up.
// A non-empty comment is written as a "# ..." header line.
void write_pgm(const Grid& grid, const std::string& path, bool ascii = false, const std::string& comment = "");
std::string pgm_bytes(const Grid& grid, bool ascii = false, const std::string& comment = "");

}  // namespace delone
