#include "delone/grid.hpp"

#include <fstream>

namespace delone {

Grid::Grid(int dim, long long s) : d(dim), side(s) {
    long double cells = 1;
    for (int i = 0; i < d; ++i) cells *= static_cast<long double>(s);
    if (cells > static_cast<long double>(1LL << 40)) throw CapacityError("grid too large");
    values.assign(static_cast<size_t>(cells), 0);
}

size_t Grid::index(const LatticePoint& local) const {
    size_t idx = 0;
    for (int i = 0; i < d; ++i) idx = idx * static_cast<size_t>(side) + static_cast<size_t>(local[i]);
    return idx;
}

LatticePoint Grid::point(size_t linear) const {
    LatticePoint p(d);
    for (int i = d - 1; i >= 0; --i) {
        p[i] = static_cast<long long>(linear % static_cast<size_t>(side));
        linear /= static_cast<size_t>(side);
    }
    return p;
}

std::string pgm_bytes(const Grid& grid, bool ascii, const std::string& comment) {
    const long long w = grid.side;
    const long long h = grid.d >= 2 ? grid.side : 1;
    std::string out = std::string(ascii ? "P2" : "P5") + "\n" +
                      (comment.empty() ? std::string() : "# " + comment + "\n") + std::to_string(w) + " " + std::to_string(h) + "\n255\n";
    LatticePoint p(grid.d);
    for (long long row = 0; row < h; ++row) {
        for (long long col = 0; col < w; ++col) {
            p[0] = col;
            if (grid.d >= 2) p[1] = h - 1 - row;
            unsigned char v = grid.at(p) == 2 ? 255 : 0;
            if (ascii) {
                out += std::to_string(v);
                out += (col + 1 == w) ? '\n' : ' ';
            } else {
                out.push_back(static_cast<char>(v));
            }
        }
    }
    return out;
}

void write_pgm(const Grid& grid, const std::string& path, bool ascii, const std::string& comment) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path + "'");
    out << pgm_bytes(grid, ascii, comment);
}

}  // namespace delone
