#include "delone/psi.hpp"

#include <algorithm>

namespace delone {

namespace {

constexpr Int kCopyCells = Int{1} << 22;

struct Range {
    LatticePoint lo, hi;  // inclusive lo, exclusive hi
    bool empty() const {
        for (int i = 0; i < lo.dim(); ++i)
            if (hi[i] <= lo[i]) return true;
        return false;
    }
};

Range intersect(const CubicSet& a, const CubicSet& b) {
    Range r{LatticePoint(a.dim()), LatticePoint(a.dim())};
    for (int i = 0; i < a.dim(); ++i) {
        r.lo[i] = std::max(a.base[i], b.base[i]);
        r.hi[i] = std::min(a.base[i] + a.side, b.base[i] + b.side);
    }
    return r;
}

template <class F>
void for_each_point(const Range& r, F&& f) {
    if (r.empty()) return;
    const int d = r.lo.dim();
    LatticePoint x = r.lo;
    while (true) {
        f(x);
        int i = d - 1;
        for (; i >= 0; --i) {
            if (++x[i] < r.hi[i]) break;
            x[i] = r.lo[i];
        }
        if (i < 0) return;
    }
}

}  // namespace

PsiField::PsiField(std::shared_ptr<PaletteEngine> engine, Int window_cap)
    : engine_(std::move(engine)), window_cap_(window_cap) {
    if (!engine_) throw UsageError("psi field needs a palette engine");
}

LatticePoint PsiField::shift(int n) const {
    if (n < 1 || n > max_cover_level())
        throw RangeError("shift level " + std::to_string(n) + " outside 1.." + std::to_string(max_cover_level()));
    Int total = 0;
    for (int j = 1; j < n; ++j) total = checked_add(total, pow2(schedule().p(j)));
    return LatticePoint::filled(d(), -total);
}

CubicSet PsiField::cover_block(int n) const {
    return CubicSet{shift(n), pow2(schedule().p(n - 1) + 1)};
}

int PsiField::minimal_cover_level(const LatticePoint& x) const {
    for (int n = 1; n <= max_cover_level(); ++n)
        if (cover_block(n).contains(x)) return n;
    throw CoverageError("point outside every built block; needs level " + std::to_string(max_cover_level() + 1) +
                        " or beyond");
}

std::uint8_t PsiField::psi_at_level(const LatticePoint& x, int m) const {
    if (m > max_psi_level())
        throw CoverageError("Psi on block " + std::to_string(m) + " needs palette level " + std::to_string(m + 1) +
                            ", built through " + std::to_string(engine_->top_level()));
    if (!cover_block(m).contains(x)) throw CoverageError("point outside block " + std::to_string(m));
    return engine_->eval_colour({m + 1, 1}, x - shift(m));
}

std::uint8_t PsiField::psi(const LatticePoint& x) const { return psi_at_level(x, minimal_cover_level(x)); }

void PsiField::fill(Grid& out, const CubicSet& window, int n, long long j, const LatticePoint& origin,
                    const CubicSet& clip) const {
    const CubicSet domain{origin, engine_->domain_side(n)};
    Range r = intersect(window, clip);
    Range dr = intersect(window, domain);
    for (int i = 0; i < d(); ++i) {
        r.lo[i] = std::max(r.lo[i], dr.lo[i]);
        r.hi[i] = std::min(r.hi[i], dr.hi[i]);
    }
    if (r.empty()) return;

    if (engine_->materializable(n) && checked_pow(domain.side, d()) <= kCopyCells) {
        const Grid& g = engine_->materialize_level(n)[static_cast<size_t>(j - 1)];
        for_each_point(r, [&](const LatticePoint& x) { out.at(x - window.base) = g.at(x - origin); });
        return;
    }
    const Int T = pow2(schedule().p(n - 2));
    Range tiles{LatticePoint(d()), LatticePoint(d())};
    for (int i = 0; i < d(); ++i) {
        tiles.lo[i] = floor_div(r.lo[i] - origin[i], T);
        tiles.hi[i] = floor_div(r.hi[i] - 1 - origin[i], T) + 1;
    }
    for_each_point(tiles, [&](const LatticePoint& m) {
        TileAddress tile = engine_->tile_at(n, m);
        long long child = engine_->child_colour(j, tile);
        LatticePoint sub = origin;
        for (int i = 0; i < d(); ++i) sub[i] += m[i] * T;
        fill(out, window, n - 1, child, sub, clip);
    });
}

Grid PsiField::psi_window(const CubicSet& box) const {
    if (box.side < 1) throw UsageError("window side must be positive");
    if (checked_pow(box.side, d()) > window_cap_)
        throw CapacityError("window of " + to_string(checked_pow(box.side, d())) + " cells exceeds cap " +
                            to_string(window_cap_));
    int top = 0;
    for (int n = 1; n <= max_cover_level() && top == 0; ++n)
        if (cover_block(n).contains(box)) top = n;
    if (top == 0 || top > max_psi_level())
        throw CoverageError("window not covered by a readable block (largest is block " +
                            std::to_string(max_psi_level()) + ")");
    Grid out(d(), static_cast<long long>(box.side));
    // Coarse to fine: inner blocks overwrite with their own (minimal) level.
    for (int n = top; n >= 1; --n) fill(out, box, n + 1, 1, shift(n), cover_block(n));
    return out;
}

CubicSet PsiField::locate_colour_patch(int n, long long j) const {
    if (n < 1 || n + 2 > engine_->top_level())
        throw CapacityError("colour patches of level " + std::to_string(n) + " need palette level " +
                            std::to_string(n + 2));
    const long long c = schedule().c(n);
    if (j < 1 || j > c) throw RangeError("colour index out of range");
    // First tuple component is j exactly when i - 1 lies in [(j-1) c^{D-1}, j c^{D-1}).
    const Int i = static_cast<Int>(j - 1) * checked_pow(c, schedule().D() - 1) + 1;
    CubicSet block = strip_block(schedule(), n, i);
    CubicSet patch{block.base + shift(n + 1), pow2(schedule().p(n - 1))};
    return patch;
}

std::vector<NestingCheck> nesting_checks(const PsiField& field) {
    std::vector<NestingCheck> out;
    const auto& s = field.schedule();
    for (int n = 1; n <= field.max_cover_level(); ++n) {
        NestingCheck c;
        c.level = n;
        CubicSet here = field.cover_block(n);
        if (n < field.max_cover_level()) c.contained = field.cover_block(n + 1).contains(here);
        Int reach = here.base[0] + here.side;  // -sum 2^{p_j} + 2^{p_{n-1}+1}
        c.growth = checked_mul(3, reach) >= checked_mul(2, pow2(s.p(n - 1)));
        c.detail = "block " + std::to_string(n) + " = " + to_string(here.base[0]) + " + [0," + to_string(here.side) +
                   ")^d, reach " + to_string(reach);
        out.push_back(c);
    }
    return out;
}

}  // namespace delone
