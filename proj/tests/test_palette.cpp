#include <doctest.h>

#include <random>

#include "delone/palette.hpp"

using namespace delone;

namespace {

LevelSchedule sched2() { return LevelSchedule(2, {0, 5, 10, 15}, {2, 2, 2}, false); }
LevelSchedule sched3() { return LevelSchedule(2, {0, 8, 16, 24}, {3, 3, 3}, true); }
// more colours, so M-vectors have interior entries
LevelSchedule wide() { return LevelSchedule(2, {0, 8, 19, 31}, {3, 5, 6}, true); }

std::vector<std::vector<long long>> all_tuples(long long c, int D) {
    std::vector<std::vector<long long>> out;
    std::vector<long long> t(static_cast<size_t>(D), 1);
    while (true) {
        out.push_back(t);
        int k = D - 1;
        while (k >= 0 && t[static_cast<size_t>(k)] == c) t[static_cast<size_t>(k--)] = 1;
        if (k < 0) return out;
        ++t[static_cast<size_t>(k)];
    }
}

BigInt grid_sum(const Grid& g) {
    BigInt s = 0;
    for (auto v : g.values) s += v;
    return s;
}

// h_1 = 1, h_l from the derived quantities above
Rational staircase_bound(const LevelSchedule& s, int m) {
    BigInt prod = 1;
    for (int l = 2; l <= m; ++l) prod *= derive_level(s, l).h;
    return Rational(prod, big_pow2(static_cast<long long>(s.d()) * s.p(m - 1)));
}

}  // namespace

TEST_CASE("base palette") {
    CHECK(PaletteEngine::base_colour(1) == 1);
    CHECK(PaletteEngine::base_colour(2) == 2);
    CHECK(PaletteEngine::base_colour(3) == 1);
    PaletteEngine e(sched3(), DensityFn::constant(1.5));
    CHECK(e.shade({1, 1}) == 1);
    CHECK(e.shade({1, 2}) == 2);
    for (long long j = 1; j <= 3; ++j) CHECK(e.eval_colour({1, j}, LatticePoint{0, 0}) == PaletteEngine::base_colour(j));
}

TEST_CASE("lexicographic tuples") {
    PaletteEngine e2(sched2(), DensityFn::constant(1.5));
    CHECK(e2.a_tuple(1, 1) == std::vector<long long>{1, 1, 1, 1});
    CHECK(e2.a_tuple(1, 16) == std::vector<long long>{2, 2, 2, 2});
    PaletteEngine e3(sched3(), DensityFn::constant(1.5));
    CHECK(e3.a_tuple(1, 5) == std::vector<long long>{1, 1, 2, 2});
    auto want = all_tuples(3, 4);
    REQUIRE(want.size() == 81);
    for (size_t i = 0; i < want.size(); ++i) CHECK(e3.a_tuple(1, static_cast<Int>(i + 1)) == want[i]);
    CHECK_THROWS_AS(e3.a_tuple(1, 82), RangeError);
}

TEST_CASE("kept tile ordinals") {
    PaletteEngine e(sched3(), DensityFn::constant(1.5));
    for (int n : {2, 3}) {
        const long long per_axis = 256;
        const long long strip_x = 2 * 81;
        Int ordinal = 0;
        for (long long a = 0; a < per_axis; ++a)
            for (long long b = 0; b < per_axis; ++b) {
                bool strip = a < strip_x && b < 2;
                auto t = e.tile_at(n, LatticePoint{a, b});
                CHECK(t.strip == strip);
                if (!strip) {
                    ++ordinal;
                    if (t.ordinal != ordinal) FAIL_CHECK("ordinal mismatch at tile (", a, ",", b, ")");
                }
            }
        CHECK(ordinal == e.kept_tiles(n));
        CHECK(e.kept_tiles(n) == 65212);
    }
}

TEST_CASE("M-vectors") {
    PaletteEngine e(wide(), DensityFn::constant(1.5));
    auto s = wide();
    for (int n : {2, 3}) {
        auto dl = derive_level(s, n);
        const long long cp = s.c(n - 1), cn = s.c(n);
        const Int t = e.kept_tiles(n);
        CHECK(BigInt(static_cast<long long>(t)) == dl.t);
        std::vector<long long> prev;
        BigInt prev_sum = 0;
        for (long long i = 1; i <= cn - 1; ++i) {
            BigInt target = dl.t + BigInt(std::min<long long>(i - 1, dl.alpha)) * (dl.h - 1) +
                            BigInt(std::max<long long>(i - 1 - dl.alpha, 0)) * dl.h;
            CHECK(BigInt(static_cast<long long>(e.m_target_sum(n, i))) == target);
            BigInt sum = 0;
            std::vector<long long> cur;
            cur.reserve(static_cast<size_t>(t));
            for (Int k = 1; k <= t; ++k) {
                long long v = e.m_entry(n, i, k);
                cur.push_back(v);
                sum += v;
            }
            CHECK(sum == target);
            bool in_range = true, monotone = true;
            for (size_t k = 0; k < cur.size(); ++k) {
                in_range = in_range && cur[k] >= 1 && cur[k] <= cp - 1;
                if (!prev.empty()) monotone = monotone && cur[k] >= prev[k];
            }
            CHECK(in_range);
            CHECK(monotone);
            if (i == 1) CHECK(sum == dl.t);
            if (i == cn - 1) CHECK(sum == dl.t * (cp - 1));
            if (i > 1) {
                BigInt step = sum - prev_sum;
                CHECK((step == dl.h || step == dl.h - 1));
            }
            prev = std::move(cur);
            prev_sum = sum;
        }
    }
}

TEST_CASE("materialize agrees with descent everywhere") {
    {
        PaletteEngine e(sched2(), DensityFn::constant(1.5));
        for (int n = 1; n <= 3; ++n) {
            REQUIRE(e.materializable(n));
            for (long long j = 1; j <= e.colours(n); ++j) {
                Grid g = e.materialize({n, j});
                CHECK(g.side == static_cast<long long>(e.domain_side(n)));
                long long bad = 0;
                for (size_t lin = 0; lin < g.cells(); ++lin)
                    if (e.eval_colour({n, j}, g.point(lin)) != g.values[lin]) ++bad;
                CHECK(bad == 0);
                CHECK(grid_sum(g) == e.shade_sum({n, j}));
            }
        }
    }
    {
        PaletteEngine e(sched3(), DensityFn::checkerboard(3));
        for (int n = 1; n <= 2; ++n)
            for (long long j = 1; j <= e.colours(n); ++j) {
                Grid g = e.materialize({n, j});
                long long bad = 0;
                for (size_t lin = 0; lin < g.cells(); ++lin)
                    if (e.eval_colour({n, j}, g.point(lin)) != g.values[lin]) ++bad;
                CHECK(bad == 0);
                CHECK(grid_sum(g) == e.shade_sum({n, j}));
            }
        CHECK_FALSE(e.materializable(3));
    }
}

TEST_CASE("descent examples") {
    PaletteEngine e(sched3(), DensityFn::constant(1.5));
    for (int n = 2; n <= 4; ++n)
        for (long long j = 1; j <= e.colours(n); ++j) CHECK(e.eval_colour({n, j}, LatticePoint(2)) == 1);
    for (long long j = 1; j <= 3; ++j) CHECK(e.eval_colour({2, j}, LatticePoint{160, 0}) == 1);
    // first kept tile of colour 1 is colour 1 below
    auto first = e.tile_at(2, LatticePoint{0, 2});
    CHECK(first.ordinal == 1);
    CHECK(e.eval_colour({2, 1}, LatticePoint{0, 2}) == 1);
    CHECK_THROWS_AS(e.eval_colour({2, 1}, LatticePoint{256, 0}), RangeError);
    CHECK_THROWS_AS(e.eval_colour({2, 4}, LatticePoint{0, 0}), RangeError);

    // strip points read the same in every colour
    std::mt19937_64 rng(7);
    for (int n = 2; n <= 3; ++n) {
        long long tile = n == 2 ? 1 : 256;
        for (int s = 0; s < 500; ++s) {
            LatticePoint x{static_cast<long long>(rng() % static_cast<std::uint64_t>(2 * 81 * tile)),
                           static_cast<long long>(rng() % static_cast<std::uint64_t>(2 * tile))};
            std::uint8_t v = e.eval_colour({n, 1}, x);
            for (long long j = 2; j <= 3; ++j) CHECK(e.eval_colour({n, j}, x) == v);
        }
    }
}

TEST_CASE("strip sum counts each colour D c^{D-1} times") {
    auto tuples = all_tuples(2, 4);
    std::vector<long long> count(3, 0);
    for (const auto& t : tuples)
        for (auto v : t) ++count[static_cast<size_t>(v)];
    CHECK(count[1] == 32);
    CHECK(count[2] == 32);

    PaletteEngine e(sched2(), DensityFn::constant(1.5));
    for (int n = 2; n <= 3; ++n) {
        Grid g = e.materialize({n, 1});
        const long long T = static_cast<long long>(Int{1} << sched2().p(n - 2));
        BigInt strip = 0;
        for (long long a = 0; a < 2 * 16 * T; ++a)
            for (long long b = 0; b < 2 * T; ++b) strip += g.at(LatticePoint{a, b});
        CHECK(strip == e.strip_sum(n));
    }
}

TEST_CASE("shade staircase") {
    auto s = sched3();
    PaletteEngine e(s, DensityFn::constant(1.5));
    for (int m = 2; m <= 3; ++m) {
        Rational bound = staircase_bound(s, m);
        for (long long i = 2; i <= s.c(m) - 1; ++i)
            CHECK(e.shade({m, i}) - e.shade({m, i - 1}) <= bound);
        CHECK(e.shade({m, 1}) <= Rational(4, 3));
        CHECK(e.shade({m, s.c(m) - 1}) >= Rational(5, 3));
        Rational sum = strip_mass_prefix(s, m - 1);
        CHECK(e.shade({m, 1}) <= 1 + sum);
        CHECK(e.shade({m, s.c(m) - 1}) >= 2 - sum);
    }
}

TEST_CASE("alpha picks the nearest shade") {
    auto s = sched3();
    for (double rho : {4.0 / 3.0, 1.5, 5.0 / 3.0}) {
        PaletteEngine e(s, DensityFn::constant(rho));
        // level-3 tiles choose among level-2 shades
        Rational b1 = e.shade({2, 1}), b2 = e.shade({2, 2});
        long double g1 = std::fabs(b1.convert_to<long double>() - rho);
        long double g2 = std::fabs(b2.convert_to<long double>() - rho);
        long long expect = g2 < g1 ? 2 : 1;
        auto tile = e.tile_at(3, LatticePoint{200, 100});
        CHECK(e.alpha_for_tile(tile) == expect);
    }
    PaletteEngine e(s, DensityFn::constant(1.5));
    CHECK_THROWS_AS(e.alpha_for_tile(e.tile_at(2, LatticePoint{0, 0})), UsageError);
}

TEST_CASE("goodness") {
    PaletteEngine e2(sched2(), DensityFn::constant(1.5));
    CHECK(e2.check_goodness(2).pass());
    CHECK(e2.check_goodness(3).pass());
    PaletteEngine e3(sched3(), DensityFn::affine(1.2, 0.6));
    auto rep = e3.check_goodness(2);
    CHECK(rep.pass());
    CHECK(rep.tiles_checked == 65536);
    auto sampled = e3.check_goodness_sampled(3, 10000, 5);
    CHECK(sampled.pass());
    CHECK(sampled.points_checked >= 10000);

    // flip one cell of colour 1 in a kept tile (tiles of level 3 are 32 wide)
    std::vector<Grid> level = e2.materialize_level(3);
    level[0].at(LatticePoint{805, 900}) ^= 3;
    auto bad = PaletteEngine::check_goodness_grids(sched2(), 3, level, e2.materialize_level(2));
    CHECK_FALSE(bad.condition_a);
    CHECK(bad.condition_b);
    REQUIRE_FALSE(bad.failures.empty());
    CHECK(bad.failures.front().find("(800,896)") != std::string::npos);
}

TEST_CASE("caps") {
    PaletteOptions small;
    small.materialize_cap = 0;
    PaletteEngine e(sched2(), DensityFn::constant(1.5), small);
    CHECK_THROWS_AS(e.materialize({2, 1}), CapacityError);
    PaletteOptions tight;
    tight.alpha_budget = 1000;
    PaletteEngine f(sched3(), DensityFn::constant(1.5), tight);
    CHECK_THROWS_AS(f.shade_sum({2, 3}), CapacityError);
    CHECK_NOTHROW(f.shade_sum({2, 2}));
}
