#include <doctest.h>

#include <random>

#include "delone/psi.hpp"

using namespace delone;

namespace {

std::shared_ptr<PaletteEngine> engine(LevelSchedule s) {
    return std::make_shared<PaletteEngine>(std::move(s), DensityFn::constant(1.5));
}

LevelSchedule sched2() { return LevelSchedule(2, {0, 5, 10, 15}, {2, 2, 2}, false); }
LevelSchedule sched3() { return LevelSchedule(2, {0, 8, 16, 24}, {3, 3, 3}, true); }

}  // namespace

TEST_CASE("shifts and blocks") {
    PsiField f(engine(sched3()));
    CHECK(f.shift(1) == LatticePoint{0, 0});
    CHECK(f.shift(2) == LatticePoint{-256, -256});
    CHECK(f.shift(3) == LatticePoint::filled(2, -(256 + 65536)));
    CHECK(f.cover_block(1) == CubicSet{LatticePoint{0, 0}, 2});
    CHECK(f.cover_block(2) == CubicSet{LatticePoint{-256, -256}, 512});

    PsiField g(engine(sched2()));
    CHECK(g.cover_block(2) == CubicSet{LatticePoint{-32, -32}, 64});
    CHECK(g.cover_block(3) == CubicSet{LatticePoint{-1056, -1056}, 2048});
    CHECK(g.max_cover_level() == 4);
    CHECK(g.max_psi_level() == 3);
}

TEST_CASE("minimal cover level") {
    PsiField f(engine(sched3()));
    CHECK(f.minimal_cover_level(LatticePoint{0, 0}) == 1);
    CHECK(f.minimal_cover_level(LatticePoint{1, 1}) == 1);
    CHECK(f.minimal_cover_level(LatticePoint{2, 2}) == 2);
    CHECK(f.minimal_cover_level(LatticePoint{-1, -1}) == 2);
    CHECK(f.minimal_cover_level(LatticePoint{255, -256}) == 2);
    CHECK(f.minimal_cover_level(LatticePoint{256, 0}) == 3);
    CHECK_THROWS_AS(f.minimal_cover_level(LatticePoint{Int{1} << 40, 0}), CoverageError);
}

TEST_CASE("psi at the origin and across levels") {
    for (auto s : {sched2(), sched3()}) {
        PsiField f(engine(s));
        CHECK(f.psi(LatticePoint{0, 0}) == 1);
        Grid one = f.psi_window(CubicSet{LatticePoint{0, 0}, 1});
        CHECK(one.values == std::vector<std::uint8_t>{1});
    }
    PsiField f(engine(sched2()));
    std::mt19937_64 rng(3);
    const CubicSet top = f.cover_block(f.max_psi_level());
    for (int k = 0; k < 2000; ++k) {
        LatticePoint x(2);
        for (int i = 0; i < 2; ++i) x[i] = top.base[i] + static_cast<Int>(rng() % static_cast<std::uint64_t>(top.side));
        int n = f.minimal_cover_level(x);
        for (int m = n; m <= f.max_psi_level(); ++m) CHECK(f.psi_at_level(x, m) == f.psi(x));
    }
}

TEST_CASE("windows agree with pointwise psi") {
    PsiField f(engine(sched2()));
    const CubicSet box{LatticePoint{-100, -40}, 160};
    Grid g = f.psi_window(box);
    CHECK(g == f.psi_window(box));
    std::mt19937_64 rng(11);
    for (int k = 0; k < 10000; ++k) {
        LatticePoint off{static_cast<long long>(rng() % 160), static_cast<long long>(rng() % 160)};
        if (g.at(off) != f.psi(box.base + off)) {
            FAIL_CHECK("window mismatch");
            break;
        }
    }
    CHECK_THROWS_AS(f.psi_window(CubicSet{LatticePoint{-40000, 0}, 4}), CoverageError);
}

TEST_CASE("colour patches") {
    PsiField f(engine(sched3()));
    // j = 3 with c = 3, D = 4: the first block starting with colour 3 is 2 * 27 + 1
    auto s = sched3();
    CubicSet want = strip_block(s, 1, 2 * 27 + 1);
    CubicSet got = f.locate_colour_patch(1, 3);
    CHECK(got.base == want.base + f.shift(2));
    CHECK(got.side == 1);
    CHECK(f.engine().a_component(1, 2 * 27 + 1, 1) == 3);
    CHECK(f.engine().a_component(1, 2 * 27, 1) == 2);

    for (int n = 1; n <= 2; ++n)
        for (long long j = 1; j <= s.c(n); ++j) {
            CubicSet patch = f.locate_colour_patch(n, j);
            CHECK(patch.side == (Int{1} << s.p(n - 1)));
            CHECK(f.psi_window(patch) == f.engine().materialize({n, j}));
        }
    CHECK_THROWS_AS(f.locate_colour_patch(3, 1), CapacityError);

    PsiField g(engine(sched2()));
    for (int n = 1; n <= 2; ++n)
        for (long long j = 1; j <= 2; ++j)
            CHECK(g.psi_window(g.locate_colour_patch(n, j)) == g.engine().materialize({n, j}));
}

TEST_CASE("nesting") {
    PsiField f(engine(sched2()));
    auto checks = nesting_checks(f);
    CHECK(checks.size() == 4);
    for (const auto& c : checks) {
        CHECK(c.contained);
        CHECK(c.growth);
    }
    // reach at n = 3: -(32 + 1024) + 2048, against ceil(2/3 * 1024)
    CHECK(f.cover_block(3).base[0] + f.cover_block(3).side == 992);
    CHECK(3 * 992 >= 2 * 1024);
    PsiField one(engine(LevelSchedule(2, {0, 5}, {2}, false)));
    for (const auto& c : nesting_checks(one)) CHECK((c.contained && c.growth));
}
