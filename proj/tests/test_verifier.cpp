#include <doctest.h>

#include <cmath>

#include "delone/verifier.hpp"

using namespace delone;

namespace {

LevelSchedule sched2() { return LevelSchedule(2, {0, 5, 10, 15}, {2, 2, 2}, false); }
LevelSchedule sched3(int levels) {
    std::vector<long long> p{0}, c;
    for (int n = 1; n <= levels; ++n) {
        p.push_back(8 * n);
        c.push_back(3);
    }
    return LevelSchedule(2, p, c, true);
}

std::shared_ptr<PsiField> field(LevelSchedule s, DensityFn rho = DensityFn::constant(1.5)) {
    return std::make_shared<PsiField>(std::make_shared<PaletteEngine>(std::move(s), std::move(rho)));
}

}  // namespace

TEST_CASE("surd comparisons") {
    CHECK(sign(Surd{3, -2}, 2) > 0);   // 3 - 2 sqrt 2
    CHECK(sign(Surd{-3, 2}, 2) < 0);
    CHECK(sign(Surd{2, -1}, 4) == 0);  // 2 - sqrt 4
    CHECK(sign(Surd{0, 0}, 2) == 0);
    CHECK(sqrt_le(2, Surd{0, 1}, 2));
    CHECK_FALSE(sqrt_lt(2, Surd{0, 1}, 2));
    CHECK(sqrt_lt(Rational(199, 100), Surd{0, 1}, 2));
    CHECK_FALSE(sqrt_le(9, Surd{Rational(-1, 10), 2}, 2));  // 3 vs 2.728
    CHECK(Surd{1, 1}.value(2) == doctest::Approx(1 + std::sqrt(2.0)));
}

TEST_CASE("lattice balls with surd radius") {
    CHECK(lattice_ball(2, Surd{1, 0}).size() == 1);
    CHECK(lattice_ball(2, Surd{0, 1}).size() == 5);  // |z| < sqrt 2
    // against brute force, radius 2 + sqrt 2 in the plane
    Surd r{2, 1};
    long long want = 0;
    for (long long x = -5; x <= 5; ++x)
        for (long long y = -5; y <= 5; ++y) want += (x * x + y * y) < std::pow(2 + std::sqrt(2.0), 2) ? 1 : 0;
    CHECK(static_cast<long long>(lattice_ball(2, r).size()) == want);
}

TEST_CASE("matching level") {
    auto s = sched2();
    CHECK(matching_level(s, Surd{16, 0}) == 2);  // 2r = 2^5
    CHECK(matching_level(s, Surd{3, 0}) == 2);
    CHECK(matching_level(s, Surd{17, 0}) == 3);
    CHECK(matching_level(s, Surd{Rational(1, 2), 0}) == 0);
    CHECK(matching_level(s, Surd{4, 3}) == 2);   // 2(4 + 3 sqrt 2) ~ 16.5
    CHECK(matching_level(s, Surd{14, 3}) == 3);  // ~ 36.5
}

TEST_CASE("patches") {
    auto f = field(sched2());
    LatticePoint x{5, -7};
    Patch one = extract_patch(*f, x, Surd{1, 0});
    REQUIRE(one.offsets.size() == 1);
    CHECK(one.values[0] == f->psi(x));
    Patch p = extract_patch(*f, x, Surd{5, 0});
    CHECK(p == extract_patch(*f, x, Surd{5, 0}));
    Grid g = f->psi_window(CubicSet{LatticePoint{0, -12}, 11});
    for (size_t k = 0; k < p.offsets.size(); ++k)
        CHECK(p.values[k] == g.at(x + p.offsets[k] - LatticePoint{0, -12}));
    CHECK(std::is_sorted(p.offsets.begin(), p.offsets.end()));

    auto ras = coverage_raster(*f, 2);
    CHECK(extract_patch(ras, x, Surd{5, 0}) == p);
}

TEST_CASE("patch translates") {
    auto f = field(sched2());
    LatticePoint x{3, 4};
    Surd r{4, 0};
    Patch p = extract_patch(*f, x, r);
    auto same = find_patch_translate(*f, p, x, r);
    REQUIRE(same.has_value());
    CHECK(*same == x);
    auto wide = find_patch_translate(*f, p, x, Surd{12, 0});
    REQUIRE(wide.has_value());
    CHECK(!(x < *wide));
    CHECK(extract_patch(*f, *wide, r) == p);
    CHECK_FALSE(find_patch_translate(*f, p, x, Surd{3, 0}).has_value());

    auto ras = coverage_raster(*f, 3);
    auto via_raster = find_patch_translate(ras, p, x, Surd{12, 0});
    REQUIRE(via_raster.has_value());
    CHECK(*via_raster == *wide);
}

TEST_CASE("mapping repetitivity") {
    auto f = field(sched2());
    SampleSpec spec;
    spec.pairs = 12;
    spec.seed = 9;
    auto rep = verify_mapping_repetitivity(*f, 2, 16, spec);
    CHECK(rep.pass);
    CHECK(rep.data["ok"] == 12);
    CHECK(rep.worst_slack >= 0);
    CHECK_THROWS_AS(verify_mapping_repetitivity(*f, 3, 16, spec), UsageError);
    auto again = verify_mapping_repetitivity(*f, 2, 16, spec);
    CHECK(again.text() == rep.text());
}

TEST_CASE("net repetitivity") {
    auto f = field(sched2());
    SampleSpec spec;
    spec.pairs = 6;
    auto rep = verify_net_repetitivity(*f, std::nullopt, 4, spec);
    CHECK(rep.pass);
    CHECK(rep.data["transfers"] == 6);
    // r = 4: r + 3 sqrt 2 picks level 2, so the bound is sqrt 2 (2^{p_2} + 1)
    CHECK(rep.data["level"] == 2);
    CHECK(rep.data["bound"].get<double>() == doctest::Approx(std::sqrt(2.0) * (std::pow(2.0, 10) + 1)));
    double transferred = std::sqrt(2.0) * std::pow(2.0, 10) + std::sqrt(2.0) - 4;
    CHECK(rep.data["bound"].get<double>() - 4 == doctest::Approx(transferred));
}

TEST_CASE("encoding") {
    auto f = field(LevelSchedule(2, {0, 8, 16}, {3, 3}, true));
    auto rep = encoding_report(f->engine(), 2);
    CHECK(rep.pass);
    CHECK(rep.data["tiles"] == 65212);
    CHECK(rep.data["max_normalized_error"].get<double>() <= 1.0);
    CHECK(rep.data["strip_lebesgue"] == "81/16384");  // 4 * 81 / 2^16
    auto plain = field(sched2());
    CHECK_THROWS_AS(encoding_report(plain->engine(), 2), UsageError);
}

TEST_CASE("nesting, consistency and reports") {
    auto f = field(sched2());
    auto nest = check_nesting(*f);
    CHECK(nest.pass);
    CHECK(verify_level_consistency(*f, 300, 2).pass);
    CHECK(verify_colour_patches(*f).pass);
    CHECK(verify_partition_claim(*f, 2, 200, 4).pass);
    auto one = field(LevelSchedule(2, {0, 5}, {2}, false));
    CHECK(check_nesting(*one).pass);

    Report bad;
    bad.check = "x";
    bad.fail("broken");
    CHECK_FALSE(bad.pass);
    auto all = combine({nest, bad});
    CHECK(all["pass"] == false);
    CHECK(nest.text().find("#json ") != std::string::npos);
}
