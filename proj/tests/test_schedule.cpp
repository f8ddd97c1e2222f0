#include <doctest.h>

#include <cmath>

#include "delone/schedule.hpp"

using namespace delone;

namespace {

LevelSchedule sched2() { return LevelSchedule(2, {0, 5, 10, 15}, {2, 2, 2}, false); }
LevelSchedule sched3() { return LevelSchedule(2, {0, 8, 16, 24}, {3, 3, 3}, true); }

bool has_failure(const ValidationReport& rep, const std::string& name) {
    for (const auto& f : rep.failures())
        if (f.name == name) return true;
    return false;
}

}  // namespace

TEST_CASE("validate examples") {
    CHECK(validate_schedule(sched2()).valid());
    CHECK(validate_schedule(sched3()).valid());
    for (int m = 1; m <= 3; ++m) CHECK(strip_mass_prefix(sched3(), m) == Rational(81 * m, 16384));

    auto bad = validate_schedule(LevelSchedule(2, {0, 3}, {3}, false));
    CHECK_FALSE(bad.valid());
    CHECK(has_failure(bad, "c_n^D <= 2^{p_n - p_{n-1} - 1}"));

    auto gap1 = validate_schedule(LevelSchedule(2, {0, 5, 6}, {2, 2}, false));
    CHECK(has_failure(gap1, "p_n - p_{n-1} >= 2"));
    CHECK_THROWS_AS(require_valid(LevelSchedule(2, {0, 5, 6}, {2, 2}, false)), UsageError);

    // palette mode needs c_1 = 3
    CHECK(has_failure(validate_schedule(LevelSchedule(2, {0, 5, 10}, {2, 2}, true)), "c_1 = 3"));
}

TEST_CASE("construction rejects malformed sequences") {
    CHECK_THROWS_AS(LevelSchedule(2, {1, 5}, {2}, false), UsageError);
    CHECK_THROWS_AS(LevelSchedule(2, {0, 5, 10}, {2}, false), UsageError);
    CHECK_THROWS_AS(LevelSchedule::from_json(nlohmann::json{{"d", 2}, {"p", {0, 5}}, {"c", {2}}, {"mode", "x"}}),
                    ConfigError);
}

TEST_CASE("derived level quantities") {
    auto lv = derive_level(LevelSchedule(2, {0, 8, 16}, {3, 3}, true), 2);
    CHECK(lv.t == 65212);
    CHECK(lv.h == 65212);
    CHECK(lv.alpha == 0);

    auto a = derive_from(10, 4, 6);
    CHECK(a.h == 5);
    CHECK(a.alpha == 0);
    auto b = derive_from(10, 4, 5);
    CHECK(b.h == 7);
    CHECK(b.alpha == 1);

    // h = ceil(t (c'-2)/(c-2)) and the step count equation, over a small grid
    for (int t = 1; t < 60; ++t)
        for (long long cp = 3; cp < 9; ++cp)
            for (long long cc = 3; cc < 9; ++cc) {
                auto r = derive_from(t, cp, cc);
                BigInt num = BigInt(t) * (cp - 2);
                CHECK(r.h * (cc - 2) >= num);
                CHECK((r.h - 1) * (cc - 2) < num);
                CHECK(r.alpha >= 0);
                CHECK(r.alpha < cc - 2);
                CHECK(BigInt(r.alpha) * (r.h - 1) + BigInt(cc - 2 - r.alpha) * r.h == num);
            }
    CHECK_THROWS_AS(derive_level(sched3(), 1), UsageError);
}

TEST_CASE("strip blocks") {
    auto s = LevelSchedule(2, {0, 8, 16}, {3, 3}, true);
    auto b1 = strip_block(s, 1, 1);
    CHECK(b1.base == LatticePoint{0, 0});
    CHECK(b1.side == 2);
    auto b = strip_block(s, 2, 3);
    CHECK(b.base == LatticePoint{1024, 0});
    CHECK(b.side == 512);
    auto s3 = LevelSchedule(3, {0, 30}, {2}, false);
    auto c = strip_block(s3, 1, 1);
    CHECK(c.base == LatticePoint{0, 0, 0});
    CHECK(c.side == 2);
    CHECK_THROWS_AS(strip_block(s, 2, 82), RangeError);
    CHECK_THROWS_AS(strip_block(s, 2, 0), RangeError);
}

TEST_CASE("bk schedule") {
    for (int d : {2, 3}) {
        auto bk = bk_schedule(d, 6);
        CHECK(bk.schedule.palette_mode());
        CHECK(validate_schedule(bk.schedule, true).valid());
        CHECK(bk.k >= std::pow(6.0, d));
        CHECK(bk.k >= bk.k_series);
        CHECK(bk.schedule.c(1) == 3);
        for (int n = 1; n <= 6; ++n) {
            // eps_n from its closed form
            double e = 1.0 / ((1.0 - 1.0 / d) * std::log(std::log(n + 100.0)));
            CHECK(bk.eps[static_cast<size_t>(n)] == doctest::Approx(e));
        }
    }
}

TEST_CASE("json round trip and hash") {
    auto s = sched3();
    CHECK(LevelSchedule::from_json(s.to_json()) == s);
    CHECK(s.hash() == LevelSchedule::from_json(s.to_json()).hash());
    CHECK(s.hash() != sched2().hash());
    CHECK(fnv1a_hex("") == "cbf29ce484222325");
    CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
}
