#include <doctest.h>

#include "delone/delone_set.hpp"

using namespace delone;

namespace {

std::shared_ptr<PsiField> field2() {
    auto e = std::make_shared<PaletteEngine>(LevelSchedule(2, {0, 5, 10, 15}, {2, 2, 2}, false),
                                             DensityFn::constant(1.5));
    return std::make_shared<PsiField>(e);
}

Box square(long long lo, long long hi) { return Box{{Dyadic(lo), Dyadic(lo)}, {Dyadic(hi), Dyadic(hi)}}; }

Dyadic dist_sq(const RealPoint& a, const RealPoint& b) {
    Dyadic s;
    for (size_t i = 0; i < a.size(); ++i) s = s + (a[i] - b[i]) * (a[i] - b[i]);
    return s;
}

}  // namespace

TEST_CASE("marker sets") {
    auto m = MarkerSets::standard(2);
    CHECK(m.t1 == std::vector<RealPoint>{{Dyadic(1, 1), Dyadic(1, 1)}});
    CHECK(m.t2 == std::vector<RealPoint>{{Dyadic(1, 2), Dyadic(1, 1)}, {Dyadic(3, 2), Dyadic(1, 1)}});
    CHECK_THROWS_AS(MarkerSets::custom(2, {{Dyadic(0), Dyadic(1, 1)}}, m.t2), ConfigError);
    CHECK_THROWS_AS(MarkerSets::custom(2, m.t1, {m.t1[0], m.t1[0]}), ConfigError);
    CHECK_NOTHROW(MarkerSets::custom(2, m.t1, m.t2));
}

TEST_CASE("points in small windows") {
    auto f = field2();
    auto one = points_in_window(*f, square(0, 1));
    REQUIRE(one.points.size() == 1);
    CHECK(one.points[0] == RealPoint{Dyadic(1, 1), Dyadic(1, 1)});
    CHECK(points_in_window(*f, square(3, 3)).points.empty());

    // a cell coloured 2 carries two points half a unit apart
    bool seen = false;
    for (long long x = 0; x < 32 && !seen; ++x)
        for (long long y = 0; y < 32 && !seen; ++y) {
            if (f->psi(LatticePoint{x, y}) != 2) continue;
            Box cell{{Dyadic(x), Dyadic(y)}, {Dyadic(x + 1), Dyadic(y + 1)}};
            auto pw = points_in_window(*f, cell);
            REQUIRE(pw.points.size() == 2);
            CHECK(dist_sq(pw.points[0], pw.points[1]) == Dyadic(1, 2));
            seen = true;
        }
    CHECK(seen);
}

TEST_CASE("count matches psi cell by cell") {
    auto f = field2();
    auto pw = points_in_window(*f, square(-20, 44));
    long long want = 0;
    for (long long x = -20; x < 44; ++x)
        for (long long y = -20; y < 44; ++y) want += f->psi(LatticePoint{x, y});
    CHECK(static_cast<long long>(pw.points.size()) == want);
    CHECK(std::is_sorted(pw.points.begin(), pw.points.end()));
    // fractional window edges keep the half-open convention
    Box frac{{Dyadic(1, 2), Dyadic(0)}, {Dyadic(3, 1), Dyadic(1)}};
    for (const auto& p : points_in_window(*f, frac).points) {
        CHECK(p[0] >= Dyadic(1, 2));
        CHECK(p[0] < Dyadic(3, 1));
    }
}

TEST_CASE("delone constants") {
    auto f = field2();
    auto pw = points_in_window(*f, square(-16, 16));
    auto dc = delone_constants(pw, Dyadic(2));
    CHECK(dc.separation_sq == Dyadic(1, 2));
    CHECK(dc.covering_radius_sq <= Dyadic(9 * 2, 4));
    // brute force over the interior points
    Dyadic best;
    bool have = false;
    std::vector<RealPoint> in;
    for (const auto& p : pw.points)
        if (p[0] >= Dyadic(-14) && p[0] < Dyadic(14) && p[1] >= Dyadic(-14) && p[1] < Dyadic(14)) in.push_back(p);
    CHECK(static_cast<long long>(in.size()) == dc.interior_points);
    for (size_t a = 0; a < in.size(); ++a)
        for (size_t b = a + 1; b < in.size(); ++b) {
            Dyadic s = dist_sq(in[a], in[b]);
            if (!have || s < best) best = s;
            have = true;
        }
    CHECK(best == dc.separation_sq);

    CHECK_THROWS_AS(delone_constants(points_in_window(*f, square(0, 1)), Dyadic(2)), DegenerateInputError);
    CHECK_THROWS_AS(delone_constants(pw, Dyadic(1)), UsageError);
}

TEST_CASE("csv and metadata") {
    auto f = field2();
    auto pw = points_in_window(*f, square(0, 2));
    std::string csv = points_csv(pw);
    CHECK(csv.rfind("x1,x2\n0.5,0.5\n", 0) == 0);
    CHECK(csv == points_csv(points_in_window(*f, square(0, 2))));
    auto meta = nlohmann::json::parse(points_metadata(pw, *f));
    CHECK(meta["count"] == pw.points.size());
    CHECK(meta["hash"] == f->hash());

    auto other = std::make_shared<PsiField>(std::make_shared<PaletteEngine>(
        LevelSchedule(2, {0, 5, 10, 15}, {2, 2, 2}, false), DensityFn::constant(1.4)));
    auto meta2 = nlohmann::json::parse(points_metadata(points_in_window(*other, square(0, 2)), *other));
    CHECK(meta2["hash"] != meta["hash"]);
}
