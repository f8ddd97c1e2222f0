#include <doctest.h>

#include <algorithm>
#include <set>

#include "delone/lattice.hpp"

using namespace delone;

TEST_CASE("maximal corner") {
    CHECK(maximal_corner({LatticePoint{0, 0}, 1}) == LatticePoint{0, 0});
    CHECK(maximal_corner({LatticePoint{3, -2}, 4}) == LatticePoint{6, 1});
    CHECK(maximal_corner({LatticePoint{0, 0, 0}, 2}) == LatticePoint{1, 1, 1});
}

TEST_CASE("natural partition order") {
    auto parts = natural_partition({LatticePoint{0, 0}, 2}, 1);
    REQUIRE(parts.size() == 4);
    CHECK(parts[0].base == LatticePoint{0, 0});
    CHECK(parts[1].base == LatticePoint{0, 1});
    CHECK(parts[2].base == LatticePoint{1, 0});
    CHECK(parts[3].base == LatticePoint{1, 1});

    auto whole = natural_partition({LatticePoint{0, 0}, 4}, 4);
    REQUIRE(whole.size() == 1);
    CHECK(whole[0] == CubicSet{LatticePoint{0, 0}, 4});

    auto shifted = natural_partition({LatticePoint{8, 0}, 4}, 2);
    REQUIRE(shifted.size() == 4);
    CHECK(shifted.front().base == LatticePoint{8, 0});
    CHECK(shifted.back().base == LatticePoint{10, 2});
    for (const auto& c : shifted) CHECK(c.side == 2);

    CHECK_THROWS_AS(natural_partition({LatticePoint{0, 0}, 4}, 3), DivisibilityError);
}

TEST_CASE("locate inverts the partition") {
    auto a = locate({LatticePoint{0, 0}, 2}, 1, LatticePoint{1, 0});
    CHECK(a.index == 3);
    CHECK(a.subcube.base == LatticePoint{1, 0});
    CHECK(locate({LatticePoint{0, 0}, 4}, 4, LatticePoint{3, 3}).index == 1);
    auto b = locate({LatticePoint{0, 0}, 4}, 2, LatticePoint{2, 3});
    CHECK(b.index == 4);
    CHECK(b.subcube.base == LatticePoint{2, 2});
    CHECK_THROWS_AS(locate({LatticePoint{0, 0}, 4}, 2, LatticePoint{4, 0}), RangeError);

    // every point of a 3d cube, against a linear search through the partition
    CubicSet s{LatticePoint{-3, 5, 1}, 8};
    auto parts = natural_partition(s, 2);
    for (long long x = -3; x < 5; ++x)
        for (long long y = 5; y < 13; ++y)
            for (long long z = 1; z < 9; ++z) {
                LatticePoint p{x, y, z};
                auto loc = locate(s, 2, p);
                size_t want = 0;
                while (!parts[want].contains(p)) ++want;
                CHECK(loc.index == static_cast<Int>(want + 1));
                CHECK(loc.subcube == parts[want]);
            }
}

namespace {

std::set<std::pair<long long, long long>> as_set(const std::vector<LatticePoint>& pts) {
    std::set<std::pair<long long, long long>> out;
    for (const auto& p : pts) out.insert({static_cast<long long>(p[0]), static_cast<long long>(p[1])});
    return out;
}

}  // namespace

TEST_CASE("lattice ball is open") {
    std::vector<Rational> origin{0, 0};
    CHECK(as_set(lattice_ball(origin, Rational(1))) == std::set<std::pair<long long, long long>>{{0, 0}});
    CHECK(as_set(lattice_ball(origin, Rational(3, 2))) ==
          std::set<std::pair<long long, long long>>{{0, 0}, {1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {1, -1}, {-1, 1}, {-1, -1}});  // diagonals sit at sqrt 2 < 1.5
    std::vector<Rational> half{Rational(1, 2), Rational(1, 2)};
    CHECK(as_set(lattice_ball(half, Rational(4, 5))) ==
          std::set<std::pair<long long, long long>>{{0, 0}, {0, 1}, {1, 0}, {1, 1}});
}

TEST_CASE("lattice ball against brute force") {
    for (int num = 1; num < 40; num += 3) {
        Rational r(num, 7);
        std::vector<Rational> c{Rational(1, 3), Rational(-5, 4)};
        std::set<std::pair<long long, long long>> want;
        for (long long x = -10; x <= 10; ++x)
            for (long long y = -10; y <= 10; ++y) {
                Rational dx = Rational(x) - c[0], dy = Rational(y) - c[1];
                if (dx * dx + dy * dy < r * r) want.insert({x, y});
            }
        CHECK(as_set(lattice_ball(c, r)) == want);
    }
}
