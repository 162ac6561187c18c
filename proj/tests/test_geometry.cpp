#include <catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "znmap/analysis.hpp"
#include "znmap/geometry.hpp"

using namespace znmap;
using Catch::Matchers::WithinAbs;

TEST_CASE("to_polar on axis and diagonal points") {
    auto q = to_polar({1.0, 0.0});
    CHECK_THAT(q.r, WithinAbs(1.0, 1e-15));
    CHECK_THAT(q.theta, WithinAbs(0.0, 1e-15));

    q = to_polar({0.0, 2.0});
    CHECK_THAT(q.r, WithinAbs(2.0, 1e-15));
    CHECK_THAT(q.theta, WithinAbs(kPi / 2, 1e-15));

    q = to_polar({-1.0, -1.0});
    CHECK_THAT(q.r, WithinAbs(1.41421356, 1e-8));
    CHECK_THAT(q.theta, WithinAbs(3.92699082, 1e-8));

    q = to_polar({0.0, 0.0});
    CHECK(q.r == 0.0);
    CHECK(q.theta == 0.0);
}

TEST_CASE("from_polar") {
    auto p = from_polar({1.0, 0.0});
    CHECK_THAT(p.x, WithinAbs(1.0, 1e-15));
    CHECK_THAT(p.y, WithinAbs(0.0, 1e-15));

    p = from_polar({2.0, kPi});
    CHECK_THAT(p.x, WithinAbs(-2.0, 1e-15));
    CHECK_THAT(p.y, WithinAbs(0.0, 1e-15));

    p = from_polar({1.0, kPi / 3});
    CHECK_THAT(p.x, WithinAbs(0.5, 1e-8));
    CHECK_THAT(p.y, WithinAbs(0.86602540, 1e-8));
}

TEST_CASE("polar round trip") {
    SeededSampler rng;
    for (int i = 0; i < 1000; ++i) {
        const PlanarPoint p = rng.in_disk(50.0);
        CHECK(distance(from_polar(to_polar(p)), p) <= 1e-13 * (1.0 + p.norm()));
        const double t = to_polar(p).theta;
        CHECK(t >= 0.0);
        CHECK(t < kTwoPi);
    }
}

TEST_CASE("rotate by group elements") {
    const PlanarPoint r = rotate({3.0, 1.0}, GroupElement(1, 4));
    CHECK(r == PlanarPoint{-1.0, 3.0});

    const PlanarPoint p{0.3, -2.5};
    CHECK(rotate(p, GroupElement(0, 7)) == p);

    const PlanarPoint s = rotate({1.0, 0.0}, GroupElement(1, 6));
    CHECK_THAT(s.x, WithinAbs(0.5, 1e-8));
    CHECK_THAT(s.y, WithinAbs(0.86602540, 1e-8));
}

TEST_CASE("group element normalizes its power") {
    CHECK(GroupElement(-1, 5).m == 4);
    CHECK(GroupElement(12, 5).m == 2);
    CHECK(GroupElement(3, 8).inverse().m == 5);
    CHECK_THROWS_AS(GroupElement(0, 1), std::invalid_argument);
}

TEST_CASE("rotation preserves the norm and has order n") {
    SeededSampler rng(7);
    for (int n = 2; n <= 9; ++n) {
        for (int i = 0; i < 200; ++i) {
            const PlanarPoint p = rng.in_disk(100.0);
            for (int m = 0; m < n; ++m)
                CHECK(std::abs(rotate(p, GroupElement(m, n)).norm() - p.norm()) <= 1e-14 * (1.0 + p.norm()));
            PlanarPoint q = p;
            for (int m = 0; m < n; ++m) q = rotate(q, GroupElement(1, n));
            CHECK(distance(q, p) <= 1e-12 * (1.0 + p.norm()));
        }
    }
}

TEST_CASE("sector_of uses half-open sectors") {
    CHECK(sector_of({1.0, 1.0}, 4).j == 1);
    CHECK(sector_of({0.0, 1.0}, 4).j == 2);
    CHECK(sector_of({-1.0, 0.0}, 2).j == 2);
    CHECK(sector_of({1.0, 0.0}, 5).j == 1);
    CHECK(sector_of({1.0, -1e-3}, 4).j == 4);
    CHECK_THROWS_AS(sector_of({0.0, 0.0}, 4), std::domain_error);
    CHECK_THROWS_WITH(sector_of({0.0, 0.0}, 4), "sector undefined at origin");
}

TEST_CASE("sector index advances under the generator") {
    SeededSampler rng(11);
    for (int n = 2; n <= 9; ++n) {
        const double width = kTwoPi / n;
        for (int i = 0; i < 300; ++i) {
            const PlanarPoint p = rng.in_annulus(0.1, 10.0);
            const double local = std::fmod(to_polar(p).theta, width);
            if (local < 1e-9 || width - local < 1e-9) continue;
            CHECK(sector_of(rotate(p, GroupElement(1, n)), n).j == sector_of(p, n).j % n + 1);
        }
    }
}

TEST_CASE("h_map rescales the angle") {
    const PlanarPoint p{0.7, -1.9};
    CHECK(h_map(p, 4) == p);
    CHECK(h_inv(p, 4) == p);

    PlanarPoint q = h_map({0.0, 1.0}, 6);
    CHECK_THAT(q.x, WithinAbs(0.5, 1e-8));
    CHECK_THAT(q.y, WithinAbs(0.86602540, 1e-8));

    q = h_map({1.0, 0.0}, 2);
    CHECK_THAT(q.x, WithinAbs(1.0, 1e-15));
    CHECK_THAT(q.y, WithinAbs(0.0, 1e-15));
    q = h_map({0.0, 1.0}, 2);
    CHECK_THAT(q.x, WithinAbs(-1.0, 1e-15));
    CHECK_THAT(q.y, WithinAbs(0.0, 1e-15));
}

TEST_CASE("h_inv inverts h_map on the first sector") {
    PlanarPoint q = h_inv({0.5, 0.86602540378443865}, 6);
    CHECK_THAT(q.x, WithinAbs(0.0, 1e-8));
    CHECK_THAT(q.y, WithinAbs(1.0, 1e-8));
    q = h_inv({1.0, 0.0}, 8);
    CHECK(q == PlanarPoint{1.0, 0.0});

    SeededSampler rng(3);
    for (int n = 2; n <= 9; ++n)
        for (int i = 0; i < 200; ++i) {
            const double r = rng.uniform(0.0, 20.0);
            const double t = rng.uniform(0.0, kTwoPi / n);
            const PlanarPoint p = from_polar({r, t});
            CHECK(distance(h_inv(h_map(p, n), n), p) <= 1e-12 * (1.0 + r));
            CHECK(std::abs(h_map(p, n).norm() - r) <= 1e-14 * (1.0 + r));
        }
    CHECK_THROWS_AS(h_map({1.0, 0.0}, 1), std::invalid_argument);
}

TEST_CASE("angle_lift") {
    const std::vector<double> a{0.1, 6.2};
    auto l = angle_lift(a);
    REQUIRE(l.size() == 2);
    CHECK(l[0] == 0.1);
    CHECK_THAT(l[1], WithinAbs(6.2 - kTwoPi, 1e-15));
    CHECK_THAT(l[1], WithinAbs(-0.083185, 1e-6));

    const std::vector<double> c{1.5, 1.5, 1.5};
    CHECK(angle_lift(c) == c);

    std::vector<double> rot;
    for (int i = 0; i <= 5; ++i) rot.push_back(normalize_angle(kTwoPi * i / 5));
    l = angle_lift(rot);
    CHECK_THAT(l.back(), WithinAbs(kTwoPi, 1e-12));
    for (std::size_t i = 1; i < l.size(); ++i) CHECK(l[i] > l[i - 1]);
}

TEST_CASE("angle_lift differences stay in the window") {
    SeededSampler rng(5);
    std::vector<double> a;
    for (int i = 0; i < 2000; ++i) a.push_back(rng.uniform(0.0, kTwoPi));
    for (double lower : {-kPi, -kPi / 2}) {
        const auto l = angle_lift(a, lower);
        for (std::size_t i = 1; i < l.size(); ++i) {
            const double d = l[i] - l[i - 1];
            CHECK(d > lower);
            CHECK(d <= lower + kTwoPi + 1e-12);
            CHECK_THAT(std::remainder(d - (a[i] - a[i - 1]), kTwoPi), WithinAbs(0.0, 1e-12));
        }
    }
}

TEST_CASE("closed sectors include both boundary rays") {
    CHECK(in_closed_sector({1.0, 0.0}, 1, 4));
    CHECK(in_closed_sector({0.0, 1.0}, 1, 4));
    CHECK(in_closed_sector({0.0, 1.0}, 2, 4));
    CHECK(in_closed_sector({1.0, -1e-14}, 1, 4));
    CHECK_FALSE(in_closed_sector({1.0, -1e-3}, 1, 4));
    CHECK(in_closed_sector({1.0, -1e-3}, 4, 4));
    CHECK(in_closed_sector({-1.0, -1.0}, 3, 4));
    CHECK_FALSE(in_closed_sector({-1.0, -1.0}, 1, 4));
    SeededSampler rng(13);
    for (int n = 2; n <= 9; ++n)
        for (int i = 0; i < 200; ++i) {
            const PlanarPoint p = rng.in_annulus(0.1, 10.0);
            CHECK(in_closed_sector(p, sector_of(p, n).j, n));
        }
}
