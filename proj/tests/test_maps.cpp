#include <catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "znmap/analysis.hpp"
#include "znmap/maps.hpp"

using namespace znmap;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const SzlenkParams K{1.1};
constexpr double kP = 3.16227766016837933;  // (k-1)^(-1/2) for k = 1.1

double jac_distance(const Jacobian2& a, const Jacobian2& b) { return (a - b).max_abs_entry(); }

std::vector<MapSpec> all_families() {
    std::vector<MapSpec> v{MapSpec::f4(K), MapSpec::g4(K, {0.2, 0.3, -0.1}), MapSpec::h(K)};
    for (int n : {2, 3, 5, 6, 7, 8}) {
        v.push_back(MapSpec::fn(K, n));
        v.push_back(MapSpec::hn(K, n));
    }
    return v;
}

}  // namespace

TEST_CASE("k is validated") {
    CHECK_NOTHROW(SzlenkParams(1.1));
    CHECK_THROWS_AS(SzlenkParams(1.0), std::invalid_argument);
    CHECK_THROWS_AS(SzlenkParams(1.2), std::invalid_argument);
    CHECK_THROWS_AS(SzlenkParams(2.0 / std::sqrt(3.0)), std::invalid_argument);
    CHECK_THROWS_AS(MapSpec::fn(K, 1), std::invalid_argument);
    CHECK_THAT(K.periodic_radius(), WithinRel(kP, 1e-15));
}

TEST_CASE("eval_f4 examples") {
    CHECK(eval_f4({0.0, 0.0}, K) == PlanarPoint{0.0, 0.0});
    const PlanarPoint a = eval_f4({1.0, 1.0}, K);
    CHECK_THAT(a.x, WithinAbs(-0.36666667, 1e-8));
    CHECK_THAT(a.y, WithinAbs(0.36666667, 1e-8));
    const PlanarPoint p = eval_f4({kP, 0.0}, K);
    CHECK_THAT(p.x, WithinAbs(0.0, 1e-15));
    CHECK_THAT(p.y, WithinAbs(kP, 1e-14));
}

TEST_CASE("eval_f4_polar examples") {
    PolarPoint q = eval_f4_polar({1.0, kPi / 4}, K);
    CHECK_THAT(q.r, WithinAbs(0.275, 1e-15));
    CHECK_THAT(q.theta, WithinAbs(2.35619449, 1e-8));
    q = eval_f4_polar({0.0, 0.0}, K);
    CHECK(q.r == 0.0);
    CHECK(q.theta == 0.0);
    q = eval_f4_polar({2.0, 0.0}, K);
    CHECK_THAT(q.r, WithinAbs(1.76, 1e-14));
    CHECK_THAT(q.theta, WithinAbs(kPi / 2, 1e-15));
}

TEST_CASE("polar and Cartesian F4 agree") {
    SeededSampler rng;
    for (int i = 0; i < 2000; ++i) {
        const PlanarPoint p = rng.in_disk(10.0);
        const PlanarPoint a = eval_f4(p, K);
        const PlanarPoint b = from_polar(eval_f4_polar(to_polar(p), K));
        const double r = p.norm();
        CHECK(distance(a, b) <= 1e-12 * (1.0 + r * r * r));
    }
}

TEST_CASE("polar angle matches the arctangent branches") {
    // Phi4 = arctan(-cot^3 theta) branches on the four open quadrants.
    for (int i = 1; i < 400; ++i) {
        const double t = kTwoPi * i / 400.0;
        if (std::fmod(t, kPi / 2) < 1e-9) continue;
        const double c = std::cos(t), s = std::sin(t);
        const double branch = normalize_angle(std::atan2(c * c * c, -s * s * s));
        const double ours = eval_f4_polar({1.0, t}, K).theta;
        CHECK_THAT(std::remainder(ours - branch, kTwoPi), WithinAbs(0.0, 1e-12));
    }
}

TEST_CASE("jac_f4 examples") {
    CHECK(jac_f4({0.0, 0.0}, K).max_abs_entry() == 0.0);
    const Jacobian2 j = jac_f4({1.0, 0.0}, K);
    CHECK_THAT(j.a, WithinAbs(0.0, 1e-15));
    CHECK_THAT(j.b, WithinAbs(0.0, 1e-15));
    CHECK_THAT(j.c, WithinAbs(1.1, 1e-15));
    CHECK_THAT(j.d, WithinAbs(0.0, 1e-15));
    CHECK(j.spectral_radius() == 0.0);
    CHECK(jac_f4({1.0, 1.0}, K).spectral_radius() < 0.95263);
}

TEST_CASE("jac_f4_polar examples") {
    Jacobian2 j = jac_f4_polar({1.0, 0.0}, K);
    CHECK_THAT(j.a, WithinAbs(1.1, 1e-15));
    CHECK_THAT(j.b, WithinAbs(0.0, 1e-15));
    CHECK(j.c == 0.0);
    CHECK_THAT(j.d, WithinAbs(0.0, 1e-15));
    j = jac_f4_polar({1.0, kPi / 2}, K);
    CHECK_THAT(j.a, WithinAbs(1.1, 1e-15));
    CHECK_THAT(j.d, WithinAbs(0.0, 1e-15));
    j = jac_f4_polar({1.0, kPi / 4}, K);
    CHECK_THAT(j.d, WithinAbs(3.0, 1e-14));
    CHECK_THROWS_WITH(jac_f4_polar({0.0, 0.3}, K), "polar chart singular at origin");
}

TEST_CASE("eval_g4 examples") {
    SeededSampler rng;
    for (int i = 0; i < 200; ++i) {
        const PlanarPoint p = rng.in_disk(10.0);
        CHECK(eval_g4(p, K, {}) == eval_f4(p, K));
    }
    const PlanarPoint q = eval_g4({1.0, 0.0}, K, {0.0, 0.05, 0.0});
    CHECK_THAT(q.x, WithinAbs(0.0, 1e-15));
    CHECK_THAT(q.y, WithinAbs(0.6, 1e-15));
    const auto ev = jac_g4({0.0, 0.0}, K, {0.3, 0.4, 0.0}).eigenvalues();
    CHECK_THAT(ev[0].real(), WithinAbs(0.3, 1e-15));
    CHECK_THAT(std::abs(ev[0].imag()), WithinAbs(0.4, 1e-15));
    CHECK_THAT(std::abs(ev[0]), WithinAbs(0.5, 1e-15));
}

TEST_CASE("jac_g4 examples") {
    const Jacobian2 o = jac_g4({0.0, 0.0}, K, {0.7, -0.2, 3.0});
    CHECK(o.a == 0.7);
    CHECK(o.b == 0.2);
    CHECK(o.c == -0.2);
    CHECK(o.d == 0.7);

    const UnfoldParams beta{0.0, 0.05, 0.0};
    const Jacobian2 f = jac_f4({1.0, 1.0}, K);
    CHECK(f.b - f.c < 0.0);
    const double det = jac_g4({1.0, 1.0}, K, beta).det();
    CHECK_THAT(det, WithinAbs(f.det() + 0.05 * 0.05 - 0.05 * (f.b - f.c), 1e-15));
    CHECK(det > 0.0);

    const Jacobian2 dj = jac_g4({1.0, 0.0}, K, {0.0, 0.0, 1.0}) - jac_f4({1.0, 0.0}, K);
    CHECK_THAT(dj.a, WithinAbs(0.0, 1e-15));
    CHECK_THAT(dj.b, WithinAbs(-1.0, 1e-15));
    CHECK_THAT(dj.c, WithinAbs(3.0, 1e-15));
    CHECK_THAT(dj.d, WithinAbs(0.0, 1e-15));
}

TEST_CASE("G4 origin stability follows alpha^2 + beta^2 < 1") {
    for (double a = -1.3; a <= 1.3; a += 0.1)
        for (double b = -1.3; b <= 1.3; b += 0.1) {
            const double rho = jac_g4({0.0, 0.0}, K, {a, b, 0.5}).spectral_radius();
            CHECK_THAT(rho, WithinAbs(std::hypot(a, b), 1e-15));
        }
}

TEST_CASE("eval_fn examples") {
    SeededSampler rng;
    for (int i = 0; i < 1000; ++i) {
        const PlanarPoint p = rng.in_disk(10.0);
        CHECK(distance(eval_fn(p, K, 4), eval_f4(p, K)) <= 1e-13);
    }
    const PlanarPoint a = eval_fn({1.0, 0.0}, K, 6);
    CHECK_THAT(a.x, WithinAbs(0.275, 1e-14));
    CHECK_THAT(a.y, WithinAbs(0.476313972081441256, 1e-14));

    PlanarPoint q{kP, 0.0};
    for (int j = 1; j < 6; ++j) {
        q = eval_fn(q, K, 6);
        const PlanarPoint rj = rotate({kP, 0.0}, GroupElement(j, 6));
        CHECK(distance(q, rj) <= 1e-12);
        CHECK(distance(q, {kP, 0.0}) > 1.0);
    }
    q = eval_fn(q, K, 6);
    CHECK(distance(q, {kP, 0.0}) <= 1e-12);
    CHECK(eval_fn({0.0, 0.0}, K, 5) == PlanarPoint{0.0, 0.0});
}

TEST_CASE("jac_fn examples") {
    for (int n = 2; n <= 8; ++n) CHECK(jac_fn({0.0, 0.0}, K, n).max_abs_entry() == 0.0);
    SeededSampler rng;
    for (int i = 0; i < 1000; ++i) {
        const PlanarPoint p = rng.in_annulus(1e-3, 10.0);
        CHECK(jac_distance(jac_fn(p, K, 4), jac_f4(p, K)) <= 1e-12 * (1.0 + p.norm() * p.norm()));
    }
    const PlanarPoint xi = from_polar({1.0, kPi / 3});
    CHECK(jac_distance(jac_fn_sector_formula(xi, K, 6, 1), jac_fn_sector_formula(xi, K, 6, 2)) <= 1e-12);
}

TEST_CASE("analytic Jacobians match central differences") {
    SeededSampler rng(17);
    for (const MapSpec& f : all_families()) {
        const double width = kTwoPi / f.n();
        int tested = 0;
        while (tested < 300) {
            const PlanarPoint p = rng.in_annulus(0.05, 10.0);
            const double local = std::fmod(to_polar(p).theta, width);
            if (local < 1e-4 || width - local < 1e-4) continue;  // keep the stencil inside one sector
            ++tested;
            const Jacobian2 fd = fd_jacobian(f, p, 1e-5);
            CHECK(jac_distance(f.jacobian(p), fd) <= 1e-6 * (1.0 + p.norm() * p.norm()));
        }
    }
}

TEST_CASE("every family is equivariant and fixes the origin") {
    for (const MapSpec& f : all_families()) {
        CHECK(f({0.0, 0.0}) == PlanarPoint{0.0, 0.0});
        const EquivarianceStats st = equivariance_residual(f, f.n(), 10000, 10.0);
        CHECK(st.max_scaled <= 1e-12);
    }
}

TEST_CASE("ray-preserving families map rays to rays") {
    const std::vector<double> radii{0.05, 0.2, 0.5, 1.0, 2.0, 3.0, 5.0, 8.0, 13.0, 20.0};
    for (const MapSpec& f : all_families()) {
        if (!f.ray_preserving()) continue;
        const RayCheckReport rep = ray_image_check(f, 64, radii);
        CHECK(rep.pass);
        CHECK(rep.max_angle_spread <= 1e-10);
    }
}

TEST_CASE("closed sectors map to the next sector") {
    for (const MapSpec& f : all_families()) {
        if (!f.ray_preserving()) continue;
        const SectorMapReport rep = sector_map_check(f, f.n(), 10000);
        CHECK(rep.interior_failures == 0);
        CHECK(rep.max_boundary_error <= 1e-10);
    }
}

TEST_CASE("radial profile") {
    const RadialProfile prof(6.0, 6.0);
    CHECK(radial_u(3.0, prof) == 3.0);
    CHECK(radial_u(6.0, prof) == 6.0);
    CHECK_THAT(radial_u(12.0, prof), WithinAbs(10.8963616764856730, 1e-13));
    CHECK_THAT(radial_u(12.0, prof) - 12.0, WithinAbs(-1.1036383235143270, 1e-13));
    CHECK_THAT(radial_u_prime(6.0 + 1e-12, prof), WithinAbs(1.0, 1e-12));

    double prev = -1.0;
    for (double s = 0.0; s < 500.0; s += 0.37) {
        const double v = radial_u(s, prof);
        CHECK(v > prev);
        if (s > 6.0) CHECK(v < s);
        prev = v;
    }
    CHECK(radial_u(1e6, prof) > 4e5);
    CHECK_THROWS_AS(RadialProfile(0.0), std::invalid_argument);
}

TEST_CASE("eval_h examples") {
    const RadialProfile prof = RadialProfile::for_k(K);
    CHECK_THAT(prof.r0, WithinAbs(6.32455532033675866, 1e-14));
    CHECK(eval_h({1.0, 1.0}, K, prof) == eval_f4({1.0, 1.0}, K));
    CHECK(eval_h({kP, 0.0}, K, prof) == eval_f4({kP, 0.0}, K));
    const PlanarPoint h = eval_h({20.0, 0.0}, K, prof);
    CHECK_THAT(h.x, WithinAbs(0.0, 1e-14));
    CHECK_THAT(h.y, WithinAbs(17.0295978404246727, 1e-12));
    CHECK(h.norm() < 20.0);
}

TEST_CASE("saturated maps are dissipative") {
    const RadialProfile prof = RadialProfile::for_k(K);
    SeededSampler rng(23);
    for (int n : {2, 3, 4, 5, 6, 7, 8}) {
        const MapSpec f = MapSpec::hn(K, n);
        for (int i = 0; i < 1000; ++i) {
            const PlanarPoint p = rng.in_annulus(0.01, 200.0);
            const double r = p.norm(), img = f(p).norm();
            CHECK(img <= std::max(r, radial_u(K.k() * r, prof)) * (1.0 + 1e-14));
            if (r >= 2.0 * prof.r0) CHECK(img < r);
        }
    }
}

TEST_CASE("invert_map examples") {
    const MapSpec f4 = MapSpec::f4(K);
    PlanarPoint p = invert_map(f4, {0.0, 1.76});
    CHECK_THAT(p.x, WithinAbs(2.0, 1e-11));
    CHECK_THAT(p.y, WithinAbs(0.0, 1e-11));
    p = invert_map(f4, {0.0, kP});
    CHECK_THAT(p.x, WithinAbs(kP, 1e-11));
    CHECK_THAT(p.y, WithinAbs(0.0, 1e-11));
    for (const MapSpec& f : all_families()) {
        if (!f.ray_preserving()) continue;
        CHECK(invert_map(f, {0.0, 0.0}) == PlanarPoint{0.0, 0.0});
    }
    CHECK_THROWS_AS(invert_map(MapSpec::g4(K, {}), {1.0, 1.0}), std::invalid_argument);
}

TEST_CASE("invert_map round trip") {
    SeededSampler rng(29);
    for (const MapSpec& f : all_families()) {
        if (!f.ray_preserving()) continue;
        for (int i = 0; i < 200; ++i) {
            const PlanarPoint p = rng.in_annulus(0.1, 20.0);
            const PlanarPoint q = f(p);
            const PlanarPoint back = invert_map(f, q);
            CHECK(distance(f(back), q) <= 1e-12 * (1.0 + q.norm()));
        }
    }
}

TEST_CASE("family names round trip") {
    for (Family fam : {Family::F4, Family::G4, Family::Fn, Family::H, Family::Hn})
        CHECK(parse_family(family_name(fam)) == fam);
    CHECK_THROWS_AS(parse_family("f5"), std::invalid_argument);
}
