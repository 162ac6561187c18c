// Basin rasters, image curves of circles and rotation-number estimates.
#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "analysis.hpp"
#include "geometry.hpp"
#include "maps.hpp"
#include "parallel.hpp"

namespace znmap {

struct BasinRaster {
    Region window;
    int width = 0;
    int height = 0;
    int budget = 0;
    double eps_in = 0.0;
    double r_escape = 0.0;
    /// Row-major, row 0 at the top of the window (max y), column 0 at min x.
    std::vector<VerdictKind> verdicts;

    VerdictKind at(int row, int col) const { return verdicts[static_cast<std::size_t>(row) * width + col]; }

    long long count(VerdictKind kind) const {
        long long c = 0;
        for (VerdictKind v : verdicts) c += v == kind;
        return c;
    }

    /// Pixel center of (row, col).
    PlanarPoint center(int row, int col) const {
        return {window.xmin + (col + 0.5) * (window.xmax - window.xmin) / width,
                window.ymax - (row + 0.5) * (window.ymax - window.ymin) / height};
    }
};

template <PlanarMap M>
BasinRaster basin_raster(const M& f, Region window, int width, int height, int budget = 10000,
                         double eps_in = 1e-8, double r_escape = 1e6, unsigned threads = 1) {
    if (width <= 0 || height <= 0) throw std::invalid_argument("raster dimensions must be positive");
    BasinRaster out{window, width, height, budget, eps_in, r_escape, {}};
    out.verdicts.assign(static_cast<std::size_t>(width) * height, VerdictKind::Undecided);
    detail::for_each_row(static_cast<std::size_t>(height), threads, [&](std::size_t row) {
        for (int col = 0; col < width; ++col) {
            const PlanarPoint p = out.center(static_cast<int>(row), col);
            out.verdicts[row * width + col] = classify_orbit(f, p, budget, eps_in, r_escape).kind;
        }
    });
    return out;
}

inline std::uint8_t pgm_code(VerdictKind v) {
    switch (v) {
        case VerdictKind::ConvergedToOrigin: return 255;
        case VerdictKind::Escaped: return 0;
        case VerdictKind::Undecided: return 128;
    }
    return 128;
}

/// Binary PGM ("P5", maxval 255).
inline std::string to_pgm(const BasinRaster& raster) {
    std::string out = "P5\n" + std::to_string(raster.width) + " " + std::to_string(raster.height) + "\n255\n";
    out.reserve(out.size() + raster.verdicts.size());
    for (VerdictKind v : raster.verdicts) out.push_back(static_cast<char>(pgm_code(v)));
    return out;
}

// ---------------------------------------------------------------------------
// Image curves

struct CurveSample {
    std::vector<double> thetas;
    std::vector<PlanarPoint> points;
};

template <PlanarMap M>
CurveSample image_curve(const M& f, double radius, int samples) {
    if (samples < 4) throw std::invalid_argument("image_curve needs at least 4 samples");
    CurveSample c;
    c.thetas.reserve(samples);
    c.points.reserve(samples);
    for (int i = 0; i < samples; ++i) {
        const double t = kTwoPi * i / samples;
        c.thetas.push_back(t);
        c.points.push_back(f(PlanarPoint{radius * std::cos(t), radius * std::sin(t)}));
    }
    return c;
}

/// The astroid (k/2)(-sin^3 t, cos^3 t), image of the unit circle under F4.
inline PlanarPoint astroid(double k, double t) {
    const double s = std::sin(t), c = std::cos(t);
    return {-0.5 * k * s * s * s, 0.5 * k * c * c * c};
}

/// det of the matrix with rows gamma(t) and gamma'(t) for the astroid.
inline double transversality_det(double k, double t) {
    const double s = std::sin(t), c = std::cos(t);
    return 0.75 * k * k * s * s * c * c;
}

/// Same determinant with gamma' from central differences.
inline double transversality_det_numeric(double k, double t, double h = 1e-5) {
    const PlanarPoint g = astroid(k, t);
    const PlanarPoint dg = (0.5 / h) * (astroid(k, t + h) - astroid(k, t - h));
    return g.x * dg.y - g.y * dg.x;
}

// ---------------------------------------------------------------------------
// Rotation numbers

struct Fraction {
    long long p = 0;
    long long q = 1;
    friend bool operator==(Fraction, Fraction) = default;
};

/// Last continued-fraction convergent of x whose denominator does not exceed
/// max_den.
inline Fraction best_rational(double x, long long max_den = 64) {
    long long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    double v = x;
    for (int it = 0; it < 64; ++it) {
        const double a_real = std::floor(v);
        const long long a = static_cast<long long>(a_real);
        const long long p2 = a * p1 + p0, q2 = a * q1 + q0;
        if (q2 > max_den) break;
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        const double frac = v - a_real;
        if (frac < 1e-15) break;
        v = 1.0 / frac;
    }
    if (q1 == 0) return {static_cast<long long>(std::llround(x)), 1};
    return {p1, q1};
}

struct RotationEstimate {
    double slope = 0.0;  // in [0, 1)
    Fraction rational;
    int iterates_used = 0;
};

/// Lift window used for orbit angles: per-step advances in (-pi/2, 3pi/2].
/// Half-turn advances (n = 2) stay away from the wrap point.
inline constexpr double kRotationLiftLower = -0.5 * kPi;

template <PlanarMap M>
RotationEstimate estimate_rotation(const M& f, PlanarPoint p0, int max_iters, long long max_den = 64) {
    if (p0.x == 0.0 && p0.y == 0.0) throw std::invalid_argument("rotation estimate needs p0 != 0");
    std::vector<double> angles;
    angles.reserve(static_cast<std::size_t>(max_iters) + 1);
    PlanarPoint p = p0;
    for (int i = 0; i <= max_iters; ++i) {
        if (!(p.norm() > 1e-12) || !p.finite() || p.norm() > kOverflowRadius) break;
        angles.push_back(to_polar(p).theta);
        p = f(p);
    }
    if (angles.size() < 8) throw NumericalError("orbit reached origin too fast");
    const std::vector<double> lift = angle_lift(angles, kRotationLiftLower);
    RotationEstimate est;
    est.iterates_used = static_cast<int>(angles.size());
    double slope = (lift.back() - lift.front()) / (kTwoPi * static_cast<double>(angles.size() - 1));
    slope -= std::floor(slope);
    if (slope >= 1.0) slope = 0.0;
    est.slope = slope;
    est.rational = best_rational(slope, max_den);
    if (est.rational.p == est.rational.q) est.rational = {0, 1};
    return est;
}

/// Seeded start at radius in [rmin, rmax] within `spread` sector widths of a
/// sector boundary ray. Beyond P these orbits stay off the origin's basin
/// for the whole run; generic points in an annulus need not.
inline PlanarPoint rotation_start(SeededSampler& rng, int n, double rmin, double rmax, double spread = 0.1) {
    const double width = kTwoPi / n;
    const int j = rng.index(n);
    const double r = rng.uniform(rmin, rmax);
    const double offset = rng.uniform(-spread, spread) * width;
    return from_polar({r, j * width + offset});
}

struct SectorCycleReport {
    std::vector<int> sectors;
    int violations = 0;
    bool pass = false;
};

/// Each image must lie in the closed sector after the current one. The
/// recorded index is that closed sector, so orbits converging onto a
/// boundary ray are not misread by the half-open sector_of.
template <PlanarMap M>
SectorCycleReport sector_cycle_check(const M& f, int n, PlanarPoint p0, int iters) {
    if (p0.x == 0.0 && p0.y == 0.0) throw std::invalid_argument("sector cycle check needs p0 != 0");
    SectorCycleReport rep;
    int current = sector_of(p0, n).j;
    rep.sectors.push_back(current);
    PlanarPoint p = f(p0);
    for (int i = 1; i <= iters; ++i) {
        if (!(p.norm() > 1e-12) || !p.finite()) break;
        const int expected = current % n + 1;
        if (in_closed_sector(p, expected, n)) {
            current = expected;
        } else {
            ++rep.violations;
            current = sector_of(p, n).j;
        }
        rep.sectors.push_back(current);
        p = f(p);
    }
    rep.pass = rep.violations == 0 && rep.sectors.size() >= 2;
    return rep;
}

}  // namespace znmap
