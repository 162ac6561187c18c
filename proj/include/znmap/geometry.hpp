// Planar and polar points, the cyclic rotation action, sector bookkeeping,
// the angular conjugacy h_n and angle lifting.
#pragma once

#include <cmath>
#include <numbers>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

namespace znmap {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Absolute tolerance used for every angle comparison.
inline constexpr double kAngleTol = 1e-12;

struct PlanarPoint {
    double x = 0.0;
    double y = 0.0;

    friend PlanarPoint operator+(PlanarPoint a, PlanarPoint b) { return {a.x + b.x, a.y + b.y}; }
    friend PlanarPoint operator-(PlanarPoint a, PlanarPoint b) { return {a.x - b.x, a.y - b.y}; }
    friend PlanarPoint operator*(double s, PlanarPoint a) { return {s * a.x, s * a.y}; }
    friend bool operator==(PlanarPoint, PlanarPoint) = default;

    double norm() const { return std::hypot(x, y); }
    bool finite() const { return std::isfinite(x) && std::isfinite(y); }
};

inline double distance(PlanarPoint a, PlanarPoint b) { return (a - b).norm(); }

/// r >= 0, theta in [0, 2pi); the origin is (0, 0).
struct PolarPoint {
    double r = 0.0;
    double theta = 0.0;
};

/// Maps any angle to [0, 2pi).
inline double normalize_angle(double theta) {
    double t = std::fmod(theta, kTwoPi);
    if (t < 0.0) t += kTwoPi;
    if (t >= kTwoPi) t = 0.0;
    return t;
}

inline PolarPoint to_polar(PlanarPoint p) {
    const double r = p.norm();
    if (r == 0.0) return {0.0, 0.0};
    return {r, normalize_angle(std::atan2(p.y, p.x))};
}

inline PlanarPoint from_polar(PolarPoint q) {
    return {q.r * std::cos(q.theta), q.r * std::sin(q.theta)};
}

/// R_n^m, the m-th power of the rotation by 2pi/n.
struct GroupElement {
    int m = 0;
    int n = 4;

    GroupElement(int power, int order) : n(order) {
        if (order < 2) throw std::invalid_argument("group order must be >= 2");
        m = ((power % order) + order) % order;
    }

    GroupElement inverse() const { return GroupElement(-m, n); }
};

namespace detail {

// cos/sin of 2pi*m/n, exact when the angle is a multiple of a quarter turn.
inline void rotation_cos_sin(int m, int n, double& c, double& s) {
    if ((4 * m) % n == 0) {
        switch ((4 * m / n) % 4) {
            case 0: c = 1.0; s = 0.0; return;
            case 1: c = 0.0; s = 1.0; return;
            case 2: c = -1.0; s = 0.0; return;
            default: c = 0.0; s = -1.0; return;
        }
    }
    const double a = kTwoPi * m / n;
    c = std::cos(a);
    s = std::sin(a);
}

}  // namespace detail

inline PlanarPoint rotate(PlanarPoint p, GroupElement g) {
    double c, s;
    detail::rotation_cos_sin(g.m, g.n, c, s);
    return {c * p.x - s * p.y, s * p.x + c * p.y};
}

/// Sector S_{j,n}, 1 <= j <= n.
struct SectorIndex {
    int j = 1;
    int n = 4;
    friend bool operator==(SectorIndex, SectorIndex) = default;
};

/// Sector index of an angle in [0, 2pi) under the half-open convention
/// [2pi(j-1)/n, 2pi j/n); angles within kAngleTol below a boundary count as
/// lying on it.
inline SectorIndex sector_of_angle(double theta, int n) {
    const double width = kTwoPi / n;
    const double t = normalize_angle(theta) / width;
    int j0 = static_cast<int>(std::floor(t));
    if ((j0 + 1 - t) * width < kAngleTol) ++j0;
    return {(j0 % n + n) % n + 1, n};
}

inline SectorIndex sector_of(PlanarPoint p, int n) {
    if (n < 2) throw std::invalid_argument("symmetry order must be >= 2");
    if (p.x == 0.0 && p.y == 0.0) throw std::domain_error("sector undefined at origin");
    return sector_of_angle(to_polar(p).theta, n);
}

/// Membership in the closed sector [2pi(j-1)/n, 2pi j/n], with angular slack tol.
inline bool in_closed_sector(PlanarPoint p, int j, int n, double tol = kAngleTol) {
    if (n < 2) throw std::invalid_argument("symmetry order must be >= 2");
    if (p.x == 0.0 && p.y == 0.0) return true;
    const double width = kTwoPi / n;
    const double mid = (j - 0.5) * width;
    const double off = std::abs(std::remainder(to_polar(p).theta - mid, kTwoPi));
    return off <= 0.5 * width + tol;
}

/// h_n: (r, theta) -> (r, 4 theta / n).
inline PlanarPoint h_map(PlanarPoint p, int n) {
    if (n < 2) throw std::invalid_argument("symmetry order must be >= 2");
    if (n == 4) return p;
    const PolarPoint q = to_polar(p);
    return from_polar({q.r, 4.0 * q.theta / n});
}

/// h_n^{-1}: (r, theta) -> (r, n theta / 4), applied verbatim to the
/// principal angle in [0, 2pi).
inline PlanarPoint h_inv(PlanarPoint p, int n) {
    if (n < 2) throw std::invalid_argument("symmetry order must be >= 2");
    if (n == 4) return p;
    const PolarPoint q = to_polar(p);
    return from_polar({q.r, n * q.theta / 4.0});
}

/// Continuous lift of a sequence of angles: successive differences are moved
/// by multiples of 2pi into (lower, lower + 2pi]. The default window is
/// (-pi, pi].
inline std::vector<double> angle_lift(std::span<const double> thetas, double lower = -kPi) {
    std::vector<double> out;
    out.reserve(thetas.size());
    if (thetas.empty()) return out;
    out.push_back(thetas[0]);
    for (std::size_t i = 1; i < thetas.size(); ++i) {
        double d = thetas[i] - thetas[i - 1];
        d -= kTwoPi * std::ceil((d - lower) / kTwoPi - 1.0);
        // ceil leaves d in (lower, lower + 2pi]; guard the rounding edges
        if (d <= lower) d += kTwoPi;
        if (d > lower + kTwoPi) d -= kTwoPi;
        out.push_back(out.back() + d);
    }
    return out;
}

}  // namespace znmap
