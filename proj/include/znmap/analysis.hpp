// Orbit iteration, periodic orbits and the numerical checks behind the
// dynamic properties of the map families.
#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <concepts>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include "geometry.hpp"
#include "maps.hpp"
#include "parallel.hpp"

namespace znmap {

inline constexpr std::uint64_t kDefaultSeed = 0x5EED;

/// Fixed-seed sampler. Doubles are built from the raw 64-bit stream so the
/// sequence does not depend on the standard library's distributions.
class SeededSampler {
public:
    explicit SeededSampler(std::uint64_t seed = kDefaultSeed) : engine_(seed) {}

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    int index(int count) { return static_cast<int>(uniform() * count); }

    /// Uniform in the disk of the given radius.
    PlanarPoint in_disk(double radius) {
        const double r = radius * std::sqrt(uniform());
        const double t = kTwoPi * uniform();
        return {r * std::cos(t), r * std::sin(t)};
    }

    /// Uniform angle and uniform radius in the annulus rmin <= |p| <= rmax.
    PlanarPoint in_annulus(double rmin, double rmax) {
        const double r = uniform(rmin, rmax);
        const double t = kTwoPi * uniform();
        return {r * std::cos(t), r * std::sin(t)};
    }

private:
    std::mt19937_64 engine_;
};

template <class M>
concept PlanarMap = requires(const M& f, PlanarPoint p) {
    { f(p) } -> std::convertible_to<PlanarPoint>;
};

template <class M>
concept DifferentiableMap = PlanarMap<M> && requires(const M& f, PlanarPoint p) {
    { f.jacobian(p) } -> std::convertible_to<Jacobian2>;
};

class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Coordinates beyond this are treated as overflow.
inline constexpr double kOverflowRadius = 1e150;

template <PlanarMap M>
PlanarPoint compose_power(const M& f, PlanarPoint p, int times) {
    for (int i = 0; i < times; ++i) p = f(p);
    return p;
}

/// Central-difference Jacobian of any planar map.
template <PlanarMap M>
Jacobian2 fd_jacobian(const M& f, PlanarPoint p, double h) {
    const PlanarPoint fxp = f(PlanarPoint{p.x + h, p.y}), fxm = f(PlanarPoint{p.x - h, p.y});
    const PlanarPoint fyp = f(PlanarPoint{p.x, p.y + h}), fym = f(PlanarPoint{p.x, p.y - h});
    const double s = 0.5 / h;
    return {(fxp.x - fxm.x) * s, (fyp.x - fym.x) * s, (fxp.y - fxm.y) * s, (fyp.y - fym.y) * s};
}

template <PlanarMap M>
Jacobian2 jacobian_of(const M& f, PlanarPoint p) {
    if constexpr (DifferentiableMap<M>) return f.jacobian(p);
    else return fd_jacobian(f, p, 1e-6 * (1.0 + p.norm()));
}

// ---------------------------------------------------------------------------
// Orbits

struct Orbit {
    PlanarPoint start;
    std::vector<PlanarPoint> points;  // points[0] == start
    bool escaped = false;             // stopped early on coordinate overflow
};

template <PlanarMap M>
Orbit iterate(const M& f, PlanarPoint p0, int steps) {
    if (steps < 0) throw std::invalid_argument("iterate needs steps >= 0");
    Orbit o{p0, {p0}, false};
    o.points.reserve(static_cast<std::size_t>(steps) + 1);
    PlanarPoint p = p0;
    for (int i = 0; i < steps; ++i) {
        p = f(p);
        if (!p.finite() || p.norm() > kOverflowRadius) {
            o.escaped = true;
            break;
        }
        o.points.push_back(p);
    }
    return o;
}

enum class VerdictKind { ConvergedToOrigin, Escaped, Undecided };

struct ConvergenceVerdict {
    VerdictKind kind = VerdictKind::Undecided;
    int steps = 0;
    int budget = 0;
    double eps_in = 1e-8;
    double r_escape = 1e6;
};

template <PlanarMap M>
ConvergenceVerdict classify_orbit(const M& f, PlanarPoint p0, int budget = 10000, double eps_in = 1e-8,
                                  double r_escape = 1e6) {
    if (!(eps_in < r_escape)) throw std::invalid_argument("classify_orbit needs eps_in < r_escape");
    ConvergenceVerdict v{VerdictKind::Undecided, 0, budget, eps_in, r_escape};
    PlanarPoint p = p0;
    for (int step = 0;; ++step) {
        const double r = p.norm();
        if (r < eps_in) {
            v.kind = VerdictKind::ConvergedToOrigin;
            v.steps = step;
            return v;
        }
        if (r > r_escape || !p.finite()) {
            v.kind = VerdictKind::Escaped;
            v.steps = step;
            return v;
        }
        if (step == budget) break;
        p = f(p);
    }
    v.steps = budget;
    return v;
}

// ---------------------------------------------------------------------------
// Periodic orbits

struct PeriodicOrbit {
    PlanarPoint point;
    int period = 1;
    std::vector<PlanarPoint> orbit;
    std::array<std::complex<double>, 2> multipliers{};
    double residual = 0.0;
    bool minimal = true;
    int newton_iterations = 0;

    bool hyperbolic(double margin = 1e-6) const {
        return std::abs(std::abs(multipliers[0]) - 1.0) > margin && std::abs(std::abs(multipliers[1]) - 1.0) > margin;
    }
};

/// Newton iteration on f^q(p) - p with a central-difference Jacobian of the
/// q-fold composite. Multipliers use the analytic Jacobian when the map has
/// one.
template <PlanarMap M>
PeriodicOrbit find_periodic(const M& f, PlanarPoint guess, int period, double tol = 1e-12, int max_iterations = 50) {
    if (period < 1) throw std::invalid_argument("period must be >= 1");
    auto residual_vec = [&](PlanarPoint p) { return compose_power(f, p, period) - p; };
    auto composite = [&](PlanarPoint p) { return compose_power(f, p, period); };

    PlanarPoint p = guess;
    PlanarPoint g = residual_vec(p);
    double res = g.norm();
    int it = 0;
    while (!(res <= tol)) {
        if (it == max_iterations) throw NumericalError("no convergence");
        ++it;
        const Jacobian2 jac = fd_jacobian(composite, p, 1e-7 * (1.0 + p.norm())) - Jacobian2::identity();
        const double det = jac.det();
        const double scale = std::max(1.0, jac.max_abs_entry() * jac.max_abs_entry());
        if (!std::isfinite(det) || std::abs(det) < 1e-14 * scale) throw NumericalError("singular Newton system");
        const PlanarPoint step{-(jac.d * g.x - jac.b * g.y) / det, -(-jac.c * g.x + jac.a * g.y) / det};

        double lambda = 1.0;
        bool improved = false;
        for (int back = 0; back < 30; ++back, lambda *= 0.5) {
            const PlanarPoint trial = p + lambda * step;
            const PlanarPoint gt = residual_vec(trial);
            const double rt = gt.norm();
            if (std::isfinite(rt) && rt < res) {
                p = trial;
                g = gt;
                res = rt;
                improved = true;
                break;
            }
        }
        if (!improved) throw NumericalError("no convergence");
    }

    PeriodicOrbit out;
    out.point = p;
    out.period = period;
    out.residual = res;
    out.newton_iterations = it;
    out.orbit.reserve(static_cast<std::size_t>(period));
    Jacobian2 product = Jacobian2::identity();
    PlanarPoint q = p;
    for (int i = 0; i < period; ++i) {
        out.orbit.push_back(q);
        product = jacobian_of(f, q) * product;
        q = f(q);
    }
    out.multipliers = product.eigenvalues();
    for (int d = 1; d < period; ++d) {
        if (period % d != 0) continue;
        if (!(distance(compose_power(f, p, d), p) > 10.0 * tol)) out.minimal = false;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Symmetry and ray checks

struct EquivarianceStats {
    double max_abs = 0.0;
    double max_scaled = 0.0;  // max of |f(Rp) - R f(p)| / (1 + |p|^3)
    int samples = 0;
};

/// Max of |f(R_n p) - R_n f(p)| over seeded points in the disk of the given
/// radius.
template <PlanarMap M>
EquivarianceStats equivariance_residual(const M& f, int n, int samples, double radius,
                                        std::uint64_t seed = kDefaultSeed) {
    if (samples < 1) throw std::invalid_argument("samples must be >= 1");
    const GroupElement g(1, n);
    SeededSampler rng(seed);
    EquivarianceStats st;
    st.samples = samples;
    for (int i = 0; i < samples; ++i) {
        const PlanarPoint p = rng.in_disk(radius);
        const double e = distance(f(rotate(p, g)), rotate(f(p), g));
        const double r = p.norm();
        st.max_abs = std::max(st.max_abs, e);
        st.max_scaled = std::max(st.max_scaled, e / (1.0 + r * r * r));
    }
    return st;
}

struct RayCheckReport {
    int directions = 0;
    double max_angle_spread = 0.0;
    bool radii_increasing = true;
    double tolerance = 1e-10;
    bool pass = false;
};

/// Images of t v for t over `radii` (ascending) must stay on one ray, with
/// strictly increasing distance from the origin, for `directions` equally
/// spaced unit vectors v.
template <PlanarMap M>
RayCheckReport ray_image_check(const M& f, int directions, const std::vector<double>& radii, double tol = 1e-10) {
    RayCheckReport rep;
    rep.directions = directions;
    rep.tolerance = tol;
    for (int i = 0; i < directions; ++i) {
        const double a = kTwoPi * i / directions;
        const PlanarPoint v{std::cos(a), std::sin(a)};
        double first_angle = 0.0, last_radius = -1.0;
        for (std::size_t t = 0; t < radii.size(); ++t) {
            const PlanarPoint img = f(radii[t] * v);
            const PolarPoint q = to_polar(img);
            if (t == 0) first_angle = q.theta;
            else rep.max_angle_spread = std::max(rep.max_angle_spread, std::abs(std::remainder(q.theta - first_angle, kTwoPi)));
            if (!(q.r > last_radius)) rep.radii_increasing = false;
            last_radius = q.r;
        }
    }
    rep.pass = rep.max_angle_spread <= tol && rep.radii_increasing;
    return rep;
}

struct SectorMapReport {
    int samples = 0;
    int interior_failures = 0;
    double max_boundary_error = 0.0;
    double tolerance = 1e-10;
    bool pass = false;
};

/// Seeded points of each closed sector S_j must land in S_{j+1}; points on
/// the boundary ray at 2pi(j-1)/n must land on the ray at 2pi j/n.
template <PlanarMap M>
SectorMapReport sector_map_check(const M& f, int n, int samples, double radius = 10.0,
                                 std::uint64_t seed = kDefaultSeed, double tol = 1e-10) {
    SectorMapReport rep;
    rep.samples = samples;
    rep.tolerance = tol;
    const double width = kTwoPi / n;
    SeededSampler rng(seed);
    for (int i = 0; i < samples; ++i) {
        const int j = rng.index(n);
        const double a = width * (j + rng.uniform());
        const double r = radius * (1.0 - rng.uniform());  // (0, radius]
        const PlanarPoint img = f(PlanarPoint{r * std::cos(a), r * std::sin(a)});
        const double rel = std::remainder(to_polar(img).theta - width * (j + 1), kTwoPi);
        if (img.norm() == 0.0 || rel < -kAngleTol || rel > width + kAngleTol) ++rep.interior_failures;
    }
    for (int j = 0; j < n; ++j) {
        const double a = width * j;
        for (double r : {0.1, 0.5, 1.0, 3.0, 10.0}) {
            const PlanarPoint img = f(PlanarPoint{r * std::cos(a), r * std::sin(a)});
            const double err = std::abs(std::remainder(to_polar(img).theta - width * (j + 1), kTwoPi));
            rep.max_boundary_error = std::max(rep.max_boundary_error, err);
        }
    }
    rep.pass = rep.interior_failures == 0 && rep.max_boundary_error <= tol;
    return rep;
}

// ---------------------------------------------------------------------------
// Gluing across sector boundaries

struct BoundarySmoothnessReport {
    int n = 4;
    double r = 1.0;
    double boundary_angle = 0.0;
    /// Max entry difference between the analytic Jacobians of the two sector
    /// formulas at the boundary point.
    double analytic_mismatch = 0.0;
    std::vector<double> h;
    /// Max entry difference of the one-sided difference Jacobians per h.
    std::vector<double> fd_mismatch;
    bool decreasing = true;
    double tolerance = 0.0;
    /// sup over |p| = h of |Fn(p)| / h, per h.
    std::vector<double> origin_ratio;
    bool origin_decreasing = true;
    bool pass = false;
};

namespace detail {

// Jacobian assembled from directional derivatives along u_r and u_t.
inline Jacobian2 from_directional(PlanarPoint d_r, PlanarPoint d_t, PlanarPoint u_r, PlanarPoint u_t) {
    // J = [d_r d_t] [u_r u_t]^T, since [u_r u_t] is orthogonal
    return {d_r.x * u_r.x + d_t.x * u_t.x, d_r.x * u_r.y + d_t.x * u_t.y, d_r.y * u_r.x + d_t.y * u_t.x,
            d_r.y * u_r.y + d_t.y * u_t.y};
}

}  // namespace detail

/// Compares the derivatives of Fn computed from the two sectors meeting on
/// the ray at angle 2pi j/n, at radius r. Also checks differentiability at
/// the origin through sup_{|p|=h} |Fn(p)|/h.
inline BoundarySmoothnessReport boundary_smoothness_check(const SzlenkParams& k, int n, double r,
                                                          const std::vector<double>& h_sequence, int j = 1) {
    if (!(r > 0.0)) throw std::invalid_argument("boundary check needs r > 0");
    BoundarySmoothnessReport rep;
    rep.n = n;
    rep.r = r;
    rep.boundary_angle = kTwoPi * j / n;
    rep.h = h_sequence;
    rep.tolerance = 1e-6 * (1.0 + r * r);
    const double floor = 1e-9 * (1.0 + r * r);

    const PlanarPoint u_r{std::cos(rep.boundary_angle), std::sin(rep.boundary_angle)};
    const PlanarPoint u_t{-u_r.y, u_r.x};
    const PlanarPoint xi = r * u_r;

    const int lower = ((j - 1) % n + n) % n + 1;
    const int upper = lower % n + 1;
    const Jacobian2 j_lower = jac_fn_sector_formula(xi, k, n, lower);
    const Jacobian2 j_upper = jac_fn_sector_formula(xi, k, n, upper);
    rep.analytic_mismatch = (j_lower - j_upper).max_abs_entry();

    auto f = [&](PlanarPoint p) { return eval_fn(p, k, n); };
    const PlanarPoint f0 = f(xi);
    for (double h : h_sequence) {
        const PlanarPoint d_r = (0.5 / h) * (f(xi + h * u_r) - f(xi - h * u_r));
        // second-order one-sided stencils, +u_t into the upper sector
        const PlanarPoint d_up = (0.5 / h) * (4.0 * f(xi + h * u_t) - f(xi + 2.0 * h * u_t) - 3.0 * f0);
        const PlanarPoint d_down = (-0.5 / h) * (4.0 * f(xi - h * u_t) - f(xi - 2.0 * h * u_t) - 3.0 * f0);
        const Jacobian2 side_up = detail::from_directional(d_r, d_up, u_r, u_t);
        const Jacobian2 side_down = detail::from_directional(d_r, d_down, u_r, u_t);
        rep.fd_mismatch.push_back((side_up - side_down).max_abs_entry());

        double sup = 0.0;
        for (int i = 0; i < 360; ++i) {
            const double a = kTwoPi * i / 360.0;
            sup = std::max(sup, f(PlanarPoint{h * std::cos(a), h * std::sin(a)}).norm() / h);
        }
        rep.origin_ratio.push_back(sup);
    }
    for (std::size_t i = 1; i < rep.fd_mismatch.size(); ++i) {
        if (!(rep.fd_mismatch[i] < rep.fd_mismatch[i - 1] || rep.fd_mismatch[i] <= floor)) rep.decreasing = false;
        if (!(rep.origin_ratio[i] < rep.origin_ratio[i - 1] || rep.origin_ratio[i] == 0.0)) rep.origin_decreasing = false;
    }
    const double last = rep.fd_mismatch.empty() ? 0.0 : rep.fd_mismatch.back();
    rep.pass = last <= rep.tolerance && rep.decreasing && rep.origin_decreasing &&
               rep.analytic_mismatch <= 1e-10 * (1.0 + r * r);
    return rep;
}

// ---------------------------------------------------------------------------
// Eigenvalue scans

struct Region {
    double xmin = -1.0, xmax = 1.0, ymin = -1.0, ymax = 1.0;
};

struct SpectralSample {
    double max_modulus = 0.0;
    PlanarPoint argmax;
    long long samples = 0;
    /// Grid points with a real (nonzero discriminant) spectrum, reported
    /// for information.
    long long real_spectrum_points = 0;
    Region region;
};

/// Maximum eigenvalue modulus of the analytic Jacobian over a
/// grid_x by grid_y lattice including the region's edges. Rows may be split
/// across threads; the reduction runs in row order so the result does not
/// depend on the split.
template <DifferentiableMap M>
SpectralSample spectral_scan(const M& f, Region region, int grid_x, int grid_y, unsigned threads = 1) {
    if (grid_x < 2 || grid_y < 2) throw std::invalid_argument("spectral_scan needs at least a 2x2 grid");
    struct RowMax {
        double value = -1.0;
        int col = 0;
        long long real = 0;
    };
    std::vector<RowMax> rows(static_cast<std::size_t>(grid_y));
    auto coord = [](double lo, double hi, int i, int count) { return lo + (hi - lo) * i / (count - 1); };
    detail::for_each_row(rows.size(), threads, [&](std::size_t row) {
        const double y = coord(region.ymin, region.ymax, static_cast<int>(row), grid_y);
        RowMax best;
        for (int c = 0; c < grid_x; ++c) {
            const double x = coord(region.xmin, region.xmax, c, grid_x);
            const Jacobian2 jac = f.jacobian(PlanarPoint{x, y});
            const double m = jac.spectral_radius();
            const double tr = jac.trace();
            if (tr * tr - 4.0 * jac.det() > 0.0) ++best.real;
            if (m > best.value) {
                best.value = m;
                best.col = c;
            }
        }
        rows[row] = best;
    });
    SpectralSample out;
    out.region = region;
    out.samples = static_cast<long long>(grid_x) * grid_y;
    out.max_modulus = -1.0;
    for (std::size_t row = 0; row < rows.size(); ++row) {
        out.real_spectrum_points += rows[row].real;
        if (rows[row].value > out.max_modulus) {
            out.max_modulus = rows[row].value;
            out.argmax = {coord(region.xmin, region.xmax, rows[row].col, grid_x),
                          coord(region.ymin, region.ymax, static_cast<int>(row), grid_y)};
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Properness of the beta family

struct ProperRadius {
    double r = 0.0;
    double min_norm = 0.0;
    double bound = 0.0;
    bool pass = false;
};

struct ProperReport {
    std::vector<ProperRadius> radii;
    bool pass = false;
};

/// For g = G4(., alpha=0, beta, delta=0): min over sampled angles of |g| on
/// the circle of radius r must be at least (k/4) r, for every r > 1.
inline ProperReport properness_check(const SzlenkParams& k, double beta, const std::vector<double>& radii,
                                     int theta_samples) {
    ProperReport rep;
    rep.pass = true;
    const UnfoldParams u{0.0, beta, 0.0};
    for (double r : radii) {
        if (!(r > 1.0)) throw std::invalid_argument("properness_check needs radii > 1");
        ProperRadius pr{r, std::numeric_limits<double>::infinity(), 0.25 * k.k() * r, false};
        for (int i = 0; i < theta_samples; ++i) {
            const double a = kTwoPi * i / theta_samples;
            pr.min_norm = std::min(pr.min_norm, eval_g4(PlanarPoint{r * std::cos(a), r * std::sin(a)}, k, u).norm());
        }
        pr.pass = pr.min_norm >= pr.bound;
        rep.pass = rep.pass && pr.pass;
        rep.radii.push_back(pr);
    }
    return rep;
}

}  // namespace znmap
