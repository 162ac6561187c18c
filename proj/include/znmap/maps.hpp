// Closed-form evaluation and differentiation of the map families
// F4, G4, Fn, H and Hn, plus a numerical inverse for the ray-preserving ones.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <string_view>

#include "geometry.hpp"

namespace znmap {

/// Upper end of the admissible interval for k, 2/sqrt(3).
inline const double kMaxK = 2.0 / std::sqrt(3.0);

class SzlenkParams {
public:
    explicit SzlenkParams(double k = 1.1) : k_(k) {
        if (!(k > 1.0 && k < kMaxK))
            throw std::invalid_argument("k must satisfy 1 < k < 2/sqrt(3), got " + std::to_string(k));
    }
    double k() const { return k_; }
    /// Radius (k-1)^(-1/2) of the period orbit through P.
    double periodic_radius() const { return 1.0 / std::sqrt(k_ - 1.0); }

private:
    double k_;
};

struct UnfoldParams {
    double alpha = 0.0;
    double beta = 0.0;
    double delta = 0.0;
};

/// Radial saturation profile: u(s) = s on [0, r0], slower growth beyond.
struct RadialProfile {
    double r0 = 1.0;
    double r_half = 1.0;

    RadialProfile(double onset, double half) : r0(onset), r_half(half) {
        if (!(onset > 0.0) || !(half > 0.0))
            throw std::invalid_argument("radial profile scales must be positive");
    }
    explicit RadialProfile(double onset) : RadialProfile(onset, onset) {}

    /// Default profile for a given k: r0 = 2 (k-1)^(-1/2), r_half = r0.
    static RadialProfile for_k(const SzlenkParams& k) { return RadialProfile(2.0 * k.periodic_radius()); }
};

/// Row-major 2x2 derivative [[a, b], [c, d]].
struct Jacobian2 {
    double a = 0.0, b = 0.0, c = 0.0, d = 0.0;

    double trace() const { return a + d; }
    double det() const { return a * d - b * c; }
    bool finite() const {
        return std::isfinite(a) && std::isfinite(b) && std::isfinite(c) && std::isfinite(d);
    }
    PlanarPoint apply(PlanarPoint v) const { return {a * v.x + b * v.y, c * v.x + d * v.y}; }

    friend Jacobian2 operator*(const Jacobian2& l, const Jacobian2& r) {
        return {l.a * r.a + l.b * r.c, l.a * r.b + l.b * r.d, l.c * r.a + l.d * r.c, l.c * r.b + l.d * r.d};
    }
    friend Jacobian2 operator+(const Jacobian2& l, const Jacobian2& r) {
        return {l.a + r.a, l.b + r.b, l.c + r.c, l.d + r.d};
    }
    friend Jacobian2 operator-(const Jacobian2& l, const Jacobian2& r) {
        return {l.a - r.a, l.b - r.b, l.c - r.c, l.d - r.d};
    }
    friend Jacobian2 operator*(double s, const Jacobian2& m) { return {s * m.a, s * m.b, s * m.c, s * m.d}; }

    double max_abs_entry() const {
        return std::max(std::max(std::abs(a), std::abs(b)), std::max(std::abs(c), std::abs(d)));
    }

    static Jacobian2 identity() { return {1.0, 0.0, 0.0, 1.0}; }

    std::array<std::complex<double>, 2> eigenvalues() const {
        const double tr = trace();
        const double disc = tr * tr - 4.0 * det();
        if (disc >= 0.0) {
            const double s = std::sqrt(disc);
            // avoid cancellation in the smaller root
            const double big = tr >= 0.0 ? 0.5 * (tr + s) : 0.5 * (tr - s);
            const double small = big != 0.0 ? det() / big : 0.0;
            return {std::complex<double>(big, 0.0), std::complex<double>(small, 0.0)};
        }
        const double im = 0.5 * std::sqrt(-disc);
        return {std::complex<double>(0.5 * tr, im), std::complex<double>(0.5 * tr, -im)};
    }

    double spectral_radius() const {
        const auto ev = eigenvalues();
        return std::max(std::abs(ev[0]), std::abs(ev[1]));
    }
};

// ---------------------------------------------------------------------------
// F4

inline PlanarPoint eval_f4(PlanarPoint p, const SzlenkParams& k) {
    const double den = 1.0 + p.x * p.x + p.y * p.y;
    return {-k.k() * p.y * p.y * p.y / den, k.k() * p.x * p.x * p.x / den};
}

/// Image angle of the ray at angle phi: the angle of (-sin^3, cos^3), written
/// as pi/2 + atan2(sin^3, cos^3) so that it is continuous through phi = 0 and
/// phi = pi/2 (values in [pi/2, pi] for phi in [0, pi/2]).
inline double szlenk_angle(double phi) {
    const double s = std::sin(phi), c = std::cos(phi);
    return 0.5 * kPi + std::atan2(s * s * s, c * c * c);
}

inline PolarPoint eval_f4_polar(PolarPoint q, const SzlenkParams& k) {
    if (q.r == 0.0) return {0.0, 0.0};
    const double s = std::sin(q.theta), c = std::cos(q.theta);
    const double shape = std::sqrt(c * c * c * c * c * c + s * s * s * s * s * s);
    const double psi = k.k() * q.r * q.r * q.r / (1.0 + q.r * q.r) * shape;
    return {psi, normalize_angle(szlenk_angle(q.theta))};
}

inline Jacobian2 jac_f4(PlanarPoint p, const SzlenkParams& k) {
    const double x = p.x, y = p.y, kk = k.k();
    const double n1 = 1.0 + x * x + y * y;
    const double d2 = n1 * n1;
    return {kk * 2.0 * x * y * y * y / d2, -kk * (3.0 * y * y * n1 - 2.0 * y * y * y * y) / d2,
            kk * (3.0 * x * x * n1 - 2.0 * x * x * x * x) / d2, -kk * 2.0 * x * x * x * y / d2};
}

/// Derivative of F4 written in polar coordinates on both sides,
/// (r, theta) -> (Psi4, Phi4). Upper triangular.
inline Jacobian2 jac_f4_polar(PolarPoint q, const SzlenkParams& k) {
    if (!(q.r > 0.0)) throw std::domain_error("polar chart singular at origin");
    const double r = q.r, kk = k.k();
    const double s = std::sin(q.theta), c = std::cos(q.theta);
    const double s2 = s * s, c2 = c * c;
    const double w = c2 * c2 * c2 + s2 * s2 * s2;
    const double rw = std::sqrt(w);
    const double rr = 1.0 + r * r;
    return {kk * r * r * (3.0 + r * r) / (rr * rr) * rw, kk * r * r * r / rr * 3.0 * s * c * (s2 * s2 - c2 * c2) / rw, 0.0,
            3.0 * s2 * c2 / w};
}

// ---------------------------------------------------------------------------
// G4 = F4 + alpha X1 + (beta + delta N) X2

inline PlanarPoint eval_g4(PlanarPoint p, const SzlenkParams& k, const UnfoldParams& u) {
    const PlanarPoint f = eval_f4(p, k);
    const double rot = u.beta + u.delta * (p.x * p.x + p.y * p.y);
    return {f.x + u.alpha * p.x - rot * p.y, f.y + u.alpha * p.y + rot * p.x};
}

inline Jacobian2 jac_g4(PlanarPoint p, const SzlenkParams& k, const UnfoldParams& u) {
    const double x = p.x, y = p.y, n = x * x + y * y;
    const Jacobian2 lin{u.alpha, -u.beta, u.beta, u.alpha};
    const Jacobian2 quad{-2.0 * x * y, -(n + 2.0 * y * y), n + 2.0 * x * x, 2.0 * x * y};
    return jac_f4(p, k) + lin + u.delta * quad;
}

// ---------------------------------------------------------------------------
// Radial saturation

inline double radial_u(double s, const RadialProfile& prof) {
    if (s <= prof.r0) return s;
    const double w = s - prof.r0;
    return prof.r0 + 0.5 * w + 0.5 * prof.r_half * (-std::expm1(-w / prof.r_half));
}

inline double radial_u_prime(double s, const RadialProfile& prof) {
    if (s <= prof.r0) return 1.0;
    return 0.5 + 0.5 * std::exp(-(s - prof.r0) / prof.r_half);
}

inline PlanarPoint eval_h(PlanarPoint p, const SzlenkParams& k, const RadialProfile& prof) {
    const PlanarPoint f = eval_f4(p, k);
    const double s = f.norm();
    if (s == 0.0) return {0.0, 0.0};
    if (s <= prof.r0) return f;
    return (radial_u(s, prof) / s) * f;
}

// ---------------------------------------------------------------------------
// Sector conjugation machinery shared by Fn and Hn.

/// Polar image of a ray map in the fundamental quarter: radius and its
/// partials, plus the image angle and its derivative.
struct RayImage {
    double radius = 0.0;
    double d_radius_dr = 0.0;
    double d_radius_dphi = 0.0;
    double angle = 0.0;
    double d_angle_dphi = 0.0;
};

/// F4 written in polar charts.
struct SzlenkCore {
    SzlenkParams k;

    double radius(double r, double phi) const {
        const double s = std::sin(phi), c = std::cos(phi);
        return k.k() * r * r * r / (1.0 + r * r) * std::sqrt(c * c * c * c * c * c + s * s * s * s * s * s);
    }

    RayImage image(double r, double phi) const {
        const Jacobian2 jp = jac_f4_polar({r, phi}, k);
        return {radius(r, phi), jp.a, jp.b, szlenk_angle(phi), jp.d};
    }
};

/// H = u(|F4|) F4 / |F4| in polar charts.
struct SaturatedCore {
    SzlenkParams k;
    RadialProfile profile;

    double radius(double r, double phi) const { return radial_u(SzlenkCore{k}.radius(r, phi), profile); }

    RayImage image(double r, double phi) const {
        RayImage im = SzlenkCore{k}.image(r, phi);
        const double du = radial_u_prime(im.radius, profile);
        im.radius = radial_u(im.radius, profile);
        im.d_radius_dr *= du;
        im.d_radius_dphi *= du;
        return im;
    }
};

namespace detail {

// Image of the point at radius r and angle 2pi j/n + local under the formula
// of sector j (0-based): R^j h_n core h_n^{-1} R^{-j}.
template <class Core>
PlanarPoint sector_formula_eval(const Core& core, double r, double local, int j, int n) {
    const double phi = n * local / 4.0;
    const double radius = core.radius(r, phi);
    const double angle = 4.0 * szlenk_angle(phi) / n + kTwoPi * j / n;
    return from_polar({radius, angle});
}

template <class Core>
Jacobian2 sector_formula_jacobian(const Core& core, double r, double local, int j, int n) {
    if (!(r > 0.0)) return {};
    const double phi = n * local / 4.0;
    const RayImage im = core.image(r, phi);
    const double theta = local + kTwoPi * j / n;
    const double big_theta = 4.0 * im.angle / n + kTwoPi * j / n;
    // A_n * D(core) * B_n in polar charts
    const Jacobian2 polar{im.d_radius_dr, im.d_radius_dphi * n / 4.0, 0.0, im.d_angle_dphi};
    const double co = std::cos(big_theta), so = std::sin(big_theta);
    const Jacobian2 out_chart{co, -im.radius * so, so, im.radius * co};
    const double ci = std::cos(theta), si = std::sin(theta);
    const Jacobian2 in_chart_inv{ci, si, -si / r, ci / r};
    return out_chart * polar * in_chart_inv;
}

// Sector (0-based) and clamped local angle of a nonzero point.
inline void sector_local(PlanarPoint p, int n, double& r, double& local, int& j) {
    const PolarPoint q = to_polar(p);
    r = q.r;
    j = sector_of_angle(q.theta, n).j - 1;
    local = q.theta - kTwoPi * j / n;
    if (local < 0.0) local += kTwoPi;
    if (local >= kTwoPi - kAngleTol) local = 0.0;
    local = std::clamp(local, 0.0, kTwoPi / n);
}

template <class Core>
PlanarPoint conjugated_eval(const Core& core, PlanarPoint p, int n) {
    if (p.x == 0.0 && p.y == 0.0) return {0.0, 0.0};
    double r, local;
    int j;
    sector_local(p, n, r, local, j);
    return sector_formula_eval(core, r, local, j, n);
}

template <class Core>
Jacobian2 conjugated_jacobian(const Core& core, PlanarPoint p, int n) {
    if (p.x == 0.0 && p.y == 0.0) return {};
    double r, local;
    int j;
    sector_local(p, n, r, local, j);
    return sector_formula_jacobian(core, r, local, j, n);
}

}  // namespace detail

/// Image of p under the analytic formula that defines Fn on sector j
/// (1-based), evaluated even slightly outside that sector. Used to compare the
/// two formulas that meet on a boundary ray.
inline PlanarPoint eval_fn_sector_formula(PlanarPoint p, const SzlenkParams& k, int n, int j) {
    const PolarPoint q = to_polar(p);
    const double base = kTwoPi * (j - 1) / n;
    const double local = std::remainder(q.theta - base, kTwoPi);
    return detail::sector_formula_eval(SzlenkCore{k}, q.r, local, j - 1, n);
}

inline Jacobian2 jac_fn_sector_formula(PlanarPoint p, const SzlenkParams& k, int n, int j) {
    const PolarPoint q = to_polar(p);
    const double base = kTwoPi * (j - 1) / n;
    const double local = std::remainder(q.theta - base, kTwoPi);
    return detail::sector_formula_jacobian(SzlenkCore{k}, q.r, local, j - 1, n);
}

inline PlanarPoint eval_fn(PlanarPoint p, const SzlenkParams& k, int n) {
    if (n < 2) throw std::invalid_argument("symmetry order must be >= 2");
    if (n == 4) return eval_f4(p, k);
    return detail::conjugated_eval(SzlenkCore{k}, p, n);
}

inline Jacobian2 jac_fn(PlanarPoint p, const SzlenkParams& k, int n) {
    if (n < 2) throw std::invalid_argument("symmetry order must be >= 2");
    return detail::conjugated_jacobian(SzlenkCore{k}, p, n);
}

inline PlanarPoint eval_hn(PlanarPoint p, const SzlenkParams& k, int n, const RadialProfile& prof) {
    if (n < 2) throw std::invalid_argument("symmetry order must be >= 2");
    if (n == 4) return eval_h(p, k, prof);
    return detail::conjugated_eval(SaturatedCore{k, prof}, p, n);
}

inline Jacobian2 jac_hn(PlanarPoint p, const SzlenkParams& k, int n, const RadialProfile& prof) {
    if (n < 2) throw std::invalid_argument("symmetry order must be >= 2");
    return detail::conjugated_jacobian(SaturatedCore{k, prof}, p, n);
}

inline Jacobian2 jac_h(PlanarPoint p, const SzlenkParams& k, const RadialProfile& prof) { return jac_hn(p, k, 4, prof); }

// ---------------------------------------------------------------------------
// MapSpec

enum class Family { F4, G4, Fn, H, Hn };

inline std::string_view family_name(Family f) {
    switch (f) {
        case Family::F4: return "f4";
        case Family::G4: return "g4";
        case Family::Fn: return "fn";
        case Family::H: return "h";
        case Family::Hn: return "hn";
    }
    return "?";
}

inline Family parse_family(std::string_view s) {
    if (s == "f4") return Family::F4;
    if (s == "g4") return Family::G4;
    if (s == "fn") return Family::Fn;
    if (s == "h") return Family::H;
    if (s == "hn") return Family::Hn;
    throw std::invalid_argument("unknown map family '" + std::string(s) + "'");
}

/// The single handle every analysis routine consumes. Immutable once built;
/// also usable directly as a callable planar map.
class MapSpec {
public:
    static MapSpec f4(SzlenkParams k = SzlenkParams{}) { return MapSpec(Family::F4, k, 4, {}, RadialProfile::for_k(k)); }
    static MapSpec g4(SzlenkParams k, UnfoldParams u) { return MapSpec(Family::G4, k, 4, u, RadialProfile::for_k(k)); }
    static MapSpec fn(SzlenkParams k, int n) { return MapSpec(Family::Fn, k, n, {}, RadialProfile::for_k(k)); }
    static MapSpec h(SzlenkParams k) { return MapSpec(Family::H, k, 4, {}, RadialProfile::for_k(k)); }
    static MapSpec h(SzlenkParams k, RadialProfile prof) { return MapSpec(Family::H, k, 4, {}, prof); }
    static MapSpec hn(SzlenkParams k, int n) { return MapSpec(Family::Hn, k, n, {}, RadialProfile::for_k(k)); }
    static MapSpec hn(SzlenkParams k, int n, RadialProfile prof) { return MapSpec(Family::Hn, k, n, {}, prof); }

    Family family() const { return family_; }
    const SzlenkParams& k() const { return k_; }
    int n() const { return n_; }
    const UnfoldParams& unfold() const { return unfold_; }
    const RadialProfile& profile() const { return profile_; }

    /// True for families whose restriction to each line ray is a
    /// homeomorphism onto another line ray.
    bool ray_preserving() const { return family_ != Family::G4; }

    PlanarPoint operator()(PlanarPoint p) const {
        switch (family_) {
            case Family::F4: return eval_f4(p, k_);
            case Family::G4: return eval_g4(p, k_, unfold_);
            case Family::Fn: return eval_fn(p, k_, n_);
            case Family::H: return eval_h(p, k_, profile_);
            case Family::Hn: return eval_hn(p, k_, n_, profile_);
        }
        return {};
    }

    Jacobian2 jacobian(PlanarPoint p) const {
        switch (family_) {
            case Family::F4: return jac_f4(p, k_);
            case Family::G4: return jac_g4(p, k_, unfold_);
            case Family::Fn: return jac_fn(p, k_, n_);
            case Family::H: return jac_h(p, k_, profile_);
            case Family::Hn: return jac_hn(p, k_, n_, profile_);
        }
        return {};
    }

private:
    MapSpec(Family f, SzlenkParams k, int n, UnfoldParams u, RadialProfile prof)
        : family_(f), k_(k), n_(n), unfold_(u), profile_(prof) {
        if (n < 2) throw std::invalid_argument("symmetry order must be >= 2");
    }

    Family family_;
    SzlenkParams k_;
    int n_;
    UnfoldParams unfold_;
    RadialProfile profile_;
};

// ---------------------------------------------------------------------------
// Inverse of the ray-preserving families.

class InversionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

template <class Core>
PlanarPoint invert_conjugated(const Core& core, PlanarPoint q, int n) {
    if (q.x == 0.0 && q.y == 0.0) return {0.0, 0.0};
    const PolarPoint target = to_polar(q);
    // the preimage lies one sector back
    const int jq = sector_of_angle(target.theta, n).j - 1;
    const int j = (jq + n - 1) % n;
    double local_image = target.theta - kTwoPi * j / n;
    if (local_image < 0.0) local_image += kTwoPi;
    local_image = std::clamp(local_image, kTwoPi / n, 2.0 * kTwoPi / n);
    const double phi_target = n * local_image / 4.0;  // in [pi/2, pi]

    // szlenk_angle is increasing from pi/2 to pi on [0, pi/2]
    double lo = 0.0, hi = 0.5 * kPi;
    for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        if (szlenk_angle(mid) < phi_target) lo = mid;
        else hi = mid;
    }
    const double phi = 0.5 * (lo + hi);

    // radius equation: strictly increasing in r
    const double want = target.r;
    double rlo = 0.0, rhi = 1.0;
    int grow = 0;
    while (core.radius(rhi, phi) < want) {
        rhi *= 2.0;
        if (++grow > 1100 || !std::isfinite(rhi)) throw InversionError("no preimage");
    }
    int it = 0;
    for (; it < 2000; ++it) {
        const double mid = 0.5 * (rlo + rhi);
        if (mid == rlo || mid == rhi) break;
        if (core.radius(mid, phi) < want) rlo = mid;
        else rhi = mid;
    }
    if (it == 2000) throw InversionError("did not converge");
    const double r = 0.5 * (rlo + rhi);
    return from_polar({r, kTwoPi * j / n + 4.0 * phi / n});
}

}  // namespace detail

/// Preimage of q under a ray-preserving family. Inverts the angle map by
/// bisection on the fundamental quarter, then the increasing radius map.
inline PlanarPoint invert_map(const MapSpec& spec, PlanarPoint q, double tol = 1e-12) {
    if (!spec.ray_preserving()) throw std::invalid_argument("invert_map needs a ray-preserving family");
    if (!q.finite()) throw std::invalid_argument("invert_map needs a finite target");
    PlanarPoint p;
    switch (spec.family()) {
        case Family::F4:
        case Family::Fn: p = detail::invert_conjugated(SzlenkCore{spec.k()}, q, spec.n()); break;
        default: p = detail::invert_conjugated(SaturatedCore{spec.k(), spec.profile()}, q, spec.n()); break;
    }
    if (distance(spec(p), q) > tol * (1.0 + q.norm())) throw InversionError("did not converge");
    return p;
}

}  // namespace znmap
