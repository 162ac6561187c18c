// Verification suites. Each check returns one CheckResult carrying the
// parameters it ran with, the observed statistic and the tolerance.
#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "analysis.hpp"
#include "geometry.hpp"
#include "maps.hpp"
#include "singularity.hpp"
#include "topology.hpp"

namespace znmap {

inline constexpr const char* kToolVersion = "0.1.0";

struct CheckResult {
    std::string name;
    std::vector<std::pair<std::string, double>> parameters;
    double statistic = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

struct VerifyConfig {
    double k = 1.1;
    std::optional<int> n;  // restricts the n-ranges when set
    std::uint64_t seed = kDefaultSeed;
    unsigned threads = 0;  // 0: hardware concurrency

    std::vector<int> orders(std::vector<int> defaults) const {
        if (n) return {*n};
        return defaults;
    }
};

namespace detail {

inline std::vector<int> range_n(int lo, int hi) {
    std::vector<int> out;
    for (int i = lo; i <= hi; ++i) out.push_back(i);
    return out;
}

inline std::string join_failures(const std::vector<std::string>& items) {
    std::string s;
    for (const auto& i : items) s += (s.empty() ? "" : "; ") + i;
    return s;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Individual checks

inline CheckResult check_equivariance_suite(const VerifyConfig& cfg) {
    CheckResult r{"equivariance", {{"k", cfg.k}, {"samples", 1e4}, {"radius", 10.0}}, 0.0, 1e-12, true, {}, 0.0};
    const SzlenkParams k(cfg.k);
    std::vector<std::string> bad;
    for (int n : cfg.orders(detail::range_n(2, 8))) {
        const EquivarianceStats st = equivariance_residual(MapSpec::fn(k, n), n, 10000, 10.0, cfg.seed);
        r.statistic = std::max(r.statistic, st.max_scaled);
        if (!(st.max_scaled <= r.tolerance)) bad.push_back("n=" + std::to_string(n));
    }
    r.pass = bad.empty();
    r.detail = bad.empty() ? "max |F(Rp) - RF(p)| / (1 + |p|^3)" : "failed for " + detail::join_failures(bad);
    return r;
}

inline CheckResult check_periodic_orbit(const VerifyConfig& cfg) {
    CheckResult r{"periodic_orbit", {{"k", cfg.k}, {"x0", 3.0}, {"y0", 0.1}, {"multiplier_margin", 1e-6}},
                  0.0, 1e-10, true, {}, 0.0};
    const SzlenkParams k(cfg.k);
    const PlanarPoint target{k.periodic_radius(), 0.0};
    std::vector<std::string> bad;
    for (int n : cfg.orders(detail::range_n(2, 8))) {
        try {
            const PeriodicOrbit orb = find_periodic(MapSpec::fn(k, n), {3.0, 0.1}, n);
            const double err = distance(orb.point, target);
            r.statistic = std::max(r.statistic, err);
            if (!(err <= r.tolerance)) bad.push_back("n=" + std::to_string(n) + " distance");
            if (!orb.minimal) bad.push_back("n=" + std::to_string(n) + " not minimal");
            if (!orb.hyperbolic(1e-6)) bad.push_back("n=" + std::to_string(n) + " not hyperbolic");
        } catch (const NumericalError& e) {
            bad.push_back("n=" + std::to_string(n) + " " + e.what());
            r.statistic = std::numeric_limits<double>::infinity();
        }
    }
    r.pass = bad.empty();
    r.detail = bad.empty() ? "distance of Newton limit from P" : detail::join_failures(bad);
    return r;
}

inline CheckResult check_local_attractor(const VerifyConfig& cfg) {
    CheckResult r{"local_attractor", {{"k", cfg.k}, {"samples", 1e3}, {"radius", 0.9}, {"budget", 200}},
                  0.0, 1e-14, true, {}, 0.0};
    const SzlenkParams k(cfg.k);
    std::vector<MapSpec> maps{MapSpec::f4(k)};
    for (int n : cfg.orders(detail::range_n(2, 8))) maps.push_back(MapSpec::fn(k, n));
    std::vector<std::string> bad;
    for (const MapSpec& f : maps) {
        const std::string tag = std::string(family_name(f.family())) + " n=" + std::to_string(f.n());
        const double j0 = f.jacobian({0.0, 0.0}).max_abs_entry();
        r.statistic = std::max(r.statistic, j0);
        if (!(j0 <= r.tolerance)) bad.push_back(tag + " jacobian at origin");
        SeededSampler rng(cfg.seed);
        int failures = 0;
        for (int i = 0; i < 1000; ++i)
            if (classify_orbit(f, rng.in_disk(0.9), 200).kind != VerdictKind::ConvergedToOrigin) ++failures;
        if (failures > 0) bad.push_back(tag + " " + std::to_string(failures) + " starts not converged");
    }
    r.pass = bad.empty();
    r.detail = bad.empty() ? "max |DF(0)| entry; all starts converged" : detail::join_failures(bad);
    return r;
}

inline CheckResult check_eigenvalue_bound(const VerifyConfig& cfg) {
    const SzlenkParams k(cfg.k);
    const double bound = k.k() * std::sqrt(3.0) / 2.0;
    CheckResult r{"eigenvalue_bound", {{"k", cfg.k}, {"grid", 1000}, {"half_width", 20.0}, {"axis_tolerance", 1e-14}},
                  0.0, bound, true, {}, 0.0};
    const MapSpec f = MapSpec::f4(k);
    const SpectralSample s = spectral_scan(f, Region{-20, 20, -20, 20}, 1000, 1000, cfg.threads);
    r.statistic = s.max_modulus;
    double axis = 0.0;
    for (int i = 0; i <= 1000; ++i) {
        const double t = -20.0 + 40.0 * i / 1000.0;
        axis = std::max(axis, f.jacobian({t, 0.0}).spectral_radius());
        axis = std::max(axis, f.jacobian({0.0, t}).spectral_radius());
    }
    r.parameters.emplace_back("axis_max", axis);
    r.pass = s.max_modulus < bound && axis <= 1e-14;
    char buf[160];
    std::snprintf(buf, sizeof buf, "grid max %.9f at (%.6g, %.6g); axis max %.3g", s.max_modulus, s.argmax.x,
                  s.argmax.y, axis);
    r.detail = buf;
    return r;
}

struct ContinuationRow {
    double beta = 0.0;
    PlanarPoint point;
    double residual = 0.0;
    double max_multiplier = 0.0;
    bool minimal = false;
    bool converged = false;
};

/// Follows the period-4 orbit through P along beta (alpha, delta fixed),
/// starting Newton at P and reusing each solution as the next guess.
inline std::vector<ContinuationRow> continue_period4(const SzlenkParams& k, double alpha, double delta,
                                                     const std::vector<double>& betas) {
    std::vector<ContinuationRow> rows;
    PlanarPoint guess{k.periodic_radius(), 0.0};
    for (double beta : betas) {
        ContinuationRow row;
        row.beta = beta;
        try {
            const PeriodicOrbit orb = find_periodic(MapSpec::g4(k, {alpha, beta, delta}), guess, 4);
            row.point = orb.point;
            row.residual = orb.residual;
            row.max_multiplier = std::max(std::abs(orb.multipliers[0]), std::abs(orb.multipliers[1]));
            row.minimal = orb.minimal;
            row.converged = true;
            guess = orb.point;
        } catch (const NumericalError&) {
            row.point = guess;
            row.residual = std::numeric_limits<double>::infinity();
        }
        rows.push_back(row);
    }
    return rows;
}

inline CheckResult check_unfolding(const VerifyConfig& cfg) {
    CheckResult r{"unfolding_family", {{"k", cfg.k}, {"alpha", 0.0}, {"delta", 0.0}, {"grid", 1000},
                  {"half_width", 20.0}, {"orbit_residual_tolerance", 1e-10}}, 0.0, 1.0, true, {}, 0.0};
    const SzlenkParams k(cfg.k);
    std::vector<double> betas;
    for (int i = 1; i <= 10; ++i) betas.push_back(0.01 * i);
    std::vector<std::string> bad;

    for (double beta : betas) {
        const SpectralSample s =
            spectral_scan(MapSpec::g4(k, {0.0, beta, 0.0}), Region{-20, 20, -20, 20}, 1000, 1000, cfg.threads);
        r.statistic = std::max(r.statistic, s.max_modulus);
        if (!(s.max_modulus < 1.0)) {
            char buf[96];
            std::snprintf(buf, sizeof buf, "beta=%.2f spectral max %.6f at (%.4g, %.4g)", beta, s.max_modulus,
                          s.argmax.x, s.argmax.y);
            bad.push_back(buf);
        }
    }
    for (const ContinuationRow& row : continue_period4(k, 0.0, 0.0, betas)) {
        if (!(row.converged && row.residual <= 1e-10)) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "beta=%.2f orbit residual %.3g", row.beta, row.residual);
            bad.push_back(buf);
        }
    }
    // At the origin DG4 = [[alpha, -beta], [beta, alpha]], eigenvalues alpha +- i beta.
    double origin_err = 0.0;
    int boundary_mismatch = 0;
    for (double alpha : {-1.2, -0.8, -0.3, 0.0, 0.4, 0.7, 1.1})
        for (double beta : {-1.0, -0.6, 0.0, 0.3, 0.71, 0.95}) {
            const double rho = MapSpec::g4(k, {alpha, beta, 0.0}).jacobian({0.0, 0.0}).spectral_radius();
            origin_err = std::max(origin_err, std::abs(rho - std::hypot(alpha, beta)));
            if ((rho < 1.0) != (alpha * alpha + beta * beta < 1.0)) ++boundary_mismatch;
        }
    r.parameters.emplace_back("origin_eigen_error", origin_err);
    if (origin_err > 1e-15 || boundary_mismatch > 0) bad.push_back("origin eigenvalues differ from alpha +- i beta");
    r.pass = bad.empty();
    r.detail = bad.empty() ? "max spectral modulus over beta in {0.01..0.1}" : detail::join_failures(bad);
    return r;
}

inline CheckResult check_properness(const VerifyConfig& cfg) {
    CheckResult r{"properness", {{"k", cfg.k}, {"theta_samples", 360}}, 0.0, 1.0, true, {}, 0.0};
    const SzlenkParams k(cfg.k);
    double worst = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 10; ++i) {
        const ProperReport rep = properness_check(k, 0.01 * i, {2.0, 10.0, 100.0}, 360);
        for (const ProperRadius& pr : rep.radii) worst = std::min(worst, pr.min_norm / pr.bound);
    }
    r.statistic = worst;
    r.pass = worst >= 1.0;
    r.detail = "min |g(r,theta)| / (k r / 4) over r in {2,10,100}, beta in {0..0.1}";
    return r;
}

inline CheckResult check_gluing(const VerifyConfig& cfg) {
    CheckResult r{"gluing_smoothness", {{"k", cfg.k}, {"h", 1e-6}}, 0.0, 1e-6, true, {}, 0.0};
    const SzlenkParams k(cfg.k);
    const std::vector<double> hs{1e-3, 1e-4, 1e-5, 1e-6};
    std::vector<std::string> bad;
    for (int n : cfg.orders({2, 3, 5, 6, 8}))
        for (double rad : {0.5, 1.0, 2.0}) {
            const BoundarySmoothnessReport rep = boundary_smoothness_check(k, n, rad, hs);
            r.statistic = std::max(r.statistic, rep.fd_mismatch.back() / (1.0 + rad * rad));
            if (!rep.pass) {
                char buf[96];
                std::snprintf(buf, sizeof buf, "n=%d r=%.1f mismatch %.3g decreasing=%d", n, rad,
                              rep.fd_mismatch.back(), rep.decreasing ? 1 : 0);
                bad.push_back(buf);
            }
        }
    r.pass = bad.empty();
    r.detail = bad.empty() ? "max one-sided Jacobian mismatch / (1 + r^2) at h = 1e-6" : detail::join_failures(bad);
    return r;
}

inline CheckResult check_astroid(const VerifyConfig& cfg) {
    CheckResult r{"astroid", {{"k", cfg.k}, {"samples", 720}}, 0.0, 1e-12, true, {}, 0.0};
    const SzlenkParams k(cfg.k);
    const CurveSample c = image_curve(MapSpec::f4(k), 1.0, 720);
    for (std::size_t i = 0; i < c.points.size(); ++i)
        r.statistic = std::max(r.statistic, distance(c.points[i], astroid(k.k(), c.thetas[i])));
    const double end0 = distance(eval_f4({1.0, 0.0}, k), {0.0, k.k() / 2});
    const double end1 = distance(eval_f4({0.0, 1.0}, k), {-k.k() / 2, 0.0});
    r.statistic = std::max({r.statistic, end0, end1});
    bool det_ok = true;
    for (int i = 0; i < 720; ++i) {
        const double t = kTwoPi * i / 720.0;
        const double dv = transversality_det(k.k(), t);
        if (i % 180 == 0) det_ok = det_ok && std::abs(dv) <= 1e-14;
        else det_ok = det_ok && dv > 0.0 && transversality_det_numeric(k.k(), t) > 0.0;
    }
    r.pass = r.statistic <= r.tolerance && det_ok;
    r.detail = det_ok ? "max distance to (k/2)(-sin^3, cos^3)" : "transversality determinant sign wrong";
    return r;
}

inline CheckResult check_rotation(const VerifyConfig& cfg) {
    CheckResult r{"rotation_numbers", {{"k", cfg.k}, {"starts", 5}, {"iterations", 200}, {"start_rmin", 10.0},
                  {"start_rmax", 20.0}, {"start_spread", 0.1}}, 0.0, 0.01, true, {}, 0.0};
    const SzlenkParams k(cfg.k);
    std::vector<std::string> bad;
    for (int n : cfg.orders(detail::range_n(2, 8)))
        for (const MapSpec& f : {MapSpec::fn(k, n), MapSpec::hn(k, n)}) {
            SeededSampler rng(cfg.seed + static_cast<std::uint64_t>(n));
            for (int s = 0; s < 5; ++s) {
                const PlanarPoint p0 = rotation_start(rng, n, 10.0, 20.0);
                const RotationEstimate est = estimate_rotation(f, p0, 200);
                const double err = std::abs(est.slope - 1.0 / n);
                r.statistic = std::max(r.statistic, err);
                if (!(est.rational == Fraction{1, n}) || !(err <= r.tolerance)) {
                    char buf[96];
                    std::snprintf(buf, sizeof buf, "%s n=%d slope %.6f rational %lld/%lld",
                                  std::string(family_name(f.family())).c_str(), n, est.slope, est.rational.p,
                                  est.rational.q);
                    bad.push_back(buf);
                }
            }
        }
    r.pass = bad.empty();
    r.detail = bad.empty() ? "max |slope - 1/n|" : detail::join_failures(bad);
    return r;
}

inline CheckResult check_dissipativity(const VerifyConfig& cfg) {
    CheckResult r{"dissipativity", {{"k", cfg.k}, {"samples", 1e3}, {"r_escape", 1e3}, {"raster", 256},
                  {"budget", 200}}, 0.0, 0.0, true, {}, 0.0};
    const SzlenkParams k(cfg.k);
    const RadialProfile prof = RadialProfile::for_k(k);
    r.parameters.emplace_back("r0", prof.r0);
    std::vector<std::string> bad;
    double worst_ratio = 0.0;
    long long escaped = 0;
    for (int n : cfg.orders(detail::range_n(2, 8))) {
        const MapSpec f = MapSpec::hn(k, n);
        SeededSampler rng(cfg.seed);
        for (int i = 0; i < 1000; ++i) {
            const PlanarPoint p = rng.in_annulus(2.0 * prof.r0, 100.0);
            worst_ratio = std::max(worst_ratio, f(p).norm() / p.norm());
        }
        const BasinRaster b = basin_raster(f, Region{-20, 20, -20, 20}, 256, 256, 200, 1e-8, 1e3, cfg.threads);
        const long long e = b.count(VerdictKind::Escaped);
        escaped += e;
        if (e > 0) bad.push_back("n=" + std::to_string(n) + " " + std::to_string(e) + " escaped pixels");
    }
    r.parameters.emplace_back("max_norm_ratio", worst_ratio);
    if (!(worst_ratio < 1.0)) bad.push_back("|H(p)| >= |p| on the outer annulus");
    r.statistic = static_cast<double>(escaped);
    r.pass = bad.empty();
    r.detail = bad.empty() ? "escaped pixels; max |H(p)|/|p| on annulus recorded" : detail::join_failures(bad);
    return r;
}

inline CheckResult check_singularity(const VerifyConfig&) {
    CheckResult r{"singularity", {{"expected_rank", 12}, {"expected_codimension", 3}}, 0.0, 0.0, true, {}, 0.0};
    std::vector<std::string> bad;
    const int rank = rank_exact(build_Q().entries);
    if (rank != 12) bad.push_back("rank(Q)=" + std::to_string(rank));
    const CodimensionReport c = codimension_check();
    if (c.span_dimension != 15) bad.push_back("span dimension " + std::to_string(c.span_dimension));
    if (c.with_v2 != 18) bad.push_back("with V2 " + std::to_string(c.with_v2));
    if (c.with_v1 != 18) bad.push_back("with V1 " + std::to_string(c.with_v1));
    for (const auto& m : c.members)
        if (!m.member) bad.push_back(m.label + " not in span");
    if (!c.unfolding_matches_complement) bad.push_back("unfolding directions differ from complement");
    const Invariants inv = make_invariants();
    const auto xs = make_equivariants();
    if (!(cleared_tangent_generators()[9].field == -(inv.B) * xs[1])) bad.push_back("T2 F != -B X2");
    if (!verify_invariant_relation()) bad.push_back("N^4 != A^2 + 16 B^2");
    r.statistic = static_cast<double>(bad.size());
    r.parameters.emplace_back("rank", rank);
    r.parameters.emplace_back("span_dimension", c.span_dimension);
    r.parameters.emplace_back("with_v2", c.with_v2);
    r.pass = bad.empty();
    r.detail = bad.empty() ? "rank(Q)=12, dimensions 15 -> 18, complement {X1, X2, N*X2}" : detail::join_failures(bad);
    return r;
}

inline CheckResult check_negative_control(const VerifyConfig& cfg) {
    CheckResult r{"negative_control", {{"k", cfg.k}, {"map_n", 5}, {"probe_n", 4}, {"samples", 1e3}}, 0.0, 0.1,
                  true, {}, 0.0};
    const EquivarianceStats st = equivariance_residual(MapSpec::fn(SzlenkParams(cfg.k), 5), 4, 1000, 10.0, cfg.seed);
    r.statistic = st.max_abs;
    r.pass = st.max_abs >= r.tolerance;
    r.detail = "equivariance residual of F5 under the quarter turn (must be large)";
    return r;
}

// ---------------------------------------------------------------------------
// Suites

struct SuiteEntry {
    std::string suite;
    std::function<CheckResult(const VerifyConfig&)> run;
};

/// The checks in acceptance order.
inline const std::vector<SuiteEntry>& suite_registry() {
    static const std::vector<SuiteEntry> reg{
        {"equivariance", check_equivariance_suite}, {"periodic", check_periodic_orbit},
        {"attractor", check_local_attractor},       {"eigenvalues", check_eigenvalue_bound},
        {"unfolding", check_unfolding},             {"properness", check_properness},
        {"gluing", check_gluing},                   {"astroid", check_astroid},
        {"rotation", check_rotation},               {"dissipativity", check_dissipativity},
        {"singularity", check_singularity},         {"control", check_negative_control},
    };
    return reg;
}

inline bool is_suite_name(const std::string& s) {
    if (s == "all") return true;
    for (const auto& e : suite_registry())
        if (e.suite == s) return true;
    return false;
}

inline CheckResult run_timed(const SuiteEntry& e, const VerifyConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    CheckResult r;
    try {
        r = e.run(cfg);
    } catch (const std::exception& ex) {
        r.name = e.suite;
        r.pass = false;
        r.detail = std::string("error: ") + ex.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

inline std::vector<CheckResult> run_suite(const std::string& suite, const VerifyConfig& cfg) {
    std::vector<CheckResult> out;
    for (const auto& e : suite_registry())
        if (suite == "all" || suite == e.suite) out.push_back(run_timed(e, cfg));
    return out;
}

}  // namespace znmap
