// Command-line front end: argument parsing and command execution. Kept in a
// header so tests can drive it without spawning processes.
#pragma once

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "analysis.hpp"
#include "maps.hpp"
#include "singularity.hpp"
#include "topology.hpp"
#include "verify.hpp"

namespace znmap::cli {

enum ExitCode : int { kOk = 0, kCheckFailed = 1, kUsage = 2, kIo = 3 };

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Range {
    double lo = 0.0;
    double hi = 0.0;
    int count = 1;

    std::vector<double> values() const {
        std::vector<double> out;
        for (int i = 0; i < count; ++i) out.push_back(count == 1 ? lo : lo + (hi - lo) * i / (count - 1));
        return out;
    }
};

/// "a:b:count".
inline Range parse_range(const std::string& s) {
    const auto c1 = s.find(':');
    const auto c2 = c1 == std::string::npos ? std::string::npos : s.find(':', c1 + 1);
    if (c2 == std::string::npos) throw UsageError("range must look like a:b:count, got '" + s + "'");
    Range r;
    try {
        r.lo = std::stod(s.substr(0, c1));
        r.hi = std::stod(s.substr(c1 + 1, c2 - c1 - 1));
        r.count = std::stoi(s.substr(c2 + 1));
    } catch (const std::exception&) {
        throw UsageError("range must look like a:b:count, got '" + s + "'");
    }
    if (r.count < 1) throw UsageError("range count must be >= 1");
    return r;
}

struct Command {
    std::string subcommand;
    Family family = Family::F4;
    double k = 1.1;
    std::optional<int> n;
    double alpha = 0.0, beta = 0.0, delta = 0.0;
    std::optional<double> r0, r_half;

    double x = 0.0, y = 0.0;
    int iters = 100;
    std::string out;
    std::string json;
    std::string suite = "all";
    std::vector<double> window{-5.0, 5.0, -5.0, 5.0};
    int width = 512, height = 512;
    int budget = 10000;
    double eps_in = 1e-8;
    double r_escape = 1e6;
    double radius = 1.0;
    int samples = 360;
    long long max_den = 64;
    Range beta_range{0.0, 0.1, 11};
    std::uint64_t seed = kDefaultSeed;
    unsigned threads = 0;

    MapSpec map() const {
        const SzlenkParams kp(k);
        const RadialProfile prof = r0 ? RadialProfile(*r0, r_half.value_or(*r0)) : RadialProfile::for_k(kp);
        switch (family) {
            case Family::F4: return MapSpec::f4(kp);
            case Family::G4: return MapSpec::g4(kp, {alpha, beta, delta});
            case Family::Fn: return MapSpec::fn(kp, n.value_or(4));
            case Family::H: return MapSpec::h(kp, prof);
            case Family::Hn: return MapSpec::hn(kp, n.value_or(4), prof);
        }
        return MapSpec::f4(kp);
    }
};

inline std::uint64_t default_seed() {
    if (const char* env = std::getenv("ZNMAP_SEED")) {
        try {
            return std::stoull(env, nullptr, 0);
        } catch (const std::exception&) {
            throw UsageError(std::string("ZNMAP_SEED is not an integer: ") + env);
        }
    }
    return kDefaultSeed;
}

namespace detail {

struct MapFlags {
    std::string family = "f4";
    CLI::Option* n = nullptr;
    CLI::Option* alpha = nullptr;
    CLI::Option* beta = nullptr;
    CLI::Option* delta = nullptr;
    CLI::Option* r0 = nullptr;
    CLI::Option* r_half = nullptr;
    double r0_value = 0.0, r_half_value = 0.0;
    int n_value = 4;
};

inline void add_map_flags(CLI::App* app, Command& cmd, MapFlags& m, bool unfolding) {
    app->add_option("--family", m.family, "map family: f4, g4, fn, h, hn")->capture_default_str();
    app->add_option("--k", cmd.k, "parameter k, 1 < k < 2/sqrt(3)")->capture_default_str();
    m.n = app->add_option("--n", m.n_value, "symmetry order (fn, hn)");
    if (unfolding) {
        m.alpha = app->add_option("--alpha", cmd.alpha, "unfolding alpha (g4)");
        m.beta = app->add_option("--beta", cmd.beta, "unfolding beta (g4)");
        m.delta = app->add_option("--delta", cmd.delta, "unfolding delta (g4)");
    }
    m.r0 = app->add_option("--r0", m.r0_value, "saturation onset (h, hn)");
    m.r_half = app->add_option("--r-half", m.r_half_value, "saturation scale (h, hn)");
}

inline void finish_map_flags(Command& cmd, const MapFlags& m) {
    try {
        cmd.family = parse_family(m.family);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    const bool symmetric = cmd.family == Family::Fn || cmd.family == Family::Hn;
    if (m.n && m.n->count() > 0) {
        if (!symmetric) throw UsageError("--n only applies to fn and hn");
        if (m.n_value < 2) throw UsageError("--n must be >= 2");
        cmd.n = m.n_value;
    } else if (symmetric) {
        throw UsageError("--n is required for fn and hn");
    }
    for (const CLI::Option* o : {m.alpha, m.beta, m.delta})
        if (o && o->count() > 0 && cmd.family != Family::G4)
            throw UsageError(o->get_name() + " only applies to g4");
    const bool saturated = cmd.family == Family::H || cmd.family == Family::Hn;
    for (const CLI::Option* o : {m.r0, m.r_half})
        if (o && o->count() > 0 && !saturated) throw UsageError(o->get_name() + " only applies to h and hn");
    if (m.r0 && m.r0->count() > 0) cmd.r0 = m.r0_value;
    if (m.r_half && m.r_half->count() > 0) {
        if (!cmd.r0) throw UsageError("--r-half needs --r0");
        cmd.r_half = m.r_half_value;
    }
}

inline void check_k(double k) {
    if (!(k > 1.0 && k < kMaxK)) throw UsageError("k must satisfy 1 < k < 2/sqrt(3), got " + std::to_string(k));
}

}  // namespace detail

/// Parses arguments (without the program name). Throws UsageError.
/// Returns std::nullopt after printing help.
inline std::optional<Command> parse_command(const std::vector<std::string>& args, std::ostream& help_out = std::cout) {
    Command cmd;
    cmd.seed = default_seed();
    CLI::App app{"Equivariant planar maps: evaluation, dynamics checks and singularity computation", "znmap"};
    app.require_subcommand(1, 1);
    std::map<const CLI::App*, detail::MapFlags> flags;
    std::string beta_range = "0:0.1:11";
    unsigned long long seed_value = cmd.seed;
    int res = 0;

    auto* eval = app.add_subcommand("eval", "evaluate the map and its Jacobian at one point");
    auto* orbit = app.add_subcommand("orbit", "iterate a point and write the orbit as CSV");
    auto* verify = app.add_subcommand("verify", "run verification suites");
    auto* basin = app.add_subcommand("basin", "rasterize the basin of the origin as PGM");
    auto* curve = app.add_subcommand("curve", "image of a circle as CSV");
    auto* rotation = app.add_subcommand("rotation", "estimate the rotation number of an orbit");
    auto* scan = app.add_subcommand("unfold-scan", "continue the period-4 orbit of g4 along beta");
    auto* sing = app.add_subcommand("singularity", "tangent space rank and codimension of F4");

    for (auto* sc : {eval, orbit, basin, curve, rotation}) detail::add_map_flags(sc, cmd, flags[sc], true);
    for (auto* sc : {eval}) {
        sc->add_option("--x", cmd.x)->required();
        sc->add_option("--y", cmd.y)->required();
    }
    for (auto* sc : {orbit, rotation}) {
        sc->add_option("--x0", cmd.x)->required();
        sc->add_option("--y0", cmd.y)->required();
        sc->add_option("--iters", cmd.iters)->capture_default_str();
    }
    rotation->add_option("--max-den", cmd.max_den)->capture_default_str();
    for (auto* sc : {orbit, basin, curve, scan}) sc->add_option("--out", cmd.out, "output file (default stdout)");

    detail::MapFlags& mf = flags[verify];
    verify->add_option("--family", mf.family, "restricts nothing; echoed in the report")->capture_default_str();
    verify->add_option("--k", cmd.k)->capture_default_str();
    mf.n = verify->add_option("--n", mf.n_value, "restrict n-ranged checks to this order");
    verify->add_option("--suite", cmd.suite, "all or one suite name")->capture_default_str();
    verify->add_option("--json", cmd.json, "write the report as JSON");
    for (auto* sc : {verify, basin}) sc->add_option("--threads", cmd.threads, "worker threads (0 = all cores)");
    verify->add_option("--seed", seed_value, "RNG seed (default 0x5EED or $ZNMAP_SEED)");

    basin->add_option("--window", cmd.window, "xmin xmax ymin ymax")->expected(4);
    basin->add_option("--res", res, "square resolution");
    basin->add_option("--width", cmd.width);
    basin->add_option("--height", cmd.height);
    basin->add_option("--budget", cmd.budget)->capture_default_str();
    basin->add_option("--eps-in", cmd.eps_in)->capture_default_str();
    basin->add_option("--r-escape", cmd.r_escape)->capture_default_str();

    curve->add_option("--radius", cmd.radius)->capture_default_str();
    curve->add_option("--samples", cmd.samples)->capture_default_str();

    scan->add_option("--k", cmd.k)->capture_default_str();
    scan->add_option("--alpha", cmd.alpha)->capture_default_str();
    scan->add_option("--delta", cmd.delta)->capture_default_str();
    scan->add_option("--beta", beta_range, "a:b:count")->capture_default_str();

    sing->add_option("--json", cmd.json, "write Q and the codimension report as JSON");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        help_out << app.help();
        return std::nullopt;
    } catch (const CLI::CallForAllHelp&) {
        help_out << app.help("", CLI::AppFormatMode::All);
        return std::nullopt;
    } catch (const CLI::ParseError& e) {
        throw UsageError(e.what());
    }

    CLI::App* chosen = app.get_subcommands().front();
    cmd.subcommand = chosen->get_name();
    detail::check_k(cmd.k);
    cmd.seed = seed_value;

    if (cmd.subcommand == "verify") {
        try {
            cmd.family = parse_family(mf.family);
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
        if (mf.n->count() > 0) {
            if (mf.n_value < 2) throw UsageError("--n must be >= 2");
            cmd.n = mf.n_value;
        }
        if (!is_suite_name(cmd.suite)) throw UsageError("unknown suite '" + cmd.suite + "'");
    } else if (cmd.subcommand == "unfold-scan") {
        cmd.family = Family::G4;
        cmd.beta_range = parse_range(beta_range);
    } else if (cmd.subcommand != "singularity") {
        detail::finish_map_flags(cmd, flags.at(chosen));
    }
    if (cmd.subcommand == "basin") {
        if (res > 0) cmd.width = cmd.height = res;
        if (cmd.width < 1 || cmd.height < 1) throw UsageError("raster size must be positive");
        if (!(cmd.window[0] < cmd.window[1] && cmd.window[2] < cmd.window[3]))
            throw UsageError("--window needs xmin < xmax and ymin < ymax");
        if (cmd.budget < 0) throw UsageError("--budget must be >= 0");
        if (!(cmd.eps_in > 0.0 && cmd.eps_in < cmd.r_escape)) throw UsageError("need 0 < eps-in < r-escape");
    }
    if ((cmd.subcommand == "orbit" || cmd.subcommand == "rotation") && cmd.iters < 1)
        throw UsageError("--iters must be >= 1");
    if (cmd.subcommand == "curve" && cmd.samples < 4) throw UsageError("--samples must be >= 4");
    if (cmd.subcommand == "rotation" && cmd.max_den < 1) throw UsageError("--max-den must be >= 1");
    return cmd;
}

// ---------------------------------------------------------------------------
// Execution

namespace detail {

inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string csv_row(std::initializer_list<double> values) {
    std::string s;
    for (double v : values) s += (s.empty() ? "" : ",") + fmt17(v);
    return s + "\n";
}

/// Writes to the file when a path is given, else to `fallback`.
inline void emit(const std::string& path, const std::string& content, std::ostream& fallback) {
    if (path.empty() || path == "-") {
        fallback << content;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open '" + path + "' for writing");
    f << content;
    if (!f.flush()) throw IoError("write to '" + path + "' failed");
}

inline nlohmann::ordered_json map_echo(const Command& cmd) {
    nlohmann::ordered_json j;
    j["family"] = family_name(cmd.family);
    j["k"] = cmd.k;
    if (cmd.n) j["n"] = *cmd.n;
    return j;
}

inline nlohmann::ordered_json to_json(const CheckResult& r) {
    nlohmann::ordered_json j;
    j["check"] = r.name;
    nlohmann::ordered_json params = nlohmann::ordered_json::object();
    for (const auto& [k, v] : r.parameters) params[k] = v;
    j["parameters"] = params;
    j["statistic"] = r.statistic;
    j["tolerance"] = r.tolerance;
    j["pass"] = r.pass;
    j["detail"] = r.detail;
    return j;
}

inline void rational_matrix_rows(const RationalMatrix& m, nlohmann::ordered_json& out) {
    for (const auto& row : m) {
        nlohmann::ordered_json r = nlohmann::ordered_json::array();
        for (const auto& e : row) r.push_back(e.str());
        out.push_back(r);
    }
}

inline int run_eval(const Command& cmd, std::ostream& out) {
    const MapSpec f = cmd.map();
    const PlanarPoint p{cmd.x, cmd.y};
    const PlanarPoint v = f(p);
    const Jacobian2 j = f.jacobian(p);
    out << "x,y,fx,fy,j11,j12,j21,j22\n" << csv_row({p.x, p.y, v.x, v.y, j.a, j.b, j.c, j.d});
    return kOk;
}

inline int run_orbit(const Command& cmd, std::ostream& out) {
    const Orbit o = iterate(cmd.map(), {cmd.x, cmd.y}, cmd.iters);
    std::string csv = "step,x,y\n";
    for (std::size_t i = 0; i < o.points.size(); ++i)
        csv += csv_row({static_cast<double>(i), o.points[i].x, o.points[i].y});
    emit(cmd.out, csv, out);
    return kOk;
}

inline int run_verify(const Command& cmd, std::ostream& out) {
    VerifyConfig cfg;
    cfg.k = cmd.k;
    cfg.n = cmd.n;
    cfg.seed = cmd.seed;
    cfg.threads = cmd.threads;
    const std::vector<CheckResult> results = run_suite(cmd.suite, cfg);
    bool all = true;
    nlohmann::ordered_json checks = nlohmann::ordered_json::array();
    for (const CheckResult& r : results) {
        all = all && r.pass;
        char line[256];
        std::snprintf(line, sizeof line, "%s %-20s statistic=%.6g tolerance=%.6g\n", r.pass ? "PASS" : "FAIL",
                      r.name.c_str(), r.statistic, r.tolerance);
        out << line;
        if (!r.pass) out << "     " << r.detail << "\n";
        checks.push_back(to_json(r));
    }
    if (!cmd.json.empty()) {
        nlohmann::ordered_json rep;
        rep["tool_version"] = kToolVersion;
        rep["map"] = map_echo(cmd);
        rep["suite"] = cmd.suite;
        rep["seed"] = cmd.seed;
        rep["checks"] = checks;
        rep["pass"] = all;
        emit(cmd.json, rep.dump(2) + "\n", out);
    }
    return all ? kOk : kCheckFailed;
}

inline int run_basin(const Command& cmd, std::ostream& out) {
    const Region w{cmd.window[0], cmd.window[1], cmd.window[2], cmd.window[3]};
    const BasinRaster b =
        basin_raster(cmd.map(), w, cmd.width, cmd.height, cmd.budget, cmd.eps_in, cmd.r_escape, cmd.threads);
    const std::string pgm = to_pgm(b);
    if (cmd.out.empty()) {
        out << pgm;
        return kOk;
    }
    emit(cmd.out, pgm, out);
    out << "converged=" << b.count(VerdictKind::ConvergedToOrigin) << " escaped=" << b.count(VerdictKind::Escaped)
        << " undecided=" << b.count(VerdictKind::Undecided) << "\n";
    return kOk;
}

inline int run_curve(const Command& cmd, std::ostream& out) {
    const CurveSample c = image_curve(cmd.map(), cmd.radius, cmd.samples);
    std::string csv = "theta,x,y\n";
    for (std::size_t i = 0; i < c.points.size(); ++i) csv += csv_row({c.thetas[i], c.points[i].x, c.points[i].y});
    emit(cmd.out, csv, out);
    return kOk;
}

inline int run_rotation(const Command& cmd, std::ostream& out) {
    const RotationEstimate e = estimate_rotation(cmd.map(), {cmd.x, cmd.y}, cmd.iters, cmd.max_den);
    char line[128];
    std::snprintf(line, sizeof line, "slope=%.6f rational=%lld/%lld\n", e.slope, e.rational.p, e.rational.q);
    out << line;
    return kOk;
}

inline int run_unfold_scan(const Command& cmd, std::ostream& out) {
    const auto rows = continue_period4(SzlenkParams(cmd.k), cmd.alpha, cmd.delta, cmd.beta_range.values());
    std::string csv = "beta,x,y,residual,max_multiplier,minimal,converged\n";
    bool all = true;
    for (const auto& r : rows) {
        csv += csv_row({r.beta, r.point.x, r.point.y, r.residual, r.max_multiplier, r.minimal ? 1.0 : 0.0,
                        r.converged ? 1.0 : 0.0});
        all = all && r.converged;
    }
    emit(cmd.out, csv, out);
    return all ? kOk : kCheckFailed;
}

inline int run_singularity(const Command& cmd, std::ostream& out) {
    const TangentMatrixQ q = build_Q();
    const int rank = rank_exact(q.entries);
    const CodimensionReport c = codimension_check();
    std::string comp;
    for (const auto& s : c.complement) comp += (comp.empty() ? "" : ", ") + s;
    out << "rank(Q)=" << rank << " codimension=" << c.codimension() << " complement={" << comp << "}\n";
    if (!cmd.json.empty()) {
        nlohmann::ordered_json j;
        j["tool_version"] = kToolVersion;
        j["rows"] = q.row_labels;
        j["columns"] = q.column_labels;
        j["Q"] = nlohmann::ordered_json::array();
        rational_matrix_rows(q.entries, j["Q"]);
        j["rank"] = rank;
        j["span_dimension"] = c.span_dimension;
        j["with_complement_v2"] = c.with_v2;
        j["with_complement_v1"] = c.with_v1;
        nlohmann::ordered_json mem = nlohmann::ordered_json::object();
        for (const auto& m : c.members) mem[m.label] = m.member;
        j["members"] = mem;
        j["complement"] = c.complement;
        j["unfolding_directions"] = c.unfolding_directions;
        j["codimension"] = c.codimension();
        emit(cmd.json, j.dump(2) + "\n", out);
    }
    return rank == 12 && c.pass() ? kOk : kCheckFailed;
}

}  // namespace detail

inline int execute(const Command& cmd, std::ostream& out, std::ostream& err) {
    try {
        if (cmd.subcommand == "eval") return detail::run_eval(cmd, out);
        if (cmd.subcommand == "orbit") return detail::run_orbit(cmd, out);
        if (cmd.subcommand == "verify") return detail::run_verify(cmd, out);
        if (cmd.subcommand == "basin") return detail::run_basin(cmd, out);
        if (cmd.subcommand == "curve") return detail::run_curve(cmd, out);
        if (cmd.subcommand == "rotation") return detail::run_rotation(cmd, out);
        if (cmd.subcommand == "unfold-scan") return detail::run_unfold_scan(cmd, out);
        if (cmd.subcommand == "singularity") return detail::run_singularity(cmd, out);
        err << "unknown subcommand '" << cmd.subcommand << "'\n";
        return kUsage;
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return kIo;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kCheckFailed;
    }
}

/// Parse and execute; the whole program.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    try {
        const std::optional<Command> cmd = parse_command(args, out);
        if (!cmd) return kOk;
        return execute(*cmd, out, err);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsage;
    }
}

}  // namespace znmap::cli
