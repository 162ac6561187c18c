// Exact algebra for the Z4-equivariant contact tangent space of the Szlenk map
// (with k = 1): invariants, equivariant generators, matrix germs, the matrix Q
// of the degree-5 reduction, and the codimension-3 complement.
#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "poly2.hpp"

namespace znmap {

class AlgebraError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Invariants {
    Poly2 N, A, B;
};

inline Invariants make_invariants() {
    const Poly2 x = Poly2::x(), y = Poly2::y();
    return {x * x + y * y, x.pow(4) + y.pow(4) - Rational(6) * x * x * y * y, (x * x - y * y) * x * y};
}

inline std::array<EqVectorField, 4> make_equivariants() {
    const Poly2 x = Poly2::x(), y = Poly2::y();
    const Poly2 p = x * (x * x - Rational(3) * y * y);
    const Poly2 q = y * (y * y - Rational(3) * x * x);
    return {EqVectorField{x, y}, EqVectorField{-y, x}, EqVectorField{p, q}, EqVectorField{-q, p}};
}

inline constexpr std::array<int, 4> kGeneratorDegree{1, 1, 3, 3};

struct MatrixGerms {
    std::array<MatrixGerm, 4> S;
    std::array<MatrixGerm, 4> T;
};

/// S_1..S_4 and T_j = J S_j with J = [[0, 1], [-1, 0]].
inline MatrixGerms make_matrix_germs() {
    const Poly2 x = Poly2::x(), y = Poly2::y();
    MatrixGerms g;
    g.S[0] = {1, 0, 0, 1};
    g.S[1] = {x * x, x * y, x * y, y * y};
    g.S[2] = {-(x * x), x * y, x * y, -(y * y)};
    g.S[3] = {0, x.pow(3) * y, x * y.pow(3), 0};
    const MatrixGerm j{0, 1, -1, 0};
    for (int i = 0; i < 4; ++i) g.T[i] = j * g.S[i];
    return g;
}

/// N^4 - A^2 - 16 B^2 == 0.
inline bool verify_invariant_relation() {
    const Invariants inv = make_invariants();
    return (inv.N.pow(4) - inv.A * inv.A - Rational(16) * inv.B * inv.B).is_zero();
}

// ---------------------------------------------------------------------------
// Module coordinates

struct InvariantMonomial {
    int n = 0;  // power of N
    int a = 0;  // power of A
    int b = 0;  // power of B
    int degree() const { return 2 * n + 4 * a + 4 * b; }
    bool divides(const InvariantMonomial& o) const { return n <= o.n && a <= o.a && b <= o.b; }
    friend InvariantMonomial operator*(InvariantMonomial l, InvariantMonomial r) {
        return {l.n + r.n, l.a + r.a, l.b + r.b};
    }
    friend auto operator<=>(const InvariantMonomial&, const InvariantMonomial&) = default;

    Poly2 poly(const Invariants& inv) const { return inv.N.pow(n) * inv.A.pow(a) * inv.B.pow(b); }

    std::string label() const {
        std::string s;
        auto put = [&](const char* v, int e) {
            if (e == 0) return;
            if (!s.empty()) s += "*";
            s += v;
            if (e > 1) s += "^" + std::to_string(e);
        };
        put("N", n);
        put("A", a);
        put("B", b);
        return s;
    }
};

struct ModuleKey {
    InvariantMonomial m;
    int gen = 0;  // 0-based index of X1..X4
    int degree() const { return m.degree() + kGeneratorDegree[gen]; }
    friend auto operator<=>(const ModuleKey&, const ModuleKey&) = default;
    std::string label() const {
        const std::string g = "X" + std::to_string(gen + 1);
        const std::string ml = m.label();
        return ml.empty() ? g : ml + "*" + g;
    }
};

struct ModuleCoords {
    std::map<ModuleKey, Rational> terms;
    int max_degree = 0;

    Rational coefficient(const ModuleKey& k) const {
        auto it = terms.find(k);
        return it == terms.end() ? Rational(0) : it->second;
    }

    EqVectorField expand() const {
        const Invariants inv = make_invariants();
        const auto xs = make_equivariants();
        EqVectorField out;
        for (const auto& [k, c] : terms) out = out + (Poly2(c) * k.m.poly(inv)) * xs[k.gen];
        return out;
    }

    /// Multiplies every coefficient monomial by m.
    ModuleCoords times(const InvariantMonomial& m) const {
        ModuleCoords out;
        out.max_degree = max_degree + m.degree();
        for (const auto& [k, c] : terms) out.terms[{k.m * m, k.gen}] += c;
        return out;
    }

    std::string to_string() const {
        if (terms.empty()) return "0";
        std::string s;
        for (const auto& [k, c] : terms) {
            if (!s.empty()) s += " + ";
            s += "(" + c.str() + ")*" + k.label();
        }
        return s;
    }
};

namespace detail {

inline std::vector<InvariantMonomial> invariant_monomials(int d) {
    std::vector<InvariantMonomial> out;
    if (d < 0 || d % 2 != 0) return out;
    for (int a = 0; 4 * a <= d; ++a)
        for (int b = 0; 4 * a + 4 * b <= d; ++b) {
            const int rest = d - 4 * a - 4 * b;
            out.push_back({rest / 2, a, b});
        }
    return out;
}

/// Every key of total degree d, in pivot-preference order: higher power of N
/// first, then higher power of A, then higher power of B, then generator index.
inline std::vector<ModuleKey> keys_of_degree(int d) {
    std::vector<ModuleKey> out;
    for (int g = 0; g < 4; ++g)
        for (const auto& m : invariant_monomials(d - kGeneratorDegree[g])) out.push_back({m, g});
    std::sort(out.begin(), out.end(), [](const ModuleKey& l, const ModuleKey& r) {
        return std::make_tuple(-l.m.n, -l.m.a, -l.m.b, l.gen) < std::make_tuple(-r.m.n, -r.m.a, -r.m.b, r.gen);
    });
    return out;
}

/// Coefficients of the degree-d part of f: u then v, x^d first.
inline std::vector<Rational> coefficient_vector(const EqVectorField& f, int d) {
    std::vector<Rational> out;
    out.reserve(2 * (d + 1));
    for (const Poly2* p : {&f.u, &f.v})
        for (int i = d; i >= 0; --i) out.push_back(p->coefficient({i, d - i}));
    return out;
}

}  // namespace detail

/// Writes v over the invariant-coefficient generators X1..X4. The module has
/// syzygies from degree 5 on (A X1 - 4B X2 = N X3, A X2 + 4B X1 = N X4), so the
/// coefficients are fixed by a canonical rule: per homogeneous degree, pivot
/// columns are taken in keys_of_degree order and free coefficients are zero.
inline ModuleCoords module_decompose(const EqVectorField& v, int max_degree) {
    if (max_degree > 7) throw std::invalid_argument("module_decompose supports max_degree <= 7");
    if (v.degree() > max_degree) throw std::invalid_argument("field degree exceeds max_degree");
    const Invariants inv = make_invariants();
    const auto xs = make_equivariants();
    ModuleCoords out;
    out.max_degree = max_degree;
    for (int d : v.degrees()) {
        const std::vector<Rational> rhs = detail::coefficient_vector(v, d);
        const std::vector<ModuleKey> keys = detail::keys_of_degree(d);
        const std::size_t rows = rhs.size(), cols = keys.size();
        // Augmented system [K | rhs]; column j is the expansion of keys[j].
        std::vector<std::vector<Rational>> m(rows, std::vector<Rational>(cols + 1));
        for (std::size_t j = 0; j < cols; ++j) {
            const auto col = detail::coefficient_vector(keys[j].m.poly(inv) * xs[keys[j].gen], d);
            for (std::size_t i = 0; i < rows; ++i) m[i][j] = col[i];
        }
        for (std::size_t i = 0; i < rows; ++i) m[i][cols] = rhs[i];
        std::vector<std::size_t> pivots;
        std::size_t r = 0;
        for (std::size_t j = 0; j < cols && r < rows; ++j) {
            std::size_t p = r;
            while (p < rows && m[p][j] == 0) ++p;
            if (p == rows) continue;
            std::swap(m[p], m[r]);
            const Rational piv = m[r][j];
            for (auto& e : m[r]) e /= piv;
            for (std::size_t i = 0; i < rows; ++i) {
                if (i == r || m[i][j] == 0) continue;
                const Rational f = m[i][j];
                for (std::size_t c = j; c <= cols; ++c) m[i][c] -= f * m[r][c];
            }
            pivots.push_back(j);
            ++r;
        }
        for (std::size_t i = r; i < rows; ++i)
            if (m[i][cols] != 0) throw AlgebraError("not in module span");
        for (std::size_t i = 0; i < pivots.size(); ++i)
            if (m[i][cols] != 0) out.terms[keys[pivots[i]]] = m[i][cols];
    }
    return out;
}

// ---------------------------------------------------------------------------
// Exact rank

using RationalMatrix = std::vector<std::vector<Rational>>;

/// Rank over Q: rows are cleared to integers, then fraction-free (Bareiss)
/// elimination.
inline int rank_exact(const RationalMatrix& mat) {
    if (mat.empty()) return 0;
    const std::size_t cols = mat.front().size();
    std::vector<std::vector<BigInt>> m;
    m.reserve(mat.size());
    for (const auto& row : mat) {
        if (row.size() != cols) throw std::invalid_argument("ragged matrix");
        BigInt l = 1;
        for (const auto& e : row) l = boost::multiprecision::lcm(l, boost::multiprecision::denominator(e));
        std::vector<BigInt> ir;
        ir.reserve(cols);
        for (const auto& e : row) ir.push_back(boost::multiprecision::numerator(e) * (l / boost::multiprecision::denominator(e)));
        m.push_back(std::move(ir));
    }
    const std::size_t rows = m.size();
    BigInt prev = 1;
    std::size_t r = 0;
    for (std::size_t j = 0; j < cols && r < rows; ++j) {
        std::size_t p = r;
        while (p < rows && m[p][j] == 0) ++p;
        if (p == rows) continue;
        std::swap(m[p], m[r]);
        for (std::size_t i = r + 1; i < rows; ++i) {
            for (std::size_t c = j + 1; c < cols; ++c) m[i][c] = (m[r][j] * m[i][c] - m[i][j] * m[r][c]) / prev;
            m[i][j] = 0;
        }
        prev = m[r][j];
        ++r;
    }
    return static_cast<int>(r);
}

inline bool in_row_span(const RationalMatrix& mat, const std::vector<Rational>& v) {
    RationalMatrix aug = mat;
    aug.push_back(v);
    return rank_exact(aug) == rank_exact(mat);
}

// ---------------------------------------------------------------------------
// Tangent space generators

struct TangentGenerator {
    std::string label;
    EqVectorField field;
};

/// The twelve generators of the tangent space with denominators cleared:
/// dP (1+N) X_i - P (dN X_i) for i = 1..4, then S_j P, then T_j P, where
/// P = (-y^3, x^3).
inline std::vector<TangentGenerator> cleared_tangent_generators() {
    const Poly2 x = Poly2::x(), y = Poly2::y();
    const Invariants inv = make_invariants();
    const auto xs = make_equivariants();
    const MatrixGerms g = make_matrix_germs();
    const EqVectorField p{-y.pow(3), x.pow(3)};
    const MatrixGerm dp{p.u.dx(), p.u.dy(), p.v.dx(), p.v.dy()};
    const Poly2 one_n = Poly2(1) + inv.N;
    std::vector<TangentGenerator> out;
    for (int i = 0; i < 4; ++i) {
        const Poly2 dn = inv.N.dx() * xs[i].u + inv.N.dy() * xs[i].v;
        out.push_back({"dF*X" + std::to_string(i + 1), one_n * dp.apply(xs[i]) - dn * p});
    }
    for (int j = 0; j < 4; ++j) out.push_back({"S" + std::to_string(j + 1) + "*F", g.S[j].apply(p)});
    for (int j = 0; j < 4; ++j) out.push_back({"T" + std::to_string(j + 1) + "*F", g.T[j].apply(p)});
    return out;
}

/// A tabulated module representation of a tangent generator, related to the
/// computed generator by an invariant unit: generator = unit * expand(rep).
struct ReferenceRepresentation {
    std::string label;
    ModuleCoords rep;
    Poly2 unit;
};

namespace detail {

struct RepTerm {
    int n, a, b, gen;  // gen is 1-based
    long num, den;
};

inline ModuleCoords coords_of(std::initializer_list<RepTerm> terms) {
    ModuleCoords c;
    for (const auto& t : terms) {
        const ModuleKey k{{t.n, t.a, t.b}, t.gen - 1};
        c.terms[k] += Rational(t.num, t.den);
        c.max_degree = std::max(c.max_degree, k.degree());
    }
    return c;
}

}  // namespace detail

inline std::vector<ReferenceRepresentation> reference_representations() {
    using detail::coords_of;
    const Poly2 n = make_invariants().N;
    auto r = [](long p, long q) { return Poly2(Rational(p, q)); };
    return {
        {"dF*X1", coords_of({{1, 0, 0, 2, 3, 1}, {0, 0, 0, 4, 1, 1}}), r(1, 4) * n + r(3, 4)},
        {"dF*X2", coords_of({{1, 0, 0, 1, 1, 1}, {0, 0, 0, 3, -1, 1}}), r(-3, 4) * n + r(-3, 4)},
        {"dF*X3",
         coords_of({{3, 0, 0, 2, 3, 4}, {2, 0, 0, 2, 3, 4}, {0, 1, 0, 2, 3, 2},
                    {2, 0, 0, 4, 3, 4}, {1, 0, 0, 4, 3, 4}, {0, 1, 0, 4, -1, 2}}),
         r(1, 1)},
        {"dF*X4",
         coords_of({{3, 0, 0, 1, 1, 4}, {0, 1, 0, 1, 3, 2}, {2, 0, 0, 1, 3, 4},
                    {0, 1, 0, 3, 1, 2}, {2, 0, 0, 3, -3, 4}, {1, 0, 0, 3, -9, 4}}),
         r(1, 1)},
        {"S1*F", coords_of({{1, 0, 0, 2, 3, 1}, {0, 0, 0, 4, 1, 1}}), r(1, 4)},
        {"S2*F", coords_of({{0, 0, 1, 1, -3, 1}, {0, 1, 0, 2, -1, 1}, {1, 0, 0, 4, 1, 1}}), r(1, 1)},
        {"S3*F", coords_of({{2, 0, 0, 2, 1, 1}, {1, 0, 0, 4, -1, 1}}), r(-1, 4)},
        {"S4*F",
         coords_of({{3, 0, 0, 2, -1, 16}, {1, 1, 0, 2, -5, 32}, {0, 0, 1, 3, 1, 8}, {2, 0, 0, 4, 7, 32}}),
         r(1, 1)},
        {"T1*F", coords_of({{1, 0, 0, 1, 3, 1}, {0, 0, 0, 3, 1, 1}}), r(1, 4)},
        {"T2*F", coords_of({{0, 0, 1, 2, -1, 1}}), r(1, 1)},
        {"T3*F", coords_of({{0, 1, 0, 1, 1, 4}, {2, 0, 0, 1, -1, 4}, {0, 0, 1, 2, -1, 1}}), r(1, 1)},
        {"T4*F",
         coords_of({{1, 1, 0, 1, 1, 16}, {3, 0, 0, 1, -1, 16}, {1, 0, 1, 2, -14, 16}, {0, 0, 1, 4, -2, 16}}),
         r(1, 1)},
    };
}

struct ReferenceCheck {
    std::string label;
    bool matches = false;
};

/// Confirms generator == unit * expand(rep) for each tabulated representation.
inline std::vector<ReferenceCheck> verify_reference_representations() {
    const auto gens = cleared_tangent_generators();
    const auto reps = reference_representations();
    std::vector<ReferenceCheck> out;
    for (std::size_t i = 0; i < reps.size(); ++i)
        out.push_back({reps[i].label, reps[i].unit * reps[i].rep.expand() == gens[i].field});
    return out;
}

// ---------------------------------------------------------------------------
// The matrix Q

/// The twelve generators of E^5, in column order.
inline std::vector<ModuleKey> e5_generators() {
    return {{{2, 0, 0}, 0}, {{0, 1, 0}, 0}, {{0, 0, 1}, 0}, {{2, 0, 0}, 1}, {{0, 1, 0}, 1}, {{0, 0, 1}, 1},
            {{1, 0, 0}, 2}, {{0, 1, 0}, 2}, {{0, 0, 1}, 2}, {{1, 0, 0}, 3}, {{0, 1, 0}, 3}, {{0, 0, 1}, 3}};
}

struct TangentMatrixQ {
    std::vector<std::string> row_labels;
    std::vector<std::string> column_labels;
    RationalMatrix entries;
};

namespace detail {

struct QRowRecipe {
    int source;  // index into the twelve generators
    InvariantMonomial multiplier;
};

inline std::vector<QRowRecipe> q_row_recipe() {
    const InvariantMonomial one{}, n{1, 0, 0}, a{0, 1, 0};
    return {{0, n}, {1, n}, {2, one}, {3, one}, {4, n}, {5, one}, {6, one},
            {7, one}, {8, n}, {9, one}, {10, one}, {11, one}, {4, a}};
}

inline std::string recipe_label(const std::string& base, const InvariantMonomial& m) {
    const std::string ml = m.label();
    return ml.empty() ? base : ml + "*" + base;
}

/// Constant coefficients on the E^5 generators; terms in M E^5 are dropped.
inline std::vector<Rational> reduce_mod_m_e5(const ModuleCoords& c) {
    const auto gens = e5_generators();
    std::vector<Rational> row(gens.size());
    for (const auto& [k, coef] : c.terms) {
        if (coef == 0) continue;
        bool placed = false;
        for (std::size_t j = 0; j < gens.size(); ++j) {
            if (gens[j].gen != k.gen || !gens[j].m.divides(k.m)) continue;
            if (gens[j].m == k.m) row[j] += coef;
            placed = true;
            break;
        }
        if (!placed) throw AlgebraError("row not in E^5: term " + k.label());
    }
    return row;
}

inline TangentMatrixQ assemble_q(const std::vector<ModuleCoords>& reps, const std::vector<std::string>& labels) {
    TangentMatrixQ q;
    for (const auto& g : e5_generators()) q.column_labels.push_back(g.label());
    for (const auto& step : q_row_recipe()) {
        q.row_labels.push_back(recipe_label(labels[step.source], step.multiplier));
        q.entries.push_back(reduce_mod_m_e5(reps[step.source].times(step.multiplier)));
    }
    return q;
}

}  // namespace detail

/// Q assembled from the tabulated representations; invariant units are
/// dropped, since they do not change the generated module.
inline TangentMatrixQ build_Q() {
    std::vector<ModuleCoords> reps;
    std::vector<std::string> labels;
    for (const auto& r : reference_representations()) {
        reps.push_back(r.rep);
        labels.push_back(r.label);
    }
    return detail::assemble_q(reps, labels);
}

/// Q assembled from module_decompose of the computed generators. Because the
/// decomposition at degree >= 5 is a choice, this matrix is not intrinsic.
inline TangentMatrixQ build_Q_canonical() {
    std::vector<ModuleCoords> reps;
    std::vector<std::string> labels;
    for (const auto& g : cleared_tangent_generators()) {
        reps.push_back(module_decompose(g.field, 7));
        labels.push_back(g.label);
    }
    return detail::assemble_q(reps, labels);
}

struct QuotientRank {
    int rank = 0;       // rank of the 13 rows in E^5 / M E^5
    int dimension = 0;  // dim E^5 / M E^5
};

/// Basis-free version of the Q rank: the 13 row fields are mapped to the
/// quotient E^5 / M E^5 (degree 5 plus degree 7 modulo N times degree 5) and
/// their rank there is computed directly from polynomial coefficients.
inline QuotientRank quotient_rank() {
    const Invariants inv = make_invariants();
    const auto xs = make_equivariants();
    const auto gens = cleared_tangent_generators();
    auto row_of = [](const EqVectorField& f) {
        std::vector<Rational> r = detail::coefficient_vector(f, 5);
        const auto hi = detail::coefficient_vector(f, 7);
        r.insert(r.end(), hi.begin(), hi.end());
        return r;
    };
    RationalMatrix relations;
    for (const auto& k : detail::keys_of_degree(5)) {
        const EqVectorField f = k.m.poly(inv) * xs[k.gen];
        relations.push_back(row_of(inv.N * f));
    }
    RationalMatrix whole = relations;
    for (const auto& k : detail::keys_of_degree(5)) whole.push_back(row_of(k.m.poly(inv) * xs[k.gen]));
    for (const auto& k : detail::keys_of_degree(7)) whole.push_back(row_of(k.m.poly(inv) * xs[k.gen]));
    RationalMatrix tangent = relations;
    for (const auto& step : detail::q_row_recipe()) {
        const EqVectorField f = step.multiplier.poly(inv) * gens[step.source].field;
        if (f.min_degree() < 5) throw AlgebraError("row not in E^5: " + gens[step.source].label);
        tangent.push_back(row_of(f));
    }
    const int base = rank_exact(relations);
    return {rank_exact(tangent) - base, rank_exact(whole) - base};
}

// ---------------------------------------------------------------------------
// Codimension

struct Membership {
    std::string label;
    bool member = false;
};

struct CodimensionReport {
    int span_dimension = 0;
    int ambient_dimension = 18;
    int with_v2 = 0;
    int with_v1 = 0;
    std::vector<Membership> members;
    std::vector<std::string> complement{"X1", "X2", "N*X2"};
    std::vector<std::string> unfolding_directions;
    bool unfolding_matches_complement = false;
    int codimension() const { return ambient_dimension - span_dimension; }
    bool pass() const {
        bool all = true;
        for (const auto& m : members) all = all && m.member;
        return all && span_dimension == 15 && with_v2 == 18 && with_v1 == 18 && unfolding_matches_complement;
    }
};

namespace detail {

/// Coordinates on X1, X2 | N X1, N X2, X3, X4 | the twelve E^5 generators.
inline std::vector<Rational> codim_coordinates(const ModuleCoords& low, const std::vector<Rational>& e5) {
    const std::array<ModuleKey, 6> basis{ModuleKey{{0, 0, 0}, 0}, ModuleKey{{0, 0, 0}, 1}, ModuleKey{{1, 0, 0}, 0},
                                         ModuleKey{{1, 0, 0}, 1}, ModuleKey{{0, 0, 0}, 2}, ModuleKey{{0, 0, 0}, 3}};
    std::vector<Rational> out;
    for (const auto& k : basis) out.push_back(low.coefficient(k));
    out.insert(out.end(), e5.begin(), e5.end());
    return out;
}

inline std::vector<Rational> unit_coordinate(std::initializer_list<std::pair<int, long>> entries) {
    std::vector<Rational> v(18);
    for (const auto& [i, c] : entries) v[i] = c;
    return v;
}

}  // namespace detail

/// Works in the 18-dimensional space of equivariants modulo E^7 spanned by the
/// low-degree generators and the twelve E^5 generators.
inline CodimensionReport codimension_check() {
    CodimensionReport rep;
    RationalMatrix span;
    for (const auto& row : build_Q().entries) span.push_back(detail::codim_coordinates({}, row));
    for (const auto& g : cleared_tangent_generators()) {
        EqVectorField low;
        for (int d : g.field.degrees())
            if (d < 5) low = low + g.field.homogeneous(d);
        const ModuleCoords lc = module_decompose(low, 3);
        ModuleCoords five = module_decompose(g.field.homogeneous(5), 5);
        span.push_back(detail::codim_coordinates(lc, detail::reduce_mod_m_e5(five)));
    }
    rep.span_dimension = rank_exact(span);

    const std::vector<std::pair<std::string, std::vector<Rational>>> wanted{
        {"N*X1", detail::unit_coordinate({{2, 1}})},
        {"X3", detail::unit_coordinate({{4, 1}})},
        {"3*N*X2 + X4", detail::unit_coordinate({{3, 3}, {5, 1}})},
    };
    for (const auto& [label, v] : wanted) rep.members.push_back({label, in_row_span(span, v)});

    RationalMatrix v2 = span, v1 = span;
    for (int i : {0, 1, 3}) v2.push_back(detail::unit_coordinate({{i, 1}}));
    for (int i : {0, 1, 5}) v1.push_back(detail::unit_coordinate({{i, 1}}));
    rep.with_v2 = rank_exact(v2);
    rep.with_v1 = rank_exact(v1);

    // Unfolding terms of G4: alpha (x, y), beta (-y, x), delta N (-y, x).
    const Poly2 x = Poly2::x(), y = Poly2::y();
    const Invariants inv = make_invariants();
    const std::array<EqVectorField, 3> directions{EqVectorField{x, y}, EqVectorField{-y, x},
                                                  inv.N * EqVectorField{-y, x}};
    for (const auto& d : directions) {
        const ModuleCoords c = module_decompose(d, 3);
        if (c.terms.size() == 1 && c.terms.begin()->second == 1)
            rep.unfolding_directions.push_back(c.terms.begin()->first.label());
        else
            rep.unfolding_directions.push_back(c.to_string());
    }
    rep.unfolding_matches_complement = rep.unfolding_directions == rep.complement;
    return rep;
}

struct SingularitySummary {
    int rank_q = 0;
    int codimension = 0;
    std::vector<std::string> complement;
};

inline SingularitySummary singularity_summary() {
    const CodimensionReport c = codimension_check();
    return {rank_exact(build_Q().entries), c.codimension(), c.complement};
}

}  // namespace znmap
