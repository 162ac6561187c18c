// Sparse bivariate polynomials with exact rational coefficients, and the
// vector fields and matrix germs built from them.
#pragma once

#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <utility>

namespace znmap {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

struct Monomial {
    int ex = 0;
    int ey = 0;
    int degree() const { return ex + ey; }
    friend bool operator==(Monomial, Monomial) = default;
};

/// Graded order: lower total degree first, then higher power of x first.
struct GradedLex {
    bool operator()(Monomial a, Monomial b) const {
        if (a.degree() != b.degree()) return a.degree() < b.degree();
        return a.ex > b.ex;
    }
};

class Poly2 {
public:
    using Terms = std::map<Monomial, Rational, GradedLex>;

    Poly2() = default;
    Poly2(const Rational& c) { add_term({0, 0}, c); }  // NOLINT: constants convert implicitly
    Poly2(int c) : Poly2(Rational(c)) {}                // NOLINT

    static Poly2 x() { return monomial(1, 1, 0); }
    static Poly2 y() { return monomial(1, 0, 1); }
    static Poly2 monomial(const Rational& c, int ex, int ey) {
        Poly2 p;
        p.add_term({ex, ey}, c);
        return p;
    }

    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add_term(Monomial m, const Rational& c) {
        if (c == 0) return;
        auto [it, inserted] = terms_.try_emplace(m, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    Rational coefficient(Monomial m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? Rational(0) : it->second;
    }

    /// Highest total degree; -1 for the zero polynomial.
    int degree() const { return terms_.empty() ? -1 : terms_.rbegin()->first.degree(); }
    int min_degree() const { return terms_.empty() ? -1 : terms_.begin()->first.degree(); }

    std::set<int> degrees() const {
        std::set<int> out;
        for (const auto& [m, c] : terms_) out.insert(m.degree());
        return out;
    }

    Poly2 homogeneous(int d) const {
        Poly2 out;
        for (const auto& [m, c] : terms_)
            if (m.degree() == d) out.terms_.emplace(m, c);
        return out;
    }

    /// p(-y, x).
    Poly2 quarter_turn_argument() const {
        Poly2 out;
        for (const auto& [m, c] : terms_) out.add_term({m.ey, m.ex}, (m.ex % 2 == 0) ? c : Rational(-c));
        return out;
    }

    Poly2 dx() const {
        Poly2 out;
        for (const auto& [m, c] : terms_)
            if (m.ex > 0) out.add_term({m.ex - 1, m.ey}, c * m.ex);
        return out;
    }

    Poly2 dy() const {
        Poly2 out;
        for (const auto& [m, c] : terms_)
            if (m.ey > 0) out.add_term({m.ex, m.ey - 1}, c * m.ey);
        return out;
    }

    Rational evaluate(const Rational& x, const Rational& y) const {
        Rational sum = 0;
        for (const auto& [m, c] : terms_) {
            Rational t = c;
            for (int i = 0; i < m.ex; ++i) t *= x;
            for (int i = 0; i < m.ey; ++i) t *= y;
            sum += t;
        }
        return sum;
    }

    Poly2 pow(int e) const {
        Poly2 out(1);
        for (int i = 0; i < e; ++i) out = out * *this;
        return out;
    }

    Poly2& operator+=(const Poly2& o) {
        for (const auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }
    Poly2& operator-=(const Poly2& o) {
        for (const auto& [m, c] : o.terms_) add_term(m, -c);
        return *this;
    }
    friend Poly2 operator+(Poly2 a, const Poly2& b) { return a += b; }
    friend Poly2 operator-(Poly2 a, const Poly2& b) { return a -= b; }
    friend Poly2 operator-(const Poly2& a) { return Poly2() - a; }
    friend Poly2 operator*(const Poly2& a, const Poly2& b) {
        Poly2 out;
        for (const auto& [ma, ca] : a.terms_)
            for (const auto& [mb, cb] : b.terms_) out.add_term({ma.ex + mb.ex, ma.ey + mb.ey}, ca * cb);
        return out;
    }
    friend bool operator==(const Poly2& a, const Poly2& b) { return a.terms_ == b.terms_; }

    std::string to_string() const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
            const auto& [m, c] = *it;
            Rational mag = c < 0 ? Rational(-c) : c;
            if (first) os << (c < 0 ? "-" : "");
            else os << (c < 0 ? " - " : " + ");
            first = false;
            const bool unit = mag == 1 && m.degree() > 0;
            if (!unit) os << mag.str();
            auto var = [&](const char* v, int e) {
                if (e == 0) return;
                os << v;
                if (e > 1) os << "^" << e;
            };
            if (!unit && m.degree() > 0) os << "*";
            var("x", m.ex);
            if (m.ex > 0 && m.ey > 0) os << "*";
            var("y", m.ey);
        }
        return os.str();
    }

private:
    Terms terms_;
};

/// Polynomial planar vector field (u, v).
struct EqVectorField {
    Poly2 u;
    Poly2 v;

    friend EqVectorField operator+(const EqVectorField& a, const EqVectorField& b) { return {a.u + b.u, a.v + b.v}; }
    friend EqVectorField operator-(const EqVectorField& a, const EqVectorField& b) { return {a.u - b.u, a.v - b.v}; }
    friend EqVectorField operator*(const Poly2& s, const EqVectorField& f) { return {s * f.u, s * f.v}; }
    friend bool operator==(const EqVectorField& a, const EqVectorField& b) = default;

    bool is_zero() const { return u.is_zero() && v.is_zero(); }
    EqVectorField homogeneous(int d) const { return {u.homogeneous(d), v.homogeneous(d)}; }
    std::set<int> degrees() const {
        std::set<int> out = u.degrees();
        out.merge(v.degrees());
        return out;
    }
    int degree() const { return std::max(u.degree(), v.degree()); }
    int min_degree() const {
        if (u.is_zero()) return v.min_degree();
        if (v.is_zero()) return u.min_degree();
        return std::min(u.min_degree(), v.min_degree());
    }
    std::string to_string() const { return "(" + u.to_string() + ", " + v.to_string() + ")"; }
};

/// 2x2 matrix of polynomials [[a, b], [c, d]].
struct MatrixGerm {
    Poly2 a, b, c, d;

    EqVectorField apply(const EqVectorField& f) const { return {a * f.u + b * f.v, c * f.u + d * f.v}; }
    friend MatrixGerm operator*(const MatrixGerm& l, const MatrixGerm& r) {
        return {l.a * r.a + l.b * r.c, l.a * r.b + l.b * r.d, l.c * r.a + l.d * r.c, l.c * r.b + l.d * r.d};
    }
    friend bool operator==(const MatrixGerm&, const MatrixGerm&) = default;
};

/// Exact test of f(R x) = R f(x) for the quarter turn R(x, y) = (-y, x).
inline bool check_equivariance(const EqVectorField& f) {
    return f.u.quarter_turn_argument() == -f.v && f.v.quarter_turn_argument() == f.u;
}

/// Exact test of S(R x) R = R S(x).
inline bool check_equivariance(const MatrixGerm& s) {
    const MatrixGerm r{0, -1, 1, 0};
    const MatrixGerm turned{s.a.quarter_turn_argument(), s.b.quarter_turn_argument(), s.c.quarter_turn_argument(),
                            s.d.quarter_turn_argument()};
    return turned * r == r * s;
}

}  // namespace znmap
