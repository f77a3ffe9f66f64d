#pragma once

// Exact rational arithmetic on bivariate polynomials. Ground truth for every
// polynomial-valued term: integrals, mixed partials, the trapezoid identity and
// the five-term chain on the co-ordinates.

#include <array>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "hhc/types.hpp"

namespace hhc::oracle {

// Expression templates off: `auto` results stay plain values.
using Rational = boost::multiprecision::number<boost::multiprecision::cpp_rational_backend, boost::multiprecision::et_off>;
using BigInt = boost::multiprecision::cpp_int;

inline Rational make_rational(std::int64_t num, std::int64_t den = 1) {
    if (den == 0) throw ParameterError("rational with zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    return Rational(BigInt(num), BigInt(den));
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

inline Rational pow_int(const Rational& base, int e) {
    Rational r = 1;
    for (int n = 0; n < e; ++n) r *= base;
    return r;
}

struct RationalRect {
    Rational a{0}, b{1}, c{0}, d{1};

    void validate() const {
        if (!(a < b && c < d)) throw ParameterError("rational rectangle needs a < b and c < d");
    }
    Rect to_rect() const { return Rect{to_double(a), to_double(b), to_double(c), to_double(d)}; }
};

/// Univariate polynomial, sparse, exponent -> coefficient. Zero coefficients are never stored.
class RationalPoly1 {
public:
    RationalPoly1() = default;
    RationalPoly1(std::initializer_list<std::pair<int, Rational>> terms) {
        for (const auto& [i, c] : terms) add_term(i, c);
    }

    static RationalPoly1 constant(const Rational& c) { return RationalPoly1{{0, c}}; }
    /// c0 + c1 * t
    static RationalPoly1 affine(const Rational& c0, const Rational& c1) {
        return RationalPoly1{{0, c0}, {1, c1}};
    }

    void add_term(int exponent, const Rational& coeff) {
        if (exponent < 0) throw ParameterError("negative exponent");
        if (coeff == 0) return;
        auto [it, inserted] = terms_.try_emplace(exponent, coeff);
        if (!inserted) {
            it->second += coeff;
            if (it->second == 0) terms_.erase(it);
        }
    }

    const std::map<int, Rational>& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }
    int degree() const noexcept { return terms_.empty() ? -1 : terms_.rbegin()->first; }

    Rational eval(const Rational& t) const {
        Rational acc = 0;
        // Horner over the dense range.
        for (int i = degree(); i >= 0; --i) {
            acc *= t;
            if (auto it = terms_.find(i); it != terms_.end()) acc += it->second;
        }
        return acc;
    }

    RationalPoly1 antiderivative() const {
        RationalPoly1 out;
        for (const auto& [i, c] : terms_) out.add_term(i + 1, c / (i + 1));
        return out;
    }

    friend RationalPoly1 operator+(RationalPoly1 lhs, const RationalPoly1& rhs) {
        for (const auto& [i, c] : rhs.terms_) lhs.add_term(i, c);
        return lhs;
    }
    friend RationalPoly1 operator*(const RationalPoly1& lhs, const RationalPoly1& rhs) {
        RationalPoly1 out;
        for (const auto& [i, ci] : lhs.terms_)
            for (const auto& [j, cj] : rhs.terms_) out.add_term(i + j, ci * cj);
        return out;
    }
    friend RationalPoly1 operator*(const Rational& k, RationalPoly1 p) {
        if (k == 0) return {};
        for (auto& [i, c] : p.terms_) c *= k;
        return p;
    }
    friend bool operator==(const RationalPoly1&, const RationalPoly1&) = default;

private:
    std::map<int, Rational> terms_;
};

/// Bivariate polynomial sum c_ij x^i y^j with exact rational coefficients.
class RationalPoly2 {
public:
    struct Term {
        int i;
        int j;
        Rational coeff;
    };
    using Key = std::pair<int, int>;

    RationalPoly2() = default;
    RationalPoly2(std::initializer_list<Term> terms) {
        for (const auto& t : terms) add_term(t.i, t.j, t.coeff);
    }

    static RationalPoly2 constant(const Rational& c) { return RationalPoly2{{0, 0, c}}; }

    void add_term(int i, int j, const Rational& coeff) {
        if (i < 0 || j < 0) throw ParameterError("negative exponent");
        if (coeff == 0) return;
        auto [it, inserted] = terms_.try_emplace(Key{i, j}, coeff);
        if (!inserted) {
            it->second += coeff;
            if (it->second == 0) terms_.erase(it);
        }
    }

    const std::map<Key, Rational>& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }

    int degree_x() const noexcept {
        int d = -1;
        for (const auto& [k, c] : terms_) d = std::max(d, k.first);
        return d;
    }
    int degree_y() const noexcept {
        int d = -1;
        for (const auto& [k, c] : terms_) d = std::max(d, k.second);
        return d;
    }

    Rational eval(const Rational& x, const Rational& y) const {
        Rational acc = 0;
        for (const auto& [k, c] : terms_) acc += c * pow_int(x, k.first) * pow_int(y, k.second);
        return acc;
    }

    /// y fixed: returns the polynomial in x.
    RationalPoly1 restrict_y(const Rational& y) const {
        RationalPoly1 out;
        for (const auto& [k, c] : terms_) out.add_term(k.first, c * pow_int(y, k.second));
        return out;
    }
    /// x fixed: returns the polynomial in y.
    RationalPoly1 restrict_x(const Rational& x) const {
        RationalPoly1 out;
        for (const auto& [k, c] : terms_) out.add_term(k.second, c * pow_int(x, k.first));
        return out;
    }

    friend RationalPoly2 operator+(RationalPoly2 lhs, const RationalPoly2& rhs) {
        for (const auto& [k, c] : rhs.terms_) lhs.add_term(k.first, k.second, c);
        return lhs;
    }
    friend RationalPoly2 operator*(const RationalPoly2& lhs, const RationalPoly2& rhs) {
        RationalPoly2 out;
        for (const auto& [ki, ci] : lhs.terms_)
            for (const auto& [kj, cj] : rhs.terms_)
                out.add_term(ki.first + kj.first, ki.second + kj.second, ci * cj);
        return out;
    }
    friend RationalPoly2 operator*(const Rational& k, RationalPoly2 p) {
        if (k == 0) return {};
        for (auto& [key, c] : p.terms_) c *= k;
        return p;
    }
    friend bool operator==(const RationalPoly2&, const RationalPoly2&) = default;

    /// Separable product u(x) * v(y).
    static RationalPoly2 outer(const RationalPoly1& u, const RationalPoly1& v) {
        RationalPoly2 out;
        for (const auto& [i, ci] : u.terms())
            for (const auto& [j, cj] : v.terms()) out.add_term(i, j, ci * cj);
        return out;
    }

    std::string to_string() const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& [k, c] : terms_) {
            if (!first) os << " + ";
            first = false;
            os << c;
            if (k.first > 0) os << "*x^" << k.first;
            if (k.second > 0) os << "*y^" << k.second;
        }
        return os.str();
    }

private:
    std::map<Key, Rational> terms_;
};

inline Rational poly_integral_1d_exact(const RationalPoly1& p, const Rational& lo,
                                       const Rational& hi) {
    const RationalPoly1 anti = p.antiderivative();
    return anti.eval(hi) - anti.eval(lo);
}

/// Iterated antiderivative over [a,b] x [c,d].
inline Rational poly_integral_2d_exact(const RationalPoly2& p, const RationalRect& r) {
    Rational total = 0;
    for (const auto& [k, coeff] : p.terms()) {
        const auto [i, j] = k;
        const Rational ix = (pow_int(r.b, i + 1) - pow_int(r.a, i + 1)) / (i + 1);
        const Rational iy = (pow_int(r.d, j + 1) - pow_int(r.c, j + 1)) / (j + 1);
        total += coeff * ix * iy;
    }
    return total;
}

inline RationalPoly2 poly_mixed_partial(const RationalPoly2& p) {
    RationalPoly2 out;
    for (const auto& [k, c] : p.terms()) {
        const auto [i, j] = k;
        if (i > 0 && j > 0) out.add_term(i - 1, j - 1, c * i * j);
    }
    return out;
}

/// Substitutes x = x0 + x1*lambda, y = y0 + y1*mu. The result is a polynomial in (lambda, mu).
inline RationalPoly2 compose_affine(const RationalPoly2& p, const Rational& x0, const Rational& x1,
                                    const Rational& y0, const Rational& y1) {
    const RationalPoly1 ax = RationalPoly1::affine(x0, x1);
    const RationalPoly1 ay = RationalPoly1::affine(y0, y1);
    std::vector<RationalPoly1> xpow{RationalPoly1::constant(1)};
    std::vector<RationalPoly1> ypow{RationalPoly1::constant(1)};
    for (int n = 0; n < p.degree_x(); ++n) xpow.push_back(xpow.back() * ax);
    for (int n = 0; n < p.degree_y(); ++n) ypow.push_back(ypow.back() * ay);

    RationalPoly2 out;
    for (const auto& [k, c] : p.terms())
        out = out + c * RationalPoly2::outer(xpow[k.first], ypow[k.second]);
    return out;
}

/// Both sides of the trapezoid identity on the co-ordinates, evaluated exactly.
struct Lemma1Sides {
    Rational corner_avg;
    Rational integral_mean;
    Rational marginal_a;
    Rational deviation;  // corner_avg + integral_mean - marginal_a
    Rational identity_rhs;
};

inline Lemma1Sides lemma1_sides_exact(const RationalPoly2& p, const RationalRect& r) {
    r.validate();
    Lemma1Sides s;
    s.corner_avg = (p.eval(r.a, r.c) + p.eval(r.a, r.d) + p.eval(r.b, r.c) + p.eval(r.b, r.d)) / 4;
    const Rational width = r.b - r.a;
    const Rational height = r.d - r.c;
    s.integral_mean = poly_integral_2d_exact(p, r) / (width * height);
    const Rational x_edges = poly_integral_1d_exact(p.restrict_y(r.c) + p.restrict_y(r.d), r.a, r.b);
    const Rational y_edges = poly_integral_1d_exact(p.restrict_x(r.a) + p.restrict_x(r.b), r.c, r.d);
    s.marginal_a = (x_edges / width + y_edges / height) / 2;
    s.deviation = s.corner_avg + s.integral_mean - s.marginal_a;

    // lambda a + (1 - lambda) b = b + (a - b) lambda, likewise in y.
    const RationalPoly2 d2 = poly_mixed_partial(p);
    const RationalPoly2 reparam = compose_affine(d2, r.b, r.a - r.b, r.d, r.c - r.d);
    const RationalPoly2 kernel = RationalPoly2::outer(RationalPoly1::affine(1, -2),
                                                      RationalPoly1::affine(1, -2));
    const RationalPoly2 integrand = kernel * reparam;
    s.identity_rhs = width * height / 4 * poly_integral_2d_exact(integrand, RationalRect{});
    return s;
}

/// deviation - identity_rhs, exactly. Zero for every polynomial.
inline Rational lemma1_check_exact(const RationalPoly2& p, const RationalRect& r) {
    const Lemma1Sides s = lemma1_sides_exact(p, r);
    return s.deviation - s.identity_rhs;
}

/// The five chain quantities on the co-ordinates: centre value, mid-line means,
/// double-integral mean, edge means, corner average.
inline std::array<Rational, 5> five_term_chain_exact(const RationalPoly2& p, const RationalRect& r) {
    r.validate();
    const Rational width = r.b - r.a;
    const Rational height = r.d - r.c;
    const Rational xm = (r.a + r.b) / 2;
    const Rational ym = (r.c + r.d) / 2;
    std::array<Rational, 5> v;
    v[0] = p.eval(xm, ym);
    v[1] = (poly_integral_1d_exact(p.restrict_y(ym), r.a, r.b) / width +
            poly_integral_1d_exact(p.restrict_x(xm), r.c, r.d) / height) /
           2;
    v[2] = poly_integral_2d_exact(p, r) / (width * height);
    v[3] = (poly_integral_1d_exact(p.restrict_y(r.c) + p.restrict_y(r.d), r.a, r.b) / width +
            poly_integral_1d_exact(p.restrict_x(r.a) + p.restrict_x(r.b), r.c, r.d) / height) /
           4;
    v[4] = (p.eval(r.a, r.c) + p.eval(r.a, r.d) + p.eval(r.b, r.c) + p.eval(r.b, r.d)) / 4;
    return v;
}

}  // namespace hhc::oracle
