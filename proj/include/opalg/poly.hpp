#pragma once

#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "opalg/rational.hpp"

namespace opalg {

/// Monomial x^x_deg * eps^eps_deg of the coefficient algebra k[x,eps].
/// Plain k[x] keeps eps_deg = 0 everywhere.
struct XMono {
    unsigned x_deg = 0;
    unsigned eps_deg = 0;

    friend bool operator==(const XMono& a, const XMono& b) {
        return a.x_deg == b.x_deg && a.eps_deg == b.eps_deg;
    }
    friend bool operator<(const XMono& a, const XMono& b) {
        if (a.x_deg != b.x_deg) return a.x_deg < b.x_deg;
        return a.eps_deg < b.eps_deg;
    }
    bool is_one() const { return x_deg == 0 && eps_deg == 0; }
    XMono operator*(const XMono& o) const { return {x_deg + o.x_deg, eps_deg + o.eps_deg}; }
};

inline std::string to_string(const XMono& m) {
    if (m.is_one()) return "1";
    std::string s;
    if (m.x_deg > 0) {
        s = "x";
        if (m.x_deg > 1) s += "^" + std::to_string(m.x_deg);
    }
    if (m.eps_deg > 0) {
        if (!s.empty()) s += "*";
        s += "eps";
        if (m.eps_deg > 1) s += "^" + std::to_string(m.eps_deg);
    }
    return s;
}

/// Sparse exact-rational polynomial in x and eps. Zero coefficients are
/// never stored.
class Poly {
public:
    Poly() = default;
    Poly(const Rat& c) {
        if (c != 0) terms_[XMono{}] = c;
    }
    Poly(long c) : Poly(Rat(c)) {}

    static Poly monomial(XMono m, const Rat& c = 1) {
        Poly p;
        if (c != 0) p.terms_[m] = c;
        return p;
    }
    static Poly x(unsigned deg = 1) { return monomial({deg, 0}); }
    static Poly eps(unsigned deg = 1) { return monomial({0, deg}); }

    const std::map<XMono, Rat>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_one()); }
    bool has_eps() const {
        for (const auto& [m, c] : terms_)
            if (m.eps_deg > 0) return true;
        return false;
    }
    unsigned deg_x() const {
        unsigned d = 0;
        for (const auto& [m, c] : terms_) d = std::max(d, m.x_deg);
        return d;
    }

    void add_term(XMono m, const Rat& c) {
        if (c == 0) return;
        auto it = terms_.find(m);
        if (it == terms_.end()) {
            terms_.emplace(m, c);
        } else {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    Poly& operator+=(const Poly& o) {
        for (const auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }
    Poly& operator-=(const Poly& o) {
        for (const auto& [m, c] : o.terms_) add_term(m, -c);
        return *this;
    }
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    Poly operator-() const {
        Poly r;
        for (const auto& [m, c] : terms_) r.terms_[m] = -c;
        return r;
    }
    friend Poly operator*(const Poly& a, const Poly& b) {
        Poly r;
        for (const auto& [ma, ca] : a.terms_)
            for (const auto& [mb, cb] : b.terms_) r.add_term(ma * mb, ca * cb);
        return r;
    }
    Poly& operator*=(const Poly& o) { return *this = *this * o; }
    friend Poly operator*(const Rat& c, const Poly& p) {
        Poly r;
        if (c == 0) return r;
        for (const auto& [m, pc] : p.terms_) r.terms_[m] = c * pc;
        return r;
    }
    Poly pow(unsigned e) const {
        Poly acc(Rat(1)), b = *this;
        while (e) {
            if (e & 1u) acc *= b;
            if (e >>= 1u) b *= b;
        }
        return acc;
    }

    friend bool operator==(const Poly& a, const Poly& b) { return a.terms_ == b.terms_; }
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }
    friend bool operator<(const Poly& a, const Poly& b) { return a.terms_ < b.terms_; }

    /// Substitute x := v (eps untouched).
    Poly subst_x(const Poly& v) const {
        Poly r;
        for (const auto& [m, c] : terms_) r += c * (v.pow(m.x_deg) * Poly::monomial({0, m.eps_deg}));
        return r;
    }
    /// Substitute eps := c.
    Poly subst_eps(const Rat& c) const {
        Poly r;
        for (const auto& [m, co] : terms_) r.add_term({m.x_deg, 0}, co * rat_pow(c, m.eps_deg));
        return r;
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        // highest monomial first
        for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
            Rat c = it->second;
            if (first) {
                if (c < 0) os << "-";
            } else {
                os << (c < 0 ? " - " : " + ");
            }
            Rat a = abs(c);
            if (a != 1 || it->first.is_one()) {
                os << to_string(a);
                if (!it->first.is_one()) os << "*";
            }
            if (!it->first.is_one()) os << to_string(it->first);
            first = false;
        }
        return os.str();
    }

private:
    std::map<XMono, Rat> terms_;
};

/// Derivation d/dx; eps is a constant.
inline Poly derive(const Poly& p) {
    Poly r;
    for (const auto& [m, c] : p.terms())
        if (m.x_deg > 0) r.add_term({m.x_deg - 1, m.eps_deg}, c * static_cast<long>(m.x_deg));
    return r;
}

enum class CoeffKind { PolyX, PolyXEps };

/// The coefficient algebra together with its differential / Rota-Baxter /
/// evaluation structure. For weight 0 this is the classical structure
/// (d/dx, initialized integral, point evaluation); for weight w != 0 it is
/// the discrete analogue: the difference quotient (f(x+w)-f(x))/w with the
/// matching summation operator, for which the weight-w axioms hold exactly.
struct CoeffStructure {
    CoeffKind kind = CoeffKind::PolyX;
    Rat weight = 0;
    bool generic = false;  // generic initialization point eps; requires PolyXEps
    Rat point = 0;         // initialization point when !generic

    static CoeffStructure poly_x(Rat weight = Rat(0), Rat point = Rat(0)) {
        return {CoeffKind::PolyX, std::move(weight), false, std::move(point)};
    }
    static CoeffStructure poly_x_eps(Rat weight = Rat(0), Rat point = Rat(0)) {
        return {CoeffKind::PolyXEps, std::move(weight), false, std::move(point)};
    }
    static CoeffStructure generic_eps(Rat weight = Rat(0)) {
        return {CoeffKind::PolyXEps, std::move(weight), true, 0};
    }

    void validate() const {
        if (generic && kind != CoeffKind::PolyXEps)
            throw std::invalid_argument("generic initialization requires the k[x,eps] coefficient algebra");
    }
    /// The initialization point as a polynomial (a constant or eps).
    Poly init_point() const { return generic ? Poly::eps() : Poly(point); }
};

/// Structure derivation: d/dx at weight 0, difference quotient otherwise.
inline Poly derive(const Poly& p, const CoeffStructure& s) {
    if (s.weight == 0) return derive(p);
    Poly shifted = p.subst_x(Poly::x() + Poly(s.weight));
    Rat inv = Rat(1) / s.weight;
    return inv * (shifted - p);
}

/// Evaluation e: substitute x := initialization point.
inline Poly evaluate(const Poly& p, const CoeffStructure& s) {
    s.validate();
    return p.subst_x(s.init_point());
}

namespace detail {
/// q_n = prod_{i<n} (x - a - i*w) / n!, the divided-power basis adapted to
/// initialization point a and weight w; q_0 = 1. Satisfies derive_s q_n =
/// q_{n-1} and q_n(a) = 0 for n > 0.
inline Poly divided_power(unsigned n, const Poly& a, const Rat& w) {
    Poly acc(Rat(1));
    for (unsigned i = 0; i < n; ++i) acc *= Poly::x() - a - Poly(Rat(i) * w);
    return Rat(1) / factorial(n) * acc;
}
}  // namespace detail

/// Rota-Baxter operator of the structure: the initialized integral at
/// weight 0, the initialized summation operator otherwise. Section of the
/// structure derivation with image in ker(evaluate).
inline Poly integrate(const Poly& p, const CoeffStructure& s) {
    s.validate();
    if (s.weight == 0) {
        // x^i eps^j -> (x^{i+1} - a^{i+1})/(i+1) eps^j with a the
        // initialization point (a = eps for generic initialization).
        Poly r;
        const Poly a = s.init_point();
        for (const auto& [m, c] : p.terms()) {
            Rat inv = rat(1, m.x_deg + 1);
            Poly head = Poly::monomial({m.x_deg + 1, m.eps_deg}, c * inv);
            Poly tail = (c * inv) * (a.pow(m.x_deg + 1) * Poly::monomial({0, m.eps_deg}));
            r += head - tail;
        }
        return r;
    }
    // expand in the divided-power basis and shift indices up
    Poly r, g = p;
    const Poly a = s.init_point();
    unsigned n = 0;
    while (!g.is_zero()) {
        Poly coeff = evaluate(g, s);  // lives in ker(derive_s) = k[eps] resp. k
        if (!coeff.is_zero()) r += coeff * detail::divided_power(n + 1, a, s.weight);
        g = derive(g, s);
        ++n;
        if (n > 4096) throw std::runtime_error("integrate: basis expansion failed to terminate");
    }
    return r;
}

/// Inverse of f -> f + lambda f' (with f' = d/dx), computed by the finite
/// series sum_m (-lambda)^m f^(m).
inline Poly shift_inverse(const Poly& p, const Rat& lambda) {
    Poly acc, d = p;
    Rat c = 1;
    while (!d.is_zero()) {
        acc += c * d;
        d = derive(d);
        c *= -lambda;
    }
    return acc;
}

/// Inverse of the structure shift f -> f + w * derive_s(f). At weight 0 the
/// shift is the identity; otherwise it is x -> x+w, inverted by x -> x-w.
inline Poly unshift(const Poly& p, const CoeffStructure& s) {
    if (s.weight == 0) return p;
    return p.subst_x(Poly::x() - Poly(s.weight));
}

}  // namespace opalg
