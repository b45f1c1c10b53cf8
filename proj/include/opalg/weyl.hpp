#pragma once

#include <map>
#include <sstream>
#include <stdexcept>
#include <string>

#include "opalg/opring.hpp"

namespace opalg {

enum class WeylBasis { B1, B2, B3 };

inline std::string to_string(WeylBasis b) {
    switch (b) {
        case WeylBasis::B1: return "b1";
        case WeylBasis::B2: return "b2";
        case WeylBasis::B3: return "b3";
    }
    return "?";
}

/// Index of a basis word. The tag selects the sub-basis:
///   D    x^i d^k                     (all bases)
///   R    x^i l^j, j > 0   (B1)  /  x^i l x^j mid-basis word   (B3)
///   E    x^i l^j e d^k    (B1)  /  x^i l x^j d^k, k > 0       (B3)
///   Full x^i l^j d^k                 (B2, the unconstrained triple)
struct WeylIdx {
    enum class Tag : uint8_t { D, R, E, Full };
    Tag tag = Tag::Full;
    unsigned i = 0, j = 0, k = 0;

    friend bool operator==(const WeylIdx& a, const WeylIdx& b) {
        return a.tag == b.tag && a.i == b.i && a.j == b.j && a.k == b.k;
    }
    friend bool operator<(const WeylIdx& a, const WeylIdx& b) {
        if (a.tag != b.tag) return static_cast<uint8_t>(a.tag) < static_cast<uint8_t>(b.tag);
        if (a.i != b.i) return a.i < b.i;
        if (a.j != b.j) return a.j < b.j;
        return a.k < b.k;
    }
};

/// Sparse exact element of the integro-differential Weyl algebra expressed
/// in one of its three bases. B2 is the working basis for multiplication;
/// B1 and B3 carry explicit sub-basis tags so the index constraints stay
/// checkable.
class WeylElt {
public:
    explicit WeylElt(WeylBasis basis) : basis_(basis) {}

    WeylBasis basis() const { return basis_; }
    const std::map<WeylIdx, Rat>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add_term(WeylIdx idx, const Rat& c) {
        validate_index(idx);
        if (c == 0) return;
        auto it = terms_.find(idx);
        if (it == terms_.end()) {
            terms_.emplace(idx, c);
        } else {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    static WeylElt b2_word(unsigned i, unsigned j, unsigned k, const Rat& c = 1) {
        WeylElt e(WeylBasis::B2);
        e.add_term({WeylIdx::Tag::Full, i, j, k}, c);
        return e;
    }

    WeylElt& operator+=(const WeylElt& o) {
        require_same_basis(o);
        for (const auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }
    WeylElt& operator-=(const WeylElt& o) {
        require_same_basis(o);
        for (const auto& [m, c] : o.terms_) add_term(m, -c);
        return *this;
    }
    friend WeylElt operator+(WeylElt a, const WeylElt& b) { return a += b; }
    friend WeylElt operator-(WeylElt a, const WeylElt& b) { return a -= b; }
    friend WeylElt operator*(const Rat& c, const WeylElt& e) {
        WeylElt r(e.basis_);
        if (c == 0) return r;
        for (const auto& [m, mc] : e.terms_) r.terms_[m] = c * mc;
        return r;
    }
    friend bool operator==(const WeylElt& a, const WeylElt& b) {
        return a.basis_ == b.basis_ && a.terms_ == b.terms_;
    }
    friend bool operator!=(const WeylElt& a, const WeylElt& b) { return !(a == b); }

private:
    void require_same_basis(const WeylElt& o) const {
        if (basis_ != o.basis_) throw std::invalid_argument("weyl basis mismatch");
    }
    void validate_index(const WeylIdx& idx) const {
        switch (basis_) {
            case WeylBasis::B2:
                if (idx.tag != WeylIdx::Tag::Full) throw std::invalid_argument("B2 stores unconstrained triples");
                return;
            case WeylBasis::B1:
                if (idx.tag == WeylIdx::Tag::D && idx.j == 0) return;
                if (idx.tag == WeylIdx::Tag::R && idx.j > 0 && idx.k == 0) return;
                if (idx.tag == WeylIdx::Tag::E) return;
                throw std::invalid_argument("index violates the B1 sub-basis constraints");
            case WeylBasis::B3:
                if (idx.tag == WeylIdx::Tag::D && idx.j == 0) return;
                if (idx.tag == WeylIdx::Tag::R && idx.k == 0) return;  // x^i l x^j
                if (idx.tag == WeylIdx::Tag::E && idx.k > 0) return;   // x^i l x^j d^k
                throw std::invalid_argument("index violates the B3 sub-basis constraints");
        }
    }

    WeylBasis basis_;
    std::map<WeylIdx, Rat> terms_;
};

namespace detail {

/// l^j x^s expanded in the right basis: recursion on s via
/// l^j x = x l^j - j l^{j+1}.
inline std::map<std::pair<unsigned, unsigned>, Rat> lx_normal(unsigned j, unsigned s) {
    std::map<std::pair<unsigned, unsigned>, Rat> acc;
    if (s == 0) {
        acc[{0u, j}] = 1;
        return acc;
    }
    for (const auto& [ab, c] : lx_normal(j, s - 1)) acc[{ab.first + 1, ab.second}] += c;
    for (const auto& [ab, c] : lx_normal(j + 1, s - 1)) acc[{ab.first, ab.second}] -= Rat(static_cast<long>(j)) * c;
    for (auto it = acc.begin(); it != acc.end();)
        it = it->second == 0 ? acc.erase(it) : std::next(it);
    return acc;
}

}  // namespace detail

/// Multiplication in the working basis B2, by the skew-polynomial
/// commutations: d^k x^a straightens with binomial coefficients, l^j x^s
/// with the right-basis recursion, and d^u l^v collapses along d l = 1.
inline WeylElt weyl_mul(const WeylElt& a, const WeylElt& b) {
    if (a.basis() != WeylBasis::B2 || b.basis() != WeylBasis::B2)
        throw std::invalid_argument("weyl_mul works in basis B2");
    WeylElt out(WeylBasis::B2);
    for (const auto& [ma, ca] : a.terms()) {
        for (const auto& [mb, cb] : b.terms()) {
            const unsigned i = ma.i, j = ma.j, k = ma.k;
            const unsigned p = mb.i, q = mb.j, r = mb.k;
            // d^k x^p = sum_m binom(k,m) p!/(p-m)! x^{p-m} d^{k-m}
            for (unsigned m = 0; m <= std::min(k, p); ++m) {
                Rat c = ca * cb * binomial(k, m) * falling(p, m);
                unsigned ders = k - m, s = p - m;
                // collapse d^{ders} l^q
                unsigned t = std::min(ders, q);
                unsigned u = ders - t, v = q - t;
                // now x^i l^j x^s (l^v d^{u+r}), exactly one of u, v nonzero
                for (const auto& [ab, lc] : detail::lx_normal(j, s)) {
                    out.add_term({WeylIdx::Tag::Full, i + ab.first, ab.second + v, u + r}, c * lc);
                }
            }
        }
    }
    return out;
}

namespace detail {

inline void b2_add(WeylElt& out, unsigned i, unsigned j, unsigned k, const Rat& c) {
    out.add_term({WeylIdx::Tag::Full, i, j, k}, c);
}

/// B1 -> B2: x^i l^j e d^k maps to x^i (l^j d^k - l^{j+1} d^{k+1}).
inline void b1_term_to_b2(WeylElt& out, const WeylIdx& m, const Rat& c) {
    switch (m.tag) {
        case WeylIdx::Tag::D: b2_add(out, m.i, 0, m.k, c); break;
        case WeylIdx::Tag::R: b2_add(out, m.i, m.j, 0, c); break;
        case WeylIdx::Tag::E:
            b2_add(out, m.i, m.j, m.k, c);
            b2_add(out, m.i, m.j + 1, m.k + 1, -c);
            break;
        default: throw std::invalid_argument("not a B1 index");
    }
}

/// B2 -> B1, piecewise along j >= k / j < k.
inline void b2_term_to_b1(WeylElt& out, const WeylIdx& m, const Rat& c) {
    const unsigned i = m.i, j = m.j, k = m.k;
    if (j == 0) {
        out.add_term({WeylIdx::Tag::D, i, 0, k}, c);
        return;
    }
    if (k == 0) {
        out.add_term({WeylIdx::Tag::R, i, j, 0}, c);
        return;
    }
    if (j >= k) {
        if (j == k)
            out.add_term({WeylIdx::Tag::D, i, 0, 0}, c);
        else
            out.add_term({WeylIdx::Tag::R, i, j - k, 0}, c);
        for (unsigned mm = 1; mm <= k; ++mm) out.add_term({WeylIdx::Tag::E, i, j - mm, k - mm}, -c);
    } else {
        out.add_term({WeylIdx::Tag::D, i, 0, k - j}, c);
        for (unsigned mm = 1; mm <= j; ++mm) out.add_term({WeylIdx::Tag::E, i, j - mm, k - mm}, -c);
    }
}

/// B2 -> B3: x^i l^j d^k = sum_{m<j} (-1)^m/(m!(j-m-1)!) x^{i+j-m-1} l x^m d^k.
inline void b2_term_to_b3(WeylElt& out, const WeylIdx& m, const Rat& c) {
    const unsigned i = m.i, j = m.j, k = m.k;
    if (j == 0) {
        out.add_term({WeylIdx::Tag::D, i, 0, k}, c);
        return;
    }
    for (unsigned mm = 0; mm < j; ++mm) {
        Rat coef = c * ((mm % 2 == 0) ? Rat(1) : Rat(-1)) / (factorial(mm) * factorial(j - mm - 1));
        WeylIdx::Tag tag = k == 0 ? WeylIdx::Tag::R : WeylIdx::Tag::E;
        out.add_term({tag, i + j - mm - 1, mm, k}, coef);
    }
}

/// B3 -> B2: x^i l x^j d^k = sum_{m<=j} (-1)^{j-m} j!/m! x^{i+m} l^{j-m+1} d^k.
inline void b3_term_to_b2(WeylElt& out, const WeylIdx& m, const Rat& c) {
    if (m.tag == WeylIdx::Tag::D) {
        b2_add(out, m.i, 0, m.k, c);
        return;
    }
    const unsigned i = m.i, j = m.j, k = m.k;
    for (unsigned mm = 0; mm <= j; ++mm) {
        Rat coef = c * (((j - mm) % 2 == 0) ? Rat(1) : Rat(-1)) * factorial(j) / factorial(mm);
        b2_add(out, i + mm, j - mm + 1, k, coef);
    }
}

}  // namespace detail

/// Exact basis transition; round trips are the identity.
inline WeylElt convert(const WeylElt& a, WeylBasis to) {
    if (a.basis() == to) return a;
    if (a.basis() == WeylBasis::B1 && to == WeylBasis::B2) {
        WeylElt out(WeylBasis::B2);
        for (const auto& [m, c] : a.terms()) detail::b1_term_to_b2(out, m, c);
        return out;
    }
    if (a.basis() == WeylBasis::B2 && to == WeylBasis::B1) {
        WeylElt out(WeylBasis::B1);
        for (const auto& [m, c] : a.terms()) detail::b2_term_to_b1(out, m, c);
        return out;
    }
    if (a.basis() == WeylBasis::B2 && to == WeylBasis::B3) {
        WeylElt out(WeylBasis::B3);
        for (const auto& [m, c] : a.terms()) detail::b2_term_to_b3(out, m, c);
        return out;
    }
    if (a.basis() == WeylBasis::B3 && to == WeylBasis::B2) {
        WeylElt out(WeylBasis::B2);
        for (const auto& [m, c] : a.terms()) detail::b3_term_to_b2(out, m, c);
        return out;
    }
    // route B1 <-> B3 through B2
    return convert(convert(a, WeylBasis::B2), to);
}

/// The bridge to the ring of differential Rota-Baxter operators over k[x]:
/// B3 words x^i l x^j d^k correspond letter for letter to the DRB normal
/// forms x^i V x^j d^k.
inline OpExpr to_opexpr(const WeylElt& a) {
    if (a.basis() != WeylBasis::B3) throw std::invalid_argument("to_opexpr expects basis B3");
    OpExpr out;
    for (const auto& [m, c] : a.terms()) {
        OpWord w;
        if (m.i > 0) w.push(OpLetter::coeff({m.i, 0}));
        if (m.tag != WeylIdx::Tag::D) {
            w.push(OpLetter::integral(true));
            if (m.j > 0) w.push(OpLetter::coeff({m.j, 0}));
        }
        for (unsigned t = 0; t < m.k; ++t) w.push(OpLetter::der());
        out.add_term(w, c);
    }
    return out;
}

inline WeylElt from_opexpr(const OpExpr& t) {
    WeylElt out(WeylBasis::B3);
    for (const auto& [w, c] : t.terms()) {
        const auto& ls = w.letters();
        size_t pos = 0;
        unsigned i = 0, j = 0, k = 0;
        bool has_int = false;
        if (pos < ls.size() && ls[pos].is_coeff()) {
            if (ls[pos].mono.eps_deg > 0) throw std::invalid_argument("from_opexpr: expression is not over k[x]");
            i = ls[pos].mono.x_deg;
            ++pos;
        }
        if (pos < ls.size() && ls[pos].kind == OpLetter::Kind::VInt) {
            has_int = true;
            ++pos;
            if (pos < ls.size() && ls[pos].is_coeff()) {
                if (ls[pos].mono.eps_deg > 0) throw std::invalid_argument("from_opexpr: expression is not over k[x]");
                j = ls[pos].mono.x_deg;
                ++pos;
            }
        }
        for (; pos < ls.size() && ls[pos].kind == OpLetter::Kind::Der; ++pos) ++k;
        if (pos != ls.size()) throw std::invalid_argument("from_opexpr: word is not a DRB normal form");
        if (!has_int)
            out.add_term({WeylIdx::Tag::D, i, 0, k}, c);
        else
            out.add_term({k == 0 ? WeylIdx::Tag::R : WeylIdx::Tag::E, i, j, k}, c);
    }
    return out;
}

inline std::string weyl_word_str(WeylBasis basis, const WeylIdx& m) {
    std::ostringstream os;
    bool need_star = false;
    auto put = [&](const std::string& s) {
        if (need_star) os << "*";
        os << s;
        need_star = true;
    };
    auto power = [&](const std::string& letter, unsigned e) {
        if (e == 0) return;
        put(e == 1 ? letter : letter + "^" + std::to_string(e));
    };
    power("x", m.i);
    if (basis == WeylBasis::B3 && m.tag != WeylIdx::Tag::D) {
        power("l", 1);
        power("x", m.j);
    } else {
        power("l", m.j);
    }
    if (basis == WeylBasis::B1 && m.tag == WeylIdx::Tag::E) put("E");
    power("D", m.k);
    if (!need_star) os << "1";
    return os.str();
}

inline std::string str(const WeylElt& e) {
    if (e.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = e.terms().rbegin(); it != e.terms().rend(); ++it) {
        const Rat& c = it->second;
        if (first) {
            if (c < 0) os << "-";
        } else {
            os << (c < 0 ? " - " : " + ");
        }
        Rat a = abs(c);
        std::string w = weyl_word_str(e.basis(), it->first);
        if (a != 1 || w == "1") {
            os << to_string(a);
            if (w != "1") os << "*";
        }
        if (w != "1") os << w;
        first = false;
    }
    return os.str();
}

}  // namespace opalg
