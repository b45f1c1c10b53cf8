#pragma once

#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "opalg/poly.hpp"

namespace opalg {

enum class Variety { Diff, RB, DRB, ID };

inline std::string to_string(Variety v) {
    switch (v) {
        case Variety::Diff: return "diff";
        case Variety::RB: return "rb";
        case Variety::DRB: return "drb";
        case Variety::ID: return "id";
    }
    return "?";
}

/// Which variety, at which weight, over which coefficient structure. The
/// variety selects the rewrite system and the admissible operator letters.
struct RingSpec {
    Variety variety = Variety::Diff;
    Rat weight = 0;
    CoeffStructure coeff = CoeffStructure::poly_x();

    static RingSpec make(Variety v, Rat weight = Rat(0), CoeffStructure c = CoeffStructure::poly_x()) {
        c.weight = weight;
        RingSpec s{v, std::move(weight), std::move(c)};
        s.coeff.validate();
        return s;
    }
    /// The integral letter of this variety (the Rota-Baxter flavored letter
    /// in RB and DRB, the integro-differential one in ID).
    bool uses_vint() const { return variety == Variety::RB || variety == Variety::DRB; }
};

struct OpLetter {
    enum class Kind : uint8_t { Coeff, Ev, VInt, Int, Der };
    Kind kind = Kind::Coeff;
    XMono mono;  // meaningful only for Coeff

    static OpLetter coeff(XMono m) { return {Kind::Coeff, m}; }
    static OpLetter der() { return {Kind::Der, {}}; }
    static OpLetter integral(bool vint) { return {vint ? Kind::VInt : Kind::Int, {}}; }
    static OpLetter ev() { return {Kind::Ev, {}}; }

    bool is_coeff() const { return kind == Kind::Coeff; }
    bool is_int() const { return kind == Kind::Int || kind == Kind::VInt; }

    friend bool operator==(const OpLetter& a, const OpLetter& b) {
        return a.kind == b.kind && (a.kind != Kind::Coeff || a.mono == b.mono);
    }
    /// Precedence for the term order: Der > Int/VInt > Ev > Coeff;
    /// coefficient letters compare by (x-degree, eps-degree).
    friend bool operator<(const OpLetter& a, const OpLetter& b) {
        if (a.kind != b.kind) return static_cast<uint8_t>(a.kind) < static_cast<uint8_t>(b.kind);
        if (a.kind != Kind::Coeff) return false;
        return a.mono < b.mono;
    }
};

/// A monomial of the free operator ring: an alternating word of basis
/// coefficient monomials and operator letters. Canonical storage fuses
/// adjacent coefficient letters and drops unit coefficients, so the word
/// is the identity element exactly when it is empty.
class OpWord {
public:
    OpWord() = default;
    explicit OpWord(std::vector<OpLetter> letters) { append(letters); }

    static OpWord one() { return OpWord(); }

    const std::vector<OpLetter>& letters() const { return letters_; }
    size_t size() const { return letters_.size(); }
    bool is_one() const { return letters_.empty(); }

    void push(const OpLetter& l) {
        if (l.is_coeff()) {
            if (l.mono.is_one()) return;
            if (!letters_.empty() && letters_.back().is_coeff()) {
                letters_.back().mono = letters_.back().mono * l.mono;
                return;
            }
        }
        letters_.push_back(l);
    }
    void append(const std::vector<OpLetter>& ls) {
        for (const auto& l : ls) push(l);
    }
    void append(const OpWord& w) { append(w.letters_); }

    friend OpWord operator*(const OpWord& a, const OpWord& b) {
        OpWord r = a;
        r.append(b);
        return r;
    }

    OpWord slice(size_t from, size_t to) const {
        OpWord r;
        for (size_t i = from; i < to; ++i) r.push(letters_[i]);
        return r;
    }

    bool has_eps() const {
        for (const auto& l : letters_)
            if (l.is_coeff() && l.mono.eps_deg > 0) return true;
        return false;
    }

    friend bool operator==(const OpWord& a, const OpWord& b) { return a.letters_ == b.letters_; }
    /// Graded (by letter count) lexicographic order.
    friend bool operator<(const OpWord& a, const OpWord& b) {
        if (a.letters_.size() != b.letters_.size()) return a.letters_.size() < b.letters_.size();
        for (size_t i = 0; i < a.letters_.size(); ++i) {
            if (a.letters_[i] == b.letters_[i]) continue;
            return a.letters_[i] < b.letters_[i];
        }
        return false;
    }

private:
    std::vector<OpLetter> letters_;
};

/// Scalar-weighted sum of canonical operator words.
class OpExpr {
public:
    OpExpr() = default;
    OpExpr(const OpWord& w, const Rat& c = 1) { add_term(w, c); }
    OpExpr(const Rat& c) { add_term(OpWord::one(), c); }
    OpExpr(long c) : OpExpr(Rat(c)) {}

    static OpExpr zero() { return OpExpr(); }
    static OpExpr one() { return OpExpr(OpWord::one()); }

    const std::map<OpWord, Rat>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    size_t size() const { return terms_.size(); }

    void add_term(const OpWord& w, const Rat& c) {
        if (c == 0) return;
        auto it = terms_.find(w);
        if (it == terms_.end()) {
            terms_.emplace(w, c);
        } else {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    OpExpr& operator+=(const OpExpr& o) {
        for (const auto& [w, c] : o.terms_) add_term(w, c);
        return *this;
    }
    OpExpr& operator-=(const OpExpr& o) {
        for (const auto& [w, c] : o.terms_) add_term(w, -c);
        return *this;
    }
    friend OpExpr operator+(OpExpr a, const OpExpr& b) { return a += b; }
    friend OpExpr operator-(OpExpr a, const OpExpr& b) { return a -= b; }
    OpExpr operator-() const {
        OpExpr r;
        for (const auto& [w, c] : terms_) r.terms_[w] = -c;
        return r;
    }
    friend OpExpr operator*(const Rat& c, const OpExpr& e) {
        OpExpr r;
        if (c == 0) return r;
        for (const auto& [w, wc] : e.terms_) r.terms_[w] = c * wc;
        return r;
    }
    friend bool operator==(const OpExpr& a, const OpExpr& b) { return a.terms_ == b.terms_; }
    friend bool operator!=(const OpExpr& a, const OpExpr& b) { return !(a == b); }

private:
    std::map<OpWord, Rat> terms_;
};

/// Free product multiplication: word concatenation with coefficient fusion,
/// no rewriting.
inline OpExpr mul(const OpExpr& a, const OpExpr& b) {
    OpExpr r;
    for (const auto& [wa, ca] : a.terms())
        for (const auto& [wb, cb] : b.terms()) r.add_term(wa * wb, ca * cb);
    return r;
}

inline OpExpr operator*(const OpExpr& a, const OpExpr& b) { return mul(a, b); }

/// Embed a coefficient polynomial into the operator ring: scalars move to
/// the expression level, basis monomials become coefficient letters.
inline OpExpr coeff_expr(const Poly& p) {
    OpExpr r;
    for (const auto& [m, c] : p.terms()) r.add_term(OpWord({OpLetter::coeff(m)}), c);
    return r;
}

inline OpExpr op_pow(const OpExpr& a, unsigned e) {
    OpExpr acc = OpExpr::one(), b = a;
    while (e) {
        if (e & 1u) acc = mul(acc, b);
        if (e >>= 1u) b = mul(b, b);
    }
    return acc;
}

inline OpExpr der_expr(unsigned k = 1) {
    OpWord w;
    for (unsigned i = 0; i < k; ++i) w.push(OpLetter::der());
    return OpExpr(w);
}
inline OpExpr int_expr(const RingSpec& spec, unsigned k = 1) {
    OpWord w;
    for (unsigned i = 0; i < k; ++i) w.push(OpLetter::integral(spec.uses_vint()));
    return OpExpr(w);
}
inline OpExpr ev_expr() { return OpExpr(OpWord({OpLetter::ev()})); }

inline void validate_letters(const OpWord& w, const RingSpec& spec) {
    for (const auto& l : w.letters()) {
        bool ok = true;
        switch (l.kind) {
            case OpLetter::Kind::Coeff:
                ok = l.mono.eps_deg == 0 || spec.coeff.kind == CoeffKind::PolyXEps;
                break;
            case OpLetter::Kind::Der: ok = spec.variety != Variety::RB; break;
            case OpLetter::Kind::VInt: ok = spec.uses_vint(); break;
            case OpLetter::Kind::Int: ok = spec.variety == Variety::ID; break;
            case OpLetter::Kind::Ev: ok = spec.variety == Variety::ID; break;
        }
        if (!ok) throw std::invalid_argument("letter not admitted in the " + to_string(spec.variety) + " ring");
    }
}

inline void validate_letters(const OpExpr& t, const RingSpec& spec) {
    for (const auto& [w, c] : t.terms()) validate_letters(w, spec);
}

// ---------------------------------------------------------------------------
// Rewriting

namespace rules {

/// Right-hand sides of the rule schemas, written with the tail polynomials
/// expanded over basis monomials. f is the coefficient between the matched
/// operator letters (the unit polynomial when the letters are adjacent).

/// Der f -> f Der + w f' Der + f'
inline OpExpr leibniz(const Poly& f, const RingSpec& spec) {
    Poly fp = derive(f, spec.coeff);
    return mul(coeff_expr(f + spec.weight * fp), der_expr()) + coeff_expr(fp);
}

/// Int f Int -> f` Int - Int f` - w Int f
inline OpExpr rota_baxter(const Poly& f, const RingSpec& spec) {
    Poly fi = integrate(f, spec.coeff);
    OpExpr I = int_expr(spec);
    return mul(coeff_expr(fi), I) - mul(I, coeff_expr(fi)) - spec.weight * mul(I, coeff_expr(f));
}

/// Der Int -> 1
inline OpExpr section() { return OpExpr::one(); }

/// Int f Der -> f_ - Int f_' - e(f_) Ev   with f_ the shift inverse of f.
/// With ev_letters = false the trailing evaluation is kept expanded as
/// e(f_) (1 - Int Der).
inline OpExpr int_der(const Poly& f, const RingSpec& spec, bool ev_letters = true) {
    Poly fu = unshift(f, spec.coeff);
    Poly fup = derive(fu, spec.coeff);
    Poly ev = evaluate(fu, spec.coeff);
    OpExpr I = int_expr(spec);
    OpExpr r = coeff_expr(fu) - mul(I, coeff_expr(fup));
    if (ev_letters)
        r -= mul(coeff_expr(ev), ev_expr());
    else
        r -= mul(coeff_expr(ev), OpExpr::one() - mul(I, der_expr()));
    return r;
}

/// Ev f -> e(f) Ev
inline OpExpr ev_coeff(const Poly& f, const RingSpec& spec) {
    return mul(coeff_expr(evaluate(f, spec.coeff)), ev_expr());
}

/// Int f Ev -> (Int f) Ev
inline OpExpr int_ev(const Poly& f, const RingSpec& spec) {
    return mul(coeff_expr(integrate(f, spec.coeff)), ev_expr());
}

}  // namespace rules

namespace detail {

enum class RuleId { Leibniz, Section, DerEv, RotaBaxter, IntDer, IntEv, EvCoeff, EvEv, EvInt, EpsSlide };

struct Redex {
    size_t pos;      // index of the first letter of the matched segment
    size_t len;      // number of letters in the segment
    RuleId rule;
    XMono mid;       // the coefficient inside the segment, unit if none
};

/// ID normal forms over k[x,eps] keep pure-eps monomial factors in front:
/// the integral and the evaluation are linear over ker(der) = k[eps], which
/// is an instance of the integration-by-parts relator at constant
/// parameters. The slide rule implements that normalization.
inline bool slide_enabled(const RingSpec& spec) {
    return spec.variety == Variety::ID && spec.coeff.kind == CoeffKind::PolyXEps;
}

/// With ev_letters = false (the e-free presentation) the bare Int Der pair
/// is irreducible: it is the expansion of the evaluation abbreviation, and
/// rewriting it would reproduce itself.
inline std::optional<Redex> match_at(const OpWord& w, size_t i, const RingSpec& spec, bool ev_letters = true) {
    const auto& ls = w.letters();
    const OpLetter& a = ls[i];
    const bool id_ring = spec.variety == Variety::ID;
    auto next_op = [&](size_t j) -> std::optional<std::pair<size_t, XMono>> {
        // the operator letter following position j, skipping one coefficient
        XMono mid{};
        size_t k = j + 1;
        if (k < ls.size() && ls[k].is_coeff()) {
            mid = ls[k].mono;
            ++k;
        }
        if (k >= ls.size()) return std::nullopt;
        return std::make_pair(k, mid);
    };

    switch (a.kind) {
        case OpLetter::Kind::Der:
            if (i + 1 < ls.size()) {
                if (ls[i + 1].is_coeff()) return Redex{i, 2, RuleId::Leibniz, ls[i + 1].mono};
                if (ls[i + 1].is_int() && spec.variety != Variety::Diff)
                    return Redex{i, 2, RuleId::Section, {}};
                if (ls[i + 1].kind == OpLetter::Kind::Ev && id_ring) return Redex{i, 2, RuleId::DerEv, {}};
            }
            break;
        case OpLetter::Kind::Int:
        case OpLetter::Kind::VInt:
            if (auto n = next_op(i)) {
                auto [k, mid] = *n;
                size_t len = k - i + 1;
                if (ls[k].is_int()) return Redex{i, len, RuleId::RotaBaxter, mid};
                if (ls[k].kind == OpLetter::Kind::Der && id_ring && (ev_letters || !mid.is_one()))
                    return Redex{i, len, RuleId::IntDer, mid};
                if (ls[k].kind == OpLetter::Kind::Ev && id_ring) return Redex{i, len, RuleId::IntEv, mid};
            }
            break;
        case OpLetter::Kind::Ev:
            if (i + 1 < ls.size()) {
                if (ls[i + 1].is_coeff()) return Redex{i, 2, RuleId::EvCoeff, ls[i + 1].mono};
                if (ls[i + 1].kind == OpLetter::Kind::Ev) return Redex{i, 2, RuleId::EvEv, {}};
                if (ls[i + 1].is_int()) return Redex{i, 2, RuleId::EvInt, {}};
            }
            break;
        case OpLetter::Kind::Coeff:
            if (i > 0 && a.mono.eps_deg > 0 && slide_enabled(spec)) return Redex{i, 1, RuleId::EpsSlide, a.mono};
            break;
    }
    return std::nullopt;
}

inline std::vector<Redex> all_redexes(const OpWord& w, const RingSpec& spec, bool ev_letters = true) {
    std::vector<Redex> out;
    for (size_t i = 0; i < w.size(); ++i)
        if (auto r = match_at(w, i, spec, ev_letters)) out.push_back(*r);
    return out;
}

inline OpExpr rewrite(const OpWord& w, const Redex& r, const RingSpec& spec, bool ev_letters) {
    if (r.rule == RuleId::EpsSlide) {
        // move the pure-eps factor of the coefficient letter to the front
        OpWord out;
        out.push(OpLetter::coeff({0, r.mid.eps_deg}));
        for (size_t i = 0; i < w.size(); ++i) {
            if (i == r.pos)
                out.push(OpLetter::coeff({r.mid.x_deg, 0}));
            else
                out.push(w.letters()[i]);
        }
        return OpExpr(out);
    }
    Poly f = Poly::monomial(r.mid);
    OpExpr body;
    switch (r.rule) {
        case RuleId::Leibniz: body = rules::leibniz(f, spec); break;
        case RuleId::Section: body = rules::section(); break;
        case RuleId::DerEv: body = OpExpr::zero(); break;
        case RuleId::RotaBaxter: body = rules::rota_baxter(f, spec); break;
        case RuleId::IntDer: body = rules::int_der(f, spec, ev_letters); break;
        case RuleId::IntEv: body = rules::int_ev(f, spec); break;
        case RuleId::EvCoeff: body = rules::ev_coeff(f, spec); break;
        case RuleId::EvEv: body = ev_expr(); break;
        case RuleId::EvInt: body = OpExpr::zero(); break;
        case RuleId::EpsSlide: break;  // handled above
    }
    OpExpr prefix(w.slice(0, r.pos));
    OpExpr suffix(w.slice(r.pos + r.len, w.size()));
    return mul(mul(prefix, body), suffix);
}

}  // namespace detail

enum class Strategy { LeftmostOutermost, Randomized };

inline bool is_normal(const OpWord& w, const RingSpec& spec) {
    for (size_t i = 0; i < w.size(); ++i)
        if (detail::match_at(w, i, spec)) return false;
    return true;
}

inline bool is_normal(const OpExpr& t, const RingSpec& spec) {
    for (const auto& [w, c] : t.terms())
        if (!is_normal(w, spec)) return false;
    return true;
}

namespace detail {
inline OpExpr normal_form_impl(const OpExpr& t, const RingSpec& spec, Strategy strategy, std::mt19937_64* rng,
                               bool ev_letters) {
    validate_letters(t, spec);
    std::map<OpWord, Rat> work(t.terms().begin(), t.terms().end());
    OpExpr done;
    while (!work.empty()) {
        auto it = work.begin();
        if (strategy == Strategy::Randomized && work.size() > 1) {
            std::uniform_int_distribution<size_t> pick(0, work.size() - 1);
            std::advance(it, pick(*rng));
        }
        OpWord w = it->first;
        Rat c = it->second;
        work.erase(it);
        if (c == 0) continue;

        std::optional<Redex> redex;
        if (strategy == Strategy::LeftmostOutermost) {
            for (size_t i = 0; i < w.size() && !redex; ++i) redex = match_at(w, i, spec, ev_letters);
        } else {
            auto rs = all_redexes(w, spec, ev_letters);
            if (!rs.empty()) {
                std::uniform_int_distribution<size_t> pick(0, rs.size() - 1);
                redex = rs[pick(*rng)];
            }
        }
        if (!redex) {
            done.add_term(w, c);
            continue;
        }
        OpExpr replaced = rewrite(w, *redex, spec, ev_letters);
        for (const auto& [w2, c2] : replaced.terms()) {
            auto [jt, inserted] = work.emplace(w2, c * c2);
            if (!inserted) {
                jt->second += c * c2;
                if (jt->second == 0) work.erase(jt);
            }
        }
    }
    return done;
}
}  // namespace detail

/// Fixpoint of exhaustive rewriting with the rule set selected by spec.
/// Terminating and confluent, so the strategy does not change the result;
/// the randomized variant exists to let tests assert exactly that.
inline OpExpr normal_form(const OpExpr& t, const RingSpec& spec) {
    return detail::normal_form_impl(t, spec, Strategy::LeftmostOutermost, nullptr, true);
}

inline OpExpr normal_form(const OpExpr& t, const RingSpec& spec, Strategy strategy, std::mt19937_64& rng) {
    return detail::normal_form_impl(t, spec, strategy, &rng, true);
}

/// ID rewriting in the e-free presentation: the evaluation letter is not
/// admitted and rule right-hand sides keep e expanded as 1 - Int Der.
inline OpExpr normal_form_expanded_ev(const OpExpr& t, const RingSpec& spec) {
    if (spec.variety != Variety::ID) throw std::invalid_argument("expanded-ev rewriting is an ID variant");
    for (const auto& [w, c] : t.terms())
        for (const auto& l : w.letters())
            if (l.kind == OpLetter::Kind::Ev)
                throw std::invalid_argument("expanded-ev rewriting admits no evaluation letters");
    return detail::normal_form_impl(t, spec, Strategy::LeftmostOutermost, nullptr, false);
}

// ---------------------------------------------------------------------------
// Canonical-form classification

enum class Component { DiffPart, IntPart, Rung, EvalIdeal };

inline std::string to_string(Component c) {
    switch (c) {
        case Component::DiffPart: return "diff";
        case Component::IntPart: return "int";
        case Component::Rung: return "rung";
        case Component::EvalIdeal: return "eval";
    }
    return "?";
}

namespace detail {
/// Shape of a normal-form word: optional coefficient, then per variety
///   f Der^k | f Int g | f Int g Der^k (k>0) | f Ev Der^k.
inline Component classify_word(const OpWord& w, const RingSpec& spec) {
    const auto& ls = w.letters();
    size_t i = 0;
    if (i < ls.size() && ls[i].is_coeff()) ++i;
    if (i == ls.size()) return Component::DiffPart;  // element of A
    if (ls[i].kind == OpLetter::Kind::Der) {
        for (; i < ls.size(); ++i)
            if (ls[i].kind != OpLetter::Kind::Der) throw std::runtime_error("classify: not a normal-form word");
        return Component::DiffPart;
    }
    if (ls[i].is_int()) {
        ++i;
        if (i < ls.size() && ls[i].is_coeff()) ++i;
        if (i == ls.size()) return Component::IntPart;
        if (spec.variety == Variety::DRB) {
            size_t k = 0;
            for (; i < ls.size(); ++i, ++k)
                if (ls[i].kind != OpLetter::Kind::Der) throw std::runtime_error("classify: not a normal-form word");
            return k > 0 ? Component::Rung : Component::IntPart;
        }
        throw std::runtime_error("classify: not a normal-form word");
    }
    if (ls[i].kind == OpLetter::Kind::Ev && spec.variety == Variety::ID) {
        ++i;
        for (; i < ls.size(); ++i)
            if (ls[i].kind != OpLetter::Kind::Der) throw std::runtime_error("classify: not a normal-form word");
        return Component::EvalIdeal;
    }
    throw std::runtime_error("classify: not a normal-form word");
}
}  // namespace detail

/// Split a normal form along the direct-sum decomposition of its ring:
/// A[d,V] = A[d] + A[V]\A + [e]  resp.  A[d,I] = A[d] + A[I]\A + (e).
inline std::map<Component, OpExpr> classify(const OpExpr& t, const RingSpec& spec) {
    if (spec.variety != Variety::DRB && spec.variety != Variety::ID)
        throw std::invalid_argument("classify applies to the DRB and ID rings");
    std::map<Component, OpExpr> out;
    for (const auto& [w, c] : t.terms()) out[detail::classify_word(w, spec)].add_term(w, c);
    return out;
}

// ---------------------------------------------------------------------------
// Overlap ambiguities (confluence spot-checks)

enum class Overlap {
    DerCoeffCoeff,   // Der (f g)           coefficient fusion vs Leibniz
    IntIntInt,       // Int f Int g Int     Rota-Baxter self-overlap
    DerIntInt,       // Der Int f Int       section vs Rota-Baxter
    DerIntDer,       // Der Int f Der       section vs Int-Der (ID)
    IntDerInt,       // Int f Der Int       Int-Der vs section (ID)
    IntDerCoeff,     // Int f Der g         Int-Der vs Leibniz (ID)
    IntEvCoeff,      // Int f Ev g          Int-Ev vs Ev-coeff (ID)
    DerEvCoeff,      // Der Ev g            Der-Ev vs Ev-coeff (ID)
    EvIntEv,         // Ev Int f Ev         Ev-Int vs Int-Ev (ID)
    EvEvCoeff,       // Ev Ev g             Ev-Ev vs Ev-coeff (ID)
};

inline std::vector<Overlap> overlaps_for(Variety v) {
    switch (v) {
        case Variety::Diff: return {Overlap::DerCoeffCoeff};
        case Variety::RB: return {Overlap::IntIntInt};
        case Variety::DRB: return {Overlap::DerCoeffCoeff, Overlap::IntIntInt, Overlap::DerIntInt};
        case Variety::ID:
            return {Overlap::DerCoeffCoeff, Overlap::IntIntInt, Overlap::DerIntInt, Overlap::DerIntDer,
                    Overlap::IntDerInt,     Overlap::IntDerCoeff, Overlap::IntEvCoeff, Overlap::DerEvCoeff,
                    Overlap::EvIntEv,       Overlap::EvEvCoeff};
    }
    return {};
}

inline std::string to_string(Overlap o) {
    switch (o) {
        case Overlap::DerCoeffCoeff: return "D(fg)";
        case Overlap::IntIntInt: return "IfIgI";
        case Overlap::DerIntInt: return "DIfI";
        case Overlap::DerIntDer: return "DIfD";
        case Overlap::IntDerInt: return "IfDI";
        case Overlap::IntDerCoeff: return "IfDg";
        case Overlap::IntEvCoeff: return "IfEg";
        case Overlap::DerEvCoeff: return "DEg";
        case Overlap::EvIntEv: return "EIfE";
        case Overlap::EvEvCoeff: return "EEg";
    }
    return "?";
}

/// Reduce the overlap word along its two distinct first steps and compare
/// the resulting normal forms.
inline bool spoly_check(const RingSpec& spec, Overlap overlap, const Poly& f, const Poly& g) {
    auto known = overlaps_for(spec.variety);
    if (std::find(known.begin(), known.end(), overlap) == known.end())
        throw std::invalid_argument("overlap " + to_string(overlap) + " is not an ambiguity of the " +
                                    to_string(spec.variety) + " ring");

    const OpExpr D = der_expr();
    const OpExpr I = int_expr(spec);
    const OpExpr E = ev_expr();
    auto leibniz1 = [&](const Poly& p) {  // one Leibniz step applied to Der p
        Poly pp = derive(p, spec.coeff);
        return mul(coeff_expr(p + spec.weight * pp), D) + coeff_expr(pp);
    };
    auto rb1 = [&](const Poly& p) {  // one Rota-Baxter step applied to Int p Int
        Poly pi = integrate(p, spec.coeff);
        return mul(coeff_expr(pi), I) - mul(I, coeff_expr(pi)) - spec.weight * mul(I, coeff_expr(p));
    };
    auto intder1 = [&](const Poly& p) {  // one Int-Der step applied to Int p Der
        Poly pu = unshift(p, spec.coeff);
        return coeff_expr(pu) - mul(I, coeff_expr(derive(pu, spec.coeff))) -
               mul(coeff_expr(evaluate(pu, spec.coeff)), E);
    };
    auto evc1 = [&](const Poly& p) { return mul(coeff_expr(evaluate(p, spec.coeff)), E); };
    auto intev1 = [&](const Poly& p) { return mul(coeff_expr(integrate(p, spec.coeff)), E); };

    OpExpr left, right;
    switch (overlap) {
        case Overlap::DerCoeffCoeff:
            left = mul(D, coeff_expr(f * g));
            right = mul(leibniz1(f), coeff_expr(g));
            break;
        case Overlap::IntIntInt:
            left = mul(mul(rb1(f), coeff_expr(g)), I);
            right = mul(mul(I, coeff_expr(f)), rb1(g));
            break;
        case Overlap::DerIntInt:
            left = mul(coeff_expr(f), I);  // section first
            right = mul(D, rb1(f));
            break;
        case Overlap::DerIntDer:
            left = mul(coeff_expr(f), D);  // section first
            right = mul(D, intder1(f));
            break;
        case Overlap::IntDerInt:
            left = mul(intder1(f), I);
            right = mul(I, coeff_expr(f));  // section first
            break;
        case Overlap::IntDerCoeff:
            left = mul(intder1(f), coeff_expr(g));
            right = mul(mul(I, coeff_expr(f)), leibniz1(g));
            break;
        case Overlap::IntEvCoeff:
            left = mul(intev1(f), coeff_expr(g));
            right = mul(mul(I, coeff_expr(f)), evc1(g));
            break;
        case Overlap::DerEvCoeff:
            left = OpExpr::zero();  // Der Ev -> 0 first
            right = mul(D, evc1(g));
            break;
        case Overlap::EvIntEv:
            left = OpExpr::zero();  // Ev Int -> 0 first
            right = mul(E, intev1(f));
            break;
        case Overlap::EvEvCoeff:
            left = mul(E, coeff_expr(g));  // Ev Ev -> Ev first
            right = mul(E, evc1(g));
            break;
    }
    return normal_form(left, spec) == normal_form(right, spec);
}

/// Quotient map A[d,V] -> A[d,I]: replace the Rota-Baxter letter by the
/// integro-differential one and renormalize. Kills the ideal generated by
/// the relators Ev f - e(f) Ev.
inline OpExpr project_drb_to_id(const OpExpr& t, const RingSpec& drb_spec) {
    if (drb_spec.variety != Variety::DRB) throw std::invalid_argument("project_drb_to_id expects a DRB spec");
    RingSpec id_spec = RingSpec::make(Variety::ID, drb_spec.weight, drb_spec.coeff);
    OpExpr swapped;
    for (const auto& [w, c] : t.terms()) {
        OpWord v;
        for (const auto& l : w.letters())
            v.push(l.kind == OpLetter::Kind::VInt ? OpLetter::integral(false) : l);
        swapped.add_term(v, c);
    }
    return normal_form(swapped, id_spec);
}

}  // namespace opalg
