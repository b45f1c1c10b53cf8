#pragma once

#include <cctype>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "opalg/bracket.hpp"
#include "opalg/opring.hpp"
#include "opalg/weyl.hpp"

namespace opalg {

struct ParseError : std::invalid_argument {
    size_t pos;
    ParseError(size_t at, const std::string& what)
        : std::invalid_argument("syntax error at position " + std::to_string(at) + ": " + what), pos(at) {}
};

struct ParseOptions {
    bool allow_eps = true;   // 'eps' letter
    bool allow_ev = true;    // 'E' letter
    bool vint = false;       // 'I' parses as the Rota-Baxter letter
    bool weyl_ell = false;   // 'l' parses as the integral letter (weyl input)

    static ParseOptions for_ring(const RingSpec& spec) {
        ParseOptions o;
        o.allow_eps = spec.coeff.kind == CoeffKind::PolyXEps;
        o.allow_ev = spec.variety == Variety::ID;
        o.vint = spec.uses_vint();
        return o;
    }
};

namespace detail {

struct Lexer {
    std::string src;
    size_t pos = 0;

    void skip_ws() {
        while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
    }
    bool eof() {
        skip_ws();
        return pos >= src.size();
    }
    char peek() {
        skip_ws();
        return pos < src.size() ? src[pos] : '\0';
    }
    bool accept(char c) {
        skip_ws();
        if (pos < src.size() && src[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    void expect(char c, const std::string& what) {
        if (!accept(c)) throw ParseError(pos, "expected '" + std::string(1, c) + "' (" + what + ")");
    }
    std::optional<unsigned long> number() {
        skip_ws();
        if (pos >= src.size() || !std::isdigit(static_cast<unsigned char>(src[pos]))) return std::nullopt;
        unsigned long v = 0;
        while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) {
            v = v * 10 + static_cast<unsigned long>(src[pos] - '0');
            ++pos;
        }
        return v;
    }
    unsigned long expect_nat(const std::string& what) {
        auto n = number();
        if (!n) throw ParseError(pos, "expected a natural number (" + what + ")");
        return *n;
    }
    std::optional<std::string> ident() {
        skip_ws();
        if (pos >= src.size() || !std::isalpha(static_cast<unsigned char>(src[pos]))) return std::nullopt;
        size_t start = pos;
        while (pos < src.size() &&
               (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_' || src[pos] == '#'))
            ++pos;
        return src.substr(start, pos - start);
    }
    Rat rational() {
        unsigned long num = expect_nat("rational literal");
        if (accept('/')) {
            size_t at = pos;
            unsigned long den = expect_nat("denominator");
            if (den == 0) throw ParseError(at, "zero denominator");
            return rat(static_cast<long>(num), static_cast<long>(den));
        }
        return Rat(static_cast<long>(num));
    }
};

class OpParser {
public:
    OpParser(const std::string& src, const ParseOptions& opts) : lex_{src}, opts_(opts) {}

    OpExpr parse() {
        OpExpr e = expr();
        if (!lex_.eof()) throw ParseError(lex_.pos, "trailing input");
        return e;
    }

private:
    OpExpr expr() {
        bool neg = false;
        if (lex_.accept('-'))
            neg = true;
        else
            lex_.accept('+');
        OpExpr acc = term();
        if (neg) acc = Rat(-1) * acc;
        while (true) {
            if (lex_.accept('+'))
                acc += term();
            else if (lex_.accept('-'))
                acc -= term();
            else
                break;
        }
        return acc;
    }
    OpExpr term() {
        OpExpr acc = factor();
        while (lex_.accept('*')) acc = mul(acc, factor());
        return acc;
    }
    OpExpr factor() {
        OpExpr base = primary();
        while (lex_.accept('^')) {
            unsigned long e = lex_.expect_nat("exponent");
            base = op_pow(base, static_cast<unsigned>(e));
        }
        return base;
    }
    OpExpr primary() {
        size_t at = lex_.pos;
        if (lex_.accept('(')) {
            OpExpr e = expr();
            lex_.expect(')', "closing parenthesis");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(lex_.peek()))) return OpExpr(lex_.rational());
        auto id = lex_.ident();
        if (!id) throw ParseError(lex_.pos, "expected a factor");
        if (*id == "x") return OpExpr(OpWord({OpLetter::coeff({1, 0})}));
        if (*id == "eps") {
            if (!opts_.allow_eps) throw ParseError(at, "'eps' is only available in generic models");
            return OpExpr(OpWord({OpLetter::coeff({0, 1})}));
        }
        if (*id == "D") return der_expr();
        if (*id == "I") return OpExpr(OpWord({OpLetter::integral(opts_.vint)}));
        if (*id == "l" && opts_.weyl_ell) return OpExpr(OpWord({OpLetter::integral(true)}));
        if (*id == "E") {
            if (!opts_.allow_ev) throw ParseError(at, "'E' is only available in the id ring");
            return ev_expr();
        }
        throw ParseError(at, "unknown symbol '" + *id + "'");
    }

    Lexer lex_;
    ParseOptions opts_;
};

}  // namespace detail

inline OpExpr parse_opexpr(const std::string& src, const ParseOptions& opts = {}) {
    return detail::OpParser(src, opts).parse();
}

/// Parse a pure coefficient polynomial (no operator letters).
inline Poly parse_poly(const std::string& src, bool allow_eps = true) {
    ParseOptions opts;
    opts.allow_eps = allow_eps;
    opts.allow_ev = false;
    OpExpr e = parse_opexpr(src, opts);
    Poly p;
    for (const auto& [w, c] : e.terms()) {
        if (w.is_one()) {
            p += Poly(c);
        } else if (w.size() == 1 && w.letters()[0].is_coeff()) {
            p.add_term(w.letters()[0].mono, c);
        } else {
            throw ParseError(0, "expected a polynomial, found operator letters");
        }
    }
    return p;
}

// ---------------------------------------------------------------------------
// Law parsing

namespace detail {

class LawParser {
public:
    LawParser(const std::string& src, TermMode mode) : lex_{src}, mode_(mode) {}

    LawExpr parse() {
        LawExpr e = expr();
        if (!lex_.eof()) throw ParseError(lex_.pos, "trailing input");
        return e;
    }

private:
    LawExpr expr() {
        bool neg = false;
        if (lex_.accept('-'))
            neg = true;
        else
            lex_.accept('+');
        LawExpr acc = term();
        if (neg) acc = Rat(-1) * acc;
        while (true) {
            if (lex_.accept('+'))
                acc += term();
            else if (lex_.accept('-'))
                acc -= term();
            else
                break;
        }
        return acc;
    }
    LawExpr term() {
        LawExpr acc = factor();
        while (lex_.accept('*')) acc = acc * factor();
        return acc;
    }
    LawExpr factor() {
        LawExpr base = primary();
        while (lex_.accept('^')) {
            unsigned long e = lex_.expect_nat("exponent");
            LawExpr acc = LawExpr::one(mode_);
            for (unsigned long i = 0; i < e; ++i) acc = acc * base;
            base = acc;
        }
        return base;
    }
    LawExpr primary() {
        size_t at = lex_.pos;
        if (lex_.accept('(')) {
            LawExpr e = expr();
            lex_.expect(')', "closing parenthesis");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(lex_.peek()))) return Rat(lex_.rational()) * LawExpr::one(mode_);
        auto id = lex_.ident();
        if (!id) throw ParseError(lex_.pos, "expected a factor");
        if (*id == "D" || *id == "I") {
            if (lex_.peek() == '{') return bracket(*id);
            throw ParseError(at, "'" + *id + "' must be followed by {...} in laws");
        }
        if (*id == "w") {
            lex_.expect(':', "label syntax w:<name>{...}");
            auto name = lex_.ident();
            if (!name) throw ParseError(lex_.pos, "expected a label name");
            return bracket(*name);
        }
        return LawExpr::variable(mode_, *id);
    }
    LawExpr bracket(const std::string& label) {
        lex_.expect('{', "bracket body");
        LawExpr body = expr();
        lex_.expect('}', "closing brace");
        return LawExpr::bracket(label, body);
    }

    Lexer lex_;
    TermMode mode_;
};

}  // namespace detail

inline LawExpr parse_law(const std::string& src, TermMode mode = TermMode::Commutative) {
    return detail::LawParser(src, mode).parse();
}

// ---------------------------------------------------------------------------
// Printing

namespace detail {
inline std::string letter_str(const OpLetter& l) {
    switch (l.kind) {
        case OpLetter::Kind::Coeff: return to_string(l.mono);
        case OpLetter::Kind::Der: return "D";
        case OpLetter::Kind::Int:
        case OpLetter::Kind::VInt: return "I";
        case OpLetter::Kind::Ev: return "E";
    }
    return "?";
}
}  // namespace detail

inline std::string word_str(const OpWord& w, bool weyl_ell = false) {
    if (w.is_one()) return "1";
    std::ostringstream os;
    const auto& ls = w.letters();
    bool first = true;
    for (size_t i = 0; i < ls.size();) {
        size_t run = 1;
        while (i + run < ls.size() && !ls[i].is_coeff() && ls[i + run] == ls[i]) ++run;
        if (!first) os << "*";
        std::string s = detail::letter_str(ls[i]);
        if (weyl_ell && ls[i].is_int()) s = "l";
        os << s;
        if (run > 1) os << "^" << run;
        first = false;
        i += run;
    }
    return os.str();
}

inline std::string str(const OpExpr& t) {
    if (t.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = t.terms().rbegin(); it != t.terms().rend(); ++it) {
        const Rat& c = it->second;
        if (first) {
            if (c < 0) os << "-";
        } else {
            os << (c < 0 ? " - " : " + ");
        }
        Rat a = abs(c);
        std::string w = word_str(it->first);
        if (a != 1 || w == "1") {
            os << to_string(a);
            if (w != "1") os << "*";
        }
        if (w != "1") os << w;
        first = false;
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Weyl input: words must match the shape of the requested basis.

inline WeylElt parse_weyl(const std::string& src, WeylBasis basis) {
    ParseOptions opts;
    opts.allow_eps = false;
    opts.allow_ev = basis == WeylBasis::B1;
    opts.weyl_ell = true;
    OpExpr e = parse_opexpr(src, opts);
    WeylElt out(basis);
    for (const auto& [w, c] : e.terms()) {
        const auto& ls = w.letters();
        size_t pos = 0;
        unsigned i = 0, j = 0, k = 0, ints = 0;
        bool ev = false;
        if (pos < ls.size() && ls[pos].is_coeff()) i = ls[pos++].mono.x_deg;
        while (pos < ls.size() && ls[pos].is_int()) {
            ++ints;
            ++pos;
        }
        if (basis == WeylBasis::B3 && ints <= 1 && pos < ls.size() && ls[pos].is_coeff() && ints == 1)
            j = ls[pos++].mono.x_deg;
        if (basis == WeylBasis::B1 && pos < ls.size() && ls[pos].kind == OpLetter::Kind::Ev) {
            ev = true;
            ++pos;
        }
        while (pos < ls.size() && ls[pos].kind == OpLetter::Kind::Der) {
            ++k;
            ++pos;
        }
        if (pos != ls.size()) throw std::invalid_argument("word does not match basis " + to_string(basis));
        switch (basis) {
            case WeylBasis::B2:
                out.add_term({WeylIdx::Tag::Full, i, ints, k}, c);
                break;
            case WeylBasis::B1:
                if (ev)
                    out.add_term({WeylIdx::Tag::E, i, ints, k}, c);
                else if (ints > 0 && k == 0)
                    out.add_term({WeylIdx::Tag::R, i, ints, 0}, c);
                else if (ints == 0)
                    out.add_term({WeylIdx::Tag::D, i, 0, k}, c);
                else
                    throw std::invalid_argument("word does not match basis b1 (use E for the evaluation part)");
                break;
            case WeylBasis::B3:
                if (ints == 0)
                    out.add_term({WeylIdx::Tag::D, i, 0, k}, c);
                else if (ints == 1)
                    out.add_term({k == 0 ? WeylIdx::Tag::R : WeylIdx::Tag::E, i, j, k}, c);
                else
                    throw std::invalid_argument("word does not match basis b3 (one mid-basis l only)");
                break;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// JSON output

inline nlohmann::json mono_json(const XMono& m) {
    std::string s;
    if (m.x_deg > 0) s += "x^" + std::to_string(m.x_deg);
    if (m.eps_deg > 0) {
        if (!s.empty()) s += "*";
        s += "eps^" + std::to_string(m.eps_deg);
    }
    if (s.empty()) s = "1";
    return s;
}

inline nlohmann::json word_json(const OpWord& w) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& l : w.letters()) {
        if (l.is_coeff())
            arr.push_back(mono_json(l.mono));
        else
            arr.push_back(detail::letter_str(l));
    }
    return arr;
}

inline nlohmann::json to_json(const OpExpr& t, const RingSpec& spec) {
    nlohmann::json terms = nlohmann::json::array();
    for (auto it = t.terms().rbegin(); it != t.terms().rend(); ++it)
        terms.push_back({{"scalar", to_string(it->second)}, {"word", word_json(it->first)}});
    return {{"ring", to_string(spec.variety)}, {"weight", to_string(spec.weight)}, {"terms", terms}};
}

inline nlohmann::json to_json(const WeylElt& e) {
    nlohmann::json terms = nlohmann::json::array();
    for (auto it = e.terms().rbegin(); it != e.terms().rend(); ++it) {
        nlohmann::json word = nlohmann::json::array();
        const WeylIdx& m = it->first;
        if (m.i > 0) word.push_back("x^" + std::to_string(m.i));
        if (e.basis() == WeylBasis::B3 && m.tag != WeylIdx::Tag::D) {
            word.push_back("l");
            if (m.j > 0) word.push_back("x^" + std::to_string(m.j));
        } else if (m.j > 0) {
            word.push_back("l^" + std::to_string(m.j));
        }
        if (e.basis() == WeylBasis::B1 && m.tag == WeylIdx::Tag::E) word.push_back("E");
        if (m.k > 0) word.push_back("D^" + std::to_string(m.k));
        terms.push_back({{"scalar", to_string(it->second)}, {"word", word}});
    }
    return {{"basis", to_string(e.basis())}, {"terms", terms}};
}

inline nlohmann::json to_json(const LawExpr& l) {
    nlohmann::json terms = nlohmann::json::array();
    for (auto it = l.terms().rbegin(); it != l.terms().rend(); ++it)
        terms.push_back({{"scalar", to_string(it->second)}, {"word", law_word_str(it->first)}});
    return {{"mode", l.mode() == TermMode::Commutative ? "commutative" : "noncommutative"}, {"terms", terms}};
}

inline nlohmann::json to_json(const Poly& p) {
    nlohmann::json terms = nlohmann::json::array();
    for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it)
        terms.push_back({{"scalar", to_string(it->second)}, {"mono", mono_json(it->first)}});
    return {{"terms", terms}};
}

}  // namespace opalg
