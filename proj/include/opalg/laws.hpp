#pragma once

#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "opalg/bracket.hpp"
#include "opalg/opring.hpp"

namespace opalg {

/// Bucket the monomials of l by their degree in y. The parts sum back to l
/// and are returned with ascending degree, omitting zero buckets.
inline std::vector<std::pair<unsigned, LawExpr>> homog_decomp(const LawExpr& l, const std::string& y) {
    std::map<unsigned, LawExpr> buckets;
    for (const auto& [w, c] : l.terms()) {
        unsigned n = deg_in(w, y);
        auto it = buckets.find(n);
        if (it == buckets.end()) it = buckets.emplace(n, LawExpr(l.mode())).first;
        it->second.add_term(w, c);
    }
    std::vector<std::pair<unsigned, LawExpr>> out;
    for (auto& [n, part] : buckets) out.emplace_back(n, std::move(part));
    return out;
}

inline bool is_homogeneous_in(const LawExpr& l, const std::string& y) {
    return homog_decomp(l, y).size() <= 1;
}

namespace detail {
inline void permutations(unsigned n, const std::function<void(const std::vector<unsigned>&)>& visit) {
    std::vector<unsigned> perm(n);
    for (unsigned i = 0; i < n; ++i) perm[i] = i;
    do {
        visit(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));
}

inline LawExpr polarize_var_nc(const LawExpr& l, const std::string& y, const std::vector<std::string>& fresh) {
    unsigned n = 0;
    bool first = true;
    for (const auto& [w, c] : l.terms()) {
        unsigned d = deg_in(w, y);
        if (first) {
            n = d;
            first = false;
        } else if (d != n) {
            throw std::invalid_argument("polarize: law is not homogeneous in " + y);
        }
    }
    if (l.is_zero() || n == 0) return l;
    if (n > 8) throw std::invalid_argument("polarize: degree above the n <= 8 guard");
    if (fresh.size() != n) throw std::invalid_argument("polarize: need exactly deg-many fresh variables");
    for (const auto& v : fresh) {
        auto vars = variables(l);
        if (vars.count(v)) throw std::invalid_argument("polarize: fresh variable " + v + " occurs in the law");
    }
    LawExpr out(l.mode());
    for (const auto& [w, c] : l.terms()) {
        BracketWord q = star_pattern(w, y);
        permutations(n, [&](const std::vector<unsigned>& tau) {
            std::map<std::string, LawExpr> bind;
            for (unsigned i = 0; i < n; ++i) bind.emplace(star_name(i + 1), LawExpr::variable(l.mode(), fresh[tau[i]]));
            out += c * substitute(q, bind);
        });
    }
    return out;
}
}  // namespace detail

/// Polarization in one variable: replace the n occurrences of y by n fresh
/// variables, summed over all n! assignments. Commutative input goes
/// through the noncommutative polarization and back.
inline LawExpr polarize_var(const LawExpr& l, const std::string& y, const std::vector<std::string>& fresh) {
    if (l.mode() == TermMode::Noncommutative) return detail::polarize_var_nc(l, y, fresh);
    return abelianize(detail::polarize_var_nc(comm_embed(l), y, fresh));
}

inline std::vector<std::string> fresh_names(const std::string& base, unsigned n) {
    std::vector<std::string> out;
    for (unsigned i = 1; i <= n; ++i) out.push_back(base + "#" + std::to_string(i));
    return out;
}

inline LawExpr polarize_var(const LawExpr& l, const std::string& y) {
    unsigned n = l.is_zero() ? 0 : deg_in(l.terms().begin()->first, y);
    return polarize_var(l, y, fresh_names(y, n));
}

/// Full polarization: successively polarize every variable (in name order),
/// with fresh variables named y#1, y#2, ... . Requires l homogeneous in
/// each of its variables; the result is multilinear.
inline LawExpr polarize(const LawExpr& l) {
    LawExpr acc = l;
    for (const auto& y : variables(l)) {
        if (!is_homogeneous_in(acc, y))
            throw std::invalid_argument("polarize: law is not homogeneous in " + y + "; decompose first");
        acc = polarize_var(acc, y);
    }
    return acc;
}

/// Collapse fresh variables back: a plain variable renaming.
inline LawExpr centralize(const LawExpr& l, const std::map<std::string, std::string>& collapse) {
    return rename(l, collapse);
}

/// Mixed-degree laws polarize componentwise: decompose in every variable
/// (name order) into homogeneous pieces, then polarize each piece. The
/// pieces jointly define the same variety as the input law.
inline std::vector<LawExpr> polarize_components(const LawExpr& l) {
    std::vector<LawExpr> pieces{l};
    for (const auto& y : variables(l)) {
        std::vector<LawExpr> next;
        for (const auto& piece : pieces)
            for (auto& [n, part] : homog_decomp(piece, y)) next.push_back(part);
        pieces = std::move(next);
    }
    std::vector<LawExpr> out;
    out.reserve(pieces.size());
    for (const auto& piece : pieces) out.push_back(polarize(piece));
    return out;
}

/// Instance of a law inside the term algebra itself.
inline LawExpr instance_law(const LawExpr& l, const std::map<std::string, LawExpr>& theta) {
    return substitute(l, theta);
}

/// Operator interpretations keyed by bracket label.
using StructureMaps = std::map<std::string, std::function<Poly(const Poly&)>>;

/// The standard interpretation: D acts as the structure derivation and I as
/// the structure integral.
inline StructureMaps standard_maps(const CoeffStructure& s) {
    StructureMaps maps;
    maps.emplace("D", [s](const Poly& p) { return derive(p, s); });
    maps.emplace("I", [s](const Poly& p) { return integrate(p, s); });
    return maps;
}

/// Instance of a law in a coefficient algebra: variables map to polynomials
/// and brackets apply the structure maps.
inline Poly instance_poly(const BracketWord& u, const std::map<std::string, Poly>& theta, const StructureMaps& maps) {
    Poly acc(Rat(1));
    for (const auto& l : u.letters()) {
        if (l.is_var()) {
            auto it = theta.find(l.name);
            if (it == theta.end()) throw std::invalid_argument("instance: unassigned variable " + l.name);
            acc *= it->second;
        } else {
            auto it = maps.find(l.name);
            if (it == maps.end()) throw std::invalid_argument("instance: no structure map for label " + l.name);
            acc *= it->second(instance_poly(*l.sub, theta, maps));
        }
    }
    return acc;
}

inline Poly instance_poly(const LawExpr& l, const std::map<std::string, Poly>& theta, const StructureMaps& maps) {
    Poly acc;
    for (const auto& [w, c] : l.terms()) acc += c * instance_poly(w, theta, maps);
    return acc;
}

/// A multilinear law written in the variables y0..yk with y0 the argument
/// of the induced relator and y1..yk its parameters.
struct StandardLaw {
    LawExpr expr;
    std::string main_var;
    std::vector<std::string> params;

    StandardLaw(LawExpr e, std::string main, std::vector<std::string> ps)
        : expr(std::move(e)), main_var(std::move(main)), params(std::move(ps)) {
        if (expr.mode() != TermMode::Commutative) throw std::invalid_argument("standard laws are commutative");
        for (const auto& [w, c] : expr.terms()) {
            if (deg_in(w, main_var) != 1)
                throw std::invalid_argument("standard law: main variable must occur exactly once per monomial");
            for (const auto& p : params)
                if (deg_in(w, p) > 1) throw std::invalid_argument("standard law: not multilinear in " + p);
        }
        auto vars = variables(expr);
        for (const auto& v : vars)
            if (v != main_var && std::find(params.begin(), params.end(), v) == params.end())
                throw std::invalid_argument("standard law: variable " + v + " is neither argument nor parameter");
    }
};

/// Parameter instantiation for relator translation.
using Assignment = std::map<std::string, Poly>;

namespace detail {
/// Which letter of the monomial carries the argument variable. Multilinear
/// laws have exactly one such letter.
inline size_t argument_letter(const BracketWord& u, const std::string& y0) {
    const auto& ls = u.letters();
    for (size_t i = 0; i < ls.size(); ++i) {
        if (ls[i].is_var() ? ls[i].name == y0 : deg_in(*ls[i].sub, y0) > 0) return i;
    }
    throw std::invalid_argument("relator translation: argument variable missing from a monomial");
}

inline OpExpr translate_word(const BracketWord& u, const std::string& y0, const Assignment& a,
                             const StructureMaps& maps, const RingSpec& spec) {
    size_t pos = argument_letter(u, y0);
    const auto& ls = u.letters();
    std::vector<BracketLetter> rest;
    for (size_t i = 0; i < ls.size(); ++i)
        if (i != pos) rest.push_back(ls[i]);
    Poly head = instance_poly(BracketWord(u.mode(), std::move(rest)), a, maps);

    if (ls[pos].is_var()) return coeff_expr(head);  // base case: u = t * y0

    const std::string& label = ls[pos].name;
    OpLetter op = OpLetter::der();
    if (label == "D") {
        if (spec.variety == Variety::RB) throw std::invalid_argument("relator: D letter not admitted in the rb ring");
        op = OpLetter::der();
    } else if (label == "I") {
        if (spec.variety == Variety::Diff)
            throw std::invalid_argument("relator: I letter not admitted in the diff ring");
        op = OpLetter::integral(spec.uses_vint());
    } else {
        throw std::invalid_argument("relator: no operator letter for label " + label);
    }
    return mul(mul(coeff_expr(head), OpExpr(OpWord({op}))), translate_word(*ls[pos].sub, y0, a, maps, spec));
}
}  // namespace detail

/// The induced relator of a standard law under an assignment of its
/// parameters, by recursion on the bracket depth along the argument
/// variable; extended linearly.
inline OpExpr translate_relator(const StandardLaw& l, const Assignment& a, const RingSpec& spec) {
    for (const auto& p : l.params)
        if (!a.count(p)) throw std::invalid_argument("relator: parameter " + p + " unassigned");
    StructureMaps maps = standard_maps(spec.coeff);
    OpExpr out;
    for (const auto& [w, c] : l.expr.terms())
        out += c * detail::translate_word(w, l.main_var, a, maps, spec);
    return out;
}

}  // namespace opalg
