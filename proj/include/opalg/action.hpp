#pragma once

#include <sstream>
#include <string>

#include "opalg/opring.hpp"

namespace opalg {

/// The coefficient algebra seen as a module over its operator ring: the
/// structure supplies the interpretation of every operator letter.
struct ActionModel {
    CoeffStructure structure;

    static ActionModel of(const CoeffStructure& s) { return {s}; }
    static ActionModel of(const RingSpec& spec) { return {spec.coeff}; }
};

inline Poly apply(const OpWord& w, const Poly& p, const ActionModel& m) {
    if ((w.has_eps() || p.has_eps()) && m.structure.kind != CoeffKind::PolyXEps)
        throw std::invalid_argument("eps requires the k[x,eps] model");
    Poly acc = p;
    const auto& ls = w.letters();
    for (auto it = ls.rbegin(); it != ls.rend(); ++it) {
        switch (it->kind) {
            case OpLetter::Kind::Coeff: acc = Poly::monomial(it->mono) * acc; break;
            case OpLetter::Kind::Der: acc = derive(acc, m.structure); break;
            case OpLetter::Kind::Int:
            case OpLetter::Kind::VInt: acc = integrate(acc, m.structure); break;
            case OpLetter::Kind::Ev: acc = evaluate(acc, m.structure); break;
        }
    }
    return acc;
}

/// Right-to-left letter application, linear in the expression and in the
/// polynomial.
inline Poly apply(const OpExpr& t, const Poly& p, const ActionModel& m) {
    Poly acc;
    for (const auto& [w, c] : t.terms()) acc += c * apply(w, p, m);
    return acc;
}

struct OracleReport {
    bool ok = true;
    size_t samples = 0;
    std::string counterexample;
};

/// Soundness harness: rewriting must not change the action. Reports the
/// first polynomial where apply(t, p) differs from apply(normal_form(t), p).
template <typename PolyGen>
OracleReport oracle_check(const OpExpr& t, const RingSpec& spec, size_t samples, PolyGen&& gen) {
    OracleReport rep;
    ActionModel m = ActionModel::of(spec);
    OpExpr nf = normal_form(t, spec);
    for (size_t i = 0; i < samples; ++i) {
        Poly p = gen();
        Poly lhs = apply(t, p, m);
        Poly rhs = apply(nf, p, m);
        ++rep.samples;
        if (lhs != rhs) {
            rep.ok = false;
            std::ostringstream os;
            os << "apply mismatch at sample " << i << " on p = " << p.str() << ": " << lhs.str() << " vs "
               << rhs.str();
            rep.counterexample = os.str();
            return rep;
        }
    }
    return rep;
}

}  // namespace opalg
