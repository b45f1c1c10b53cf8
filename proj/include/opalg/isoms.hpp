#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "opalg/opring.hpp"

namespace opalg {

/// Source and target of the generalization embedding: differential
/// Rota-Baxter operators over k[x] into integro-differential operators
/// over k[x,eps] with the generic initialization point.
struct EmbeddingContext {
    RingSpec source;
    RingSpec target;

    static EmbeddingContext standard() {
        EmbeddingContext ctx;
        ctx.source = RingSpec::make(Variety::DRB, 0, CoeffStructure::poly_x());
        ctx.target = RingSpec::make(Variety::ID, 0, CoeffStructure::generic_eps());
        return ctx;
    }
};

namespace detail {
/// Int g written canonically: pure-eps factors of g are constants of the
/// target and sit in front of the integral sign.
inline OpExpr int_coeff_word(const RingSpec& target, const Poly& g) {
    OpExpr out;
    for (const auto& [m, c] : g.terms()) {
        OpWord w;
        if (m.eps_deg > 0) w.push(OpLetter::coeff({0, m.eps_deg}));
        w.push(OpLetter::integral(target.uses_vint()));
        if (m.x_deg > 0) w.push(OpLetter::coeff({m.x_deg, 0}));
        out.add_term(w, c);
    }
    return out;
}
}  // namespace detail

/// The expansion of Int f Der^k into integro-differential normal forms:
///   sum_{i<k} (-1)^i (f^(i) - e(f^(i)) e) Der^{k-i-1} + (-1)^k Int f^(k).
inline OpExpr ev_rung_expand(const Poly& f, unsigned k, const RingSpec& target) {
    if (k == 0) throw std::invalid_argument("ev_rung_expand needs k > 0");
    if (target.variety != Variety::ID) throw std::invalid_argument("ev_rung_expand targets the id ring");
    if (target.weight != 0) throw std::invalid_argument("ev_rung_expand is a zero-weight identity");
    OpExpr out;
    Poly d = f;
    for (unsigned i = 0; i < k; ++i) {
        Rat sign = (i % 2 == 0) ? 1 : -1;
        OpExpr tail = der_expr(k - i - 1);
        out += sign * mul(coeff_expr(d) - mul(coeff_expr(evaluate(d, target.coeff)), ev_expr()), tail);
        d = derive(d, target.coeff);
    }
    Rat sign = (k % 2 == 0) ? 1 : -1;
    out += sign * detail::int_coeff_word(target, d);
    return out;
}

/// The generalization monomorphism on normal forms: f d^k stays put,
/// f V g d^k becomes f I g d^k in the generic target and is renormalized.
inline OpExpr embed_drb(const OpExpr& t, const EmbeddingContext& ctx) {
    validate_letters(t, ctx.source);
    if (!is_normal(t, ctx.source)) throw std::invalid_argument("embed_drb expects a DRB normal form");
    OpExpr swapped;
    for (const auto& [w, c] : t.terms()) {
        if (w.has_eps()) throw std::invalid_argument("embed_drb: source expression must be over k[x]");
        OpWord v;
        for (const auto& l : w.letters())
            v.push(l.kind == OpLetter::Kind::VInt ? OpLetter::integral(false) : l);
        swapped.add_term(v, c);
    }
    return normal_form(swapped, ctx.target);
}

/// Specialization: fix the integration constant at c, i.e. quotient by the
/// ideal (Ev x - c Ev). Maps onto the integro-differential operator ring
/// over k[x] with the integral initialized at c.
inline OpExpr specialize(const OpExpr& t, const Rat& c) {
    RingSpec drb = RingSpec::make(Variety::DRB, 0, CoeffStructure::poly_x(0, c));
    return project_drb_to_id(t, drb);
}

/// Substitute eps := c in every coefficient letter.
inline OpExpr opexpr_subst_eps(const OpExpr& t, const Rat& c) {
    OpExpr out;
    for (const auto& [w, sc] : t.terms()) {
        OpWord v;
        Rat factor = sc;
        for (const auto& l : w.letters()) {
            if (l.is_coeff()) {
                factor *= rat_pow(c, l.mono.eps_deg);
                v.push(OpLetter::coeff({l.mono.x_deg, 0}));
            } else {
                v.push(l);
            }
        }
        out.add_term(v, factor);
    }
    return out;
}

struct RankReport {
    size_t words = 0;
    size_t rank = 0;
    bool full_rank = false;
    std::string note;
};

namespace detail {
/// Exact Gaussian elimination over the rationals on sparse rows indexed by
/// operator words. Pivots are chosen on the largest word first, mirroring
/// the extraction of highest differentiation order in the injectivity
/// argument.
struct SparseEliminator {
    // pivot word -> reduced row
    std::map<OpWord, std::map<OpWord, Rat>> pivots;

    /// Returns false when the row reduces to zero (row is dependent).
    bool insert(std::map<OpWord, Rat> row) {
        while (!row.empty()) {
            auto lead = std::prev(row.end());  // largest word in the order
            auto it = pivots.find(lead->first);
            if (it == pivots.end()) {
                Rat inv = Rat(1) / lead->second;
                for (auto& [w, c] : row) c *= inv;
                pivots.emplace(lead->first, std::move(row));
                return true;
            }
            Rat factor = lead->second;
            for (const auto& [w, c] : it->second) {
                auto jt = row.find(w);
                if (jt == row.end()) {
                    row.emplace(w, -factor * c);
                } else {
                    jt->second -= factor * c;
                    if (jt->second == 0) row.erase(jt);
                }
            }
        }
        return false;
    }
};
}  // namespace detail

/// Certify injectivity of the embedding at desk scale: embed every DRB
/// normal-form basis word with exponents up to the bound and verify that
/// the images are linearly independent over the rationals.
inline RankReport injectivity_witness(unsigned bound, const EmbeddingContext& ctx) {
    if (bound > 4) throw std::invalid_argument("injectivity_witness: bound above the desk-scale guard (4)");
    std::vector<std::pair<std::string, OpExpr>> images;
    auto basis_word = [&](unsigned i, bool has_int, unsigned j, unsigned k) {
        OpWord w;
        if (i > 0) w.push(OpLetter::coeff({i, 0}));
        if (has_int) {
            w.push(OpLetter::integral(true));
            if (j > 0) w.push(OpLetter::coeff({j, 0}));
        }
        for (unsigned t = 0; t < k; ++t) w.push(OpLetter::der());
        return w;
    };
    for (unsigned i = 0; i <= bound; ++i) {
        for (unsigned k = 0; k <= bound; ++k) {
            OpWord w = basis_word(i, false, 0, k);
            images.emplace_back("x^" + std::to_string(i) + " d^" + std::to_string(k), embed_drb(OpExpr(w), ctx));
        }
        for (unsigned j = 0; j <= bound; ++j)
            for (unsigned k = 0; k <= bound; ++k) {
                OpWord w = basis_word(i, true, j, k);
                images.emplace_back(
                    "x^" + std::to_string(i) + " V x^" + std::to_string(j) + " d^" + std::to_string(k),
                    embed_drb(OpExpr(w), ctx));
            }
    }

    RankReport rep;
    rep.words = images.size();
    detail::SparseEliminator elim;
    for (const auto& [name, img] : images) {
        std::map<OpWord, Rat> row(img.terms().begin(), img.terms().end());
        if (elim.insert(std::move(row))) {
            ++rep.rank;
        } else if (rep.note.empty()) {
            rep.note = "image of " + name + " depends on earlier basis images";
        }
    }
    rep.full_rank = rep.rank == rep.words;
    if (rep.full_rank) {
        std::ostringstream os;
        os << "rank " << rep.rank << " = " << rep.words << " basis words, bound " << bound;
        rep.note = os.str();
    }
    return rep;
}

}  // namespace opalg
