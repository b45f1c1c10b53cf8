#pragma once

#include <random>
#include <sstream>
#include <string>

#include "opalg/action.hpp"
#include "opalg/isoms.hpp"
#include "opalg/opring.hpp"
#include "opalg/parse.hpp"
#include "opalg/weyl.hpp"

namespace opalg {

/// Seeded, reproducible sample generators used by the check subcommands and
/// the test suites.
struct Sampler {
    std::mt19937_64 rng;

    explicit Sampler(uint64_t seed) : rng(seed) {}

    long int_in(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); }

    Rat scalar() {
        long num = int_in(-9, 9);
        long den = int_in(1, 4);
        return rat(num, den);
    }

    /// Random polynomial of x-degree <= maxdeg, coefficients in {-9..9}/{1..4}.
    Poly poly(unsigned maxdeg = 6, bool with_eps = false, unsigned max_eps = 2) {
        Poly p;
        unsigned terms = static_cast<unsigned>(int_in(1, 4));
        for (unsigned t = 0; t < terms; ++t) {
            XMono m{static_cast<unsigned>(int_in(0, maxdeg)), with_eps ? static_cast<unsigned>(int_in(0, max_eps)) : 0};
            p.add_term(m, scalar());
        }
        return p;
    }

    Poly nonzero_poly(unsigned maxdeg = 6, bool with_eps = false) {
        for (int tries = 0; tries < 32; ++tries) {
            Poly p = poly(maxdeg, with_eps);
            if (!p.is_zero()) return p;
        }
        return Poly::x();
    }

    XMono mono(unsigned maxdeg, bool with_eps) {
        return {static_cast<unsigned>(int_in(0, maxdeg)), with_eps ? static_cast<unsigned>(int_in(0, 2)) : 0};
    }

    OpWord word(const RingSpec& spec, unsigned maxlen, unsigned maxcoeffdeg) {
        bool with_eps = spec.coeff.kind == CoeffKind::PolyXEps;
        unsigned len = static_cast<unsigned>(int_in(1, maxlen));
        OpWord w;
        bool last_coeff = false;
        for (unsigned i = 0; i < len; ++i) {
            // alternate between coefficients and operator letters most of
            // the time; runs of equal letters produce the deep redexes
            if (!last_coeff && int_in(0, 2) == 0) {
                w.push(OpLetter::coeff(mono(maxcoeffdeg, with_eps)));
                last_coeff = true;
                continue;
            }
            last_coeff = false;
            long die = int_in(0, spec.variety == Variety::ID ? 3 : 1);
            switch (die) {
                case 0:
                    if (spec.variety == Variety::RB)
                        w.push(OpLetter::integral(true));
                    else
                        w.push(OpLetter::der());
                    break;
                case 1:
                    if (spec.variety == Variety::Diff)
                        w.push(OpLetter::der());
                    else
                        w.push(OpLetter::integral(spec.uses_vint()));
                    break;
                case 2:
                    w.push(OpLetter::integral(spec.uses_vint()));
                    break;
                default: w.push(OpLetter::ev()); break;
            }
        }
        return w;
    }

    OpExpr opexpr(const RingSpec& spec, unsigned maxterms, unsigned maxlen, unsigned maxcoeffdeg) {
        OpExpr e;
        unsigned terms = static_cast<unsigned>(int_in(1, maxterms));
        for (unsigned t = 0; t < terms; ++t) e.add_term(word(spec, maxlen, maxcoeffdeg), scalar());
        return e;
    }

    /// Random DRB normal form over k[x] with exponents <= bound.
    OpExpr drb_normal(unsigned bound, unsigned maxterms = 3) {
        OpExpr e;
        unsigned terms = static_cast<unsigned>(int_in(1, maxterms));
        for (unsigned t = 0; t < terms; ++t) {
            OpWord w;
            unsigned i = static_cast<unsigned>(int_in(0, bound));
            if (i > 0) w.push(OpLetter::coeff({i, 0}));
            if (int_in(0, 2) > 0) {
                w.push(OpLetter::integral(true));
                unsigned j = static_cast<unsigned>(int_in(0, bound));
                if (j > 0) w.push(OpLetter::coeff({j, 0}));
            }
            unsigned k = static_cast<unsigned>(int_in(0, bound));
            for (unsigned d = 0; d < k; ++d) w.push(OpLetter::der());
            e.add_term(w, scalar());
        }
        return e;
    }

    WeylElt weyl_b2(unsigned maxidx, unsigned maxterms = 3) {
        WeylElt e(WeylBasis::B2);
        unsigned terms = static_cast<unsigned>(int_in(1, maxterms));
        for (unsigned t = 0; t < terms; ++t)
            e.add_term({WeylIdx::Tag::Full, static_cast<unsigned>(int_in(0, maxidx)),
                        static_cast<unsigned>(int_in(0, maxidx)), static_cast<unsigned>(int_in(0, maxidx))},
                       scalar());
        return e;
    }
};

struct CheckReport {
    bool ok = true;
    size_t checks = 0;
    std::string detail;

    void fail(const std::string& what) {
        if (ok) detail = what;
        ok = false;
    }
};

/// Every overlap ambiguity of the variety, on seeded random coefficient
/// pairs.
inline CheckReport check_confluence(const RingSpec& spec, size_t samples, uint64_t seed) {
    CheckReport rep;
    Sampler s(seed);
    bool with_eps = spec.coeff.kind == CoeffKind::PolyXEps;
    for (Overlap o : overlaps_for(spec.variety)) {
        for (size_t n = 0; n < samples; ++n) {
            Poly f = s.nonzero_poly(4, with_eps);
            Poly g = s.nonzero_poly(4, with_eps);
            ++rep.checks;
            if (!spoly_check(spec, o, f, g)) {
                rep.fail("overlap " + to_string(o) + " failed on f = " + f.str() + ", g = " + g.str());
                return rep;
            }
        }
    }
    return rep;
}

/// Rewriting must not change the action on the polynomial module.
inline CheckReport check_oracle(const RingSpec& spec, size_t samples, uint64_t seed, unsigned maxlen = 6,
                                unsigned maxcoeffdeg = 4, unsigned maxpolydeg = 6) {
    CheckReport rep;
    Sampler s(seed);
    ActionModel model = ActionModel::of(spec);
    bool with_eps = spec.coeff.kind == CoeffKind::PolyXEps;
    for (size_t n = 0; n < samples; ++n) {
        OpExpr t(s.word(spec, maxlen, maxcoeffdeg));
        OpExpr nf = normal_form(t, spec);
        Poly p = s.poly(maxpolydeg, with_eps);
        ++rep.checks;
        if (apply(t, p, model) != apply(nf, p, model)) {
            rep.fail("action mismatch for word " + word_str(t.terms().begin()->first) + " on p = " + p.str());
            return rep;
        }
    }
    return rep;
}

inline CheckReport check_injectivity(unsigned bound) {
    CheckReport rep;
    EmbeddingContext ctx = EmbeddingContext::standard();
    for (unsigned b = 1; b <= bound; ++b) {
        RankReport r = injectivity_witness(b, ctx);
        ++rep.checks;
        if (!r.full_rank) {
            rep.fail("rank deficiency at bound " + std::to_string(b) + ": " + r.note);
            return rep;
        }
    }
    return rep;
}

/// Basis round trips on all tagged words with indices <= bound, plus the
/// cross-engine bridge agreement on random pairs.
inline CheckReport check_bases(unsigned bound, size_t samples, uint64_t seed) {
    CheckReport rep;
    Sampler s(seed);
    auto roundtrip = [&](const WeylElt& e, WeylBasis via) {
        ++rep.checks;
        if (convert(convert(e, via), e.basis()) != e) {
            rep.fail("round trip through " + to_string(via) + " failed on " + str(e));
            return false;
        }
        return true;
    };
    for (unsigned i = 0; i <= bound; ++i)
        for (unsigned j = 0; j <= bound; ++j)
            for (unsigned k = 0; k <= bound; ++k) {
                WeylElt b2 = WeylElt::b2_word(i, j, k);
                if (!roundtrip(b2, WeylBasis::B1) || !roundtrip(b2, WeylBasis::B3)) return rep;
                WeylElt b1(WeylBasis::B1);
                b1.add_term({WeylIdx::Tag::E, i, j, k}, 1);
                if (!roundtrip(b1, WeylBasis::B2)) return rep;
                WeylElt b3(WeylBasis::B3);
                b3.add_term({k > 0 ? WeylIdx::Tag::E : WeylIdx::Tag::R, i, j, k}, 1);
                if (!roundtrip(b3, WeylBasis::B2)) return rep;
            }
    RingSpec drb = RingSpec::make(Variety::DRB, 0, CoeffStructure::poly_x());
    for (size_t n = 0; n < samples; ++n) {
        WeylElt a = s.weyl_b2(3), b = s.weyl_b2(3);
        WeylElt direct = weyl_mul(a, b);
        OpExpr via_ops = normal_form(
            mul(to_opexpr(convert(a, WeylBasis::B3)), to_opexpr(convert(b, WeylBasis::B3))), drb);
        ++rep.checks;
        if (convert(from_opexpr(via_ops), WeylBasis::B2) != direct) {
            rep.fail("bridge disagreement on " + str(a) + " times " + str(b));
            return rep;
        }
    }
    return rep;
}

}  // namespace opalg
