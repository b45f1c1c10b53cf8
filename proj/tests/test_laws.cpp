#include <catch2/catch.hpp>

#include "helpers.hpp"
#include "opalg/action.hpp"
#include "opalg/laws.hpp"
#include "opalg/parse.hpp"

using namespace opalg;
using testutil::equal_up_to_bijection;

namespace {
constexpr TermMode NC = TermMode::Noncommutative;
constexpr TermMode CM = TermMode::Commutative;

LawExpr v(TermMode m, const std::string& n) { return LawExpr::variable(m, n); }
LawExpr br(const std::string& label, const LawExpr& body) { return LawExpr::bracket(label, body); }

/// Leibniz axiom of weight w in main variable y0, parameter y1.
LawExpr leibniz_law(const Rat& w) {
    LawExpr f = v(CM, "y1"), g = v(CM, "y0");
    return br("D", f * g) - br("D", f) * g - f * br("D", g) - w * (br("D", f) * br("D", g));
}

/// Rota-Baxter axiom of weight w.
LawExpr rb_law(const Rat& w) {
    LawExpr f = v(CM, "y1"), g = v(CM, "y0");
    return br("I", f) * br("I", g) - br("I", f * br("I", g)) - br("I", g * br("I", f)) - w * br("I", f * g);
}

/// The integro-differential axiom with the evaluation expanded:
/// Ifg' + If'g + w If'g' - f Ig' - (If') g + (If')(Ig').
LawExpr id_law(const Rat& w) {
    LawExpr f = v(CM, "y1"), g = v(CM, "y0");
    LawExpr fp = br("D", f), gp = br("D", g);
    return br("I", f * gp) + br("I", fp * g) + w * br("I", fp * gp) - f * br("I", gp) - br("I", fp) * g +
           br("I", fp) * br("I", gp);
}
}  // namespace

TEST_CASE("homogeneous decomposition buckets by degree") {
    LawExpr y = v(CM, "y");
    LawExpr l = br("I", y * y) - Rat(2) * (br("I", y) * y) + y + Rat(3) * LawExpr::one(CM);
    auto parts = homog_decomp(l, "y");
    REQUIRE(parts.size() == 3);
    CHECK(parts[0].first == 0);
    CHECK(parts[0].second == Rat(3) * LawExpr::one(CM));
    CHECK(parts[1].first == 1);
    CHECK(parts[1].second == y);
    CHECK(parts[2].first == 2);
    CHECK(parts[2].second == br("I", y * y) - Rat(2) * (br("I", y) * y));

    // multilinear law: single bucket of degree 1
    auto lin = homog_decomp(leibniz_law(0), "y0");
    REQUIRE(lin.size() == 1);
    CHECK(lin[0].first == 1);
    CHECK(lin[0].second == leibniz_law(0));

    // absent variable: everything in degree 0
    auto zero = homog_decomp(l, "z");
    REQUIRE(zero.size() == 1);
    CHECK(zero[0].first == 0);
    CHECK(zero[0].second == l);

    Sampler s(31);
    for (int i = 0; i < 100; ++i) {
        LawExpr r = testutil::random_law(s, i % 2 ? NC : CM);
        LawExpr sum(r.mode());
        for (auto& [n, part] : homog_decomp(r, "y")) sum += part;
        CHECK(sum == r);
    }
}

TEST_CASE("polarization of <y<y>>") {
    LawExpr y = v(NC, "y");
    LawExpr l = br("I", y * br("I", y));
    LawExpr pol = polarize_var(l, "y", {"y1", "y2"});
    LawExpr y1 = v(NC, "y1"), y2 = v(NC, "y2");
    CHECK(pol == br("I", y1 * br("I", y2)) + br("I", y2 * br("I", y1)));
    CHECK(centralize(pol, {{"y1", "y"}, {"y2", "y"}}) == Rat(2) * l);
}

TEST_CASE("polarization of x^2 y^2, noncommutative") {
    LawExpr x = v(NC, "x"), y = v(NC, "y");
    LawExpr l = x * x * y * y;
    LawExpr pol = polarize(l);
    LawExpr y1 = v(NC, "y1"), y2 = v(NC, "y2"), y3 = v(NC, "y3"), y4 = v(NC, "y4");
    LawExpr expected = y3 * y4 * y1 * y2 + y4 * y3 * y1 * y2 + y3 * y4 * y2 * y1 + y4 * y3 * y2 * y1;
    CHECK(equal_up_to_bijection(pol, expected, {"x#1", "x#2", "y#1", "y#2"}, {"y1", "y2", "y3", "y4"}));
}

TEST_CASE("polarization of <y^2> - 2<y>y, noncommutative") {
    LawExpr y = v(NC, "y");
    LawExpr l = br("I", y * y) - Rat(2) * (br("I", y) * y);
    LawExpr pol = polarize_var(l, "y", {"y1", "y2"});
    LawExpr y1 = v(NC, "y1"), y2 = v(NC, "y2");
    LawExpr expected =
        br("I", y1 * y2) + br("I", y2 * y1) - Rat(2) * (br("I", y1) * y2) - Rat(2) * (br("I", y2) * y1);
    CHECK(pol == expected);
}

TEST_CASE("commutative polarizations") {
    // x^2 y^2 -> 4 y1 y2 y3 y4
    LawExpr x = v(CM, "x"), y = v(CM, "y");
    LawExpr l = x * x * y * y;
    LawExpr pol = polarize(l);
    LawExpr expected = Rat(4) * (v(CM, "y1") * v(CM, "y2") * v(CM, "y3") * v(CM, "y4"));
    CHECK(equal_up_to_bijection(pol, expected, {"x#1", "x#2", "y#1", "y#2"}, {"y1", "y2", "y3", "y4"}));

    // <y^2> - 2<y>y -> 2<y1 y2> - 2<y1>y2 - 2 y1<y2>
    LawExpr l2 = br("I", y * y) - Rat(2) * (br("I", y) * y);
    LawExpr pol2 = polarize_var(l2, "y", {"y1", "y2"});
    LawExpr y1 = v(CM, "y1"), y2 = v(CM, "y2");
    CHECK(pol2 == Rat(2) * br("I", y1 * y2) - Rat(2) * (br("I", y1) * y2) - Rat(2) * (y1 * br("I", y2)));
}

TEST_CASE("already multilinear laws polarize to a renaming") {
    LawExpr l = leibniz_law(rat(1, 2));
    LawExpr pol = polarize(l);
    CHECK(equal_up_to_bijection(pol, l, {"y0#1", "y1#1"}, {"y0", "y1"}));
}

TEST_CASE("polarization guards") {
    LawExpr y = v(CM, "y");
    LawExpr inhomog = y + y * y;
    CHECK_THROWS_AS(polarize(inhomog), std::invalid_argument);
    CHECK_THROWS_AS(polarize_var(inhomog, "y", {"y1", "y2"}), std::invalid_argument);
    CHECK_THROWS_AS(polarize_var(y * y, "y", {"y1"}), std::invalid_argument);   // wrong arity
    CHECK_THROWS_AS(polarize_var(y * y, "y", {"y", "y1"}), std::invalid_argument);  // fresh not fresh

    LawExpr y9 = LawExpr::one(CM);
    for (int i = 0; i < 9; ++i) y9 = y9 * y;
    CHECK_THROWS_AS(polarize_var(y9, "y", fresh_names("y", 9)), std::invalid_argument);  // n <= 8 cap
}

TEST_CASE("mixed-degree laws polarize componentwise") {
    LawExpr y = v(CM, "y");
    LawExpr mixed = y + br("I", y * y);
    auto parts = polarize_components(mixed);
    REQUIRE(parts.size() == 2);
    // the pieces are the polarizations of the homogeneous components
    LawExpr lin = polarize(y);
    LawExpr quad = polarize(br("I", y * y));
    CHECK(((parts[0] == lin && parts[1] == quad) || (parts[0] == quad && parts[1] == lin)));

    // a homogeneous law stays in one piece
    auto one = polarize_components(br("I", y * y));
    REQUIRE(one.size() == 1);
    CHECK(one[0] == quad);
}

TEST_CASE("centralization identity n! l") {
    Sampler s(32);
    for (unsigned n = 1; n <= 4; ++n) {
        for (int rep = 0; rep < 8; ++rep) {
            TermMode mode = rep % 2 ? NC : CM;
            BracketWord u = testutil::random_mono_of_degree(s, mode, "y", n);
            LawExpr l(u);
            auto fresh = fresh_names("y", n);
            LawExpr pol = polarize_var(l, "y", fresh);
            std::map<std::string, std::string> collapse;
            for (const auto& f : fresh) collapse[f] = "y";
            CHECK(centralize(pol, collapse) == factorial(n) * l);
            // multilinearity in each fresh variable
            for (const auto& [w, c] : pol.terms())
                for (const auto& f : fresh) CHECK(deg_in(w, f) == 1);
        }
    }
    // the worked commutative example: P(x^2 y^2) collapsed = 2! 2! x^2 y^2
    LawExpr x = v(CM, "x"), y = v(CM, "y");
    LawExpr l = x * x * y * y;
    LawExpr pol = polarize(l);
    LawExpr back = centralize(pol, {{"x#1", "x"}, {"x#2", "x"}, {"y#1", "y"}, {"y#2", "y"}});
    CHECK(back == factorial(2) * factorial(2) * l);
    // identity collapse
    CHECK(centralize(l, {}) == l);
}

TEST_CASE("polarization lands in the substitution closure: bidegree extraction") {
    // expand q[z1+z2, z1+z2] for q the star pattern of <y<y>> and extract
    // the bidegree (1,1) part
    LawExpr y = v(NC, "y");
    LawExpr l = br("I", y * br("I", y));
    BracketWord q = star_pattern(l.terms().begin()->first, "y");
    LawExpr z12 = v(NC, "z1") + v(NC, "z2");
    LawExpr expanded = substitute(q, {{"*1", z12}, {"*2", z12}});
    LawExpr part11(NC);
    for (auto& [n1, p1] : homog_decomp(expanded, "z1"))
        if (n1 == 1)
            for (auto& [n2, p2] : homog_decomp(p1, "z2"))
                if (n2 == 1) part11 += p2;
    LawExpr pol = polarize_var(l, "y", {"z1", "z2"});
    CHECK(part11 == pol);
}

TEST_CASE("instances in the coefficient algebra") {
    CoeffStructure st = CoeffStructure::poly_x(0, 0);
    StructureMaps maps = standard_maps(st);

    // Leibniz at f = x^2, g = x
    CHECK(instance_poly(leibniz_law(0), {{"y1", Poly::x(2)}, {"y0", Poly::x()}}, maps).is_zero());

    // Rota-Baxter at random f, g
    Sampler s(33);
    for (int i = 0; i < 100; ++i)
        CHECK(instance_poly(rb_law(0), {{"y1", s.poly(5)}, {"y0", s.poly(5)}}, maps).is_zero());

    // integration by parts at f = 1, identically in g
    LawExpr f = v(CM, "y1"), g = v(CM, "y0");
    LawExpr ibp = f * br("I", g) - br("I", br("D", f) * br("I", g)) - br("I", f * g);
    for (int i = 0; i < 20; ++i)
        CHECK(instance_poly(ibp, {{"y1", Poly(1)}, {"y0", s.poly(6)}}, maps).is_zero());

    CHECK_THROWS_AS(instance_poly(br("w_unknown", g), {{"y0", Poly::x()}}, maps), std::invalid_argument);

    // law-target instance: substituting terms for variables
    LawExpr leib = leibniz_law(0);
    LawExpr inst = instance_law(leib, {{"y0", v(CM, "u") * v(CM, "v")}});
    CHECK(variables(inst).count("u") == 1);
    CHECK(instance_law(leib, {}) == leib);
}

TEST_CASE("polarized and original law define the same variety, and a broken structure fails both") {
    LawExpr y = v(CM, "y");
    LawExpr square_law = br("I", y) * br("I", y) - Rat(2) * br("I", y * br("I", y));
    LawExpr pol = polarize_var(square_law, "y", {"y1", "y2"});

    CoeffStructure st = CoeffStructure::poly_x(0, 0);
    StructureMaps good = standard_maps(st);
    Sampler s(34);
    for (int i = 0; i < 100; ++i) {
        CHECK(instance_poly(square_law, {{"y", s.poly(5)}}, good).is_zero());
        CHECK(instance_poly(pol, {{"y1", s.poly(5)}, {"y2", s.poly(5)}}, good).is_zero());
    }

    StructureMaps broken = good;
    broken["I"] = [](const Poly& p) { return Poly::x() * p; };
    bool law_fails = false, pol_fails = false;
    for (int i = 0; i < 50 && !(law_fails && pol_fails); ++i) {
        if (!instance_poly(square_law, {{"y", s.poly(4)}}, broken).is_zero()) law_fails = true;
        if (!instance_poly(pol, {{"y1", s.poly(4)}, {"y2", s.poly(4)}}, broken).is_zero()) pol_fails = true;
    }
    CHECK(law_fails);
    CHECK(pol_fails);
}

TEST_CASE("relator translation reproduces the rule schemas") {
    Sampler s(35);
    for (const Rat& w : {rat(0), rat(1), rat(-1)}) {
        // differential: D f - f D - w f' D - f'
        RingSpec diff = RingSpec::make(Variety::Diff, w);
        StandardLaw leib(leibniz_law(w), "y0", {"y1"});
        for (int i = 0; i < 5; ++i) {
            Poly f = s.poly(4);
            Poly fp = derive(f, diff.coeff);
            OpExpr expected = mul(der_expr(), coeff_expr(f)) - mul(coeff_expr(f), der_expr()) -
                              w * mul(coeff_expr(fp), der_expr()) - coeff_expr(fp);
            CHECK(translate_relator(leib, {{"y1", f}}, diff) == expected);
        }

        // Rota-Baxter: f` I - I f I - I f` - w I f
        RingSpec rb = RingSpec::make(Variety::RB, w);
        StandardLaw rbl(rb_law(w), "y0", {"y1"});
        OpExpr I = int_expr(rb);
        for (int i = 0; i < 5; ++i) {
            Poly f = s.poly(4);
            Poly fi = integrate(f, rb.coeff);
            OpExpr expected = mul(coeff_expr(fi), I) - mul(mul(I, coeff_expr(f)), I) - mul(I, coeff_expr(fi)) -
                              w * mul(I, coeff_expr(f));
            CHECK(translate_relator(rbl, {{"y1", f}}, rb) == expected);
        }

        // integro-differential: I (f + w f') D - f + I f' + e(f) (1 - I D)
        RingSpec id = RingSpec::make(Variety::ID, w);
        StandardLaw idl(id_law(w), "y0", {"y1"});
        OpExpr Ii = int_expr(id);
        for (int i = 0; i < 5; ++i) {
            Poly f = s.poly(4);
            Poly fp = derive(f, id.coeff);
            Poly ev = evaluate(f, id.coeff);
            OpExpr expected = mul(mul(Ii, coeff_expr(f + w * fp)), der_expr()) - coeff_expr(f) +
                              mul(Ii, coeff_expr(fp)) + coeff_expr(ev) -
                              mul(coeff_expr(ev), mul(Ii, der_expr()));
            CHECK(translate_relator(idl, {{"y1", f}}, id) == expected);
        }
    }

    StandardLaw leib(leibniz_law(0), "y0", {"y1"});
    CHECK_THROWS_AS(translate_relator(leib, {}, RingSpec::make(Variety::Diff, 0)), std::invalid_argument);
    CHECK_THROWS_AS(StandardLaw(v(CM, "y0") * v(CM, "y0"), "y0", {}), std::invalid_argument);
}

TEST_CASE("relators normalize to zero and annihilate the module") {
    // each variety's defining relators lie in the ideal its rules present,
    // and they act as zero on the coefficient algebra
    Sampler s(36);
    for (const Rat& w : {rat(0), rat(1), rat(-1)}) {
        RingSpec diff = RingSpec::make(Variety::Diff, w);
        RingSpec rb = RingSpec::make(Variety::RB, w);
        RingSpec drb = RingSpec::make(Variety::DRB, w);
        RingSpec id = RingSpec::make(Variety::ID, w);
        StandardLaw leib(leibniz_law(w), "y0", {"y1"});
        StandardLaw rbl(rb_law(w), "y0", {"y1"});
        StandardLaw idl(id_law(w), "y0", {"y1"});
        for (int i = 0; i < 10; ++i) {
            Poly f = s.poly(4);
            Poly p = s.poly(5);
            OpExpr r1 = translate_relator(leib, {{"y1", f}}, diff);
            CHECK(normal_form(r1, diff).is_zero());
            CHECK(apply(r1, p, ActionModel::of(diff)).is_zero());

            OpExpr r2 = translate_relator(rbl, {{"y1", f}}, rb);
            CHECK(normal_form(r2, rb).is_zero());
            CHECK(apply(r2, p, ActionModel::of(rb)).is_zero());

            // in the DRB ring the Leibniz and Rota-Baxter relators both die
            OpExpr r3 = translate_relator(StandardLaw(leibniz_law(w), "y0", {"y1"}), {{"y1", f}}, drb);
            CHECK(normal_form(r3, drb).is_zero());
            OpExpr r4 = translate_relator(rbl, {{"y1", f}}, drb);
            CHECK(normal_form(r4, drb).is_zero());

            OpExpr r5 = translate_relator(idl, {{"y1", f}}, id);
            CHECK(normal_form(r5, id).is_zero());
            CHECK(apply(r5, p, ActionModel::of(id)).is_zero());
        }
    }
    // over the generic coefficient algebra as well
    RingSpec gen = RingSpec::make(Variety::ID, 0, CoeffStructure::generic_eps());
    StandardLaw idl(id_law(0), "y0", {"y1"});
    for (int i = 0; i < 10; ++i) {
        Poly f = s.poly(4, true);
        OpExpr r = translate_relator(idl, {{"y1", f}}, gen);
        CHECK(normal_form(r, gen).is_zero());
        CHECK(apply(r, s.poly(5, true), ActionModel::of(gen)).is_zero());
    }
}
