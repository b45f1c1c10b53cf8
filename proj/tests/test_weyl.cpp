#include <catch2/catch.hpp>

#include "helpers.hpp"
#include "opalg/weyl.hpp"

using namespace opalg;

namespace {
WeylElt b2(unsigned i, unsigned j, unsigned k, Rat c = 1) { return WeylElt::b2_word(i, j, k, c); }
const WeylElt X = b2(1, 0, 0), L = b2(0, 1, 0), Dd = b2(0, 0, 1), One = b2(0, 0, 0);
}  // namespace

TEST_CASE("defining relations") {
    CHECK(weyl_mul(Dd, X) - weyl_mul(X, Dd) == One);          // D x - x D = 1
    CHECK(weyl_mul(X, L) - weyl_mul(L, X) == b2(0, 2, 0));    // x l - l x = l^2
    CHECK(weyl_mul(L, X) == b2(1, 1, 0) - b2(0, 2, 0));       // l x = x l - l^2
    CHECK(weyl_mul(Dd, L) == One);                            // d l = 1
}

TEST_CASE("commutations [x^i, l] and [x, l^j]") {
    for (unsigned i = 1; i <= 6; ++i) {
        WeylElt xi = b2(i, 0, 0);
        WeylElt lhs = weyl_mul(xi, L) - weyl_mul(L, xi);
        // i * l x^{i-1} l
        WeylElt rhs = Rat(static_cast<long>(i)) * weyl_mul(weyl_mul(L, b2(i - 1, 0, 0)), L);
        CHECK(lhs == rhs);
    }
    for (unsigned j = 1; j <= 6; ++j) {
        WeylElt lj = b2(0, j, 0);
        WeylElt lhs = weyl_mul(X, lj) - weyl_mul(lj, X);
        CHECK(lhs == b2(0, j + 1, 0, Rat(static_cast<long>(j))));
    }
    // induction identity: n l x^{n-1} l = x^n l - l x^n
    for (unsigned n = 1; n <= 6; ++n) {
        WeylElt lhs = Rat(static_cast<long>(n)) * weyl_mul(weyl_mul(L, b2(n - 1, 0, 0)), L);
        WeylElt rhs = weyl_mul(b2(n, 0, 0), L) - weyl_mul(L, b2(n, 0, 0));
        CHECK(lhs == rhs);
    }
}

TEST_CASE("multiplication examples") {
    CHECK(weyl_mul(L, b2(2, 0, 0)) == b2(2, 1, 0) - Rat(2) * b2(1, 2, 0) + Rat(2) * b2(0, 3, 0));
    CHECK_THROWS_AS(weyl_mul(convert(L, WeylBasis::B3), L), std::invalid_argument);
}

TEST_CASE("associativity on random triples") {
    Sampler s(71);
    for (int i = 0; i < 100; ++i) {
        WeylElt a = s.weyl_b2(4, 2), b = s.weyl_b2(4, 2), c = s.weyl_b2(4, 2);
        CHECK(weyl_mul(weyl_mul(a, b), c) == weyl_mul(a, weyl_mul(b, c)));
    }
}

TEST_CASE("basis conversion worked examples") {
    // e = 1 - l d
    WeylElt e1(WeylBasis::B1);
    e1.add_term({WeylIdx::Tag::E, 0, 0, 0}, 1);
    CHECK(convert(e1, WeylBasis::B2) == One - b2(0, 1, 1));

    // l x as a mid-basis word maps to x l - l^2
    WeylElt lx(WeylBasis::B3);
    lx.add_term({WeylIdx::Tag::R, 0, 1, 0}, 1);
    CHECK(convert(lx, WeylBasis::B2) == b2(1, 1, 0) - b2(0, 2, 0));

    // l x^2 via the bridge oracle: normal form of V x^2 over DRB, bridged back
    RingSpec drb = RingSpec::make(Variety::DRB, 0);
    OpExpr vx2 = mul(int_expr(drb), coeff_expr(Poly::x(2)));
    CHECK(is_normal(vx2, drb));
    WeylElt bridged = convert(from_opexpr(vx2), WeylBasis::B2);
    CHECK(bridged == weyl_mul(L, b2(2, 0, 0)));
}

TEST_CASE("round trips B1 <-> B2 <-> B3") {
    // all basis words with indices <= 4
    for (unsigned i = 0; i <= 4; ++i)
        for (unsigned j = 0; j <= 4; ++j)
            for (unsigned k = 0; k <= 4; ++k) {
                WeylElt w = b2(i, j, k);
                CHECK(convert(convert(w, WeylBasis::B1), WeylBasis::B2) == w);
                CHECK(convert(convert(w, WeylBasis::B3), WeylBasis::B2) == w);
                WeylElt e1(WeylBasis::B1);
                e1.add_term({WeylIdx::Tag::E, i, j, k}, 1);
                CHECK(convert(convert(e1, WeylBasis::B2), WeylBasis::B1) == e1);
                WeylElt e3(WeylBasis::B3);
                e3.add_term({k > 0 ? WeylIdx::Tag::E : WeylIdx::Tag::R, i, j, k}, 1);
                CHECK(convert(convert(e3, WeylBasis::B2), WeylBasis::B3) == e3);
            }

    Sampler s(72);
    for (int i = 0; i < 200; ++i) {
        WeylElt w = s.weyl_b2(5);
        CHECK(convert(convert(w, WeylBasis::B1), WeylBasis::B2) == w);
        CHECK(convert(convert(w, WeylBasis::B3), WeylBasis::B2) == w);
        CHECK(convert(convert(w, WeylBasis::B1), WeylBasis::B3) == convert(w, WeylBasis::B3));
    }
}

TEST_CASE("sub-basis constraints are enforced") {
    WeylElt b1(WeylBasis::B1);
    CHECK_THROWS_AS(b1.add_term({WeylIdx::Tag::R, 0, 0, 0}, 1), std::invalid_argument);  // R needs j > 0
    WeylElt b3(WeylBasis::B3);
    CHECK_THROWS_AS(b3.add_term({WeylIdx::Tag::E, 0, 0, 0}, 1), std::invalid_argument);  // E3 needs k > 0
    WeylElt b2e(WeylBasis::B2);
    CHECK_THROWS_AS(b2e.add_term({WeylIdx::Tag::D, 1, 0, 0}, 1), std::invalid_argument);
}

TEST_CASE("bridge to the operator ring") {
    // B3 word x l x d  <->  x V x D
    WeylElt w(WeylBasis::B3);
    w.add_term({WeylIdx::Tag::E, 1, 1, 1}, 1);
    OpExpr t = to_opexpr(w);
    OpWord expect;
    expect.push(OpLetter::coeff({1, 0}));
    expect.push(OpLetter::integral(true));
    expect.push(OpLetter::coeff({1, 0}));
    expect.push(OpLetter::der());
    CHECK(t == OpExpr(expect));
    CHECK(from_opexpr(t) == w);

    // V x V reduces into the mid-basis part, matching the direct route
    RingSpec drb = RingSpec::make(Variety::DRB, 0);
    OpExpr vxv = mul(mul(int_expr(drb), coeff_expr(Poly::x())), int_expr(drb));
    WeylElt via_ops = from_opexpr(normal_form(vxv, drb));
    WeylElt direct = weyl_mul(weyl_mul(L, b2(1, 0, 0)), L);
    CHECK(convert(via_ops, WeylBasis::B2) == direct);
    for (const auto& [m, c] : via_ops.terms()) CHECK(m.tag == WeylIdx::Tag::R);

    // cross-engine equivalence on random pairs
    Sampler s(73);
    for (int i = 0; i < 100; ++i) {
        WeylElt a = s.weyl_b2(3, 2), b = s.weyl_b2(3, 2);
        OpExpr prod = normal_form(mul(to_opexpr(convert(a, WeylBasis::B3)), to_opexpr(convert(b, WeylBasis::B3))),
                                  drb);
        CHECK(convert(from_opexpr(prod), WeylBasis::B2) == weyl_mul(a, b));
    }

    CHECK_THROWS_AS(from_opexpr(vxv), std::invalid_argument);  // not a normal form
    CHECK_THROWS_AS(to_opexpr(L), std::invalid_argument);      // bridge works from B3
}
