#include "doctest.h"

#include "lattika/density.hpp"
#include "lattika/involutions.hpp"

using namespace lattika;

namespace {

IntVector unit(std::size_t n, std::size_t i) {
    IntVector v(n, Integer(0));
    v[i] = 1;
    return v;
}

IntVector e8_block(const IntVector& v8) {
    IntVector out(15, Integer(0));
    for (std::size_t i = 0; i < 8; ++i) out[6 + i] = v8[i];
    return out;
}

void check_decomposition(const IsotropicDecomposition& d) {
    const Lattice m = make_M();
    CHECK(d.t.contains(d.w));
    CHECK(d.t.induced_gram().determinant() != 0);
    CHECK(m.norm(d.p) == -2);
    CHECK(m.divisibility(d.p) == 2);
    CHECK(d.r.contains(d.p));
    CHECK(d.r.rank() == 13);
    CHECK((d.t.gens() * m.gram() * d.r.gens().transpose()).is_zero());
    CHECK(m.norm(d.e) == 0);
    CHECK(m.norm(d.f) == 0);
    CHECK(m.pair(d.e, d.f) == 1);
    CHECK(m.pair(d.e, d.p) == 0);
    CHECK(m.pair(d.f, d.p) == 0);
    CHECK(d.r.contains(d.e));
    CHECK(d.r.contains(d.f));
    CHECK(d.r_prime.rank() == 10);
    CHECK(d.g.apply(d.w) == d.normal_form);
}

}  // namespace

TEST_CASE("M0 inside L") {
    const auto& m0 = standard_M0();
    CHECK(m0.m0.rank() == 15);
    const Lattice l = make_L(), m = make_M();
    CHECK(m0.basis * l.gram() * m0.basis.transpose() == m.gram());
    CHECK(m0.m0.same_span(invariant_lattice(standard_swap_involution_L())));
    for (std::size_t i = 0; i < 15; ++i) CHECK(m0.to_M(m0.from_M(unit(15, i))) == unit(15, i));

    // t is 2-divisible in M; its preimage in L is 2-divisible as well
    IntVector t_l = m0.from_M(unit(15, 14));
    CHECK(m.divisibility(unit(15, 14)) == 2);
    CHECK(l.divisibility(t_l) == 2);
    // a1 is 2-divisible in M but not in L
    IntVector a1_l = m0.from_M(unit(15, 6));
    CHECK(m.divisibility(unit(15, 6)) == 2);
    CHECK(l.divisibility(a1_l) == 1);
}

TEST_CASE("isotropic decomposition") {
    const Lattice m = make_M();
    auto d1 = decompose_isotropic(unit(15, 0));
    CHECK(d1.m == 1);
    check_decomposition(d1);
    CHECK(d1.normal_form == unit(15, 0));

    // w = 2e1 + 2f1 + v with v of norm -8 in E8(-2)
    auto vs = short_vectors(make_E8(-2), -8);
    REQUIRE(!vs.empty());
    IntVector w = e8_block(vs[17]);
    w[0] = 2;
    w[1] = 2;
    REQUIRE(m.norm(w) == 0);
    auto d2 = decompose_isotropic(w);
    CHECK(d2.m == 2);
    check_decomposition(d2);
    REQUIRE(d2.v);
    CHECK(m.norm(*d2.v) == -8);
    CHECK(m.norm(d2.normal_form) == 0);

    // a less obvious divisibility-2 vector, moved by a transvection
    IntVector w3 = e8_block(vs[100]);
    w3[2] = 2;
    w3[3] = 2;
    w3[0] = 4;
    w3[1] = 0;
    REQUIRE(m.norm(w3) == 0);
    REQUIRE(is_primitive_vector(w3));
    check_decomposition(decompose_isotropic(w3));

    IntVector bad = unit(15, 0);
    bad[1] = 1;
    CHECK_THROWS_AS(decompose_isotropic(bad), std::invalid_argument);
    IntVector twice = unit(15, 0);
    twice[0] = 2;
    CHECK_THROWS_AS(decompose_isotropic(twice), std::invalid_argument);
}

TEST_CASE("norm 2k sequences") {
    const auto& m0 = standard_M0();
    const IntVector w0 = m0.from_M(unit(15, 0));
    const Lattice l = make_L();
    for (long k : {-2, 0, 2}) {
        auto res = norm2k_sequence({w0, k, 5});
        REQUIRE(res.vectors.size() == 5);
        for (std::size_t n = 1; n <= 5; ++n) {
            const auto& sv = res.vectors[n - 1];
            CHECK(sv.norm == 2 * k);
            CHECK(sv.primitive);
            // w_n / n - w_0 is bounded by C / n
            for (std::size_t i = 0; i < 23; ++i) {
                Rational diff = Rational(sv.coords[i], n) - Rational(w0[i]);
                CHECK(abs(diff) <= res.convergence_constant / Rational(n));
            }
        }
    }
    auto r0 = norm2k_sequence({w0, 0, 3});
    REQUIRE(r0.q);
    CHECK(l.norm(*r0.q) == -2);
    CHECK(l.divisibility(*r0.q) == 2);
    for (const auto& sv : r0.vectors) CHECK(sv.orthogonal_to_q);

    auto rm1 = norm2k_sequence({w0, -1, 3});
    CHECK(rm1.p_splits_L);
    for (const auto& sv : rm1.vectors) {
        CHECK(sv.norm == -2);
        CHECK(sv.div_L == 2);
        CHECK(is_exceptional(sv.coords));
    }
    auto r3 = norm2k_sequence({w0, 3, 3});
    for (const auto& sv : r3.vectors) {
        CHECK(sv.norm == 6);
        CHECK(sv.div_L == 2);
    }
    // norm 2 vectors of divisibility 2 do not exist in L: x = v + 2y forces x^2 = -2 mod 8
    auto r1 = norm2k_sequence({w0, 1, 3});
    for (const auto& sv : r1.vectors) {
        CHECK(sv.norm == 2);
        CHECK(sv.primitive);
        CHECK(sv.div_L == 1);
    }
}

TEST_CASE("exceptional classes") {
    const auto& m0 = standard_M0();
    CHECK(is_exceptional(m0.from_M(unit(15, 14))));
    IntVector ef = unit(15, 0);
    ef[1] = -1;
    CHECK_FALSE(is_exceptional(m0.from_M(ef)));
    CHECK_FALSE(is_exceptional(IntVector(23, Integer(0))));
    // v itself is 2-divisible of norm -2 and lies in M0
    CHECK(is_exceptional(unit(23, 22)));
    CHECK(splits_orthogonally(make_L(), unit(23, 22)));
}
