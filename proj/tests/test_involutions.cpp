#include "doctest.h"

#include "lattika/embeddings.hpp"
#include "lattika/involutions.hpp"

using namespace lattika;

namespace {

// Exchanges the two E8(-1) blocks of E8(-1)^2.
Isometry block_swap() {
    IntMatrix g(16, 16);
    for (std::size_t i = 0; i < 8; ++i) g(i, 8 + i) = g(8 + i, i) = 1;
    return Isometry(direct_sum({make_E8(-1), make_E8(-1)}), g);
}

// Standard swap followed by -1 on the (-2) summand.
Isometry swap_negating_v() {
    IntMatrix g = standard_swap_involution_L().matrix();
    g(22, 22) = -1;
    return Isometry(make_L(), g);
}

// Exchanges the first two hyperbolic planes of L.
Isometry u_swap() {
    IntMatrix g = IntMatrix::identity(23);
    for (std::size_t i = 0; i < 2; ++i) {
        g(i, i) = g(2 + i, 2 + i) = 0;
        g(i, 2 + i) = g(2 + i, i) = 1;
    }
    return Isometry(make_L(), g);
}

bool orthogonal(const Sublattice& a, const Sublattice& b) {
    return (a.gens() * a.ambient().gram() * b.gens().transpose()).is_zero();
}

}  // namespace

TEST_CASE("invariant and coinvariant lattices") {
    auto l = make_L();
    auto id = Isometry::identity(l);
    CHECK(invariant_lattice(id).rank() == 23);
    CHECK(coinvariant_lattice(id).rank() == 0);

    auto bs = block_swap();
    auto t = invariant_lattice(bs), s = coinvariant_lattice(bs);
    REQUIRE(t.rank() == 8);
    REQUIRE(s.rank() == 8);
    CHECK(is_isometric_definite(sublattice_as_lattice(t), make_E8(-2)));
    CHECK(is_isometric_definite(sublattice_as_lattice(s), make_E8(-2)));
    // S is spanned by the differences a - g(a)
    for (std::size_t i = 0; i < 16; ++i) {
        IntVector a(16, Integer(0));
        a[i] = 1;
        IntVector d = bs.apply(a);
        for (std::size_t j = 0; j < 16; ++j) d[j] = a[j] - d[j];
        CHECK(s.contains(d));
    }

    auto sw = standard_swap_involution_L();
    CHECK(sw.compose(sw).is_identity());
    CHECK(sw.order() == 2);
    auto ts = invariant_lattice(sw), ss = coinvariant_lattice(sw);
    CHECK(ts.rank() == 15);
    CHECK(ss.rank() == 8);
    CHECK(orthogonal(ts, ss));
    CHECK(is_primitive(ts));
    CHECK(is_primitive(ss));
    // U^3 + (-2) is fixed pointwise
    for (std::size_t i : {0, 1, 2, 3, 4, 5, 22}) {
        IntVector x(23, Integer(0));
        x[i] = 1;
        CHECK(sw.apply(x) == x);
    }
}

TEST_CASE("2-torsion of the eigenlattice quotient") {
    CHECK(torsion_exponent_of_quotient(make_L(), Isometry::identity(make_L())) == 1);

    auto bs = block_swap();
    auto q = eigen_quotient(bs);
    CHECK(q.exponent == 2);
    CHECK(q.order == 256);
    // index^2 * det(ambient) = det T * det S
    auto t = sublattice_as_lattice(invariant_lattice(bs));
    auto s = sublattice_as_lattice(coinvariant_lattice(bs));
    CHECK(q.order * q.order == abs(t.determinant() * s.determinant()));

    auto ext = extend_isometry_L_to_Lambda(standard_swap_involution_L());
    CHECK(torsion_exponent_of_quotient(ext.lambda, ext.g_bar) == 2);
    CHECK(eigen_quotient(ext.g_bar).order == 256);

    // an isometry of order 3 on U + U + U is rejected
    IntMatrix cyc(6, 6);
    for (std::size_t i = 0; i < 3; ++i) {
        cyc(2 * ((i + 1) % 3), 2 * i) = 1;
        cyc(2 * ((i + 1) % 3) + 1, 2 * i + 1) = 1;
    }
    Isometry c(direct_sum({make_U(), make_U(), make_U()}), cyc);
    CHECK_THROWS_AS(torsion_exponent_of_quotient(c.home(), c), std::invalid_argument);
}

TEST_CASE("definite isometry testing") {
    auto e = make_E8(-2);
    auto w = is_isometric_definite(e, e);
    REQUIRE(w);
    CHECK(w->transpose() * e.gram() * *w == e.gram());

    Lattice m2_8 = direct_sum(std::vector<Lattice>(8, make_rank_one(-2)));
    CHECK(e.determinant() == m2_8.determinant());
    CHECK_FALSE(is_isometric_definite(e, m2_8));
    CHECK(norm_histogram(m2_8, 2).at(-2) == 16);
    CHECK(norm_histogram(e, 2).empty());

    // skewed basis of E8(-2) + (-2)
    Lattice target = direct_sum({make_E8(-2), make_rank_one(-2)});
    IntMatrix p = IntMatrix::identity(9);
    for (std::size_t i = 0; i + 1 < 9; ++i) p(i, i + 1) = (i % 2) ? -1 : 2;
    IntMatrix lower = IntMatrix::identity(9);
    lower(8, 0) = 1;
    lower(5, 2) = -3;
    p = lower * p;
    REQUIRE(abs(p.determinant()) == 1);
    Lattice skew(p * target.gram() * p.transpose());
    auto u = is_isometric_definite(skew, target);
    REQUIRE(u);
    CHECK(u->transpose() * target.gram() * *u == skew.gram());
    auto u2 = is_isometric_definite(target, skew);
    REQUIRE(u2);
    CHECK(u2->transpose() * skew.gram() * *u2 == target.gram());

    CHECK_THROWS_AS(is_isometric_definite(make_U(), make_U()), std::invalid_argument);
    CHECK_FALSE(is_isometric_definite(make_E8(-1), make_E8(1)));
}

TEST_CASE("invariant lattice of the swap on L") {
    auto l = make_L();
    auto rep = identify_T_swap(l, standard_swap_involution_L());
    REQUIRE(rep.matches);
    CHECK(rep.u_planes.size() == 3);
    for (const auto& u : rep.u_planes) CHECK(u * l.gram() * u.transpose() == make_U().gram());
    REQUIRE(rep.s_witness);
    auto s_lat = sublattice_as_lattice(rep.s);
    CHECK(rep.s_witness->transpose() * make_E8(-2).gram() * *rep.s_witness == s_lat.gram());
    CHECK(rep.m_basis * l.gram() * rep.m_basis.transpose() == make_M().gram());
    // eta sends T coordinates of the M basis to unit vectors
    for (std::size_t i = 0; i < 15; ++i) {
        IntVector y = rep.eta.right_mul(*rep.t.to_sub(rep.m_basis.row(i)));
        IntVector unit(15, Integer(0));
        unit[i] = 1;
        CHECK(y == unit);
    }

    auto id = identify_T_swap(l, Isometry::identity(l));
    CHECK_FALSE(id.matches);
    CHECK(id.s.rank() == 0);

    auto neg = identify_T_swap(l, swap_negating_v());
    CHECK_FALSE(neg.matches);
    CHECK(neg.t.rank() == 14);
}

TEST_CASE("induced action on the discriminant") {
    auto l = make_L();
    CHECK(induced_discriminant_action(Isometry::identity(l)).is_identity());
    auto act = induced_discriminant_action(standard_swap_involution_L());
    CHECK(act.disc.form.orders() == std::vector<long>{2});
    CHECK(act.is_identity());
    Isometry neg(make_rank_one(-2), IntMatrix{{-1}});
    CHECK(induced_discriminant_action(neg).is_identity());

    // q is preserved on every element under the action of a random-ish isometry of M
    auto m = make_M();
    IntMatrix g = IntMatrix::identity(15);
    std::swap(g(0, 0), g(0, 2));
    std::swap(g(2, 2), g(2, 0));
    std::swap(g(1, 1), g(1, 3));
    std::swap(g(3, 3), g(3, 1));
    auto a = induced_discriminant_action(Isometry(m, g));
    for (const auto& x : a.disc.form.elements())
        CHECK(a.disc.form.q(apply_morphism(a.disc.form, a.disc.form, a.images, x)) == a.disc.form.q(x));

    // on U(2) the swap of e and f exchanges the two generators of order 2
    Lattice u2(IntMatrix{{0, 2}, {2, 0}});
    auto su = induced_discriminant_action(Isometry(u2, IntMatrix{{0, 1}, {1, 0}}));
    CHECK_FALSE(su.is_identity());
}

TEST_CASE("Nikulin conditions") {
    auto l = make_L();
    auto triv = nikulin_conditions_report(l, {});
    CHECK(triv.passed);
    CHECK(triv.s.rank() == 0);
    CHECK(triv.group_order == 1);

    auto sw = nikulin_conditions_report(l, {standard_swap_involution_L()});
    CHECK(sw.passed);
    CHECK(sw.group_order == 2);
    CHECK(sw.negative_definite);
    CHECK(sw.roots.empty());
    CHECK(sw.minimal_norm == -4);
    CHECK(sw.minimal_count == 240);
    CHECK(sw.trivial_on_discriminant);

    auto us = nikulin_conditions_report(l, {u_swap()});
    CHECK_FALSE(us.passed);
    CHECK_FALSE(us.negative_definite);
    CHECK(us.s_signature == Signature{1, 1, 0});
    CHECK(us.reason.find("not negative definite") != std::string::npos);
}
