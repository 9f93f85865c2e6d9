#include "doctest.h"

#include <cmath>
#include <complex>
#include <random>

#include "lattika/discriminant.hpp"

using namespace lattika;

namespace {

RatVector half_basis_vector(std::size_t n, std::size_t i) {
    RatVector y(n, Rational(0));
    y[i] = Rational(1, 2);
    return y;
}

// Values of q_{E8(-2)} on the classes of a_i / 2, as tabulated.
RatMatrix e8m2_table() {
    const std::vector<std::pair<int, int>> edges = {{0, 3}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {6, 7}};
    RatMatrix t(8, 8);
    for (std::size_t i = 0; i < 8; ++i) t(i, i) = 1;
    for (auto [i, j] : edges) t(i, j) = t(j, i) = Rational(1, 2);
    return t;
}

// Signature mod 8 by floating-point summation of exp(pi i q).
int numeric_signature(const FiniteQuadraticForm& f) {
    std::complex<double> s = 0;
    const double pi = std::acos(-1.0);
    for (const auto& x : f.elements()) s += std::polar(1.0, pi * f.q(x).get_d());
    double turns = std::arg(s) / (pi / 4);
    return static_cast<int>(std::lround(turns) % 8 + 8) % 8;
}

}  // namespace

TEST_CASE("discriminant of E8(-2) matches the tabulated form") {
    auto d = discriminant_form(make_E8(-2));
    CHECK(d.form.orders() == std::vector<long>(8, 2));
    std::vector<Element> cls;
    for (std::size_t i = 0; i < 8; ++i) cls.push_back(d.class_of(half_basis_vector(8, i)));
    auto t = e8m2_table();
    for (std::size_t i = 0; i < 8; ++i) {
        CHECK(d.form.q(cls[i]) == t(i, i));
        for (std::size_t j = 0; j < 8; ++j)
            if (i != j) CHECK(d.form.b(cls[i], cls[j]) == t(i, j));
    }
    FiniteQuadraticForm table(std::vector<long>(8, 2), t);
    CHECK(is_fqf_isometry(table, d.form, cls));
    CHECK_FALSE(halfness_check(d.form));
    CHECK(gauss_milgram_signature(d.form) == 0);
}

TEST_CASE("discriminant of L and of M") {
    auto l = make_L();
    auto dl = discriminant_form(l);
    REQUIRE(dl.form.orders() == std::vector<long>{2});
    // the class of v/2 has q = -1/2, i.e. 3/2 in Q/2Z
    auto v_half = dl.class_of(half_basis_vector(23, 22));
    CHECK(dl.form.q(v_half) == Rational(3, 2));
    CHECK(gauss_milgram_signature(dl.form) == 7);
    CHECK(numeric_signature(dl.form) == 7);
    CHECK(gauss_milgram_modulus_holds(dl.form));
    // signature (3,20): 3 - 20 = -17 = 7 mod 8
    CHECK(((3 - 20) % 8 + 8) % 8 == gauss_milgram_signature(dl.form));

    auto m = make_M();
    auto dm = discriminant_form(m);
    CHECK(dm.form.orders() == std::vector<long>(9, 2));
    CHECK(min_generators(dm.form) == 9);
    RatMatrix t(9, 9);
    auto e = e8m2_table();
    for (std::size_t i = 0; i < 8; ++i)
        for (std::size_t j = 0; j < 8; ++j) t(i, j) = e(i, j);
    t(8, 8) = Rational(3, 2);
    FiniteQuadraticForm expected(std::vector<long>(9, 2), t);
    std::vector<Element> images;
    for (std::size_t i = 6; i < 15; ++i) images.push_back(dm.class_of(half_basis_vector(15, i)));
    CHECK(is_fqf_isometry(expected, dm.form, images));

    // with q(t/2) = +1/2 the form is not isometric: signatures differ
    t(8, 8) = Rational(1, 2);
    FiniteQuadraticForm wrong(std::vector<long>(9, 2), t);
    CHECK_FALSE(is_fqf_isometry(wrong, dm.form, images));
    CHECK(gauss_milgram_signature(wrong) != gauss_milgram_signature(dm.form));
    CHECK(gauss_milgram_signature(dm.form) == 7);

    CHECK(min_generators(discriminant_form(make_Lambda()).form) == 0);
    CHECK(min_generators(discriminant_form(make_E8(-2)).form) == 8);
}

TEST_CASE("direct sum witness") {
    auto a = make_E8(-2), b = make_rank_one(-2);
    auto w = direct_sum_witness(a, b);
    auto sum = fqf_direct_sum(discriminant_form(a).form, discriminant_form(b).form);
    CHECK(is_fqf_isometry(sum, discriminant_form(direct_sum({a, b})).form, w));
}

TEST_CASE("basic form laws") {
    for (const auto& name : {"L", "M", "E8m2", "m2", "p2"}) {
        auto f = discriminant_form(named_lattice(name)).form;
        CHECK(f.q(f.zero()) == 0);
        CHECK(gauss_milgram_modulus_holds(f));
        CHECK(gauss_milgram_signature(f) == numeric_signature(f));
        for (const auto& x : f.elements()) {
            CHECK(f.q(f.neg(x)) == f.q(x));
            CHECK(f.b(x, x) == mod_rational(f.q(x), Rational(1)));
        }
    }
    auto s = named_lattice("L").signature();
    CHECK(gauss_milgram_signature(discriminant_form(named_lattice("L")).form) ==
          ((static_cast<int>(s.n_plus) - static_cast<int>(s.n_minus)) % 8 + 8) % 8);
    // q value 1/3 on an element of order 2 is inconsistent
    RatMatrix bad(1, 1);
    bad(0, 0) = Rational(1, 3);
    CHECK_THROWS_AS(FiniteQuadraticForm({2}, bad), std::invalid_argument);
}

TEST_CASE("isotropic subgroups and overlattices") {
    auto l = direct_sum({make_rank_one(-2), make_rank_one(2)});
    auto d = discriminant_form(l);
    auto subs = isotropic_subgroups(d.form);
    REQUIRE(subs.size() == 2);
    CHECK(subs[0].size() == 1);
    CHECK(subs[1].size() == 2);
    auto ov = overlattice_from_isotropic(d, subs[1]);
    CHECK(ov.lattice.determinant() == -1);
    CHECK(ov.lattice.rank() == 2);

    auto h_perp = orthogonal_subgroup(d.form, subs[1]);
    CHECK(h_perp.size() == 2);
    CHECK(subquotient(d.form, h_perp, subs[1]).form.num_generators() == 0);

    auto lx = direct_sum({make_L(), make_rank_one(2)});
    auto dx = discriminant_form(lx);
    auto iso = isotropic_subgroups(dx.form);
    REQUIRE(iso.size() == 2);
    auto big = overlattice_from_isotropic(dx, iso[1]);
    CHECK(big.lattice.is_unimodular());
    CHECK(big.lattice.signature() == Signature{4, 20, 0});

    // nontrivial subquotient: H^perp / H in (-2)+(2)+(-2) is A of (-2)
    auto l3 = direct_sum({make_rank_one(-2), make_rank_one(2), make_rank_one(-2)});
    auto d3 = discriminant_form(l3);
    Subgroup h;
    for (const auto& s : isotropic_subgroups(d3.form))
        if (s.size() == 2) {
            auto x = d3.form.element_at(s.elements[1]);
            auto lift = d3.lift(x);
            if (lift[2].get_den() == 1) h = s;  // the isotropic class avoiding the third summand
        }
    REQUIRE(h.size() == 2);
    auto perp = orthogonal_subgroup(d3.form, h);
    CHECK(perp.size() == 4);
    auto sq = subquotient(d3.form, perp, h);
    REQUIRE(sq.form.num_generators() == 1);
    CHECK(sq.form.q(sq.form.generator(0)) == Rational(3, 2));
    for (std::size_t idx : perp.elements) {
        auto x = d3.form.element_at(idx);
        auto p = sq.project(x);
        CHECK(sq.form.q(p) == d3.form.q(x));
    }
}

TEST_CASE("isometry search") {
    auto a2 = discriminant_form(make_rank_one(2)).form;
    auto am2 = discriminant_form(make_rank_one(-2)).form;
    CHECK(fqf_isometry_exists(a2, am2).status == Tri::no);
    CHECK(fqf_isometry_exists(a2, a2).status == Tri::yes);

    // E8(-2) after a random unimodular change of basis
    auto g = make_E8(-2).gram();
    std::mt19937_64 rng(23);
    IntMatrix p = IntMatrix::identity(8);
    for (int s = 0; s < 25; ++s) {
        std::size_t i = rng() % 8, j = rng() % 8;
        if (i == j) continue;
        IntMatrix e = IntMatrix::identity(8);
        e(i, j) = static_cast<long>(rng() % 3) - 1;
        p = e * p;
    }
    auto fa = discriminant_form(make_E8(-2)).form;
    auto fb = discriminant_form(Lattice(p * g * p.transpose())).form;
    auto r = fqf_isometry_exists(fa, fb);
    REQUIRE(r.status == Tri::yes);
    CHECK(is_fqf_isometry(fa, fb, r.images));

    // A_M is above the default search guard
    auto dm = discriminant_form(make_M()).form;
    CHECK(fqf_isometry_exists(dm, dm).status == Tri::unknown);

    // pointed search: the class of t/2 must go to itself
    auto dmf = discriminant_form(make_M());
    auto tau = dmf.class_of(half_basis_vector(15, 14));
    auto pointed = find_isometry(dmf.form, dmf.form, {{tau, tau}}, 1024);
    REQUIRE(pointed.status == Tri::yes);
    CHECK(apply_morphism(dmf.form, dmf.form, pointed.images, tau) == tau);

    // a nonzero element of E8(-2) with q = 0 can never be sent to tau (q = 3/2)
    auto x = dmf.class_of(RatVector{0, 0, 0, 0, 0, 0, Rational(1, 2), Rational(1, 2), 0, 0, 0, 0, 0, 0, 0});
    REQUIRE(dmf.form.q(x) == 0);
    CHECK(find_isometry(dmf.form, dmf.form, {{x, tau}}, 1024).status == Tri::no);
}
