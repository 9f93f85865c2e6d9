#include "doctest.h"

#include <random>
#include <set>

#include "lattika/lattice.hpp"

using namespace lattika;

namespace {

// E8 simple roots in the even coordinate model, ordered to match e8_cartan().
RatMatrix e8_root_basis() {
    const Rational h(1, 2);
    std::vector<RatVector> rows = {
        {1, 1, 0, 0, 0, 0, 0, 0},
        {h, -h, -h, -h, -h, -h, -h, h},
        {-1, 1, 0, 0, 0, 0, 0, 0},
        {0, -1, 1, 0, 0, 0, 0, 0},
        {0, 0, -1, 1, 0, 0, 0, 0},
        {0, 0, 0, -1, 1, 0, 0, 0},
        {0, 0, 0, 0, -1, 1, 0, 0},
        {0, 0, 0, 0, 0, -1, 1, 0},
    };
    RatMatrix b(8, 8);
    for (std::size_t i = 0; i < 8; ++i)
        for (std::size_t j = 0; j < 8; ++j) b(i, j) = rows[i][j];
    return b;
}

// The 240 roots of the even coordinate model, by direct enumeration.
std::vector<RatVector> coordinate_roots() {
    std::vector<RatVector> out;
    for (int i = 0; i < 8; ++i)
        for (int j = i + 1; j < 8; ++j)
            for (int si : {-1, 1})
                for (int sj : {-1, 1}) {
                    RatVector v(8, Rational(0));
                    v[i] = si;
                    v[j] = sj;
                    out.push_back(v);
                }
    for (int mask = 0; mask < 256; ++mask) {
        if (__builtin_popcount(mask) % 2) continue;
        RatVector v(8);
        for (int i = 0; i < 8; ++i) v[i] = Rational((mask >> i) & 1 ? -1 : 1, 2);
        out.push_back(v);
    }
    return out;
}

}  // namespace

TEST_CASE("named lattices") {
    auto u = make_U();
    CHECK(u.determinant() == -1);
    CHECK(u.signature() == Signature{1, 1, 0});

    auto e8 = make_E8(-1);
    CHECK(e8.determinant() == 1);
    CHECK(e8.signature() == Signature{0, 8, 0});

    auto e8m2 = make_E8(-2);
    CHECK(e8m2.determinant() == 256);
    // norms over a coefficient box
    IntVector x(8);
    for (int code = 0; code < 6561; ++code) {
        int c = code;
        for (int i = 0; i < 8; ++i) {
            x[i] = c % 3 - 1;
            c /= 3;
        }
        CHECK(e8m2.norm(x) % 4 == 0);
    }

    CHECK_THROWS_AS(make_rank_one(3), std::invalid_argument);
    CHECK_THROWS_AS(make_E8(3), std::invalid_argument);
    CHECK_THROWS_AS(Lattice(IntMatrix{{1, 0}, {0, 2}}), std::invalid_argument);
    CHECK_THROWS_AS(Lattice(IntMatrix{{2, 1}, {0, 2}}), std::invalid_argument);
    CHECK_THROWS_AS(Lattice(IntMatrix{{2, 2}, {2, 2}}), std::invalid_argument);
}

TEST_CASE("direct sums") {
    auto l = make_L();
    CHECK(l.rank() == 23);
    CHECK(l.signature() == Signature{3, 20, 0});
    CHECK(abs(l.determinant()) == 2);

    auto m = direct_sum({make_E8(-2), make_U(), make_U(), make_U(), make_rank_one(-2)});
    CHECK(m.rank() == 15);
    CHECK(m.signature() == Signature{3, 12, 0});
    CHECK(make_M().signature() == Signature{3, 12, 0});
    CHECK(abs(make_M().determinant()) == 512);

    CHECK(direct_sum({}).rank() == 0);
    CHECK(make_Lambda().determinant() == 1);
}

TEST_CASE("pairings and divisibility") {
    auto u = std::make_shared<const Lattice>(make_U());
    LatticeVector e1({1, 0}, u), f1({0, 1}, u);
    CHECK(pair(e1, f1) == 1);
    CHECK(norm(e1) == 0);
    CHECK(divisibility(e1) == 1);

    auto m2 = std::make_shared<const Lattice>(make_rank_one(-2));
    CHECK(norm(LatticeVector({1}, m2)) == -2);
    CHECK_THROWS(pair(e1, LatticeVector({1}, m2)));

    auto l = make_L();
    IntVector v(23, Integer(0));
    v[22] = 1;
    CHECK(l.norm(v) == -2);
    CHECK(l.divisibility(v) == 2);

    auto m = make_M();
    IntVector t(15, Integer(0));
    t[14] = 1;
    CHECK(m.divisibility(t) == 2);

    auto lam = make_Lambda();
    std::mt19937_64 rng(1);
    for (int k = 0; k < 30; ++k) {
        IntVector w(24);
        for (auto& c : w) c = static_cast<long>(rng() % 7) - 3;
        if (content(w) != 1) continue;
        CHECK(lam.divisibility(w) == 1);
    }
    CHECK_THROWS(l.divisibility(IntVector(23, Integer(0))));
}

TEST_CASE("orthogonal complements and primitive closure") {
    auto uu = direct_sum({make_U(), make_U()});
    Sublattice first(uu, IntMatrix{{1, 0, 0, 0}, {0, 1, 0, 0}});
    auto comp = orthogonal_complement(first);
    CHECK(comp.same_span(Sublattice(uu, IntMatrix{{0, 0, 1, 0}, {0, 0, 0, 1}})));

    auto m = make_M();
    IntMatrix tgen(1, 15);
    tgen(0, 14) = 1;
    auto tperp = orthogonal_complement(Sublattice(m, tgen));
    CHECK(tperp.rank() == 14);
    CHECK(is_primitive(tperp));
    CHECK(sublattice_as_lattice(tperp).gram() == direct_sum({make_U(), make_U(), make_U(), make_E8(-2)}).gram());

    auto u = make_U();
    Sublattice two_e(u, IntMatrix{{2, 0}});
    CHECK_FALSE(is_primitive(two_e));
    CHECK(primitive_closure(two_e).gens() == IntMatrix{{1, 0}});

    auto ee = direct_sum({make_E8(-1), make_E8(-1)});
    IntMatrix diag(8, 16), anti(8, 16);
    for (std::size_t i = 0; i < 8; ++i) {
        diag(i, i) = diag(i, i + 8) = 1;
        anti(i, i) = 1;
        anti(i, i + 8) = -1;
    }
    Sublattice d(ee, diag), a(ee, anti);
    CHECK(is_primitive(d));
    CHECK(is_primitive(a));
    CHECK(sublattice_as_lattice(d).gram() == make_E8(-2).gram());
    CHECK(sublattice_as_lattice(a).gram() == make_E8(-2).gram());
    CHECK(orthogonal_complement(d).same_span(a));

    // double complement equals primitive closure on random sublattices
    auto l = make_L();
    std::mt19937_64 rng(17);
    for (int t = 0; t < 25; ++t) {
        std::size_t k = 1 + rng() % 4;
        IntMatrix g(k, 23);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < 23; ++j) g(i, j) = static_cast<long>(rng() % 5) - 2;
        if (g.rank() != k) continue;
        Sublattice s(l, g);
        auto c = orthogonal_complement(s);
        CHECK(is_primitive(c));
        CHECK((c.gens() * l.gram() * g.transpose()).is_zero());
        auto cc = orthogonal_complement(c);
        CHECK(cc.same_span(primitive_closure(s)));
        CHECK(is_primitive(primitive_closure(s)));
        if (sublattice_as_lattice(s, false).determinant() != 0) CHECK(s.rank() + c.rank() == 23);
    }
}

TEST_CASE("short vectors") {
    auto e8 = make_E8(-1);
    auto roots = short_vectors(e8, -2);
    CHECK(roots.size() == 240);
    CHECK(std::is_sorted(roots.begin(), roots.end()));
    std::set<IntVector> rs(roots.begin(), roots.end());
    for (const auto& r : roots) {
        IntVector neg = r;
        for (auto& c : neg) c = -c;
        CHECK(rs.count(neg) == 1);
    }

    // independent oracle: coordinate model roots expressed in the simple-root basis
    auto basis = e8_root_basis();
    auto gram = basis * basis.transpose();
    CHECK(gram.to_integer() == e8_cartan());
    auto inv = basis.inverse();
    REQUIRE(inv.has_value());
    std::set<IntVector> oracle;
    for (const auto& v : coordinate_roots()) {
        RatVector x = inv->left_mul(v);
        IntVector xi;
        for (const auto& q : x) {
            REQUIRE(q.get_den() == 1);
            xi.push_back(q.get_num());
        }
        oracle.insert(xi);
    }
    CHECK(oracle.size() == 240);
    CHECK(oracle == rs);

    CHECK(short_vectors(make_E8(-2), -2).empty());
    auto e8m2_4 = short_vectors(make_E8(-2), -4);
    CHECK(e8m2_4.size() == 240);
    CHECK(e8m2_4 == roots);
    CHECK(short_vectors(make_E8(-2), -8).size() == 2160);

    CHECK_THROWS(short_vectors(make_U(), 2));
}
