#include "doctest.h"

#include <set>

#include "lattika/checks.hpp"

using namespace lattika;

TEST_CASE("integer and rational round trips") {
    const Integer big("123456789012345678901234567890");
    CHECK(to_json(big).is_string());
    CHECK(integer_from_json(to_json(big)) == big);
    CHECK(to_json(Integer(-7)) == Json(-7));
    CHECK(integer_from_json(Json(-7)) == -7);
    CHECK(rational_from_json(to_json(Rational(-3, 2))) == Rational(-3, 2));
    CHECK(rational_from_json(Json("4/6")) == Rational(2, 3));
    CHECK_THROWS_AS(integer_from_json(Json("x1")), std::invalid_argument);
    CHECK_THROWS_AS(rational_from_json(Json("1/0")), std::invalid_argument);
    CHECK_THROWS_AS(integer_from_json(Json(1.5)), std::invalid_argument);
}

TEST_CASE("lattice round trips") {
    for (const auto& name : named_lattice_names()) {
        const Lattice l = named_lattice(name);
        const Lattice back = lattice_from_json(Json::parse(lattice_to_json(l).dump()));
        CHECK(back.gram() == l.gram());
        CHECK(back.label() == l.label());
    }
    CHECK_THROWS_AS(lattice_from_json(Json{{"gram", {{1}}}}), std::invalid_argument);
    CHECK_THROWS_AS(lattice_from_json(Json{{"gram", {{2, 1}, {1}}}}), std::invalid_argument);
    CHECK_THROWS_AS(lattice_from_json(Json{{"rank", 2}, {"gram", {{2}}}}), std::invalid_argument);
    CHECK_THROWS_AS(lattice_from_json(Json{{"label", "x"}}), std::invalid_argument);
    const IntVector v = {Integer(1), Integer(-2), Integer(0)};
    CHECK(vector_from_record(vector_record(v)) == v);
}

TEST_CASE("finite quadratic form round trips") {
    for (const char* name : {"L", "M", "E8m2", "m2", "p2"}) {
        const auto f = discriminant_form(named_lattice(name)).form;
        const auto g = fqf_from_json(Json::parse(fqf_to_json(f).dump()));
        REQUIRE(g.orders() == f.orders());
        std::vector<Element> gens;
        for (std::size_t i = 0; i < f.num_generators(); ++i) {
            Element e(f.num_generators(), 0);
            e[i] = 1;
            gens.push_back(e);
        }
        CHECK(is_fqf_isometry(f, g, gens));
    }
}

TEST_CASE("claims re-verify and tampering is caught") {
    const Lattice e8 = make_E8(-2);
    std::string why;
    Json det{{"type", "determinant"}, {"matrix", to_json(e8.gram())}, {"value", 256}};
    CHECK(recheck_claim(det, why));
    det["value"] = 255;
    CHECK_FALSE(recheck_claim(det, why));
    CHECK(why == "determinant differs");

    RatVector half(8, Rational(0));
    half[0] = Rational(1, 2);
    Json fv{{"type", "form_values"}, {"gram", to_json(e8.gram())}, {"lifts", {to_json(half)}}, {"q", {{"1"}}}};
    CHECK(recheck_claim(fv, why));
    fv["q"] = Json{{"1/2"}};
    CHECK_FALSE(recheck_claim(fv, why));

    Json even{{"type", "even"}, {"gram", {{2, 1}, {1, 3}}}};
    CHECK_FALSE(recheck_claim(even, why));
    CHECK_FALSE(recheck_claim(Json{{"type", "nonsense"}}, why));
    CHECK_FALSE(recheck_claim(Json{{"type", "norm"}}, why));
}

TEST_CASE("check registry") {
    CHECK(find_check("e8m2-discriminant") != nullptr);
    CHECK(find_check("no-such-check") == nullptr);
    std::set<int> criteria;
    for (const auto& c : check_registry()) criteria.insert(c.criterion);
    CHECK(criteria.size() == 11);

    const auto r = run_check(*find_check("e8m2-discriminant"));
    CHECK(r.status == CheckStatus::pass);
    const Json j = report_to_json(r, false);
    CHECK_FALSE(j.contains("timing_ms"));
    CHECK(report_to_json(r, true).contains("timing_ms"));
    const auto s = recheck_reports(Json::array({j}));
    CHECK(s.claims == r.witnesses.size());
    CHECK(s.failed == 0);
}
