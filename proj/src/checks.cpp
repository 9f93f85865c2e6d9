#include "lattika/checks.hpp"

#include <chrono>
#include <random>
#include <set>
#include <sstream>

#include "lattika/density.hpp"
#include "lattika/involutions.hpp"

namespace lattika {

std::string to_string(CheckStatus s) {
    switch (s) {
        case CheckStatus::pass: return "pass";
        case CheckStatus::fail: return "fail";
        case CheckStatus::unknown: return "unknown";
    }
    return "unknown";
}

namespace {

// ---------------------------------------------------------------- claim builders

Json claim_gram(const IntMatrix& gram, const IntMatrix& basis, const IntMatrix& expected) {
    return Json{{"type", "gram"}, {"gram", to_json(gram)}, {"basis", to_json(basis)}, {"expected", to_json(expected)}};
}

Json claim_preserves(const IntMatrix& gram, const IntMatrix& m) {
    return Json{{"type", "preserves"}, {"gram", to_json(gram)}, {"matrix", to_json(m)}};
}

Json claim_sends(const IntMatrix& m, const IntVector& from, const IntVector& to) {
    return Json{{"type", "sends"}, {"matrix", to_json(m)}, {"from", to_json(from)}, {"to", to_json(to)}};
}

Json claim_product(const IntMatrix& a, const IntMatrix& b, const IntMatrix& expected) {
    return Json{{"type", "product"}, {"left", to_json(a)}, {"right", to_json(b)}, {"expected", to_json(expected)}};
}

Json claim_determinant(const IntMatrix& m, const Integer& value) {
    return Json{{"type", "determinant"}, {"matrix", to_json(m)}, {"value", to_json(value)}};
}

Json claim_norm(const IntMatrix& gram, const IntVector& v, const Integer& value) {
    return Json{{"type", "norm"}, {"gram", to_json(gram)}, {"vector", to_json(v)}, {"value", to_json(value)}};
}

Json claim_divisibility(const IntMatrix& gram, const IntVector& v, const Integer& value) {
    return Json{{"type", "divisibility"}, {"gram", to_json(gram)}, {"vector", to_json(v)}, {"value", to_json(value)}};
}

Json claim_form_values(const IntMatrix& gram, const std::vector<RatVector>& lifts, const RatMatrix& q) {
    Json ls = Json::array(), qs = Json::array();
    for (const auto& y : lifts) ls.push_back(to_json(y));
    for (std::size_t i = 0; i < q.rows(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < q.cols(); ++j) row.push_back(to_json(q(i, j)));
        qs.push_back(row);
    }
    return Json{{"type", "form_values"}, {"gram", to_json(gram)}, {"lifts", ls}, {"q", qs}};
}

Json claim_signature(const IntMatrix& gram, const Signature& s) {
    return Json{{"type", "signature"}, {"gram", to_json(gram)}, {"value", {s.n_plus, s.n_minus, s.n_zero}}};
}

Json claim_even(const IntMatrix& gram) { return Json{{"type", "even"}, {"gram", to_json(gram)}}; }

// ---------------------------------------------------------------- helpers

IntVector unit(std::size_t n, std::size_t i) {
    IntVector v(n, Integer(0));
    v[i] = 1;
    return v;
}

RatVector half_of(const IntVector& v) {
    RatVector y;
    for (const auto& c : v) y.push_back(Rational(c, 2));
    for (auto& c : y) c.canonicalize();
    return y;
}

// q values on the classes of a_i/2 in E8(-2): 1 on the diagonal, 1/2 on Dynkin edges.
RatMatrix e8m2_table() {
    const std::vector<std::pair<int, int>> edges = {{0, 3}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {6, 7}};
    RatMatrix t(8, 8);
    for (std::size_t i = 0; i < 8; ++i) t(i, i) = 1;
    for (auto [i, j] : edges) t(i, j) = t(j, i) = Rational(1, 2);
    return t;
}

RatMatrix form_table(const FiniteQuadraticForm& f, const std::vector<Element>& xs) {
    RatMatrix t(xs.size(), xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i)
        for (std::size_t j = 0; j < xs.size(); ++j) t(i, j) = i == j ? f.q(xs[i]) : f.b(xs[i], xs[j]);
    return t;
}

bool same_table(const RatMatrix& a, const RatMatrix& b) {
    if (a.rows() != b.rows()) return false;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (a(i, j) != b(i, j)) return false;
    return true;
}

// 2 * gram^-1, integral exactly when the discriminant group has exponent dividing 2
std::optional<IntMatrix> twice_inverse(const IntMatrix& gram) {
    auto inv = RatMatrix(gram).inverse();
    if (!inv) return std::nullopt;
    RatMatrix h(gram.rows(), gram.cols());
    for (std::size_t i = 0; i < gram.rows(); ++i)
        for (std::size_t j = 0; j < gram.cols(); ++j) h(i, j) = 2 * (*inv)(i, j);
    if (!h.is_integral()) return std::nullopt;
    return h.to_integer();
}

int sig_mod8(const Lattice& l) {
    auto s = l.signature();
    return ((static_cast<int>(s.n_plus) - static_cast<int>(s.n_minus)) % 8 + 8) % 8;
}

IntMatrix block_diagonal(const std::vector<IntMatrix>& blocks) {
    std::size_t n = 0;
    for (const auto& b : blocks) n += b.rows();
    IntMatrix out(n, n);
    std::size_t off = 0;
    for (const auto& b : blocks) {
        for (std::size_t i = 0; i < b.rows(); ++i)
            for (std::size_t j = 0; j < b.cols(); ++j) out(off + i, off + j) = b(i, j);
        off += b.rows();
    }
    return out;
}

struct Outcome {
    CheckReport r;
    std::vector<std::string> problems;
    void require(bool ok, const std::string& what) {
        if (!ok) problems.push_back(what);
    }
    CheckReport finish(std::string summary) {
        r.status = problems.empty() ? CheckStatus::pass : CheckStatus::fail;
        std::ostringstream os;
        os << summary;
        for (const auto& p : problems) os << "; " << p;
        r.detail = os.str();
        return r;
    }
};

// ---------------------------------------------------------------- checks

CheckReport check_e8m2_discriminant() {
    Outcome o;
    auto e = make_E8(-2);
    auto d = discriminant_form(e);
    o.require(d.form.orders() == std::vector<long>(8, 2), "group is not (Z/2)^8");
    std::vector<Element> cls;
    std::vector<RatVector> lifts;
    for (std::size_t i = 0; i < 8; ++i) {
        lifts.push_back(half_of(unit(8, i)));
        cls.push_back(d.class_of(lifts.back()));
    }
    auto table = e8m2_table();
    o.require(same_table(form_table(d.form, cls), table), "form on a_i/2 differs from the tabulated matrix");
    o.require(is_fqf_isometry(FiniteQuadraticForm(std::vector<long>(8, 2), table), d.form, cls),
              "classes a_i/2 do not give an isometry from the tabulated form");
    auto h = twice_inverse(e.gram());
    o.require(h.has_value(), "2 * gram^-1 is not integral");
    o.r.witnesses.push_back(claim_determinant(e.gram(), e.determinant()));
    if (h) o.r.witnesses.push_back(claim_product(e.gram(), *h, IntMatrix::identity(8).scaled(2)));
    o.r.witnesses.push_back(claim_form_values(e.gram(), lifts, table));
    return o.finish("A = (Z/2)^8, |det| = " + Integer(abs(e.determinant())).get_str() + ", form on a_i/2 matches the 8x8 table");
}

CheckReport check_discriminant_L_M() {
    Outcome o;
    auto l = make_L();
    auto dl = discriminant_form(l);
    o.require(dl.form.orders() == std::vector<long>{2}, "A_L is not Z/2");
    RatVector vh = half_of(unit(23, 22));
    o.require(dl.form.q(dl.class_of(vh)) == Rational(3, 2), "q(v/2) is not -1/2 mod 2");
    o.require(gauss_milgram_signature(dl.form) == sig_mod8(l), "Gauss-Milgram signature of A_L");
    RatMatrix ql(1, 1);
    ql(0, 0) = Rational(3, 2);
    o.r.witnesses.push_back(claim_determinant(l.gram(), l.determinant()));
    o.r.witnesses.push_back(claim_form_values(l.gram(), {vh}, ql));

    auto m = make_M();
    auto dm = discriminant_form(m);
    o.require(dm.form.orders() == std::vector<long>(9, 2), "A_M is not (Z/2)^9");
    RatMatrix t(9, 9);
    auto e = e8m2_table();
    for (std::size_t i = 0; i < 8; ++i)
        for (std::size_t j = 0; j < 8; ++j) t(i, j) = e(i, j);
    t(8, 8) = Rational(3, 2);
    std::vector<RatVector> lifts;
    std::vector<Element> imgs;
    for (std::size_t i = 6; i < 15; ++i) {
        lifts.push_back(half_of(unit(15, i)));
        imgs.push_back(dm.class_of(lifts.back()));
    }
    o.require(is_fqf_isometry(FiniteQuadraticForm(std::vector<long>(9, 2), t), dm.form, imgs),
              "A_M is not q_E8(-2) + q' on the classes a_i/2, t/2");
    o.require(gauss_milgram_signature(dm.form) == sig_mod8(m), "Gauss-Milgram signature of A_M");
    auto h = twice_inverse(m.gram());
    o.require(h.has_value(), "2 * gram_M^-1 is not integral");
    o.r.witnesses.push_back(claim_determinant(m.gram(), m.determinant()));
    if (h) o.r.witnesses.push_back(claim_product(m.gram(), *h, IntMatrix::identity(15).scaled(2)));
    o.r.witnesses.push_back(claim_form_values(m.gram(), lifts, t));
    return o.finish("A_L = Z/2 with q = -1/2; A_M = (Z/2)^9 = q_E8(-2) + (q = -1/2); signatures 7 mod 8");
}

CheckReport check_lambda_overlattice() {
    Outcome o;
    auto lx = direct_sum({make_L(), make_rank_one(2)});
    auto dx = discriminant_form(lx);
    std::optional<Subgroup> diag;
    for (const auto& s : isotropic_subgroups(dx.form))
        if (s.size() == 2) diag = s;
    o.require(diag.has_value(), "no isotropic class in A_{L+(2)}");
    if (diag) {
        auto ov = overlattice_from_isotropic(dx, *diag);
        o.require(abs(ov.lattice.determinant()) == 1, "overlattice is not unimodular");
        o.require(ov.lattice.signature() == Signature{4, 20, 0}, "overlattice signature");
        o.r.witnesses.push_back(claim_even(ov.lattice.gram()));
        o.r.witnesses.push_back(claim_determinant(ov.lattice.gram(), ov.lattice.determinant()));
        o.r.witnesses.push_back(claim_signature(ov.lattice.gram(), ov.lattice.signature()));
    }
    auto g = standard_swap_involution_L();
    auto ext = extend_isometry_L_to_Lambda(g);
    const IntMatrix et = ext.emb.gens().transpose();
    o.require(ext.g_bar.matrix() * et == et * g.matrix(), "extension does not restrict to g on L");
    o.r.witnesses.push_back(claim_gram(ext.lambda.gram(), ext.emb.gens(), make_L().gram()));
    o.r.witnesses.push_back(claim_preserves(ext.lambda.gram(), ext.g_bar.matrix()));
    o.r.witnesses.push_back(claim_product(ext.g_bar.matrix(), et, et * g.matrix()));
    o.r.witnesses.push_back(claim_product(et, g.matrix(), et * g.matrix()));
    o.r.witnesses.push_back(claim_signature(ext.lambda.gram(), ext.lambda.signature()));
    return o.finish("L + (2) glued along the diagonal class is even unimodular of signature (4,20); the swap extends");
}

CheckReport check_swap_eigenlattices() {
    Outcome o;
    auto l = make_L();
    auto g = standard_swap_involution_L();
    auto rep = identify_T_swap(l, g);
    o.require(rep.matches, rep.reason);
    if (!rep.matches) return o.finish("T/S identification failed");
    const IntMatrix s_e8 = rep.s_witness->unimodular_inverse().transpose() * rep.s.gens();
    const IntMatrix both = rep.m_basis.vstack(s_e8);
    o.r.witnesses.push_back(claim_gram(l.gram(), rep.m_basis, make_M().gram()));
    o.r.witnesses.push_back(claim_gram(l.gram(), s_e8, make_E8(-2).gram()));
    o.r.witnesses.push_back(claim_gram(l.gram(), both, block_diagonal({make_M().gram(), make_E8(-2).gram()})));
    o.r.witnesses.push_back(claim_product(g.matrix(), rep.m_basis.transpose(), rep.m_basis.transpose()));
    o.r.witnesses.push_back(claim_product(g.matrix(), s_e8.transpose(), -s_e8.transpose()));
    for (const auto& u : rep.u_planes) o.r.witnesses.push_back(claim_gram(l.gram(), u, make_U().gram()));
    return o.finish("S = E8(-2); T = U^3 + E8(-2) + (-2) via three hyperbolic splits and a definite witness");
}

CheckReport check_lambda_quotient_torsion() {
    Outcome o;
    auto ext = extend_isometry_L_to_Lambda(standard_swap_involution_L());
    auto q = eigen_quotient(ext.g_bar);
    o.require(q.exponent == 2, "exponent is " + q.exponent.get_str());
    o.require(q.order == 256, "order is " + q.order.get_str());
    o.require(torsion_exponent_of_quotient(ext.lambda, ext.g_bar) == 2, "torsion exponent");
    auto t = invariant_lattice(ext.g_bar), s = coinvariant_lattice(ext.g_bar);
    // det T * det S = order^2 * det Lambda
    auto dt = sublattice_as_lattice(t).determinant(), ds = sublattice_as_lattice(s).determinant();
    o.require(abs(dt * ds) == q.order * q.order * abs(ext.lambda.determinant()), "determinant bookkeeping");
    const IntMatrix b = t.gens().vstack(s.gens());
    auto c = twice_inverse(b);
    o.require(c.has_value(), "2 Lambda is not inside T + S");
    o.r.witnesses.push_back(claim_determinant(b, b.determinant()));
    if (c) o.r.witnesses.push_back(claim_product(*c, b, IntMatrix::identity(24).scaled(2)));
    o.r.witnesses.push_back(claim_product(ext.g_bar.matrix(), t.gens().transpose(), t.gens().transpose()));
    o.r.witnesses.push_back(claim_product(ext.g_bar.matrix(), s.gens().transpose(), -s.gens().transpose()));
    return o.finish("Lambda / (T + S) = (Z/2)^" + std::to_string(q.invariants.size()) + ", order " + q.order.get_str());
}

CheckReport check_div2_orbits(const Lattice& l, const std::string& name) {
    Outcome o;
    auto cl = classify_primitive_vectors(l, -2);
    o.require(cl.orbits_certified, "orbit computation not certified");
    std::map<std::size_t, std::size_t> rep_of;  // orbit -> first descriptor
    std::set<std::size_t> div2;
    for (std::size_t i = 0; i < cl.descriptors.size(); ++i) {
        rep_of.emplace(cl.orbit_of[i], i);
        if (cl.descriptors[i].div == 2) div2.insert(cl.orbit_of[i]);
    }
    o.require(div2.size() == 1, std::to_string(div2.size()) + " orbits of divisibility-2 norm -2 vectors in " + name);
    // the split orbit: e + e^perp = l
    std::optional<std::size_t> split_orbit;
    for (std::size_t orb : div2) {
        const IntVector& e = cl.witnesses[rep_of[orb]];
        if (!splits_orthogonally(l, e)) continue;
        if (!split_orbit) split_orbit = orb;
        Sublattice comp = orthogonal_complement(Sublattice(l, IntMatrix::from_rows({e}, l.rank())));
        IntMatrix both = IntMatrix::from_rows({e}, l.rank()).vstack(comp.gens());
        o.r.witnesses.push_back(claim_norm(l.gram(), e, -2));
        o.r.witnesses.push_back(claim_divisibility(l.gram(), e, 2));
        o.r.witnesses.push_back(claim_determinant(both, both.determinant()));
        o.r.witnesses.push_back(claim_gram(l.gram(), both, block_diagonal({IntMatrix{{-2}}, comp.induced_gram()})));
    }
    o.require(split_orbit.has_value(), "no divisibility-2 vector splits off " + name);
    std::size_t others = 0;
    for (const auto& [orb, idx] : rep_of) {
        if (split_orbit && orb == *split_orbit) continue;
        ++others;
        const IntVector& w = cl.witnesses[idx];
        Sublattice comp = orthogonal_complement(Sublattice(l, IntMatrix::from_rows({w}, l.rank())));
        auto f = discriminant_form(sublattice_as_lattice(comp)).form;
        o.require(halfness_check(f), "complement of orbit " + std::to_string(orb) + " fails the halfness condition");
        o.r.witnesses.push_back(claim_norm(l.gram(), w, -2));
    }
    return o.finish(name + ": " + std::to_string(cl.descriptors.size()) + " (norm, div, class) triples in " +
                    std::to_string(cl.num_orbits) + " orbits, " + std::to_string(div2.size()) +
                    " with divisibility 2; halfness checked on " + std::to_string(others) + " other orbits");
}

CheckReport check_eichler_maps() {
    Outcome o;
    auto m = make_M();
    EichlerEngine engine(m);
    std::mt19937_64 rng(20240607);
    const std::vector<std::size_t> isotropic = {0, 1, 2, 3, 4, 5};
    std::size_t done = 0, tries = 0;
    while (done < 100 && tries < 10000) {
        ++tries;
        IntVector x(15);
        for (auto& c : x) c = static_cast<long>(rng() % 7) - 3;
        if (is_zero(x) || !is_primitive_vector(x)) continue;
        IntVector y = x;
        for (int step = 0; step < 6; ++step) {
            const std::size_t ei = isotropic[rng() % isotropic.size()];
            const std::size_t partner = ei ^ 1;
            IntVector a(15);
            for (auto& c : a) c = static_cast<long>(rng() % 5) - 2;
            a[ei] = 0;
            a[partner] = 0;
            y = eichler_transvection(m, unit(15, ei), a).apply(y);
        }
        auto res = engine.map(x, y);
        o.require(res.g.apply(x) == y, "g(v) != w for pair " + std::to_string(done));
        o.r.witnesses.push_back(claim_sends(res.g.matrix(), x, y));
        o.r.witnesses.push_back(claim_preserves(m.gram(), res.g.matrix()));
        ++done;
    }
    o.require(done == 100, "only " + std::to_string(done) + " pairs generated");
    return o.finish(std::to_string(done) + " pairs (v, w) with equal invariants connected by Eichler products");
}

CheckReport check_isotropic_decomposition() {
    Outcome o;
    auto m = make_M();
    auto record = [&](const IsotropicDecomposition& d) {
        o.require(d.t.contains(d.w), "w not in T");
        o.require(d.t.induced_gram().determinant() != 0, "T degenerate");
        o.require(m.norm(d.p) == -2 && m.divisibility(d.p) == 2, "p is not a 2-divisible (-2) vector");
        o.require(d.r.contains(d.p) && d.r.contains(d.e) && d.r.contains(d.f), "p, e, f not in T^perp");
        o.r.witnesses.push_back(claim_gram(m.gram(), d.t.gens(), d.t.induced_gram()));
        o.r.witnesses.push_back(claim_determinant(d.t.induced_gram(), d.t.induced_gram().determinant()));
        o.r.witnesses.push_back(claim_norm(m.gram(), d.p, -2));
        o.r.witnesses.push_back(claim_divisibility(m.gram(), d.p, 2));
        IntMatrix upe = IntMatrix::from_rows({d.e, d.f, d.p}, 15);
        o.r.witnesses.push_back(claim_gram(m.gram(), upe, IntMatrix{{0, 1, 0}, {1, 0, 0}, {0, 0, -2}}));
        o.r.witnesses.push_back(claim_product(d.t.gens(), m.gram() * d.r.gens().transpose(), IntMatrix(d.t.rank(), d.r.rank())));
    };
    record(decompose_isotropic(unit(15, 0)));
    auto vs = short_vectors(make_E8(-2), -8);
    IntVector w(15, Integer(0));
    w[0] = 2;
    w[1] = 2;
    for (std::size_t i = 0; i < 8; ++i) w[6 + i] = vs.front()[i];
    auto d2 = decompose_isotropic(w);
    o.require(d2.m == 2, "divisibility-2 witness has divisibility " + d2.m.get_str());
    record(d2);

    // every nonzero isotropic class of A_M comes from v/2 with v in E8(-2), v^2 = -8
    auto dm = discriminant_form(m);
    std::map<std::size_t, IntVector> rep;
    for (const auto& v8 : vs) {
        IntVector v(15, Integer(0));
        for (std::size_t i = 0; i < 8; ++i) v[6 + i] = v8[i];
        rep.emplace(dm.form.index_of(dm.class_of(half_of(v))), v);
    }
    std::size_t isotropic = 0;
    RatMatrix zero(1, 1);
    for (std::size_t idx = 1; idx < dm.form.order_checked(); ++idx) {
        if (dm.form.q(dm.form.element_at(idx)) != 0) continue;
        ++isotropic;
        auto it = rep.find(idx);
        o.require(it != rep.end(), "isotropic class " + std::to_string(idx) + " not represented in the E8(-2) block");
        if (it == rep.end()) continue;
        o.r.witnesses.push_back(claim_norm(m.gram(), it->second, -8));
        o.r.witnesses.push_back(claim_form_values(m.gram(), {half_of(it->second)}, zero));
    }
    o.require(isotropic == 135, std::to_string(isotropic) + " nonzero isotropic classes");
    return o.finish("decompositions for w = e1 and a divisibility-2 w verified; " + std::to_string(isotropic) +
                    " isotropic classes, all v/2 with v in E8(-2) primitive of norm -8");
}

CheckReport check_norm2k_sequences() {
    Outcome o;
    const auto& m0 = standard_M0();
    const Lattice l = make_L();
    const IntVector w0 = m0.from_M(unit(15, 0));
    for (long k : {-2L, -1L, 0L, 1L, 2L, 3L}) {
        auto res = norm2k_sequence({w0, k, 10});
        std::size_t bad_norm = 0, bad_prim = 0, bad_div = 0, bad_perp = 0;
        for (const auto& sv : res.vectors) {
            if (sv.norm != 2 * k) ++bad_norm;
            if (!sv.primitive) ++bad_prim;
            if (k % 2 != 0 && sv.div_L != 2) ++bad_div;
            if (k == 0 && !sv.orthogonal_to_q) ++bad_perp;
            o.r.witnesses.push_back(claim_norm(l.gram(), sv.coords, 2 * k));
            o.r.witnesses.push_back(claim_divisibility(l.gram(), sv.coords, sv.div_L));
        }
        const std::string tag = "k=" + std::to_string(k) + ": ";
        o.require(bad_norm == 0, tag + std::to_string(bad_norm) + " vectors with the wrong norm");
        o.require(bad_prim == 0, tag + std::to_string(bad_prim) + " imprimitive vectors");
        o.require(bad_div == 0, tag + std::to_string(bad_div) + " of 10 vectors not 2-divisible in L");
        o.require(bad_perp == 0, tag + std::to_string(bad_perp) + " vectors not orthogonal to q");
        if (k == 0) {
            o.require(res.q && is_exceptional(*res.q), "q is not an exceptional class");
            if (res.q) {
                o.r.witnesses.push_back(claim_norm(l.gram(), *res.q, -2));
                o.r.witnesses.push_back(claim_divisibility(l.gram(), *res.q, 2));
            }
        }
        if (k % 2 != 0) o.require(res.p_splits_L, tag + "eta^-1(p) does not split off L");
    }
    return o.finish("k in {-2,-1,0,1,2,3}, n = 1..10");
}

CheckReport check_symplectic_conditions() {
    Outcome o;
    auto l = make_L();
    auto sw = standard_swap_involution_L();
    auto cert = nikulin_conditions_report(l, {sw});
    o.require(cert.passed, "swap: " + cert.reason);
    o.require(cert.roots.empty(), "swap: S has norm -2 vectors");
    o.require(cert.minimal_norm == -4 && cert.minimal_count == 240, "swap: minimal vectors of S are not 240 of norm -4");
    o.r.witnesses.push_back(claim_preserves(l.gram(), sw.matrix()));
    o.r.witnesses.push_back(claim_gram(l.gram(), cert.s.gens(), cert.s.induced_gram()));
    o.r.witnesses.push_back(claim_signature(cert.s.induced_gram(), cert.s_signature));

    IntMatrix g = IntMatrix::identity(23);
    for (std::size_t i = 0; i < 2; ++i) {
        g(i, i) = g(2 + i, 2 + i) = 0;
        g(i, 2 + i) = g(2 + i, i) = 1;
    }
    auto uc = nikulin_conditions_report(l, {Isometry(l, g)});
    o.require(!uc.passed && uc.reason.find("not negative definite") != std::string::npos,
              "U-swap counterexample not rejected for indefiniteness: " + uc.reason);
    o.r.witnesses.push_back(claim_signature(uc.s.induced_gram(), uc.s_signature));
    return o.finish("swap: " + cert.reason + "; U-swap: " + uc.reason);
}

bool is_row_hnf(const IntMatrix& h) {
    std::size_t last = 0;
    bool zero_seen = false;
    for (std::size_t i = 0; i < h.rows(); ++i) {
        std::size_t p = 0;
        while (p < h.cols() && h(i, p) == 0) ++p;
        if (p == h.cols()) {
            zero_seen = true;
            continue;
        }
        if (zero_seen || (i > 0 && p <= last) || h(i, p) <= 0) return false;
        for (std::size_t k = 0; k < i; ++k)
            if (h(k, p) < 0 || h(k, p) >= h(i, p)) return false;
        last = p;
    }
    return true;
}

CheckReport check_property_suites() {
    Outcome o;
    std::mt19937_64 rng(7);
    std::size_t bad_hnf = 0, bad_snf = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t r = 1 + rng() % 6, c = 1 + rng() % 6;
        IntMatrix m(r, c);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < c; ++j) m(i, j) = static_cast<long>(rng() % 19) - 9;
        auto h = hermite_normal_form(m);
        if (h.u * m != h.h || abs(h.u.determinant()) != 1 || !is_row_hnf(h.h)) ++bad_hnf;
        auto s = smith_normal_form(m);
        bool ok = s.u * m * s.v == s.d && abs(s.u.determinant()) == 1 && abs(s.v.determinant()) == 1;
        for (std::size_t i = 0; i < r && ok; ++i)
            for (std::size_t j = 0; j < c && ok; ++j) {
                if (i != j && s.d(i, j) != 0) ok = false;
                if (i == j && s.d(i, i) < 0) ok = false;
            }
        const std::size_t n = std::min(r, c);
        for (std::size_t i = 0; i + 1 < n && ok; ++i) {
            if (s.d(i, i) == 0) ok = s.d(i + 1, i + 1) == 0;
            else ok = s.d(i + 1, i + 1) % s.d(i, i) == 0;
        }
        if (!ok) ++bad_snf;
    }
    o.require(bad_hnf == 0, std::to_string(bad_hnf) + " HNF round-trips failed");
    o.require(bad_snf == 0, std::to_string(bad_snf) + " SNF round-trips failed");

    auto l = make_L();
    std::size_t bad_perp = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t k = 1 + rng() % 6;
        IntMatrix g(k, 23);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < 23; ++j) g(i, j) = (rng() % 3 == 0) ? static_cast<long>(rng() % 5) - 2 : 0;
        if (g.rank() == 0) g(0, rng() % 23) = 2;
        Sublattice s(l, hnf_basis(g));
        if (!orthogonal_complement(orthogonal_complement(s)).same_span(primitive_closure(s))) ++bad_perp;
    }
    o.require(bad_perp == 0, std::to_string(bad_perp) + " double complements differ from the primitive closure");

    std::size_t gm = 0;
    for (const auto& name : named_lattice_names()) {
        auto lat = named_lattice(name);
        auto f = discriminant_form(lat).form;
        o.require(gauss_milgram_modulus_holds(f), "Gauss sum modulus fails for " + name);
        o.require(gauss_milgram_signature(f) == sig_mod8(lat), "Gauss-Milgram signature fails for " + name);
        ++gm;
    }

    // roots of E8(-1): Fincke-Pohst enumeration and closure of the simple roots under reflections
    auto e8 = make_E8(-1);
    auto fp = short_vectors(e8, -2);
    std::set<IntVector> orbit, frontier;
    for (std::size_t i = 0; i < 8; ++i) frontier.insert(unit(8, i));
    while (!frontier.empty()) {
        std::set<IntVector> next;
        for (const auto& x : frontier) {
            if (!orbit.insert(x).second) continue;
            for (std::size_t i = 0; i < 8; ++i) {
                // s_i(x) = x - 2 (x, a_i) / (a_i, a_i) a_i = x + (x, a_i) a_i for roots of norm -2
                IntVector y = x;
                y[i] += e8.pair(x, unit(8, i));
                if (!orbit.count(y)) next.insert(y);
            }
        }
        frontier = std::move(next);
    }
    std::set<IntVector> fp_set(fp.begin(), fp.end());
    o.require(fp.size() == 240, "Fincke-Pohst finds " + std::to_string(fp.size()) + " roots");
    o.require(orbit.size() == 240 && orbit == fp_set, "reflection closure finds " + std::to_string(orbit.size()) + " roots");
    for (const auto& x : fp) o.r.witnesses.push_back(claim_norm(e8.gram(), x, -2));
    return o.finish("1000 HNF/SNF round-trips, 200 double complements in L, Gauss-Milgram on " + std::to_string(gm) +
                    " forms, 240 roots of E8(-1) by two enumerations");
}

}  // namespace

const std::vector<CheckInfo>& check_registry() {
    static const std::vector<CheckInfo> reg = {
        {"e8m2-discriminant", "discriminant form of E8(-2)", 1, 1, check_e8m2_discriminant},
        {"discriminant-L-M", "discriminant forms of L and M", 2, 1, check_discriminant_L_M},
        {"lambda-overlattice", "unimodular overlattice of L + (2) and the extended swap", 3, 1, check_lambda_overlattice},
        {"swap-eigenlattices", "T and S of the swap on L", 4, 60, check_swap_eigenlattices},
        {"lambda-quotient-torsion", "Lambda / (T + S) of the extended swap", 5, 5, check_lambda_quotient_torsion},
        {"div2-orbits-M", "norm -2 divisibility-2 orbits in M", 6, 60, [] { return check_div2_orbits(make_M(), "M"); }},
        {"div2-orbits-L", "norm -2 divisibility-2 orbits in L", 6, 60, [] { return check_div2_orbits(make_L(), "L"); }},
        {"eichler-maps", "Eichler maps between vectors with equal invariants in M", 7, 60, check_eichler_maps},
        {"isotropic-decomposition", "decomposition around isotropic vectors of M", 8, 30, check_isotropic_decomposition},
        {"norm2k-sequences", "norm 2k vector sequences in M0", 9, 10, check_norm2k_sequences},
        {"symplectic-conditions", "lattice conditions for the swap and the U-swap", 10, 60, check_symplectic_conditions},
        {"property-suites", "randomized property suites", 11, 300, check_property_suites},
    };
    return reg;
}

const CheckInfo* find_check(const std::string& id) {
    for (const auto& c : check_registry())
        if (c.id == id) return &c;
    return nullptr;
}

CheckReport run_check(const CheckInfo& info) {
    const auto start = std::chrono::steady_clock::now();
    CheckReport r;
    try {
        r = info.run();
    } catch (const GuardExceeded& e) {
        r.status = CheckStatus::unknown;
        r.detail = std::string("guard exceeded: ") + e.what();
    } catch (const std::exception& e) {
        r.status = CheckStatus::fail;
        r.detail = std::string("exception: ") + e.what();
    }
    r.id = info.id;
    r.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    if (r.millis > info.limit_seconds * 1000 && r.status == CheckStatus::pass) {
        r.status = CheckStatus::fail;
        r.detail += "; time limit of " + std::to_string(static_cast<int>(info.limit_seconds)) + " s exceeded";
    }
    return r;
}

Json report_to_json(const CheckReport& r, bool with_timing) {
    Json j{{"check_id", r.id}, {"status", to_string(r.status)}, {"detail", r.detail}, {"witnesses", r.witnesses}};
    if (with_timing) j["timing_ms"] = static_cast<long>(r.millis);
    return j;
}

// ---------------------------------------------------------------- recheck

namespace {

IntMatrix mat(const Json& c, const char* key) { return int_matrix_from_json(c.at(key)); }
IntVector vec(const Json& c, const char* key) { return int_vector_from_json(c.at(key)); }

Rational pair_rat(const IntMatrix& g, const RatVector& x, const RatVector& y) {
    Rational s = 0;
    for (std::size_t i = 0; i < g.rows(); ++i) {
        if (x[i] == 0) continue;
        for (std::size_t j = 0; j < g.cols(); ++j)
            if (y[j] != 0) s += x[i] * Rational(g(i, j)) * y[j];
    }
    return s;
}

}  // namespace

bool recheck_claim(const Json& c, std::string& why) {
    try {
        const std::string type = c.at("type").get<std::string>();
        if (type == "gram") {
            IntMatrix b = mat(c, "basis");
            if (b * mat(c, "gram") * b.transpose() != mat(c, "expected")) return why = "basis Gram differs", false;
        } else if (type == "preserves") {
            IntMatrix m = mat(c, "matrix"), g = mat(c, "gram");
            if (m.transpose() * g * m != g) return why = "matrix does not preserve the Gram matrix", false;
        } else if (type == "sends") {
            if (mat(c, "matrix").right_mul(vec(c, "from")) != vec(c, "to")) return why = "image differs", false;
        } else if (type == "product") {
            if (mat(c, "left") * mat(c, "right") != mat(c, "expected")) return why = "product differs", false;
        } else if (type == "determinant") {
            if (mat(c, "matrix").determinant() != integer_from_json(c.at("value"))) return why = "determinant differs", false;
        } else if (type == "norm") {
            IntVector v = vec(c, "vector");
            if (dot(v, mat(c, "gram").right_mul(v)) != integer_from_json(c.at("value"))) return why = "norm differs", false;
        } else if (type == "divisibility") {
            if (content(mat(c, "gram").right_mul(vec(c, "vector"))) != integer_from_json(c.at("value")))
                return why = "divisibility differs", false;
        } else if (type == "form_values") {
            IntMatrix g = mat(c, "gram");
            std::vector<RatVector> lifts;
            for (const auto& y : c.at("lifts")) lifts.push_back(rat_vector_from_json(y));
            const Json& q = c.at("q");
            for (std::size_t i = 0; i < lifts.size(); ++i)
                for (std::size_t j = 0; j < lifts.size(); ++j) {
                    Rational v = pair_rat(g, lifts[i], lifts[j]);
                    v = mod_rational(v, Rational(i == j ? 2 : 1));
                    if (v != rational_from_json(q.at(i).at(j))) return why = "form value differs", false;
                }
        } else if (type == "signature") {
            auto s = rational_diagonalize_symmetric(mat(c, "gram"));
            const Json& v = c.at("value");
            if (s.n_plus != v.at(0).get<std::size_t>() || s.n_minus != v.at(1).get<std::size_t>() ||
                s.n_zero != v.at(2).get<std::size_t>())
                return why = "signature differs", false;
        } else if (type == "even") {
            IntMatrix g = mat(c, "gram");
            if (!g.is_symmetric()) return why = "Gram matrix not symmetric", false;
            for (std::size_t i = 0; i < g.rows(); ++i)
                if (g(i, i) % 2 != 0) return why = "odd diagonal entry", false;
        } else {
            return why = "unknown claim type " + type, false;
        }
    } catch (const std::exception& e) {
        why = std::string("malformed claim: ") + e.what();
        return false;
    }
    return true;
}

RecheckSummary recheck_reports(const Json& reports) {
    RecheckSummary s;
    const Json list = reports.is_array() ? reports : Json::array({reports});
    for (const auto& r : list) {
        const std::string id = r.value("check_id", std::string("?"));
        if (!r.contains("witnesses")) continue;
        std::size_t k = 0;
        for (const auto& c : r.at("witnesses")) {
            ++s.claims;
            std::string why;
            if (!recheck_claim(c, why)) {
                ++s.failed;
                s.failures.push_back(id + " claim " + std::to_string(k) + ": " + why);
            }
            ++k;
        }
    }
    return s;
}

}  // namespace lattika
