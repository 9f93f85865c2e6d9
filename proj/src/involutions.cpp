#include "lattika/involutions.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <stdexcept>
#include <unordered_set>

#include "lattika/embeddings.hpp"

namespace lattika {

namespace {

void require_finite_order(const Isometry& g) {
    if (!g.order()) throw std::invalid_argument("isometry of infinite or very large order");
}

Integer max_abs_diagonal(const Lattice& l) {
    Integer m = 0;
    for (std::size_t i = 0; i < l.rank(); ++i) m = std::max(m, Integer(abs(l.gram()(i, i))));
    return m;
}

}  // namespace

Sublattice invariant_lattice(const Isometry& g) {
    require_finite_order(g);
    IntMatrix d = g.matrix() - IntMatrix::identity(g.home().rank());
    return Sublattice(g.home(), integer_kernel(d.transpose()));
}

Sublattice coinvariant_lattice(const Isometry& g) { return orthogonal_complement(invariant_lattice(g)); }

Sublattice joint_invariant_lattice(const Lattice& l, const std::vector<Isometry>& gens) {
    const std::size_t n = l.rank();
    if (gens.empty()) return Sublattice(l, IntMatrix::identity(n));
    IntMatrix stacked(0, n);
    for (const auto& g : gens) {
        if (g.home().gram() != l.gram()) throw std::invalid_argument("joint_invariant_lattice: generator on another lattice");
        stacked = stacked.vstack(g.matrix() - IntMatrix::identity(n));
    }
    return Sublattice(l, integer_kernel(stacked.transpose()));
}

Isometry restrict_to(const Isometry& g, const Sublattice& s) {
    const std::size_t k = s.rank();
    IntMatrix r(k, k);
    for (std::size_t i = 0; i < k; ++i) {
        auto c = s.to_sub(g.apply(s.gens().row(i)));
        if (!c) throw std::invalid_argument("restrict_to: sublattice is not stable");
        for (std::size_t j = 0; j < k; ++j) r(j, i) = (*c)[j];
    }
    return Isometry(sublattice_as_lattice(s), r);
}

Isometry standard_swap_involution_L() {
    IntMatrix g = IntMatrix::identity(23);
    for (std::size_t i = 0; i < 8; ++i) {
        g(6 + i, 6 + i) = 0;
        g(14 + i, 14 + i) = 0;
        g(6 + i, 14 + i) = 1;
        g(14 + i, 6 + i) = 1;
    }
    return Isometry(make_L(), g);
}

EigenQuotient eigen_quotient(const Isometry& g) {
    auto t = invariant_lattice(g);
    auto s = orthogonal_complement(t);
    IntMatrix both = t.gens().vstack(s.gens());
    EigenQuotient q;
    q.order = 1;
    q.exponent = 1;
    for (const auto& d : elementary_divisors(both)) {
        if (d == 0) throw std::logic_error("eigen_quotient: T + S is not of full rank");
        if (d == 1) continue;
        q.invariants.push_back(d);
        q.order *= d;
        q.exponent = lcm(q.exponent, d);
    }
    return q;
}

Integer torsion_exponent_of_quotient(const Lattice& l, const Isometry& g) {
    if (g.home().gram() != l.gram()) throw std::invalid_argument("torsion_exponent_of_quotient: isometry of another lattice");
    if (!g.compose(g).is_identity()) throw std::invalid_argument("torsion_exponent_of_quotient: not an involution");
    Integer e = eigen_quotient(g).exponent;
    if (2 % e != 0) throw std::logic_error("quotient by T + S of an involution must be 2-torsion");
    return e;
}

// ---------------------------------------------------------------- definite isometry testing

namespace {

struct DefiniteSearch {
    const Lattice& src;
    const Lattice& dst;
    std::vector<const std::vector<IntVector>*> candidates;  // per source basis vector
    std::vector<IntVector> images;
    std::vector<IntVector> images_gram;  // dst.gram() * image
    std::size_t nodes = 0;

    bool run(std::size_t level) {
        if (level == src.rank()) return true;
        for (const auto& c : *candidates[level]) {
            if (++nodes > kDefiniteNodeBudget) throw GuardExceeded("definite isometry search exceeded its node budget");
            bool ok = true;
            for (std::size_t j = 0; j < level && ok; ++j) ok = dot(c, images_gram[j]) == src.gram()(level, j);
            if (!ok) continue;
            images.push_back(c);
            images_gram.push_back(dst.gram().right_mul(c));
            if (run(level + 1)) return true;
            images.pop_back();
            images_gram.pop_back();
        }
        return false;
    }
};

}  // namespace

std::optional<IntMatrix> is_isometric_definite(const Lattice& a, const Lattice& b) {
    if (!a.is_definite() || !b.is_definite()) throw std::invalid_argument("is_isometric_definite: indefinite input");
    if (a.rank() != b.rank()) return std::nullopt;
    if (a.rank() > kDefiniteRankGuard) throw GuardExceeded("is_isometric_definite: rank above 12");
    if (a.determinant() != b.determinant() || a.signature() != b.signature()) return std::nullopt;
    if (norm_histogram(a, 8) != norm_histogram(b, 8)) return std::nullopt;

    // map the basis with the shorter vectors, then invert if needed
    const bool swapped = max_abs_diagonal(a) > max_abs_diagonal(b);
    const Lattice& src = swapped ? b : a;
    const Lattice& dst = swapped ? a : b;
    std::map<Integer, std::vector<IntVector>> by_norm;
    DefiniteSearch s{src, dst, {}, {}, {}, 0};
    for (std::size_t i = 0; i < src.rank(); ++i) {
        const Integer& nm = src.gram()(i, i);
        auto it = by_norm.find(nm);
        if (it == by_norm.end()) it = by_norm.emplace(nm, short_vectors(dst, nm)).first;
        s.candidates.push_back(&it->second);
    }
    if (!s.run(0)) return std::nullopt;
    IntMatrix u(src.rank(), src.rank());
    for (std::size_t j = 0; j < src.rank(); ++j)
        for (std::size_t i = 0; i < src.rank(); ++i) u(i, j) = s.images[j][i];
    if (swapped) u = u.unimodular_inverse();
    if (u.transpose() * b.gram() * u != a.gram()) throw std::logic_error("is_isometric_definite: witness fails verification");
    return u;
}

// ---------------------------------------------------------------- the swap on L

TSwapReport identify_T_swap(const Lattice& l, const Isometry& g) {
    if (g.home().gram() != l.gram()) throw std::invalid_argument("identify_T_swap: isometry of another lattice");
    auto t = invariant_lattice(g);
    auto s = orthogonal_complement(t);
    TSwapReport rep{false, {}, t, s, {}, {}, {}, {}, {}, std::nullopt};
    if (t.rank() != 15 || s.rank() != 8) {
        rep.reason = "invariant rank " + std::to_string(t.rank()) + " and coinvariant rank " + std::to_string(s.rank()) +
                     ", expected 15 and 8";
        return rep;
    }
    Lattice s_lat = sublattice_as_lattice(s);
    if (s_lat.is_negative_definite()) rep.s_witness = is_isometric_definite(s_lat, make_E8(-2));

    Lattice cur = sublattice_as_lattice(t);
    IntMatrix embed = t.gens();
    for (int step = 0; step < 3; ++step) {
        auto sp = split_off_U(cur);
        if (!sp) {
            rep.reason = "no hyperbolic plane found at split " + std::to_string(step + 1);
            return rep;
        }
        rep.u_planes.push_back(sp->u.gens() * embed);
        embed = sp->rest.gens() * embed;
        cur = sublattice_as_lattice(sp->rest);
    }
    rep.rest = embed;
    if (!cur.is_negative_definite()) {
        rep.reason = "rest after three splits is not negative definite";
        return rep;
    }
    Lattice target = direct_sum({make_E8(-2), make_rank_one(-2)});
    auto w = is_isometric_definite(cur, target);
    if (!w) {
        rep.reason = "rank-9 rest is not isometric to E8(-2) + (-2)";
        return rep;
    }
    rep.rest_witness = *w;
    IntMatrix basis = rep.u_planes[0].vstack(rep.u_planes[1]).vstack(rep.u_planes[2]);
    basis = basis.vstack(w->unimodular_inverse().transpose() * embed);
    if (basis * l.gram() * basis.transpose() != make_M().gram())
        throw std::logic_error("identify_T_swap: assembled basis does not have the Gram matrix of M");
    rep.m_basis = basis;
    IntMatrix in_t(15, 15);
    for (std::size_t i = 0; i < 15; ++i) in_t.set_row(i, *t.to_sub(basis.row(i)));
    rep.eta = in_t.transpose().unimodular_inverse();
    if (!rep.s_witness) {
        rep.reason = "coinvariant lattice is not isometric to E8(-2)";
        return rep;
    }
    rep.matches = true;
    rep.reason = "T = U^3 + E8(-2) + (-2), S = E8(-2)";
    return rep;
}

// ---------------------------------------------------------------- discriminant action

bool DiscriminantAction::is_identity() const {
    for (std::size_t i = 0; i < images.size(); ++i)
        if (images[i] != disc.form.generator(i)) return false;
    return true;
}

DiscriminantAction induced_discriminant_action(const Isometry& g) {
    DiscriminantAction act{discriminant_form(g.home()), {}};
    RatMatrix m(g.matrix());
    for (std::size_t i = 0; i < act.disc.form.num_generators(); ++i)
        act.images.push_back(act.disc.class_of(m.right_mul(act.disc.lifts.row(i))));
    if (!is_fqf_isometry(act.disc.form, act.disc.form, act.images))
        throw std::logic_error("induced_discriminant_action: induced map is not an isometry");
    return act;
}

// ---------------------------------------------------------------- Nikulin conditions

namespace {

std::size_t group_closure_order(const Lattice& l, const std::vector<Isometry>& gens) {
    std::unordered_set<std::string> seen;
    std::deque<IntMatrix> queue;
    IntMatrix id = IntMatrix::identity(l.rank());
    seen.insert(id.to_string());
    queue.push_back(id);
    while (!queue.empty()) {
        IntMatrix cur = queue.front();
        queue.pop_front();
        for (const auto& g : gens) {
            IntMatrix next = g.matrix() * cur;
            if (seen.insert(next.to_string()).second) {
                if (seen.size() > kGroupClosureGuard) throw GuardExceeded("group closure exceeded 10^4 elements");
                queue.push_back(std::move(next));
            }
        }
    }
    return seen.size();
}

}  // namespace

NikulinCertificate nikulin_conditions_report(const Lattice& l, const std::vector<Isometry>& gens) {
    NikulinCertificate cert{false, {}, group_closure_order(l, gens), orthogonal_complement(joint_invariant_lattice(l, gens)),
                            {}, false, {}, 0, 0, false};
    if (cert.s.rank() == 0) {
        cert.passed = cert.negative_definite = cert.trivial_on_discriminant = true;
        cert.reason = "coinvariant lattice has rank 0";
        return cert;
    }
    Lattice s_lat = sublattice_as_lattice(cert.s);
    cert.s_signature = s_lat.signature();
    cert.negative_definite = cert.s_signature.n_plus == 0 && cert.s_signature.n_zero == 0;
    if (!cert.negative_definite) {
        cert.reason = "coinvariant lattice is not negative definite, signature (" + std::to_string(cert.s_signature.n_plus) +
                      "," + std::to_string(cert.s_signature.n_minus) + ")";
        return cert;
    }
    for (const auto& v : short_vectors(s_lat, -2)) cert.roots.push_back(cert.s.to_ambient(v));
    for (Integer bound = 2;; bound += 2) {
        auto hist = norm_histogram(s_lat, bound);
        if (!hist.empty()) {
            cert.minimal_norm = hist.rbegin()->first;
            cert.minimal_count = hist.rbegin()->second;
            break;
        }
    }
    cert.trivial_on_discriminant = true;
    for (const auto& g : gens)
        if (!induced_discriminant_action(restrict_to(g, cert.s)).is_identity()) cert.trivial_on_discriminant = false;
    if (!cert.roots.empty()) {
        cert.reason = "coinvariant lattice contains " + std::to_string(cert.roots.size()) + " vectors of norm -2";
    } else if (!cert.trivial_on_discriminant) {
        cert.reason = "group acts nontrivially on the discriminant of the coinvariant lattice";
    } else {
        cert.passed = true;
        cert.reason = "negative definite, no vectors of norm -2, trivial action on the discriminant";
    }
    return cert;
}

}  // namespace lattika
