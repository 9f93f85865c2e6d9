#include "lattika/density.hpp"

#include <stdexcept>

#include "lattika/embeddings.hpp"
#include "lattika/involutions.hpp"

namespace lattika {

namespace {

constexpr std::size_t kT = 14;  // index of t in the basis of M

IntVector unit(std::size_t n, std::size_t i) {
    IntVector v(n, Integer(0));
    v[i] = 1;
    return v;
}

IntVector combine(const std::vector<std::pair<Integer, const IntVector*>>& terms) {
    IntVector out(terms.front().second->size(), Integer(0));
    for (const auto& [c, v] : terms)
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += c * (*v)[i];
    return out;
}

IntMatrix rows_of(const std::vector<IntVector>& rows, std::size_t cols) { return IntMatrix::from_rows(rows, cols); }

void ensure(bool ok, const char* what) {
    if (!ok) throw std::logic_error(std::string("decompose_isotropic: ") + what);
}

}  // namespace

IntVector M0Embedding::to_M(const IntVector& ambient) const {
    auto c = m0.to_sub(ambient);
    if (!c) throw std::invalid_argument("vector does not lie in M0");
    return eta.right_mul(*c);
}

IntVector M0Embedding::from_M(const IntVector& m_coords) const { return basis.left_mul(m_coords); }

M0Embedding make_M0_in_L() {
    auto rep = identify_T_swap(make_L(), standard_swap_involution_L());
    if (!rep.matches) throw std::logic_error("make_M0_in_L: " + rep.reason);
    return M0Embedding{rep.t, rep.eta, rep.m_basis};
}

const M0Embedding& standard_M0() {
    static const M0Embedding m0 = make_M0_in_L();
    return m0;
}

IsotropicDecomposition decompose_isotropic(const IntVector& w) {
    const Lattice m = make_M();
    if (w.size() != m.rank()) throw std::invalid_argument("decompose_isotropic: vector of the wrong length");
    if (is_zero(w) || !is_primitive_vector(w)) throw std::invalid_argument("decompose_isotropic: w must be nonzero and primitive");
    if (m.norm(w) != 0) throw std::invalid_argument("decompose_isotropic: w must be isotropic");
    const Integer div = m.divisibility(w);
    EichlerEngine engine(m);
    const IntVector e1 = unit(15, 0), f1 = unit(15, 1), t = unit(15, kT);

    IntVector target;
    std::optional<IntVector> v;
    if (div == 1) {
        target = e1;
    } else if (div == 2) {
        const auto& d = engine.discriminant();
        const Element cls = orbit_descriptor(d, w).disc_class;
        for (const auto& cand : short_vectors(make_E8(-2), -8)) {
            IntVector full(15, Integer(0));
            for (std::size_t i = 0; i < 8; ++i) full[6 + i] = cand[i];
            RatVector half(15, Rational(0));
            for (std::size_t i = 0; i < 15; ++i) half[i] = Rational(full[i], 2);
            if (d.class_of(half) == cls) {
                v = full;
                break;
            }
        }
        ensure(v.has_value(), "no norm -8 vector of E8(-2) represents the class of w/2");
        // c = -8: r = 2 e1 + 2 f1 + v
        target = combine({{2, &e1}, {2, &f1}, {1, &*v}});
    } else {
        throw std::logic_error("decompose_isotropic: divisibility above 2 in a 2-elementary lattice");
    }
    const Isometry g = engine.map(w, target).g;
    const Isometry ginv = g.inverse();

    Sublattice tsub(m, rows_of({ginv.apply(target), ginv.apply(f1)}, 15));
    const IntVector p = ginv.apply(t);
    Sublattice r = orthogonal_complement(tsub);

    // R = <p> + R_p, then R_p = U + R'
    const Lattice r_lat = sublattice_as_lattice(r);
    auto p_in_r = r.to_sub(p);
    ensure(p_in_r.has_value(), "p is not in T^perp");
    Sublattice rp_in_r = orthogonal_complement(Sublattice(r_lat, rows_of({*p_in_r}, r.rank())));
    const IntMatrix rp_rows = rp_in_r.gens() * r.gens();
    const Lattice rp_lat = sublattice_as_lattice(rp_in_r);
    ensure(abs(r_lat.determinant()) == 2 * abs(rp_lat.determinant()), "p does not split off T^perp");
    auto sp = split_off_U(rp_lat);
    ensure(sp.has_value(), "no hyperbolic plane orthogonal to p in T^perp");
    const IntMatrix u_rows = sp->u.gens() * rp_rows;
    Sublattice r_prime(m, sp->rest.gens() * rp_rows);

    ensure(tsub.contains(w), "w is not in T");
    ensure(tsub.induced_gram().determinant() != 0, "form on T is degenerate");
    ensure(m.norm(p) == -2 && m.divisibility(p) == 2, "p is not a 2-divisible (-2) vector");
    ensure(r.rank() + tsub.rank() == m.rank(), "rank of T^perp");

    return IsotropicDecomposition{w, div, tsub, p, r, u_rows.row(0), u_rows.row(1), r_prime, target, v, g};
}

bool splits_orthogonally(const Lattice& l, const IntVector& x) {
    const Integer nx = l.norm(x);
    if (nx == 0 || !is_primitive_vector(x)) return false;
    Sublattice c = orthogonal_complement(Sublattice(l, IntMatrix::from_rows({x}, l.rank())));
    return abs(nx * sublattice_as_lattice(c).determinant()) == abs(l.determinant());
}

SequenceResult norm2k_sequence(const SequenceSpec& spec) {
    if (spec.count == 0) throw std::invalid_argument("norm2k_sequence: count must be positive");
    const auto& m0 = standard_M0();
    const Lattice l = make_L(), m = make_M();
    const IntVector w = m0.to_M(spec.base_w);
    const auto dec = decompose_isotropic(w);
    const bool odd = spec.k % 2 != 0;
    const Integer k(spec.k);

    SequenceResult res;
    res.p_in_L = m0.from_M(dec.p);
    res.p_splits_L = splits_orthogonally(l, res.p_in_L);
    if (spec.k == 0) res.q = res.p_in_L;

    IntVector rest = odd ? combine({{1, &dec.p}, {2, &dec.e}, {Integer((k + 1) / 2), &dec.f}})
                         : combine({{1, &dec.e}, {k, &dec.f}});
    const IntVector rest_l = m0.from_M(rest);
    Integer cmax = 0;
    for (const auto& c : rest_l) cmax = std::max(cmax, Integer(abs(c)));
    res.convergence_constant = odd ? Rational(cmax, 2) : Rational(cmax);

    for (std::size_t n = 1; n <= spec.count; ++n) {
        const Integer scale = odd ? Integer(2 * n) : Integer(n);
        IntVector x = combine({{scale, &w}, {1, &rest}});
        SequenceVector sv;
        sv.coords = m0.from_M(x);
        sv.norm = l.norm(sv.coords);
        sv.primitive = is_primitive_vector(sv.coords);
        sv.div_M = m.divisibility(x);
        sv.div_L = l.divisibility(sv.coords);
        sv.orthogonal_to_q = res.q && l.pair(sv.coords, *res.q) == 0;
        res.vectors.push_back(std::move(sv));
    }
    return res;
}

bool is_exceptional(const IntVector& v) {
    const Lattice l = make_L();
    if (v.size() != l.rank() || is_zero(v) || !is_primitive_vector(v)) return false;
    if (l.norm(v) != -2 || l.divisibility(v) != 2) return false;
    return standard_M0().m0.contains(v);
}

}  // namespace lattika
