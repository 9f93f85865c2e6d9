#include "lattika/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace lattika {

namespace {

void check_symmetric_even(const IntMatrix& gram) {
    if (!gram.is_symmetric()) throw std::invalid_argument("Gram matrix is not symmetric");
    for (std::size_t i = 0; i < gram.rows(); ++i)
        if (gram(i, i) % 2 != 0) throw std::invalid_argument("Gram matrix has an odd diagonal entry (lattice not even)");
}

}  // namespace

Lattice::Lattice(IntMatrix gram, std::string label) : gram_(std::move(gram)), label_(std::move(label)) {
    check_symmetric_even(gram_);
    if (gram_.rows() > 0 && gram_.determinant() == 0) throw std::invalid_argument("Gram matrix is degenerate");
}

Lattice Lattice::allow_degenerate(IntMatrix gram, std::string label) {
    check_symmetric_even(gram);
    Lattice l;
    l.gram_ = std::move(gram);
    l.label_ = std::move(label);
    return l;
}

Lattice Lattice::with_label(std::string label) const {
    Lattice l = *this;
    l.label_ = std::move(label);
    return l;
}

bool Lattice::is_positive_definite() const {
    auto s = signature();
    return s.n_minus == 0 && s.n_zero == 0;
}

bool Lattice::is_negative_definite() const {
    auto s = signature();
    return s.n_plus == 0 && s.n_zero == 0;
}

Integer Lattice::pair(const IntVector& a, const IntVector& b) const {
    if (a.size() != rank() || b.size() != rank()) throw std::invalid_argument("pair: vector length does not match rank");
    return dot(gram_.left_mul(a), b);
}

Integer Lattice::divisibility(const IntVector& v) const {
    if (v.size() != rank()) throw std::invalid_argument("divisibility: vector length does not match rank");
    if (is_zero(v)) throw std::invalid_argument("divisibility of the zero vector");
    Integer d = content(gram_.left_mul(v));
    if (d == 0) throw std::invalid_argument("divisibility: vector lies in the radical");
    return d;
}

LatticeVector::LatticeVector(IntVector c, std::shared_ptr<const Lattice> h) : coords(std::move(c)), home(std::move(h)) {
    if (!home) throw std::invalid_argument("LatticeVector without home lattice");
    if (coords.size() != home->rank()) throw std::invalid_argument("LatticeVector length does not match home rank");
}

namespace {
void check_same_home(const LatticeVector& v, const LatticeVector& w) {
    if (v.home != w.home && !(*v.home == *w.home)) throw std::invalid_argument("vectors live in different lattices");
}
}  // namespace

Integer pair(const LatticeVector& v, const LatticeVector& w) {
    check_same_home(v, w);
    return v.home->pair(v.coords, w.coords);
}

Integer norm(const LatticeVector& v) { return v.home->norm(v.coords); }

Integer divisibility(const LatticeVector& v) { return v.home->divisibility(v.coords); }

// ---------------------------------------------------------------- Sublattice

Sublattice::Sublattice(Lattice ambient, IntMatrix gens) : ambient_(std::move(ambient)), gens_(std::move(gens)) {
    if (gens_.rows() == 0) gens_ = IntMatrix(0, ambient_.rank());
    if (gens_.cols() != ambient_.rank()) throw std::invalid_argument("Sublattice: generator length does not match ambient rank");
    if (gens_.rank() != gens_.rows()) throw std::invalid_argument("Sublattice: generators are not linearly independent");
}

IntMatrix Sublattice::induced_gram() const { return gens_ * ambient_.gram() * gens_.transpose(); }

IntVector Sublattice::to_ambient(const IntVector& sub_coords) const { return gens_.left_mul(sub_coords); }

std::optional<IntVector> Sublattice::to_sub(const IntVector& ambient_coords) const {
    if (rank() == 0) {
        if (is_zero(ambient_coords)) return IntVector{};
        return std::nullopt;
    }
    return solve_integer(gens_, ambient_coords);
}

bool Sublattice::same_span(const Sublattice& o) const { return hnf_basis(gens_) == hnf_basis(o.gens_); }

// ---------------------------------------------------------------- named lattices

IntMatrix e8_cartan() {
    IntMatrix c(8, 8);
    for (std::size_t i = 0; i < 8; ++i) c(i, i) = 2;
    const std::pair<int, int> edges[] = {{0, 3}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {6, 7}};
    for (auto [a, b] : edges) c(a, b) = c(b, a) = -1;
    return c;
}

Lattice make_U() { return Lattice(IntMatrix{{0, 1}, {1, 0}}, "U"); }

Lattice make_E8(int scale) {
    if (scale != -2 && scale != -1 && scale != 1 && scale != 2)
        throw std::invalid_argument("make_E8: scale must be one of -2, -1, 1, 2");
    std::string label = "E8(" + std::to_string(scale) + ")";
    return Lattice(e8_cartan().scaled(Integer(scale)), label);
}

Lattice make_rank_one(long n) {
    if (n == 0 || n % 2 != 0) throw std::invalid_argument("make_rank_one: n must be even and nonzero");
    return Lattice(IntMatrix{{n}}, "(" + std::to_string(n) + ")");
}

Lattice direct_sum(const std::vector<Lattice>& parts, std::string label) {
    std::size_t n = 0;
    for (const auto& p : parts) n += p.rank();
    IntMatrix g(n, n);
    std::size_t off = 0;
    std::string auto_label;
    for (const auto& p : parts) {
        for (std::size_t i = 0; i < p.rank(); ++i)
            for (std::size_t j = 0; j < p.rank(); ++j) g(off + i, off + j) = p.gram()(i, j);
        off += p.rank();
        if (!auto_label.empty()) auto_label += "+";
        auto_label += p.label();
    }
    if (label.empty()) label = auto_label;
    if (n == 0) return Lattice::allow_degenerate(IntMatrix(0, 0), label);
    return Lattice(std::move(g), std::move(label));
}

Lattice make_L() {
    auto u = make_U();
    auto e8 = make_E8(-1);
    return direct_sum({u, u, u, e8, e8, make_rank_one(-2)}, "L");
}

Lattice make_Lambda() {
    auto u = make_U();
    auto e8 = make_E8(-1);
    return direct_sum({u, u, u, u, e8, e8}, "Lambda");
}

Lattice make_M() {
    auto u = make_U();
    return direct_sum({u, u, u, make_E8(-2), make_rank_one(-2)}, "M");
}

std::vector<std::string> named_lattice_names() {
    return {"L", "Lambda", "M", "U", "E8m1", "E8m2", "E8p1", "E8p2", "m2", "p2"};
}

Lattice named_lattice(const std::string& name) {
    if (name == "L") return make_L();
    if (name == "Lambda") return make_Lambda();
    if (name == "M") return make_M();
    if (name == "U") return make_U();
    if (name == "E8m1") return make_E8(-1).with_label("E8m1");
    if (name == "E8m2") return make_E8(-2).with_label("E8m2");
    if (name == "E8p1") return make_E8(1).with_label("E8p1");
    if (name == "E8p2") return make_E8(2).with_label("E8p2");
    if (name == "m2") return make_rank_one(-2).with_label("m2");
    if (name == "p2") return make_rank_one(2).with_label("p2");
    throw std::invalid_argument("unknown built-in lattice '" + name + "'");
}

// ---------------------------------------------------------------- sublattices

Sublattice orthogonal_complement(const Sublattice& s) {
    const Lattice& amb = s.ambient();
    if (s.rank() == 0) return Sublattice(amb, IntMatrix::identity(amb.rank()));
    // x with x * gram * gens^T == 0
    IntMatrix pairing = amb.gram() * s.gens().transpose();
    return Sublattice(amb, integer_kernel(pairing));
}

Sublattice primitive_closure(const Sublattice& s) { return Sublattice(s.ambient(), saturate_rows(s.gens())); }

bool is_primitive(const Sublattice& s) { return hnf_basis(s.gens()) == saturate_rows(s.gens()); }

bool is_primitive_vector(const IntVector& v) { return content(v) == 1; }

Lattice sublattice_as_lattice(const Sublattice& s, bool require_nondegenerate) {
    IntMatrix g = s.induced_gram();
    if (require_nondegenerate) return Lattice(std::move(g), s.ambient().label() + "/sub");
    return Lattice::allow_degenerate(std::move(g), s.ambient().label() + "/sub");
}

// ---------------------------------------------------------------- enumeration

namespace {

// floor(c + sqrt(r)) for r >= 0, exactly.
Integer floor_plus_sqrt(const Rational& c, const Rational& r) {
    double approx = c.get_d() + std::sqrt(std::max(0.0, r.get_d()));
    Integer k(std::floor(approx));
    auto le = [&](const Integer& x) {  // x <= c + sqrt(r)
        Rational d = Rational(x) - c;
        return d <= 0 || d * d <= r;
    };
    while (le(k + 1)) ++k;
    while (!le(k)) --k;
    return k;
}

// Fincke-Pohst enumeration of all x with 0 < Q(x) <= bound, Q positive definite.
void enumerate_box(const IntMatrix& posdef, const Integer& bound,
                   const std::function<void(const IntVector&, const Integer&)>& visit) {
    const std::size_t n = posdef.rows();
    if (n == 0) return;
    RatMatrix q(posdef);
    for (std::size_t i = 0; i < n; ++i) {
        if (q(i, i) <= 0) throw std::invalid_argument("enumerate: form is not positive definite");
        for (std::size_t j = i + 1; j < n; ++j) {
            q(j, i) = q(i, j);
            q(i, j) = q(i, j) / q(i, i);
        }
        for (std::size_t k = i + 1; k < n; ++k)
            for (std::size_t l = k; l < n; ++l) q(k, l) -= q(k, i) * q(i, l);
    }

    IntVector x(n, Integer(0));
    std::vector<Rational> remaining(n + 1);
    remaining[n] = Rational(bound);
    std::function<void(std::size_t)> rec = [&](std::size_t level) {
        const std::size_t i = level - 1;
        Rational center = 0;
        for (std::size_t j = i + 1; j < n; ++j) center -= q(i, j) * x[j];
        Rational r = remaining[level] / q(i, i);
        Integer hi = floor_plus_sqrt(center, r);
        Integer lo = -floor_plus_sqrt(-center, r);
        for (Integer v = lo; v <= hi; ++v) {
            x[i] = v;
            Rational d = Rational(v) - center;
            remaining[i] = remaining[level] - q(i, i) * d * d;
            if (i == 0) {
                if (!is_zero(x)) visit(x, bound - floor_rational(remaining[0]));
            } else {
                rec(i);
            }
        }
        x[i] = 0;
    };
    rec(n);
}

int definite_sign(const Lattice& l) {
    if (l.is_positive_definite()) return 1;
    if (l.is_negative_definite()) return -1;
    throw std::invalid_argument("short vector enumeration needs a definite lattice");
}

}  // namespace

std::map<Integer, std::vector<IntVector>> short_vectors_up_to(const Lattice& l, const Integer& abs_bound) {
    std::map<Integer, std::vector<IntVector>> out;
    if (l.rank() == 0 || abs_bound <= 0) return out;
    const int sign = definite_sign(l);
    IntMatrix pos = l.gram().scaled(Integer(sign));
    enumerate_box(pos, abs_bound, [&](const IntVector& x, const Integer&) {
        Integer nrm = l.norm(x);
        if (abs(nrm) <= abs_bound) out[nrm].push_back(x);
    });
    for (auto& [k, vs] : out) std::sort(vs.begin(), vs.end());
    return out;
}

std::vector<IntVector> short_vectors(const Lattice& l, const Integer& target_norm) {
    if (l.rank() != 0) {
        const int sign = definite_sign(l);
        if (target_norm == 0 || sgn(target_norm) != sign) return {};
    }
    auto all = short_vectors_up_to(l, abs(target_norm));
    auto it = all.find(target_norm);
    if (it == all.end()) return {};
    return it->second;
}

std::map<Integer, std::size_t> norm_histogram(const Lattice& l, const Integer& abs_bound) {
    std::map<Integer, std::size_t> h;
    for (const auto& [k, vs] : short_vectors_up_to(l, abs_bound)) h[k] = vs.size();
    return h;
}

}  // namespace lattika
