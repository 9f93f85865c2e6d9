#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "lattika/linalg.hpp"

namespace lattika {

// Even integral lattice given by its Gram matrix over a fixed abstract basis.
class Lattice {
public:
    Lattice() = default;

    // Rejects non-symmetric, odd, or degenerate Gram matrices.
    explicit Lattice(IntMatrix gram, std::string label = {});

    // Transient degenerate lattices inside complement/closure computations.
    static Lattice allow_degenerate(IntMatrix gram, std::string label = {});

    std::size_t rank() const { return gram_.rows(); }
    const IntMatrix& gram() const { return gram_; }
    const std::string& label() const { return label_; }
    Lattice with_label(std::string label) const;

    Integer determinant() const { return gram_.determinant(); }
    Signature signature() const { return rational_diagonalize_symmetric(gram_); }
    bool is_nondegenerate() const { return determinant() != 0; }
    bool is_unimodular() const { return abs(determinant()) == 1; }
    bool is_positive_definite() const;
    bool is_negative_definite() const;
    bool is_definite() const { return is_positive_definite() || is_negative_definite(); }

    Integer pair(const IntVector& a, const IntVector& b) const;
    Integer norm(const IntVector& a) const { return pair(a, a); }

    // Positive generator of the ideal {pair(v, x) : x in the lattice}.
    Integer divisibility(const IntVector& v) const;

    bool operator==(const Lattice& o) const { return gram_ == o.gram_; }

private:
    IntMatrix gram_;
    std::string label_;
};

// Coordinates relative to a lattice basis, tied to the lattice they live in.
struct LatticeVector {
    IntVector coords;
    std::shared_ptr<const Lattice> home;

    LatticeVector(IntVector c, std::shared_ptr<const Lattice> h);
};

Integer pair(const LatticeVector& v, const LatticeVector& w);
Integer norm(const LatticeVector& v);
Integer divisibility(const LatticeVector& v);

// Sublattice spanned by the rows of gens (ambient coordinates).
class Sublattice {
public:
    Sublattice(Lattice ambient, IntMatrix gens);

    const Lattice& ambient() const { return ambient_; }
    const IntMatrix& gens() const { return gens_; }
    std::size_t rank() const { return gens_.rows(); }

    // gens * gram * gens^T
    IntMatrix induced_gram() const;

    // Ambient coordinates of the vector with the given sublattice coordinates.
    IntVector to_ambient(const IntVector& sub_coords) const;
    // Sublattice coordinates of an ambient vector, if it lies in the sublattice.
    std::optional<IntVector> to_sub(const IntVector& ambient_coords) const;

    bool contains(const IntVector& ambient_coords) const { return to_sub(ambient_coords).has_value(); }
    bool same_span(const Sublattice& o) const;

private:
    Lattice ambient_;
    IntMatrix gens_;
};

Lattice make_U();
// E8 scaled by scale in {-2,-1,1,2}; basis = simple roots, Dynkin edges
// 1-4, 2-3, 3-4, 4-5, 5-6, 6-7, 7-8 (1-based), Gram = scale * Cartan.
Lattice make_E8(int scale);
Lattice make_rank_one(long n);
Lattice direct_sum(const std::vector<Lattice>& parts, std::string label = {});

// U^3 + E8(-1) + E8(-1) + (-2); the (-2) generator is the last basis vector.
Lattice make_L();
// U^4 + E8(-1)^2
Lattice make_Lambda();
// Basis e1,f1,e2,f2,e3,f3,a1..a8,t: U^3 + E8(-2) + (-2).
Lattice make_M();

// Built-in names: L, Lambda, M, U, E8m1, E8m2, E8p1, E8p2, m2, p2.
Lattice named_lattice(const std::string& name);
std::vector<std::string> named_lattice_names();

// The E8 Cartan matrix in the documented labeling.
IntMatrix e8_cartan();

Sublattice orthogonal_complement(const Sublattice& s);
Sublattice primitive_closure(const Sublattice& s);
bool is_primitive(const Sublattice& s);
bool is_primitive_vector(const IntVector& v);

Lattice sublattice_as_lattice(const Sublattice& s, bool require_nondegenerate = true);

// All vectors of exactly the given norm in a definite lattice, lexicographically
// sorted. Exact rational Cholesky with Fincke-Pohst bounds.
std::vector<IntVector> short_vectors(const Lattice& l, const Integer& target_norm);

// All nonzero vectors with |norm| <= bound, grouped by norm.
std::map<Integer, std::vector<IntVector>> short_vectors_up_to(const Lattice& l, const Integer& abs_bound);

// Count of vectors per norm with |norm| <= bound (zero vector excluded).
std::map<Integer, std::size_t> norm_histogram(const Lattice& l, const Integer& abs_bound);

}  // namespace lattika
