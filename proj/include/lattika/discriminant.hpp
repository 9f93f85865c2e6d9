#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lattika/lattice.hpp"
#include "lattika/linalg.hpp"

namespace lattika {

// Coordinates of a finite-group element with respect to a generator list,
// each reduced modulo the generator's order.
using Element = std::vector<long>;

// Group orders above this are never materialized as value tables.
inline constexpr std::size_t kTableGuard = std::size_t{1} << 16;
// Full isometry backtracking runs only below this order.
inline constexpr std::size_t kIsometrySearchGuard = std::size_t{1} << 8;

class GuardExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Finite abelian group  Z/d_1 + ... + Z/d_k  with a quadratic form valued in
// Q/2Z and bilinear form in Q/Z, stored as the value matrix on generators:
// entry (i,i) = q(g_i) in [0,2), entry (i,j) = b(g_i,g_j) in [0,1).
class FiniteQuadraticForm {
public:
    FiniteQuadraticForm() = default;
    FiniteQuadraticForm(std::vector<long> orders, RatMatrix values);

    const std::vector<long>& orders() const { return orders_; }
    std::size_t num_generators() const { return orders_.size(); }
    const RatMatrix& values() const { return values_; }
    Integer order() const;
    std::size_t order_checked(std::size_t guard = kTableGuard) const;  // throws GuardExceeded

    Rational q(const Element& x) const;                      // in [0,2)
    Rational b(const Element& x, const Element& y) const;    // in [0,1)

    // q = q_num / denominator() with q_num in [0, 2 denominator()), likewise b.
    long denominator() const { return den_; }
    long q_num(const Element& x) const;
    long b_num(const Element& x, const Element& y) const;

    Element zero() const { return Element(orders_.size(), 0); }
    Element reduce(Element x) const;
    Element add(const Element& x, const Element& y) const;
    Element neg(const Element& x) const;
    Element scale(long k, const Element& x) const;
    Element generator(std::size_t i) const;
    long element_order(const Element& x) const;

    // Mixed-radix indexing of all elements (first coordinate fastest).
    std::size_t index_of(const Element& x) const;
    Element element_at(std::size_t index) const;
    std::vector<Element> elements(std::size_t guard = kTableGuard) const;

    FiniteQuadraticForm negated() const;
    bool is_two_elementary() const;

    bool operator==(const FiniteQuadraticForm& o) const;

private:
    std::vector<long> orders_;
    RatMatrix values_;
    long den_ = 1;
    std::vector<long> num_;  // values scaled by den_, row-major
};

// Subgroup given by a generating set, with its sorted element indices.
struct Subgroup {
    std::vector<Element> generators;
    std::vector<std::size_t> elements;  // indices into the ambient form, sorted
    std::size_t size() const { return elements.size(); }
    bool contains(std::size_t index) const;
};

Subgroup span(const FiniteQuadraticForm& f, const std::vector<Element>& gens);
Subgroup trivial_subgroup(const FiniteQuadraticForm& f);
Subgroup orthogonal_subgroup(const FiniteQuadraticForm& f, const Subgroup& h);

// outer / inner as a new form, with the projection from outer elements.
struct Subquotient {
    FiniteQuadraticForm form;
    std::vector<Element> lifts;  // ambient lift of each new generator
    Element project(const Element& ambient) const;

    // internal: basis data for project()
    RatMatrix basis_inverse;
    std::vector<long> ambient_orders;
    std::vector<char> selected;
};
Subquotient subquotient(const FiniteQuadraticForm& f, const Subgroup& outer, const Subgroup& inner);

// Discriminant form of a lattice together with the maps between A_N and N^dual.
struct DiscriminantForm {
    Lattice lattice;
    FiniteQuadraticForm form;
    RatMatrix lifts;        // row i: rational lattice coordinates of generator i
    IntMatrix projection;   // rows of the Smith transform for the nontrivial factors

    bool in_dual(const RatVector& y) const;
    Element class_of(const RatVector& y) const;     // y must lie in the dual lattice
    RatVector lift(const Element& x) const;
};

DiscriminantForm discriminant_form(const Lattice& l);

std::size_t min_generators(const FiniteQuadraticForm& f);

FiniteQuadraticForm fqf_direct_sum(const FiniteQuadraticForm& a, const FiniteQuadraticForm& b);

// Witness for disc(a + b) ~ disc(a) + disc(b): images in disc(a+b) of the
// generators of fqf_direct_sum(disc(a), disc(b)).
std::vector<Element> direct_sum_witness(const Lattice& a, const Lattice& b);

std::vector<Subgroup> isotropic_subgroups(const FiniteQuadraticForm& f);

struct Overlattice {
    Lattice lattice;
    Sublattice inclusion;   // the original lattice inside the overlattice
    RatMatrix basis;        // rows: overlattice basis in original rational coordinates
};

// Overlattice generated by l and lifts of the isotropic subgroup h of disc(l).
Overlattice overlattice_from_isotropic(const Lattice& l, const Subgroup& h);
Overlattice overlattice_from_isotropic(const DiscriminantForm& d, const Subgroup& h);

struct FqfInvariants {
    Integer order;
    IntVector invariant_factors;
    std::map<Rational, std::size_t> histogram;
    int signature_mod8 = 0;
    bool operator==(const FqfInvariants& o) const;
};

FqfInvariants fqf_invariants(const FiniteQuadraticForm& f);

// Exact Gauss sum  sum_a exp(pi i q(a))  in Z[zeta_N]; see gauss_milgram_signature.
struct GaussSum {
    long n = 1;               // cyclotomic level
    IntVector coefficients;   // reduced modulo Phi_n, degree < phi(n)
};
GaussSum gauss_sum(const FiniteQuadraticForm& f);
// Signature mod 8 from the Gauss sum; also checks |sum|^2 == |A| exactly.
int gauss_milgram_signature(const FiniteQuadraticForm& f);
bool gauss_milgram_modulus_holds(const FiniteQuadraticForm& f);

enum class Tri { yes, no, unknown };
std::string to_string(Tri t);

// Per-element invariant: q, order and the multiset of pairs (q(y), b(x,y)).
// Ids are consistent across all forms evaluated with the same table.
using InvariantTable = std::map<std::vector<long>, int>;
std::vector<int> element_invariant_ids(const FiniteQuadraticForm& f, InvariantTable& table);

struct FqfIsometry {
    Tri status = Tri::unknown;
    std::vector<Element> images;   // images of the source generators when status == yes
    std::string reason;
};

// Group isomorphism images check: preserves orders, q and b on every element.
bool is_fqf_isometry(const FiniteQuadraticForm& a, const FiniteQuadraticForm& b, const std::vector<Element>& images);
Element apply_morphism(const FiniteQuadraticForm& a, const FiniteQuadraticForm& b,
                       const std::vector<Element>& images, const Element& x);

// Invariant comparison first, then backtracking for |A| <= kIsometrySearchGuard.
FqfIsometry fqf_isometry_exists(const FiniteQuadraticForm& a, const FiniteQuadraticForm& b);

// Backtracking search for an isometry a -> b sending each fixed.first to
// fixed.second; requires elementary abelian groups when fixed is nonempty.
FqfIsometry find_isometry(const FiniteQuadraticForm& a, const FiniteQuadraticForm& b,
                          const std::vector<std::pair<Element, Element>>& fixed,
                          std::size_t max_order, std::size_t node_budget = 2'000'000);

// Exists some element with q = 1/2 or 3/2.
bool halfness_check(const FiniteQuadraticForm& f);

}  // namespace lattika
